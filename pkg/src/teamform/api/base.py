from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from ..lab import TeamLab


class BaseAPI:
    """Base class for all lab endpoints."""

    def __init__(self, lab: "TeamLab"):
        self.lab = lab
