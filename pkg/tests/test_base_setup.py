import unittest
from pathlib import Path

from dotenv import load_dotenv

from src.teamform import TeamLab, load_settings


def load_env():
    """Load environment variables from .env file."""
    root_env = Path(__file__).parent.parent / ".env"
    if root_env.exists():
        load_dotenv(root_env)
    else:
        example_env = Path(__file__).parent.parent / ".env.example"
        if example_env.exists():
            load_dotenv(example_env)


class TestBase(unittest.TestCase):
    """Base test class with a lab whose protocol defaults are pinned."""

    @classmethod
    def setUpClass(cls):
        """Set up test environment."""
        load_env()
        # log level and workers come from the environment; seed and protocol
        # parameters are pinned so results do not depend on a local .env
        cls.settings = load_settings(overrides={"seed": 0, "p": 1.0, "q": 1.0, "max_rounds": 10**6})

    def setUp(self):
        """Set up test lab."""
        self.lab = TeamLab(self.settings)
