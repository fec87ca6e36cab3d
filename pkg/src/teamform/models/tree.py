from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

from ..common import MatchingError


@dataclass(frozen=True, order=True)
class IndexSet:
    """Sorted set of indexes j with (ℓ_j, f_j) missing from a deficit-1 matching of G_n.

    The empty set stands for the stable matching M*_n.
    """

    n: int
    indexes: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        ordered = tuple(sorted(set(self.indexes)))
        if len(ordered) != len(self.indexes):
            raise MatchingError("index set has repeated entries", {"indexes": list(self.indexes)})
        if ordered and (ordered[0] < 1 or ordered[-1] > self.n):
            raise MatchingError(f"index set entries must lie in [1, {self.n}]", {"indexes": list(ordered)})
        object.__setattr__(self, "indexes", ordered)

    @classmethod
    def of(cls, n: int, indexes: Iterable[int]) -> "IndexSet":
        return cls(n, tuple(sorted(indexes)))

    @property
    def is_empty(self) -> bool:
        return not self.indexes

    def min(self) -> int:
        return self.indexes[0]

    def max(self) -> int:
        return self.indexes[-1]

    @property
    def height(self) -> int:
        """h(M): second-largest index when |I| ≥ 2, else 0."""
        return self.indexes[-2] if len(self.indexes) >= 2 else 0

    def with_index(self, k: int) -> "IndexSet":
        return IndexSet.of(self.n, self.indexes + (k,))

    def without_min(self) -> "IndexSet":
        return IndexSet(self.n, self.indexes[1:])

    def __len__(self) -> int:
        return len(self.indexes)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indexes)

    def __contains__(self, item: object) -> bool:
        return item in self.indexes

    def __str__(self) -> str:
        return "{" + ",".join(str(i) for i in self.indexes) + "}"


@dataclass
class TreeNode:
    id: int
    label: int
    parent: Optional[int]
    depth: int
    children: List[int] = field(default_factory=list)


class LabeledTree:
    """The rooted tree T*_m; node 0 is the root r* labeled m + 1.

    A node is identified by the labels on its path from r* (root excluded), e.g.
    ``(m,)`` is the root's only child and ``(m, 3, 1)`` a node two levels below it.
    """

    def __init__(self, m: int):
        self.m = m
        self.nodes: List[TreeNode] = []
        self._by_path: Dict[Tuple[int, ...], int] = {}
        self._paths: List[Tuple[int, ...]] = []
        root = self._add(label=m + 1, parent=None, path=())
        self._grow(m, parent=root, path=())
        self.neighbors: Tuple[Tuple[int, ...], ...] = tuple(
            tuple(([node.parent] if node.parent is not None else []) + node.children) for node in self.nodes
        )

    def _add(self, label: int, parent: Optional[int], path: Tuple[int, ...]) -> int:
        depth = 0 if parent is None else self.nodes[parent].depth + 1
        node = TreeNode(id=len(self.nodes), label=label, parent=parent, depth=depth)
        self.nodes.append(node)
        self._by_path[path] = node.id
        self._paths.append(path)
        if parent is not None:
            self.nodes[parent].children.append(node.id)
        return node.id

    def _grow(self, label: int, parent: int, path: Tuple[int, ...]) -> None:
        # Iterative copy of T_label under parent: children of a label-i node are T_1..T_{i-1}.
        stack = [(label, parent, path)]
        while stack:
            current, above, prefix = stack.pop()
            here = prefix + (current,)
            node = self._add(label=current, parent=above, path=here)
            for child in range(current - 1, 0, -1):
                stack.append((child, node, here))

    @property
    def root(self) -> int:
        return 0

    def __len__(self) -> int:
        return len(self.nodes)

    def node_by_path(self, labels: Iterable[int]) -> int:
        key = tuple(labels)
        try:
            return self._by_path[key]
        except KeyError:
            raise MatchingError(f"no node of T*_{self.m} has root path {key}", {"path": list(key)})

    def path_of(self, node: int) -> Tuple[int, ...]:
        return self._paths[node]

    def label(self, node: int) -> int:
        return self.nodes[node].label

    def degree(self, node: int) -> int:
        return len(self.neighbors[node])

    def adjacent(self, a: int, b: int) -> bool:
        return self.nodes[a].parent == b or self.nodes[b].parent == a
