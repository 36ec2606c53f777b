"""Criteria trees: per-group solves, global weight composition and ranking."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .judgments import FuzzyComparisonMatrix
from .solver import SolverConfig, solve


class HierarchyError(ValueError):
    pass


class MissingMatrix(HierarchyError):
    pass


class ChildMismatch(HierarchyError):
    pass


class MissingWeight(HierarchyError):
    pass


@dataclass(frozen=True)
class CriterionNode:
    id: str
    label: str = ""
    children: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        seen = set()
        for node in self.walk():
            if node.id in seen:
                raise HierarchyError(f"duplicate node id {node.id!r}")
            seen.add(node.id)

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def child_ids(self) -> tuple:
        return tuple(c.id for c in self.children)

    def walk(self) -> Iterator["CriterionNode"]:
        """Pre-order traversal, root first, children in declaration order."""
        yield self
        for child in self.children:
            yield from child.walk()

    def leaves(self) -> list:
        return [n for n in self.walk() if n.is_leaf]

    def parents(self) -> list:
        return [n for n in self.walk() if n.children]

    def find(self, node_id: str) -> "CriterionNode":
        for node in self.walk():
            if node.id == node_id:
                return node
        raise KeyError(node_id)

    def paths(self) -> Iterator[tuple]:
        """``(leaf, ancestors)`` for every leaf; ancestors exclude the root."""
        def rec(node, trail):
            if node.is_leaf:
                yield node, trail
            for child in node.children:
                yield from rec(child, trail + (node,) if node is not self else trail)
        yield from rec(self, ())

    def parent_of(self) -> dict:
        return {c.id: n.id for n in self.walk() for c in n.children}


def solve_hierarchy(root: CriterionNode, matrices: Mapping[str, FuzzyComparisonMatrix],
                    config: SolverConfig | None = None, executor=None):
    """Local weight of every non-root node and the consistency index of every group.

    Singleton groups get local weight 1 and index 1 without a matrix.
    ``executor``, if given, is a ``concurrent.futures`` executor used to
    solve groups concurrently.
    """
    config = config or SolverConfig()
    jobs = []
    local, lambdas = {}, {}
    for parent in root.parents():
        if len(parent.children) == 1:
            local[parent.children[0].id] = 1.0
            lambdas[parent.id] = 1.0
            continue
        if parent.id not in matrices:
            raise MissingMatrix(f"no comparison matrix for group {parent.id!r}")
        mat = matrices[parent.id]
        if tuple(mat.item_ids) != parent.child_ids:
            raise ChildMismatch(f"matrix for {parent.id!r} covers {tuple(mat.item_ids)}, "
                                f"expected children {parent.child_ids}")
        jobs.append((parent, mat))

    if executor is None:
        results = [solve(mat, config) for _, mat in jobs]
    else:
        results = list(executor.map(lambda job: solve(job[1], config), jobs))
    for (parent, _), res in zip(jobs, results):
        lambdas[parent.id] = res.lambda_
        for cid, w in zip(parent.child_ids, res.weights):
            local[cid] = float(w)
    return local, lambdas


def global_weights(local: Mapping[str, float], root: CriterionNode, renormalize: bool = False) -> dict:
    """Leaf weight = product of local weights from the root down.

    With ``renormalize`` each sibling group is first scaled to sum to 1;
    off by default because published local weights are replayed as-is.
    """
    def lw(node_id):
        try:
            return float(local[node_id])
        except KeyError:
            raise MissingWeight(f"no local weight for {node_id!r}") from None

    scale = {}
    if renormalize:
        for parent in root.parents():
            total = sum(lw(c.id) for c in parent.children)
            for c in parent.children:
                scale[c.id] = 1.0 / total

    out = {}
    for leaf, ancestors in root.paths():
        if leaf is root:
            out[leaf.id] = 1.0
            continue
        g = 1.0
        for node in ancestors + (leaf,):
            g *= lw(node.id) * scale.get(node.id, 1.0)
        out[leaf.id] = g
    return out


@dataclass(frozen=True)
class RankEntry:
    leaf_id: str
    local: float
    global_: float
    rank: int


@dataclass
class GlobalRanking:
    entries: list
    group_lambda: dict = field(default_factory=dict)

    def by_id(self) -> dict:
        return {e.leaf_id: e for e in self.entries}

    def order(self) -> list:
        return [e.leaf_id for e in sorted(self.entries, key=lambda e: e.rank)]


def rank(globals_: Mapping[str, float], root: CriterionNode, local: Mapping[str, float] | None = None,
         group_lambda: Mapping[str, float] | None = None) -> GlobalRanking:
    """Rank leaves by descending global weight; ties go to the earlier-declared leaf.

    Entries are listed in declaration order, not rank order.
    """
    leaves = [leaf.id for leaf in root.leaves() if leaf.id in globals_]
    order = sorted(range(len(leaves)), key=lambda k: (-globals_[leaves[k]], k))
    ranks = {leaves[k]: r + 1 for r, k in enumerate(order)}
    local = local or {}
    entries = [RankEntry(lid, float(local.get(lid, globals_[lid])), float(globals_[lid]), ranks[lid])
               for lid in leaves]
    return GlobalRanking(entries, dict(group_lambda or {}))


def rank_within(weights: Mapping[str, float], ids) -> dict:
    """Rank positions inside one sibling group, same tie rule as :func:`rank`."""
    ids = list(ids)
    order = sorted(range(len(ids)), key=lambda k: (-weights[ids[k]], k))
    return {ids[k]: r + 1 for r, k in enumerate(order)}
