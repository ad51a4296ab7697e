"""Graphical queries: d-separation and ground-truth Markov blankets."""
from __future__ import annotations

from dataclasses import dataclass

from .network import BayesianNetwork


def d_separated(bn: BayesianNetwork, i, j, s=()) -> bool:
    """True iff every trail between ``i`` and ``j`` is blocked by ``s``.

    Reachability search over (node, direction) states: a trail passes a
    non-collider only when the node is unobserved, and passes a collider only
    when the node or one of its descendants is observed.
    """
    i, j = bn.index_of(i), bn.index_of(j)
    obs = {bn.index_of(v) for v in s}
    if i == j:
        raise ValueError("i and j must differ")
    if i in obs or j in obs:
        raise ValueError("endpoints must not be in the conditioning set")
    # nodes that are observed or have an observed descendant
    anc_obs = set(obs) | bn.ancestors(obs)
    # direction "up": arrived from a child; "down": arrived from a parent
    visited = set()
    stack = [(i, "up")]
    while stack:
        v, d = stack.pop()
        if (v, d) in visited:
            continue
        visited.add((v, d))
        if v == j:
            return False
        if d == "up" and v not in obs:
            for p in bn.parents(v):
                stack.append((p, "up"))
            for c in bn.children(v):
                stack.append((c, "down"))
        elif d == "down":
            if v not in obs:
                for c in bn.children(v):
                    stack.append((c, "down"))
            if v in anc_obs:
                for p in bn.parents(v):
                    stack.append((p, "up"))
    return True


@dataclass(frozen=True)
class Blanket:
    parents: frozenset
    children: frozenset
    spouses: frozenset

    @property
    def pc(self) -> frozenset:
        return self.parents | self.children

    @property
    def mb(self) -> frozenset:
        return self.parents | self.children | self.spouses


def true_mb(bn: BayesianNetwork, target) -> Blanket:
    t = bn.index_of(target)
    parents = frozenset(bn.parents(t))
    children = frozenset(bn.children(t))
    spouses = set()
    for c in children:
        spouses.update(bn.parents(c))
    spouses -= {t}
    spouses -= parents | children
    return Blanket(parents, children, frozenset(spouses))


def true_pc(bn: BayesianNetwork, target) -> frozenset:
    return true_mb(bn, target).pc
