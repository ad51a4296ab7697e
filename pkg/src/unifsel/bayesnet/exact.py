"""Exact joint distributions and brute-force oracles over small networks."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .graph import d_separated
from .network import BayesianNetwork

DEFAULT_CAP = 2 ** 22


class CapExceeded(ValueError):
    pass


@dataclass(eq=False)
class JointDistribution:
    """Probability table over all configurations, axis ``i`` = node ``i``."""

    cardinalities: tuple[int, ...]
    probs: np.ndarray
    _marginals: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.cardinalities = tuple(int(r) for r in self.cardinalities)
        p = np.asarray(self.probs, dtype=float).reshape(self.cardinalities)
        if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-9:
            raise ValueError("joint probabilities must be nonnegative and sum to 1")
        p.flags.writeable = False
        self.probs = p

    @property
    def n(self) -> int:
        return len(self.cardinalities)

    @property
    def flat(self) -> np.ndarray:
        return self.probs.reshape(-1)

    def marginal(self, vars) -> np.ndarray:
        """Marginal table over ``vars`` with axes in sorted order."""
        key = tuple(sorted(set(int(v) for v in vars)))
        hit = self._marginals.get(key)
        if hit is None:
            drop = tuple(a for a in range(self.n) if a not in key)
            hit = self.probs.sum(axis=drop) if drop else self.probs
            self._marginals[key] = hit
        return hit

    def entropy(self, vars) -> float:
        vars = list(vars)
        if not vars:
            return 0.0
        p = self.marginal(vars).reshape(-1)
        p = p[p > 0]
        return float(-np.sum(p * np.log(p)))


def exact_joint(bn: BayesianNetwork, cap: int = DEFAULT_CAP) -> JointDistribution:
    """Product of all CPTs, broadcast into one array of shape ``cardinalities``."""
    size = math.prod(bn.cardinalities)
    if size > cap:
        raise CapExceeded(f"joint has {size} configurations, cap is {cap}")
    n = bn.n_nodes
    joint = np.ones(bn.cardinalities)
    for i in range(n):
        axes = list(bn.parent_lists[i]) + [i]
        factor = bn.cpts[i].reshape([bn.cardinalities[a] for a in axes])
        order = np.argsort(axes)
        factor = factor.transpose(order)
        shape = [1] * n
        for a in axes:
            shape[a] = bn.cardinalities[a]
        joint = joint * factor.reshape(shape)
    return JointDistribution(bn.cardinalities, joint)


def exact_entropy(joint: JointDistribution, vars) -> float:
    return joint.entropy(vars)


def exact_mi(joint: JointDistribution, x: int, y: int, s=()) -> float:
    """I(X;Y|S) = H(X,S) + H(Y,S) − H(X,Y,S) − H(S) on the exact joint."""
    s = sorted(set(s))
    return (joint.entropy([x] + s) + joint.entropy([y] + s)
            - joint.entropy([x, y] + s) - joint.entropy(s))


def exact_set_mi(joint: JointDistribution, target: int, feats) -> float:
    """I(C; S) for a feature set S."""
    feats = sorted(set(feats) - {target})
    if not feats:
        return 0.0
    return joint.entropy([target]) + joint.entropy(feats) - joint.entropy([target] + feats)


def exact_cond_entropy(joint: JointDistribution, target: int, feats) -> float:
    """H(C | S)."""
    feats = sorted(set(feats) - {target})
    return joint.entropy([target] + feats) - joint.entropy(feats)


def exact_bayes_error(joint: JointDistribution, target: int, feats) -> float:
    """Σ_s p(s)(1 − max_c p(c|s)) = 1 − Σ_s max_c p(c, s)."""
    feats = sorted(set(feats) - {target})
    axes = sorted([target] + feats)
    table = joint.marginal(axes)
    best = table.max(axis=axes.index(target))
    return float(max(1.0 - best.sum(), 0.0))


def _others(joint: JointDistribution, target: int) -> list[int]:
    return [v for v in range(joint.n) if v != target]


def brute_force_relevance(joint: JointDistribution, target: int, eps: float = 1e-9) -> dict:
    """Partition features into strongly relevant, weakly relevant, and irrelevant."""
    feats = _others(joint, target)
    strong, weak, irrelevant = set(), set(), set()
    for f in feats:
        rest = [v for v in feats if v != f]
        if exact_mi(joint, f, target, rest) > eps:
            strong.add(f)
            continue
        found = False
        for k in range(len(rest)):
            for sub in itertools.combinations(rest, k):
                if exact_mi(joint, f, target, sub) > eps:
                    found = True
                    break
            if found:
                break
        (weak if found else irrelevant).add(f)
    return {"strong": strong, "weak": weak, "irrelevant": irrelevant}


def brute_force_best_subset(joint: JointDistribution, target: int, max_size: int | None = None,
                            tol: float = 1e-10):
    """argmax over |S| ≤ max_size of I(C;S).

    Enumeration runs by size, then lexicographically; a later subset replaces
    the incumbent only when it is better by more than ``tol``, so ties resolve
    toward the smaller and then lexicographically first subset.
    """
    feats = _others(joint, target)
    if len(feats) > 15:
        raise ValueError("brute-force search supports at most 15 features")
    max_size = len(feats) if max_size is None else min(max_size, len(feats))
    best, best_val = (), 0.0
    for k in range(1, max_size + 1):
        for sub in itertools.combinations(feats, k):
            val = exact_set_mi(joint, target, sub)
            if val > best_val + tol:
                best, best_val = sub, val
    return best, best_val


def faithfulness_screen(bn: BayesianNetwork, joint: JointDistribution | None = None,
                        max_cond: int = 2, margin: float = 1e-6) -> bool:
    """True when every graph-dependent (i, j | s), |s| ≤ max_cond, has exact CMI > margin."""
    joint = exact_joint(bn) if joint is None else joint
    n = bn.n_nodes
    for i in range(n):
        for j in range(i + 1, n):
            rest = [v for v in range(n) if v not in (i, j)]
            for k in range(min(max_cond, len(rest)) + 1):
                for s in itertools.combinations(rest, k):
                    if not d_separated(bn, i, j, s) and exact_mi(joint, i, j, s) <= margin:
                        return False
    return True
