"""Greedy mutual-information feature selection criteria and FCBF.

Every criterion scores a candidate X against the already-selected set S using
low-order terms only:

    rel(X)        = I(X;C)
    red(X,Fi)     = I(X;Fi)
    cred(X,Fi)    = I(X;Fi|C)
    pair(X,Fj|Fi) = I(X;Fj|Fi)      (RelaxMRMR only)

All terms are cached across greedy steps in a :class:`ScoreCache`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .dataset import DiscreteDataset
from .infotheory import DEFAULT_XI, conditional_mutual_information, g2_test

KINDS = ("MIM", "MIFS", "MRMR", "JMI", "CIFE", "CMIM", "RELAX_MRMR")
_ALIASES = {"RELAXMRMR": "RELAX_MRMR", "RELAX-MRMR": "RELAX_MRMR"}


@dataclass(frozen=True)
class CriterionSpec:
    """Which criterion to use; ``beta`` and ``gamma_weight`` apply to MIFS only.

    With ``gamma_weight`` set, MIFS becomes the generalized two-weight form
    I(X;C) − β Σ I(X;Fi) + γ Σ I(X;Fi|C).
    """

    kind: str
    beta: Optional[float] = None
    gamma_weight: Optional[float] = None

    def __post_init__(self):
        kind = str(self.kind).upper()
        kind = _ALIASES.get(kind, kind)
        if kind not in KINDS:
            raise ValueError(f"unknown criterion {self.kind!r}; expected one of {', '.join(KINDS)}")
        object.__setattr__(self, "kind", kind)
        if kind != "MIFS" and (self.beta is not None or self.gamma_weight is not None):
            raise ValueError(f"beta/gamma_weight apply only to MIFS, not {kind}")
        if kind == "MIFS":
            beta = 1.0 if self.beta is None else float(self.beta)
            if not 0.0 <= beta <= 1.0:
                raise ValueError("beta must lie in [0, 1]")
            object.__setattr__(self, "beta", beta)
            if self.gamma_weight is not None and not 0.0 <= self.gamma_weight <= 1.0:
                raise ValueError("gamma_weight must lie in [0, 1]")

    def to_dict(self) -> dict:
        d = {"kind": self.kind}
        if self.beta is not None:
            d["beta"] = self.beta
        if self.gamma_weight is not None:
            d["gamma_weight"] = self.gamma_weight
        return d


@dataclass
class SelectionResult:
    selected: list
    step_scores: list
    criterion: dict
    psi: Optional[int]
    notes: list = field(default_factory=list)

    def to_dict(self, data: DiscreteDataset | None = None) -> dict:
        d = {"selected": list(self.selected), "step_scores": list(self.step_scores),
             "criterion": self.criterion, "psi": self.psi}
        if data is not None:
            d["selected_names"] = data.names(self.selected)
        return d


class ScoreCache:
    """Memo of the low-order information terms for one dataset.

    Symmetric terms are keyed by the sorted pair; ``pair`` terms are keyed by
    (min(x, fj), max(x, fj), fi), a triangular store over the conditioning index.
    """

    def __init__(self, data: DiscreteDataset):
        self.data = data
        self.c = data.class_index
        self._rel: dict = {}
        self._red: dict = {}
        self._cred: dict = {}
        self._pair: dict = {}
        self.evaluations = 0

    def _cmi(self, x, y, s):
        self.evaluations += 1
        return conditional_mutual_information(self.data, x, y, s)

    def rel(self, x: int) -> float:
        v = self._rel.get(x)
        if v is None:
            v = self._rel[x] = self._cmi(x, self.c, ())
        return v

    def red(self, x: int, f: int) -> float:
        key = (min(x, f), max(x, f))
        v = self._red.get(key)
        if v is None:
            v = self._red[key] = self._cmi(x, f, ())
        return v

    def cred(self, x: int, f: int) -> float:
        key = (min(x, f), max(x, f))
        v = self._cred.get(key)
        if v is None:
            v = self._cred[key] = self._cmi(x, f, (self.c,))
        return v

    def pair(self, x: int, fj: int, fi: int) -> float:
        key = (min(x, fj), max(x, fj), fi)
        v = self._pair.get(key)
        if v is None:
            v = self._pair[key] = self._cmi(x, fj, (fi,))
        return v


def score_candidate(data: DiscreteDataset, x: int, s, spec: CriterionSpec,
                    cache: ScoreCache | None = None) -> float:
    """Criterion value of candidate ``x`` given selected set ``s``."""
    cache = ScoreCache(data) if cache is None else cache
    s = list(s)
    if x in s or x == data.class_index:
        raise ValueError("candidate must be a feature outside the selected set")
    rel = cache.rel(x)
    if not s:
        return rel
    k = spec.kind
    if k == "MIM":
        return rel
    red = sum(cache.red(x, f) for f in s)
    if k == "MIFS":
        score = rel - spec.beta * red
        if spec.gamma_weight is not None:
            score += spec.gamma_weight * sum(cache.cred(x, f) for f in s)
        return score
    if k == "MRMR":
        return rel - red / len(s)
    if k == "JMI":
        return rel - (red - sum(cache.cred(x, f) for f in s)) / len(s)
    if k == "CIFE":
        return rel - red + sum(cache.cred(x, f) for f in s)
    if k == "CMIM":
        return rel - max(cache.red(x, f) - cache.cred(x, f) for f in s)
    # RELAX_MRMR
    cond = sum(cache.cred(x, f) for f in s)
    inner = 0.0
    for fi in s:
        inner += cache.red(x, fi) + sum(cache.pair(x, fj, fi) for fj in s if fj != fi)
    return rel + cond - inner / len(s)


def greedy_select(data: DiscreteDataset, spec: CriterionSpec, psi: int,
                  cache: ScoreCache | None = None) -> SelectionResult:
    """Forward selection of ``psi`` features by argmax score, ties to the lowest index."""
    feats = data.feature_indices
    if not 1 <= psi <= len(feats):
        raise ValueError(f"psi must be in [1, {len(feats)}], got {psi}")
    cache = ScoreCache(data) if cache is None else cache
    selected, scores = [], []
    remaining = list(feats)
    for _ in range(psi):
        best, best_score = None, None
        for x in remaining:
            sc = score_candidate(data, x, selected, spec, cache)
            if best is None or sc > best_score:
                best, best_score = x, sc
        selected.append(best)
        scores.append(float(best_score))
        remaining.remove(best)
    return SelectionResult(selected, scores, spec.to_dict(), psi)


def fcbf(data: DiscreteDataset, alpha: float | None = None, delta: float | None = None,
         xi: float = DEFAULT_XI) -> SelectionResult:
    """Two-step filter: relevance gate, then redundancy elimination.

    Forward: keep X when the marginal G² test of X against C is reliable and
    rejects at ``alpha``, or (``delta`` mode) when I(X;C) > delta; sort by
    I(X;C) descending (ties to lower index). Backward: walking the list, each
    surviving X removes every later Y with I(X;Y) ≥ I(Y;C).
    """
    if (alpha is None) == (delta is None):
        raise ValueError("provide exactly one of alpha or delta")
    cache = ScoreCache(data)
    c = data.class_index
    relevant = []
    for x in data.feature_indices:
        if alpha is not None:
            r = g2_test(data, x, c, (), xi)
            keep = r.reliable and r.p_value < alpha
        else:
            keep = cache.rel(x) > delta
        if keep:
            relevant.append(x)
    relevant.sort(key=lambda x: (-cache.rel(x), x))
    kept = list(relevant)
    i = 0
    while i < len(kept):
        x = kept[i]
        kept = kept[:i + 1] + [y for y in kept[i + 1:] if cache.red(x, y) < cache.rel(y)]
        i += 1
    params = {"kind": "FCBF", "alpha": alpha, "delta": delta}
    return SelectionResult(kept, [cache.rel(x) for x in kept], params, None)
