"""Seeded ancestral sampling from a Bayesian network."""
from __future__ import annotations

import numpy as np

from ..dataset import DiscreteDataset
from .network import BayesianNetwork


def make_rng(seed: int, task: int = 0) -> np.random.Generator:
    """Counter-based Philox stream for (seed, task).

    Distinct ``task`` values give statistically independent streams, so
    parallel workers never share state and results do not depend on scheduling.
    """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed), spawn_key=(int(task),))))


def sample_codes(bn: BayesianNetwork, m: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``m`` joint configurations; returns an int32 array (n_nodes, m)."""
    out = np.zeros((bn.n_nodes, m), dtype=np.int32)
    for i in bn.topological_order:
        cpt = bn.cpts[i]
        cum = np.cumsum(cpt, axis=1)
        ps = bn.parent_lists[i]
        if ps:
            strides = bn.row_strides(i)
            rows = np.zeros(m, dtype=np.int64)
            for p, s in zip(ps, strides):
                rows += out[p].astype(np.int64) * s
        else:
            rows = np.zeros(m, dtype=np.int64)
        # u in (0, 1]; value = number of cumulative entries strictly below u
        u = 1.0 - rng.random(m)
        vals = (cum[rows] < u[:, None]).sum(axis=1)
        out[i] = np.minimum(vals, bn.cardinalities[i] - 1)
    return out


def forward_sample(bn: BayesianNetwork, m: int, seed: int, target=None, task: int = 0) -> DiscreteDataset:
    """Sample ``m`` rows as a dataset whose class column is ``target``.

    ``target`` defaults to the last node. The draw is a pure function of
    (bn, m, seed, task).
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    codes = sample_codes(bn, m, make_rng(seed, task))
    cls = bn.n_nodes - 1 if target is None else bn.index_of(target)
    return DiscreteDataset(bn.node_names, bn.cardinalities, codes, cls, bn.states)
