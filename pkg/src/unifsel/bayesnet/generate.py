"""Random DAG generation for property tests."""
from __future__ import annotations

import math

import numpy as np

from .exact import faithfulness_screen
from .graph import true_mb
from .network import BayesianNetwork
from .sampling import make_rng


def random_network(n: int, max_parents: int, seed: int, cardinality=2, min_prob: float = 0.0) -> BayesianNetwork:
    """Random DAG over ``n`` nodes named V0..V{n-1}.

    A random permutation fixes the topological order; each node draws a parent
    count uniformly in [0, min(max_parents, #predecessors)] and then that many
    predecessors. CPT rows are normalized independent uniform(0, 1] draws
    (shifted by ``min_prob`` before normalizing when nonzero).
    ``cardinality`` is an int or an inclusive (lo, hi) range.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    rng = make_rng(seed, task=0)
    order = rng.permutation(n)
    if isinstance(cardinality, (tuple, list)):
        lo, hi = cardinality
        cards = [int(c) for c in rng.integers(lo, hi + 1, size=n)]
    else:
        cards = [int(cardinality)] * n
    parents = [[] for _ in range(n)]
    for pos, node in enumerate(order):
        k = int(rng.integers(0, min(max_parents, pos) + 1))
        if k:
            chosen = rng.choice(pos, size=k, replace=False)
            parents[node] = sorted(int(order[c]) for c in chosen)
    cpts = []
    for i in range(n):
        rows = math.prod(cards[p] for p in parents[i])
        raw = 1.0 - rng.random((rows, cards[i])) + min_prob
        cpts.append(raw / raw.sum(axis=1, keepdims=True))
    names = [f"V{i}" for i in range(n)]
    return BayesianNetwork(names, cards, parents, cpts, name=f"random-{n}-{max_parents}-{seed}")


def largest_blanket_node(bn: BayesianNetwork) -> int:
    """Node with the largest Markov blanket, ties to the lowest index."""
    sizes = [len(true_mb(bn, i).mb) for i in range(bn.n_nodes)]
    return int(np.argmax(sizes))


def screened_networks(count: int, n_range=(5, 8), max_parents: int = 2, seed: int = 0,
                      cardinality=2, margin: float = 1e-6, max_tries: int = 100000):
    """Yield (seed, network, target) for the first ``count`` networks passing the screen.

    Network ``k`` uses seed ``seed + k``; its size is drawn from ``n_range`` by
    that same stream so the sequence is reproducible. The target is the node
    with the largest Markov blanket.
    """
    found = 0
    for k in range(max_tries):
        s = seed + k
        n = int(make_rng(s, task=1).integers(n_range[0], n_range[1] + 1))
        bn = random_network(n, max_parents, s, cardinality)
        if not faithfulness_screen(bn, margin=margin):
            continue
        yield s, bn, largest_blanket_node(bn)
        found += 1
        if found >= count:
            return
    raise RuntimeError(f"only {found} screened networks in {max_tries} tries")
