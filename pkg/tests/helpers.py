"""Shared builders for hand-made networks and exact-count datasets."""
import itertools

import numpy as np

from unifsel.bayesnet import exact_joint, network_from_dict
from unifsel.dataset import DiscreteDataset


def net(*nodes, name=""):
    """Build a network from ``(name, parents, cpt_rows)`` triples (cardinality from the rows)."""
    doc = {"nodes": [{"name": n, "cardinality": len(rows[0]), "parents": list(ps), "cpt": rows}
                     for n, ps, rows in nodes]}
    if name:
        doc["name"] = name
    return network_from_dict(doc)


def binary_cpt(rng, n_parents):
    """Random binary CPT rows bounded away from 0 and 1."""
    rows = []
    for _ in range(2 ** n_parents):
        p = float(rng.uniform(0.15, 0.85))
        rows.append([p, 1.0 - p])
    return rows


def dataset_from_counts(names, cards, counts, class_index):
    """Dataset with ``counts[config]`` copies of each joint configuration (row-major)."""
    counts = np.asarray(counts, dtype=np.int64).reshape(-1)
    configs = np.array(list(itertools.product(*[range(r) for r in cards])), dtype=np.int32)
    rows = np.repeat(configs, counts, axis=0)
    return DiscreteDataset(list(names), list(cards), rows.T.copy(), class_index)


def exact_scale_dataset(bn, target, scale=10 ** 6):
    """Rows proportional to the exact joint (rounded): plug-in values approach exact ones."""
    joint = exact_joint(bn)
    counts = np.rint(joint.flat * scale).astype(np.int64)
    return dataset_from_counts(bn.node_names, bn.cardinalities, counts, target), joint


def dataset(columns, cards=None, class_index=-1, names=None):
    """Dataset from a list of integer columns."""
    cols = np.asarray(columns, dtype=np.int32)
    if cards is None:
        cards = [max(int(c.max()) + 1, 2) for c in cols]
    if names is None:
        names = [f"F{i}" for i in range(len(cols))]
    return DiscreteDataset(list(names), list(cards), cols, class_index % len(cols))


# Collider with a child and a spouse: A -> C <- B, C -> D <- E
def collider_spouse_net(seed=0):
    rng = np.random.default_rng(seed)
    return net(("A", [], binary_cpt(rng, 0)), ("B", [], binary_cpt(rng, 0)),
               ("C", ["A", "B"], [[0.9, 0.1], [0.3, 0.7], [0.25, 0.75], [0.05, 0.95]]),
               ("E", [], binary_cpt(rng, 0)),
               ("D", ["C", "E"], [[0.9, 0.1], [0.2, 0.8], [0.3, 0.7], [0.1, 0.9]]))


def chain_net(k=3, strength=0.85):
    """Binary chain V0 -> V1 -> ... with symmetric channels."""
    nodes = [("V0", [], [[0.5, 0.5]])]
    for i in range(1, k):
        nodes.append((f"V{i}", [f"V{i - 1}"], [[strength, 1 - strength], [1 - strength, strength]]))
    return net(*nodes)


# Large-sample checks accept a miss only when the deciding test was genuinely hard
BORDERLINE_CMI = 1e-4


def borderline(entry, joint, alpha):
    """True when a ledger entry is unreliable, near alpha, or tests a near-zero dependence."""
    from unifsel.bayesnet import exact_mi
    if not entry.reliable:
        return True
    if alpha / 20 <= entry.p_value <= 20 * alpha:
        return True
    return exact_mi(joint, entry.x, entry.y, list(entry.s)) < BORDERLINE_CMI


def unexplained_misses(result, joint, target, wrong, alpha):
    """Variables in `wrong` with no borderline ledger entry pairing them with the target."""
    unexplained = set()
    for v in wrong:
        k = (min(v, target), max(v, target))
        if not any((e.x, e.y) == k and borderline(e, joint, alpha) for e in result.ledger):
            unexplained.add(v)
    return unexplained
