"""Discrete Bayesian networks: representation, validation, JSON I/O."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Sequence

import numpy as np

FORMAT_TAG = "unifsel/1"
ROW_TOL = 1e-9


class NetworkError(ValueError):
    """Invalid network definition; ``violations`` lists every problem found."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


def find_violations(names, cards, parents, cpts) -> list[str]:
    """Check every structural and numeric invariant; return messages (empty = ok)."""
    problems = []
    n = len(names)
    if not (len(cards) == len(parents) == len(cpts) == n):
        return ["node_names, cardinalities, parent_lists and cpts differ in length"]
    if len(set(names)) != n:
        problems.append("duplicate node names")
    for i, name in enumerate(names):
        if cards[i] < 1:
            problems.append(f"{name}: cardinality must be positive")
        for p in parents[i]:
            if not 0 <= p < n:
                problems.append(f"{name}: parent index {p} out of range")
            elif p == i:
                problems.append(f"cycle: {name} is its own parent")
        if len(set(parents[i])) != len(parents[i]):
            problems.append(f"{name}: repeated parent")
    if problems:
        return problems
    cyc = cycle_nodes(parents)
    if cyc:
        problems.append("cycle among nodes: " + ", ".join(names[i] for i in cyc))
    for i, name in enumerate(names):
        table = np.asarray(cpts[i], dtype=float)
        rows = math.prod(cards[p] for p in parents[i])
        if table.ndim != 2 or table.shape != (rows, cards[i]):
            problems.append(f"{name}: CPT shape {table.shape} != expected {(rows, cards[i])}")
            continue
        if np.any(table < 0) or not np.all(np.isfinite(table)):
            problems.append(f"{name}: CPT has negative or non-finite entries")
        bad = np.flatnonzero(np.abs(table.sum(axis=1) - 1.0) > ROW_TOL)
        if bad.size:
            problems.append(f"{name}: CPT row {int(bad[0])} sums to "
                            f"{table[bad[0]].sum():.12g}, not 1 (normalization)")
    return problems


def cycle_nodes(parents) -> list[int]:
    """Nodes left over by Kahn's algorithm (nonempty iff the graph is cyclic)."""
    order = topological_order(parents, strict=False)
    placed = set(order)
    return [i for i in range(len(parents)) if i not in placed]


def topological_order(parents, strict: bool = True) -> list[int]:
    n = len(parents)
    indeg = [len(p) for p in parents]
    children = [[] for _ in range(n)]
    for i, ps in enumerate(parents):
        for p in ps:
            children[p].append(i)
    ready = [i for i in range(n) if indeg[i] == 0]
    order = []
    while ready:
        ready.sort()
        i = ready.pop(0)
        order.append(i)
        for c in children[i]:
            indeg[c] -= 1
            if indeg[c] == 0:
                ready.append(c)
    if strict and len(order) != n:
        raise NetworkError(["graph has a cycle"])
    return order


@dataclass(frozen=True, eq=False)
class BayesianNetwork:
    """DAG over discrete variables with one CPT per node.

    ``cpts[i]`` has shape ``(prod of parent cardinalities, r_i)``; its rows are
    indexed row-major over the parent configuration in ``parent_lists[i]``
    order (first parent most significant).
    """

    node_names: tuple[str, ...]
    cardinalities: tuple[int, ...]
    parent_lists: tuple[tuple[int, ...], ...]
    cpts: tuple[np.ndarray, ...]
    states: tuple[tuple[str, ...], ...] | None = None
    name: str = ""

    def __post_init__(self):
        names = tuple(str(v) for v in self.node_names)
        cards = tuple(int(r) for r in self.cardinalities)
        parents = tuple(tuple(int(p) for p in ps) for ps in self.parent_lists)
        problems = find_violations(names, cards, parents, self.cpts)
        if problems:
            raise NetworkError(problems)
        cpts = []
        for t in self.cpts:
            a = np.array(t, dtype=float)
            a.flags.writeable = False
            cpts.append(a)
        object.__setattr__(self, "node_names", names)
        object.__setattr__(self, "cardinalities", cards)
        object.__setattr__(self, "parent_lists", parents)
        object.__setattr__(self, "cpts", tuple(cpts))
        if self.states is not None:
            st = tuple(tuple(str(s) for s in v) for v in self.states)
            if [len(s) for s in st] != list(cards):
                raise NetworkError(["state labels do not match cardinalities"])
            object.__setattr__(self, "states", st)
        object.__setattr__(self, "_topo", tuple(topological_order(parents)))
        children = [[] for _ in names]
        for i, ps in enumerate(parents):
            for p in ps:
                children[p].append(i)
        object.__setattr__(self, "_children", tuple(tuple(c) for c in children))

    @property
    def n_nodes(self) -> int:
        return len(self.node_names)

    @property
    def topological_order(self) -> tuple[int, ...]:
        return self._topo

    def children(self, i: int) -> tuple[int, ...]:
        return self._children[i]

    def parents(self, i: int) -> tuple[int, ...]:
        return self.parent_lists[i]

    def edges(self) -> list[tuple[int, int]]:
        return [(p, i) for i, ps in enumerate(self.parent_lists) for p in ps]

    def index_of(self, node) -> int:
        if isinstance(node, (int, np.integer)):
            if not 0 <= int(node) < self.n_nodes:
                raise KeyError(f"node index {node} out of range")
            return int(node)
        try:
            return self.node_names.index(node)
        except ValueError:
            raise KeyError(f"unknown node {node!r}") from None

    def row_strides(self, i: int) -> np.ndarray:
        """Multipliers mapping a parent configuration to its CPT row index."""
        cards = [self.cardinalities[p] for p in self.parent_lists[i]]
        strides = np.ones(len(cards), dtype=np.int64)
        for k in range(len(cards) - 2, -1, -1):
            strides[k] = strides[k + 1] * cards[k + 1]
        return strides

    def descendants(self, i: int) -> set[int]:
        out, stack = set(), list(self._children[i])
        while stack:
            c = stack.pop()
            if c not in out:
                out.add(c)
                stack.extend(self._children[c])
        return out

    def ancestors(self, nodes) -> set[int]:
        out, stack = set(), [int(v) for v in nodes]
        while stack:
            v = stack.pop()
            for p in self.parent_lists[v]:
                if p not in out:
                    out.add(p)
                    stack.append(p)
        return out

    def subnetwork(self, nodes) -> "BayesianNetwork":
        """Restriction to an ancestrally closed node set (CPTs carry over unchanged)."""
        keep = sorted({self.index_of(v) for v in nodes})
        missing = self.ancestors(keep) - set(keep)
        if missing:
            raise NetworkError([f"node set is not ancestrally closed; missing "
                                f"{sorted(self.node_names[i] for i in missing)}"])
        remap = {old: new for new, old in enumerate(keep)}
        return BayesianNetwork(
            [self.node_names[i] for i in keep],
            [self.cardinalities[i] for i in keep],
            [[remap[p] for p in self.parent_lists[i]] for i in keep],
            [self.cpts[i] for i in keep],
            None if self.states is None else [self.states[i] for i in keep],
            self.name,
        )

    def to_json_dict(self) -> dict:
        nodes = []
        for i, name in enumerate(self.node_names):
            node = {"name": name, "cardinality": self.cardinalities[i],
                    "parents": [self.node_names[p] for p in self.parent_lists[i]],
                    "cpt": self.cpts[i].tolist()}
            if self.states is not None:
                node["states"] = list(self.states[i])
            nodes.append(node)
        doc = {"format": FORMAT_TAG, "nodes": nodes}
        if self.name:
            doc["name"] = self.name
        return doc


def network_from_dict(doc: dict) -> BayesianNetwork:
    try:
        nodes = doc["nodes"]
        names = [nd["name"] for nd in nodes]
        lookup = {nm: i for i, nm in enumerate(names)}
        parents = []
        for nd in nodes:
            ps = []
            for p in nd.get("parents", []):
                if p not in lookup:
                    raise NetworkError([f"{nd['name']}: unknown parent {p!r}"])
                ps.append(lookup[p])
            parents.append(ps)
        cards = [int(nd["cardinality"]) for nd in nodes]
        cpts = [np.array(nd["cpt"], dtype=float) for nd in nodes]
        has_states = all("states" in nd for nd in nodes)
        states = [nd["states"] for nd in nodes] if has_states else None
    except KeyError as exc:
        raise NetworkError([f"network document lacks field {exc}"]) from None
    return BayesianNetwork(names, cards, parents, cpts, states, doc.get("name", ""))


BUILTIN = ("alarm", "lungcancer")


def load_network(path) -> BayesianNetwork:
    """Read a JSON network; the bare names ``alarm`` and ``lungcancer`` load bundled files."""
    p = Path(path)
    if str(path) in BUILTIN or (not p.exists() and p.stem in BUILTIN and p.suffix in ("", ".json")):
        text = resources.files("unifsel.bayesnet").joinpath("data", f"{p.stem}.json").read_text()
    else:
        if not p.exists():
            raise FileNotFoundError(f"no such network file: {path}")
        text = p.read_text(encoding="utf-8")
    return network_from_dict(json.loads(text))


def save_network(bn: BayesianNetwork, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(bn.to_json_dict(), fh, indent=1)


def validate(bn_or_doc) -> list[str]:
    """Violation list for a network or a raw JSON document ([] means valid)."""
    if isinstance(bn_or_doc, BayesianNetwork):
        bn = bn_or_doc
        return find_violations(bn.node_names, bn.cardinalities, bn.parent_lists, bn.cpts)
    try:
        network_from_dict(bn_or_doc)
    except NetworkError as exc:
        return exc.violations
    return []
