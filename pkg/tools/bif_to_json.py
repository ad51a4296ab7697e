"""Convert a BIF network file into the unifsel JSON network format.

Usage: python3 tools/bif_to_json.py alarm.bif out.json [--renormalize]

CPT rows in BIF are keyed by explicit parent values; they are re-emitted in
row-major parent-configuration order (first parent most significant).
Rows such as ``0.3333333 x3`` sum to 0.9999999, so ``--renormalize`` rescales
every row to sum to 1 exactly.
"""
import argparse
import itertools
import json
import re
import sys

VAR_RE = re.compile(r"variable\s+(\S+)\s*\{\s*type\s+discrete\s*\[\s*(\d+)\s*\]\s*\{([^}]*)\}", re.S)
PROB_RE = re.compile(r"probability\s*\(\s*([^|)]+?)\s*(?:\|\s*([^)]*))?\)\s*\{([^}]*)\}", re.S)


def parse_bif(text):
    states, order = {}, []
    for name, card, vals in VAR_RE.findall(text):
        values = [v.strip() for v in vals.split(",")]
        if len(values) != int(card):
            raise ValueError(f"{name}: declared {card} states, listed {len(values)}")
        states[name] = values
        order.append(name)
    nodes = {}
    for child, parents, body in PROB_RE.findall(text):
        child = child.strip()
        parents = [p.strip() for p in parents.split(",")] if parents else []
        rows = {}
        for line in body.split(";"):
            line = line.strip()
            if not line:
                continue
            if line.startswith("table"):
                rows[()] = [float(v) for v in line[len("table"):].split(",")]
            else:
                m = re.match(r"\(([^)]*)\)\s*(.*)", line, re.S)
                key = tuple(v.strip() for v in m.group(1).split(","))
                rows[key] = [float(v) for v in m.group(2).split(",")]
        nodes[child] = (parents, rows)
    return order, states, nodes


def to_json(order, states, nodes, renormalize=False):
    out = []
    for name in order:
        parents, rows = nodes[name]
        cpt = []
        for combo in itertools.product(*[states[p] for p in parents]):
            row = rows[tuple(combo)]
            if renormalize:
                total = sum(row)
                row = [v / total for v in row]
            cpt.append(row)
        out.append({"name": name, "cardinality": len(states[name]), "states": states[name],
                    "parents": parents, "cpt": cpt})
    return {"format": "unifsel/1", "nodes": out}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("bif")
    ap.add_argument("out")
    ap.add_argument("--renormalize", action="store_true")
    ap.add_argument("--name", default=None)
    args = ap.parse_args(argv)
    with open(args.bif) as fh:
        doc = to_json(*parse_bif(fh.read()), renormalize=args.renormalize)
    if args.name:
        doc["name"] = args.name
    with open(args.out, "w") as fh:
        json.dump(doc, fh, indent=1)
    print(f"wrote {len(doc['nodes'])} nodes to {args.out}", file=sys.stderr)


if __name__ == "__main__":
    main()
