"""Command-line interface: ``unifsel {select,mb,sample,oracle,bench}``.

Exit codes: 0 success, 2 usage error, 3 data error (unreadable or invalid
dataset or network), 4 method error (a selector or oracle could not run).
Every JSON output carries ``format``, ``version``, the resolved ``config`` and
the ``seed``; CSV outputs get a ``<name>.meta.json`` sidecar with the same
fields. ``UNIFSEL_SEED`` supplies the seed when ``--seed`` is omitted.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .bayesnet import (CapExceeded, NetworkError, brute_force_best_subset, brute_force_relevance,
                       exact_joint, exact_set_mi, forward_sample, load_network, true_mb)
from .causal import MB_ALGORITHMS, PC_ALGORITHMS, CausalConfig, CITester, symmetry_correction
from .dataset import FORMAT_TAG, DataError, discretize, load_dataset, save_dataset
from .eval import evaluate_split, precision_recall
from .noncausal import CriterionSpec, fcbf, greedy_select

EXIT_USAGE, EXIT_DATA, EXIT_METHOD = 2, 3, 4

CRITERIA = ("mim", "mifs", "mrmr", "jmi", "cife", "cmim", "relaxmrmr")
SELECT_METHODS = CRITERIA + ("fcbf",)
MB_ALGOS = ("iamb", "interiamb", "mmpc", "mmmb", "hitonpc", "hitonmb", "ipcmb", "stmb")
BENCH_METHODS = MB_ALGOS + SELECT_METHODS + ("truemb", "allfeatures")
CLASSIFIERS = ("knn", "nbc")


class UsageError(Exception):
    pass


class MethodError(Exception):
    pass


# ------------------------------------------------------------------ helpers

def _seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("UNIFSEL_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"UNIFSEL_SEED must be an integer, got {env!r}") from None


def _node(bn, name) -> int:
    try:
        return bn.index_of(name)
    except KeyError:
        raise DataError(f"network has no node {name!r}") from None


def _envelope(command: str, config: dict, seed: int, **payload) -> dict:
    doc = {"format": FORMAT_TAG, "version": __version__, "command": command,
           "config": config, "seed": seed}
    doc.update(payload)
    return doc


def _write_text(path, text: str) -> None:
    """Write atomically: temp file in the target directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _emit(doc: dict, out) -> None:
    text = json.dumps(doc, indent=1, sort_keys=True) + "\n"
    if out:
        _write_text(out, text)
    else:
        sys.stdout.write(text)


def _load_data(args):
    data = load_dataset(args.data, args.class_)
    if getattr(args, "bins", None):
        data = discretize(data, bins=args.bins)
    return data


def _gamma(text: str):
    if text.lower() in ("none", "unlimited"):
        return None
    try:
        g = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("gamma must be a nonnegative integer or 'none'") from None
    if g < 0:
        raise argparse.ArgumentTypeError("gamma must be nonnegative")
    return g


def _causal_config(args) -> CausalConfig:
    try:
        return CausalConfig(alpha=args.alpha, gamma_cap=args.gamma, dof=args.dof,
                            unreliable_policy=args.policy)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _choice_list(text: str, valid, what: str) -> list[str]:
    items = [t.strip().lower() for t in text.split(",") if t.strip()]
    if items == ["all"]:
        return list(valid)
    bad = [t for t in items if t not in valid]
    if bad or not items:
        raise UsageError(f"unknown {what} {bad}; valid: {', '.join(valid)}")
    return items


# ------------------------------------------------------------------ selectors

def _criterion_spec(method: str, beta):
    kind = method.upper()
    if kind == "MIFS":
        return CriterionSpec(kind, beta=1.0 if beta is None else beta)
    if beta is not None:
        raise UsageError(f"--beta applies to mifs only, not {method}")
    return CriterionSpec(kind)


def run_selection(data, method: str, psi=None, beta=None, alpha: float = 0.05):
    if method == "fcbf":
        return fcbf(data, alpha=alpha)
    return greedy_select(data, _criterion_spec(method, beta), psi)


def run_mb(data, algo: str, config: CausalConfig):
    """Run one causal routine; PC routines return their symmetry-corrected set."""
    if algo in MB_ALGORITHMS:
        return MB_ALGORITHMS[algo](data, config=config)
    tester = CITester(data, config)
    routine = "mmpc" if algo == "mmpc" else "hiton"
    raw = PC_ALGORITHMS[algo](data, config=config, tester=tester)
    pc = symmetry_correction(data, data.class_index, raw, config, routine=routine, tester=tester)
    return {"pc": sorted(pc), "spouses": [], "mb": sorted(pc), "tests_run": tester.tests_run,
            "ledger": tester.ledger}


# ------------------------------------------------------------------ commands

def cmd_select(args) -> int:
    if args.method == "fcbf":
        if args.psi is not None:
            print("unifsel: warning: --psi is ignored by fcbf", file=sys.stderr)
    elif args.psi is None:
        raise UsageError(f"--psi is required for --method {args.method}")
    data = _load_data(args)
    t0 = time.perf_counter()
    try:
        res = run_selection(data, args.method, args.psi, args.beta, args.alpha)
    except ValueError as exc:
        raise MethodError(str(exc)) from None
    config = {"data": str(args.data), "class": data.class_name, "method": args.method,
              "psi": None if args.method == "fcbf" else args.psi, "beta": args.beta,
              "alpha": args.alpha, "bins": args.bins}
    _emit(_envelope("select", config, _seed(args), selected=data.names(res.selected),
                    selected_indices=list(res.selected), step_scores=res.step_scores,
                    criterion=res.criterion, runtime=time.perf_counter() - t0), args.out)
    return 0


def cmd_mb(args) -> int:
    config = _causal_config(args)
    data = _load_data(args)
    t0 = time.perf_counter()
    try:
        res = run_mb(data, args.algo, config)
    except ValueError as exc:
        raise MethodError(str(exc)) from None
    if isinstance(res, dict):
        pc, sp, mb, n_tests, ledger = (res["pc"], res["spouses"], res["mb"], res["tests_run"],
                                       res["ledger"])
    else:
        pc, sp, mb, n_tests, ledger = (sorted(res.pc), sorted(res.spouses), sorted(res.mb),
                                       res.tests_run, res.ledger)
    full = dict(config.to_dict(), data=str(args.data), algo=args.algo, bins=args.bins)
    full["class"] = data.class_name
    _emit(_envelope("mb", full, _seed(args), pc=data.names(pc), spouses=data.names(sp),
                    mb=data.names(mb), tests_run=n_tests, runtime=time.perf_counter() - t0),
          args.out)
    if args.ledger:
        names = data.feature_names
        _emit(_envelope("mb-ledger", full, _seed(args),
                        ledger=[e.to_dict(names) for e in ledger]), args.ledger)
    return 0


def cmd_sample(args) -> int:
    if args.rows < 0:
        raise UsageError("--rows must be nonnegative")
    bn = load_network(args.network)
    seed = _seed(args)
    target = None if args.target is None else _node(bn, args.target)
    data = forward_sample(bn, args.rows, seed, target)
    config = {"network": str(args.network), "rows": args.rows, "target": data.class_name}
    out = Path(args.out)
    if out.suffix.lower() == ".json":
        doc = data.to_json_dict()
        doc.update(version=__version__, command="sample", config=config, seed=seed)
        _write_text(out, json.dumps(doc) + "\n")
    else:
        save_dataset(data, out)
        _emit(_envelope("sample", config, seed, data_file=out.name), str(out) + ".meta.json")
    return 0


def cmd_oracle(args) -> int:
    bn = load_network(args.network)
    t = _node(bn, args.target)
    names = bn.node_names
    payload = {"target": names[t]}
    blanket = true_mb(bn, t)
    if args.mb:
        payload["mb"] = sorted(names[v] for v in blanket.mb)
        payload["parents"] = sorted(names[v] for v in blanket.parents)
        payload["children"] = sorted(names[v] for v in blanket.children)
        payload["spouses"] = sorted(names[v] for v in blanket.spouses)
    if args.pc:
        payload["pc"] = sorted(names[v] for v in blanket.pc)
    if args.relevance or args.best_subset:
        try:
            joint = exact_joint(bn)
        except CapExceeded as exc:
            raise MethodError(str(exc)) from None
        if args.relevance:
            rel = brute_force_relevance(joint, t)
            payload["relevance"] = {k: sorted(names[v] for v in vs) for k, vs in rel.items()}
        if args.best_subset:
            try:
                best, best_mi = brute_force_best_subset(joint, t)
            except ValueError as exc:
                raise MethodError(str(exc)) from None
            payload["best_subset"] = sorted(names[v] for v in best)
            payload["best_subset_mi_nats"] = best_mi
            payload["mb_mi_nats"] = exact_set_mi(joint, t, sorted(blanket.mb))
    config = {"network": str(args.network), "target": names[t],
              "queries": [q for q in ("mb", "pc", "relevance", "best_subset") if getattr(args, q)]}
    _emit(_envelope("oracle", config, None, **payload), args.out)
    return 0


# ------------------------------------------------------------------ bench

def _bench_point(task: dict) -> dict:
    """One grid point: sample train/test for (size, seed), select, evaluate."""
    bn = load_network(task["network"])
    size, seed, method = task["train_size"], task["seed"], task["method"]
    train = forward_sample(bn, size, seed, task["target"], task=0)
    test = forward_sample(bn, task["test_size"], seed, task["target"], task=1)
    t = train.class_index
    t0 = time.perf_counter()
    if method == "truemb":
        feats = sorted(true_mb(bn, t).mb)
    elif method == "allfeatures":
        feats = train.feature_indices
    elif method in MB_ALGOS:
        res = run_mb(train, method, CausalConfig(**task["causal"]))
        feats = res["mb"] if isinstance(res, dict) else sorted(res.mb)
    else:
        psi = min(task["psi"], len(train.feature_indices))
        feats = sorted(run_selection(train, method, psi, alpha=task["causal"]["alpha"]).selected)
    runtime = time.perf_counter() - t0
    truth = true_mb(bn, t).mb
    p, r = precision_recall(feats, truth)
    rec = {"train_size": size, "seed": seed, "method": method, "selected": train.names(feats),
           "precision": p, "recall": r, "select_seconds": runtime, "classifiers": {}}
    for clf in task["classifiers"]:
        ev = evaluate_split(train, test, feats, clf, task["k"])
        rec["classifiers"][clf] = {k: ev[k] for k in ("accuracy", "kappa", "auc", "confusion")}
    return rec


def _point_key(rec: dict):
    return (rec["train_size"], BENCH_METHODS.index(rec["method"]), rec["seed"])


def _stats(vals):
    vals = [v for v in vals if v is not None]
    if not vals:
        return None, None
    mean = math.fsum(vals) / len(vals)
    if len(vals) == 1:
        return mean, 0.0
    var = math.fsum((v - mean) ** 2 for v in vals) / (len(vals) - 1)
    return mean, math.sqrt(var)


def bench_table(records: list[dict], classifiers) -> list[dict]:
    """Aggregate sorted grid records into one row per (method, size, classifier)."""
    groups: dict = {}
    for rec in sorted(records, key=_point_key):
        groups.setdefault((rec["train_size"], BENCH_METHODS.index(rec["method"])), []).append(rec)
    rows = []
    for (size, _), recs in sorted(groups.items()):
        prec = _stats([r["precision"] for r in recs])
        recl = _stats([r["recall"] for r in recs])
        for clf in classifiers:
            acc = _stats([r["classifiers"][clf]["accuracy"] for r in recs])
            kap = _stats([r["classifiers"][clf]["kappa"] for r in recs])
            auc = _stats([r["classifiers"][clf]["auc"] for r in recs])
            rows.append({"method": recs[0]["method"], "train_size": size, "classifier": clf,
                         "n_seeds": len(recs), "accuracy_mean": acc[0], "accuracy_std": acc[1],
                         "kappa_mean": kap[0], "kappa_std": kap[1], "auc_mean": auc[0],
                         "auc_std": auc[1], "precision_mean": prec[0], "precision_std": prec[1],
                         "recall_mean": recl[0], "recall_std": recl[1]})
    return rows


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.6f}"
    return str(v)


def cmd_bench(args) -> int:
    methods = _choice_list(args.methods, BENCH_METHODS, "methods")
    classifiers = _choice_list(args.classifiers, CLASSIFIERS, "classifiers")
    try:
        sizes = [int(s) for s in args.train_sizes.split(",")]
    except ValueError:
        raise UsageError("--train-sizes must be a comma-separated list of integers") from None
    if any(s < 2 for s in sizes) or args.test_size < 1 or args.seeds < 1 or args.jobs < 1:
        raise UsageError("train sizes must be >= 2; test size, seeds and jobs >= 1")
    causal = _causal_config(args)
    bn = load_network(args.network)
    target = bn.node_names[_node(bn, args.target)] if args.target is not None else None
    base = _seed(args)
    seeds = [base + i for i in range(args.seeds)]
    tasks = [{"network": args.network, "target": target, "train_size": size, "seed": s,
              "method": m, "test_size": args.test_size, "classifiers": classifiers,
              "k": args.k, "psi": args.psi, "causal": causal.to_dict()}
             for size in sizes for m in methods for s in seeds]
    if args.jobs == 1:
        records = [_bench_point(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            records = list(pool.map(_bench_point, tasks))
    records.sort(key=_point_key)
    config = {"network": str(args.network), "target": target or bn.node_names[-1],
              "train_sizes": sizes, "test_size": args.test_size, "seeds": seeds,
              "methods": methods, "classifiers": classifiers, "k": args.k, "psi": args.psi,
              "causal": causal.to_dict()}
    rows = bench_table(records, classifiers)
    out = Path(args.out)
    fields = list(rows[0]) if rows else ["method"]
    lines = [",".join(fields)] + [",".join(_fmt(r[f]) for f in fields) for r in rows]
    _write_text(out, "\n".join(lines) + "\n")
    _emit(_envelope("bench", config, base, data_file=out.name), str(out) + ".meta.json")
    detail = args.detail or str(out.with_suffix(".json"))
    _emit(_envelope("bench", config, base, table=rows, records=records), detail)
    return 0


# ------------------------------------------------------------------ parser

def _add_data_flags(p):
    p.add_argument("--data", required=True, help="dataset file (.csv or unifsel .json)")
    p.add_argument("--class", dest="class_", default=None,
                   help="class column name or index (required for CSV)")
    p.add_argument("--bins", type=int, default=None,
                   help="equal-frequency bins for numeric columns (default: no discretization)")


def _add_causal_flags(p):
    p.add_argument("--alpha", type=float, default=0.05, help="test significance level")
    p.add_argument("--gamma", type=_gamma, default=3,
                   help="max conditioning-subset size, or 'none' for unlimited (default 3)")
    p.add_argument("--dof", choices=("adjusted", "declared"), default="adjusted",
                   help="G2 degrees of freedom (default: stratum-adjusted)")
    p.add_argument("--policy", choices=("skip-as-dependent", "skip-as-independent"),
                   default="skip-as-dependent", help="reading of unreliable tests")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="unifsel", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"unifsel {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("select", help="information-criterion or FCBF feature selection")
    _add_data_flags(p)
    p.add_argument("--method", required=True, type=str.lower, choices=SELECT_METHODS)
    p.add_argument("--psi", type=int, default=None, help="number of features to select")
    p.add_argument("--beta", type=float, default=None, help="MIFS redundancy weight")
    p.add_argument("--alpha", type=float, default=0.05, help="FCBF relevance-test level")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None, help="output JSON (default stdout)")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("mb", help="Markov blanket or PC discovery")
    _add_data_flags(p)
    p.add_argument("--algo", required=True, type=str.lower, choices=MB_ALGOS)
    _add_causal_flags(p)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None, help="output JSON (default stdout)")
    p.add_argument("--ledger", default=None, help="also write the test ledger to this JSON file")
    p.set_defaults(func=cmd_mb)

    p = sub.add_parser("sample", help="forward-sample a dataset from a network")
    p.add_argument("--network", required=True, help="network JSON, or 'alarm' / 'lungcancer'")
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--target", default=None, help="class node (default: last node)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True, help=".json or .csv output")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("oracle", help="ground-truth sets from a network")
    p.add_argument("--network", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--mb", action="store_true")
    p.add_argument("--pc", action="store_true")
    p.add_argument("--relevance", action="store_true")
    p.add_argument("--best-subset", dest="best_subset", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="sampled train/test benchmark over methods and sizes")
    p.add_argument("--network", required=True)
    p.add_argument("--target", default=None)
    p.add_argument("--train-sizes", default="5000,50")
    p.add_argument("--test-size", type=int, default=1000)
    p.add_argument("--seeds", type=int, default=10, help="number of seeds, from --seed upward")
    p.add_argument("--seed", type=int, default=None, help="first seed")
    p.add_argument("--methods", default="all", help=f"comma list or 'all' of {', '.join(BENCH_METHODS)}")
    p.add_argument("--classifiers", default="knn,nbc")
    p.add_argument("--k", type=int, default=1, help="neighbours for knn")
    p.add_argument("--psi", type=int, default=8, help="features for criterion methods")
    _add_causal_flags(p)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", required=True, help="CSV table path")
    p.add_argument("--detail", default=None, help="JSON detail path (default: CSV path with .json)")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"unifsel: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, NetworkError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"unifsel: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (MethodError, CapExceeded) as exc:
        print(f"unifsel: method error: {exc}", file=sys.stderr)
        return EXIT_METHOD


if __name__ == "__main__":
    sys.exit(main())
