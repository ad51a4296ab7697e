"""Compare the compiled counting kernels against the numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--rows 5000,100000] [--repeat 5] [--out FILE]

Both backends are imported directly, so one process times them on identical
inputs. Workloads mirror the hot paths: encoding a conditioning set, the
per-cell CMI sum used by every G² test (with and without stratum-adjusted
degrees of freedom), and a full HITON-MB run on sampled ALARM data under
each backend.
"""
import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

from unifsel import _kernels_py

try:
    from unifsel import _kernels as _compiled
except ImportError:
    _compiled = None


def _best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def kernel_cases(m: int, rng):
    cards = [3, 4, 2, 3]
    cols = [rng.integers(0, r, m).astype(np.int32) for r in cards]
    x = rng.integers(0, 3, m).astype(np.int32)
    y = rng.integers(0, 2, m).astype(np.int32)

    def cases(k):
        z, nz = k.encode_configs(cols, cards)
        return {
            "encode_configs(4 vars)": lambda: k.encode_configs(cols, cards),
            "entropy_from_codes": lambda: k.entropy_from_codes(z, nz),
            "cmi_from_codes(|S|=4)": lambda: k.cmi_from_codes(x, y, z, 3, 2, nz),
            "cmi_dof_from_codes(|S|=4)": lambda: k.cmi_dof_from_codes(x, y, z, 3, 2, nz),
            "cmi_from_codes(|S|=0)": lambda: k.cmi_from_codes(x, y, None, 3, 2, 1),
        }
    return cases


def end_to_end(pure: bool) -> float:
    """Time HITON-MB on 5000 ALARM rows in a fresh interpreter."""
    code = ("import time;from unifsel.bayesnet import load_network,forward_sample;"
            "from unifsel.causal import hiton_mb;"
            "d=forward_sample(load_network('alarm'),5000,1,'HR');t=time.perf_counter();"
            "hiton_mb(d);print(time.perf_counter()-t)")
    env = dict(os.environ)
    env.pop("UNIFSEL_PURE_PYTHON", None)
    if pure:
        env["UNIFSEL_PURE_PYTHON"] = "1"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True)
    return float(out.stdout.strip())


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", default="5000,100000")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--no-end-to-end", action="store_true")
    ap.add_argument("--out", default=None, help="optional JSON results file")
    args = ap.parse_args(argv)
    if _compiled is None:
        print("compiled extension not built; only the numpy fallback is available")
    rng = np.random.default_rng(0)
    results = []
    print(f"{'kernel':30s} {'rows':>8s} {'numpy ms':>10s} {'compiled ms':>12s} {'speedup':>8s}")
    for m in (int(r) for r in args.rows.split(",")):
        make = kernel_cases(m, rng)
        py_cases = make(_kernels_py)
        c_cases = make(_compiled) if _compiled is not None else {}
        for name, fn in py_cases.items():
            t_py = _best_of(fn, args.repeat)
            t_c = _best_of(c_cases[name], args.repeat) if name in c_cases else None
            speed = t_py / t_c if t_c else None
            results.append({"kernel": name, "rows": m, "numpy_s": t_py, "compiled_s": t_c,
                            "speedup": speed})
            print(f"{name:30s} {m:8d} {t_py * 1e3:10.3f} "
                  f"{'' if t_c is None else f'{t_c * 1e3:12.3f}'} "
                  f"{'' if speed is None else f'{speed:8.1f}'}")
    if not args.no_end_to_end:
        t_py = end_to_end(pure=True)
        t_c = end_to_end(pure=False) if _compiled is not None else None
        results.append({"kernel": "hiton_mb ALARM 5000 rows", "rows": 5000, "numpy_s": t_py,
                        "compiled_s": t_c, "speedup": t_py / t_c if t_c else None})
        print(f"{'hiton_mb ALARM (end to end)':30s} {5000:8d} {t_py * 1e3:10.1f} "
              f"{'' if t_c is None else f'{t_c * 1e3:12.1f}'} "
              f"{'' if not t_c else f'{t_py / t_c:8.1f}'}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(results, fh, indent=1)


if __name__ == "__main__":
    main()
