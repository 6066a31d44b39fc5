"""Compare the compiled kernels with the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--json out.json]
"""
import argparse
import json
import time

import numpy as np

from spinweave import kernels
from spinweave.network import build_linked_chains


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    rng = np.random.default_rng(0)

    def stack(n, m):
        a = rng.normal(size=(m, n, n)) + 1j * rng.normal(size=(m, n, n))
        return (a + a.conj().transpose(0, 2, 1)) / 2

    # the adiabatic holonomy run: many small steps
    linked = np.stack([build_linked_chains(4, 2, 0.3 + 1e-4 * k, 0.2).hop_matrix() for k in range(4000)])
    yield "ordered_exp_product", "adiabatic n=8 x4000", (linked, np.full(4000, 0.05))
    yield "ordered_exp_product", "loop n=16 x3", (stack(16, 3), np.array([0.5, 1.0, 0.5]))
    yield "ordered_exp_product", "sweep n=64 x200", (stack(64, 200), np.full(200, 0.01))
    for N in (12, 30):
        h = stack(N, 1)[0]
        np.fill_diagonal(h, 0)
        yield "pair_hamiltonian", f"pairs N={N} (dim {N * (N - 1) // 2})", (h, rng.normal(size=N))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json")
    args = ap.parse_args(argv)
    backends = kernels.available_backends()
    rows = []
    for kernel, label, inputs in cases():
        entry = {"kernel": kernel, "case": label}
        outs = {}
        for name, impl in backends.items():
            fn = getattr(impl, kernel)
            entry[name] = _best(lambda: fn(*inputs), args.repeat)
            outs[name] = fn(*inputs)
        if len(outs) == 2:
            entry["max_abs_diff"] = float(np.abs(outs["compiled"] - outs["python"]).max())
            entry["speedup"] = entry["python"] / entry["compiled"]
        rows.append(entry)
    print(f"active backend: {kernels.BACKEND}")
    print(f"{'case':<34}{'python [ms]':>13}{'compiled [ms]':>15}{'speedup':>9}{'max diff':>11}")
    for r in rows:
        comp = f"{1e3 * r['compiled']:15.2f}" if "compiled" in r else f"{'n/a':>15}"
        speed = f"{r['speedup']:9.2f}" if "speedup" in r else f"{'':>9}"
        diff = f"{r['max_abs_diff']:11.1e}" if "max_abs_diff" in r else ""
        print(f"{r['case']:<34}{1e3 * r['python']:13.2f}{comp}{speed}{diff}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
