"""Time the compiled kernels against the pure-Python ones on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Both backends must return identical answers; the script stops otherwise.
"""

import argparse
import time

from twoecss import _kernels_py
from twoecss.instances import petersen, prism, random_2ec

try:
    from twoecss import _kernels
except ImportError:
    _kernels = None


def _arrays(g):
    eids = g.edge_ids()
    return [g.ends(e)[0] for e in eids], [g.ends(e)[1] for e in eids]


def _min_size(mod, g, budget=10 ** 8):
    eu, ev = _arrays(g)
    size = g.n
    while True:
        status, chosen = mod.min_2ecss(g.n, eu, ev, size, budget)
        if status == _kernels_py.FOUND:
            return size, sorted(chosen)
        size += 1


def _time(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases():
    yield "bridges random_2ec(400, 200)", "bridges", random_2ec(400, 200, seed=1)
    yield "2ec test random_2ec(400, 200)", "2ec", random_2ec(400, 200, seed=2)
    yield "exact petersen", "exact", petersen()
    yield "exact prism(5)", "exact", prism(5)
    yield "exact random_2ec(12, 8)", "exact", random_2ec(12, 8, seed=3)


def run(repeat):
    backends = [("python", _kernels_py)] + ([("cython", _kernels)] if _kernels else [])
    print(f"{'case':<32}" + "".join(f"{name:>12}" for name, _ in backends) + "     speedup")
    for label, kind, g in cases():
        eu, ev = _arrays(g)
        mask = [True] * len(eu)
        times, answers = [], []
        for _, mod in backends:
            if kind == "bridges":
                fn = lambda mod=mod: mod.bridges(g.n, eu, ev, mask)
            elif kind == "2ec":
                fn = lambda mod=mod: mod.is_two_edge_connected(g.n, eu, ev, mask)
            else:
                fn = lambda mod=mod: _min_size(mod, g)
            t, out = _time(fn, repeat)
            times.append(t)
            answers.append(out)
        if any(a != answers[0] for a in answers):
            raise SystemExit(f"backends disagree on {label}")
        speed = f"{times[0] / times[-1]:>10.1f}x" if len(times) > 1 else "         -"
        print(f"{label:<32}" + "".join(f"{t * 1000:>10.2f}ms" for t in times) + speed)


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    run(ap.parse_args().repeat)
