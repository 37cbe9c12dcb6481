import os
import random
import subprocess
import sys

import pytest

from twoecss import _kernels_py, kernels
from twoecss.instances import random_2ec

compiled = pytest.importorskip("twoecss._kernels")


def arrays(g):
    ids = g.edge_ids()
    return [g.ends(e)[0] for e in ids], [g.ends(e)[1] for e in ids]


def cases(count, seed):
    rng = random.Random(seed)
    for s in range(count):
        g = random_2ec(rng.randint(3, 11), rng.randint(0, 8), seed=s)
        eu, ev = arrays(g)
        mask = [rng.random() < 0.8 for _ in eu]
        yield g, eu, ev, mask


def test_bridges_agree():
    for g, eu, ev, mask in cases(200, 1):
        assert sorted(compiled.bridges(g.n, eu, ev, mask)) == sorted(_kernels_py.bridges(g.n, eu, ev, mask))


def test_two_edge_connectivity_agrees():
    for g, eu, ev, mask in cases(200, 2):
        assert compiled.is_two_edge_connected(g.n, eu, ev, mask) == \
            _kernels_py.is_two_edge_connected(g.n, eu, ev, mask)


def test_exact_search_agrees():
    for g, eu, ev, _ in cases(60, 3):
        if len(eu) > 18:
            continue
        for size in (g.n - 1, g.n, g.n + 2):
            a = compiled.min_2ecss(g.n, eu, ev, size, 10 ** 6)
            b = _kernels_py.min_2ecss(g.n, eu, ev, size, 10 ** 6)
            assert a[0] == b[0] and sorted(a[1]) == sorted(b[1])


def test_budget_is_reported():
    g = random_2ec(11, 8, seed=5)
    eu, ev = arrays(g)
    for mod in (compiled, _kernels_py):
        assert mod.min_2ecss(g.n, eu, ev, g.n, 2)[0] == kernels.BUDGET


def test_compiled_backend_is_default():
    assert kernels.BACKEND_NAME == "cython"


def test_pure_backend_forced_by_environment():
    env = dict(os.environ, TWOECSS_PURE="1")
    out = subprocess.run([sys.executable, "-c", "import twoecss.kernels as k; print(k.BACKEND_NAME)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
