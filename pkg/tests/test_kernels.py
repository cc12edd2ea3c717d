import itertools

import pytest
from hypothesis import given, settings, strategies as st

from pcfv import _pykernels, kernels


def brute(n_pos, n_dom, tables, le_pairs, le_dom, constraints, plot_sets):
    out = []
    for f in itertools.product(range(n_dom), repeat=n_pos):
        if any(not le_dom[f[i] * n_dom + f[j]] for i, j in le_pairs):
            continue
        if all(tuple(tables[f[h]][g] for h, g in zip(hp, gv)) in plot_sets[s] for hp, gv, s in constraints):
            out.append(f)
    return out


@st.composite
def problems(draw):
    n_pos = draw(st.integers(0, 4))
    n_dom = draw(st.integers(1, 4))
    width = draw(st.integers(1, 3))
    n_val = draw(st.integers(1, 3))
    tables = [tuple(draw(st.integers(0, n_val - 1)) for _ in range(width)) for _ in range(n_dom)]
    le_dom = bytearray(n_dom * n_dom)
    for i in range(n_dom):
        le_dom[i * n_dom + i] = 1
        for j in range(i + 1, n_dom):
            le_dom[i * n_dom + j] = draw(st.booleans())
    pos_pairs = [(i, j) for i in range(n_pos) for j in range(n_pos) if i != j]
    le_pairs = draw(st.lists(st.sampled_from(pos_pairs), max_size=3)) if pos_pairs else []
    sets, cons = [], []
    for _ in range(draw(st.integers(0, 3))):
        k = draw(st.integers(1, 3))
        if n_pos == 0:
            break
        hpos = tuple(draw(st.integers(0, n_pos - 1)) for _ in range(k))
        gvals = tuple(draw(st.integers(0, width - 1)) for _ in range(k))
        allowed = draw(st.sets(st.tuples(*[st.integers(0, n_val - 1)] * k), max_size=n_val ** k))
        sets.append(frozenset(allowed))
        cons.append((hpos, gvals, len(sets) - 1))
    return n_pos, n_dom, tables, le_pairs, bytes(le_dom), cons, sets, n_val


@settings(max_examples=300, deadline=None)
@given(problems())
def test_backends_agree_with_brute_force(p):
    n_pos, n_dom, tables, le_pairs, le_dom, cons, sets, n_val = p
    expected = sorted(brute(n_pos, n_dom, tables, le_pairs, le_dom, cons, sets))
    for backend in ("python", "cython"):
        got = kernels.search(n_pos, n_dom, tables, le_pairs, le_dom, cons, sets, 10**6,
                             n_val=n_val, backend=backend)
        assert sorted(got) == expected
        assert kernels.count(n_pos, n_dom, tables, le_pairs, le_dom, cons, sets,
                             n_val=n_val, backend=backend) == len(expected)


@pytest.mark.parametrize("backend", ["python", "cython"])
def test_cap_returns_none(backend):
    got = kernels.search(3, 3, kernels.identity_tables(3), [], bytes([1, 0, 0, 0, 1, 0, 0, 0, 1]),
                         [], [], 5, backend=backend)
    assert got is None


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")


@pytest.mark.skipif(kernels._compiled is None, reason="compiled kernel not built")
def test_benchmark_backends_agree(capsys):
    import importlib.util
    from pathlib import Path
    path = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"
    spec = importlib.util.spec_from_file_location("bench_kernels", path)
    bench = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(bench)
    assert bench.main(["--repeat", "1"]) == 0
    assert "speedup" in capsys.readouterr().out
