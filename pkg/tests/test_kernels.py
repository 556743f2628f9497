import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from torsor import kernels
from torsor.algebra import zmod
from torsor.algebra.finite_ring import finite_ring_build

moduli = st.sampled_from([2, 3, 4, 6, 8, 12, 30, 36])


@st.composite
def matrices(draw):
    N = draw(moduli)
    m = draw(st.integers(1, 6))
    n = draw(st.integers(1, 6))
    A = draw(hnp.arrays(np.int64, (m, n), elements=st.integers(0, N - 1)))
    return A, N


@given(matrices())
def test_smith_is_a_diagonalisation(data):
    A, N = data
    d, P, Pinv, Q = kernels.smith_mod(A, N)
    m, n = A.shape
    D = np.zeros((m, n), dtype=np.int64)
    for i, x in enumerate(d):
        D[i, i] = x % N
    assert np.array_equal((P @ A @ Q) % N, D % N)
    assert np.array_equal((P @ Pinv) % N, np.eye(m, dtype=np.int64) % N)
    assert all(N % int(x) == 0 for x in d)


@given(matrices())
def test_backends_agree(data):
    A, N = data
    a = kernels.smith_mod(A, N, backend="numba")
    b = kernels.smith_mod(A, N, backend="numpy")
    for x, y in zip(a, b):
        assert np.array_equal(x, y)


def _brute_group_size(A, N):
    m, n = A.shape
    seen = set()
    for z in itertools.product(range(N), repeat=n):
        seen.add(tuple((A @ np.array(z)) % N))
    return len(seen)


@given(matrices())
def test_span_size_matches_enumeration(data):
    A, N = data
    if N ** A.shape[1] > 5000:
        return
    sq = zmod.Subquotient(A, np.zeros((A.shape[0], 0)), A.shape[0], N)
    assert sq.size == _brute_group_size(A, N)
    B = zmod.span_basis(A, N)
    assert B.shape[1] <= max(A.shape[0], A.shape[1])
    assert np.all(zmod.Subquotient(A, np.zeros((A.shape[0], 0)), A.shape[0], N).contains(B))
    assert np.all(zmod.Subquotient(B, np.zeros((A.shape[0], 0)), A.shape[0], N).contains(A))


@given(matrices())
def test_kernel_mod_brute(data):
    A, N = data
    if N ** A.shape[1] > 5000:
        return
    K = zmod.kernel_mod(A, N)
    assert not np.any((A @ K) % N)
    ker = [z for z in itertools.product(range(N), repeat=A.shape[1]) if not np.any((A @ np.array(z)) % N)]
    assert _brute_group_size(K, N) == len(ker) if K.size else len(ker) == 1


@pytest.mark.parametrize("backend", ["numba", "numpy"])
@pytest.mark.parametrize("name", ["Z/6", "Z/12", "F4", "F2[x]/(x^2)", "F2xF4"])
def test_ring_tables_pass(name, backend):
    R = finite_ring_build(name)
    assert kernels.check_ring_tables(R.add_table, R.mul_table, backend=backend) == -1


@pytest.mark.parametrize("backend", ["numba", "numpy"])
def test_ring_tables_catch_a_broken_product(backend):
    R = finite_ring_build("Z/6")
    mul = R.mul_table.copy()
    mul[2, 3] = 1
    assert kernels.check_ring_tables(R.add_table, mul, backend=backend) >= 0
    triples = np.array(list(itertools.product(range(6), repeat=3)), dtype=np.int64)
    a = kernels.check_ring_tables(R.add_table, mul, triples, backend="numba")
    b = kernels.check_ring_tables(R.add_table, mul, triples, backend="numpy")
    assert a == b and a >= 0


def test_env_flag_selects_numpy(monkeypatch):
    monkeypatch.setenv("TORSOR_NUMBA", "0")
    from torsor import _config
    assert not _config.use_numba()
    d, *_ = kernels.smith_mod(np.array([[2, 4], [6, 8]]), 12)
    assert sorted(int(x) for x in d) == [2, 4]
    assert np.array_equal(d, kernels.smith_mod(np.array([[2, 4], [6, 8]]), 12, backend="numpy")[0])
