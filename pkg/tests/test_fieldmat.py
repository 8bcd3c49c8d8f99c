"""Unit and property tests for the GF(p) linear algebra layer."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monocat.fieldmat import (
    FpContext,
    FpMatrix,
    ModulusMismatch,
    Subspace,
    block_diag,
    cokernel,
    column_echelon,
    hstack,
    is_prime,
    kernel_basis,
    kron,
    rank,
    rref,
    solve,
    solve_matrix,
    vstack,
)

PRIMES = [2, 3, 5]


def mats(p, max_dim=6):
    dims = st.integers(min_value=0, max_value=max_dim)
    return st.tuples(dims, dims).flatmap(
        lambda rc: st.lists(
            st.lists(st.integers(0, p - 1), min_size=rc[1], max_size=rc[1]),
            min_size=rc[0],
            max_size=rc[0],
        ).map(
            lambda rows: FpMatrix(
                p, np.array(rows, dtype=np.int64).reshape(rc[0], rc[1])
            )
        )
    )


any_mat = st.sampled_from(PRIMES).flatmap(mats)


# --- frozen examples ---------------------------------------------------------


def test_is_prime():
    assert [q for q in range(20) if is_prime(q)] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert not is_prime(2**16 + 1 - 2)  # 65535 = 3 * 5 * 17 * 257
    assert is_prime(2**31 - 1)


def test_context_rejects_bad_modulus():
    with pytest.raises(ValueError):
        FpContext(4)
    with pytest.raises(ValueError):
        FpContext(1)


def test_rref_repeated_row():
    r, rk, piv = rref(FpMatrix(2, [[1, 1], [1, 1]]))
    assert rk == 1
    assert r.to_lists() == [[1, 1], [0, 0]]


def test_rref_identity():
    ident = FpContext(5).identity(3)
    r, rk, piv = rref(ident)
    assert rk == 3
    assert r.to_lists() == ident.to_lists()
    assert list(piv) == [0, 1, 2]


def test_rref_proportional_rows():
    r, rk, piv = rref(FpMatrix(5, [[2, 4], [1, 2]]))
    assert rk == 1
    assert r.to_lists() == [[1, 2], [0, 0]]
    assert list(piv) == [0]


def test_kernel_identity_and_zero():
    assert kernel_basis(FpContext(5).identity(2)).dim == 0
    assert kernel_basis(FpContext(5).zeros(2, 3)).dim == 3


def test_kernel_line():
    ker = kernel_basis(FpMatrix(5, [[1, 2]]))
    assert ker.dim == 1
    assert ker.contains(np.array([3, 1]))


def test_solve_scalar():
    x = solve(FpMatrix(5, [[2]]), [1])
    assert x is not None and list(x) == [3]


def test_solve_identity():
    x = solve(FpContext(5).identity(2), [4, 0])
    assert list(x) == [4, 0]


def test_solve_free_variable_convention():
    x = solve(FpMatrix(2, [[1, 1]]), [1])
    assert list(x) == [1, 0]


def test_solve_inconsistent():
    assert solve(FpMatrix(5, [[1], [0]]), [0, 1]) is None


def test_cokernel_examples():
    proj, section = cokernel(FpContext(5).identity(3))
    assert proj.shape == (0, 3)
    proj, section = cokernel(FpContext(5).zeros(2, 3))
    assert proj.to_lists() == [[1, 0], [0, 1]]
    proj, section = cokernel(FpMatrix(5, [[1], [2]]))
    assert proj.shape == (1, 2)


def test_kron_examples():
    c = FpMatrix(5, [[3]])
    b = FpMatrix(5, [[1, 2], [3, 4]])
    assert kron(c, b).to_lists() == [[3, 6 % 5], [9 % 5, 12 % 5]]
    a = FpContext(5).zeros(2, 3)
    assert kron(a, FpContext(5).zeros(4, 5)).shape == (8, 15)
    i2, i3 = FpContext(5).identity(2), FpContext(5).identity(3)
    assert kron(i2, i3).to_lists() == FpContext(5).identity(6).to_lists()


def test_modulus_mismatch():
    with pytest.raises(ModulusMismatch):
        FpMatrix(2, [[1]]) @ FpMatrix(3, [[1]])
    with pytest.raises(ModulusMismatch):
        hstack([FpMatrix(2, [[1]]), FpMatrix(3, [[1]])])


def test_stack_and_block_diag():
    a = FpMatrix(5, [[1, 2]])
    b = FpMatrix(5, [[3, 4]])
    assert hstack([a, b]).to_lists() == [[1, 2, 3, 4]]
    assert vstack([a, b]).to_lists() == [[1, 2], [3, 4]]
    assert block_diag(5, [a, b]).to_lists() == [[1, 2, 0, 0], [0, 0, 3, 4]]


def test_matrix_is_immutable():
    a = FpMatrix(5, [[1, 2]])
    with pytest.raises(ValueError):
        a.a[0, 0] = 3


# --- properties --------------------------------------------------------------


@settings(max_examples=120, deadline=None)
@given(any_mat)
def test_rank_nullity(a):
    assert rank(a) + kernel_basis(a).dim == a.shape[1]


@settings(max_examples=120, deadline=None)
@given(any_mat)
def test_rref_is_canonical_and_equivalent(a):
    r, rk, piv = rref(a)
    r2, rk2, piv2 = rref(r)
    assert (r2.to_lists(), rk2, list(piv2)) == (r.to_lists(), rk, list(piv))
    assert rk == rank(a)
    # row spaces agree: stacking changes nothing
    assert rank(vstack([a, r])) == rk


@settings(max_examples=120, deadline=None)
@given(any_mat)
def test_kernel_vectors_annihilate(a):
    ker = kernel_basis(a)
    if ker.dim:
        prod = a @ ker.basis
        assert not prod.a.any()


@settings(max_examples=120, deadline=None)
@given(any_mat)
def test_column_echelon_preserves_span(a):
    ech, rk, pivot_rows = column_echelon(a)
    assert rk == rank(a)
    assert ech.shape == (a.shape[0], rk)
    assert rank(hstack([a, ech])) == rk
    ech2, rk2, _ = column_echelon(ech)
    assert ech2.to_lists() == ech.to_lists() and rk2 == rk


@settings(max_examples=120, deadline=None)
@given(any_mat, st.integers(0, 10**6))
def test_solve_exactness(a, salt):
    rng = np.random.default_rng(salt)
    if a.shape[1]:
        x = rng.integers(0, a.p, size=a.shape[1])
    else:
        x = np.zeros(0, dtype=np.int64)
    b = (a.a @ x) % a.p
    got = solve(a, b)
    assert got is not None
    assert ((a.a @ got) % a.p == b).all()


@settings(max_examples=120, deadline=None)
@given(any_mat)
def test_solve_none_means_inconsistent(a):
    b = np.ones(a.shape[0], dtype=np.int64)
    got = solve(a, b)
    aug = hstack([a, FpMatrix(a.p, b.reshape(-1, 1))])
    if got is None:
        assert rank(aug) == rank(a) + 1
    else:
        assert ((a.a @ got) % a.p == b % a.p).all()


@settings(max_examples=120, deadline=None)
@given(any_mat)
def test_cokernel_identities(a):
    proj, section = cokernel(a)
    assert proj.shape[1] == a.shape[0]
    assert proj.shape[0] == a.shape[0] - rank(a)
    if a.shape[1]:
        assert not (proj @ a).a.any()
    comp = proj @ section
    assert comp.to_lists() == FpContext(a.p).identity(proj.shape[0]).to_lists()


@settings(max_examples=120, deadline=None)
@given(any_mat)
def test_solve_matrix_consistency(a):
    # A X = A always has the identity as a solution candidate set
    got = solve_matrix(a, a)
    assert got is not None
    assert ((a.a @ got.a) % a.p == a.a).all()


@settings(max_examples=120, deadline=None)
@given(any_mat)
def test_determinism(a):
    r1 = rref(a)
    r2 = rref(FpMatrix(a.p, a.a.copy()))
    assert r1[0].to_lists() == r2[0].to_lists()
    assert cokernel(a)[0].to_lists() == cokernel(a)[0].to_lists()


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(PRIMES), st.data())
def test_subspace_membership(p, data):
    a = data.draw(mats(p))
    ker = kernel_basis(a)
    assert ker.contains_subspace(ker)
    for j in range(ker.dim):
        assert ker.contains(ker.basis.a[:, j])
    # a redundantly-presented copy spans the same set
    if ker.dim:
        doubled = hstack([ker.basis, ker.basis])
        again = Subspace(p, ker.ambient_dim, doubled)
        assert again.contains_subspace(ker) and ker.contains_subspace(again)
