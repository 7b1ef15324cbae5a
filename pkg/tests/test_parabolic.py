import math
import random
import threading

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import imaginary_quaternions, quaternions
from quatholo.errors import InvalidElement, NotInParabolic, PreconditionViolated
from quatholo.parabolic import (
    AlgebraSpan,
    ParabolicElement,
    basis_A1,
    basis_A2,
    basis_B,
    basis_N,
    basis_spn,
    bracket,
    bracket_via_matrices,
    contains_B,
    element,
    exp_float,
    exp_nilpotent,
    exp_semisimple,
    from_matrix,
    group_A1,
    group_A2_float,
    group_identity,
    group_P,
    group_Spn,
    is_subalgebra,
    parabolic_basis,
    parabolic_dimension,
    pr_A1,
    pr_A2,
    pr_B,
    pr_N,
    pr_spn,
    random_element,
    random_sparse_element,
    sp_dimension,
    to_matrix,
    zero,
)
from quatholo.qcore import QI, QJ, QK, QONE, QZERO, Quaternion, Scalar
from quatholo.qlinalg import basis_vector, diagonal, identity, in_sp, is_isometry, random_Sp, witt_space, zero_matrix
from quatholo.classify import real_translation_algebra


def test_to_matrix_examples():
    n = 2
    M = to_matrix(element(n, b=QI))
    nonzero = [(l, t) for l in range(4) for t in range(4) if not M[l][t].is_zero()]
    assert nonzero == [(0, 3)] and M[0][3] == QI
    assert to_matrix(element(n, a=1)) == diagonal([1, 0, 0, -1])
    assert to_matrix(element(n, a=QI)) == diagonal([-QI, 0, 0, -QI])


def test_matrix_is_in_sp(rng):
    for n in (1, 2, 3):
        e = random_element(rng, n, bound=9)
        assert in_sp(witt_space(n), to_matrix(e))


def test_invalid_element_rejected():
    with pytest.raises(InvalidElement):
        ParabolicElement(QZERO, ((QONE,),), (QZERO,), QZERO).validate()
    with pytest.raises(InvalidElement):
        ParabolicElement(QZERO, zero_matrix(1), (QZERO,), QONE).validate()


def test_bracket_examples():
    n = 1
    e1 = basis_vector(n, 0)
    assert bracket(element(n, a=QI), element(n, b=QJ)) == element(n, b=QK * 2)
    assert bracket(element(n, X=e1), element(n, X=(QI,))) == element(n, b=QI * -2)
    assert bracket(element(n, b=QI), element(n, X=(Quaternion(1, 2, 3, 4),))).is_zero()


def test_from_matrix_round_trip_and_rejects():
    e = element(2, a=1)
    assert from_matrix(to_matrix(e)) == e
    with pytest.raises(NotInParabolic):
        from_matrix(identity(4))
    M = [list(r) for r in to_matrix(element(1, a=1))]
    M[2][0] = QONE
    with pytest.raises(NotInParabolic):
        from_matrix(tuple(tuple(r) for r in M))


def test_projections():
    e = element(1, a=1, X=(QONE,), b=QI)
    assert pr_N(e) == (QONE,)
    assert pr_A2(element(1, a=Quaternion(2, 3))) == QI * 3
    assert pr_A1(element(1, a=Quaternion(2, 3))) == Scalar(2)
    assert pr_B(element(1, b=QJ)) == QJ
    assert pr_spn(element(1, A=((QK,),))) == ((QK,),)


def test_projections_sum_back(rng):
    e = random_element(rng, 2, bound=9)
    total = element(2, a=pr_A1(e) + pr_A2(e), A=pr_spn(e), X=pr_N(e), b=pr_B(e))
    assert total == e


def test_exp_nilpotent_examples():
    g = exp_nilpotent(element(1, X=(QONE,)))
    assert g == group_P((QONE,))
    assert g.mat[0][2] == Quaternion(Scalar(-1) / 2)
    g = exp_nilpotent(element(2, b=QI))
    expected = [list(r) for r in identity(4)]
    expected[0][3] = QI
    assert g.mat == tuple(tuple(r) for r in expected)
    assert exp_nilpotent(zero(2)) == group_identity(2)
    with pytest.raises(PreconditionViolated):
        exp_nilpotent(element(1, a=1))


def test_exp_nilpotent_is_in_group(rng):
    for n in (1, 2, 3):
        e = random_element(rng, n, bound=9)
        g = exp_nilpotent(ParabolicElement(QZERO, zero_matrix(n), e.X, e.b))
        assert g.violations() == []


def test_group_A1():
    assert group_A1(1, 2).mat == diagonal([2, 1, Scalar(1) / 2])
    with pytest.raises(PreconditionViolated):
        group_A1(1, -1)


def test_exp_semisimple():
    g, res = exp_semisimple(element(1, a=Quaternion._new(0.0, math.pi / 2, 0.0, 0.0)))
    assert res < 1e-12
    assert g.violations(1e-12) == []
    # e^{-a2} with a2 = i pi/2 is -i in both corners
    assert g.mat[0][0].distance(Quaternion._new(0.0, -1.0, 0.0, 0.0)) < 1e-12
    g0, res0 = exp_semisimple(zero(2))
    assert res0 < 1e-15
    assert all(g0.mat[l][t].distance(identity(4)[l][t]) < 1e-15 for l in range(4) for t in range(4))


def test_exp_semisimple_matches_a2_group():
    a2 = Quaternion._new(0.0, 0.3, -0.5, 0.7)
    g, _ = exp_semisimple(element(2, a=a2))
    h = group_A2_float(2, a2)
    assert max(g.mat[l][t].distance(h.mat[l][t]) for l in range(4) for t in range(4)) < 1e-12


def test_exp_float_matches_nilpotent(rng):
    e = element(2, X=(Quaternion(1, 2), Quaternion(0, 0, 1)), b=QK)
    g, h = exp_float(e), exp_nilpotent(e)
    assert max(g.mat[l][t].distance(h.mat[l][t]) for l in range(4) for t in range(4)) < 1e-12


def test_subalgebra_examples():
    for n in (1, 2):
        ex1 = real_translation_algebra(n, with_B=True)
        ex2 = real_translation_algebra(n, with_B=False)
        assert is_subalgebra(ex1) and contains_B(ex1)
        assert is_subalgebra(ex2) and not contains_B(ex2)
    assert not is_subalgebra(AlgebraSpan(1, [element(1, a=QI), element(1, a=QJ)]))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_dimensions(n):
    assert parabolic_dimension(n) == 2 * n * n + 5 * n + 7
    assert sp_dimension(n) == (n + 2) * (2 * n + 5)
    assert len(basis_spn(n)) == n * (2 * n + 1)


def test_component_relations():
    n = 2
    A1, A2, spn, N, B = basis_A1(n), basis_A2(n), basis_spn(n), basis_N(n), basis_B(n)
    Bspan = AlgebraSpan(n, B)
    assert all(bracket(x, y).is_zero() for x in A1 for y in A2 + spn)
    assert all(bracket(x, y).is_zero() for x in B for y in spn + N + B)
    assert all(Bspan.contains(bracket(x, y)) for x in N for y in N)


def test_span_basis_is_thread_safe(rng):
    S = AlgebraSpan(2, parabolic_basis(2))
    dims = []
    threads = [threading.Thread(target=lambda: dims.append(S.dim)) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert dims == [2 * 4 + 10 + 7] * 8


@given(st.integers(0, 2**32), st.sampled_from([1, 2]))
def test_bracket_matches_commutator(seed, n):
    r = random.Random(seed)
    x, y = random_sparse_element(r, n, 20), random_sparse_element(r, n, 20)
    assert bracket(x, y) == bracket_via_matrices(x, y)


@given(st.integers(0, 2**32))
def test_bracket_antisymmetric_and_jacobi(seed):
    r = random.Random(seed)
    x, y, z = (random_element(r, 2, 9, irrational=True) for _ in range(3))
    assert bracket(x, y) == -bracket(y, x)
    total = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y))
    assert total.is_zero()


@given(quaternions, imaginary_quaternions)
def test_a_b_bracket_is_twice_imaginary_product(a, b):
    got = bracket(element(1, a=a), element(1, b=b))
    assert got == element(1, b=(a * b).im() * 2)


@given(st.integers(0, 2**32))
def test_group_elements_preserve_metric(seed):
    r = random.Random(seed)
    f = group_A1(2, r.randint(1, 9)) * group_Spn(random_Sp(r, 2)) * exp_nilpotent(element(2, X=(Quaternion(r.randint(-3, 3)), QI)))
    assert f.violations() == []
    assert is_isometry(witt_space(2), f.mat)
