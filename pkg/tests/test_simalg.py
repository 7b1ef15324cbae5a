import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import rational_quaternions
from quatholo.errors import InvalidElement, NotIsotropic, PoleInput
from quatholo.parabolic import (
    ParabolicGroupElement,
    basis_B,
    bracket,
    element,
    exp_nilpotent,
    group_A1,
    group_A2_float,
    group_P,
    group_Spn,
    parabolic_basis,
    random_element,
)
from quatholo.qcore import HALF_SQRT2, QI, QJ, QK, QONE, QZERO, Quaternion
from quatholo.qlinalg import basis_vector, identity, mat_scale, random_qvector, random_Sp, zero_vector
from quatholo.simalg import (
    F_group,
    F_map,
    SimSpan,
    SpherePoint,
    affine_reduction_element,
    boundary_point,
    dF,
    dF_numeric,
    dF_span,
    dilation,
    on_line_through_pole,
    pole,
    quaternionic_dilation,
    rotation,
    sim_bracket,
    sim_element,
    sim_identity,
    stereo_s1,
    stereo_s2,
    translation,
)


def _random_exact_group(rng, n):
    a1 = Fraction(rng.randint(1, 9), rng.randint(1, 9))
    Y = random_qvector(rng, n, bound=9)
    b = Quaternion(0, rng.randint(-5, 5), rng.randint(-5, 5), rng.randint(-5, 5))
    return group_A1(n, a1) * group_Spn(random_Sp(rng, n)) * group_P(Y, b)


# -- sphere ---------------------------------------------------------------------------


def test_boundary_point_examples():
    n = 2
    p, q = basis_vector(n + 2, 0), basis_vector(n + 2, n + 1)
    assert boundary_point(p) == pole(n)
    assert boundary_point(p).w == (QZERO, QZERO, QONE)
    assert boundary_point(q).w == (QZERO, QZERO, -QONE)
    assert boundary_point(tuple(QI * 2 * x for x in p)) == boundary_point(p)
    with pytest.raises(NotIsotropic):
        boundary_point(basis_vector(n + 2, 1))
    with pytest.raises(NotIsotropic):
        boundary_point(zero_vector(n + 2))


def test_stereo_examples():
    n = 2
    south = SpherePoint((QZERO, QZERO, -QONE))
    assert stereo_s1(south) == (QZERO, QZERO)
    assert stereo_s1(SpherePoint((QONE, QZERO, QZERO))) == (QONE, QZERO)
    assert stereo_s2((QZERO, QZERO)) == south
    assert stereo_s2((QONE, QZERO)) == SpherePoint((QONE, QZERO, QZERO))
    with pytest.raises(PoleInput):
        stereo_s1(pole(n))


def test_stereo_image_avoids_pole_and_lies_on_sphere(rng):
    for _ in range(100):
        u = random_qvector(rng, 2, bound=20)
        s = stereo_s2(u)
        assert s.violations() == []
        assert not s.is_pole()


@given(st.lists(rational_quaternions, min_size=2, max_size=2))
def test_s1_after_s2_is_identity(u):
    u = tuple(u)
    s = stereo_s2(u)
    assert stereo_s1(s) == u
    assert on_line_through_pole(s, u)
    assert stereo_s2(stereo_s1(s)) == s


def test_s1_defining_property_rejects_wrong_points(rng):
    u = random_qvector(rng, 2, bound=9)
    s = stereo_s2(u)
    assert not on_line_through_pole(s, tuple(x + QONE for x in u))


# -- F on group elements ------------------------------------------------------------------


def test_F_closed_form_images():
    n = 2
    e1 = basis_vector(n, 0)
    assert F_group(group_A1(n, 2)) == dilation(n, 2)
    assert F_group(exp_nilpotent(element(n, X=e1))) == translation((Quaternion(-HALF_SQRT2), QZERO))
    assert F_group(ParabolicGroupElement(mat_scale(-1, identity(n + 2)))) == sim_identity(n)
    for b in (QI, QJ, QK):
        assert F_group(exp_nilpotent(element(n, b=b))) == sim_identity(n)


def test_F_on_sp_n(rng):
    f = random_Sp(rng, 2)
    assert F_group(group_Spn(f)) == rotation(f)


def test_F_on_exact_A2_element():
    # diag(c, E, c) with a rational unit quaternion c
    c = Quaternion(Fraction(3, 5), Fraction(4, 5))
    M = tuple(tuple(c if l == t and l in (0, 3) else (QONE if l == t else QZERO) for t in range(4)) for l in range(4))
    assert F_group(ParabolicGroupElement(M)) == quaternionic_dilation(2, c.conj())


def test_F_on_float_A2_is_left_multiplication():
    a2 = Quaternion._new(0.0, 0.4, -0.2, 0.9)
    got = F_group(group_A2_float(2, a2))
    theta = math.sqrt(0.4**2 + 0.2**2 + 0.9**2)
    u = Quaternion._new(math.cos(theta), *(c * math.sin(theta) / theta for c in (0.4, -0.2, 0.9)))
    assert got.residual(quaternionic_dilation(2, u)) < 1e-9


def test_F_rejects_non_parabolic():
    swap = tuple(tuple(QONE if l + t == 2 else QZERO for t in range(3)) for l in range(3))
    with pytest.raises(InvalidElement):
        F_group(ParabolicGroupElement(swap))


def test_affine_reduction_element(rng):
    Y = random_qvector(rng, 2, bound=9)
    assert F_group(affine_reduction_element(Y)) == translation(Y)


def test_F_map_matches_fit(rng):
    f = _random_exact_group(rng, 1)
    fitted = F_group(f)
    for _ in range(5):
        Y = random_qvector(rng, 1, bound=9)
        assert F_map(f, Y) == fitted(Y)


@pytest.mark.parametrize("n", [1, 2])
def test_F_is_homomorphism(n):
    rng = random.Random(100 + n)
    for _ in range(8):
        f1, f2 = _random_exact_group(rng, n), _random_exact_group(rng, n)
        assert F_group(f1 * f2) == F_group(f1) * F_group(f2)


def test_sim_group_laws(rng):
    g = F_group(_random_exact_group(rng, 2))
    h = F_group(_random_exact_group(rng, 2))
    assert g * g.inverse() == sim_identity(2)
    X = random_qvector(rng, 2, bound=9)
    assert (g * h)(X) == g(h(X))
    # f t(X) f^-1 = t(f X), with f linear
    lin = rotation(random_Sp(rng, 2)) * dilation(2, 3) * quaternionic_dilation(2, Quaternion(Fraction(3, 5), 0, Fraction(4, 5)))
    assert lin * translation(X) * lin.inverse() == translation(lin(X))


def test_canonical_sign():
    f = random_Sp(random.Random(1), 1)
    a = F_group(group_Spn(f))
    flipped = type(a)(a.a1, -a.u, mat_scale(-1, a.f), a.v)
    assert flipped == a
    assert flipped.canonical().u.w.sign() >= 0


# -- dF -----------------------------------------------------------------------------------


def test_dF_examples():
    n = 2
    for b in basis_B(n):
        assert dF(b).is_zero()
    assert dF(element(n, a=1)) == sim_element(n, lam=1)
    assert dF(element(n, X=basis_vector(n, 0))) == sim_element(n, v=(Quaternion(-HALF_SQRT2), QZERO))


def test_sim_bracket_examples():
    n = 2
    v = (Quaternion(1, 2), QJ)
    e1 = basis_vector(n, 0)
    assert sim_bracket(sim_element(n, lam=1), sim_element(n, v=v)) == sim_element(n, v=v)
    assert sim_bracket(sim_element(n, s=QI), sim_element(n, v=e1)) == sim_element(n, v=(QI, QZERO))
    assert sim_bracket(sim_element(n, v=v), sim_element(n, v=e1)).is_zero()


@pytest.mark.parametrize("n", [1, 2, 3])
def test_dF_kernel_is_B(n):
    S = dF_span(type("Full", (), {"n": n, "basis": lambda self: parabolic_basis(n)})())
    assert S.dim == len(parabolic_basis(n)) - 3


@given(st.integers(0, 2**32))
def test_dF_is_bracket_homomorphism(seed):
    r = random.Random(seed)
    x, y = random_element(r, 2, 9), random_element(r, 2, 9)
    assert dF(bracket(x, y)) == sim_bracket(dF(x), dF(y))


def test_dF_matches_numeric_derivative(rng):
    for _ in range(3):
        e = random_element(rng, 2, bound=3)
        num = dF_numeric(e)
        ex = dF(e).flatten()
        assert max(abs(float(a) - float(b)) for a, b in zip(num.flatten(), ex)) < 1e-7


@given(st.integers(0, 2**32))
def test_sim_bracket_jacobi(seed):
    r = random.Random(seed)
    xs = [dF(random_element(r, 2, 9)) for _ in range(3)]
    a, b, c = xs
    total = sim_bracket(a, sim_bracket(b, c)) + sim_bracket(b, sim_bracket(c, a)) + sim_bracket(c, sim_bracket(a, b))
    assert total.is_zero()


def test_sim_span_translations():
    n = 2
    S = SimSpan(n, [sim_element(n, lam=1, v=basis_vector(n, 0)), sim_element(n, v=(QZERO, QI))])
    assert S.dim == 2
    assert SimSpan(n, [sim_element(n, v=v) for v in S.translations()]) == SimSpan(n, [sim_element(n, v=(QZERO, QI))])
