from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from upblab.errors import MixedRepresentationError
from upblab.qubits import (
    LocalState,
    local_equal_up_to_phase,
    local_inner,
    local_perp,
    orthogonal_exact,
)
from upblab.scalars import ApproxScalar, ComplexRational

rationals = st.fractions(min_value=-6, max_value=6, max_denominator=8)


@st.composite
def pair_states(draw):
    a = ComplexRational(draw(rationals), draw(rationals))
    b = ComplexRational(draw(rationals), draw(rationals))
    if a.is_zero() and b.is_zero():
        b = ComplexRational(1)
    return LocalState.pair(a, b)


angle_states = st.builds(
    LocalState.angle, st.fractions(min_value=0, max_value=1, max_denominator=64)
)


def test_inner_basis():
    assert local_inner(LocalState.ket(0), LocalState.ket(1)) == 0


def test_inner_angles():
    assert local_inner(LocalState.angle(0), LocalState.angle(Fraction(1, 2))) == 0


def test_inner_plus_minus():
    assert local_inner(LocalState.pair(1, 1), LocalState.pair(1, -1)) == 0


def test_inner_rational_cosines():
    v = local_inner(LocalState.angle(0), LocalState.angle(Fraction(1, 3)))
    assert v == ComplexRational(Fraction(1, 2))
    v = local_inner(LocalState.angle(Fraction(1, 6)), LocalState.angle(Fraction(5, 6)))
    assert v == ComplexRational(Fraction(-1, 2))


def test_inner_generic_angle_is_flagged():
    v = local_inner(LocalState.angle(0), LocalState.angle(Fraction(1, 5)))
    assert isinstance(v, ApproxScalar)


def test_inner_mixed_convertible():
    v = local_inner(LocalState.ket(1), LocalState.angle(Fraction(1, 2)))
    assert v == 1


def test_inner_mixed_generic_flagged():
    v = local_inner(LocalState.ket(0), LocalState.angle(Fraction(1, 5)))
    assert isinstance(v, ApproxScalar)


def test_perp_examples():
    assert local_equal_up_to_phase(local_perp(LocalState.ket(0)), LocalState.ket(1))
    assert local_equal_up_to_phase(
        local_perp(LocalState.pair(1, 1)), LocalState.pair(1, -1)
    )
    q = Fraction(3, 8)
    assert local_perp(LocalState.angle(q)).q == (q + Fraction(1, 2)) % 1


def test_equal_up_to_phase_examples():
    assert local_equal_up_to_phase(LocalState.ket(0), LocalState.pair(2, 0))
    assert not local_equal_up_to_phase(LocalState.pair(1, 1), LocalState.pair(1, -1))
    assert local_equal_up_to_phase(
        LocalState.angle(Fraction(1, 3)), LocalState.angle(Fraction(1, 3))
    )


def test_mixed_comparison_raises():
    with pytest.raises(MixedRepresentationError):
        local_equal_up_to_phase(LocalState.pair(1, 1), LocalState.angle(Fraction(1, 5)))


def test_approx_orthogonal_escape_hatch():
    from upblab.qubits import approx_orthogonal

    # mixed representations with no exact decision fall back to floats
    assert not approx_orthogonal(LocalState.pair(1, 0), LocalState.angle(Fraction(1, 8)))
    # (1,1) is the angle-1/4 direction, so angle 3/4 is its perp
    assert approx_orthogonal(LocalState.pair(1, 1), LocalState.angle(Fraction(3, 4)))
    # exact path still decides exactly
    assert approx_orthogonal(
        LocalState.angle(Fraction(1, 8)), LocalState.angle(Fraction(5, 8))
    )


@settings(max_examples=150, deadline=None)
@given(pair_states())
def test_perp_is_orthogonal_and_involutive(v):
    assert orthogonal_exact(local_perp(v), v)
    assert local_equal_up_to_phase(local_perp(local_perp(v)), v)


@settings(max_examples=150, deadline=None)
@given(angle_states)
def test_perp_angle(v):
    assert orthogonal_exact(local_perp(v), v)
    assert local_equal_up_to_phase(local_perp(local_perp(v)), v)


@settings(max_examples=100, deadline=None)
@given(pair_states(), pair_states())
def test_phase_equality_vs_independence_dichotomy(u, v):
    # exactly one of: equal up to phase, linearly independent
    eq = local_equal_up_to_phase(u, v)
    det = u.a * v.b - u.b * v.a
    assert eq == det.is_zero()
    if orthogonal_exact(u, v):
        assert not eq


@settings(max_examples=60, deadline=None)
@given(st.lists(pair_states(), min_size=1, max_size=5))
def test_phase_equality_is_equivalence(states):
    # reflexive, symmetric, transitive on one representation kind
    for x in states:
        assert local_equal_up_to_phase(x, x)
    for x in states:
        for y in states:
            assert local_equal_up_to_phase(x, y) == local_equal_up_to_phase(y, x)
            for z in states:
                if local_equal_up_to_phase(x, y) and local_equal_up_to_phase(y, z):
                    assert local_equal_up_to_phase(x, z)


def test_phase_key_groups_match_equality():
    xs = [
        LocalState.pair(1, 2),
        LocalState.pair(2, 4),
        LocalState.pair(0, 5),
        LocalState.ket(1),
        LocalState.angle(Fraction(1, 2)),
        LocalState.angle(0),
        LocalState.ket(0),
    ]
    for u in xs:
        for v in xs:
            try:
                eq = local_equal_up_to_phase(u, v)
            except MixedRepresentationError:
                continue
            assert eq == (u.phase_key() == v.phase_key())
