"""Single-qubit pure states with exact orthogonality.

Two representations are supported:

* ``pair``  -- an unnormalized nonzero pair of complex rationals (a, b)
* ``angle`` -- a rational q in [0, 1) denoting the real unit vector
  (cos(pi q), sin(pi q)); orthogonality between angle states is the exact
  condition q_u - q_v = 1/2 (mod 1)

Equality is always judged up to a global phase; for a qubit this makes the
perpendicular state unique.
"""

from __future__ import annotations

from fractions import Fraction
from math import cos, pi

from .errors import ApproximateComparisonError, MixedRepresentationError
from .scalars import CQ0, CQ1, ApproxScalar, ComplexRational

# cos(pi*d) is rational only at these d in [0,1)  (Niven's theorem)
_RATIONAL_COS = {
    Fraction(0): Fraction(1),
    Fraction(1, 3): Fraction(1, 2),
    Fraction(1, 2): Fraction(0),
    Fraction(2, 3): Fraction(-1, 2),
}


class LocalState:
    """An unnormalized single-qubit pure state."""

    __slots__ = ("kind", "a", "b", "q")

    def __init__(self, kind, a=None, b=None, q=None):
        if kind == "pair":
            a = a if isinstance(a, ComplexRational) else ComplexRational(a)
            b = b if isinstance(b, ComplexRational) else ComplexRational(b)
            if a.is_zero() and b.is_zero():
                raise ValueError("local state must be nonzero")
        elif kind == "angle":
            q = Fraction(q) % 1
        else:
            raise ValueError(f"unknown kind {kind!r}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "q", q)

    def __setattr__(self, name, value):
        raise AttributeError("LocalState is immutable")

    @classmethod
    def pair(cls, a, b) -> "LocalState":
        return cls("pair", a=a, b=b)

    @classmethod
    def angle(cls, q) -> "LocalState":
        return cls("angle", q=q)

    @classmethod
    def ket(cls, bit: int) -> "LocalState":
        return cls.pair(1, 0) if bit == 0 else cls.pair(0, 1)

    def is_angle(self) -> bool:
        return self.kind == "angle"

    def convertible(self) -> bool:
        """True when an exact pair of coordinates exists."""
        return self.kind == "pair" or self.q in (Fraction(0), Fraction(1, 2))

    def vec2(self) -> tuple[ComplexRational, ComplexRational]:
        """Exact ambient coordinates; raises for generic angle states."""
        if self.kind == "pair":
            return (self.a, self.b)
        if self.q == 0:
            return (CQ1, CQ0)
        if self.q == Fraction(1, 2):
            return (CQ0, CQ1)
        raise ApproximateComparisonError(
            f"angle state q={self.q} has no exact coordinates"
        )

    def vec2_float(self) -> tuple[complex, complex]:
        if self.kind == "pair":
            return (self.a.to_complex(), self.b.to_complex())
        th = pi * float(self.q)
        return (complex(cos(th)), complex(cos(th - pi / 2)))

    def phase_key(self):
        """Canonical key: equal keys exactly when equal up to phase.

        Pair states are normalized so the first nonzero coordinate is 1.
        Angle states at q in {0, 1/2} share the pair keys; other angles can
        never be phase-equal to a rational pair.
        """
        if self.kind == "angle" and not self.convertible():
            return ("angle", self.q)
        a, b = self.vec2()
        if not a.is_zero():
            return ("pair", (CQ1.t, (b / a).t))
        return ("pair", (CQ0.t, CQ1.t))

    def __eq__(self, other):
        if not isinstance(other, LocalState):
            return NotImplemented
        if self.kind != other.kind:
            return False
        if self.kind == "pair":
            return self.a == other.a and self.b == other.b
        return self.q == other.q

    def __hash__(self):
        if self.kind == "pair":
            return hash(("pair", self.a, self.b))
        return hash(("angle", self.q))

    def __repr__(self):
        if self.kind == "pair":
            return f"LocalState.pair({self.a}, {self.b})"
        return f"LocalState.angle({self.q})"


KET0 = LocalState.ket(0)
KET1 = LocalState.ket(1)
PLUS = LocalState.pair(1, 1)
MINUS = LocalState.pair(1, -1)


def local_inner(u: LocalState, v: LocalState):
    """<u|v>: exact for pair x pair; exact where possible for angles.

    Angle x angle inner products are cos(pi (q_v - q_u)); the value is
    returned exactly on the rational-cosine set and as a flagged
    ApproxScalar elsewhere (the zero test is exact either way).  Mixed
    representations go through exact coordinates when the angle is 0 or
    1/2 and degrade to an ApproxScalar otherwise.
    """
    if u.kind == "pair" and v.kind == "pair":
        return u.a.conjugate() * v.a + u.b.conjugate() * v.b
    if u.kind == "angle" and v.kind == "angle":
        d = (v.q - u.q) % 1
        val = _RATIONAL_COS.get(d)
        if val is not None:
            return ComplexRational(val)
        return ApproxScalar(cos(pi * float(d)))
    if u.convertible() and v.convertible():
        ua, ub = u.vec2()
        va, vb = v.vec2()
        return ua.conjugate() * va + ub.conjugate() * vb
    ua, ub = u.vec2_float()
    va, vb = v.vec2_float()
    return ApproxScalar(ua.conjugate() * va + ub.conjugate() * vb)


def orthogonal_exact(u: LocalState, v: LocalState) -> bool:
    """Exact zero test of <u|v>; raises when only a float answer exists."""
    if u.kind == "angle" and v.kind == "angle":
        return (v.q - u.q) % 1 == Fraction(1, 2)
    if (u.kind == "pair" or u.convertible()) and (v.kind == "pair" or v.convertible()):
        ua, ub = u.vec2()
        va, vb = v.vec2()
        return (ua.conjugate() * va + ub.conjugate() * vb).is_zero()
    raise ApproximateComparisonError(
        "orthogonality of mixed representations is not exactly decidable"
    )


def approx_orthogonal(u: LocalState, v: LocalState, tol: float = 1e-12) -> bool:
    """Float orthogonality test at a configurable tolerance.

    The escape hatch for mixed representations with no exact decision;
    certificate-producing code never calls this.
    """
    val = local_inner(u, v)
    if isinstance(val, ApproxScalar):
        return abs(val.value) <= tol
    return val.is_zero()


def local_perp(v: LocalState) -> LocalState:
    """The unique (up to phase) state orthogonal to v."""
    if v.kind == "angle":
        return LocalState.angle((v.q + Fraction(1, 2)) % 1)
    return LocalState.pair(-v.b.conjugate(), v.a.conjugate())


def local_equal_up_to_phase(u: LocalState, v: LocalState) -> bool:
    """True iff u = c v for some nonzero scalar c, decided exactly.

    Raises MixedRepresentationError when the representations differ and
    neither side converts exactly.
    """
    if u.kind == "angle" and v.kind == "angle":
        return u.q == v.q
    if (u.kind == "pair" or u.convertible()) and (v.kind == "pair" or v.convertible()):
        ua, ub = u.vec2()
        va, vb = v.vec2()
        return (ua * vb - ub * va).is_zero()
    raise MixedRepresentationError(
        "no exact phase comparison between these representations"
    )
