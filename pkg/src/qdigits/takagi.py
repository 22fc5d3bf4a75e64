"""Takagi-Landsberg curves and two-branch affine functional systems.

The curve family is

    T_a(x) = sum_{n>=0} a^n tau(2^n x),    tau(x) = dist(x, Z),

which converges for |a| < 1 and satisfies the two-branch system

    T_a(x/2)     = a T_a(x) + x/2,
    T_a((x+1)/2) = a T_a(x) + (1-x)/2,      T_a(0) = T_a(1) = 0.

That system is one instance of the general contractive pair

    f(x/2) = a0 f(x) + g0(x),    f((x+1)/2) = a1 f(x) + g1(x)

with affine g0, g1 and max(|a0|, |a1|) < 1, which has a unique bounded
solution as soon as the two branch images agree at the seam; the seam
condition is

    a0 g1(1)/(1 - a1) + g0(1) = a1 g0(0)/(1 - a0) + g1(0).

Dyadic arguments unwind through the branches in finitely many exact
rational steps.  Non-dyadic rational arguments get a certified float:
a partial unwinding plus a rigorous bound on the discarded remainder.

Note on the smooth member of the family: with tau = dist(x, Z) as above,
the a = 1/4 curve is the parabola 2 x (1 - x).  A widely quoted form of
this identity omits the factor 2; it is incompatible with the series
normalisation used here (already T_{1/4}(1/2) = tau(1/2) = 1/2, while
x (1 - x) gives 1/4).
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple


class InconsistentSystemError(ValueError):
    """The two branches of a functional system disagree at the seam."""


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class DyadicRational:
    """numerator / 2^exponent, stored in canonical form (odd or exponent 0)."""

    numerator: int
    exponent: int

    def __post_init__(self):
        if self.exponent < 0:
            raise ValueError("exponent must be nonnegative")
        num, exp = self.numerator, self.exponent
        while exp > 0 and num % 2 == 0:
            num //= 2
            exp -= 1
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "exponent", exp)

    @classmethod
    def from_fraction(cls, x) -> "DyadicRational":
        x = Fraction(x)
        if not _is_power_of_two(x.denominator):
            raise ValueError(f"{x} is not dyadic (denominator not a power of two)")
        return cls(x.numerator, x.denominator.bit_length() - 1)

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    def __str__(self):
        if self.exponent == 0:
            return str(self.numerator)
        return f"{self.numerator}/2^{self.exponent}"


def as_dyadic(t) -> Fraction:
    """Coerce t to a dyadic Fraction in [0, 1] or raise ValueError."""
    if isinstance(t, DyadicRational):
        t = t.value
    t = Fraction(t)
    if not 0 <= t <= 1:
        raise ValueError(f"argument {t} outside [0, 1]")
    if not _is_power_of_two(t.denominator):
        raise ValueError(f"argument {t} is not dyadic")
    return t


def nearest_int_dist(x) -> Fraction:
    """tau(x) = distance from x to the nearest integer, in [0, 1/2]."""
    x = Fraction(x)
    frac = x - math.floor(x)
    return min(frac, 1 - frac)


class CertifiedValue(NamedTuple):
    """A float approximation with a rigorous bound on its error."""

    value: float
    bound: float
    terms: int


def takagi_series(x, a, tol: float = 1e-12) -> CertifiedValue:
    """Partial sum of sum_n a^n tau(2^n x) with a certified tail bound.

    Works for any rational x and |a| < 1.  The tail after N terms is at
    most |a|^N / (2 (1 - |a|)) since tau <= 1/2; N is chosen as the
    smallest count that pushes this below tol.  The partial sum itself
    is computed exactly and rounded once at the end, so the reported
    bound is the whole story up to one float rounding.
    """
    x = Fraction(x)
    a = Fraction(a)
    if abs(a) >= 1:
        raise ValueError(
            f"|a| < 1 required for the series to converge, got a = {a}"
        )
    if tol <= 0:
        raise ValueError("tol must be positive")
    tol_exact = Fraction(tol)
    if a == 0:
        return CertifiedValue(float(nearest_int_dist(x)), 0.0, 1)

    abs_a = abs(a)
    tail = Fraction(1, 2) / (1 - abs_a)  # tail bound before any terms
    terms = 0
    while tail > tol_exact:
        tail *= abs_a
        terms += 1

    total = Fraction(0)
    power = Fraction(1)
    y = x - math.floor(x)
    for _ in range(terms):
        total += power * min(y, 1 - y)
        power *= a
        y = 2 * y
        if y >= 1:
            y -= 1
    return CertifiedValue(float(total), float(tail), terms)


def takagi_dyadic_exact(t, a) -> Fraction:
    """T_a at a dyadic rational, exactly, by finite branch unwinding.

    Each step doubles the argument (mod the branch map) and reduces its
    dyadic exponent by one, so the recursion bottoms out at 0 or 1 where
    the curve vanishes.
    """
    t = as_dyadic(t)
    a = Fraction(a)
    if abs(a) >= 1:
        raise ValueError(
            f"|a| < 1 required for the series to converge, got a = {a}"
        )
    total = Fraction(0)
    scale = Fraction(1)
    while t != 0 and t != 1:
        if t <= Fraction(1, 2):
            total += scale * t
            t = 2 * t
        else:
            total += scale * (1 - t)
            t = 2 * t - 1
        scale *= a
    return total


# ---------------------------------------------------------------------------
# general two-branch systems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AffineMap:
    """x -> slope * x + intercept over the rationals."""

    slope: Fraction
    intercept: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "slope", Fraction(self.slope))
        object.__setattr__(self, "intercept", Fraction(self.intercept))

    def __call__(self, x) -> Fraction:
        return self.slope * Fraction(x) + self.intercept

    def __str__(self):
        return f"{self.slope}*x + {self.intercept}"


@dataclass(frozen=True)
class DeRhamSystem:
    """A contractive two-branch affine functional system.

    f(x/2) = a0 f(x) + g0(x) on the left half, f((x+1)/2) = a1 f(x) + g1(x)
    on the right.  Construction enforces contraction only; consistency at
    the seam is a separate check so that deliberately broken systems can
    be built and reported on.
    """

    a0: Fraction
    a1: Fraction
    g0: AffineMap
    g1: AffineMap

    def __post_init__(self):
        object.__setattr__(self, "a0", Fraction(self.a0))
        object.__setattr__(self, "a1", Fraction(self.a1))
        if max(abs(self.a0), abs(self.a1)) >= 1:
            raise ValueError(
                "contraction requires max(|a0|, |a1|) < 1, got "
                f"a0 = {self.a0}, a1 = {self.a1}"
            )

    @classmethod
    def takagi(cls, a) -> "DeRhamSystem":
        a = Fraction(a)
        return cls(a, a, AffineMap(Fraction(1, 2)), AffineMap(Fraction(-1, 2), Fraction(1, 2)))

    @property
    def left_value(self) -> Fraction:
        """f(0), forced by the left branch fixed point."""
        return self.g0(0) / (1 - self.a0)

    @property
    def right_value(self) -> Fraction:
        """f(1), forced by the right branch fixed point."""
        return self.g1(1) / (1 - self.a1)


class ConsistencyResult(NamedTuple):
    consistent: bool
    residual: Fraction


def derham_consistency(sys: DeRhamSystem) -> ConsistencyResult:
    """Check the seam condition; residual is (left expression - right)."""
    left = sys.a0 * sys.g1(1) / (1 - sys.a1) + sys.g0(1)
    right = sys.a1 * sys.g0(0) / (1 - sys.a0) + sys.g1(0)
    residual = left - right
    return ConsistencyResult(residual == 0, residual)


def derham_eval(sys: DeRhamSystem, x, tol: float = 1e-12, mode: str = "exact-dyadic"):
    """Evaluate the solution of a consistent system at x in [0, 1].

    mode="exact-dyadic" (default): x must be dyadic; returns an exact
    Fraction by finite unwinding.  mode="certified-approx": x may be any
    rational in [0, 1]; returns a CertifiedValue whose bound is at most
    tol.  If the approx walk lands exactly on 0 or 1 it finishes exactly
    with bound 0.
    """
    ok, residual = derham_consistency(sys)
    if not ok:
        raise InconsistentSystemError(
            f"branches disagree at the seam (residual {residual})"
        )
    if mode == "exact-dyadic":
        t = as_dyadic(x)
        mult = Fraction(1)
        add = Fraction(0)
        while t != 0 and t != 1:
            if t <= Fraction(1, 2):
                y = 2 * t
                add += mult * sys.g0(y)
                mult *= sys.a0
            else:
                y = 2 * t - 1
                add += mult * sys.g1(y)
                mult *= sys.a1
            t = y
        endpoint = sys.left_value if t == 0 else sys.right_value
        return add + mult * endpoint
    if mode != "certified-approx":
        raise ValueError(f"unknown mode {mode!r}")

    t = Fraction(x)
    if not 0 <= t <= 1:
        raise ValueError(f"argument {t} outside [0, 1]")
    if tol <= 0:
        raise ValueError("tol must be positive")
    a_max = max(abs(sys.a0), abs(sys.a1))
    g_max = max(
        abs(sys.g0(0)), abs(sys.g0(1)), abs(sys.g1(0)), abs(sys.g1(1))
    )
    f_bound = g_max / (1 - a_max)
    tol_exact = Fraction(tol)

    mult = Fraction(1)
    add = Fraction(0)
    steps = 0
    while abs(mult) * f_bound > tol_exact:
        if t == 0 or t == 1:
            endpoint = sys.left_value if t == 0 else sys.right_value
            return CertifiedValue(float(add + mult * endpoint), 0.0, steps)
        if t <= Fraction(1, 2):
            y = 2 * t
            add += mult * sys.g0(y)
            mult *= sys.a0
        else:
            y = 2 * t - 1
            add += mult * sys.g1(y)
            mult *= sys.a1
        t = y
        steps += 1
    return CertifiedValue(float(add), float(abs(mult) * f_bound), steps)
