"""The binary odometer on a finite register.

States are finite binary words x = (x_1, ..., x_L), least significant
digit first.  The odometer map is addition of 1 with carry; it is
undefined on the all-ones word (the register would overflow).  The
integer value of a prefix is Num(x_1..x_n) = sum_i x_i 2^(i-1), so the
odometer successor adds exactly one to every prefix value it does not
carry out of.

The weighted digit sum of a state is sum_i x_i q^i; for |q| < 1 the
corresponding infinite-word sum converges and truncation at length L is
off by at most |q|^(L+1) / (1 - |q|).

A stabilising level for run length r is a position n such that the r
digits x_(n-r+1)..x_n are all zero; equivalently the prefix ratio
Num(x_1..x_n) / 2^n is below 2^(-r).  Orbits started at such states stay
close to the zero orbit at scale 2^n, which is what the limiting-curve
experiments exploit.
"""

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .digitsum import QParam, weighted_digit_sum


class RegisterOverflowError(OverflowError):
    """Successor or orbit would carry out of the register."""


class NoStabilizingLevelError(LookupError):
    """No zero run of the requested length exists in the register."""


@dataclass(frozen=True)
class OdometerState:
    """An immutable register; bits[0] is the least significant digit."""

    bits: tuple[int, ...]
    origin: str = "explicit"
    seed: int | None = None

    def __post_init__(self):
        if len(self.bits) == 0:
            raise ValueError("register must have at least one digit")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("digits must be 0 or 1")

    @classmethod
    def zeros(cls, length: int) -> "OdometerState":
        if length < 1:
            raise ValueError("length must be >= 1")
        return cls((0,) * length, origin="zero")

    @classmethod
    def from_int(cls, value: int, length: int) -> "OdometerState":
        if value < 0:
            raise ValueError("value must be nonnegative")
        if value.bit_length() > length:
            raise ValueError(f"value {value} does not fit in {length} digits")
        return cls(tuple((value >> i) & 1 for i in range(length)))

    @classmethod
    def random_state(cls, seed: int, length: int) -> "OdometerState":
        """Deterministic seeded register (independent draws per digit)."""
        if length < 1:
            raise ValueError("length must be >= 1")
        rng = random.Random(seed)
        value = rng.getrandbits(length)
        return cls(
            tuple((value >> i) & 1 for i in range(length)),
            origin=f"seeded-random(seed={seed}, length={length})",
            seed=seed,
        )

    @property
    def length(self) -> int:
        return len(self.bits)


def num_value(s: OdometerState, n: int | None = None) -> int:
    """Num(x_1..x_n) = sum_i x_i 2^(i-1); whole register when n is None."""
    if n is None:
        n = s.length
    if not 0 <= n <= s.length:
        raise ValueError(f"prefix length {n} outside register of length {s.length}")
    value = 0
    for i in range(n):
        value |= s.bits[i] << i
    return value


def successor(s: OdometerState) -> OdometerState:
    """Add one with carry; raises RegisterOverflowError on all ones."""
    bits = list(s.bits)
    for i, b in enumerate(bits):
        if b == 0:
            bits[i] = 1
            return OdometerState(tuple(bits))
        bits[i] = 0
    raise RegisterOverflowError("successor of the all-ones register")


class StateSum(NamedTuple):
    """Weighted digit sum of a register with its truncation tail bound."""

    value: Fraction
    tail_bound: Fraction


def weighted_sum_state(s: OdometerState, p: QParam) -> StateSum:
    """sum_i x_i q^i over the register, plus the infinite-tail bound.

    Requires |q| < 1: the bound |q|^(L+1) / (1 - |q|) on the ignored
    digits beyond the register is otherwise meaningless.
    """
    if abs(p.q) >= 1:
        raise ValueError("|q| < 1 required for a finite tail bound")
    value = weighted_digit_sum(num_value(s), p)
    tail = abs(p.q) ** (s.length + 1) / (1 - abs(p.q))
    return StateSum(value, tail)


def orbit_partial_sums(s: OdometerState, p: QParam, count: int) -> list[Fraction]:
    """Partial sums 0, f(x), f(x) + f(Tx), ... of the state digit sum
    along the odometer orbit, count steps, literal stepping.

    The whole orbit must fit in the register: Num(x) + count <= 2^L.
    """
    if count < 0:
        raise ValueError("count must be nonnegative")
    if num_value(s) + count > (1 << s.length):
        raise RegisterOverflowError(
            f"orbit of length {count} carries out of the {s.length}-digit register"
        )
    q = p.q
    powers = [q ** (i + 1) for i in range(s.length)]
    sums = [Fraction(0)]
    state = s
    for step in range(count):
        term = sum(
            (powers[i] for i in range(state.length) if state.bits[i]),
            Fraction(0),
        )
        sums.append(sums[-1] + term)
        if step + 1 < count:
            state = successor(state)
    return sums


@dataclass(frozen=True)
class StabilizingLevel:
    """A position whose trailing r digits are zero.

    position is the level n, prefix_end = n - r marks where the digits
    that may be nonzero stop, and ratio = Num(x_1..x_n)/2^n < 2^(-r).
    """

    position: int
    prefix_end: int
    run_length: int
    ratio: Fraction


def find_stabilizing_levels(
    s: OdometerState, r: int, max_levels: int = 1
) -> list[StabilizingLevel]:
    """Positions n <= L whose digits x_(n-r+1)..x_n are all zero.

    Returned in increasing order, at most max_levels of them.  Raises
    NoStabilizingLevelError if the register contains none at all.
    """
    if r < 1:
        raise ValueError("run length r must be >= 1")
    if max_levels < 1:
        raise ValueError("max_levels must be >= 1")
    levels: list[StabilizingLevel] = []
    zero_run = 0
    prefix = 0
    for i, b in enumerate(s.bits):
        prefix |= b << i
        zero_run = zero_run + 1 if b == 0 else 0
        n = i + 1
        if zero_run >= r:
            ratio = Fraction(prefix, 1 << n)
            level = StabilizingLevel(n, n - r, r, ratio)
            assert ratio < Fraction(1, 1 << r)
            levels.append(level)
            if len(levels) == max_levels:
                return levels
    if not levels:
        raise NoStabilizingLevelError(
            f"no run of {r} zeros in the {s.length}-digit register"
        )
    return levels
