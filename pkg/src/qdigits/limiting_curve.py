"""Limiting curves of odometer ergodic sums.

Take partial sums S(0..l) of the weighted digit sum along an odometer
orbit, interpolate the points (j/l, S(j) - (j/l) S(l)), and rescale by a
normalizer R.  For the orbit started at zero and l = 2^j the rescaled
polygon with R = (2q)^(j-1) IS the curve -q T_a, a = 1/(2q), exactly at
every breakpoint; that is the bridge identity this module verifies.

For orbits started elsewhere, stabilising levels of the register (runs
of r zero digits ending at position n) give lengths l = 2^n at which the
orbit polygon approaches the same limit curve as r grows: the prefix
value Num/2^n < 2^(-r) controls the distance.  theorem1_experiment
measures those sup distances exactly, at astronomically large l, via the
progression evaluator (the orbit is never stepped literally; partial
sums along it are differences S_q(X + i) - S_q(X) of the integer
summatory function, which handles every carry exactly).

The 1/2 < |q| < 1 window is where all of this lives: below it no
continuous limit curve exists (an exploratory CLI mode lets one watch
that fail); at or above |q| = 1 the state sums themselves diverge.
"""

from dataclasses import dataclass
from fractions import Fraction

from .digitsum import QParam, partial_sum_prefix, partial_sum_progression
from .odometer import (
    OdometerState,
    RegisterOverflowError,
    find_stabilizing_levels,
    num_value,
)
from .report import VerificationReport
from .takagi import takagi_dyadic_exact


class GridMismatchError(ValueError):
    """Two curves were compared on different grids."""


class DegenerateNormalizerError(ValueError):
    """The requested normalizer is zero (flat deviation polygon)."""


@dataclass(frozen=True)
class CurveSamples:
    """A sampled curve on a strictly increasing grid over [0, 1]."""

    grid: tuple[Fraction, ...]
    values: tuple
    mode: str = "exact"

    def __post_init__(self):
        if len(self.grid) != len(self.values):
            raise ValueError("grid and values must have equal length")
        if len(self.grid) < 2:
            raise ValueError("a curve needs at least two samples")
        if self.grid[0] != 0 or self.grid[-1] != 1:
            raise ValueError("grid must span [0, 1]")
        if any(a >= b for a, b in zip(self.grid, self.grid[1:])):
            raise ValueError("grid must be strictly increasing")
        if self.mode not in ("exact", "approx"):
            raise ValueError(f"unknown mode {self.mode!r}")


def build_fluctuation_curve(partial_sums, l: int, normalizer) -> CurveSamples:
    """Rescaled deviation polygon of an orbit's partial sums.

    partial_sums must be the l+1 values S(0..l) with S(0) = 0; the curve
    value at t = j/l is (S(j) - t S(l)) / normalizer.
    """
    if l < 1:
        raise ValueError("l must be >= 1")
    sums = list(partial_sums)
    if len(sums) != l + 1:
        raise ValueError(f"need {l + 1} partial sums, got {len(sums)}")
    if sums[0] != 0:
        raise ValueError("partial sums must start at 0")
    normalizer = Fraction(normalizer)
    if normalizer == 0:
        raise DegenerateNormalizerError("zero normalizer")
    total = sums[-1]
    grid = tuple(Fraction(j, l) for j in range(l + 1))
    values = tuple(
        (sums[j] - Fraction(j, l) * total) / normalizer for j in range(l + 1)
    )
    return CurveSamples(grid, values, "exact")


def canonical_normalizer(partial_sums, l: int) -> Fraction:
    """Largest absolute deviation max_j |S(j) - (j/l) S(l)|.

    This is the scale on which the deviation polygon has sup-norm one.
    Raises DegenerateNormalizerError when the polygon is identically
    zero (linear partial sums), where no curve shape exists.
    """
    if l < 1:
        raise ValueError("l must be >= 1")
    sums = list(partial_sums)
    if len(sums) != l + 1:
        raise ValueError(f"need {l + 1} partial sums, got {len(sums)}")
    total = sums[-1]
    best = max(abs(sums[j] - Fraction(j, l) * total) for j in range(l + 1))
    if best == 0:
        raise DegenerateNormalizerError("deviation polygon is identically zero")
    return best


def analytic_normalizer(l: int, p: QParam) -> Fraction:
    """R = (2q)^(j-1) for l = 2^j; the natural scale of the deviations.

    Signed: for negative q and even j - 1 it is positive, otherwise the
    sign flips the curve, which is exactly what the bridge identity
    needs.
    """
    if l < 2 or (l & (l - 1)) != 0:
        raise ValueError(f"l must be a power of two >= 2, got {l}")
    j = l.bit_length() - 1
    return (2 * p.q) ** (j - 1)


def target_curve(l: int, p: QParam) -> CurveSamples:
    """Samples of -q T_a(t) on the breakpoint grid j/l, exactly."""
    p.require_curve_regime()
    if l < 2 or (l & (l - 1)) != 0:
        raise ValueError(f"l must be a power of two >= 2, got {l}")
    grid = tuple(Fraction(j, l) for j in range(l + 1))
    values = tuple(-p.q * takagi_dyadic_exact(t, p.a) for t in grid)
    return CurveSamples(grid, values, "exact")


def sup_distance(c1: CurveSamples, c2: CurveSamples):
    """max_j |c1(t_j) - c2(t_j)| over a shared grid.

    Exact Fraction when both curves are exact, float otherwise.
    """
    if c1.grid != c2.grid:
        raise GridMismatchError("curves sampled on different grids")
    if c1.mode == "exact" and c2.mode == "exact":
        return max(abs(a - b) for a, b in zip(c1.values, c2.values))
    return max(abs(float(a) - float(b)) for a, b in zip(c1.values, c2.values))


def verify_identity_8(l: int, p: QParam) -> VerificationReport:
    """Exact bridge identity for the zero orbit at length l = 2^j.

    Builds S_q(0..l) definitionally, rescales by the analytic normalizer
    and compares every breakpoint with -q T_a(j/l).
    """
    p.require_curve_regime()
    if l < 2 or (l & (l - 1)) != 0:
        raise ValueError(f"l must be a power of two >= 2, got {l}")
    rep = VerificationReport(
        "zero-orbit bridge identity", params={"q": str(p.q), "l": str(l)}
    )
    sums = partial_sum_prefix(l, p)
    curve = build_fluctuation_curve(sums, l, analytic_normalizer(l, p))
    target = target_curve(l, p)
    checked = 0
    first = None
    for t, got, want in zip(curve.grid, curve.values, target.values):
        checked += 1
        if got != want:
            first = f"t={t}: {got} != {want}"
            break
    rep.add(
        "bridge-equals-target",
        "(S(j) - (j/l) S(l)) / (2q)^(log2(l)-1) = -q T_a(j/l)",
        f"all {l + 1} breakpoints j/l",
        checked,
        first is None,
        first,
    )
    return rep


# ---------------------------------------------------------------------------
# seeded-register experiment
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BridgeLevel:
    """One stabilising level of the experiment with its measured curve."""

    run_length: int
    position: int
    prefix_end: int
    ratio: Fraction
    normalizer: Fraction
    grid_exponent: int
    curve: CurveSamples
    sup_distance: Fraction

    @property
    def level_length_log2(self) -> int:
        return self.position


@dataclass(frozen=True)
class LimitingBridge:
    """Measured distances between orbit polygons and the limit curve."""

    description: str
    seed: int | None
    q: Fraction
    register_length: int
    levels: tuple[BridgeLevel, ...]
    notes: tuple[str, ...]

    @property
    def sup_distances(self) -> list[Fraction]:
        return [lvl.sup_distance for lvl in self.levels]

    @property
    def decay_strictly_decreasing(self) -> bool:
        d = self.sup_distances
        return all(a > b for a, b in zip(d, d[1:]))


def theorem1_experiment(
    seed: int | None,
    p: QParam,
    r_list,
    state: OdometerState | None = None,
    register_length: int = 8192,
    grid_exponent: int = 8,
) -> LimitingBridge:
    """Measure orbit-polygon distances to -q T_a at stabilising levels.

    For each run length r, the first stabilising level n gives an orbit
    segment of length l = 2^n starting at the register state x.  The
    orbit's partial sums are S_q(X + i) - S_q(X) with X the register
    value, so carries past position n (which occur near the end of the
    segment whenever the low n digits of X are nonzero) are handled
    exactly.  The polygon is sampled at min(2^grid_exponent, l) + 1
    dyadic points, rescaled by (2q)^(n-1) and compared with the exact
    limit curve on the same grid.

    Requires 1/2 < |q| < 1.  Supply either a seed (register drawn with
    OdometerState.random_state) or an explicit state.
    """
    if not Fraction(1, 2) < abs(p.q) < 1:
        raise ValueError(
            f"experiment needs 1/2 < |q| < 1, got q = {p.q}"
        )
    if not r_list:
        raise ValueError("r_list must be nonempty")
    if state is None:
        if seed is None:
            raise ValueError("supply a seed or an explicit state")
        state = OdometerState.random_state(seed, register_length)
    else:
        register_length = state.length
        if seed is None:
            seed = state.seed
    big_x = num_value(state)
    notes: list[str] = []
    levels: list[BridgeLevel] = []
    for r in r_list:
        level = find_stabilizing_levels(state, r, max_levels=1)[0]
        n = level.position
        if big_x + (1 << n) > (1 << state.length):
            raise RegisterOverflowError(
                f"orbit of length 2^{n} carries out of the register"
            )
        g = min(grid_exponent, n)
        points = 1 << g
        step = n - g
        sums = partial_sum_progression(big_x, step, points, p)
        base = sums[0]
        total = sums[-1] - base
        normalizer = (2 * p.q) ** (n - 1)
        grid = tuple(Fraction(j, points) for j in range(points + 1))
        values = tuple(
            ((sums[j] - base) - Fraction(j, points) * total) / normalizer
            for j in range(points + 1)
        )
        curve = CurveSamples(grid, values, "exact")
        target_values = tuple(
            -p.q * takagi_dyadic_exact(t, p.a) for t in grid
        )
        target = CurveSamples(grid, target_values, "exact")
        dist = sup_distance(curve, target)
        levels.append(
            BridgeLevel(
                run_length=r,
                position=n,
                prefix_end=level.prefix_end,
                ratio=level.ratio,
                normalizer=normalizer,
                grid_exponent=g,
                curve=curve,
                sup_distance=dist,
            )
        )
        wrapped = big_x & ((1 << n) - 1)
        if wrapped:
            notes.append(
                f"r={r}: carries cross level position {n} during the final"
                f" ~2^{wrapped.bit_length() - 1} of the 2^{n} orbit steps"
                " (simulated exactly)"
            )
        else:
            notes.append(f"r={r}: orbit stays below position {n} throughout")
    return LimitingBridge(
        description=state.origin,
        seed=seed,
        q=p.q,
        register_length=register_length,
        levels=tuple(levels),
        notes=tuple(notes),
    )
