"""Command-line frontend.

Four subcommands:

    eval    print one exactly computed quantity
    verify  run an identity suite and report each check
    curve   emit a fluctuation curve and its target as CSV (and SVG)
    bridge  run the stabilising-level decay experiment, JSON report

Exit codes: 0 when everything succeeded or every check passed, 1 when a
verification or decay check failed, 2 on malformed input.  Exact
rationals are printed as "p/q" strings; --digits switches to correctly
rounded fixed-point decimals.  Output for identical arguments is
byte-identical across runs.
"""

import argparse
import json
import sys
from fractions import Fraction

from .digitsum import (
    DEFAULT_ORACLE_BUDGET,
    QParam,
    check_bit_recurrences,
    partial_sum_bruteforce,
    partial_sum_fast,
    partial_sum_prefix,
    weighted_digit_sum,
)
from .limiting_curve import (
    analytic_normalizer,
    build_fluctuation_curve,
    canonical_normalizer,
    target_curve,
    theorem1_experiment,
    verify_identity_8,
)
from .odometer import (
    NoStabilizingLevelError,
    OdometerState,
    RegisterOverflowError,
)
from .report import VerificationReport
from .takagi import (
    CertifiedValue,
    DeRhamSystem,
    derham_consistency,
    derham_eval,
    takagi_dyadic_exact,
    takagi_series,
)
from .trollope_delange import (
    check_g_identities,
    f_closed,
    f_hat_float,
    fluctuation_system,
    td_classical,
    td_generalized,
)


class _CliError(Exception):
    """Bad input; the message goes to stderr and the exit code is 2."""


# ---------------------------------------------------------------------------
# formatting
# ---------------------------------------------------------------------------


def _decimal_string(x: Fraction, digits: int) -> str:
    """x as a fixed-point decimal with `digits` fractional digits.

    Rounding is exact (ties to even); no float ever enters.
    """
    if digits < 0:
        raise _CliError("--digits must be >= 0")
    r = round(Fraction(x), digits)
    sign = "-" if r < 0 else ""
    scaled = abs(r) * 10**digits
    whole = str(int(scaled))
    if digits == 0:
        return sign + whole
    whole = whole.rjust(digits + 1, "0")
    return f"{sign}{whole[:-digits]}.{whole[-digits:]}"


def _format_value(x, digits) -> str:
    if isinstance(x, Fraction):
        return str(x) if digits is None else _decimal_string(x, digits)
    if digits is None:
        return repr(float(x))
    return f"{float(x):.{digits}f}"


def _parse_fraction(text: str, what: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise _CliError(f"invalid {what}: {text!r} ({exc})") from exc


def _parse_qparam(text: str) -> QParam:
    return QParam(_parse_fraction(text, "q"))


def _parse_run_lengths(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise _CliError(f"invalid run-length list: {text!r}") from exc
    if not values or any(r < 1 for r in values):
        raise _CliError(f"run lengths must be positive integers: {text!r}")
    return values


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def _write_text(path, text: str):
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    except OSError as exc:
        raise _CliError(f"cannot write {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------


def _cmd_eval(args) -> int:
    if args.target == "s":
        p = _parse_qparam(args.q)
        value = weighted_digit_sum(args.n, p)
    elif args.target == "S":
        p = _parse_qparam(args.q)
        if args.method == "oracle":
            value = partial_sum_bruteforce(args.n, p, budget=args.budget)
        else:
            value = partial_sum_fast(args.n, p)
    elif args.target == "takagi":
        a = (
            _parse_fraction(args.a, "a")
            if args.a is not None
            else _parse_qparam(args.q).a
        )
        x = _parse_fraction(args.x, "x")
        if _is_power_of_two(x.denominator):
            value = takagi_dyadic_exact(x, a)
        else:
            value = takagi_series(x, a, tol=args.tol)
    else:  # td
        if args.classical:
            value = td_classical(args.n)
        else:
            if args.q is None:
                raise _CliError("eval td needs --q or --classical")
            value = td_generalized(args.n, _parse_qparam(args.q))
    if isinstance(value, CertifiedValue):
        print(_format_value(value.value, args.digits))
    else:
        print(_format_value(value, args.digits))
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _suite_prop1(p: QParam, lmax: int) -> VerificationReport:
    p.require_curve_regime()
    if not _is_power_of_two(lmax) or lmax < 2:
        raise _CliError(f"--lmax must be a power of two >= 2, got {lmax}")
    rep = VerificationReport(
        "zero-orbit bridge identities",
        params={"q": str(p.q), "lmax": str(lmax)},
    )
    l = 2
    while l <= lmax:
        sub = verify_identity_8(l, p).checks[0]
        rep.add(
            f"bridge-l-{l}",
            sub.statement,
            sub.scope,
            sub.checked,
            sub.passed,
            sub.first_counterexample,
        )
        l *= 2
    return rep


def _suite_derham(p: QParam) -> VerificationReport:
    p.require_curve_regime()
    rep = VerificationReport(
        "two-branch affine systems", params={"q": str(p.q), "a": str(p.a)}
    )
    curve_sys = DeRhamSystem.takagi(p.a)
    ok, residual = derham_consistency(curve_sys)
    rep.add(
        "curve-system-consistent",
        "a0 g1(1)/(1-a1) + g0(1) = a1 g0(0)/(1-a0) + g1(0)",
        "curve system at a",
        1,
        ok,
        None if ok else f"residual {residual}",
    )
    profile_sys = fluctuation_system(p)
    ok, residual = derham_consistency(profile_sys)
    rep.add(
        "profile-system-consistent",
        "seam condition, reducing to 2 a q = 1",
        "fluctuation system at q",
        1,
        ok,
        None if ok else f"residual {residual}",
    )

    def scan(name, statement, sys_, reference):
        denom = 64
        checked = 0
        first = None
        for j in range(denom + 1):
            t = Fraction(j, denom)
            checked += 1
            got = derham_eval(sys_, t)
            want = reference(t)
            if got != want:
                first = f"t={t}: {got} != {want}"
                break
        rep.add(name, statement, f"t = j/{denom}, exact", checked, first is None, first)

    scan(
        "solver-matches-curve",
        "branch unwinding reproduces T_a",
        curve_sys,
        lambda t: takagi_dyadic_exact(t, p.a),
    )
    scan(
        "solver-matches-profile",
        "branch unwinding reproduces q x - T_a(x)/2",
        profile_sys,
        lambda t: f_closed(t, p),
    )
    return rep


def _suite_theorem1(p: QParam, args) -> VerificationReport:
    r_list = _parse_run_lengths(args.r)
    bridge = theorem1_experiment(
        args.seed,
        p,
        r_list,
        register_length=args.register_length,
        grid_exponent=args.grid_exponent,
    )
    rep = VerificationReport(
        "stabilising-level decay",
        params={
            "q": str(p.q),
            "seed": str(args.seed),
            "r": ",".join(str(r) for r in r_list),
            "register_length": str(args.register_length),
        },
    )
    for lvl in bridge.levels:
        rep.notes.append(
            f"r={lvl.run_length}: level n={lvl.position},"
            f" sup distance {float(lvl.sup_distance)!r}"
        )
    rep.notes.extend(bridge.notes)
    pairs = zip(bridge.levels, bridge.levels[1:])
    for lo, hi in pairs:
        ok = hi.sup_distance < lo.sup_distance
        rep.add(
            f"decay-r{lo.run_length}-to-r{hi.run_length}",
            "sup distance to the target curve decreases strictly in r",
            f"r={lo.run_length} vs r={hi.run_length}",
            1,
            ok,
            None
            if ok
            else f"{float(lo.sup_distance)!r} -> {float(hi.sup_distance)!r}",
        )
    return rep


def _cmd_verify(args) -> int:
    p = _parse_qparam(args.q)
    try:
        if args.suite == "recurrences":
            rep = check_bit_recurrences(
                args.nmax, p, use_printed_forms=args.use_printed_forms,
                budget=args.budget,
            )
        elif args.suite == "gprofile":
            rep = check_g_identities(args.nmax, p)
        elif args.suite == "prop1":
            rep = _suite_prop1(p, args.lmax)
        elif args.suite == "derham":
            rep = _suite_derham(p)
        else:
            rep = _suite_theorem1(p, args)
    except (NoStabilizingLevelError, RegisterOverflowError) as exc:
        print(f"qdigits verify: {exc}", file=sys.stderr)
        return 1
    if args.json:
        print(json.dumps(rep.to_dict(), indent=2))
    else:
        print("\n".join(rep.format_lines()))
    return 0 if rep.passed else 1


# ---------------------------------------------------------------------------
# curve
# ---------------------------------------------------------------------------


def _svg_document(grid, series) -> str:
    """A fixed-size SVG plot: axes plus one polyline per series."""
    left, right, top, bottom = 50.0, 790.0, 20.0, 380.0
    values = [float(v) for vals, _style in series for v in vals]
    lo = min(values + [0.0])
    hi = max(values + [0.0])
    if hi == lo:
        hi = lo + 1.0
    pad = 0.05 * (hi - lo)
    lo -= pad
    hi += pad

    def px(t) -> float:
        return left + (right - left) * float(t)

    def py(v) -> float:
        return bottom - (bottom - top) * ((float(v) - lo) / (hi - lo))

    parts = ['<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 800 400">']
    parts.append(
        f'<line x1="{left:.3f}" y1="{py(0):.3f}" x2="{right:.3f}"'
        f' y2="{py(0):.3f}" stroke="#888888" stroke-width="1" />'
    )
    parts.append(
        f'<line x1="{left:.3f}" y1="{top:.3f}" x2="{left:.3f}"'
        f' y2="{bottom:.3f}" stroke="#888888" stroke-width="1" />'
    )
    for vals, style in series:
        points = " ".join(
            f"{px(t):.3f},{py(v):.3f}" for t, v in zip(grid, vals)
        )
        parts.append(f'<polyline fill="none" {style} points="{points}" />')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _cmd_curve(args) -> int:
    p = _parse_qparam(args.q)
    l = args.l
    if not _is_power_of_two(l) or l < 2:
        raise _CliError(f"--l must be a power of two >= 2, got {l}")
    if not p.is_curve_regime and not args.explore:
        print(
            f"qdigits curve: no limiting curve for q = {p.q}; the regime"
            " requirement is |q| > 1/2.  Pass --explore to emit the"
            " normalised polygon anyway (no target column).",
            file=sys.stderr,
        )
        return 2

    sums = partial_sum_prefix(l, p)
    if args.norm == "canonical":
        normalizer = canonical_normalizer(sums, l)
    else:
        normalizer = analytic_normalizer(l, p)
    curve = build_fluctuation_curve(sums, l, normalizer)

    with_target = p.is_curve_regime
    if with_target:
        target = target_curve(l, p)
        header = "t,phi,target"
        rows = (
            (t, phi, tgt)
            for t, phi, tgt in zip(curve.grid, curve.values, target.values)
        )
    else:
        header = "t,phi"
        rows = zip(curve.grid, curve.values)
    lines = [header]
    for row in rows:
        lines.append(",".join(_format_value(v, args.digits) for v in row))
    _write_text(args.out, "\n".join(lines) + "\n")

    if args.svg is not None:
        series = [(curve.values, 'stroke="#1f77b4" stroke-width="1.5"')]
        if with_target:
            series.append(
                (
                    target.values,
                    'stroke="#d62728" stroke-width="1.5" stroke-dasharray="6 3"',
                )
            )
        _write_text(args.svg, _svg_document(curve.grid, series))

    if args.fhat_out is not None:
        n = args.fhat_points
        if n < 1:
            raise _CliError(f"--fhat-points must be >= 1, got {n}")
        lines = ["u,fhat"]
        for i in range(n + 1):
            u = i / n
            lines.append(f"{u!r},{f_hat_float(u, p)!r}")
        _write_text(args.fhat_out, "\n".join(lines) + "\n")
    return 0


# ---------------------------------------------------------------------------
# bridge
# ---------------------------------------------------------------------------


def _cmd_bridge(args) -> int:
    p = _parse_qparam(args.q)
    if not Fraction(1, 2) < abs(p.q) < 1:
        print(
            f"qdigits bridge: the experiment needs 1/2 < |q| < 1, got q = {p.q}",
            file=sys.stderr,
        )
        return 2
    r_list = _parse_run_lengths(args.r)
    state = None
    if args.state == "zero":
        state = OdometerState.zeros(args.register_length)
    elif args.seed is None:
        raise _CliError("bridge needs --seed or --state zero")
    try:
        bridge = theorem1_experiment(
            args.seed,
            p,
            r_list,
            state=state,
            register_length=args.register_length,
            grid_exponent=args.grid_exponent,
        )
    except (NoStabilizingLevelError, RegisterOverflowError) as exc:
        print(f"qdigits bridge: {exc}", file=sys.stderr)
        return 1
    doc = {
        "experiment": "limiting-curve decay",
        "q": str(bridge.q),
        "seed": bridge.seed,
        "state": bridge.description,
        "register_length": bridge.register_length,
        "grid_exponent": args.grid_exponent,
        "levels": [
            {
                "r": lvl.run_length,
                "n_j": lvl.position,
                "m_j": lvl.prefix_end,
                "l_j": str(1 << lvl.position),
                "ratio": float(lvl.ratio),
                "R": str(lvl.normalizer),
                "grid_points": len(lvl.curve.grid),
                "sup_distance": float(lvl.sup_distance),
                "sup_distance_exact": str(lvl.sup_distance),
            }
            for lvl in bridge.levels
        ],
        "sup_distances": [float(d) for d in bridge.sup_distances],
        "strictly_decreasing": bridge.decay_strictly_decreasing,
        "notes": list(bridge.notes),
    }
    _write_text(args.out, json.dumps(doc, indent=2) + "\n")
    return 0 if bridge.decay_strictly_decreasing else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdigits",
        description=(
            "Exact rational tools for weighted binary digit sums, their"
            " summatory closed forms, Takagi-Landsberg curves, and limiting"
            " curves of odometer ergodic sums."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate one quantity exactly")
    ev_sub = ev.add_subparsers(dest="target", required=True)

    ev_s = ev_sub.add_parser("s", help="weighted digit sum s_q(n)")
    ev_s.add_argument("--q", required=True, help='weight, e.g. "3/4"')
    ev_s.add_argument("--n", type=int, required=True)
    ev_s.add_argument("--digits", type=int, help="decimal output precision")

    ev_big_s = ev_sub.add_parser("S", help="summatory sum S_q(n)")
    ev_big_s.add_argument("--q", required=True, help='weight, e.g. "3/4"')
    ev_big_s.add_argument("--n", type=int, required=True)
    ev_big_s.add_argument(
        "--method",
        choices=["fast", "oracle"],
        default="fast",
        help="fast: one halving step per bit; oracle: definitional sum",
    )
    ev_big_s.add_argument("--budget", type=int, default=DEFAULT_ORACLE_BUDGET)
    ev_big_s.add_argument("--digits", type=int, help="decimal output precision")

    ev_tak = ev_sub.add_parser("takagi", help="curve value T_a(x)")
    which = ev_tak.add_mutually_exclusive_group(required=True)
    which.add_argument("--a", help='curve parameter, e.g. "2/3"')
    which.add_argument("--q", help="weight; the curve parameter is 1/(2q)")
    ev_tak.add_argument("--x", required=True, help="argument in [0, 1]")
    ev_tak.add_argument(
        "--tol",
        type=float,
        default=1e-12,
        help="certified series tolerance for non-dyadic x",
    )
    ev_tak.add_argument("--digits", type=int, help="decimal output precision")

    ev_td = ev_sub.add_parser("td", help="average digit sum S_q(n)/n")
    ev_td.add_argument("--n", type=int, required=True)
    ev_td.add_argument("--q", help="weight; omit with --classical")
    ev_td.add_argument(
        "--classical",
        action="store_true",
        help="plain popcount average (q = 1 closed form)",
    )
    ev_td.add_argument("--digits", type=int, help="decimal output precision")

    vf = sub.add_parser("verify", help="run an identity suite")
    vf.add_argument(
        "--suite",
        required=True,
        choices=["recurrences", "gprofile", "prop1", "derham", "theorem1"],
    )
    vf.add_argument("--q", required=True, help='weight, e.g. "3/4"')
    vf.add_argument("--nmax", type=int, default=64, help="scan ceiling")
    vf.add_argument(
        "--lmax", type=int, default=4096, help="largest level (power of two)"
    )
    vf.add_argument(
        "--use-printed-forms",
        action="store_true",
        help="scan the circulating variant exponents instead (they fail)",
    )
    vf.add_argument("--json", action="store_true", help="machine-readable report")
    vf.add_argument("--seed", type=int, default=42)
    vf.add_argument("--r", default="4,8,12", help="run lengths, comma separated")
    vf.add_argument("--register-length", type=int, default=8192)
    vf.add_argument("--grid-exponent", type=int, default=8)
    vf.add_argument("--budget", type=int, default=DEFAULT_ORACLE_BUDGET)

    cv = sub.add_parser("curve", help="emit a fluctuation curve as CSV/SVG")
    cv.add_argument("--q", required=True, help='weight, e.g. "3/4"')
    cv.add_argument("--l", type=int, required=True, help="level (power of two)")
    cv.add_argument("--norm", choices=["analytic", "canonical"], default="analytic")
    cv.add_argument("--out", help="CSV path (stdout when omitted)")
    cv.add_argument("--svg", help="also render an SVG plot to this path")
    cv.add_argument("--digits", type=int, help="decimal output precision")
    cv.add_argument(
        "--explore",
        action="store_true",
        help="allow |q| <= 1/2 and emit the polygon without a target column",
    )
    cv.add_argument("--fhat-out", help="also sample the periodic factor to CSV")
    cv.add_argument("--fhat-points", type=int, default=256)

    br = sub.add_parser("bridge", help="stabilising-level decay experiment")
    br.add_argument("--q", required=True, help='weight with 1/2 < |q| < 1')
    br.add_argument("--seed", type=int, help="seed for the random register")
    br.add_argument("--state", choices=["zero"], help="explicit start register")
    br.add_argument("--r", default="4,8,12", help="run lengths, comma separated")
    br.add_argument("--register-length", type=int, default=8192)
    br.add_argument("--grid-exponent", type=int, default=8)
    br.add_argument("--out", help="JSON path (stdout when omitted)")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    handlers = {
        "eval": _cmd_eval,
        "verify": _cmd_verify,
        "curve": _cmd_curve,
        "bridge": _cmd_bridge,
    }
    try:
        return handlers[args.command](args)
    except _CliError as exc:
        print(f"qdigits: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"qdigits: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
