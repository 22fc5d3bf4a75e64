"""End-to-end CLI contract: outputs, formats, exit codes, determinism."""

import json
from fractions import Fraction as F

import pytest

from qdigits.cli import main

FROZEN_CURVE_CSV = (
    "t,phi,target\n"
    "0,0,0\n"
    "1/4,-7/16,-7/16\n"
    "1/2,-3/8,-3/8\n"
    "3/4,-7/16,-7/16\n"
    "1,0,0\n"
)


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestEval:
    def test_summatory(self, capsys):
        code, out, _ = run(capsys, ["eval", "S", "--q", "3/4", "--n", "4"])
        assert (code, out) == (0, "21/8\n")

    def test_summatory_oracle_route(self, capsys):
        code, out, _ = run(
            capsys, ["eval", "S", "--q", "3/4", "--n", "4", "--method", "oracle"]
        )
        assert (code, out) == (0, "21/8\n")

    def test_digit_sum(self, capsys):
        code, out, _ = run(capsys, ["eval", "s", "--q", "3/4", "--n", "3"])
        assert (code, out) == (0, "21/16\n")

    def test_takagi_dyadic(self, capsys):
        code, out, _ = run(capsys, ["eval", "takagi", "--a", "1/4", "--x", "1/2"])
        assert (code, out) == (0, "1/2\n")

    def test_takagi_from_weight(self, capsys):
        code, out, _ = run(capsys, ["eval", "takagi", "--q", "3/4", "--x", "1/4"])
        assert (code, out) == (0, "7/12\n")

    def test_takagi_non_dyadic_certified(self, capsys):
        code, out, _ = run(capsys, ["eval", "takagi", "--a", "1/2", "--x", "1/3"])
        assert code == 0
        assert abs(float(out) - 2 / 3) <= 1e-11

    def test_td_classical(self, capsys):
        code, out, _ = run(capsys, ["eval", "td", "--classical", "--n", "3"])
        assert (code, out) == (0, "2/3\n")

    def test_td_weighted_decimal(self, capsys):
        code, out, _ = run(
            capsys, ["eval", "td", "--q", "3/4", "--n", "5", "--digits", "6"]
        )
        assert (code, out) == (0, "0.609375\n")

    def test_decimal_rounding_ties_to_even(self, capsys):
        code, out, _ = run(capsys, ["eval", "s", "--q", "1/8", "--n", "1", "--digits", "2"])
        assert (code, out) == (0, "0.12\n")

    def test_td_needs_weight_or_classical(self, capsys):
        code, _, err = run(capsys, ["eval", "td", "--n", "3"])
        assert code == 2
        assert "qdigits:" in err

    def test_rejects_bad_weight(self, capsys):
        assert run(capsys, ["eval", "S", "--q", "abc", "--n", "4"])[0] == 2
        assert run(capsys, ["eval", "S", "--q", "0", "--n", "4"])[0] == 2

    def test_usage_errors(self, capsys):
        assert main([]) == 2
        assert main(["eval", "S", "--q", "3/4"]) == 2  # missing --n
        assert main(["eval", "takagi", "--a", "1/4", "--q", "3/4", "--x", "0"]) == 2
        capsys.readouterr()

    def test_help_exits_zero(self, capsys):
        assert main(["--help"]) == 0
        capsys.readouterr()


class TestVerify:
    def test_recurrences_pass(self, capsys):
        code, out, _ = run(
            capsys, ["verify", "--suite", "recurrences", "--q", "3/4", "--nmax", "16"]
        )
        assert code == 0
        assert "ALL CHECKS PASS" in out

    def test_printed_forms_fail_with_counterexample(self, capsys):
        code, out, _ = run(
            capsys,
            [
                "verify", "--suite", "recurrences", "--q", "3/4",
                "--nmax", "16", "--use-printed-forms",
            ],
        )
        assert code == 1
        assert "SOME CHECKS FAILED" in out
        assert "n=2:" in out

    def test_json_report(self, capsys):
        code, out, _ = run(
            capsys,
            ["verify", "--suite", "recurrences", "--q", "3/4", "--nmax", "8", "--json"],
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["passed"] is True
        assert doc["checks"][0]["name"] == "s-even"
        assert set(doc) == {"title", "params", "passed", "checks", "notes"}

    def test_gprofile(self, capsys):
        code, out, _ = run(
            capsys, ["verify", "--suite", "gprofile", "--q", "3/4", "--nmax", "16"]
        )
        assert code == 0

    def test_prop1(self, capsys):
        code, out, _ = run(
            capsys, ["verify", "--suite", "prop1", "--q", "3/4", "--lmax", "16"]
        )
        assert code == 0
        assert "bridge-l-16" in out

    def test_prop1_rejects_non_power(self, capsys):
        assert run(capsys, ["verify", "--suite", "prop1", "--q", "3/4", "--lmax", "12"])[0] == 2

    def test_derham(self, capsys):
        code, out, _ = run(capsys, ["verify", "--suite", "derham", "--q", "3/4"])
        assert code == 0
        assert "solver-matches-curve" in out
        assert "solver-matches-profile" in out

    def test_theorem1_decay(self, capsys):
        code, out, _ = run(
            capsys,
            [
                "verify", "--suite", "theorem1", "--q", "3/4", "--seed", "0",
                "--r", "2,4,6", "--register-length", "256",
            ],
        )
        assert code == 0
        assert "decay-r2-to-r4" in out
        assert "decay-r4-to-r6" in out

    def test_theorem1_no_level_is_failure_not_crash(self, capsys):
        code, _, err = run(
            capsys,
            [
                "verify", "--suite", "theorem1", "--q", "3/4", "--seed", "1",
                "--r", "12", "--register-length", "8",
            ],
        )
        assert code == 1
        assert "qdigits verify:" in err

    def test_regime_guard(self, capsys):
        code, _, err = run(capsys, ["verify", "--suite", "prop1", "--q", "1/2"])
        assert code == 2
        assert "|q| > 1/2" in err


class TestCurve:
    def test_frozen_csv(self, capsys):
        code, out, _ = run(capsys, ["curve", "--q", "3/4", "--l", "4"])
        assert code == 0
        assert out == FROZEN_CURVE_CSV

    def test_canonical_norm_has_sup_one(self, capsys):
        code, out, _ = run(capsys, ["curve", "--q", "3/4", "--l", "4", "--norm", "canonical"])
        assert code == 0
        phys = [F(line.split(",")[1]) for line in out.splitlines()[1:]]
        assert max(abs(v) for v in phys) == 1
        assert phys == [0, -1, F(-6, 7), -1, 0]

    def test_csv_round_trips_to_exact_values(self, capsys):
        from qdigits.digitsum import QParam, partial_sum_prefix
        from qdigits.limiting_curve import analytic_normalizer, build_fluctuation_curve

        # negative weights need the --q=value spelling; a bare "-3/4"
        # looks like an option flag to the argument parser
        code, out, _ = run(capsys, ["curve", "--q=-3/4", "--l", "8"])
        assert code == 0
        p = QParam(F(-3, 4))
        curve = build_fluctuation_curve(
            partial_sum_prefix(8, p), 8, analytic_normalizer(8, p)
        )
        for line, t, v in zip(out.splitlines()[1:], curve.grid, curve.values):
            cells = line.split(",")
            assert F(cells[0]) == t
            assert F(cells[1]) == v

    def test_digits_formatting(self, capsys):
        code, out, _ = run(capsys, ["curve", "--q", "3/4", "--l", "4", "--digits", "3"])
        assert code == 0
        assert out.splitlines()[2] == "0.250,-0.438,-0.438"

    def test_regime_refusal_mentions_explore(self, capsys):
        code, _, err = run(capsys, ["curve", "--q", "1/2", "--l", "4"])
        assert code == 2
        assert "|q| > 1/2" in err
        assert "--explore" in err

    def test_explore_drops_target(self, capsys):
        code, out, _ = run(capsys, ["curve", "--q", "1/2", "--l", "4", "--explore"])
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "t,phi"
        assert all(line.count(",") == 1 for line in lines)

    def test_rejects_non_power_level(self, capsys):
        assert run(capsys, ["curve", "--q", "3/4", "--l", "6"])[0] == 2

    def test_file_outputs(self, capsys, tmp_path):
        csv = tmp_path / "curve.csv"
        svg = tmp_path / "curve.svg"
        fhat = tmp_path / "fhat.csv"
        code, out, _ = run(
            capsys,
            [
                "curve", "--q", "3/4", "--l", "8",
                "--out", str(csv), "--svg", str(svg),
                "--fhat-out", str(fhat), "--fhat-points", "16",
            ],
        )
        assert code == 0
        assert out == ""

        text = csv.read_text()
        assert text.startswith("t,phi,target\n")
        assert len(text.splitlines()) == 10

        doc = svg.read_text()
        assert doc.startswith('<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 800 400">')
        assert doc.count("<polyline") == 2
        assert doc.rstrip().endswith("</svg>")

        fh = fhat.read_text().splitlines()
        assert fh[0] == "u,fhat"
        assert len(fh) == 18
        first = fh[1].split(",")
        assert float(first[0]) == 0.0
        assert abs(float(first[1])) <= 1e-12

    def test_deterministic_output(self, capsys, tmp_path):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        for path in (a, b):
            run(capsys, ["curve", "--q", "2/3", "--l", "32", "--out", str(path)])
        assert a.read_bytes() == b.read_bytes()


class TestBridge:
    def test_zero_state_single_level(self, capsys):
        code, out, _ = run(
            capsys,
            ["bridge", "--q", "3/4", "--state", "zero", "--register-length", "64", "--r", "4"],
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["experiment"] == "limiting-curve decay"
        assert doc["q"] == "3/4"
        assert doc["seed"] is None
        assert doc["state"] == "zero"
        assert doc["sup_distances"] == [0.0]
        assert doc["strictly_decreasing"] is True
        lvl = doc["levels"][0]
        assert set(lvl) >= {"r", "n_j", "m_j", "l_j", "ratio", "R", "sup_distance"}
        assert (lvl["r"], lvl["n_j"], lvl["l_j"]) == (4, 4, "16")
        assert lvl["R"] == "27/8"
        assert lvl["sup_distance_exact"] == "0"

    def test_zero_state_cannot_decay_further(self, capsys):
        # both levels sit exactly on the limit curve; 0 is not < 0
        code, out, _ = run(
            capsys,
            ["bridge", "--q", "3/4", "--state", "zero", "--register-length", "64", "--r", "2,3"],
        )
        assert code == 1
        doc = json.loads(out)
        assert doc["sup_distances"] == [0.0, 0.0]
        assert doc["strictly_decreasing"] is False

    def test_seeded_decay(self, capsys):
        code, out, _ = run(
            capsys,
            ["bridge", "--q", "3/4", "--seed", "0", "--r", "2,4,6", "--register-length", "256"],
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["seed"] == 0
        sups = doc["sup_distances"]
        assert sups[0] > sups[1] > sups[2]

    def test_deterministic_json(self, capsys, tmp_path):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        for path in (a, b):
            run(
                capsys,
                [
                    "bridge", "--q", "3/4", "--seed", "5",
                    "--r", "2,4", "--register-length", "256", "--out", str(path),
                ],
            )
        assert a.read_bytes() == b.read_bytes()

    def test_needs_seed_or_state(self, capsys):
        code, _, err = run(capsys, ["bridge", "--q", "3/4"])
        assert code == 2
        assert "--seed or --state" in err

    def test_regime_guard(self, capsys):
        code, _, err = run(capsys, ["bridge", "--q", "1/4", "--seed", "1"])
        assert code == 2
        assert "1/2 < |q| < 1" in err
        assert run(capsys, ["bridge", "--q", "1", "--seed", "1"])[0] == 2

    def test_impossible_run_length(self, capsys):
        code, _, err = run(
            capsys,
            ["bridge", "--q", "3/4", "--seed", "1", "--r", "12", "--register-length", "8"],
        )
        assert code == 1
        assert "qdigits bridge:" in err

    def test_bad_run_lengths(self, capsys):
        assert run(capsys, ["bridge", "--q", "3/4", "--seed", "1", "--r", "0"])[0] == 2
        assert run(capsys, ["bridge", "--q", "3/4", "--seed", "1", "--r", "a,b"])[0] == 2
