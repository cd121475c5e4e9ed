"""Command-line contract: exit codes, JSON/CSV shapes, reproducibility."""

import json

import pytest

from shorlab import cli
from shorlab.engine import closed_form_params, closed_form_prob


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def canonical_json(text: str) -> str:
    payload = json.loads(text)
    payload["manifest"].pop("timestamp_utc", None)
    payload["manifest"].pop("elapsed_s", None)
    return json.dumps(payload, indent=2, sort_keys=True)


def test_factor_worked_example(capsys):
    code, out, _ = run_cli(
        capsys, "factor", "91", "--forced-m", "3", "--forced-y", "13453"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["trace"]["outcome"] == {"kind": "factor_found", "factor": 13}
    attempt = payload["trace"]["attempts"][0]
    assert attempt["period"] == 6
    assert [2, 5, 61] in attempt["convergent_tests"]
    assert payload["manifest"]["schema_version"] == 1


def test_factor_exit_codes(capsys):
    code, _, err = run_cli(capsys, "factor", "12")
    assert code == 2 and "even" in err
    code, _, err = run_cli(capsys, "factor", "97")
    assert code == 2 and "prime" in err
    code, _, err = run_cli(capsys, "factor", "27")
    assert code == 2 and "perfect power" in err
    # retries exhausted: forced y = 0 never yields a period
    code, out, _ = run_cli(
        capsys, "factor", "91", "--forced-m", "3", "--forced-y", "0", "--retries", "2"
    )
    assert code == 3
    assert json.loads(out)["trace"]["outcome"]["kind"] == "period_recovery_failed"


def test_factor_usage_errors(capsys):
    with pytest.raises(SystemExit) as excinfo:
        cli.main(["factor", "ninetyone"])
    assert excinfo.value.code == 64
    capsys.readouterr()
    with pytest.raises(SystemExit) as excinfo:
        cli.main([])
    assert excinfo.value.code == 64
    capsys.readouterr()


def test_factor_identical_seeds_identical_json(capsys):
    args = ("factor", "33", "--seed", "12345")
    code_a, out_a, _ = run_cli(capsys, *args)
    code_b, out_b, _ = run_cli(capsys, *args)
    assert code_a == code_b == 0
    assert canonical_json(out_a) == canonical_json(out_b)
    code_c, out_c, _ = run_cli(capsys, "factor", "33", "--seed", "54321")
    assert code_c == 0
    assert json.loads(out_c)["manifest"]["config"]["seed"] == 54321


def test_distribution_closed_form_csv(capsys):
    code, out, _ = run_cli(capsys, "distribution", "15", "2", "--closed-form")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "y,prob"
    assert len(lines) == 1 + 256
    rows = [(int(y), float(p)) for y, p in (line.split(",") for line in lines[1:])]
    nonzero = [(y, p) for y, p in rows if p > 1e-12]
    assert nonzero == [(0, 0.25), (64, 0.25), (128, 0.25), (192, 0.25)]
    assert abs(sum(p for _, p in rows) - 1.0) < 1e-9


def test_distribution_csv_round_trips_probabilities(capsys, tmp_path):
    out_path = tmp_path / "dist.csv"
    code, _, _ = run_cli(
        capsys, "distribution", "91", "3", "--closed-form", "--out", str(out_path)
    )
    assert code == 0
    text = out_path.read_text()
    assert "\r" not in text
    rows = dict(
        (int(y), float(p))
        for y, p in (line.split(",") for line in text.splitlines()[1:])
    )
    assert len(rows) == 16384
    assert abs(sum(rows.values()) - 1.0) < 1e-9
    # serialized with enough digits to round-trip the double exactly
    expected = closed_form_prob(13453, closed_form_params(6, 16384))
    assert rows[13453] == expected
    assert f"{rows[13453]:.15e}".startswith("3.189335551")


def test_distribution_simulate_and_compare(capsys):
    code, out, _ = run_cli(capsys, "distribution", "15", "2", "--simulate")
    assert code == 0
    assert len(out.splitlines()) == 257
    code, out, _ = run_cli(capsys, "distribution", "15", "2", "--compare")
    assert code == 0
    payload = json.loads(out)
    assert payload["max_abs_discrepancy"] < 1e-9
    assert abs(payload["closed_form_sum"] - 1.0) < 1e-9
    assert abs(payload["simulated_sum"] - 1.0) < 1e-9


def test_distribution_rejects_non_unit_base(capsys):
    code, _, err = run_cli(capsys, "distribution", "15", "3")
    assert code == 2 and "gcd" in err


def test_cf_table(capsys):
    code, out, _ = run_cli(capsys, "cf", "13453", "16384")
    assert code == 0
    lines = [line.split() for line in out.splitlines()[2:]]
    assert len(lines) == 15
    assert lines[2] == ["2", "4", "4", "5"]
    assert lines[3] == ["3", "1", "5", "6"]
    assert lines[14] == ["14", "3", "13453", "16384"]

    code, out, _ = run_cli(capsys, "cf", "5", "1")
    assert len(out.splitlines()) == 3  # header, rule, single row

    code, out, _ = run_cli(capsys, "cf", "1", "2")
    rows = [line.split() for line in out.splitlines()[2:]]
    assert [r[1] for r in rows] == ["0", "2"]


def test_cf_zero_denominator_is_usage_error(capsys):
    with pytest.raises(SystemExit) as excinfo:
        cli.main(["cf", "1", "0"])
    assert excinfo.value.code == 64
    capsys.readouterr()


def test_montecarlo_json_summary(capsys):
    code, out, _ = run_cli(capsys, "montecarlo", "15", "2", "1000", "--seed", "7")
    assert code == 0
    payload = json.loads(out)
    for key in (
        "success_fraction",
        "wilson_95",
        "success_lower_bound",
        "asymptotic_bound",
        "histogram",
    ):
        assert key in payload
    assert payload["P"] == 4
    assert payload["trials"] == 1000
    assert payload["success_fraction"] >= payload["success_lower_bound"] - 0.05


def test_montecarlo_forced_outcome_and_usage(capsys):
    code, out, _ = run_cli(
        capsys, "montecarlo", "91", "3", "1", "--seed", "7", "--forced-y", "13453"
    )
    assert code == 0
    assert json.loads(out)["success_fraction"] == 1.0
    with pytest.raises(SystemExit) as excinfo:
        cli.main(["montecarlo", "15", "2", "0"])
    assert excinfo.value.code == 64
    capsys.readouterr()
    code, _, err = run_cli(capsys, "montecarlo", "15", "5", "10")
    assert code == 2 and "gcd" in err


def test_replicate_passes(capsys):
    code, out, _ = run_cli(capsys, "replicate")
    assert code == 0
    assert "PASS (14 fields" in out.splitlines()[-1]
    assert "FAIL" not in out


def test_replicate_json_and_perturbation(capsys):
    code, out, _ = run_cli(capsys, "replicate", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["pass"] is True
    assert len(payload["fields"]) == 14
    assert all(f["ok"] for f in payload["fields"])

    code, out, _ = run_cli(capsys, "replicate", "--perturb", "--json")
    assert code == 1
    payload = json.loads(out)
    assert payload["pass"] is False
    broken = {f["field"] for f in payload["fields"] if not f["ok"]}
    assert "factor" in broken
