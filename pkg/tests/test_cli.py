import csv
import io
import json
import math

import pytest

from streamswitch.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestBounds:
    def test_single_point(self, capsys):
        code, out, _ = run(capsys, "bounds", "--n", "1024", "--q", "16", "--memory", "const:32")
        assert code == 0
        (row,) = csv_rows(out)
        # quoted values are rounded to six places
        assert float(row["theorem1_leading"]) == pytest.approx(0.104167, abs=6e-7)
        assert float(row["theorem2_lower"]) == pytest.approx(0.029688, abs=6e-7)
        assert row["theorem1_leading_unit"] == "bits-ratio"
        assert row["lemma2_chain_unit"] == "nats"
        assert "theorem1-asymptotic" in row["flags"]

    def test_q_not_below_n(self, capsys):
        code, out, err = run(capsys, "bounds", "--n", "16", "--q", "16")
        assert code == 2 and out == ""
        assert "q < n" in err

    def test_sweep(self, capsys):
        code, out, _ = run(capsys, "bounds", "--n", "1024", "--q", "2,4,8,16", "--memory", "const:32")
        rows = csv_rows(out)
        assert code == 0 and len(rows) == 4
        chain = [float(r["lemma2_chain"]) for r in rows]
        assert chain == sorted(chain)

    def test_epsilon_column(self, capsys):
        code, out, _ = run(capsys, "bounds", "--n", "1024", "--q", "16", "--epsilon", "0.6")
        (row,) = csv_rows(out)
        assert float(row["corollary1_leading"]) == pytest.approx(float(row["theorem1_leading"]), abs=1e-12)
        assert "corollary1-asymptotic" in row["flags"]

    def test_bad_memory_spec(self, capsys):
        code, _, err = run(capsys, "bounds", "--memory", "const:x")
        assert code == 2 and "memory" in err


class TestOracle:
    def test_collision_example(self, capsys):
        code, out, _ = run(capsys, "oracle", "--n", "4", "--q", "2", "--memory", "3,1")
        (row,) = csv_rows(out)
        assert code == 0
        assert float(row["kl_exact"]) == pytest.approx(0.287682, abs=5e-7)
        assert float(row["kl_exact"]) == pytest.approx(math.log(4 / 3), abs=1e-15)
        assert row["lemma1_passed"] == "true" and row["lemma2_passed"] == "true"

    def test_constant_is_all_zero(self, capsys):
        code, out, _ = run(capsys, "oracle", "--n", "6", "--q", "3", "--memory", "2,3,2",
                           "--algorithm", "constant", "--format", "json")
        (row,) = json.loads(out)["results"]
        assert code == 0
        for key, value in row.items():
            if key.startswith(("kl_", "tv_", "mi_")) and not key.endswith("_unit"):
                assert value == 0.0, key

    def test_suite(self, capsys):
        code, out, _ = run(capsys, "oracle", "--n", "6", "--q", "3", "--memory", "2,3,2",
                           "--suite", "100", "--format", "json")
        doc = json.loads(out)
        assert code == 0 and doc["passed"] is True
        assert doc["verdicts"]["instances"] == 100 and doc["verdicts"]["passed"] == 100
        assert len({r["seed"] for r in doc["results"]}) == 100

    def test_cap_suggests_simulate(self, capsys):
        code, _, err = run(capsys, "oracle", "--n", "1024", "--q", "16", "--memory", "const:3")
        assert code == 2 and "simulate" in err


class TestSimulate:
    ARGS = ("simulate", "--n", "64", "--q", "8", "--memory", "const:13", "--samples", "20000", "--seed", "11")

    def test_replay_is_byte_identical(self, capsys):
        first = run(capsys, *self.ARGS, "--tv")
        second = run(capsys, *self.ARGS, "--tv")
        assert first == second

    def test_sources(self, capsys):
        code, out, _ = run(capsys, *self.ARGS)
        p, q = csv_rows(out)
        assert code == 0
        assert (p["source"], p["hits"], float(p["value"])) == ("P", "0", 0.0)
        assert abs(float(q["z_score"])) <= 5
        assert float(q["analytic"]) > 0

    def test_workers(self, capsys):
        _, one, _ = run(capsys, *self.ARGS, "--format", "json")
        _, four, _ = run(capsys, *self.ARGS, "--workers", "4", "--format", "json")
        assert json.loads(one)["results"] == json.loads(four)["results"]

    def test_needs_samples(self, capsys):
        code, _, err = run(capsys, "simulate", "--samples", "0")
        assert code == 2 and "--samples" in err


class TestVerifyFunctions:
    def test_default_grid(self, capsys):
        code, out, _ = run(capsys, "verify-functions", "--grid", "2000", "--stirling-max", "200")
        rows = csv_rows(out)
        assert code == 0 and rows
        assert all(r["passed"] == "true" for r in rows)
        assert all(float(r["worst_slack"]) >= -1e-12 for r in rows)

    def test_grid_too_coarse(self, capsys):
        code, _, err = run(capsys, "verify-functions", "--grid", "5")
        assert code == 2 and "10" in err


@pytest.mark.parametrize("argv", [
    ("bounds", "--n", "256,1024", "--q", "4,16", "--memory", "const:24", "--epsilon", "0.5"),
    ("oracle", "--n", "5", "--q", "3", "--memory", "3,4,1", "--algorithm", "random", "--seed", "3"),
    ("simulate", "--n", "32", "--q", "4", "--memory", "const:11", "--samples", "5000", "--tv"),
    ("verify-functions", "--grid", "500", "--stirling-max", "60"),
])
def test_csv_and_json_agree(capsys, argv):
    _, text_csv, _ = run(capsys, *argv, "--format", "csv")
    _, text_json, _ = run(capsys, *argv, "--format", "json")
    doc = json.loads(text_json)
    assert doc["schema"] == 1 and doc["command"] == argv[0]
    rows = csv_rows(text_csv)
    assert len(rows) == len(doc["results"])
    for row, obj in zip(rows, doc["results"]):
        assert set(row) == set(obj)
        for key, value in obj.items():
            assert row[key] == _as_csv(value), key


def _as_csv(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def test_failed_verification_exits_one(capsys, monkeypatch):
    from streamswitch import cli, properties

    real = properties.run_all

    def broken(*a, **k):
        checks = real(*a, **k)
        bad = checks[0]
        checks[0] = type(bad)(bad.name, -1.0, bad.where, bad.points, bad.tol)
        return checks

    monkeypatch.setattr(cli.properties, "run_all", broken)
    code, out, _ = run(capsys, "verify-functions", "--grid", "100", "--stirling-max", "20", "--format", "json")
    assert code == 1 and json.loads(out)["passed"] is False
