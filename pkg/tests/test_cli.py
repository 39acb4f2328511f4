import json
import subprocess
import sys
from fractions import Fraction

import jsonschema
import pytest

from zarlat import cli
from zarlat import zariski


def write_problem(tmp_path, payload, name="problem.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


SCHEMA_DIR = None


def result_schema():
    import importlib.resources as resources

    return json.loads(
        resources.files("zarlat").joinpath("schemas/result.schema.json").read_text()
    )


class TestDecompose:
    def test_single_exceptional(self, tmp_path, capsys):
        path = write_problem(tmp_path, {"labels": ["E"], "gram": [[-2]], "divisor": ["1"]})
        code, out, _ = run_cli(capsys, "decompose", path)
        assert code == 0
        result = json.loads(out)
        assert result["negative"] == ["1"] and result["positive"] == ["0"]
        assert result["negative_support"] == ["E"]
        assert result["status"] == "ok"
        jsonschema.validate(result, result_schema())

    def test_axiom_violation_exit_2(self, tmp_path, capsys):
        path = write_problem(
            tmp_path, {"labels": ["E1", "E2"], "gram": [[2, -1], [-1, 2]], "divisor": ["1", "1"]}
        )
        code, _, err = run_cli(capsys, "decompose", path)
        assert code == 2
        assert "E1" in err and "E2" in err

    def test_worked_example(self, tmp_path, capsys):
        path = write_problem(
            tmp_path,
            {
                "labels": ["E1", "E2"],
                "gram": [[2, 1], [1, -2]],
                "divisor": ["1", "1"],
                "options": {"verify_oracle": True},
            },
        )
        code, out, _ = run_cli(capsys, "decompose", path)
        assert code == 0
        result = json.loads(out)
        assert result["positive"] == ["1", "1/2"]
        assert result["negative"] == ["0", "1/2"]
        assert result["gram_s_det"] == "-2"
        assert result["checks"]["oracle_match"] is True

    def test_float_literal_rejected_exit_1(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text('{"labels": ["E"], "gram": [[-2.0]], "divisor": ["1"]}')
        code, _, err = run_cli(capsys, "decompose", str(path))
        assert code == 1
        assert "floating-point" in err

    def test_float_string_rejected_exit_1(self, tmp_path, capsys):
        path = write_problem(tmp_path, {"labels": ["E"], "gram": [["1.5"]], "divisor": ["1"]})
        code, _, _ = run_cli(capsys, "decompose", str(path))
        assert code == 1

    def test_asymmetric_gram_exit_1(self, tmp_path, capsys):
        path = write_problem(
            tmp_path, {"labels": ["a", "b"], "gram": [[1, 2], [3, 1]], "divisor": ["1", "1"]}
        )
        code, _, err = run_cli(capsys, "decompose", path)
        assert code == 1 and "symmetric" in err

    def test_missing_field_exit_1(self, tmp_path, capsys):
        path = write_problem(tmp_path, {"labels": ["E"], "gram": [[-2]]})
        code, _, err = run_cli(capsys, "decompose", path)
        assert code == 1 and "schema" in err

    def test_oracle_mismatch_exit_3(self, tmp_path, capsys, monkeypatch):
        # negative test of the harness: corrupt the oracle and expect exit 3
        path = write_problem(
            tmp_path,
            {"labels": ["E"], "gram": [[-2]], "divisor": ["1"], "options": {"verify_oracle": True}},
        )
        real = zariski.decompose_bruteforce

        def corrupted(form, divisor, limit=12):
            dec = real(form, divisor, limit)
            return zariski.Decomposition(
                positive=dec.negative,
                negative=dec.positive,
                negative_support=dec.negative_support,
                rounds=dec.rounds,
                negative_gram_det=dec.negative_gram_det,
            )

        monkeypatch.setattr(zariski, "decompose_bruteforce", corrupted)
        code, _, err = run_cli(capsys, "decompose", path)
        assert code == 3
        assert "disagree" in err

    def test_byte_identical_reruns(self, tmp_path, capsys):
        path = write_problem(
            tmp_path,
            {"labels": ["E1", "E2"], "gram": [[2, 1], [1, -2]], "divisor": ["3/2", "1"]},
        )
        _, out1, _ = run_cli(capsys, "decompose", path, "--verify-oracle")
        _, out2, _ = run_cli(capsys, "decompose", path, "--verify-oracle")
        assert out1 == out2

    def test_output_file(self, tmp_path, capsys):
        path = write_problem(tmp_path, {"labels": ["E"], "gram": [[2]], "divisor": ["2"]})
        out_path = tmp_path / "result.json"
        code, out, _ = run_cli(capsys, "decompose", path, "-o", str(out_path))
        assert code == 0
        assert out_path.read_text() == out

    def test_round_trip_exactness(self, tmp_path, capsys):
        divisor = ["7/3", "5/4", "0"]
        path = write_problem(
            tmp_path,
            {
                "labels": ["a", "b", "c"],
                "gram": [[2, 1, 0], [1, -2, 1], [0, 1, -4]],
                "divisor": divisor,
            },
        )
        code, out, _ = run_cli(capsys, "decompose", path)
        assert code == 0
        result = json.loads(out)
        p = [Fraction(x) for x in result["positive"]]
        n = [Fraction(x) for x in result["negative"]]
        assert [a + b for a, b in zip(p, n)] == [Fraction(x) for x in divisor]


class TestLattice:
    def test_og10(self, capsys):
        code, out, _ = run_cli(capsys, "lattice", "OG10")
        assert code == 0
        report = json.loads(out)
        assert report["elementary_divisors"] == [3]
        assert report["cardinality"] == 3
        assert report["preset"]["published_max_square"] == 6

    def test_u_block(self, capsys):
        code, out, _ = run_cli(capsys, "lattice", "U")
        report = json.loads(out)
        assert code == 0 and report["cardinality"] == 1

    def test_kummer_3(self, capsys):
        code, out, _ = run_cli(capsys, "lattice", "Kummer:3")
        report = json.loads(out)
        assert report["cardinality"] == 8
        assert report["preset"]["published_max_square"] == 32

    def test_block_sum(self, capsys):
        code, out, _ = run_cli(capsys, "lattice", "U+U+rank1:-6")
        report = json.loads(out)
        assert report["rank"] == 5
        assert report["elementary_divisors"] == [6]
        assert report["signature"] == [2, 3, 0]

    def test_grammar_error_exit_1(self, capsys):
        code, _, err = run_cli(capsys, "lattice", "Q8+foo")
        assert code == 1 and "unknown block" in err

    def test_odd_rank1_rejected(self, capsys):
        code, _, _ = run_cli(capsys, "lattice", "rank1:3")
        assert code == 1


class TestTable:
    def test_default_passes(self, capsys):
        code, out, _ = run_cli(capsys, "table")
        assert code == 0
        assert "K3^[2]" in out and "OG10" in out and "MISMATCH" not in out

    def test_n5_k3_row(self, capsys):
        code, out, _ = run_cli(capsys, "table", "--n", "5", "--json")
        assert code == 0
        rows = json.loads(out)["rows"]
        k3 = rows[0]
        assert k3["type"] == "K3^[5]" and k3["group"] == "Z/8"
        assert k3["published_square"] == 32 and k3["bound_general"] == 32

    def test_json_stable(self, capsys):
        _, out1, _ = run_cli(capsys, "table", "--json")
        _, out2, _ = run_cli(capsys, "table", "--json")
        assert out1 == out2

    def test_og10_displays_published_beside_general(self, capsys):
        code, out, _ = run_cli(capsys, "table", "--json")
        rows = json.loads(out)["rows"]
        og10 = next(r for r in rows if r["type"] == "OG10")
        assert og10["bound_general"] == 12 and og10["published_square"] == 6


class TestBounds:
    def test_k3_square(self, capsys):
        code, out, _ = run_cli(capsys, "bounds", "K3n:2", "--rho", "2")
        assert code == 0
        report = json.loads(out)
        assert report["rho_specific"]["denominator_bound"] == "40320"
        assert report["rho_specific"]["birationality_m0"] == "846720"

    def test_guard_descriptor(self, capsys):
        code, out, _ = run_cli(capsys, "bounds", "K3n:2", "--rho", "21")
        report = json.loads(out)
        assert report["rho_specific"]["denominator_bound"] == {
            "factorial_of": "1152921504606846976",
            "times": "1",
        }

    def test_og6(self, capsys):
        code, out, _ = run_cli(capsys, "bounds", "OG6", "--rho", "2")
        report = json.loads(out)
        assert report["negativity_bound_general"] == 16
        assert report["negativity_bound_refined"] == 8
        assert report["published_max_square"] == 8

    def test_rho_out_of_range_exit_1(self, capsys):
        code, _, err = run_cli(capsys, "bounds", "K3n:2", "--rho", "25")
        assert code == 1 and "rho" in err

    def test_volume_rational(self, capsys):
        code, out, _ = run_cli(capsys, "bounds", "K3n:2", "--rho", "1", "--volume", "1/2")
        report = json.loads(out)
        assert report["rho_specific"]["chow_degree"] == str(Fraction(21**4, 2))


class TestFuzz:
    def test_small_run_passes(self, capsys):
        code, out, _ = run_cli(capsys, "fuzz", "--seed", "1", "--count", "40", "--m", "4")
        assert code == 0
        assert "40 passed, 0 failed" in out

    def test_count_zero_vacuous(self, capsys):
        code, out, _ = run_cli(capsys, "fuzz", "--seed", "1", "--count", "0")
        assert code == 0
        assert "0 passed, 0 failed" in out

    def test_injected_bug_exit_4(self, capsys, monkeypatch):
        real = zariski.decomposition_checks

        def corrupted(form, divisor, dec):
            checks = dict(real(form, divisor, dec))
            checks["parts_sum"] = False
            return checks

        monkeypatch.setattr(zariski, "decomposition_checks", corrupted)
        code, out, _ = run_cli(capsys, "fuzz", "--seed", "7", "--count", "3", "--m", "3")
        assert code == 4
        assert "first failing seed: 7" in out


class TestSubprocessEntry:
    def test_console_invocation(self, tmp_path):
        path = write_problem(tmp_path, {"labels": ["E"], "gram": [[-2]], "divisor": ["1"]})
        proc = subprocess.run(
            [sys.executable, "-m", "zarlat", "decompose", str(path)],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["negative"] == ["1"]

    def test_usage_error_exit_1(self):
        proc = subprocess.run(
            [sys.executable, "-m", "zarlat", "decompose"], capture_output=True, text=True
        )
        assert proc.returncode == 1


class TestSchemas:
    def test_docs_copies_match_packaged(self):
        import importlib.resources as resources
        from pathlib import Path

        repo_docs = Path(__file__).resolve().parent.parent / "docs"
        for name in ("problem.schema.json", "result.schema.json"):
            packaged = resources.files("zarlat").joinpath(f"schemas/{name}").read_text()
            assert (repo_docs / name).read_text() == packaged

    def test_result_schema_accepts_all_outputs(self, tmp_path, capsys):
        schema = result_schema()
        for seed in range(5):
            spec = zariski.InstanceSpec.standard(seed=seed, m=3)
            form, divisor = zariski.random_instance(spec)
            payload = {
                "labels": list(form.labels),
                "gram": [[str(x) for x in row] for row in form.gram.entries],
                "divisor": [str(x) for x in divisor],
            }
            path = write_problem(tmp_path, payload, name=f"p{seed}.json")
            code, out, _ = run_cli(capsys, "decompose", path)
            assert code == 0
            jsonschema.validate(json.loads(out), schema)
