import json

import pytest

from paradec import parse_group_spec, verdict_from_jsonable
from paradec.cli import main
from paradec.doubling import Certificate, Violator


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    return code, json.loads(out), err


class TestBall:
    def test_radius_zero(self, capsys):
        code, out, _ = run(capsys, "ball", "--group", "free:2", "--radius", "0")
        assert code == 0
        assert "1 vertices" in out

    def test_json_summary(self, capsys):
        code, data, _ = run_json(
            capsys, "ball", "--group", "free:3", "--radius", "2"
        )
        assert code == 0
        assert data["vertices"] == 37
        assert data["sphere_sizes"] == [1, 6, 30]

    def test_dump_json(self, capsys, tmp_path):
        target = tmp_path / "patch.json"
        code, _, err = run(
            capsys,
            "ball",
            "--group",
            "cyclic:3",
            "--radius",
            "1",
            "--dump",
            str(target),
        )
        assert code == 0
        data = json.loads(target.read_text())
        assert data["group"] == "cyclic:3"
        assert len(data["vertices"]) == 3

    def test_generator_overrides(self, capsys):
        code, data, _ = run_json(
            capsys,
            "ball",
            "--group",
            "abelian:2",
            "--gens",
            "a=a,d=a b",
            "--radius",
            "1",
        )
        assert code == 0
        assert data["vertices"] == 5  # identity, ±a, ±(a+b)


class TestCheck:
    def test_free3_certificate_exit_zero(self, capsys):
        code, data, _ = run_json(
            capsys,
            "check",
            "--group",
            "free:3",
            "--s1",
            "1,a",
            "--s2",
            "1,b,c",
            "--radius",
            "3",
        )
        assert code == 0
        assert data["verdict"]["kind"] == "certificate"
        spec = parse_group_spec(data["group"])
        verdict = verdict_from_jsonable(spec, data["verdict"])
        assert isinstance(verdict, Certificate)
        assert len(verdict.pairs1) == data["domain_size"]

    def test_abelian_violator_exit_one(self, capsys):
        code, data, _ = run_json(
            capsys,
            "check",
            "--group",
            "abelian:1",
            "--s1",
            "1,a",
            "--s2",
            "1,a",
            "--radius",
            "2",
        )
        assert code == 1
        assert data["verdict"]["kind"] == "violator"
        spec = parse_group_spec(data["group"])
        verdict = verdict_from_jsonable(spec, data["verdict"])
        assert isinstance(verdict, Violator)
        assert verdict.union_size < len(verdict.a1) + len(verdict.a2)


class TestViolate:
    def test_found(self, capsys):
        code, data, _ = run_json(
            capsys,
            "violate",
            "--group",
            "abelian:2",
            "--s1",
            "1,a",
            "--s2",
            "1,b,a b",
            "--max-radius",
            "6",
        )
        assert code == 0
        assert data["found"] and data["radius"] <= 6

    def test_absent_exit_one(self, capsys):
        code, data, _ = run_json(
            capsys,
            "violate",
            "--group",
            "free:2",
            "--s1",
            "1,a",
            "--s2",
            "1,b",
            "--max-radius",
            "3",
        )
        assert code == 1
        assert not data["found"]


class TestDecompose:
    def test_free2_passes(self, capsys):
        code, data, _ = run_json(
            capsys,
            "decompose",
            "--group",
            "free:2",
            "--s1",
            "1,a",
            "--s2",
            "1,b",
            "--radius",
            "3",
        )
        assert code == 0
        assert data["verification"]["passed"]
        assert data["nonempty_pieces"] == 4

    def test_violating_domain_exits_one(self, capsys):
        code, data, _ = run_json(
            capsys,
            "decompose",
            "--group",
            "cyclic:6",
            "--s1",
            "1,a",
            "--s2",
            "1,a",
            "--radius",
            "3",
        )
        assert code == 1
        assert data["verdict"]["kind"] == "violator"


class TestForestAudit:
    def test_free3_all_pass(self, capsys):
        code, data, _ = run_json(
            capsys,
            "forest-audit",
            "--group",
            "free:3",
            "--radius",
            "3",
            "--samples",
            "5",
            "--seed",
            "11",
        )
        assert code == 0
        assert data["all_passed"]
        assert len(data["audits"]) == 5

    def test_explicit_translators(self, capsys):
        code, data, _ = run_json(
            capsys,
            "forest-audit",
            "--group",
            "free:3",
            "--s1",
            "1,a",
            "--s2",
            "1,b,c",
            "--radius",
            "3",
            "--samples",
            "3",
            "--seed",
            "2",
        )
        assert code == 0
        assert data["all_passed"]


class TestFreeCheck:
    def test_matrix_pair(self, capsys):
        code, data, _ = run_json(
            capsys,
            "free-check",
            "--group",
            "sl2z",
            "--g",
            "A",
            "--h",
            "B",
            "--max-length",
            "6",
        )
        assert code == 0
        assert data["free"] and data["witness"] is None

    def test_commuting_pair(self, capsys):
        code, data, _ = run_json(
            capsys,
            "free-check",
            "--group",
            "abelian:2",
            "--g",
            "a",
            "--h",
            "b",
            "--max-length",
            "4",
        )
        assert code == 1
        assert data["witness"] == "g h g^-1 h^-1"


class TestReport:
    def test_aggregation_pipeline(self, capsys, tmp_path):
        specs = [
            ("free:2", "1,a", "1,b", "4.json"),
            ("free:3", "1,a", "1,b,c", "5.json"),
        ]
        paths = []
        for group, s1, s2, name in specs:
            code, data, _ = run_json(
                capsys,
                "check",
                "--group",
                group,
                "--s1",
                s1,
                "--s2",
                s2,
                "--radius",
                "2",
            )
            assert code == 0
            path = tmp_path / name
            path.write_text(json.dumps(data))
            paths.append(str(path))
        code, data, _ = run_json(
            capsys,
            "free-check",
            "--group",
            "free:2",
            "--g",
            "a",
            "--h",
            "b",
            "--max-length",
            "5",
        )
        free_path = tmp_path / "free.json"
        free_path.write_text(json.dumps(data))
        code, report, _ = run_json(
            capsys,
            "report",
            "--inputs",
            *paths,
            "--freeness",
            str(free_path),
        )
        assert code == 0
        assert report["upper"] == 4
        assert report["lower"] == 4
        assert any("free subgroup" in note for note in report["justification"])


class TestDeterminismAndErrors:
    def test_byte_identical_json(self, capsys):
        argv = (
            "forest-audit",
            "--group",
            "free:3",
            "--radius",
            "3",
            "--samples",
            "4",
            "--seed",
            "7",
            "--format",
            "json",
        )
        _, first, _ = run(capsys, *argv)
        _, second, _ = run(capsys, *argv)
        assert first == second

    def test_bad_group_exit_two(self, capsys):
        code, _, err = run(capsys, "ball", "--group", "nope:3", "--radius", "1")
        assert code == 2
        assert "error" in err

    def test_bad_word_exit_two(self, capsys):
        code, _, err = run(
            capsys,
            "check",
            "--group",
            "free:2",
            "--s1",
            "1,q!",
            "--s2",
            "1,b",
            "--radius",
            "1",
        )
        assert code == 2

    def test_budget_env_var(self, capsys, monkeypatch):
        monkeypatch.setenv("PARADEC_VERTEX_BUDGET", "3")
        code, _, err = run(capsys, "ball", "--group", "free:2", "--radius", "3")
        assert code == 2
        assert "budget" in err

    def test_budget_flag_overrides_env(self, capsys, monkeypatch):
        monkeypatch.setenv("PARADEC_VERTEX_BUDGET", "3")
        code, _, _ = run(
            capsys, "ball", "--group", "free:2", "--radius", "3", "--budget", "100"
        )
        assert code == 0

    def test_usage_error_from_argparse(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["check", "--group", "free:2"])
        assert info.value.code == 2
