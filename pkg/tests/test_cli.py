import json
from pathlib import Path

import numpy as np
import pytest

from semiflows.cli import (
    EXIT_IO,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_USAGE,
    EXIT_VALIDATION,
    EXIT_VIOLATIONS,
    analysis,
    main,
)
from semiflows.instances import dump_instance, load_instance, parse_instance, preset

GOLDEN = Path(__file__).parent / "golden"
PRESETS = ["rotation", "doubling", "identity", "two-constants", "id-c0"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("name", PRESETS)
def test_generate_matches_golden_instance(capsys, name):
    code, out, _ = run(capsys, "generate", "--preset", name)
    assert code == EXIT_OK
    assert out == (GOLDEN / f"{name}.json").read_text()


@pytest.mark.parametrize("name", PRESETS)
def test_analyze_matches_golden_report(capsys, name):
    code, out, _ = run(capsys, "analyze", str(GOLDEN / f"{name}.json"))
    assert code == EXIT_OK
    assert out == (GOLDEN / f"{name}.analyze.txt").read_text()


def test_analyze_is_deterministic(capsys):
    path = str(GOLDEN / "doubling.json")
    first = run(capsys, "analyze", path)[1]
    assert run(capsys, "analyze", path)[1] == first


def test_golden_values():
    rot = analysis(load_instance(GOLDEN / "rotation.json"))
    assert rot["monoid"]["size"] == 8
    p = rot["properties"]
    assert p["distal"] and p["equicontinuous"] and p["uniformly_almost_periodic"]
    assert rot["invariant_measures"]["uniquely_ergodic"]
    assert rot["invariant_measures"]["particular"] == ["1/8"] * 8
    two = analysis(load_instance(GOLDEN / "two-constants.json"))
    assert not two["invariant_measures"]["feasible"]
    assert not two["properties"]["distal"]
    assert two["minimal_sets"] == [[0, 1]]
    dbl = analysis(load_instance(GOLDEN / "doubling.json"))
    assert dbl["properties"]["sensitive"] and not dbl["properties"]["equicontinuous"]
    assert dbl["properties"]["sensitive_levels"] == [2, 3]


def test_analyze_json(capsys, tmp_path):
    out_json = tmp_path / "r.json"
    code, out, _ = run(capsys, "analyze", str(GOLDEN / "id-c0.json"), "--json", str(out_json))
    assert code == EXIT_OK and out
    doc = json.loads(out_json.read_text())
    assert doc["properties"]["uniformly_almost_periodic"] is False
    code, out, _ = run(capsys, "analyze", str(GOLDEN / "id-c0.json"), "--json", "-")
    assert json.loads(out)["monoid"]["size"] == 2


def test_generate_random_byte_identical(capsys, tmp_path):
    args = ["generate", "--n", "5", "--gens", "2", "--seed", "3", "--count", "3",
            "--class", "permutation", "--out"]
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(capsys, *args, str(a))[0] == EXIT_OK
    assert run(capsys, *args, str(b))[0] == EXIT_OK
    files = sorted(p.name for p in a.iterdir())
    assert len(files) == 3
    for f in files:
        assert (a / f).read_bytes() == (b / f).read_bytes()


def test_round_trip():
    for name in PRESETS:
        inst = preset(name)
        back = parse_instance(dump_instance(inst))
        S, T = inst.semiflow(), back.semiflow()
        assert S.space == T.space and S.generators == T.generators
    from semiflows.audit import profile_space
    from semiflows.instances import InstanceFile, entourage_space
    U = profile_space("metric-cycle", 5)
    inst = InstanceFile(5, [[1, 2, 3, 4, 0]], entourage_space(U))
    assert parse_instance(dump_instance(inst)).uniform_space() == U


@pytest.mark.parametrize("text, code, needle", [
    ('{"n": 2, "generators": [[0, 1]], "space": {"entourages": [[]]}', EXIT_PARSE, "line 1"),
    ('{"n": 2, "generators": [[0, 1]]}', EXIT_PARSE, "space"),
    ('{"n": 2, "generators": [[0, 2]], "space": {"entourages": [[]]}}', EXIT_VALIDATION,
     "generators[0][1]"),
    ('{"n": 2, "generators": [[0, 1]], "space": {"metric": [[0, 1.5], [1.5, 0]], '
     '"thresholds": [1]}}', EXIT_VALIDATION, "space.metric[0][1]"),
    ('{"n": 2, "generators": [[0, 1]], "space": {"entourages": [[[0, 5]]]}}', EXIT_VALIDATION,
     "out of range"),
    ('{"n": 2, "gens": [], "generators": [[0, 1]], "space": {"entourages": [[]]}}', EXIT_PARSE,
     "gens"),
])
def test_bad_instance_files(capsys, tmp_path, text, code, needle):
    p = tmp_path / "bad.json"
    p.write_text(text)
    got, _, err = run(capsys, "analyze", str(p))
    assert got == code
    assert needle in err


def test_missing_file(capsys, tmp_path):
    assert run(capsys, "analyze", str(tmp_path / "nope.json"))[0] == EXIT_IO


def test_unwritable_output(capsys, tmp_path):
    target = tmp_path / "missing-dir" / "x.json"
    assert run(capsys, "generate", "--preset", "rotation", "--out", str(target))[0] == EXIT_IO


def test_audit_exhaustive_clean(capsys):
    code, out, _ = run(capsys, "audit", "--n", "3", "--gens", "2", "--space-profile", "metric-cycle")
    assert code == EXIT_OK
    assert out.rstrip().endswith("violations: 0")


def test_audit_random_substantive(capsys):
    code, out, _ = run(capsys, "audit", "--theorems", "T3.5", "--n", "6", "--seeds", "100",
                       "--class", "permutation-abelian")
    assert code == EXIT_OK
    held = int(out.split("held: ")[1].split()[0])
    assert held > 0


@pytest.mark.parametrize("argv", [
    ["audit", "--n", "9"],
    ["audit", "--gens", "3"],
    ["audit", "--space-profile", "sphere"],
    ["audit", "--theorems", "T0.0"],
    ["audit", "--workers", "0"],
    ["audit", "--n", "4", "--seeds", "2", "--class", "odd"],
    ["frobnicate"],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == EXIT_USAGE


def test_audit_exit_status_reflects_violations(capsys, monkeypatch):
    import semiflows.audit as mod
    monkeypatch.setattr(mod.InstanceAnalysis, "distal", property(lambda self: False))
    code, out, _ = run(capsys, "audit", "--n", "2", "--theorems", "L2.3")
    assert code == EXIT_VIOLATIONS
    assert "VIOLATION" in out


def test_audit_deterministic_across_workers(capsys, tmp_path):
    base = ["audit", "--n", "3", "--space-profile", "coarse,metric-cycle"]
    _, one, _ = run(capsys, *base, "--workers", "1", "--json", str(tmp_path / "1.json"))
    _, two, _ = run(capsys, *base, "--workers", "2", "--json", str(tmp_path / "2.json"))
    assert one == two
    assert (tmp_path / "1.json").read_bytes() == (tmp_path / "2.json").read_bytes()
    doc = json.loads((tmp_path / "1.json").read_text())
    assert doc["violations"] == 0 and len(doc["results"]) == 22
