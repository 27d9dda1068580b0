import argparse
import json
from pathlib import Path

import pytest

import main
from commands.verify import parseRankRange
from services.partitions import Partition
from services.socleEngine import AlgebraKind, SocleDiagram, socleLayers
from utils.errors import EXIT_CAPACITY, EXIT_INVALID, EXIT_PARSE, EXIT_PASS


RENDER_DIR = Path(__file__).parent / "golden" / "render"


def runCli(capsys, *argv):
    code = main.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_socle_ascii_output(capsys):
    code, out, _ = runCli(capsys, "socle", "--algebra", "gl", "--lambda", "1", "--mu", "1")
    assert code == EXIT_PASS
    assert out == (
        "+--------+\n"
        "| Γ{0;0} |\n"
        "+--------+\n"
        "| Γ{1;1} |\n"
        "+--------+\n"
        "Loewy length 2 (ambient bound 2)\n"
    )


def test_socle_unicode_output(capsys):
    code, out, _ = runCli(capsys, "socle", "--algebra", "sp", "--lambda", "1,1", "--unicode")
    assert code == EXIT_PASS
    assert out == (
        "┌────────┐\n"
        "│ Γ⟨0⟩   │\n"
        "├────────┤\n"
        "│ Γ⟨1,1⟩ │\n"
        "└────────┘\n"
        "Loewy length 2 (ambient bound 2)\n"
    )


def test_socle_json_round_trip(capsys, tmp_path):
    target = tmp_path / "out" / "diagram.json"
    code, _, _ = runCli(capsys, "socle", "--algebra", "gl", "--lambda", "2,1", "--mu", "1", "--json", str(target))
    assert code == EXIT_PASS
    payload = json.loads(target.read_text(encoding="utf-8"))
    assert SocleDiagram.fromJson(payload) == socleLayers(AlgebraKind.GL, Partition((2, 1)), Partition((1,)))


def test_socle_rejects_mu_for_classical(capsys):
    code, out, err = runCli(capsys, "socle", "--algebra", "sp", "--lambda", "2", "--mu", "1")
    assert code == EXIT_INVALID
    assert out == ""
    assert err.startswith("error: ")


def test_unknown_algebra_is_invalid(capsys):
    code, _, err = runCli(capsys, "socle", "--algebra", "e8", "--lambda", "1")
    assert code == EXIT_INVALID
    assert "e8" in err


def test_bad_partition_is_parse_error(capsys):
    code, _, err = runCli(capsys, "socle", "--algebra", "gl", "--lambda", "2,x")
    assert code == EXIT_PARSE
    assert "2,x" in err


def test_increasing_partition_is_parse_error(capsys):
    code, _, _ = runCli(capsys, "lr", "--lambda", "1,2", "--mu", "1")
    assert code == EXIT_PARSE


@pytest.mark.parametrize("path", sorted(RENDER_DIR.glob("*.txt")), ids=lambda path: path.stem)
def test_decompose_matches_rendered_golden(capsys, path):
    algebra, *degrees = path.stem.split("_")
    if algebra == "gl":
        argv = ["decompose", "--algebra", algebra, "-p", degrees[0], "-q", degrees[1]]
    else:
        argv = ["decompose", "--algebra", algebra, "--d", degrees[0]]
    code, out, _ = runCli(capsys, *argv)
    assert code == EXIT_PASS
    assert out == path.read_text(encoding="utf-8")


def test_decompose_sl_uses_gl_towers(capsys):
    code, out, _ = runCli(capsys, "decompose", "--algebra", "sl", "-p", "2", "-q", "1")
    assert code == EXIT_PASS
    expected = (RENDER_DIR / "gl_2_1.txt").read_text(encoding="utf-8")
    assert out == expected.replace("gl V^", "sl V^", 1)


def test_decompose_accepts_p_for_classical(capsys):
    _, byD, _ = runCli(capsys, "decompose", "--algebra", "so", "--d", "3")
    _, byP, _ = runCli(capsys, "decompose", "--algebra", "so", "-p", "3")
    assert byD == byP


@pytest.mark.parametrize(
    "argv",
    [
        ["decompose", "--algebra", "gl", "--d", "2"],
        ["decompose", "--algebra", "sp", "--d", "2", "-p", "2"],
        ["decompose", "--algebra", "sp", "--d", "2", "-q", "1"],
        ["decompose", "--algebra", "gl", "-p", "-1"],
    ],
)
def test_decompose_rejects_bad_shapes(capsys, argv):
    code, _, _ = runCli(capsys, *argv)
    assert code == EXIT_INVALID


def test_decompose_json(capsys, tmp_path):
    target = tmp_path / "decomposition.json"
    runCli(capsys, "decompose", "--algebra", "gl", "-p", "2", "-q", "1", "--json", str(target))
    payload = json.loads(target.read_text(encoding="utf-8"))
    assert (payload["algebra"], payload["p"], payload["q"]) == ("gl", 2, 1)
    assert [(entry["lambda"], entry["mu"], entry["mult"]) for entry in payload["summands"]] == [("2", "1", 1), ("1,1", "1", 1)]


def test_lr_expansion_and_coefficient(capsys):
    code, out, _ = runCli(capsys, "lr", "--lambda", "1", "--mu", "1")
    assert code == EXIT_PASS
    assert out == "(2):1 (1,1):1\n"

    _, out, _ = runCli(capsys, "lr", "--lambda", "2,1", "--mu", "2,1", "--nu", "3,2,1")
    assert out == "2\n"

    _, out, _ = runCli(capsys, "lr", "--lambda", "1", "--mu", "1", "--nu", "3")
    assert out == "0\n"


def test_lr_oracle_check(capsys):
    code, out, _ = runCli(capsys, "lr", "--lambda", "2,1", "--mu", "1", "--check")
    assert code == EXIT_PASS
    assert out.splitlines()[-1] == "oracle: agrees"


def test_parse_rank_range():
    assert parseRankRange("5") == [5]
    assert parseRankRange("4..6") == [4, 5, 6]
    for text in ("0", "6..4", "five", "4.."):
        with pytest.raises(argparse.ArgumentTypeError):
            parseRankRange(text)


def test_verify_single_rank(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = runCli(capsys, "verify", "--algebra", "gl", "--lambda", "1", "--mu", "1", "--n", "3", "--json", str(target))
    assert code == EXIT_PASS
    lines = out.splitlines()
    assert lines[0].startswith("gl n=3 lambda=1 mu=1: PASS")
    assert len(lines) == 3
    report = json.loads(target.read_text(encoding="utf-8"))
    assert report["pass"] is True
    assert report["ambient_dim"] == 9


def test_verify_rank_range(capsys):
    code, out, _ = runCli(capsys, "verify", "--algebra", "gl", "--lambda", "1", "--mu", "1", "--n", "3..4")
    assert code == EXIT_PASS
    assert out.splitlines()[-1] == "stable across n=3..4: yes"


def test_verify_capacity_exit_code(capsys):
    code, _, err = runCli(capsys, "verify", "--algebra", "gl", "--lambda", "4,4", "--mu", "4", "--n", "20")
    assert code == EXIT_CAPACITY
    assert "caps" in err


def test_verify_sp_below_modification_range_is_invalid(capsys):
    code, _, err = runCli(capsys, "verify", "--algebra", "sp", "--lambda", "1,1,1,1", "--n", "2")
    assert code == EXIT_INVALID
    assert "modification rules" in err


def test_missing_subcommand_exits_through_argparse():
    with pytest.raises(SystemExit) as excinfo:
        main.main([])
    assert excinfo.value.code == 2
