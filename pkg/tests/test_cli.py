import json

import pytest

from cli import EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION, run
from core.errors import UsageError
from tools.commands import build_parser, parse_element, resolve_relation


def test_gamma_text(capsys):
    """Test the text rendering of gamma(R_2)."""
    assert run(["--format", "text", "gamma", "R", "2"]) == EXIT_OK
    assert capsys.readouterr().out == "R[2]⊗R[2] + R[2]⊗R[1,1] + R[1,1]⊗R[2]\n"


def test_gamma_json(capsys):
    """Test the JSON artifact of gamma(R_11)."""
    assert run(["--format", "json", "gamma", "R", "1,1"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["input"] == "R[1,1]"
    assert data["tensor"]["terms"] == [{"left": "1,1", "right": "1,1", "coefficient": {"1": "1/1"}}]


def test_csv_table(capsys):
    """Test the CSV table of a_n and c_n up to n = 3."""
    assert run(["--max-n", "3", "--format", "csv", "csv-table"]) == EXIT_OK
    assert capsys.readouterr().out == "n,a_n,c_n\n0,1,\n1,1,1\n2,3,1\n3,19,4\n"


def test_expand(capsys):
    """Test expanding a product of ribbons."""
    assert run(["--format", "text", "expand", "R[2]*R[1]"]) == EXIT_OK
    assert capsys.readouterr().out == "R[3] + R[2,1]\n"


def test_convert_quasi_symmetric(capsys):
    """Test M_2 in the fundamental basis."""
    assert run(["--format", "text", "convert", "M", "2", "--to", "F"]) == EXIT_OK
    assert capsys.readouterr().out == "F[2] - F[1,1]\n"
    assert run(["convert", "M", "2", "--to", "S"]) == EXIT_USAGE


def test_output_file(tmp_path, capsys):
    """Test that --out writes the artifact to a file instead of stdout."""
    target = tmp_path / "gamma.txt"
    assert run(["--format", "text", "--out", str(target), "gamma", "R", "1,1"]) == EXIT_OK
    assert capsys.readouterr().out == ""
    assert target.read_text(encoding="utf-8") == "R[1,1]⊗R[1,1]\n"


def test_usage_errors(capsys):
    """Test exit code 2 for bad compositions, unknown flags, caps and missing commands."""
    assert run(["gamma", "R", "2,x"]) == EXIT_USAGE
    assert "error: UsageError:" in capsys.readouterr().err
    assert run(["--no-such-flag", "gamma", "R", "2"]) == EXIT_USAGE
    assert run(["--max-n", "9", "csv-table"]) == EXIT_USAGE
    assert "error: BoundError:" in capsys.readouterr().err
    assert run([]) == EXIT_USAGE


def test_koszul_check_as_csv(capsys):
    """Test the boolean table of the alternating convolution check."""
    assert run(["--format", "csv", "theta", "--kind", "koszul", "--n", "2"]) == EXIT_OK
    assert capsys.readouterr().out == "n,vanishes\n2,True\n"


def test_polyomino_command(capsys):
    """Test the polyomino table for width <= 2 and area <= 3."""
    assert run(["--format", "json", "polyomino", "--max-width", "2", "--max-area", "3"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["route"] == "fast"
    assert data["truncation"] == {"x": 2, "q": 3}


def test_fr_series_mismatch_is_reported(capsys):
    """Test that the (y;p)_n variant is reported without failing the command."""
    assert run(["--format", "json", "fr-series", "--series", "second", "--variant", "printed", "--n", "1"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["agrees"] is False


def test_verify_all_failure_exit(monkeypatch, capsys):
    """Test that a failing verify-all exits with 1."""
    from tools import verification

    monkeypatch.setattr(verification, "CHECKS", [("boom", lambda config, rng: (False, {}))])
    assert run(["--format", "text", "verify-all"]) == EXIT_VERIFICATION
    assert "0/1 checks passed" in capsys.readouterr().out


def test_parse_element():
    """Test scalars, products and differences in Sym expressions."""
    f = parse_element("2*R[2] - R[1,1]")
    assert str(f) == "2·R[2] - R[1,1]"
    with pytest.raises(UsageError):
        parse_element("R[2]*X[1]")
    with pytest.raises(UsageError):
        parse_element("")


def test_resolve_relation(tmp_path):
    """Test presets, the named product relations and JSON files."""
    assert resolve_relation("gt", 3).name == "gt"
    assert resolve_relation("segment-overlap", 2).m == 3
    assert resolve_relation("bessel-product", 2).m == 4
    path = tmp_path / "rel.json"
    path.write_text("[[false, true], [true, false]]")
    assert resolve_relation(str(path), 0).m == 2
    with pytest.raises(UsageError):
        resolve_relation("nonsense", 3)


def test_parser_defaults():
    """Test that unset global flags stay None so config files can supply them."""
    args = build_parser().parse_args(["gamma", "R", "2"])
    assert args.max_n is None
    assert args.timings is None
    assert args.command == "gamma"


def test_missing_command_is_one_error_line(capsys):
    """Test that a run without a command prints a single parsable error line."""
    assert run(["--format", "text"]) == EXIT_USAGE
    err = capsys.readouterr().err.strip().splitlines()
    assert len(err) == 1
    assert err[0].startswith("error: UsageError: no command given")
    assert "verify-all" in err[0]
