import json

import pytest

from core.errors import UsageError
from utils.formatting import Artifact, Formatter


@pytest.fixture
def artifact():
    """A small table with a gap in an integer column."""
    rows = [{"n": 0, "c_n": None}, {"n": 1, "c_n": 1}]
    return Artifact({"rows": rows}, "n\tc_n\n0\t\n1\t1", rows)


def test_json(artifact):
    """Test indented JSON with a trailing newline."""
    rendered = Formatter.render(artifact, "json")
    assert rendered.endswith("\n")
    assert json.loads(rendered) == {"rows": [{"n": 0, "c_n": None}, {"n": 1, "c_n": 1}]}


def test_csv_keeps_integers(artifact):
    """Test that a missing value leaves the column integral."""
    assert Formatter.render(artifact, "csv") == "n,c_n\n0,\n1,1\n"


def test_text_is_newline_terminated(artifact):
    """Test the text form."""
    assert Formatter.render(artifact, "text") == "n\tc_n\n0\t\n1\t1\n"


def test_unsupported_output():
    """Test refusals for unknown formats and artifacts without a table."""
    bare = Artifact({"value": 1}, "value = 1")
    with pytest.raises(UsageError):
        Formatter.render(bare, "csv")
    with pytest.raises(UsageError):
        Formatter.render(bare, "yaml")


def test_write_to_file(tmp_path):
    """Test writing to a path."""
    target = tmp_path / "out.txt"
    Formatter.write("hello\n", str(target))
    assert target.read_text(encoding="utf-8") == "hello\n"
