import pytest

from config.run_config import RunConfig
from config.settings import ORACLE_LIMITS
from core.errors import BoundError, UsageError


@pytest.fixture
def config_file(tmp_path):
    """A key=value configuration file."""
    path = tmp_path / "run.env"
    path.write_text("max_n=4\nseed=7\nformat=csv\ntimings=true\n")
    return str(path)


def test_defaults():
    """Test that a bare load gives the validated defaults."""
    config = RunConfig.load()
    assert config.max_n == ORACLE_LIMITS["max_n"]
    assert config.timings is False


def test_file_values(config_file):
    """Test that file values replace defaults and are coerced."""
    config = RunConfig.load(config_file)
    assert config.max_n == 4
    assert config.seed == 7
    assert config.format == "csv"
    assert config.timings is True


def test_flags_win_over_file(config_file):
    """Test precedence: defaults < file < explicit overrides, None meaning unset."""
    config = RunConfig.load(config_file, {"max_n": 2, "seed": None, "q-order": "3"})
    assert config.max_n == 2
    assert config.seed == 7
    assert config.q_order == 3


def test_missing_file(tmp_path):
    """Test that a missing file leaves the defaults in place."""
    config = RunConfig.load(str(tmp_path / "absent.env"))
    assert config == RunConfig()


def test_safety_caps():
    """Test the hard cap on max_n and nonnegative orders."""
    with pytest.raises(BoundError):
        RunConfig.load(overrides={"max_n": ORACLE_LIMITS["hard_cap"] + 1})
    with pytest.raises(BoundError):
        RunConfig(p_order=-1).validate()


def test_bad_values():
    """Test unknown keys, non-integers and unknown formats."""
    with pytest.raises(UsageError):
        RunConfig().with_overrides({"colour": "red"})
    with pytest.raises(UsageError):
        RunConfig().with_overrides({"max_n": "six"})
    with pytest.raises(UsageError):
        RunConfig(format="xml").validate()


def test_seeded_generator():
    """Test that equal seeds give equal draws."""
    a, b = RunConfig(seed=11).rng(), RunConfig(seed=11).rng()
    assert [a.random() for _ in range(3)] == [b.random() for _ in range(3)]


def test_verification_windows_from_file(tmp_path):
    """Test that the verify-all windows can be set in a configuration file."""
    path = tmp_path / "windows.env"
    path.write_text("relation_count=5\ntheta_max_length=3\npolyomino_max_area=6\n")
    config = RunConfig.load(str(path))
    assert config.relation_count == 5
    assert config.theta_max_length == 3
    assert config.polyomino_max_area == 6
    with pytest.raises(BoundError):
        RunConfig(heap_length=-1).validate()
    with pytest.raises(BoundError):
        RunConfig(double_alphabet=0).validate()
