import random

import pytest

from config.run_config import RunConfig
from core.compositions import Composition
from core.errors import VerificationError
from tools import verification
from tools.verification import random_composition, random_element, run_verification

CHEAP_CHECKS = ["gamma-morphism", "inversion-formula", "ribbon-image", "pair-count-a", "pair-count-c", "classical-bessel"]


@pytest.fixture
def small_config():
    """A run bounded at degree 4."""
    return RunConfig(max_n=4)


def test_algebraic_checks_pass(small_config):
    """Test the cheap checks in their fixed order."""
    report = run_verification(small_config, only=CHEAP_CHECKS)
    assert [result.name for result in report.results] == CHEAP_CHECKS
    assert [result.number for result in report.results] == [1, 2, 3, 4, 5, 6]
    assert report.passed


def test_inversion_reports_orientation(small_config):
    """Test that the twisted formula is reported as holding in the opposite orientation."""
    report = run_verification(small_config, only=["inversion-formula"])
    details = report.results[0].details
    assert details["untwisted_failures"] == []
    assert details["twisted_stated_holds"] == [0, 1, 2]
    assert details["twisted_orientation"] == "opposite"
    assert details["twisted_opposite_holds"] == [0, 1, 2, 3, 4]


def test_pair_counts_reported(small_config):
    """Test the a_n values recorded by the check."""
    report = run_verification(small_config, only=["pair-count-a"])
    assert report.results[0].details["values"] == [1, 1, 3, 19, 211]


def test_failing_check_does_not_stop_the_run(monkeypatch):
    """Test that a VerificationError becomes a failed check and later checks still run."""
    # Setup
    def boom(config, rng):
        raise VerificationError("bad")

    def fine(config, rng):
        return True, {"ok": 1}

    monkeypatch.setattr(verification, "CHECKS", [("boom", boom), ("fine", fine)])

    # Test
    report = run_verification(RunConfig())
    assert not report.passed
    assert report.results[0].error == "bad"
    assert report.results[1].passed
    assert report.render().splitlines() == ["[FAIL]  1. boom: bad", "[PASS]  2. fine", "1/2 checks passed"]


def test_timings_only_when_requested(monkeypatch):
    """Test that seconds appear only with timings enabled."""
    monkeypatch.setattr(verification, "CHECKS", [("fine", lambda config, rng: (True, {}))])
    plain = run_verification(RunConfig())
    timed = run_verification(RunConfig(timings=True))
    assert "seconds" not in plain.to_json()["checks"][0]
    assert "seconds" in timed.to_json()["checks"][0]
    assert "seconds" in timed.rows()[0]


def test_random_inputs_are_seeded():
    """Test that the helpers draw only from the given generator."""
    a, b = random.Random(3), random.Random(3)
    assert random_composition(a, 5) == random_composition(b, 5)
    assert random_element(a, 3) == random_element(b, 3)
    assert random_composition(random.Random(0), 0) == Composition(())


def test_pair_counts_c_reported(small_config):
    """Test the c_n values recorded by the check, with c_3 = 4."""
    report = run_verification(small_config, only=["pair-count-c"])
    assert report.passed
    assert report.results[0].details["values"] == [1, 1, 4, 33]


def test_checks_read_windows_from_the_run_config():
    """Test that the relation count and word length come from the configuration."""
    config = RunConfig(relation_count=3, theta_max_length=2)
    report = run_verification(config, only=["alternating-convolution"])
    assert report.passed
    assert report.results[0].details["relations"] == 3
    assert report.results[0].details["max_length"] == 2


def test_structure_check_degrees():
    """Test the property suites and omega on every ribbon up to degree 6."""
    report = run_verification(RunConfig(max_n=3), only=["structural-properties"])
    details = report.results[0].details
    assert report.passed, details["failures"]
    assert details["ribbons_checked"] == 64
    assert details["degrees"] == {"conversion": 7, "product": 6, "leibniz": 5, "omega_ribbons": 6}
    assert "omega_on_ribbons" in details["suites"]
