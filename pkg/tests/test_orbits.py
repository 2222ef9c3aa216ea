import pytest

from cosy.cohomology import basic_betti_from_betti
from cosy.orbits import (
    cpn_characterization,
    lookup,
    min_orbit_bound,
    orbit_count_from_basic,
    orbit_verdict,
    registry,
)


def test_cpn_counts():
    for n in range(1, 9):
        basic = [1 - p % 2 for p in range(2 * n + 1)]
        assert orbit_count_from_basic(basic) == n + 1


def test_quadric_count():
    assert orbit_count_from_basic([1, 0, 1, 0, 1, 0, 1]) == 4


def test_t3_count_is_arithmetic_only():
    assert orbit_count_from_basic([1, 2, 1]) == 4
    assert "conditional" in orbit_verdict([1, 3, 3, 1]).hypothesis


@pytest.mark.parametrize("bad", [[], [0, 1], [1, 2], [1, -1, 1]])
def test_invalid_basic_data(bad):
    with pytest.raises(ValueError):
        orbit_count_from_basic(bad)


def test_min_orbit_bound():
    assert [min_orbit_bound(d) for d in (3, 5, 7)] == [2, 3, 4]
    with pytest.raises(ValueError):
        min_orbit_bound(4)


def test_cpn_characterization_examples():
    assert cpn_characterization([1] * 6)
    assert not cpn_characterization([1, 5, 10, 10, 5, 1])
    assert cpn_characterization([1] * 8)
    assert not cpn_characterization([1, 1])


def test_verdict_for_unrealizable_betti():
    v = orbit_verdict([1, 0, 0, 1])
    assert v.count is None and v.meets_bound is None and "negative" in v.reason


def test_registry_contents():
    names = {s.name for s in registry()}
    assert {f"CP^{n} x S^1" for n in range(1, 9)} <= names
    assert {f"Q^{2 * m - 1} x S^1" for m in range(1, 5)} <= names
    assert {f"T^{k}" for k in range(1, 8)} <= names
    assert {"KT", "KT x S^1"} <= names
    assert all(s.source for s in registry())
    assert "not homeomorphic" in lookup("Q^3 x S^1").source
    with pytest.raises(KeyError):
        lookup("S^3")


@pytest.mark.parametrize("s", registry(), ids=lambda s: s.name)
def test_registry_entry_consistency(s):
    cpn = cpn_characterization(s.betti)
    assert cpn == (s.family in ("cpn", "quadric"))
    if not s.k_cosymplectic or len(s.betti) < 4:
        return
    rec = basic_betti_from_betti(s.betti)
    assert rec.ok
    if s.basic_betti is not None:
        assert rec.values == s.basic_betti
    count = orbit_count_from_basic(rec.values)
    bound = min_orbit_bound(len(s.betti) - 1)
    assert count >= bound
    assert cpn == (count == bound)
    if s.closed_orbit_count is not None:
        assert count == s.closed_orbit_count
