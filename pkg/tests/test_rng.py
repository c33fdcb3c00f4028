"""Draw streams: reproducibility, value semantics, golden outputs."""

import pytest

from reconplan.rng import SeededStream

# Frozen outputs pin the generator across platforms and releases.
GOLDEN_12345 = [
    0.1330796686614273,
    0.20481663336165912,
    0.11954258300911547,
    0.17611780724496118,
]


def test_golden_sequence():
    s = SeededStream(12345)
    assert [s.uniform() for _ in range(4)] == GOLDEN_12345


def test_position_addresses_draws_directly():
    s = SeededStream(12345, 2)
    assert s.uniform() == GOLDEN_12345[2]


def test_same_seed_same_sequence():
    a = SeededStream(42)
    b = SeededStream(42)
    assert [a.uniform() for _ in range(50)] == [b.uniform() for _ in range(50)]


def test_clone_replays_remaining_sequence():
    s = SeededStream(9)
    s.uniform()
    c = s.clone()
    assert c.pos == s.pos
    assert [s.uniform() for _ in range(10)] == [c.uniform() for _ in range(10)]


def test_uniform_range():
    s = SeededStream(3)
    for _ in range(1000):
        u = s.uniform()
        assert 0.0 <= u < 1.0


def test_split_is_deterministic_and_decorrelated():
    a = SeededStream(7).split(3)
    b = SeededStream(7).split(3)
    assert a.seed == b.seed == 9716053284404205539
    assert a.uniform() == pytest.approx(0.3617700027909394)
    assert SeededStream(7).split(4).seed != a.seed
    # splitting consumes nothing from the parent
    parent = SeededStream(7)
    parent.split(0)
    assert parent.pos == 0


def test_randint_bounds():
    s = SeededStream(11)
    draws = [s.randint(16) for _ in range(2000)]
    assert min(draws) == 0
    assert max(draws) == 15


def test_gauss_golden_and_symmetry():
    g = SeededStream(99)
    vals = [g.gauss() for _ in range(3)]
    assert vals[0] == pytest.approx(-0.6386341757856767)
    s = SeededStream(123)
    mean = sum(s.gauss() for _ in range(4000)) / 4000
    assert abs(mean) < 0.05
