import pytest
from hypothesis import given, strategies as st

from map2d.rng import MASK64, SplitMix64, derive_map_state, mix64


def test_reference_vectors():
    rng = SplitMix64(1234567)
    assert [rng.next_u64() for _ in range(5)] == [
        6457827717110365317,
        3203168211198807973,
        9817491932198370423,
        4593380528125082431,
        16408922859458223821,
    ]
    assert SplitMix64(0).next_u64() == 0xE220A8397B1DCDAF


def test_state_wraps_at_64_bits():
    rng = SplitMix64(MASK64)
    rng.next_u64()
    assert rng.state == (MASK64 + 0x9E3779B97F4A7C15) & MASK64


class _Scripted(SplitMix64):
    def __init__(self, values):
        super().__init__(0)
        self.values = list(values)

    def next_u64(self):
        return self.values.pop(0)


def test_below_rejects_biased_tail():
    # span 3: 2**64 % 3 == 1, so only the single value 2**64 - 1 is rejected
    limit = (1 << 64) - 1
    rng = _Scripted([limit, limit - 1])
    assert rng.below(3) == (limit - 1) % 3
    assert rng.values == []


def test_below_power_of_two_never_rejects():
    rng = _Scripted([MASK64])
    assert rng.below(8) == 7


@pytest.mark.parametrize("lo,hi", [(0, 0), (5, 5), (-3, 3), (14, 33)])
def test_randint_inclusive(lo, hi):
    rng = SplitMix64(99)
    seen = {rng.randint(lo, hi) for _ in range(2000)}
    assert seen == set(range(lo, hi + 1))


def test_bad_ranges():
    with pytest.raises(ValueError):
        SplitMix64(1).randint(3, 2)
    with pytest.raises(ValueError):
        SplitMix64(1).below(0)


@given(st.integers(0, MASK64), st.integers(0, 10**6))
def test_derive_is_deterministic_and_distinct(seed, index):
    a = derive_map_state(seed, index)
    assert a == derive_map_state(seed, index)
    assert 0 <= a <= MASK64
    assert a != derive_map_state(seed, index + 1)  # mix64 is a bijection


def test_mix64_matches_first_output():
    assert mix64(0x9E3779B97F4A7C15) == 0xE220A8397B1DCDAF
