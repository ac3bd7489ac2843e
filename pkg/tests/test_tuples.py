import random
from itertools import combinations

import pytest

from apgaps.tuples import (
    DilatedTuple,
    Tuple,
    dilate,
    is_admissible,
    narrow_tuple,
    shifted_primes_tuple,
)


def exhaustive_minimal_diameter(k: int):
    """Smallest diameter admitting an admissible k-tuple, by brute force."""
    if k == 1:
        return 0
    D = k - 1
    while True:
        for mids in combinations(range(1, D), k - 2):
            if is_admissible(Tuple((0,) + mids + (D,))):
                return D
        D += 1


def test_admissibility_examples():
    assert is_admissible(Tuple((0, 2)))
    assert not is_admissible(Tuple((0, 1)))
    assert is_admissible(Tuple((0, 2, 6, 8, 12)))


def test_admissibility_translation_and_reversal_invariance():
    rng = random.Random(3)
    for _ in range(50):
        k = rng.randrange(2, 8)
        offs = sorted(rng.sample(range(0, 60), k))
        t = Tuple(tuple(offs))
        shift = rng.randrange(1, 20)
        translated = Tuple(tuple(h + shift for h in t.offsets))
        reversed_t = Tuple(tuple(t.offsets[-1] - h for h in reversed(t.offsets)))
        assert is_admissible(t) == is_admissible(translated)
        assert is_admissible(t) == is_admissible(reversed_t)


def test_shifted_primes_examples():
    assert shifted_primes_tuple(1).offsets == (0,)
    assert shifted_primes_tuple(2).offsets == (0, 2)          # {3,5}
    assert shifted_primes_tuple(5).offsets == (0, 4, 6, 10, 12)  # {7..19}


@pytest.mark.parametrize("k", [2, 10, 50, 200, 500, 2000])
def test_shifted_primes_always_admissible(k):
    assert is_admissible(shifted_primes_tuple(k))


def test_shifted_primes_diameter_growth():
    # diameter <= C k log k empirically; C = 4 is comfortable at this scale
    import math

    for k in (10, 100, 1000):
        t = shifted_primes_tuple(k)
        assert t.diameter <= 4 * k * math.log(k)


def test_narrow_tuple_trivial():
    assert narrow_tuple(1).offsets == (0,)


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
def test_narrow_tuple_matches_exhaustive_minimum(k):
    assert narrow_tuple(k, budget=64).diameter == exhaustive_minimal_diameter(k)


def test_narrow_tuple_budget_monotone():
    diams = [narrow_tuple(40, budget=b).diameter for b in (1, 4, 16, 64)]
    assert all(b >= a for a, b in zip(diams[1:], diams))
    assert all(is_admissible(narrow_tuple(40, budget=b)) for b in (1, 64))


def test_dilate_examples():
    assert dilate(Tuple((0, 2)), 5, 1).elements == (1, 11)
    assert dilate(Tuple((0, 2, 6)), 3, 2).elements == (2, 8, 20)
    assert dilate(Tuple((0,)), 7, 3).elements == (3,)


def test_dilate_invariants():
    d = dilate(Tuple((0, 2, 6)), 3, 2)
    assert all(e % 3 == 2 for e in d.elements)
    assert d.diameter == 3 * 6


def test_dilate_rejects_noncoprime():
    with pytest.raises(ValueError):
        dilate(Tuple((0, 2)), 4, 2)


def test_tuple_normalization_and_validation():
    assert Tuple((5, 7, 11)).offsets == (0, 2, 6)
    with pytest.raises(ValueError):
        Tuple((0, 2, 2))
    with pytest.raises(ValueError):
        Tuple(())


def test_tuple_serialization_roundtrip(tmp_path):
    t = Tuple((0, 2, 6, 8, 12))
    path = tmp_path / "t.tup"
    t.save(path)
    assert Tuple.load(path) == t
    assert Tuple.from_line("0, 2, 6") == Tuple((0, 2, 6))
    with pytest.raises(ValueError):
        Tuple.from_line("  ")
