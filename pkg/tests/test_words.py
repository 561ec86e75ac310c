import random

import pytest

from retword.substitution import fixed_point_prefix
from retword.words import (
    Alphabet,
    Word,
    detect_period,
    factor_set,
    occurrences,
    periodic_tail_witness,
)

AB = Alphabet(("a", "b", "c"))
BIN = Alphabet(("0", "1"))


def naive_occurrences(pattern: Word, host: Word) -> list[int]:
    """Oracle: plain window comparison, letter by letter."""
    m, n = len(pattern), len(host)
    out = []
    for i in range(n - m + 1):
        if all(host[i + j] == pattern[j] for j in range(m)):
            out.append(i)
    return out


def naive_detect_period(host: Word, max_period: int):
    """Oracle: exhaustive scan with the documented one-full-repetition floor."""
    n = len(host)
    for pre in range(n):
        for per in range(1, max_period + 1):
            if pre + 2 * per > n:
                continue
            if all(host[i] == host[i + per] for i in range(pre, n - per)):
                return (pre, per)
    return None


def test_occurrences_example_string():
    host = AB.word("ababcababbbabab")
    occ = occurrences(AB.word("abab"), host)
    assert occ.positions == (0, 5, 11)
    assert occ.positions == tuple(naive_occurrences(AB.word("abab"), host))
    assert occ.count == 3


def test_occurrences_identity_case():
    occ = occurrences(AB.word("a"), AB.word("a"))
    assert occ.positions == (0,)


def test_occurrences_absent_pattern():
    occ = occurrences(AB.word("aa"), AB.word("abab"))
    assert occ.positions == ()


def test_occurrences_empty_pattern_rejected():
    with pytest.raises(ValueError):
        occurrences(Word(AB, ()), AB.word("abab"))


def test_occurrences_overlapping_counted():
    host = BIN.word("00000")
    assert occurrences(BIN.word("00"), host).positions == (0, 1, 2, 3)


def test_occurrences_matches_oracle_random():
    rng = random.Random(7)
    for _ in range(200):
        host = Word(BIN, tuple(rng.randrange(2) for _ in range(rng.randrange(1, 40))))
        plen = rng.randrange(1, 5)
        pattern = Word(BIN, tuple(rng.randrange(2) for _ in range(plen)))
        assert list(occurrences(pattern, host).positions) == naive_occurrences(pattern, host)


def test_factor_set_binary_example():
    fs = factor_set(BIN.word("0110"), 2)
    assert fs == {BIN.word("01"), BIN.word("11"), BIN.word("10")}


def test_factor_set_whole_word():
    w = AB.word("abca")
    assert factor_set(w, len(w)) == {w}


def test_factor_set_unary_host():
    host = AB.word("aaaa")
    assert factor_set(host, 2) == {AB.word("aa")}


def test_factor_set_bad_length():
    with pytest.raises(ValueError):
        factor_set(AB.word("ab"), 3)
    with pytest.raises(ValueError):
        factor_set(AB.word("ab"), 0)


def test_detect_period_pure_periodic():
    assert detect_period(AB.word("abababab"), 4) == (0, 2)


def test_detect_period_with_preperiod():
    assert detect_period(AB.word("cabababa"), 4) == (1, 2)


def test_detect_period_thue_morse_prefix_absent(morse):
    host = fixed_point_prefix(morse, 64)
    assert detect_period(host, 16) is None
    assert naive_detect_period(host, 16) is None


def test_detect_period_matches_oracle_random():
    rng = random.Random(21)
    for _ in range(150):
        host = Word(BIN, tuple(rng.randrange(2) for _ in range(rng.randrange(4, 30))))
        max_period = len(host) // 2
        assert detect_period(host, max_period) == naive_detect_period(host, max_period)


def test_detect_period_precondition():
    with pytest.raises(ValueError):
        detect_period(AB.word("abab"), 3)


def test_detect_period_doubled_word_always_periodic():
    rng = random.Random(3)
    for _ in range(50):
        host = Word(BIN, tuple(rng.randrange(2) for _ in range(rng.randrange(1, 15))))
        doubled = host + host
        found = detect_period(doubled, len(host))
        assert found is not None
        assert found[1] <= len(host)


def test_seam_occurrence_inequality():
    rng = random.Random(11)
    for _ in range(200):
        u = Word(BIN, tuple(rng.randrange(2) for _ in range(rng.randrange(1, 4))))
        v = Word(BIN, tuple(rng.randrange(2) for _ in range(rng.randrange(0, 15))))
        w = Word(BIN, tuple(rng.randrange(2) for _ in range(rng.randrange(0, 15))))
        lu = lambda host: len(naive_occurrences(u, host))
        assert lu(v + w) >= lu(v) + lu(w) - 1
        assert len(occurrences(u, v + w).positions) == lu(v + w)


def test_occurrences_consistent_with_factor_set():
    rng = random.Random(5)
    for _ in range(50):
        host = Word(BIN, tuple(rng.randrange(2) for _ in range(rng.randrange(3, 25))))
        for n in range(1, 4):
            if n > len(host):
                continue
            factors = factor_set(host, n)
            for cand in ({Word(BIN, t) for t in [(0,) * n, (1,) * n]} | factors):
                in_set = cand in factors
                has_occ = occurrences(cand, host).count > 0
                assert in_set == has_occ


def test_periodic_tail_witness_flags_periodic():
    host = BIN.word("01" * 40)
    assert periodic_tail_witness(host) == (0, 2)


def test_periodic_tail_witness_ignores_accidental_tail_square(fib):
    # long Fibonacci prefixes end in squares, which must not count
    host = fixed_point_prefix(fib, 2048)
    assert periodic_tail_witness(host) is None


def test_word_equality_and_hash():
    assert AB.word("ab") == AB.word("ab")
    assert AB.word("ab") != AB.word("ba")
    assert hash(AB.word("ab")) == hash(AB.word("ab"))
    other = Alphabet(("a", "b"))
    assert other.word("ab") != AB.word("ab")


def test_alphabet_validation():
    with pytest.raises(ValueError):
        Alphabet(())
    with pytest.raises(ValueError):
        Alphabet(("a", "a"))
    with pytest.raises(ValueError):
        AB.word("xyz")
