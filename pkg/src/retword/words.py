"""Letters, words, occurrence combinatorics and bounded periodicity detection.

Letters are dense integer indices into an alphabet's symbol table; every
algorithm works on indices.  Words cache a ``str`` rendering (one code point
per letter index) so that occurrence scanning can ride on ``str.find``; the
naive window scan stays available in the test suite as the oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


class Alphabet:
    """An ordered table of distinct display symbols; letters are 0-based indices."""

    __slots__ = ("symbols", "_index")

    def __init__(self, symbols: Iterable[str]):
        self.symbols: tuple[str, ...] = tuple(symbols)
        if not self.symbols:
            raise ValueError("alphabet needs at least one symbol")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("alphabet symbols must be pairwise distinct")
        self._index = {s: i for i, s in enumerate(self.symbols)}

    @property
    def size(self) -> int:
        return len(self.symbols)

    def index(self, symbol: str) -> int:
        try:
            return self._index[symbol]
        except KeyError:
            raise ValueError(f"symbol {symbol!r} not in alphabet {self.symbols}") from None

    def symbol(self, letter: int) -> str:
        return self.symbols[letter]

    def word(self, source: str | Iterable[str]) -> Word:
        """Build a word from a compact string (single-char symbols) or symbol iterable.

        A plain string is split on whitespace when it contains any, otherwise
        read character by character (which requires single-character symbols).
        """
        if isinstance(source, str):
            if any(c.isspace() for c in source):
                parts = source.split()
            else:
                parts = list(source)
        else:
            parts = list(source)
        return Word(self, tuple(self.index(p) for p in parts))

    def from_indices(self, letters: Iterable[int]) -> Word:
        return Word(self, tuple(letters))

    def __eq__(self, other) -> bool:
        return isinstance(other, Alphabet) and self.symbols == other.symbols

    def __hash__(self) -> int:
        return hash(self.symbols)

    def __repr__(self) -> str:
        return f"Alphabet({list(self.symbols)!r})"


class Word:
    """An immutable finite sequence of letter indices over a fixed alphabet."""

    __slots__ = ("alphabet", "letters", "_text")

    def __init__(self, alphabet: Alphabet, letters: tuple[int, ...]):
        self.alphabet = alphabet
        self.letters = letters
        for x in letters:
            if not 0 <= x < alphabet.size:
                raise ValueError(f"letter index {x} out of range for {alphabet!r}")
        self._text: str | None = None

    @property
    def scan_text(self) -> str:
        """One code point per letter; internal rendering used for fast scanning."""
        if self._text is None:
            self._text = "".join(map(chr, self.letters))
        return self._text

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Word(self.alphabet, self.letters[item])
        return self.letters[item]

    def __add__(self, other: Word) -> Word:
        if self.alphabet != other.alphabet:
            raise ValueError("cannot concatenate words over different alphabets")
        return Word(self.alphabet, self.letters + other.letters)

    def __mul__(self, n: int) -> Word:
        return Word(self.alphabet, self.letters * n)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Word)
            and self.letters == other.letters
            and self.alphabet.symbols == other.alphabet.symbols
        )

    def __hash__(self) -> int:
        return hash((self.alphabet.symbols, self.letters))

    def startswith(self, other: Word) -> bool:
        return self.letters[: len(other)] == other.letters

    def symbols(self) -> tuple[str, ...]:
        return tuple(self.alphabet.symbols[x] for x in self.letters)

    def text(self) -> str:
        """Display string: concatenated when all symbols are single characters."""
        syms = self.symbols()
        if all(len(s) == 1 for s in self.alphabet.symbols):
            return "".join(syms)
        return " ".join(syms)

    def __repr__(self) -> str:
        return f"Word({self.text()!r})"


def empty_word(alphabet: Alphabet) -> Word:
    return Word(alphabet, ())


@dataclass(frozen=True)
class OccurrenceList:
    """Every start index of ``pattern`` inside ``host``, in increasing order."""

    pattern: Word
    host: Word
    positions: tuple[int, ...]

    @property
    def count(self) -> int:
        return len(self.positions)


def find_all(text: str, pattern: str) -> list[int]:
    """All (possibly overlapping) occurrence positions of ``pattern`` in ``text``."""
    out = []
    i = text.find(pattern)
    while i != -1:
        out.append(i)
        i = text.find(pattern, i + 1)
    return out


def occurrences(pattern: Word, host: Word) -> OccurrenceList:
    """List every occurrence of ``pattern`` in ``host``.

    Overlapping occurrences count; the scan is exhaustive.
    """
    if len(pattern) == 0:
        raise ValueError("occurrence pattern must be non-empty")
    if pattern.alphabet != host.alphabet:
        raise ValueError("pattern and host must share an alphabet")
    positions = tuple(find_all(host.scan_text, pattern.scan_text))
    return OccurrenceList(pattern, host, positions)


def factor_set(host: Word, n: int) -> set[Word]:
    """The distinct length-``n`` factors of ``host``."""
    if not 1 <= n <= len(host):
        raise ValueError(f"factor length {n} out of range 1..{len(host)}")
    seen = {host.letters[i : i + n] for i in range(len(host) - n + 1)}
    return {Word(host.alphabet, t) for t in seen}


def periodic_tail_witness(host: Word, min_repetitions: int = 3) -> tuple[int, int] | None:
    """Witness that the host looks like the prefix of an ultimately periodic word.

    Returns ``(preperiod, period)`` such that the tail from ``preperiod`` on is
    ``period``-periodic, the preperiod occupies at most a quarter of the host
    and the tail covers at least ``min_repetitions`` full periods; ``None`` if
    no period achieves that.  Unlike :func:`detect_period`, short accidental
    squares near the end of a repetitive word do not qualify, which makes this
    the right bounded check for "the fixed point is non-periodic" hypotheses.
    """
    n = len(host)
    text = host.scan_text
    best: tuple[int, int] | None = None
    for q in range(1, n // min_repetitions + 1):
        # minimal preperiod for period q, by binary search on the monotone
        # predicate "the tail from p is q-periodic"
        lo, hi = 0, n - q
        while lo < hi:
            mid = (lo + hi) // 2
            if text[mid : n - q] == text[mid + q : n]:
                hi = mid
            else:
                lo = mid + 1
        p = lo
        if p <= n // 4 and n - p >= min_repetitions * q:
            if best is None or (p, q) < best:
                best = (p, q)
    return best


def detect_period(host: Word, max_period: int) -> tuple[int, int] | None:
    """Search for an eventually periodic structure in a finite word.

    Returns the lexicographically least pair ``(preperiod, period)`` with
    ``period <= max_period`` such that ``host[i] == host[i + period]`` for all
    ``preperiod <= i < len(host) - period``, or ``None``.  A candidate must
    leave room for at least one full repetition (``preperiod + 2*period <=
    len(host)``); without that floor every pair is vacuously periodic near the
    end of the word.  Absence is evidence up to this prefix only, never a
    proof of non-periodicity.
    """
    n = len(host)
    if max_period > n // 2:
        raise ValueError(f"max_period {max_period} exceeds half the host length {n}")
    text = host.scan_text
    for pre in range(0, n):
        for per in range(1, max_period + 1):
            if pre + 2 * per > n:
                break
            if text[pre : n - per] == text[pre + per : n]:
                return (pre, per)
    return None
