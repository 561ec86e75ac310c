"""Morphisms, substitutions, incidence matrices and fixed-point prefixes.

A substitution here is a non-erasing morphism of an alphabet into itself with
a designated start letter whose image begins with that letter; iterating the
morphism on the start letter generates an arbitrarily long prefix of the
unique fixed point.
"""

from __future__ import annotations

import os
from typing import Iterable

from .errors import GenerationError, ParseError, ResourceLimitError
from .words import Alphabet, Word

DEFAULT_PREFIX_CAP = 10**7
PREFIX_CAP_ENV = "REPO_PREFIX_CAP"


def prefix_cap() -> int:
    """Global fixed-point buffer cap; override with the REPO_PREFIX_CAP env var."""
    raw = os.environ.get(PREFIX_CAP_ENV)
    if raw is None:
        return DEFAULT_PREFIX_CAP
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{PREFIX_CAP_ENV} must be an integer, got {raw!r}") from None
    if value <= 0:
        raise ValueError(f"{PREFIX_CAP_ENV} must be positive, got {value}")
    return value


class IncidenceMatrix:
    """Non-negative integer matrix counting target letters in morphism images.

    Entry ``(i, j)`` is the number of occurrences of target letter ``i`` in
    the image of source letter ``j``; composition of morphisms corresponds to
    the matrix product.
    """

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable[int]]):
        self.rows: tuple[tuple[int, ...], ...] = tuple(tuple(r) for r in rows)
        if self.rows:
            width = len(self.rows[0])
            if any(len(r) != width for r in self.rows):
                raise ValueError("ragged matrix")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def entry(self, i: int, j: int) -> int:
        return self.rows[i][j]

    def column_sums(self) -> tuple[int, ...]:
        return tuple(sum(r[j] for r in self.rows) for j in range(self.ncols))

    def all_positive(self) -> bool:
        return all(e > 0 for r in self.rows for e in r)

    @property
    def is_nonnegative(self) -> bool:
        return all(e >= 0 for r in self.rows for e in r)

    def __matmul__(self, other: IncidenceMatrix) -> IncidenceMatrix:
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.nrows}x{self.ncols} @ {other.nrows}x{other.ncols}")
        cols = list(zip(*other.rows)) if other.rows else []
        return IncidenceMatrix(
            tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in self.rows)
        )

    def __add__(self, other: IncidenceMatrix) -> IncidenceMatrix:
        return IncidenceMatrix(
            tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.rows, other.rows))
        )

    def __sub__(self, other: IncidenceMatrix) -> IncidenceMatrix:
        return IncidenceMatrix(
            tuple(tuple(a - b for a, b in zip(r1, r2)) for r1, r2 in zip(self.rows, other.rows))
        )

    def __pow__(self, n: int) -> IncidenceMatrix:
        if not self.is_square:
            raise ValueError("matrix power requires a square matrix")
        if n < 0:
            raise ValueError("matrix power exponent must be >= 0")
        result = identity_matrix(self.nrows)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, IncidenceMatrix) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"IncidenceMatrix({[list(r) for r in self.rows]})"


def identity_matrix(n: int) -> IncidenceMatrix:
    return IncidenceMatrix(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))


class Morphism:
    """A map from source letters to non-empty-or-empty target words, extended by concatenation."""

    __slots__ = ("source", "target", "images")

    def __init__(self, source: Alphabet, target: Alphabet, images: Iterable[Word]):
        self.source = source
        self.target = target
        self.images: tuple[Word, ...] = tuple(images)
        if len(self.images) != source.size:
            raise ValueError(f"need {source.size} images, got {len(self.images)}")
        for w in self.images:
            if w.alphabet != target:
                raise ValueError("image word over the wrong alphabet")

    def image(self, letter: int) -> Word:
        return self.images[letter]

    def __call__(self, word: Word) -> Word:
        if word.alphabet != self.source:
            raise ValueError("word is not over the source alphabet")
        out: list[int] = []
        for x in word.letters:
            out.extend(self.images[x].letters)
        return Word(self.target, tuple(out))

    @property
    def is_letter_to_letter(self) -> bool:
        return all(len(w) == 1 for w in self.images)

    @property
    def is_non_erasing(self) -> bool:
        return all(len(w) >= 1 for w in self.images)

    def matrix(self) -> IncidenceMatrix:
        return incidence_matrix(self)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Morphism)
            and self.source.symbols == other.source.symbols
            and self.target.symbols == other.target.symbols
            and tuple(w.letters for w in self.images) == tuple(w.letters for w in other.images)
        )

    def __hash__(self) -> int:
        return hash((self.source.symbols, self.target.symbols, tuple(w.letters for w in self.images)))

    def __repr__(self) -> str:
        body = ", ".join(
            f"{self.source.symbol(i)}->{w.text()}" for i, w in enumerate(self.images)
        )
        return f"Morphism({body})"


def identity_morphism(alphabet: Alphabet) -> Morphism:
    return Morphism(alphabet, alphabet, tuple(Word(alphabet, (i,)) for i in range(alphabet.size)))


def compose(f: Morphism, g: Morphism) -> Morphism:
    """The morphism sending each letter a to f(g(a)); matrices multiply accordingly."""
    if g.target != f.source:
        raise ValueError("composition alphabet mismatch: target of g must be source of f")
    return Morphism(g.source, f.target, tuple(f(g.image(b)) for b in range(g.source.size)))


def incidence_matrix(m: Morphism) -> IncidenceMatrix:
    """Entry (i, j) counts target letter i in the image of source letter j."""
    rows = [[0] * m.source.size for _ in range(m.target.size)]
    for j in range(m.source.size):
        for x in m.image(j).letters:
            rows[x][j] += 1
    return IncidenceMatrix(rows)


def is_primitive(matrix: IncidenceMatrix) -> tuple[bool, int | None]:
    """Decide primitivity of a non-negative square matrix.

    Returns ``(True, k)`` with the least exponent k for which the k-th power
    is entrywise positive, or ``(False, None)``.  The search is capped at the
    sharp bound n^2 - 2n + 2, beyond which no new positivity can appear, so
    the decision is exact.  Powers are taken over the boolean (reachability)
    semiring to avoid big-integer growth.
    """
    if not matrix.is_square:
        raise ValueError("primitivity is defined for square matrices only")
    if not matrix.is_nonnegative:
        raise ValueError("primitivity is defined for non-negative matrices only")
    n = matrix.nrows
    if n == 0:
        raise ValueError("empty matrix")
    bound = n * n - 2 * n + 2
    base = tuple(tuple(e > 0 for e in row) for row in matrix.rows)
    current = base
    for k in range(1, bound + 1):
        if all(all(row) for row in current):
            return True, k
        cols = tuple(zip(*base))
        current = tuple(
            tuple(any(a and b for a, b in zip(row, col)) for col in cols) for row in current
        )
    return False, None


class Substitution:
    """A self-morphism with non-empty images and a start letter fixing its first letter."""

    __slots__ = ("morphism", "start", "_fixed_point")

    def __init__(self, morphism: Morphism, start: int):
        if morphism.source != morphism.target:
            raise ValueError("a substitution must map an alphabet into itself")
        if not morphism.is_non_erasing:
            raise ValueError("substitution images must be non-empty")
        if not 0 <= start < morphism.source.size:
            raise ValueError("start letter out of range")
        if morphism.image(start).letters[0] != start:
            raise ValueError(
                f"image of start letter {morphism.source.symbol(start)!r} must begin with it"
            )
        self.morphism = morphism
        self.start = start
        self._fixed_point: FixedPointPrefix | None = None

    @property
    def alphabet(self) -> Alphabet:
        return self.morphism.source

    @property
    def images(self) -> tuple[Word, ...]:
        return self.morphism.images

    def image(self, letter: int) -> Word:
        return self.morphism.image(letter)

    def __call__(self, word: Word) -> Word:
        return self.morphism(word)

    def matrix(self) -> IncidenceMatrix:
        return incidence_matrix(self.morphism)

    def is_primitive(self) -> bool:
        return is_primitive(self.matrix())[0]

    def fixed_point(self) -> FixedPointPrefix:
        """The shared extend-on-demand prefix generator for this substitution."""
        if self._fixed_point is None:
            self._fixed_point = FixedPointPrefix(self)
        return self._fixed_point

    def max_image_length(self) -> int:
        return max(len(w) for w in self.images)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Substitution)
            and self.start == other.start
            and self.morphism == other.morphism
        )

    def __hash__(self) -> int:
        return hash((self.morphism, self.start))

    def __repr__(self) -> str:
        return f"Substitution({self.morphism!r}, start={self.alphabet.symbol(self.start)!r})"


def substitution_from_strings(symbols: str | Iterable[str], images: dict[str, str], start: str) -> Substitution:
    """Convenience builder: symbols plus per-symbol image strings."""
    alphabet = Alphabet(symbols.split() if isinstance(symbols, str) else symbols)
    image_words = tuple(alphabet.word(images[s]) for s in alphabet.symbols)
    return Substitution(Morphism(alphabet, alphabet, image_words), alphabet.index(start))


def power(s: Substitution, n: int) -> Substitution:
    """The substitution whose images are the n-fold iterates; same start letter."""
    if n < 1:
        raise ValueError("power exponent must be >= 1")
    m = s.morphism
    for _ in range(n - 1):
        m = compose(s.morphism, m)
    return Substitution(m, s.start)


class FixedPointPrefix:
    """Lazily extendable prefix of the fixed point of a substitution.

    The buffer always equals a prefix of its own image, so extending never
    rewrites earlier letters: the next unexpanded letter's image is appended
    until the requested length is reached.  Generation requires the start
    image to have length at least two; shorter start images cannot grow.
    Writes must be externally synchronized; reads of generated letters are safe.
    """

    __slots__ = ("substitution", "_letters", "_next", "_cap", "_text", "generations")

    def __init__(self, substitution: Substitution, cap: int | None = None):
        self.substitution = substitution
        start_image = substitution.image(substitution.start)
        if len(start_image) < 2:
            raise GenerationError(
                "fixed-point generation needs the start image to have length >= 2"
            )
        self._letters: list[int] = list(start_image.letters)
        self._next = 1
        self._cap = prefix_cap() if cap is None else cap
        self._text = ""
        self.generations = 0

    def __len__(self) -> int:
        return len(self._letters)

    @property
    def cap(self) -> int:
        return self._cap

    def ensure(self, n: int) -> None:
        if n > self._cap:
            raise ResourceLimitError(
                f"requested prefix length {n} exceeds the buffer cap {self._cap}",
                budget=self._cap,
            )
        letters = self._letters
        images = [w.letters for w in self.substitution.images]
        while len(letters) < n:
            letters.extend(images[letters[self._next]])
            self._next += 1
            self.generations += 1

    def prefix(self, n: int) -> Word:
        self.ensure(n)
        return Word(self.substitution.alphabet, tuple(self._letters[:n]))

    def text(self, n: int) -> str:
        """Scan rendering of the first n letters (one code point per letter)."""
        self.ensure(n)
        if len(self._text) < n:
            self._text = "".join(map(chr, self._letters))
        return self._text[:n]

    def letter(self, i: int) -> int:
        self.ensure(i + 1)
        return self._letters[i]


def fixed_point_prefix(s: Substitution, n: int) -> Word:
    """First n letters of the fixed point of s (cached per substitution)."""
    if n < 1:
        raise ValueError("prefix length must be >= 1")
    return s.fixed_point().prefix(n)


def morphic_image_prefix(m: Morphism, s: Substitution, n: int) -> Word:
    """First n letters of the image of the fixed point under a letter-to-letter morphism."""
    if not m.is_letter_to_letter:
        raise ValueError("coding must be letter-to-letter")
    if m.source != s.alphabet:
        raise ValueError("coding source must be the substitution's alphabet")
    table = tuple(m.image(b).letters[0] for b in range(m.source.size))
    prefix = fixed_point_prefix(s, n)
    return Word(m.target, tuple(table[x] for x in prefix.letters))


def format_substitution(sub: Substitution, codings: dict[str, Morphism] | None = None) -> str:
    """Normalized text rendering; parsing it back reproduces the same values."""
    lines = [
        f"alphabet = {' '.join(sub.alphabet.symbols)}",
        f"start = {sub.alphabet.symbol(sub.start)}",
    ]
    for b, symbol in enumerate(sub.alphabet.symbols):
        lines.append(f"{symbol} -> {' '.join(sub.image(b).symbols())}")
    for name, coding in (codings or {}).items():
        pairs = ", ".join(
            f"{sub.alphabet.symbol(b)} -> {coding.target.symbol(coding.image(b).letters[0])}"
            for b in range(sub.alphabet.size)
        )
        lines.append(f"coding {name}: {pairs}")
    return "\n".join(lines) + "\n"


def parse_substitution(text: str) -> tuple[Substitution, dict[str, Morphism]]:
    """Parse the substitution text format.

    ::

        # comment lines start with '#'
        alphabet = a b
        start = a
        a -> a b a b
        b -> a b b b
        coding phi: a -> a, b -> b

    Returns the substitution and a dict of named letter-to-letter codings.
    """
    alphabet: Alphabet | None = None
    start_symbol: str | None = None
    image_lines: dict[str, tuple[list[str], int]] = {}
    coding_lines: list[tuple[str, str, int]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("alphabet"):
            _, _, rhs = line.partition("=")
            if not rhs.strip():
                raise ParseError("empty alphabet", lineno)
            try:
                alphabet = Alphabet(rhs.split())
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
        elif line.startswith("start"):
            _, _, rhs = line.partition("=")
            start_symbol = rhs.strip()
            if not start_symbol:
                raise ParseError("empty start letter", lineno)
        elif line.startswith("coding "):
            head, sep, body = line[len("coding "):].partition(":")
            if not sep:
                raise ParseError("coding line needs a ':'", lineno)
            coding_lines.append((head.strip(), body, lineno))
        elif "->" in line:
            lhs, _, rhs = line.partition("->")
            letter = lhs.strip()
            parts = rhs.split()
            if not letter:
                raise ParseError("image line without a source letter", lineno)
            if not parts:
                raise ParseError(f"empty image for letter {letter!r}", lineno)
            image_lines[letter] = (parts, lineno)
        else:
            raise ParseError(f"unrecognized line: {raw.strip()!r}", lineno)

    if alphabet is None:
        raise ParseError("missing 'alphabet =' line")
    if start_symbol is None:
        raise ParseError("missing 'start =' line")
    if start_symbol not in alphabet.symbols:
        raise ParseError(f"start letter {start_symbol!r} not in the alphabet")

    images = []
    for s in alphabet.symbols:
        if s not in image_lines:
            raise ParseError(f"missing image for letter {s!r}")
        parts, lineno = image_lines[s]
        try:
            images.append(alphabet.word(parts))
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
    for s in image_lines:
        if s not in alphabet.symbols:
            raise ParseError(f"image given for unknown letter {s!r}", image_lines[s][1])

    try:
        substitution = Substitution(
            Morphism(alphabet, alphabet, tuple(images)), alphabet.index(start_symbol)
        )
    except ValueError as exc:
        raise ParseError(str(exc), image_lines[start_symbol][1]) from None

    codings: dict[str, Morphism] = {}
    for name, body, lineno in coding_lines:
        mapping: dict[str, str] = {}
        for piece in body.split(","):
            piece = piece.strip()
            if not piece:
                continue
            src, sep, dst = piece.partition("->")
            if not sep or not src.strip() or not dst.strip():
                raise ParseError(f"bad coding entry {piece!r}", lineno)
            if len(dst.split()) != 1:
                raise ParseError(f"coding images must be single letters: {piece!r}", lineno)
            mapping[src.strip()] = dst.strip()
        missing = [s for s in alphabet.symbols if s not in mapping]
        if missing:
            raise ParseError(f"coding {name!r} misses letters {missing}", lineno)
        target_syms: list[str] = []
        for s in alphabet.symbols:
            if mapping[s] not in target_syms:
                target_syms.append(mapping[s])
        target = Alphabet(target_syms)
        codings[name] = Morphism(
            alphabet, target, tuple(target.word([mapping[s]]) for s in alphabet.symbols)
        )
    return substitution, codings
