"""Return words, derived sequences, return substitutions and derivation towers.

A return word on a non-empty prefix u of the fixed point X is the factor
between two successive occurrences of u.  Return words are enumerated by
first appearance in the decomposition of X, which fixes a coding morphism
from return letters onto return words; the return substitution is the unique
substitution on return letters intertwining that coding with the original
substitution.

The complete construction never guesses: images of return letters are found
by decomposing the image of each known return word, and every chunk cut
between successive occurrences of u inside such an image is itself a genuine
return word, so the closure terminates exactly on the full return alphabet.
Only the initial search for a second occurrence of u consumes fixed-point
buffer, under the configured cap.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DecompositionError, InternalInconsistencyError, ResourceLimitError
from .substitution import (
    FixedPointPrefix,
    Morphism,
    Substitution,
    fixed_point_prefix,
    is_primitive,
)
from .words import Alphabet, Word, find_all, periodic_tail_witness

MAX_RETURN_WORDS = 100_000
NONPERIODIC_CHECK_LEN = 2048

_nonperiodic_memo: dict[tuple[Substitution, int], int] = {}


def nonperiodic_check(tau: Substitution, check_len: int = NONPERIODIC_CHECK_LEN) -> int:
    """Bounded evidence that the fixed point is non-periodic.

    Looks for a dominating periodic tail in the prefix of the given length
    and, if one shows up, re-tests it at twice the length: a genuine
    ultimately periodic fixed point keeps its (preperiod, period) forever,
    while accidental long repetitions in a non-periodic word cannot survive
    the extension.  Returns the prefix length actually checked; raises
    ValueError with the witness when the fixed point looks periodic.  Absence
    of a witness is evidence up to the returned length, not a proof.
    """
    key = (tau, check_len)
    cached = _nonperiodic_memo.get(key)
    if cached is not None:
        return cached
    host = fixed_point_prefix(tau, check_len)
    witness = periodic_tail_witness(host)
    checked = check_len
    if witness is not None:
        p, q = witness
        checked = 2 * check_len
        text = fixed_point_prefix(tau, checked).scan_text
        if text[p : checked - q] == text[p + q : checked]:
            raise ValueError(
                f"fixed point looks ultimately periodic: preperiod {p}, period {q}, "
                f"verified to length {checked}"
            )
    _nonperiodic_memo[key] = checked
    return checked


def _return_alphabet(count: int) -> Alphabet:
    return Alphabet(tuple(str(i + 1) for i in range(count)))


@dataclass(frozen=True)
class ReturnSystem:
    """Ordered return words on a prefix, with the coding onto them.

    Return letters are displayed 1-based (symbols "1", "2", ...) and stored
    0-based.  ``complete`` distinguishes closure-computed systems from
    observational scans of a finite host, which may miss late return words.
    """

    prefix: Word
    return_words: tuple[Word, ...]
    return_alphabet: Alphabet
    complete: bool

    @property
    def count(self) -> int:
        return len(self.return_words)

    def coding(self) -> Morphism:
        """The morphism sending return letter b to its return word."""
        return Morphism(self.return_alphabet, self.prefix.alphabet, self.return_words)

    def word_for(self, letter: int) -> Word:
        return self.return_words[letter]

    def letter_for(self, word: Word) -> int | None:
        for i, w in enumerate(self.return_words):
            if w.letters == word.letters:
                return i
        return None


def _chunk_positions(w: Word, u: Word) -> list[int]:
    """Occurrence positions of u in w·u; the cuts of the return decomposition."""
    return find_all(w.scan_text + u.scan_text, u.scan_text)


def decompose(system: ReturnSystem, w: Word) -> Word:
    """The unique preimage of w under the coding.

    w must be a concatenation of return words; the cut positions are exactly
    the occurrences of the prefix u inside w·u, so a single scan recovers the
    factorization without backtracking.  Raises DecompositionError carrying
    the first failing position otherwise.
    """
    if w.alphabet != system.prefix.alphabet:
        raise DecompositionError("word is over the wrong alphabet", position=0)
    if len(w) == 0:
        return Word(system.return_alphabet, ())
    index = {rw.letters: i for i, rw in enumerate(system.return_words)}
    cuts = _chunk_positions(w, system.prefix)
    if not cuts or cuts[0] != 0:
        raise DecompositionError(
            "word does not start at an occurrence of the prefix", position=0
        )
    out = []
    for a, b in zip(cuts, cuts[1:]):
        if a >= len(w):
            break
        letter = index.get(w.letters[a:b])
        if letter is None:
            raise DecompositionError(
                f"chunk at position {a} is not a known return word", position=a
            )
        out.append(letter)
    if cuts[-1] != len(w):
        raise DecompositionError(
            "word does not end at an occurrence boundary", position=cuts[-1]
        )
    return Word(system.return_alphabet, tuple(out))


def return_words_of_prefix(host: Word, u: Word) -> ReturnSystem:
    """Return words observed between successive occurrences of u in a finite host.

    Observational: words are listed in first-appearance order but nothing
    guarantees the host was long enough to exhibit all of them.
    """
    if len(u) == 0:
        raise ValueError("prefix must be non-empty")
    if not host.startswith(u):
        raise ValueError("u must be a prefix of the host")
    positions = find_all(host.scan_text, u.scan_text)
    seen: dict[tuple[int, ...], int] = {}
    words: list[Word] = []
    for a, b in zip(positions, positions[1:]):
        chunk = host.letters[a:b]
        if chunk not in seen:
            seen[chunk] = len(words)
            words.append(Word(host.alphabet, chunk))
    return ReturnSystem(
        prefix=u,
        return_words=tuple(words),
        return_alphabet=_return_alphabet(len(words)),
        complete=False,
    )


def _first_return_word(tau: Substitution, u: Word, cap: int | None) -> Word:
    """The return word at position 0 of the fixed point, growing the buffer as needed."""
    fp = FixedPointPrefix(tau, cap=cap) if cap is not None else tau.fixed_point()
    if fp.cap <= len(u):
        raise ResourceLimitError(
            f"prefix of length {len(u)} cannot recur within the buffer cap {fp.cap}",
            budget=fp.cap,
        )
    length = min(max(4 * len(u), 64), fp.cap)
    while True:
        text = fp.text(length)
        if not text.startswith(u.scan_text):
            raise ValueError("u is not a prefix of the fixed point")
        hits = find_all(text, u.scan_text)
        if len(hits) >= 2:
            return fp.prefix(hits[1])
        if length == fp.cap:
            raise ResourceLimitError(
                f"no second occurrence of the prefix within the buffer cap {fp.cap}",
                budget=fp.cap,
            )
        length = min(length * 2, fp.cap)


def return_substitution(
    tau: Substitution, u: Word, cap: int | None = None
) -> tuple[ReturnSystem, Substitution]:
    """The complete return system on u and the return substitution.

    Closure: seed with the return word at position 0, then decompose the
    image of each known return word; new chunks are new return words,
    numbered in discovery order.  Processing pending letters in index order
    makes discovery order coincide with first appearance in the derived
    sequence, so the numbering is canonical.
    """
    primitive, _ = is_primitive(tau.matrix())
    if not primitive:
        raise ValueError("return substitutions are defined for primitive substitutions")
    if len(u) == 0:
        raise ValueError("prefix must be non-empty")
    if u.alphabet != tau.alphabet:
        raise ValueError("prefix is over the wrong alphabet")

    first = _first_return_word(tau, u, cap)
    words: list[Word] = [first]
    index: dict[tuple[int, ...], int] = {first.letters: 0}
    images: list[tuple[int, ...]] = []
    while len(images) < len(words):
        b = len(images)
        w = tau(words[b])
        cuts = _chunk_positions(w, u)
        if not cuts or cuts[0] != 0 or cuts[-1] != len(w):
            raise InternalInconsistencyError(
                "image of a return word is not aligned on occurrences of u"
            )
        img = []
        for a, c in zip(cuts, cuts[1:]):
            chunk = w.letters[a:c]
            letter = index.get(chunk)
            if letter is None:
                letter = len(words)
                index[chunk] = letter
                words.append(Word(tau.alphabet, chunk))
                if len(words) > MAX_RETURN_WORDS:
                    raise ResourceLimitError(
                        f"return-word closure exceeded {MAX_RETURN_WORDS} letters",
                        budget=MAX_RETURN_WORDS,
                    )
            img.append(letter)
        images.append(tuple(img))

    alphabet = _return_alphabet(len(words))
    system = ReturnSystem(
        prefix=u,
        return_words=tuple(words),
        return_alphabet=alphabet,
        complete=True,
    )
    image_words = tuple(Word(alphabet, img) for img in images)
    sub = Substitution(Morphism(alphabet, alphabet, image_words), 0)
    return system, sub


@dataclass(frozen=True)
class DerivedPrefix:
    """A prefix of the derived sequence, with the system that decodes it."""

    system: ReturnSystem
    substitution: Substitution
    letters: Word

    def decoded(self) -> Word:
        """The prefix of the original fixed point this derived prefix encodes."""
        return self.system.coding()(self.letters)


def derived_prefix(tau: Substitution, u: Word, n: int) -> DerivedPrefix:
    """First n letters of the derived sequence of the fixed point on u.

    The derived sequence is generated as the fixed point of the return
    substitution; decoding through the return words reproduces a prefix of
    the original fixed point.
    """
    system, sub = return_substitution(tau, u)
    return DerivedPrefix(system, sub, fixed_point_prefix(sub, n))


def derived_prefix_by_scan(tau: Substitution, u: Word, n: int) -> Word:
    """Derived prefix read directly off the fixed point, as an independent route."""
    system, _ = return_substitution(tau, u)
    fp = tau.fixed_point()
    index = {rw.letters: i for i, rw in enumerate(system.return_words)}
    longest = max(len(rw) for rw in system.return_words)
    need = (n + 1) * longest + len(u)
    while True:
        hits = find_all(fp.text(need), u.scan_text)
        if len(hits) >= n + 1:
            break
        need *= 2
    out = []
    prefix_word = fp.prefix(need)
    for a, b in zip(hits, hits[1:]):
        letter = index.get(prefix_word.letters[a:b])
        if letter is None:
            raise InternalInconsistencyError("scan met an unknown return word")
        out.append(letter)
        if len(out) == n:
            break
    return Word(system.return_alphabet, tuple(out))


@dataclass(frozen=True)
class NestedCheck:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class NestedDerivationReport:
    prefix_u: Word
    derived_prefix_v: Word
    composed_prefix_w: Word | None
    checks: tuple[NestedCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def nested_derivation(
    tau: Substitution, u: Word, v: Word, check_len: int = 10_000
) -> NestedDerivationReport:
    """Verify that deriving on v after deriving on u equals deriving once on w.

    w is the decoding of v followed by u.  Three identities are checked:
    w is a prefix of the fixed point, the composition of the two codings
    equals the coding on w letterwise, and the twice-derived sequence equals
    the sequence derived on w over a prefix of the given length.
    Precondition failures come back as failed checks, not exceptions.
    """
    checks: list[NestedCheck] = []
    sys_u, tau_u = return_substitution(tau, u)
    if len(v) == 0 or v.alphabet != sys_u.return_alphabet:
        checks.append(
            NestedCheck("v-nonempty-prefix", False, "v must be a non-empty word over the return letters")
        )
        return NestedDerivationReport(u, v, None, tuple(checks))
    derived = fixed_point_prefix(tau_u, len(v))
    if derived.letters != v.letters:
        checks.append(
            NestedCheck("v-nonempty-prefix", False, "v is not a prefix of the derived sequence")
        )
        return NestedDerivationReport(u, v, None, tuple(checks))
    checks.append(NestedCheck("v-nonempty-prefix", True))

    w = sys_u.coding()(v) + u
    x_prefix = fixed_point_prefix(tau, len(w))
    checks.append(
        NestedCheck("w-prefix-of-fixed-point", x_prefix.letters == w.letters, f"w = {w.text()}")
    )

    sys_w, tau_w = return_substitution(tau, w)
    sys_v, tau_uv = return_substitution(tau_u, v)
    same_count = sys_w.count == sys_v.count
    composed_ok = same_count and all(
        sys_u.coding()(sys_v.word_for(b)).letters == sys_w.word_for(b).letters
        for b in range(sys_w.count)
    )
    checks.append(
        NestedCheck(
            "coding-composition",
            composed_ok,
            f"{sys_v.count} nested return words vs {sys_w.count} direct",
        )
    )

    du = fixed_point_prefix(tau_uv, check_len).letters
    dw = fixed_point_prefix(tau_w, check_len).letters
    checks.append(NestedCheck("derived-sequences-agree", du == dw, f"prefix length {check_len}"))
    return NestedDerivationReport(u, v, w, tuple(checks))


@dataclass(frozen=True)
class TowerLevel:
    depth: int
    prefix: Word
    system: ReturnSystem
    substitution: Substitution


@dataclass(frozen=True)
class TowerResult:
    levels: tuple[TowerLevel, ...]
    repetition: tuple[int, int] | None
    depth_requested: int


def derivation_tower(tau: Substitution, depth: int) -> TowerResult:
    """Iterate prefix extension u -> (first return word on u)·u, tracking repeats.

    Levels stop early at the first pair (p, q), p < q, whose return
    substitutions are identical under the canonical numbering; the set of
    return substitutions is finite, so a repeat must exist at some depth.
    """
    if depth < 1:
        raise ValueError("tower depth must be >= 1")
    nonperiodic_check(tau)
    u = fixed_point_prefix(tau, 1)
    levels: list[TowerLevel] = []
    seen: dict[object, int] = {}
    repetition = None
    for k in range(1, depth + 1):
        system, sub = return_substitution(tau, u)
        levels.append(TowerLevel(k, u, system, sub))
        key = (sub.start, tuple(w.letters for w in sub.images))
        if key in seen:
            repetition = (seen[key], k)
            break
        seen[key] = k
        u = system.return_words[0] + u
    return TowerResult(tuple(levels), repetition, depth)


@dataclass(frozen=True)
class ReturnConstants:
    """Empirical length and cardinality bounds over sampled prefixes.

    Over every sampled prefix u and every return word v on u:
    h1 * |u| <= |v| <= h2 * |u|, and the number of return words is at most
    h3.  These are observations on the sample, not certified global bounds.
    """

    h1: Fraction
    h2: Fraction
    h3: int
    prefix_lengths: tuple[int, ...]
    nonperiodic_checked_to: int


def estimate_constants(tau: Substitution, prefix_lengths: list[int]) -> ReturnConstants:
    if not prefix_lengths:
        raise ValueError("need at least one prefix length to sample")
    primitive, _ = is_primitive(tau.matrix())
    if not primitive:
        raise ValueError("constants are estimated for primitive substitutions")
    check_len = nonperiodic_check(tau, max(NONPERIODIC_CHECK_LEN, 4 * max(prefix_lengths)))
    h1: Fraction | None = None
    h2: Fraction | None = None
    h3 = 0
    for n in sorted(set(prefix_lengths)):
        u = fixed_point_prefix(tau, n)
        system, _ = return_substitution(tau, u)
        for v in system.return_words:
            ratio = Fraction(len(v), n)
            h1 = ratio if h1 is None else min(h1, ratio)
            h2 = ratio if h2 is None else max(h2, ratio)
        h3 = max(h3, system.count)
    assert h1 is not None and h2 is not None
    return ReturnConstants(
        h1=h1,
        h2=h2,
        h3=h3,
        prefix_lengths=tuple(sorted(set(prefix_lengths))),
        nonperiodic_checked_to=check_len,
    )


def min_return_length(tau: Substitution, n: int) -> int:
    """Length of the shortest return word on the prefix of length n."""
    if n < 1:
        raise ValueError("prefix length must be >= 1")
    system, _ = return_substitution(tau, fixed_point_prefix(tau, n))
    return min(len(v) for v in system.return_words)
