"""Interpretations of factors, synchronization-delay search, injectivity checks.

An interpretation of a factor x cuts it as (left, core, right) where the
image of the core sits exactly inside x, the left piece is a suffix of some
letter image and the right piece a prefix of some letter image.  Two
interpretations synchronize at a cut when they place an image boundary at the
same position with the same core letter beneath it.  The synchronization
delay of a substitution is the margin beyond which every pair of
interpretations of every factor synchronizes; here it is searched over a
factor sample, never derived, so results are certificates on the sample and
lower-bound reports, not proofs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .returns import nonperiodic_check, return_substitution
from .substitution import Substitution, fixed_point_prefix, is_primitive
from .words import Word


@dataclass(frozen=True)
class Interpretation:
    """x = left · tau(core) · right, with left/right trimmed from letter images."""

    left: Word
    core: Word
    right: Word

    def reconstruct(self, tau: Substitution) -> Word:
        return self.left + tau(self.core) + self.right

    def cuts(self, tau: Substitution) -> tuple[tuple[int, int], ...]:
        """(position of the image boundary, core letter) for every core letter."""
        out = []
        pos = len(self.left)
        for letter in self.core.letters:
            out.append((pos, letter))
            pos += len(tau.image(letter))
        return tuple(out)


class _InterpretationContext:
    """Shared factor pools for enumerating interpretations over one substitution."""

    def __init__(self, tau: Substitution, prefix_len: int, max_factor: int):
        self.tau = tau
        host = fixed_point_prefix(tau, prefix_len)
        self.host = host
        letters = host.letters
        self.factors: set[tuple[int, ...]] = {()}
        for length in range(1, max_factor + 1):
            for i in range(len(letters) - length + 1):
                self.factors.add(letters[i : i + length])
        self.suffixes: set[tuple[int, ...]] = set()
        self.prefixes: set[tuple[int, ...]] = set()
        for w in tau.images:
            for i in range(len(w) + 1):
                self.suffixes.add(w.letters[i:])
                self.prefixes.add(w.letters[:i])

    def interpretations(self, x: Word) -> list[Interpretation]:
        alphabet = self.tau.alphabet
        images = [w.letters for w in self.tau.images]
        found: set[tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]] = set()

        def extend(left: tuple[int, ...], pos: int, core: list[int]) -> None:
            rest = x.letters[pos:]
            if rest in self.prefixes:
                found.add((left, tuple(core), rest))
            for c in range(alphabet.size):
                im = images[c]
                if len(im) <= len(rest) and rest[: len(im)] == im:
                    core.append(c)
                    if tuple(core) in self.factors:
                        extend(left, pos + len(im), core)
                    core.pop()

        for left in self.suffixes:
            if x.letters[: len(left)] == left:
                extend(left, len(left), [])
        out = [
            Interpretation(
                Word(alphabet, l), Word(alphabet, c), Word(alphabet, r)
            )
            for l, c, r in sorted(found)
        ]
        return out


def interpretations(tau: Substitution, x: Word, search_prefix_len: int = 4000) -> list[Interpretation]:
    """All cuts of x as left · tau(core) · right with the core a factor of the
    fixed point observed in the generated prefix."""
    if len(x) == 0:
        raise ValueError("factor must be non-empty")
    ctx = _InterpretationContext(tau, search_prefix_len, len(x))
    if x.letters not in ctx.factors:
        raise ValueError("x does not occur in the generated prefix")
    return ctx.interpretations(x)


def sync_delay_search(
    tau: Substitution,
    d_max: int = 64,
    sample_len: int = 10,
    prefix_len: int | None = None,
) -> int | None:
    """Least delay D making every sampled interpretation pair synchronize.

    For every distinct factor up to ``sample_len`` (collected from a prefix of
    at least 50 times that length) and every ordered pair of its
    interpretations, a cut (position, letter) of one missing from the other
    forces D to at least the smaller of the two margins around the cut.  The
    returned D is exactly the largest such forcing, or None when it exceeds
    ``d_max``; boundary cuts (first and last) participate like any other.
    Absence is a lower-bound report on the sample, not a refutation of
    circularity.
    """
    primitive, _ = is_primitive(tau.matrix())
    if not primitive:
        raise ValueError("delay search expects a primitive substitution")
    if prefix_len is None:
        prefix_len = max(50 * sample_len, 2000)
    ctx = _InterpretationContext(tau, prefix_len, sample_len)
    required = 0
    for letters in sorted(ctx.factors):
        if not letters:
            continue
        x = Word(tau.alphabet, letters)
        interps = ctx.interpretations(x)
        cut_sets = [set(i.cuts(tau)) for i in interps]
        for a in range(len(interps)):
            for b in range(len(interps)):
                if a == b:
                    continue
                for pos, letter in cut_sets[a]:
                    if (pos, letter) in cut_sets[b]:
                        continue
                    margin_left = pos
                    margin_right = len(x) - pos - len(tau.image(letter))
                    required = max(required, min(margin_left, margin_right))
                    if required > d_max:
                        return None
    return required if required <= d_max else None


@dataclass(frozen=True)
class InjectivityCertificate:
    """Outcome of pairwise-distinctness of images over decodable factors.

    ``passed`` means no two distinct words of length at most ``length_bound``
    that both occur in the fixed point and decompose over the return words on
    ``prefix`` share their image.  The certificate is monotone: passing at L
    implies passing at any shorter bound.
    """

    prefix: Word
    length_bound: int
    words_checked: int
    passed: bool
    collision: tuple[Word, Word] | None


def _derived_factors(sub: Substitution, max_len: int, sample_len: int) -> set[tuple[int, ...]]:
    host = fixed_point_prefix(sub, sample_len)
    letters = host.letters
    out: set[tuple[int, ...]] = set()
    for length in range(1, max_len + 1):
        for i in range(len(letters) - length + 1):
            out.add(letters[i : i + length])
    return out


def check_injectivity(
    tau: Substitution, u: Word, length_bound: int = 30, derived_sample: int = 2000
) -> InjectivityCertificate:
    """Check the substitution is one-to-one on decodable factors up to a length.

    The words that both occur in the fixed point and split over the return
    words on u are exactly the decodings of factors of the derived sequence,
    so those are enumerated directly and their images compared pairwise
    (hashed, with exact confirmation on collision).
    """
    nonperiodic_check(tau)
    system, tau_u = return_substitution(tau, u)
    coding = system.coding()
    shortest = min(len(w) for w in system.return_words)
    by_image: dict[tuple[int, ...], Word] = {}
    checked = 0
    max_derived = max(0, length_bound // max(1, shortest))
    for letters in sorted(_derived_factors(tau_u, max_derived, derived_sample)) if max_derived else []:
        word = coding(Word(system.return_alphabet, letters))
        if len(word) > length_bound:
            continue
        checked += 1
        image = tau(word)
        other = by_image.get(image.letters)
        if other is not None and other.letters != word.letters:
            return InjectivityCertificate(u, length_bound, checked, False, (other, word))
        by_image[image.letters] = word
    return InjectivityCertificate(u, length_bound, checked, True, None)


def _injective_on_own_factors(sub: Substitution, max_len: int, sample_len: int) -> bool:
    """Pairwise-distinct images over the factors of the substitution's own fixed point."""
    by_image: dict[tuple[int, ...], tuple[int, ...]] = {}
    for letters in sorted(_derived_factors(sub, max_len, sample_len)):
        image = sub(Word(sub.alphabet, letters))
        other = by_image.get(image.letters)
        if other is not None and other != letters:
            return False
        by_image[image.letters] = letters
    return True


def find_n0(
    tau: Substitution,
    length_bound: int = 30,
    max_prefix: int = 200,
    derived_sample: int = 1000,
) -> int | None:
    """Least prefix length whose injectivity certificate passes, together with
    injectivity of the return substitution on its own factors.

    None when no prefix length up to ``max_prefix`` passes; existence beyond
    the scan is not decided here.
    """
    nonperiodic_check(tau)
    for n in range(1, max_prefix + 1):
        u = fixed_point_prefix(tau, n)
        cert = check_injectivity(tau, u, length_bound, derived_sample)
        if not cert.passed:
            continue
        _, tau_u = return_substitution(tau, u)
        if _injective_on_own_factors(tau_u, length_bound, derived_sample):
            return n
    return None
