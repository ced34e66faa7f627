"""Reduced words in a free group and automorphisms given by generator data.

Words are tuples of (generator, +1/-1) letters kept freely reduced.
Automorphisms are only ever built from generator sequences (transvections,
inversions, partial conjugations, inner automorphisms) or from explicit
image maps with a supplied inverse; invertibility is certified by free
reduction rather than decided algorithmically.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from coverrep.errors import UnknownVertex
from coverrep.graphs import Preorder, SimpleGraph, divides_trivially, domination_poset

Letter = tuple[str, int]
Word = tuple[Letter, ...]

EMPTY: Word = ()


def reduce_word(letters: Iterable[Letter]) -> Word:
    """Freely reduce: cancel adjacent x^e x^-e pairs."""
    stack: list[Letter] = []
    for gen, exp in letters:
        if exp not in (1, -1):
            raise ValueError(f"letter exponent must be +-1, got {exp}")
        if stack and stack[-1][0] == gen and stack[-1][1] == -exp:
            stack.pop()
        else:
            stack.append((gen, exp))
    return tuple(stack)


def word(*letters: Letter) -> Word:
    return reduce_word(letters)


def gen_word(g: str, exp: int = 1) -> Word:
    """The word g^exp for any integer exp."""
    if exp >= 0:
        return ((g, 1),) * exp
    return ((g, -1),) * (-exp)


def concat(*words: Word) -> Word:
    out: list[Letter] = []
    for w in words:
        out.extend(w)
    return reduce_word(out)


def invert_word(w: Word) -> Word:
    return tuple((g, -e) for g, e in reversed(w))


def word_support(w: Word) -> frozenset[str]:
    return frozenset(g for g, _ in w)


def format_word(w: Word) -> str:
    """Render space-separated letters; inverses get a ^-1 suffix."""
    if not w:
        return ""
    return " ".join(g if e == 1 else f"{g}^-1" for g, e in w)


def parse_word(text: str, alphabet: Iterable[str]) -> Word:
    """Parse a word.

    Tokens separated by whitespace.  ``x^-1`` is the inverse of ``x``; a
    single uppercase letter is the inverse of its lowercase generator
    (classic one-letter convention).
    """
    alphabet = set(alphabet)
    letters: list[Letter] = []
    for token in text.split():
        if token.endswith("^-1"):
            name, exp = token[:-3], -1
        elif token not in alphabet and len(token) == 1 and token.lower() in alphabet:
            name, exp = token.lower(), -1
        else:
            name, exp = token, 1
        if name not in alphabet:
            raise UnknownVertex(f"letter {name!r} is not in the alphabet")
        letters.append((name, exp))
    return reduce_word(letters)


@dataclass(frozen=True)
class Transvection:
    """target -> target*multiplier^sign (side='right') or multiplier^sign*target."""

    target: str
    multiplier: str
    side: str = "right"  # or "left"
    sign: int = 1

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +-1")
        if self.target == self.multiplier:
            raise ValueError("transvection target and multiplier must differ")

    def inverse(self):
        return Transvection(self.target, self.multiplier, self.side, -self.sign)


@dataclass(frozen=True)
class Inversion:
    vertex: str

    def inverse(self):
        return self


@dataclass(frozen=True)
class PartialConjugation:
    """w -> by * w * by^-1 for w in the component, identity elsewhere."""

    by: str
    component: frozenset[str]

    def inverse(self):
        return _InversePartialConjugation(self.by, self.component)


@dataclass(frozen=True)
class _InversePartialConjugation:
    by: str
    component: frozenset[str]

    def inverse(self):
        return PartialConjugation(self.by, self.component)


@dataclass(frozen=True)
class Inner:
    """Conjugation of every generator by an explicit word."""

    by: Word

    def inverse(self):
        return Inner(invert_word(self.by))


AutGenerator = Transvection | Inversion | PartialConjugation | _InversePartialConjugation | Inner


def _generator_images(alphabet: tuple[str, ...], gen: AutGenerator) -> dict[str, Word]:
    images = {v: gen_word(v) for v in alphabet}
    if isinstance(gen, Transvection):
        if gen.target not in images or gen.multiplier not in images:
            raise UnknownVertex("transvection uses letters outside the alphabet")
        t = gen_word(gen.target)
        m = gen_word(gen.multiplier, gen.sign)
        images[gen.target] = concat(t, m) if gen.side == "right" else concat(m, t)
    elif isinstance(gen, Inversion):
        if gen.vertex not in images:
            raise UnknownVertex("inversion vertex outside the alphabet")
        images[gen.vertex] = gen_word(gen.vertex, -1)
    elif isinstance(gen, (PartialConjugation, _InversePartialConjugation)):
        if gen.by not in images:
            raise UnknownVertex("conjugating vertex outside the alphabet")
        e = 1 if isinstance(gen, PartialConjugation) else -1
        for v in gen.component:
            if v not in images:
                raise UnknownVertex("conjugated vertex outside the alphabet")
            images[v] = concat(gen_word(gen.by, e), gen_word(v), gen_word(gen.by, -e))
    elif isinstance(gen, Inner):
        for v in alphabet:
            images[v] = concat(gen.by, gen_word(v), invert_word(gen.by))
    else:
        raise TypeError(f"unknown generator kind {gen!r}")
    return images


class FreeAutomorphism:
    """An automorphism of the free group on a fixed alphabet.

    Stores images and inverse images of all generators plus the generator
    sequence it was built from.  The identity check images(inverse_images)
    == id is verified at construction.
    """

    __slots__ = ("alphabet", "images", "inverse_images", "provenance")

    def __init__(self, alphabet, images, inverse_images, provenance=()):
        self.alphabet = tuple(alphabet)
        self.images = dict(images)
        self.inverse_images = dict(inverse_images)
        self.provenance = tuple(provenance)
        for v in self.alphabet:
            roundtrip = substitute(self.images, self.inverse_images[v])
            if roundtrip != gen_word(v):
                raise ValueError(f"inverse images are wrong at {v!r}")

    @classmethod
    def identity(cls, alphabet) -> "FreeAutomorphism":
        ims = {v: gen_word(v) for v in alphabet}
        return cls(alphabet, ims, dict(ims))

    @classmethod
    def from_generator(cls, alphabet, gen: AutGenerator) -> "FreeAutomorphism":
        images = _generator_images(tuple(alphabet), gen)
        inverse_images = _generator_images(tuple(alphabet), gen.inverse())
        return cls(alphabet, images, inverse_images, (gen,))

    @classmethod
    def from_generators(cls, alphabet, gens) -> "FreeAutomorphism":
        phi = cls.identity(alphabet)
        for gen in gens:
            phi = compose(cls.from_generator(alphabet, gen), phi)
        return phi

    @classmethod
    def from_images(cls, alphabet, images: dict[str, Word],
                    inverse_images: dict[str, Word]) -> "FreeAutomorphism":
        return cls(alphabet, images, inverse_images)

    def apply(self, x: Word) -> Word:
        return substitute(self.images, x)

    def apply_inverse(self, x: Word) -> Word:
        return substitute(self.inverse_images, x)

    def inverse(self) -> "FreeAutomorphism":
        prov = tuple(g.inverse() for g in reversed(self.provenance))
        return FreeAutomorphism(self.alphabet, self.inverse_images, self.images, prov)

    def power(self, n: int) -> "FreeAutomorphism":
        base = self if n >= 0 else self.inverse()
        result = FreeAutomorphism.identity(self.alphabet)
        for _ in range(abs(n)):
            result = compose(base, result)
        return result

    def is_identity(self) -> bool:
        return all(self.images[v] == gen_word(v) for v in self.alphabet)

    def __eq__(self, other):
        return (isinstance(other, FreeAutomorphism)
                and self.alphabet == other.alphabet and self.images == other.images)

    def __repr__(self):
        ims = ", ".join(f"{v}->{format_word(self.images[v]) or '1'}" for v in self.alphabet)
        return f"FreeAutomorphism({ims})"

    def to_json(self):
        return {
            "alphabet": list(self.alphabet),
            "images": {v: format_word(self.images[v]) for v in self.alphabet},
            "inverse_images": {v: format_word(self.inverse_images[v]) for v in self.alphabet},
        }

    @classmethod
    def from_json(cls, data) -> "FreeAutomorphism":
        alphabet = tuple(data["alphabet"])
        images = {v: parse_word(w, alphabet) for v, w in data["images"].items()}
        inverse_images = {v: parse_word(w, alphabet) for v, w in data["inverse_images"].items()}
        return cls(alphabet, images, inverse_images)


def substitute(images: dict[str, Word], x: Word) -> Word:
    out: list[Letter] = []
    for g, e in x:
        if g not in images:
            raise UnknownVertex(f"letter {g!r} has no image")
        piece = images[g] if e == 1 else invert_word(images[g])
        out.extend(piece)
    return reduce_word(out)


def compose(phi: FreeAutomorphism, psi: FreeAutomorphism) -> FreeAutomorphism:
    """(phi o psi): apply psi first, then phi."""
    if phi.alphabet != psi.alphabet:
        raise ValueError("mismatched alphabets")
    images = {v: phi.apply(psi.images[v]) for v in phi.alphabet}
    inverse_images = {v: psi.apply_inverse(phi.inverse_images[v]) for v in phi.alphabet}
    return FreeAutomorphism(phi.alphabet, images, inverse_images,
                            phi.provenance + psi.provenance)


@dataclass(frozen=True)
class RelativeFamily:
    """The family of free factors F[U], U upward-closed in the preorder."""

    preorder: Preorder

    @property
    def alphabet(self) -> tuple[str, ...]:
        return self.preorder.elements

    def upward_closed_subsets(self) -> list[frozenset[str]]:
        """Every upward-closed subset; exponential, test-scale only."""
        elems = self.preorder.elements
        if len(elems) > 16:
            raise ValueError("family enumeration is limited to 16 elements")
        out = []
        for mask in range(1 << len(elems)):
            subset = frozenset(e for i, e in enumerate(elems) if mask >> i & 1)
            if all(self.preorder.upper_set(u) <= subset for u in subset):
                out.append(subset)
        return sorted(out, key=lambda s: (len(s), sorted(s)))

    def member_supports_ok(self, phi: FreeAutomorphism) -> bool:
        """Support criterion: phi and its inverse map each generator into
        the free factor on that generator's upper set.

        Equivalent to preserving every upward-closed free factor: for any
        upward-closed U containing u, U contains upper_set(u), so support
        inside upper_set(u) suffices, and taking U = upper_set(u) shows it
        is necessary.
        """
        for u in self.alphabet:
            allowed = self.preorder.upper_set(u)
            if not word_support(phi.images[u]) <= allowed:
                return False
            if not word_support(phi.inverse_images[u]) <= allowed:
                return False
        return True


def in_relative_group(phi: FreeAutomorphism, fam: RelativeFamily) -> bool:
    if tuple(sorted(phi.alphabet)) != tuple(sorted(fam.alphabet)):
        raise ValueError("automorphism alphabet differs from the family's")
    return fam.member_supports_ok(phi)


def relative_generators(fam: RelativeFamily) -> list[FreeAutomorphism]:
    """All inversions and all dominated transvections of the family.

    Transvections w -> w v^s and w -> v^s w for every pair with v strictly
    above or equivalent to w (v != w) and s = +-1.
    """
    W = fam.alphabet
    out = [FreeAutomorphism.from_generator(W, Inversion(v)) for v in W]
    for w in W:
        for v in W:
            if v == w or not fam.preorder.ge(v, w):
                continue
            for side in ("right", "left"):
                for sign in (1, -1):
                    out.append(FreeAutomorphism.from_generator(
                        W, Transvection(w, v, side, sign)))
    return out


# RAAG generators live on a defining graph; domination is the graph's.

def enumerate_raag_generators(g: SimpleGraph) -> list[AutGenerator]:
    """Dominated transvections, inversions and partial conjugations of the
    graph group, in a deterministic order."""
    poset = domination_poset(g)
    gens: list[AutGenerator] = [Inversion(v) for v in g.vertices]
    for w in g.vertices:
        for v in g.vertices:
            if v != w and poset.dominates(v, w):
                for side in ("right", "left"):
                    for sign in (1, -1):
                        gens.append(Transvection(w, v, side, sign))
    for v in g.vertices:
        punctured = g.induced(set(g.vertices) - g.star(v))
        for comp in punctured.components():
            gens.append(PartialConjugation(v, comp))
    return gens


def raag_generator_valid(g: SimpleGraph, gen: AutGenerator) -> bool:
    poset = domination_poset(g)
    if isinstance(gen, Transvection):
        return poset.dominates(gen.multiplier, gen.target)
    if isinstance(gen, Inversion):
        return gen.vertex in g.vertices
    if isinstance(gen, (PartialConjugation, _InversePartialConjugation)):
        punctured = g.induced(set(g.vertices) - g.star(gen.by))
        return gen.component in set(punctured.components())
    return False


def delete_letters_outside(w: Word, keep) -> Word:
    keep = set(keep)
    return reduce_word([(g, e) for g, e in w if g in keep])


def reduce_raag_generator(g: SimpleGraph, subset,
                          gen: AutGenerator) -> tuple[FreeAutomorphism, Word]:
    """Push one graph-group generator through the quotient onto F[W].

    Returns (relative automorphism, inner conjugator word x) so that the
    induced endomorphism of the quotient free group is ``conj_x o phi``.
    Requires W to pass the subset conditions; the case split below is the
    constructive form of the reduction.
    """
    from coverrep.graphs import check_subset

    W = tuple(sorted(set(subset)))
    report = check_subset(g, W)
    if not report.passed:
        raise ValueError(f"subset fails conditions: {report.to_json()['conditions']}")
    identity = FreeAutomorphism.identity(W)

    if isinstance(gen, Inversion):
        if gen.vertex in W:
            return FreeAutomorphism.from_generator(W, gen), EMPTY
        return identity, EMPTY

    if isinstance(gen, Transvection):
        if gen.target in W and gen.multiplier in W:
            return FreeAutomorphism.from_generator(W, gen), EMPTY
        # any other combination acts trivially on the quotient: a multiplier
        # in W with target outside would violate closure under lower bounds
        if gen.multiplier in W and gen.target not in W:
            raise ValueError("impossible transvection: W is closed under lower bounds")
        return identity, EMPTY

    if isinstance(gen, (PartialConjugation, _InversePartialConjugation)):
        sign = 1 if isinstance(gen, PartialConjugation) else -1
        v = gen.by
        if v not in W:
            return identity, EMPTY
        if not divides_trivially(g, v, W):
            raise ValueError("conjugating vertex does not divide W trivially")
        moved = sorted(set(gen.component) & set(W))
        if not moved:
            return identity, EMPTY
        lower = {w for w in W if dominates_in(g, v, w)}
        if moved == sorted(set(W) - lower):
            # conjugates everything outside L(v): correct by the inner
            # automorphism by v, leaving transvections of L(v) - v by v^-1
            gens: list[AutGenerator] = []
            for u in sorted(lower - {v}):
                gens.append(Transvection(u, v, "right", sign))
                gens.append(Transvection(u, v, "left", -sign))
            phi = FreeAutomorphism.from_generators(W, gens)
            return phi, gen_word(v, sign)
        if len(moved) == 1 and moved[0] in lower:
            u = moved[0]
            phi = FreeAutomorphism.from_generators(
                W, [Transvection(u, v, "left", sign), Transvection(u, v, "right", -sign)])
            return phi, EMPTY
        raise ValueError("partial conjugation shape not covered by the reduction")

    if isinstance(gen, Inner):
        inner_word = delete_letters_outside(gen.by, W)
        return identity, inner_word

    raise TypeError(f"unknown generator kind {gen!r}")


def dominates_in(g: SimpleGraph, v: str, w: str) -> bool:
    from coverrep.graphs import dominates as _dom
    return _dom(g, v, w)


def raag_generator_quotient_images(g: SimpleGraph, subset,
                                   gen: AutGenerator) -> dict[str, Word]:
    """Images of W under the quotient endomorphism (letter deletion)."""
    W = tuple(sorted(set(subset)))
    images_full = _generator_images(g.vertices, gen)
    return {w: delete_letters_outside(images_full[w], W) for w in W}
