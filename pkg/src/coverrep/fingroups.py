"""Finite groups: permutations, the mod-k Heisenberg group, closures,
stabilizer-chain orders, and the explicit generating families.

Permutations act on {1..m} (stored 0-based) and multiply as functions
composed right to left: (p*q)(x) = p(q(x)).  This fixes the orientation of
every cycle computation in the package.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import factorial

from coverrep.errors import CapExceeded, UnknownVertex


@dataclass(frozen=True)
class Permutation:
    images: tuple[int, ...]  # images[x] = image of x, 0-based

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError("not a permutation")

    @classmethod
    def identity_of_degree(cls, m: int) -> "Permutation":
        return cls(tuple(range(m)))

    @classmethod
    def from_cycles(cls, m: int, *cycles) -> "Permutation":
        """Build from 1-based cycles, e.g. from_cycles(5, [1, 2, 3])."""
        images = list(range(m))
        for cycle in cycles:
            cycle = [x - 1 for x in cycle]
            if any(not 0 <= x < m for x in cycle):
                raise ValueError(f"cycle point out of range 1..{m}")
            if len(set(cycle)) != len(cycle):
                raise ValueError("repeated point in cycle")
            for a, b in zip(cycle, cycle[1:]):
                images[a] = b
            if cycle:
                images[cycle[-1]] = cycle[0]
        return cls(tuple(images))

    @property
    def degree(self) -> int:
        return len(self.images)

    def identity(self) -> "Permutation":
        return Permutation.identity_of_degree(self.degree)

    def act(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        return Permutation(tuple(self.images[other.images[x]] for x in range(self.degree)))

    def inverse(self) -> "Permutation":
        out = [0] * self.degree
        for x, y in enumerate(self.images):
            out[y] = x
        return Permutation(tuple(out))

    def __pow__(self, n: int) -> "Permutation":
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        result = self.identity()
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_identity(self) -> bool:
        return all(i == x for x, i in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, 1-based, each starting at its least point."""
        seen, out = set(), []
        for start in range(self.degree):
            if start in seen or self.images[start] == start:
                continue
            cyc, x = [start], self.images[start]
            while x != start:
                seen.add(x)
                cyc.append(x)
                x = self.images[x]
            seen.add(start)
            out.append(tuple(p + 1 for p in cyc))
        return out

    def cycle_string(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycs)

    @classmethod
    def parse(cls, text: str, degree: int) -> "Permutation":
        text = text.strip()
        if text in ("()", "", "e"):
            return cls.identity_of_degree(degree)
        cycles = []
        for body in re.findall(r"\(([^()]*)\)", text):
            pts = [int(tok) for tok in re.split(r"[,\s]+", body.strip()) if tok]
            if pts:
                cycles.append(pts)
        if not cycles:
            raise ValueError(f"cannot parse permutation {text!r}")
        return cls.from_cycles(degree, *cycles)

    def sign(self) -> int:
        return -1 if sum(len(c) - 1 for c in self.cycles()) % 2 else 1

    def sort_key(self):
        return self.images

    def __lt__(self, other):
        return self.images < other.images

    def __repr__(self):
        return f"Permutation({self.cycle_string()}, deg={self.degree})"


@dataclass(frozen=True)
class HeisenbergTriple:
    """Upper unitriangular 3x3 matrix over Z/k: (a, b, c) has a in position
    (1,2), b in (2,3) and c in (1,3)."""

    k: int
    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("modulus must be at least 2")
        object.__setattr__(self, "a", self.a % self.k)
        object.__setattr__(self, "b", self.b % self.k)
        object.__setattr__(self, "c", self.c % self.k)

    def identity(self) -> "HeisenbergTriple":
        return HeisenbergTriple(self.k, 0, 0, 0)

    def __mul__(self, other: "HeisenbergTriple") -> "HeisenbergTriple":
        if self.k != other.k:
            raise ValueError("modulus mismatch")
        return HeisenbergTriple(self.k, self.a + other.a, self.b + other.b,
                                self.c + other.c + self.a * other.b)

    def inverse(self) -> "HeisenbergTriple":
        return HeisenbergTriple(self.k, -self.a, -self.b, -self.c + self.a * self.b)

    def __pow__(self, n: int) -> "HeisenbergTriple":
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        result = self.identity()
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_identity(self) -> bool:
        return self.a == 0 and self.b == 0 and self.c == 0

    def matrix(self) -> list[list[int]]:
        return [[1, self.a, self.c], [0, 1, self.b], [0, 0, 1]]

    def sort_key(self):
        return (self.a, self.b, self.c)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        return f"H({self.k}; {self.a},{self.b},{self.c})"


def heisenberg_generators(k: int) -> tuple[HeisenbergTriple, HeisenbergTriple, HeisenbergTriple]:
    """The standard generators X, Y and the central Z of H(k)."""
    return (HeisenbergTriple(k, 1, 0, 0),
            HeisenbergTriple(k, 0, 1, 0),
            HeisenbergTriple(k, 0, 0, 1))


def element_order(g) -> int:
    n, x = 1, g
    while not x.is_identity():
        x = x * g
        n += 1
        if n > 10 ** 7:
            raise CapExceeded("element order exceeds sanity bound")
    return n


def closure(gens, cap: int = 1_000_000, identity=None):
    """The subgroup generated by ``gens`` as a sorted list.

    Raises CapExceeded when more than ``cap`` elements appear.
    """
    gens = list(gens)
    if identity is None:
        if not gens:
            raise ValueError("need generators or an explicit identity")
        identity = gens[0].identity()
    elements = {identity}
    frontier = [identity]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in elements:
                    elements.add(y)
                    new.append(y)
                    if len(elements) > cap:
                        raise CapExceeded(f"closure exceeded cap of {cap}")
        frontier = new
    return sorted(elements, key=lambda e: e.sort_key())


def smallest_prime_factor(k: int) -> int:
    p = 2
    while p * p <= k:
        if k % p == 0:
            return p
        p += 1
    return k


def heisenberg_pairwise_set(k: int) -> list[HeisenbergTriple]:
    """The maximal family {X} + {Y X^s : 0 <= s <= p-1} (p the smallest
    prime factor of k) in which every distinct pair generates H(k)."""
    X, Y, _ = heisenberg_generators(k)
    p = smallest_prime_factor(k)
    return [X] + [Y * X ** s for s in range(p)]


def heisenberg_invertible_family(k: int) -> list[HeisenbergTriple]:
    """The subfamily {X} + {Y X^s : 0 <= s <= p-2} whose members also have
    invertible image minus identity in the matched matrix factor."""
    X, Y, _ = heisenberg_generators(k)
    p = smallest_prime_factor(k)
    return [X] + [Y * X ** s for s in range(p - 1)]


@dataclass(frozen=True)
class Homomorphism:
    """A homomorphism from the free group on ``alphabet`` into a finite
    group, given by arbitrary generator images."""

    alphabet: tuple[str, ...]
    images: dict[str, object]

    def __post_init__(self):
        missing = [v for v in self.alphabet if v not in self.images]
        if missing:
            raise UnknownVertex(f"no image for letters {missing}")

    def identity(self):
        return self.images[self.alphabet[0]].identity()

    def evaluate(self, w) -> object:
        out = self.identity()
        for g, e in w:
            if g not in self.images:
                raise UnknownVertex(f"letter {g!r} has no image")
            img = self.images[g]
            out = out * (img if e == 1 else img.inverse())
        return out

    def image_closure(self, cap: int = 1_000_000):
        return closure([self.images[v] for v in self.alphabet], cap=cap,
                       identity=self.identity())


def perm_group_order(gens) -> int:
    """Exact order of the permutation group generated by ``gens``.

    Deterministic Schreier-Sims with base points chosen as least moved
    points; intended for small degrees.
    """
    gens = [g for g in gens if not g.is_identity()]
    if not gens:
        return 1
    degree = gens[0].degree
    if any(g.degree != degree for g in gens):
        raise ValueError("mixed degrees")
    identity = Permutation.identity_of_degree(degree)

    # levels[i] holds the generators first fixed at depth i; the group at
    # depth i is generated by the union of levels i..end
    levels: list[dict] = []  # {"base": int, "gens": [...], "transversal": {pt: perm}}

    def gens_at(i):
        return [g for level in levels[i:] for g in level["gens"]]

    def recompute_orbit(i):
        level = levels[i]
        base = level["base"]
        hs = gens_at(i)
        trans = {base: identity}
        frontier = [base]
        while frontier:
            new = []
            for x in frontier:
                for h in hs:
                    y = h.act(x)
                    if y not in trans:
                        trans[y] = h * trans[x]
                        new.append(y)
            frontier = new
        level["transversal"] = trans

    def sift(p, start):
        for idx in range(start, len(levels)):
            level = levels[idx]
            pt = p.act(level["base"])
            rep = level["transversal"].get(pt)
            if rep is None:
                return p, idx
            p = rep.inverse() * p
        return p, len(levels)

    def place(p, lo):
        """Sift from depth lo and store a nontrivial residue; returns the
        depth whose generators changed, or None."""
        residue, idx = sift(p, lo)
        if residue.is_identity():
            return None
        if idx == len(levels):
            base = min(x for x in range(degree) if residue.act(x) != x)
            levels.append({"base": base, "gens": [], "transversal": {}})
        levels[idx]["gens"].append(residue)
        recompute_orbit(idx)
        return idx

    for g in sorted(gens, key=lambda g: g.sort_key()):
        place(g, 0)

    # Fixpoint sweep: at each depth, every Schreier generator (over ALL
    # generators of that depth's group) must sift to the identity deeper
    # down; deepest dirty level first.
    dirty = set(range(len(levels)))
    while dirty:
        i = max(dirty)
        dirty.discard(i)
        recompute_orbit(i)
        level = levels[i]
        restart = False
        for x in sorted(level["transversal"]):
            tx = level["transversal"][x]
            for h in gens_at(i):
                y = h.act(x)
                schreier = level["transversal"][y].inverse() * (h * tx)
                if schreier.is_identity():
                    continue
                changed = place(schreier, i + 1)
                if changed is not None:
                    dirty.update(range(changed + 1))
                    dirty.add(i)
                    restart = True
                    break
            if restart:
                break

    order = 1
    for level in levels:
        order *= len(level["transversal"])
    return order


def gensym_family(m: int, count: int) -> list[Permutation]:
    """m-cycles g_1..g_count, every pair of which generates Sym(m) (m even)
    or Alt(m) (m odd): g_1 is the full cycle and g_i its conjugate by the
    transposition (3i-2, 3i-1)."""
    if m < 6 * count + 3:
        raise ValueError(f"need m >= {6 * count + 3} for {count} generators")
    sigma = Permutation.from_cycles(m, list(range(1, m + 1)))
    out = [sigma]
    for i in range(2, count + 1):
        tau = Permutation.from_cycles(m, [3 * i - 2, 3 * i - 1])
        out.append(tau * sigma * tau)
    return out


def three_cycle_chain(m: int, i: int, j: int) -> list[Permutation]:
    """The five-step reduction from the pair (g_i, g_j), 2 <= i < j, down to
    the 3-cycle (1 2 3), composing right to left.

    The published intermediate display inverts the first word and is off by
    one in the fourth conjugating exponent; the steps below reproduce the
    intended cycle values (checked exactly in the tests).
    """
    if not 2 <= i < j:
        raise ValueError("need 2 <= i < j")
    if 6 * j - 3 * i + 2 > m or 3 * j + 2 > m:
        raise ValueError("degree too small for this (i, j)")
    sigma = Permutation.from_cycles(m, list(range(1, m + 1)))
    ti = Permutation.from_cycles(m, [3 * i - 2, 3 * i - 1])
    tj = Permutation.from_cycles(m, [3 * j - 2, 3 * j - 1])
    s1 = (sigma * tj * ti * sigma.inverse() * ti * tj).inverse()
    c = 3 * j + 2 - 3 * i
    s2 = sigma ** c * s1 * sigma ** (-c)
    s3 = (s1 * s2) ** 6
    s4 = sigma ** (-(3 * j - 3)) * s3 * sigma ** (3 * j - 3)
    s5 = (sigma ** (-3) * s4 ** 4 * sigma * s4.inverse()
          * sigma.inverse() * s4 ** (-3) * sigma ** 3)
    return [s1, s2, s3, s4, s5]


def three_cycle_chain_expected(m: int, i: int, j: int) -> list[Permutation]:
    """The published cycle values the chain should land on."""
    return [
        Permutation.from_cycles(m, [3 * i - 2, 3 * i - 1, 3 * i],
                                [3 * j - 2, 3 * j - 1, 3 * j]),
        Permutation.from_cycles(m, [3 * j, 3 * j + 1, 3 * j + 2],
                                [6 * j - 3 * i, 6 * j - 3 * i + 1, 6 * j - 3 * i + 2]),
        Permutation.from_cycles(m, [3 * j - 2, 3 * j - 1, 3 * j, 3 * j + 1, 3 * j + 2]),
        Permutation.from_cycles(m, [1, 2, 3, 4, 5]),
        Permutation.from_cycles(m, [1, 2, 3]),
    ]


def sym_order(m: int) -> int:
    return factorial(m)


def alt_order(m: int) -> int:
    return factorial(m) // 2


def heisenberg_order(k: int) -> int:
    return k ** 3


def group_spec_order(spec: dict) -> int:
    kind = spec["kind"]
    if kind == "sym":
        return sym_order(int(spec["m"]))
    if kind == "alt":
        return alt_order(int(spec["m"]))
    if kind == "heisenberg":
        return heisenberg_order(int(spec["k"]))
    raise ValueError(f"unknown group kind {kind!r}")


def parse_group_element(spec: dict, data):
    """Parse one element: cycle notation for sym/alt, [a,b,c] for heisenberg."""
    kind = spec["kind"]
    if kind in ("sym", "alt"):
        return Permutation.parse(data, int(spec["m"]))
    if kind == "heisenberg":
        a, b, c = data
        return HeisenbergTriple(int(spec["k"]), int(a), int(b), int(c))
    raise ValueError(f"unknown group kind {kind!r}")


def format_group_element(g) -> object:
    if isinstance(g, Permutation):
        return g.cycle_string()
    if isinstance(g, HeisenbergTriple):
        return [g.a, g.b, g.c]
    raise TypeError(f"unknown element {g!r}")
