"""Group rings Q[G], explicit simple matrix factors, orders, reduced norms.

A simple factor is carried by an explicit matrix representation g -> rep(g)
of the finite group, extended Q-linearly to the group ring.  Surjectivity
of the linear extension onto Mat_t(K) (certified by an exact Q-rank count)
is what makes the image a simple factor.  The order inside the factor is
the Z-span of the rep images, held as an integer lattice with an exact
membership test.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from coverrep.errors import CapExceeded
from coverrep.fingroups import HeisenbergTriple, Permutation, heisenberg_generators
from coverrep.matrices import IntegerLattice, KMatrix, QRowSpace
from coverrep.scalars import QQ, CycloField


class GroupRingElement:
    """A sparse rational combination of group elements."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {}
        if coeffs:
            for g, c in coeffs.items():
                c = Fraction(c)
                if c != 0:
                    self.coeffs[g] = c

    @classmethod
    def of(cls, g, coeff=1) -> "GroupRingElement":
        return cls({g: Fraction(coeff)})

    @classmethod
    def zero(cls) -> "GroupRingElement":
        return cls()

    def __add__(self, other):
        out = dict(self.coeffs)
        for g, c in other.coeffs.items():
            s = out.get(g, Fraction(0)) + c
            if s == 0:
                out.pop(g, None)
            else:
                out[g] = s
        return GroupRingElement(out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return GroupRingElement({g: -c for g, c in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, GroupRingElement):
            out: dict = {}
            for g, c in self.coeffs.items():
                for h, d in other.coeffs.items():
                    gh = g * h
                    s = out.get(gh, Fraction(0)) + c * d
                    if s == 0:
                        out.pop(gh, None)
                    else:
                        out[gh] = s
            return GroupRingElement(out)
        scalar = Fraction(other)
        return GroupRingElement({g: c * scalar for g, c in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, GroupRingElement) and self.coeffs == other.coeffs

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, g) -> Fraction:
        return self.coeffs.get(g, Fraction(0))

    def support(self):
        return sorted(self.coeffs, key=lambda g: g.sort_key())

    def involution(self) -> "GroupRingElement":
        """g -> g^{-1} extended linearly."""
        return GroupRingElement({g.inverse(): c for g, c in self.coeffs.items()})

    def denominator_lcm(self) -> int:
        from math import lcm
        d = 1
        for c in self.coeffs.values():
            d = lcm(d, c.denominator)
        return d

    def __repr__(self):
        if not self.coeffs:
            return "GroupRing(0)"
        parts = [f"{c}*{g!r}" for g, c in sorted(self.coeffs.items(), key=lambda t: t[0].sort_key())]
        return "GroupRing(" + " + ".join(parts) + ")"


def ring_one(identity) -> GroupRingElement:
    return GroupRingElement.of(identity)


@dataclass
class SimpleFactor:
    """An explicit matrix factor of Q[G]: label, scalar field, block size,
    and the representation on group elements (cached)."""

    label: str
    field: object
    t: int
    _rep_fn: object
    spec: dict = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False)

    def rep(self, g) -> KMatrix:
        m = self._cache.get(g)
        if m is None:
            m = self._rep_fn(g)
            self._cache[g] = m
        return m

    @property
    def one(self) -> KMatrix:
        return KMatrix.identity(self.field, self.t)

    @property
    def zero_matrix(self) -> KMatrix:
        return KMatrix.zeros(self.field, self.t, self.t)

    def project(self, alpha: GroupRingElement) -> KMatrix:
        """Linear extension: sum of coeff * rep(g)."""
        out = self.zero_matrix
        for g, c in alpha.coeffs.items():
            out = out + self.rep(g) * c
        return out

    def qdim(self) -> int:
        """Dimension of Mat_t(K) over Q."""
        return self.t * self.t * self.field.qdim

    def verify_multiplicative(self, elements, rng=None, samples=100) -> bool:
        elements = list(elements)
        import random
        r = rng or random.Random(0)
        pairs = [(a, b) for a in elements for b in elements]
        if len(pairs) > samples:
            pairs = r.sample(pairs, samples)
        return all(self.rep(a * b) == self.rep(a) * self.rep(b) for a, b in pairs)

    def span_rank(self, elements, target: int | None = None) -> int:
        """Exact Q-rank of the span of rep images; stops early at target."""
        space = QRowSpace(self.qdim())
        for g in elements:
            space.insert(self.rep(g).to_qvec())
            if target is not None and space.rank >= target:
                break
        return space.rank

    def verify_surjective(self, elements) -> bool:
        """The factor is the full matrix algebra iff the rep images span it
        over Q (rank t^2 * [K:Q])."""
        return self.span_rank(elements, target=self.qdim()) == self.qdim()

    def to_json(self):
        return dict(self.spec) if self.spec else {"kind": "custom", "label": self.label}


def standard_rep_sym(m: int) -> SimpleFactor:
    """The (m-1)-dimensional standard representation of Sym(m) over Q in
    the basis v_i = e_i - e_{i+1}."""
    if m < 2:
        raise ValueError("need m >= 2")

    def expand_difference(a: int, b: int):
        # e_a - e_b as a combination of v_i = e_i - e_{i+1}, 0-based a, b
        coeffs = [0] * (m - 1)
        if a < b:
            for i in range(a, b):
                coeffs[i] = 1
        else:
            for i in range(b, a):
                coeffs[i] = -1
        return coeffs

    def rep(p: Permutation) -> KMatrix:
        if p.degree != m:
            raise ValueError(f"expected degree {m}")
        cols = []
        for i in range(m - 1):
            cols.append(expand_difference(p.act(i), p.act(i + 1)))
        data = [[Fraction(cols[j][i]) for j in range(m - 1)] for i in range(m - 1)]
        return KMatrix(QQ, data)

    return SimpleFactor(f"sym{m}-standard", QQ, m - 1, rep,
                        spec={"kind": "sym_standard", "m": m})


def heisenberg_rep(k: int, m: int) -> SimpleFactor:
    """The m x m factor of Q[H(k)] over Q(zeta_k) with X diagonal, Y a
    cyclic shift with corner zeta^m, and the center mapping to zeta^l I
    (l = k/m).  Requires 1 < m < k, m | k, gcd(m, k/m) = 1; the defining
    relations are checked at construction."""
    if not (1 < m < k):
        raise ValueError("need 1 < m < k")
    if k % m != 0:
        raise ValueError("m must divide k")
    ell = k // m
    from math import gcd
    if gcd(m, ell) != 1:
        raise ValueError("m and k/m must be coprime")
    F = CycloField(k)

    rX = KMatrix(F, [[F.zeta_power(i * ell + 1) if i == j else F.zero for j in range(m)]
                     for i in range(m)])
    rY_data = [[F.zero] * m for _ in range(m)]
    rY_data[0][m - 1] = F.zeta_power(m)
    for i in range(1, m):
        rY_data[i][i - 1] = F.one
    rY = KMatrix(F, rY_data)
    rZ = KMatrix.identity(F, m) * F.zeta_power(ell)

    ident = KMatrix.identity(F, m)
    relations = [
        rX ** k == ident, rY ** k == ident, rZ ** k == ident,
        rX * rZ == rZ * rX, rY * rZ == rZ * rY,
        rX * rY * rX.inverse() * rY.inverse() == rZ,
    ]
    if not all(relations):
        raise AssertionError("mod-k relations fail; representation is broken")

    def rep(g: HeisenbergTriple) -> KMatrix:
        if g.k != k:
            raise ValueError(f"expected modulus {k}")
        # (a, b, c) = X^a Y^b Z^(c - a b)
        return rX ** g.a * rY ** g.b * rZ ** ((g.c - g.a * g.b) % k)

    X, Y, Z = heisenberg_generators(k)
    factor = SimpleFactor(f"heis{k}-m{m}", F, m, rep,
                          spec={"kind": "heisenberg", "k": k, "m": m})
    if factor.rep(X) != rX or factor.rep(Y) != rY or factor.rep(Z) != rZ:
        raise AssertionError("generator images disagree with the displayed matrices")
    return factor


def factor_from_json(data) -> SimpleFactor:
    kind = data["kind"]
    if kind == "sym_standard":
        return standard_rep_sym(int(data["m"]))
    if kind == "heisenberg":
        return heisenberg_rep(int(data["k"]), int(data["m"]))
    raise ValueError(f"unknown factor kind {kind!r}")


@dataclass
class OrderLattice:
    """A Z-order inside the matrix factor, with exact membership.

    mode 'group-ring' spans the rep images of the whole group (the image of
    the integral group ring); mode 'matrix-integral' is the naive order of
    matrices with integral coordinates.
    """

    factor: SimpleFactor
    mode: str
    lattice: IntegerLattice | None

    @classmethod
    def group_ring_image(cls, factor: SimpleFactor, elements, cap: int = 100_000):
        elements = list(elements)
        if len(elements) > cap:
            raise CapExceeded(f"group enumeration exceeds cap {cap}")
        vectors = [factor.rep(g).to_qvec() for g in elements]
        return cls(factor, "group-ring", IntegerLattice.from_qvectors(vectors))

    @classmethod
    def matrix_integral(cls, factor: SimpleFactor):
        return cls(factor, "matrix-integral", None)

    def contains(self, b: KMatrix) -> bool:
        if self.mode == "matrix-integral":
            return all(x.denominator == 1 for x in b.to_qvec())
        return self.lattice.contains(b.to_qvec())

    @property
    def rank(self) -> int:
        if self.mode == "matrix-integral":
            return self.factor.qdim()
        return self.lattice.rank

    def describe(self):
        return {"mode": self.mode, "rank": self.rank}


def expand_blocks(field, blocks) -> KMatrix:
    """Assemble an r x s array of t x t blocks into one (rt) x (st) matrix."""
    r = len(blocks)
    s = len(blocks[0]) if r else 0
    t = blocks[0][0].rows if r and s else 0
    data = []
    for i in range(r):
        for ti in range(t):
            row = []
            for j in range(s):
                row.extend(blocks[i][j].data[ti])
            data.append(row)
    return KMatrix(field, data)


def reduced_norm(blocks_or_matrix) -> object:
    """Reduced norm of a square matrix over B = Mat_t(K): the determinant
    of its (rt) x (rt) expansion over K."""
    if isinstance(blocks_or_matrix, KMatrix):
        return blocks_or_matrix.det()
    blocks = blocks_or_matrix
    if len(blocks) == 0:
        raise ValueError("empty block matrix")
    if len(blocks) != len(blocks[0]):
        raise ValueError("reduced norm needs a square block matrix")
    field = blocks[0][0].field
    return expand_blocks(field, blocks).det()
