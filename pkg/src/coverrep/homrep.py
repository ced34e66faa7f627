"""Chains on the finite cover, the induced matrix representation, and the
cycle <-> word machinery.

The cover of the one-vertex rose with deck group G has one vertex orbit and
one edge orbit per generator; its 1-chains form a free Q[G]-module with one
generator per letter.  A word traces a path whose chain obeys the product
rule  chain(x1 x2) = chain(x1) + q(x1) * chain(x2),  which is what
``fox_chain`` computes.  Projecting coefficients into a simple matrix
factor B of Q[G] gives chains over B; an automorphism commuting with q acts
on these, and its matrix (rows = images of the edge generators) is the
representation this package is about.

Matrix convention: row v holds the coefficients of the image of generator
v, so the assignment is anti-multiplicative:
``rep_matrix(compose(phi, psi)) == rep_matrix(psi) @ rep_matrix(phi)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from coverrep.errors import (CapExceeded, LiftError, NotACycle,
                             QCompatibilityError, UnknownVertex)
from coverrep.factors import (GroupRingElement, OrderLattice, SimpleFactor,
                              reduced_norm)
from coverrep.fingroups import Homomorphism, closure, element_order
from coverrep.freewords import (FreeAutomorphism, Transvection, Word, concat,
                                gen_word, invert_word, reduce_word)
from coverrep.graphs import Preorder
from coverrep.matrices import KMatrix, q_solve


class ChainQG:
    """A 1-chain over Q[G]: finitely many generators with group-ring
    coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {}
        if coeffs:
            for v, a in coeffs.items():
                if not a.is_zero():
                    self.coeffs[v] = a

    def coeff(self, v) -> GroupRingElement:
        return self.coeffs.get(v, GroupRingElement.zero())

    def support(self):
        return sorted(self.coeffs)

    def __add__(self, other):
        out = dict(self.coeffs)
        for v, a in other.coeffs.items():
            s = out.get(v, GroupRingElement.zero()) + a
            if s.is_zero():
                out.pop(v, None)
            else:
                out[v] = s
        return ChainQG(out)

    def __sub__(self, other):
        return self + other.scale(Fraction(-1))

    def scale(self, c) -> "ChainQG":
        return ChainQG({v: a * c for v, a in self.coeffs.items()})

    def act(self, g) -> "ChainQG":
        """Left action of a group element on every coefficient."""
        unit = GroupRingElement.of(g)
        return ChainQG({v: unit * a for v, a in self.coeffs.items()})

    def __eq__(self, other):
        return isinstance(other, ChainQG) and self.coeffs == other.coeffs

    def is_zero(self) -> bool:
        return not self.coeffs

    def denominator_lcm(self) -> int:
        d = 1
        for a in self.coeffs.values():
            d = lcm(d, a.denominator_lcm())
        return d

    def __repr__(self):
        return f"ChainQG({self.coeffs!r})"


class ChainB:
    """A 1-chain with coefficients in the matrix factor B."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {}
        if coeffs:
            for v, a in coeffs.items():
                if not a.is_zero():
                    self.coeffs[v] = a

    def coeff(self, v, factor: SimpleFactor) -> KMatrix:
        return self.coeffs.get(v, factor.zero_matrix)

    def support(self):
        return sorted(self.coeffs)

    def __add__(self, other):
        out = dict(self.coeffs)
        for v, a in other.coeffs.items():
            s = (out.get(v) + a) if v in out else a
            if s.is_zero():
                out.pop(v, None)
            else:
                out[v] = s
        return ChainB(out)

    def __sub__(self, other):
        return self + other.left_mul_scalar(-1)

    def left_mul(self, b: KMatrix) -> "ChainB":
        return ChainB({v: b * a for v, a in self.coeffs.items()})

    def left_mul_scalar(self, c) -> "ChainB":
        return ChainB({v: a * c for v, a in self.coeffs.items()})

    def __eq__(self, other):
        return isinstance(other, ChainB) and self.coeffs == other.coeffs

    def is_zero(self) -> bool:
        return not self.coeffs

    def __repr__(self):
        return f"ChainB({sorted(self.coeffs)})"


class RepContext:
    """Everything fixed by a choice of (W, preorder, q, B).

    Caches the group enumeration, the boundary coefficients a_v = q(v) - 1
    and b_v = rep(q(v)) - 1, inverses of the b_v where they exist, the
    group-ring order lattice, and per-subset lifting data.
    """

    def __init__(self, preorder: Preorder, hom: Homomorphism,
                 factor: SimpleFactor, group_cap: int = 1_000_000,
                 lattice_cap: int = 20_000):
        self.preorder = preorder
        self.alphabet = preorder.elements
        self.hom = hom
        if tuple(sorted(hom.alphabet)) != tuple(sorted(self.alphabet)):
            raise ValueError("homomorphism alphabet differs from the preorder's")
        self.factor = factor
        self.identity = hom.identity()
        self.group = hom.image_closure(cap=group_cap)
        self.group_index = {g: i for i, g in enumerate(self.group)}
        self._lattice_cap = lattice_cap
        self._lattice = None
        self._subgroup_cache: dict = {}
        self._lift_cache: dict = {}
        self.a = {}
        self.b = {}
        self.b_inv = {}
        one = GroupRingElement.of(self.identity)
        for v in self.alphabet:
            self.a[v] = GroupRingElement.of(self.q(v)) - one
            bv = factor.rep(self.q(v)) - factor.one
            self.b[v] = bv
            try:
                self.b_inv[v] = bv.inverse()
            except ZeroDivisionError:
                self.b_inv[v] = None

    def q(self, v):
        if v not in self.hom.images:
            raise UnknownVertex(f"letter {v!r} has no image")
        return self.hom.images[v]

    @property
    def n(self) -> int:
        return len(self.alphabet)

    @property
    def lattice(self) -> OrderLattice:
        if self._lattice is None:
            if len(self.group) > self._lattice_cap:
                raise CapExceeded(
                    f"group of size {len(self.group)} exceeds lattice cap {self._lattice_cap}")
            self._lattice = OrderLattice.group_ring_image(self.factor, self.group)
        return self._lattice

    def project(self, alpha: GroupRingElement) -> KMatrix:
        return self.factor.project(alpha)

    def project_chain(self, z: ChainQG) -> ChainB:
        return ChainB({v: self.project(a) for v, a in z.coeffs.items()})

    def subgroup_elements(self, subset) -> list:
        """Elements of the subgroup of G generated by the images of the
        subset, sorted."""
        images = tuple(sorted({self.q(u).sort_key() for u in subset}))
        key = images
        if key not in self._subgroup_cache:
            gens = list({self.q(u) for u in subset})
            self._subgroup_cache[key] = closure(gens, identity=self.identity)
        return self._subgroup_cache[key]

    def multiplier_order(self, v) -> int:
        return element_order(self.q(v))

    def is_q_compatible(self, phi: FreeAutomorphism) -> bool:
        return all(self.hom.evaluate(phi.images[v]) == self.q(v) for v in self.alphabet)


def fox_chain(ctx: RepContext, x: Word) -> ChainQG:
    """The chain of the lifted path of x: scan left to right keeping the
    image of the consumed prefix; a positive letter contributes +prefix,
    a negative letter updates the prefix first and contributes -prefix."""
    acc: dict = {}
    g = ctx.identity

    def bump(v, grp, sign):
        d = acc.setdefault(v, {})
        s = d.get(grp, Fraction(0)) + sign
        if s == 0:
            d.pop(grp, None)
        else:
            d[grp] = s

    for name, exp in x:
        img = ctx.q(name)
        if exp == 1:
            bump(name, g, Fraction(1))
            g = g * img
        else:
            g = g * img.inverse()
            bump(name, g, Fraction(-1))
    return ChainQG({v: GroupRingElement(d) for v, d in acc.items()})


def boundary_qg(ctx: RepContext, z: ChainQG) -> GroupRingElement:
    out = GroupRingElement.zero()
    for v, a in z.coeffs.items():
        out = out + a * ctx.a[v]
    return out


def boundary_b(ctx: RepContext, z: ChainB) -> KMatrix:
    out = ctx.factor.zero_matrix
    for v, a in z.coeffs.items():
        out = out + a * ctx.b[v]
    return out


def pair_cycle(ctx: RepContext, u: str, w: str) -> ChainB:
    """The cycle u_hat - b_u b_w^{-1} w_hat (needs b_w invertible)."""
    if u == w:
        raise ValueError("pair cycle needs distinct generators")
    if ctx.b_inv[w] is None:
        raise ValueError(f"b_{w} is not invertible")
    return ChainB({u: ctx.factor.one, w: -(ctx.b[u] * ctx.b_inv[w])})


class BMatrix:
    """A square matrix over B with labelled rows/columns; row v holds the
    coefficients of the image of basis vector v."""

    __slots__ = ("factor", "labels", "entries")

    def __init__(self, factor: SimpleFactor, labels, entries):
        self.factor = factor
        self.labels = tuple(labels)
        self.entries = tuple(tuple(row) for row in entries)
        n = len(self.labels)
        if len(self.entries) != n or any(len(r) != n for r in self.entries):
            raise ValueError("entry grid does not match labels")

    @classmethod
    def identity(cls, factor: SimpleFactor, labels) -> "BMatrix":
        labels = tuple(labels)
        n = len(labels)
        return cls(factor, labels,
                   [[factor.one if i == j else factor.zero_matrix for j in range(n)]
                    for i in range(n)])

    @classmethod
    def from_rows(cls, factor: SimpleFactor, labels, rows: dict) -> "BMatrix":
        labels = tuple(labels)
        entries = [[rows[v].coeff(w, factor) for w in labels] for v in labels]
        return cls(factor, labels, entries)

    def index(self, label) -> int:
        return self.labels.index(label)

    def entry(self, v, w) -> KMatrix:
        return self.entries[self.index(v)][self.index(w)]

    def row_chain(self, v) -> ChainB:
        i = self.index(v)
        return ChainB({w: self.entries[i][j] for j, w in enumerate(self.labels)})

    def __matmul__(self, other: "BMatrix") -> "BMatrix":
        if self.labels != other.labels:
            raise ValueError("label mismatch")
        n = len(self.labels)
        zero = self.factor.zero_matrix
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = zero
                for k in range(n):
                    a = self.entries[i][k]
                    b = other.entries[k][j]
                    if not a.is_zero() and not b.is_zero():
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return BMatrix(self.factor, self.labels, out)

    def __eq__(self, other):
        return (isinstance(other, BMatrix) and self.labels == other.labels
                and self.entries == other.entries)

    def is_identity(self) -> bool:
        n = len(self.labels)
        for i in range(n):
            for j in range(n):
                expected = self.factor.one if i == j else self.factor.zero_matrix
                if self.entries[i][j] != expected:
                    return False
        return True

    def apply_to_chain(self, z: ChainB) -> ChainB:
        """Image of the chain under the module endomorphism."""
        out = ChainB()
        for v, coeff in z.coeffs.items():
            i = self.index(v)
            out = out + ChainB({w: coeff * self.entries[i][j]
                                for j, w in enumerate(self.labels)})
        return out

    def expand(self) -> KMatrix:
        t = self.factor.t
        field = self.factor.field
        n = len(self.labels)
        data = []
        for i in range(n):
            for ti in range(t):
                row = []
                for j in range(n):
                    row.extend(self.entries[i][j].data[ti])
                data.append(row)
        return KMatrix(field, data)

    @classmethod
    def from_expanded(cls, factor: SimpleFactor, labels, big: KMatrix) -> "BMatrix":
        t = factor.t
        labels = tuple(labels)
        n = len(labels)
        entries = []
        for i in range(n):
            row = []
            for j in range(n):
                block = [[big.data[i * t + a][j * t + b] for b in range(t)] for a in range(t)]
                row.append(KMatrix(factor.field, block))
            entries.append(row)
        return cls(factor, labels, entries)

    def inverse(self) -> "BMatrix":
        return BMatrix.from_expanded(self.factor, self.labels, self.expand().inverse())

    def __pow__(self, n: int) -> "BMatrix":
        if n < 0:
            return self.inverse() ** (-n)
        result = BMatrix.identity(self.factor, self.labels)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def submatrix(self, labels) -> "BMatrix":
        labels = tuple(labels)
        idx = [self.index(v) for v in labels]
        return BMatrix(self.factor, labels,
                       [[self.entries[i][j] for j in idx] for i in idx])

    def reduced_norm(self):
        return reduced_norm(self.expand())

    def to_json(self):
        return {
            "labels": list(self.labels),
            "block_size": self.factor.t,
            "field": self.factor.field.describe(),
            "entries": [[[ [self.factor.field.to_json(x) for x in brow]
                           for brow in blk.data] for blk in row] for row in self.entries],
        }

    def __repr__(self):
        return f"BMatrix({len(self.labels)}x{len(self.labels)} over {self.factor.label})"


def matrix_commutator(a: BMatrix, b: BMatrix) -> BMatrix:
    """Matrix of the automorphism commutator [phi, psi] = phi^-1 psi^-1 phi psi
    given the matrices of phi and psi (rows-are-images convention)."""
    return b @ a @ b.inverse() @ a.inverse()


def rep_matrix(ctx: RepContext, phi: FreeAutomorphism) -> BMatrix:
    """The matrix of the automorphism on chains over B.

    Requires q o phi = q; raises QCompatibilityError otherwise.
    """
    if tuple(sorted(phi.alphabet)) != tuple(sorted(ctx.alphabet)):
        raise ValueError("alphabet mismatch")
    for v in ctx.alphabet:
        if ctx.hom.evaluate(phi.images[v]) != ctx.q(v):
            raise QCompatibilityError(f"image of {v!r} changes the finite quotient")
    rows = {v: ctx.project_chain(fox_chain(ctx, phi.images[v])) for v in ctx.alphabet}
    return BMatrix.from_rows(ctx.factor, ctx.alphabet, rows)


def chain_transvection_matrix(ctx: RepContext, v: str, z: ChainB) -> BMatrix:
    """The unipotent sending v_hat to v_hat + z and fixing the others;
    z must be a cycle not supported on v."""
    if v in z.coeffs:
        raise ValueError("the added cycle may not involve the moved generator")
    if not boundary_b(ctx, z).is_zero():
        raise NotACycle("added chain has nonzero boundary")
    m = BMatrix.identity(ctx.factor, ctx.alphabet)
    entries = [list(row) for row in m.entries]
    i = m.index(v)
    for w, coeff in z.coeffs.items():
        entries[i][m.index(w)] = entries[i][m.index(w)] + coeff
    return BMatrix(ctx.factor, ctx.alphabet, entries)


def transvection_power(ctx: RepContext, target: str, multiplier: str,
                       side: str = "right", sign: int = 1) -> FreeAutomorphism:
    """The least power of the dominated transvection that commutes with q:
    the d-th, d the order of the multiplier's image."""
    if not ctx.preorder.ge(multiplier, target):
        raise ValueError(f"{multiplier!r} does not dominate {target!r}")
    d = ctx.multiplier_order(multiplier)
    t = FreeAutomorphism.from_generator(ctx.alphabet,
                                        Transvection(target, multiplier, side, sign))
    return t.power(d)


@dataclass(frozen=True)
class HBasis:
    """The pair basis of the cycle submodule: e_{u, pivot} for u != pivot.

    The pivot is the lexicographically least maximal element with
    invertible b; coordinates of a cycle are just its non-pivot
    coefficients (the pivot coefficient is forced), verified exactly.
    """

    pivot: str
    names: tuple[str, ...]
    elements: tuple[ChainB, ...]

    def coordinate_chain(self, ctx: RepContext, z: ChainB) -> list[KMatrix]:
        if not boundary_b(ctx, z).is_zero():
            raise NotACycle("chain is not a cycle")
        coords = [z.coeff(u, ctx.factor) for u in self.names]
        rebuilt = ChainB()
        for c, e in zip(coords, self.elements):
            rebuilt = rebuilt + e.left_mul(c)
        if rebuilt != z:
            raise NotACycle("cycle does not lie in the span of the pair basis")
        return coords


def h_basis(ctx: RepContext) -> HBasis:
    candidates = [v for v in ctx.alphabet if ctx.b_inv[v] is not None]
    if not candidates:
        raise ValueError("no generator has invertible b; no pair basis exists")
    maximal = ctx.preorder.maximal_elements_of(candidates)
    pivot = sorted(maximal)[0] if maximal else sorted(candidates)[0]
    names = tuple(u for u in ctx.alphabet if u != pivot)
    elements = tuple(pair_cycle(ctx, u, pivot) for u in names)
    return HBasis(pivot, names, elements)


def restrict_to_h(ctx: RepContext, m: BMatrix, basis: HBasis) -> BMatrix:
    """Restrict the chain automorphism to the cycle submodule in the given
    basis; raises NotACycle when the submodule is not preserved."""
    rows = {}
    for name, elem in zip(basis.names, basis.elements):
        image = m.apply_to_chain(elem)
        coords = basis.coordinate_chain(ctx, image)
        rows[name] = ChainB(dict(zip(basis.names, coords)))
    return BMatrix.from_rows(ctx.factor, basis.names, rows)


# --- cycles <-> words -------------------------------------------------------

def _check_supported(ctx: RepContext, z: ChainQG, subset) -> list:
    subset_set = set(subset)
    if not set(z.support()) <= subset_set:
        raise ValueError("chain is not supported on the subset")
    elements = ctx.subgroup_elements(subset)
    allowed = set(elements)
    for a in z.coeffs.values():
        for g in a.coeffs:
            if g not in allowed:
                raise LiftError("coefficient lies outside the subset's group ring")
    return elements


def word_for_cycle(ctx: RepContext, subset, z: ChainQG) -> tuple[int, Word]:
    """Clear denominators and realize the integral cycle as the chain of a
    based loop word on the subset's subcover.

    Returns (M, x) with fox_chain(x) = M * z exactly; x lies in the free
    factor on the subset and maps to 1 in G.
    """
    subset = tuple(sorted(set(subset)))
    if z.is_zero():
        return 1, ()
    elements = _check_supported(ctx, z, subset)
    if not boundary_qg(ctx, z).is_zero():
        raise NotACycle("chain has nonzero boundary")
    M = z.denominator_lcm()

    # integral circulation on the subcover: edge (g, u) from g to g*q(u)
    circulation: dict[tuple[object, str], int] = {}
    for u in subset:
        a = z.coeff(u)
        for g, c in a.coeffs.items():
            val = c * M
            circulation[(g, u)] = int(val)

    # breadth-first spanning tree from the identity, lexicographic edges
    index = {g: i for i, g in enumerate(elements)}
    word_to: dict = {ctx.identity: ()}
    queue = [ctx.identity]
    while queue:
        frontier = sorted(queue, key=lambda g: index[g])
        queue = []
        for g in frontier:
            for u in subset:
                img = ctx.q(u)
                fwd = g * img
                if fwd not in word_to:
                    word_to[fwd] = word_to[g] + ((u, 1),)
                    queue.append(fwd)
                bwd = g * img.inverse()
                if bwd not in word_to:
                    word_to[bwd] = word_to[g] + ((u, -1),)
                    queue.append(bwd)

    tree_edges = set()
    for g, w in word_to.items():
        if w:
            prefix = w[:-1]
            u, e = w[-1]
            tail = ctx.identity
            for name, ee in prefix:
                img = ctx.q(name)
                tail = tail * (img if ee == 1 else img.inverse())
            if e == 1:
                tree_edges.add((tail, u))
            else:
                tree_edges.add((g, u))

    pieces: list[Word] = []
    for (g, u) in sorted(circulation, key=lambda t: (index[t[0]], t[1])):
        c = circulation[(g, u)]
        if c == 0 or (g, u) in tree_edges:
            continue
        head = g * ctx.q(u)
        loop = concat(word_to[g], ((u, 1),), invert_word(word_to[head]))
        piece = loop if c > 0 else invert_word(loop)
        for _ in range(abs(c)):
            pieces.append(piece)
    x = concat(*pieces) if pieces else ()

    if fox_chain(ctx, x) != z.scale(Fraction(M)):
        raise AssertionError("circulation decomposition failed to reproduce the cycle")
    return M, x


def _lift_data(ctx: RepContext, subset):
    """Projection matrix, solver, and the canonical idempotent for the
    subset's group ring (cached)."""
    subset = tuple(sorted(set(subset)))
    key = tuple(sorted({ctx.q(u).sort_key() for u in subset}))
    if key in ctx._lift_cache:
        return ctx._lift_cache[key]
    elements = ctx.subgroup_elements(subset)
    index = {g: i for i, g in enumerate(elements)}
    qdim = ctx.factor.qdim()
    # P[r][i] = r-th rational coordinate of rep(elements[i])
    cols = [ctx.factor.rep(g).to_qvec() for g in elements]
    P = [tuple(cols[i][r] for i in range(len(elements))) for r in range(qdim)]

    # complementary ideal J of ker(p): spanned by g -> coord_r(rep(g^-1))
    j_rows = []
    for r in range(qdim):
        j_rows.append(tuple(cols[index[g.inverse()]][r] for g in elements))
    # idempotent e in J with p(e) = identity: solve in the J-coordinates
    targets = ctx.factor.one.to_qvec()
    system_rows = []
    for r in range(qdim):
        system_rows.append(tuple(
            sum(j_rows[s][i] * cols[i][r] for i in range(len(elements)))
            for s in range(qdim)))
    sol = q_solve(system_rows, list(targets))
    idem = None
    if sol is not None:
        coeffs = {}
        for i, g in enumerate(elements):
            c = sum(sol[s] * j_rows[s][i] for s in range(qdim))
            if c != 0:
                coeffs[g] = c
        candidate = GroupRingElement(coeffs)
        if (ctx.project(candidate) == ctx.factor.one
                and candidate * candidate == candidate):
            idem = candidate
    data = {"elements": elements, "index": index, "P": P, "idempotent": idem}
    ctx._lift_cache[key] = data
    return data


def lift_to_subring(ctx: RepContext, subset, zb: ChainB) -> ChainQG:
    """Find a group-ring cycle over the subset's subgroup projecting to the
    given B-cycle.

    The coefficients of ``zb`` must lie in the projection of the subset's
    group ring; LiftError otherwise.  The result alpha satisfies
    project(alpha_v) = beta_v for all v and has zero boundary: the lift is
    a particular preimage multiplied by the canonical idempotent that kills
    the complement of the projection kernel.
    """
    subset = tuple(sorted(set(subset)))
    if zb.is_zero():
        return ChainQG()
    if not set(zb.support()) <= set(subset):
        raise ValueError("chain is not supported on the subset")
    if not boundary_b(ctx, zb).is_zero():
        raise NotACycle("chain has nonzero boundary")
    data = _lift_data(ctx, subset)
    elements = data["elements"]

    alpha: dict[str, GroupRingElement] = {}
    for v in zb.support():
        beta = zb.coeff(v, ctx.factor)
        sol = q_solve(data["P"], list(beta.to_qvec()))
        if sol is None:
            raise LiftError(f"coefficient of {v!r} is outside the projected subring")
        alpha[v] = GroupRingElement({g: sol[i] for i, g in enumerate(elements) if sol[i]})

    if data["idempotent"] is not None:
        e = data["idempotent"]
        alpha = {v: e * a for v, a in alpha.items()}
        out = ChainQG(alpha)
        if (boundary_qg(ctx, out).is_zero()
                and all(ctx.project(out.coeff(v)) == zb.coeff(v, ctx.factor)
                        for v in zb.support())):
            return out

    # fallback: one exact linear solve with the boundary constraint
    return _lift_full_solve(ctx, subset, zb, data)


def _lift_full_solve(ctx: RepContext, subset, zb: ChainB, data) -> ChainQG:
    elements = data["elements"]
    index = data["index"]
    nel = len(elements)
    vs = list(zb.support())
    nvars = len(vs) * nel
    rows = []
    rhs = []
    qdim = ctx.factor.qdim()
    for vi, v in enumerate(vs):
        beta = zb.coeff(v, ctx.factor).to_qvec()
        for r in range(qdim):
            row = [Fraction(0)] * nvars
            for i in range(nel):
                row[vi * nel + i] = data["P"][r][i]
            rows.append(tuple(row))
            rhs.append(beta[r])
    # boundary rows: sum over v of alpha_v (q(v) - 1) vanishes coefficientwise
    for h in elements:
        row = [Fraction(0)] * nvars
        for vi, v in enumerate(vs):
            img = ctx.q(v)
            for i, g in enumerate(elements):
                if g * img == h:
                    row[vi * nel + i] += 1
                if g == h:
                    row[vi * nel + i] -= 1
        rows.append(tuple(row))
        rhs.append(Fraction(0))
    sol = q_solve(rows, rhs)
    if sol is None:
        raise LiftError("no group-ring lift with zero boundary exists")
    alpha = {}
    for vi, v in enumerate(vs):
        coeffs = {elements[i]: sol[vi * nel + i] for i in range(nel) if sol[vi * nel + i]}
        alpha[v] = GroupRingElement(coeffs)
    out = ChainQG(alpha)
    if not boundary_qg(ctx, out).is_zero():
        raise AssertionError("solver returned a non-cycle")
    return out


def make_unipotent(ctx: RepContext, v: str, zb: ChainB) -> tuple[int, FreeAutomorphism]:
    """Realize the unipotent adding a multiple of the cycle zb to v_hat as
    the representation of an honest automorphism v -> x v.

    Returns (M, phi) with rep_matrix(phi) equal to the unipotent adding
    M * zb; zb must be a cycle supported on the strict upper set of v.
    """
    upper = sorted(ctx.preorder.strict_upper_set(v))
    if not set(zb.support()) <= set(upper):
        raise ValueError("cycle is not supported on the strict upper set")
    if zb.is_zero():
        return 1, FreeAutomorphism.identity(ctx.alphabet)
    alpha = lift_to_subring(ctx, upper, zb)
    M, x = word_for_cycle(ctx, upper, alpha)
    images = {w: gen_word(w) for w in ctx.alphabet}
    images[v] = concat(x, gen_word(v))
    inverse_images = {w: gen_word(w) for w in ctx.alphabet}
    inverse_images[v] = concat(invert_word(x), gen_word(v))
    phi = FreeAutomorphism.from_images(ctx.alphabet, images, inverse_images)
    return M, phi
