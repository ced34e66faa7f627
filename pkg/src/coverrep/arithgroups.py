"""Membership in the arithmetic group of chain automorphisms, the bundle
conditions licensing the unipotent constructions, elementary matrices, and
the action on the abelianization of the graph group.

Membership conditions on a matrix over B (rows are images of the edge
generators): (1) the row of v is supported on the upper set U(v); (2) the
restriction to each C_B[U(v)] has reduced norm 1; (3) generators with a
trivial equivalence class have identity diagonal entry; (4) the cycle
submodule is invariant; (5) the action on chains modulo cycles is trivial.
On top of these the order lattice must be preserved by the matrix and its
inverse.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from coverrep.errors import NotACycle
from coverrep.factors import SimpleFactor
from coverrep.freewords import (AutGenerator, Inner, Inversion,
                                PartialConjugation, Transvection,
                                _InversePartialConjugation)
from coverrep.graphs import SimpleGraph, domination_poset
from coverrep.homrep import (BMatrix, HBasis, RepContext, boundary_b, h_basis,
                             restrict_to_h)
from coverrep.matrices import KMatrix
from coverrep.scalars import QQ


@dataclass
class MembershipReport:
    conditions: dict[str, bool]
    witnesses: dict[str, object] = field(default_factory=dict)
    nrd_values: dict[str, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.conditions.values())

    def passed_except_nrd(self) -> bool:
        return all(v for k, v in self.conditions.items() if k != "2")

    def to_json(self):
        return {
            "conditions": {k: bool(v) for k, v in sorted(self.conditions.items())},
            "passed": self.passed,
            "witnesses": {k: str(w) for k, w in sorted(self.witnesses.items())},
        }


def check_membership(ctx: RepContext, m: BMatrix,
                     basis: HBasis | None = None,
                     check_lattice: bool = True) -> MembershipReport:
    """Evaluate the five membership conditions plus lattice preservation."""
    if basis is None:
        basis = h_basis(ctx)
    pre = ctx.preorder
    conditions: dict[str, bool] = {}
    witnesses: dict[str, object] = {}
    nrd_values: dict[str, object] = {}

    # 1: support of each row inside the upper set
    ok = True
    for v in ctx.alphabet:
        allowed = pre.upper_set(v)
        for w in ctx.alphabet:
            if w not in allowed and not m.entry(v, w).is_zero():
                ok = False
                witnesses["1"] = {"row": v, "column": w}
                break
        if not ok:
            break
    conditions["1"] = ok

    # 2: reduced norm one on each invariant block U(v)
    ok = True
    seen_blocks = set()
    for v in ctx.alphabet:
        block = tuple(sorted(pre.upper_set(v)))
        if block in seen_blocks:
            continue
        seen_blocks.add(block)
        if conditions["1"]:
            sub = m.submatrix(block)
            val = sub.reduced_norm()
            nrd_values[",".join(block)] = val
            if not ctx.factor.field.is_zero(ctx.factor.field.sub(val, ctx.factor.field.one)):
                ok = False
                witnesses.setdefault("2", {"block": list(block), "nrd": str(val)})
        else:
            ok = False
    conditions["2"] = ok

    # 3: trivial classes act trivially on their subquotient
    ok = True
    for v in ctx.alphabet:
        if len(pre.class_of(v)) == 1 and m.entry(v, v) != ctx.factor.one:
            ok = False
            witnesses["3"] = {"vertex": v}
            break
    conditions["3"] = ok

    # 4: cycles stay cycles
    ok = True
    for name, elem in zip(basis.names, basis.elements):
        if not boundary_b(ctx, m.apply_to_chain(elem)).is_zero():
            ok = False
            witnesses["4"] = {"basis_vector": name}
            break
    conditions["4"] = ok

    # 5: trivial action modulo cycles: boundary(row v) == b_v
    ok = True
    for v in ctx.alphabet:
        if boundary_b(ctx, m.row_chain(v)) != ctx.b[v]:
            ok = False
            witnesses["5"] = {"row": v}
            break
    conditions["5"] = ok

    if check_lattice:
        lat = ctx.lattice
        ok = all(lat.contains(m.entry(v, w)) for v in ctx.alphabet for w in ctx.alphabet)
        if ok:
            try:
                minv = m.inverse()
            except ZeroDivisionError:
                ok = False
                witnesses["lattice"] = {"singular": True}
            else:
                ok = all(lat.contains(minv.entry(v, w))
                         for v in ctx.alphabet for w in ctx.alphabet)
                if not ok:
                    witnesses["lattice"] = {"inverse_outside": True}
        else:
            witnesses["lattice"] = {"entry_outside": True}
        conditions["lattice"] = ok

    return MembershipReport(conditions, witnesses, nrd_values)


@dataclass
class BundleReport:
    """Outcome of the three conditions on (G, B, q, preorder) that license
    the unipotent generation arguments."""

    conditions: dict[str, bool]
    witnesses: dict[str, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.conditions.values())

    def to_json(self):
        return {
            "conditions": {k: bool(v) for k, v in sorted(self.conditions.items())},
            "passed": self.passed,
            "witnesses": {k: w for k, w in sorted(self.witnesses.items())},
        }


def check_bundle_conditions(ctx: RepContext) -> BundleReport:
    pre = ctx.preorder
    conditions: dict[str, bool] = {}
    witnesses: dict[str, object] = {}
    group_size = len(ctx.group)

    # 1: some maximal element of each nonempty strict upper set has
    # invertible b
    ok = True
    chosen = {}
    for v in ctx.alphabet:
        upper = sorted(pre.strict_upper_set(v))
        if not upper:
            continue
        good = [u for u in pre.maximal_elements_of(upper) if ctx.b_inv[u] is not None]
        if good:
            chosen[v] = good[0]
        else:
            ok = False
            witnesses["1"] = {"vertex": v}
            break
    conditions["1"] = ok
    if chosen:
        witnesses["1-choices"] = chosen

    # 2: generation by images of upper sets, with the maximal/nonmaximal split
    ok = True
    for v in ctx.alphabet:
        upper_strict = sorted(pre.strict_upper_set(v))
        maximal = pre.is_maximal(v)
        need: list[str] | None = None
        if not maximal and len(upper_strict) >= 2:
            need = upper_strict
        elif maximal and len(upper_strict) == 2:
            need = upper_strict
        elif maximal and len(upper_strict) >= 3:
            need = sorted(pre.upper_set(v))
        if need is not None:
            if len(ctx.subgroup_elements(need)) != group_size:
                ok = False
                witnesses["2"] = {"vertex": v, "subset": need}
                break
    conditions["2"] = ok

    # 3: class-size constraints tied to B not being a division algebra
    ok = True
    division = ctx.factor.t == 1
    maximal_class_3 = False
    nonmaximal_class_2 = False
    for cls in pre.classes():
        cls_maximal = pre.is_maximal(cls[0])
        if cls_maximal and len(cls) == 2:
            ok = False
            witnesses["3"] = {"maximal_class_of_size_2": list(cls)}
            break
        if cls_maximal and len(cls) == 3:
            maximal_class_3 = True
        if not cls_maximal and len(cls) == 2:
            nonmaximal_class_2 = True
    if ok and (maximal_class_3 or nonmaximal_class_2) and division:
        ok = False
        witnesses["3"] = {"division_algebra_with_small_class": True}
    conditions["3"] = ok

    return BundleReport(conditions, witnesses)


def elementary_matrix(factor: SimpleFactor, labels, i, j, a: KMatrix) -> BMatrix:
    """The elementary automorphism adding a * e_j to e_i (rows-are-images)."""
    labels = tuple(labels)
    if i == j:
        raise ValueError("off-diagonal indices required")
    m = BMatrix.identity(factor, labels)
    entries = [list(row) for row in m.entries]
    entries[labels.index(i)][labels.index(j)] = a
    return BMatrix(factor, labels, entries)


def subquotient_nrd(ctx: RepContext, m: BMatrix, cls) -> object:
    """Reduced norm of the induced map on C[U(class)]/C[U(class) - class]."""
    cls = tuple(sorted(cls))
    return m.submatrix(cls).reduced_norm()


def verify_generated_in(ctx: RepContext, gens: list[BMatrix], trials: int = 20,
                        length: int = 6, seed: int = 0,
                        basis: HBasis | None = None):
    """Sample random bounded-length products of the generators and check
    each against the membership conditions; returns (ok, witness)."""
    if basis is None:
        basis = h_basis(ctx)
    for g in gens:
        if not check_membership(ctx, g, basis=basis).passed:
            return False, {"generator_failed": True}
    if not gens:
        return True, None
    rng = random.Random(seed)
    inverses = [g.inverse() for g in gens]
    for trial in range(trials):
        word = [(rng.randrange(len(gens)), rng.choice([1, -1]))
                for _ in range(rng.randint(1, length))]
        prod = BMatrix.identity(ctx.factor, ctx.alphabet)
        for idx, e in word:
            prod = prod @ (gens[idx] if e == 1 else inverses[idx])
        if not check_membership(ctx, prod, basis=basis).passed:
            return False, {"trial": trial, "word": word}
    return True, None


# --- the action on the abelianization of the graph group --------------------

def abelianization_image(g: SimpleGraph, gen: AutGenerator,
                         order: tuple[str, ...] | None = None) -> KMatrix:
    """The integer matrix of one generator on the abelianization, columns
    are images of the vertex basis vectors."""
    order = tuple(order) if order is not None else g.vertices
    if sorted(order) != list(g.vertices):
        raise ValueError("order must enumerate the vertices")
    n = len(order)
    idx = {v: i for i, v in enumerate(order)}
    data = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    if isinstance(gen, Transvection):
        poset = domination_poset(g)
        if not poset.dominates(gen.multiplier, gen.target):
            raise ValueError("transvection multiplier must dominate the target")
        data[idx[gen.multiplier]][idx[gen.target]] += gen.sign
    elif isinstance(gen, Inversion):
        data[idx[gen.vertex]][idx[gen.vertex]] = Fraction(-1)
    elif isinstance(gen, (PartialConjugation, _InversePartialConjugation, Inner)):
        pass  # conjugations act trivially on the abelianization
    else:
        raise TypeError(f"unknown generator kind {gen!r}")
    return KMatrix(QQ, data)


def abelianization_pattern_ok(g: SimpleGraph, m: KMatrix,
                              order: tuple[str, ...]) -> bool:
    """Check the column-support pattern: column w supported on U(w), with
    units on the diagonal."""
    poset = domination_poset(g)
    idx = {v: i for i, v in enumerate(order)}
    for w in order:
        allowed = poset.upper_set(w)
        for v in order:
            entry = m.entry(idx[v], idx[w])
            if v == w:
                if entry not in (Fraction(1), Fraction(-1)):
                    return False
            elif v not in allowed and entry != 0:
                return False
    return True
