"""Predicted block shapes of arithmetic-group members in difference bases.

Members fix each scaled generator e_v = b_v^(-1) v_hat up to a cycle
supported on the upper set of v, and cycles are exactly the combinations
of the e_v with coefficients summing to zero.  Choosing a spanning tree of
differences e_x - e_y as a basis of the cycle module therefore determines,
purely combinatorially, which blocks of a member can be nonzero, which
diagonal blocks are forced to the identity, which blocks repeat between
columns (a shared subtrahend), and which blocks inside one column satisfy
a linear relation (component sums over the support of the added cycle).

Cells are keyed (source, component): the row of ``source`` in the
rows-are-images convention.  ASCII art is printed in the transposed,
columns-are-images orientation to match the usual matrix display.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from coverrep.errors import NotACycle
from coverrep.graphs import Preorder
from coverrep.homrep import BMatrix, ChainB, RepContext
from coverrep.matrices import q_kernel_basis


@dataclass(frozen=True)
class DifferenceBasis:
    """An ordered basis of the cycle module by differences e_x - e_y whose
    pairs form a spanning tree of the generators."""

    labels: tuple[str, ...]
    pairs: tuple[tuple[str, str], ...]
    groups: tuple[str, ...]  # display group of each basis vector

    def __post_init__(self):
        if not (len(self.labels) == len(self.pairs) == len(self.groups)):
            raise ValueError("parallel arrays expected")

    def tree_side(self, idx: int, vertices) -> frozenset[str]:
        """Vertices on the minuend side of pair ``idx`` in the tree minus
        that edge."""
        x, y = self.pairs[idx]
        adj: dict[str, set[str]] = {v: set() for v in vertices}
        for j, (a, b) in enumerate(self.pairs):
            if j == idx:
                continue
            adj[a].add(b)
            adj[b].add(a)
        seen = {x}
        stack = [x]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if y in seen:
            raise ValueError("basis pairs do not form a tree")
        return frozenset(seen)


def class_difference_basis(preorder: Preorder,
                           references: dict[str, str] | None = None) -> DifferenceBasis:
    """The canonical difference basis: within each maximal class, vectors
    e_v - e_mu against the least member mu; the mu's chained to the first
    one; members of non-maximal classes against the mu of a maximal class
    above them (``references`` maps class representative to that mu's class
    representative; default is the least maximal class above)."""
    classes = preorder.classes()
    maximal = [c for c in classes if preorder.is_maximal(c[0])]
    lower = [c for c in classes if not preorder.is_maximal(c[0])]
    mu = {c: c[0] for c in maximal}

    labels: list[str] = []
    pairs: list[tuple[str, str]] = []
    groups: list[str] = []

    for i, c in enumerate(maximal, start=1):
        for v in c[1:]:
            labels.append(f"E{i}:{v}")
            pairs.append((v, mu[c]))
            groups.append(f"E{i}")
    first = maximal[0]
    for c in maximal[1:]:
        labels.append(f"F:{mu[c]}")
        pairs.append((mu[c], mu[first]))
        groups.append("F")
    for offset, c in enumerate(lower, start=len(maximal) + 1):
        if references and c[0] in references:
            ref_rep = references[c[0]]
            ref_class = next(mc for mc in maximal if ref_rep in mc)
        else:
            above = [mc for mc in maximal
                     if preorder.le(c[0], mc[0])]
            if not above:
                raise ValueError(f"class of {c[0]!r} has no maximal class above it")
            ref_class = above[0]
        anchor = mu[ref_class]
        for v in c:
            labels.append(f"E{offset}:{v}")
            pairs.append((v, anchor))
            groups.append(f"E{offset}")
    return DifferenceBasis(tuple(labels), tuple(pairs), tuple(groups))


def _support(preorder: Preorder, v: str) -> frozenset[str]:
    """Allowed support of the cycle added to e_v by a member: the upper
    set, minus v itself when its class is trivial."""
    if len(preorder.class_of(v)) == 1:
        return preorder.strict_upper_set(v)
    return preorder.upper_set(v)


@dataclass
class BlockPattern:
    """Mask plus forced structure for members in a difference basis."""

    basis: DifferenceBasis
    preorder: Preorder
    mask: tuple[tuple[bool, ...], ...]          # [source][component]
    identity_diagonal: tuple[bool, ...]         # per basis vector
    equalities: tuple[dict, ...]                # repeated blocks across sources
    source_relations: tuple[dict, ...]          # linear relations inside a source row

    def ascii_art(self) -> list[str]:
        """Rows = components, columns = sources (display orientation)."""
        n = len(self.basis.labels)
        grid = [["." for _ in range(n)] for _ in range(n)]
        for s in range(n):
            for comp in range(n):
                if self.mask[s][comp]:
                    grid[comp][s] = "*"
            grid[s][s] = "I" if self.identity_diagonal[s] else "D"
        header = " ".join(g[:6].ljust(6) for g in self.basis.groups)
        rows = [header]
        for comp in range(n):
            rows.append(" ".join(x.ljust(6) for x in grid[comp]))
        return rows

    def verify(self, matrix: BMatrix) -> tuple[bool, list]:
        """Check one restricted member matrix (rows are images) against the
        mask, identity diagonal, repeated blocks, and relations."""
        failures = []
        labels = self.basis.labels
        if matrix.labels != labels:
            return False, [{"reason": "label mismatch"}]
        factor = matrix.factor
        n = len(labels)
        for s in range(n):
            for comp in range(n):
                entry = matrix.entries[s][comp]
                if s == comp:
                    if self.identity_diagonal[s] and entry != factor.one:
                        failures.append({"cell": (labels[s], labels[comp]),
                                         "reason": "diagonal not identity"})
                elif not self.mask[s][comp] and not entry.is_zero():
                    failures.append({"cell": (labels[s], labels[comp]),
                                     "reason": "outside mask"})
        for eq in self.equalities:
            a = labels.index(eq["source_a"])
            b = labels.index(eq["source_b"])
            for comp_label in eq["components"]:
                c = labels.index(comp_label)
                if matrix.entries[a][c] != matrix.entries[b][c]:
                    failures.append({"cell": (eq["source_a"], comp_label),
                                     "reason": "repeated block differs"})
        for rel in self.source_relations:
            s = labels.index(rel["source"])
            acc = None
            for comp_label, coeff in zip(rel["components"], rel["coeffs"]):
                c = labels.index(comp_label)
                term = matrix.entries[s][c] * Fraction(coeff)
                acc = term if acc is None else acc + term
            if acc is not None and not acc.is_zero():
                failures.append({"source": rel["source"],
                                 "reason": "relation violated",
                                 "components": rel["components"]})
        return not failures, failures

    def to_json(self):
        return {
            "labels": list(self.basis.labels),
            "pairs": [list(p) for p in self.basis.pairs],
            "groups": list(self.basis.groups),
            "ascii": self.ascii_art(),
            "identity_diagonal": [self.basis.labels[i]
                                  for i, f in enumerate(self.identity_diagonal) if f],
            "equalities": list(self.equalities),
            "source_relations": list(self.source_relations),
        }


def block_pattern(preorder: Preorder, basis: DifferenceBasis) -> BlockPattern:
    vertices = preorder.elements
    npairs = len(basis.pairs)
    sides = [basis.tree_side(i, vertices) for i in range(npairs)]
    supp = {v: _support(preorder, v) for v in vertices}

    def possible(alpha: int, s: frozenset[str]) -> bool:
        return bool(s & sides[alpha]) and bool(s - sides[alpha])

    mask = []
    identity_diag = []
    for b in range(npairs):
        x, y = basis.pairs[b]
        row = []
        for alpha in range(npairs):
            allowed = (alpha == b or possible(alpha, supp[x])
                       or possible(alpha, supp[y]))
            row.append(allowed)
        mask.append(tuple(row))
        identity_diag.append(not possible(b, supp[x]) and not possible(b, supp[y]))

    equalities = []
    for b1 in range(npairs):
        for b2 in range(b1 + 1, npairs):
            y1, y2 = basis.pairs[b1][1], basis.pairs[b2][1]
            if y1 != y2:
                continue
            x1, x2 = basis.pairs[b1][0], basis.pairs[b2][0]
            comps = [alpha for alpha in range(npairs)
                     if possible(alpha, supp[y1])
                     and not possible(alpha, supp[x1])
                     and not possible(alpha, supp[x2])
                     and alpha not in (b1, b2)]
            if comps:
                equalities.append({
                    "source_a": basis.labels[b1],
                    "source_b": basis.labels[b2],
                    "components": [basis.labels[a] for a in comps],
                })

    relations = []
    for b in range(npairs):
        x, y = basis.pairs[b]
        for src, other in ((x, y), (y, x)):
            s_set = sorted(supp[src])
            if len(s_set) < 2:
                continue
            cells = [alpha for alpha in range(npairs)
                     if possible(alpha, supp[src])
                     and not possible(alpha, supp[other]) and alpha != b]
            if len(cells) < 2:
                continue
            base_elt = s_set[0]
            rows = []
            for free in s_set[1:]:
                # coefficient vector delta_free - delta_base, summing to zero
                row = []
                for alpha in cells:
                    t = Fraction(0)
                    if free in sides[alpha]:
                        t += 1
                    if base_elt in sides[alpha]:
                        t -= 1
                    row.append(t)
                rows.append(tuple(row))
            for rel in q_kernel_basis(rows, len(cells)):
                denom_scaled = [Fraction(c) for c in rel]
                relations.append({
                    "source": basis.labels[b],
                    "components": [basis.labels[cells[i]] for i in range(len(cells))
                                   if denom_scaled[i] != 0],
                    "coeffs": [str(denom_scaled[i]) for i in range(len(cells))
                               if denom_scaled[i] != 0],
                })

    # deduplicate relations (same source may generate the same relation twice)
    seen = set()
    unique_relations = []
    for rel in relations:
        key = (rel["source"], tuple(rel["components"]), tuple(rel["coeffs"]))
        if key not in seen:
            seen.add(key)
            unique_relations.append(rel)

    return BlockPattern(basis, preorder, tuple(mask), tuple(identity_diag),
                        tuple(equalities), tuple(unique_relations))


# --- transforming actual matrices into a difference basis -------------------

def to_scaled_basis(ctx: RepContext, m: BMatrix) -> BMatrix:
    """Rewrite a chain-basis matrix in the scaled basis e_v = b_v^{-1} v_hat;
    requires every b_v invertible."""
    for v in ctx.alphabet:
        if ctx.b_inv[v] is None:
            raise ValueError(f"b_{v} is not invertible")
    entries = []
    for v in ctx.alphabet:
        i = m.index(v)
        row = []
        for w in ctx.alphabet:
            j = m.index(w)
            row.append(ctx.b_inv[v] * m.entries[i][j] * ctx.b[w])
        entries.append(row)
    return BMatrix(ctx.factor, ctx.alphabet, entries)


def restrict_to_difference_basis(ctx: RepContext, m: BMatrix,
                                 basis: DifferenceBasis) -> BMatrix:
    """Coordinates of the images of the difference basis vectors, computed
    by component sums over the basis tree; exact, with reconstruction
    verified."""
    scaled = to_scaled_basis(ctx, m)
    vertices = ctx.alphabet
    sides = [basis.tree_side(i, vertices) for i in range(len(basis.pairs))]
    rows = []
    zero = ctx.factor.zero_matrix
    for (x, y) in basis.pairs:
        ix, iy = scaled.index(x), scaled.index(y)
        coeff = {w: scaled.entries[ix][scaled.index(w)] - scaled.entries[iy][scaled.index(w)]
                 for w in vertices}
        total = zero
        for w in vertices:
            total = total + coeff[w]
        if not total.is_zero():
            raise NotACycle("image of a difference leaves the cycle module")
        coords = []
        for alpha in range(len(basis.pairs)):
            acc = zero
            for w in sides[alpha]:
                acc = acc + coeff[w]
            coords.append(acc)
        # verify the tree decomposition reproduces the coefficients
        rebuilt = {w: zero for w in vertices}
        for alpha, (a, b) in enumerate(basis.pairs):
            rebuilt[a] = rebuilt[a] + coords[alpha]
            rebuilt[b] = rebuilt[b] - coords[alpha]
        if any(rebuilt[w] != coeff[w] for w in vertices):
            raise AssertionError("tree decomposition failed")
        rows.append(coords)
    return BMatrix(ctx.factor, basis.labels, rows)
