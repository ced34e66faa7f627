"""Two fully worked shape examples: a four-element chain and a hexagonal
poset of six three-element classes.

Each example realizes its poset as the domination preorder of a graph,
records the induced pattern of the abelianization action, builds a finite
quotient onto the mod-6 Heisenberg group with the 2x2 cyclotomic factor,
and verifies sampled unipotents against the predicted block pattern.  The
reports are deterministic and serve as byte-stable golden files.
"""

from __future__ import annotations

import random

from coverrep.arithgroups import (abelianization_image,
                                  abelianization_pattern_ok)
from coverrep.factors import heisenberg_rep
from coverrep.fingroups import Homomorphism, heisenberg_generators
from coverrep.freewords import enumerate_raag_generators
from coverrep.graphs import Preorder, domination_poset, realize_preorder
from coverrep.homrep import (RepContext, chain_transvection_matrix,
                             make_unipotent, pair_cycle, rep_matrix,
                             transvection_power)
from coverrep.shapes import (block_pattern, class_difference_basis,
                             restrict_to_difference_basis)


def chain_poset() -> Preorder:
    return Preorder.chain(["v1", "v2", "v3", "v4"])


def hex_poset() -> Preorder:
    """Six equivalence classes of size three: 1, 2, 3 maximal, with
    4 <= {1, 3}, 5 <= {1, 2}, 6 <= {2, 3}."""
    members = {i: [f"{i}{ch}" for ch in "abc"] for i in range(1, 7)}
    elements = [v for i in range(1, 7) for v in members[i]]
    pairs = []
    for i in range(1, 7):
        for a in members[i]:
            for b in members[i]:
                pairs.append((a, b))
    for low, ups in ((4, (1, 3)), (5, (1, 2)), (6, (2, 3))):
        for up in ups:
            for a in members[low]:
                for b in members[up]:
                    pairs.append((a, b))
    return Preorder.closure_of(elements, pairs)


def hex_basis_references() -> dict[str, str]:
    """The frozen pairing of lower classes to maximal anchors."""
    return {"4a": "1a", "5a": "2a", "6a": "3a"}


def standard_context(poset: Preorder, k: int = 6, m: int = 2) -> RepContext:
    """Map the elements onto the Heisenberg generators X, Y, YX in cyclic
    order (all three have invertible b in the (k, m) factor)."""
    X, Y, _ = heisenberg_generators(k)
    cycle = [X, Y, Y * X]
    images = {v: cycle[i % 3] for i, v in enumerate(poset.elements)}
    hom = Homomorphism(poset.elements, images)
    return RepContext(poset, hom, heisenberg_rep(k, m))


def _abelianization_report(poset: Preorder, seed: int = 0) -> dict:
    graph, W = realize_preorder(poset)
    restricted = domination_poset(graph).relation.restrict(W)
    mapping = {v: f"w:{v}" for v in poset.elements}
    matches = poset.is_isomorphic_to(restricted, mapping)
    others = tuple(sorted(set(graph.vertices) - set(W)))
    order = W + others
    outside_incomparable = all(
        domination_poset(graph).relation.upper_set(v) == frozenset({v})
        for v in others)

    poset_w = domination_poset(graph)
    idx = {v: i for i, v in enumerate(order)}
    art = []
    for v in order:
        row = []
        for w in order:
            if v == w:
                row.append("d")
            elif w in W and v in W and poset_w.dominates(v, w):
                row.append("*")
            else:
                row.append(".")
        art.append("".join(row))

    gens = enumerate_raag_generators(graph)
    images = [abelianization_image(graph, g, order) for g in gens]
    all_fit = all(abelianization_pattern_ok(graph, m, order) for m in images)
    rng = random.Random(seed)
    products_fit = True
    for _ in range(3):
        prod = images[rng.randrange(len(images))]
        for _ in range(3):
            prod = prod * images[rng.randrange(len(images))]
        products_fit &= abelianization_pattern_ok(graph, prod, order)

    return {
        "graph": graph.to_json(),
        "W": list(W),
        "basis_order": list(order),
        "domination_restriction_matches": bool(matches),
        "outside_vertices_incomparable": bool(outside_incomparable),
        "pattern": art,
        "generator_count": len(gens),
        "all_generator_images_fit": bool(all_fit),
        "product_samples_fit": bool(products_fit),
    }


def _sample_transvections(ctx: RepContext, picks) -> list[tuple[str, object]]:
    """Build named unipotents T(v; b * e(u, mu)) from (v, u, mu, belt)
    tuples, where belt names a Heisenberg element for the coefficient."""
    X, Y, _ = heisenberg_generators(6)
    belts = {"X": X, "Y": Y, "YX": Y * X}
    out = []
    for v, u, mu, belt in picks:
        b = ctx.factor.rep(belts[belt])
        z = pair_cycle(ctx, u, mu).left_mul(b)
        name = f"T[{v} += {belt}*e({u},{mu})]"
        out.append((name, chain_transvection_matrix(ctx, v, z)))
    return out


def _representation_report(poset: Preorder, references, picks,
                           unipotent_pick=None,
                           include_matrices: bool = False) -> dict:
    ctx = standard_context(poset)
    basis = class_difference_basis(poset, references)
    pattern = block_pattern(poset, basis)

    samples = _sample_transvections(ctx, picks)
    if len(samples) >= 2:
        name_a, mat_a = samples[0]
        name_b, mat_b = samples[1]
        samples.append((f"product[{name_a} ; {name_b}]", mat_a @ mat_b))

    if unipotent_pick is not None:
        v, u, mu, belt = unipotent_pick
        X, Y, _ = heisenberg_generators(6)
        belts = {"X": X, "Y": Y, "YX": Y * X}
        z = pair_cycle(ctx, u, mu).left_mul(ctx.factor.rep(belts[belt]))
        mult, phi = make_unipotent(ctx, v, z)
        samples.append((f"rep-unipotent[{v} += {mult}*{belt}*e({u},{mu})]",
                        rep_matrix(ctx, phi)))
        power = transvection_power(ctx, v, mu)
        samples.append((f"rep-power-transvection[{v} <- {mu}]",
                        rep_matrix(ctx, power)))

    checked = []
    matrices = []
    for name, mat in samples:
        restricted = restrict_to_difference_basis(ctx, mat, basis)
        ok, failures = pattern.verify(restricted)
        checked.append({"name": name, "fits": bool(ok),
                        "failures": failures if not ok else []})
        if include_matrices:
            matrices.append({"name": name, "matrix": restricted.to_json()})

    report = {
        "factor": {"kind": "heisenberg", "k": 6, "m": 2},
        "assignment": {v: [ctx.q(v).a, ctx.q(v).b, ctx.q(v).c]
                       for v in poset.elements},
        "pattern": pattern.to_json(),
        "samples": checked,
    }
    if include_matrices:
        report["sample_matrices"] = matrices
    return report


def build_shape_report(name: str) -> dict:
    if name == "chain4":
        poset = chain_poset()
        picks = [
            ("v3", "v2", "v1", "X"),
            ("v4", "v2", "v1", "YX"),
            ("v4", "v3", "v1", "Y"),
        ]
        rep = _representation_report(poset, None, picks,
                                     unipotent_pick=("v4", "v3", "v1", "Y"),
                                     include_matrices=True)
    elif name == "classes6":
        poset = hex_poset()
        picks = [
            ("1a", "1b", "1c", "X"),      # repeated-block coupling between F rows
            ("6a", "2b", "3a", "Y"),      # sign-flipped coupling inside an E6 row
            ("1b", "1c", "1a", "YX"),     # within-class block
            ("4a", "1b", "1a", "X"),      # lower class against its anchor class
            ("5c", "2b", "1a", "Y"),
        ]
        rep = _representation_report(poset, hex_basis_references(), picks,
                                     unipotent_pick=("6a", "2b", "3a", "X"))
    else:
        raise ValueError(f"unknown example {name!r}; try 'chain4' or 'classes6'")
    return {
        "name": name,
        "poset": poset.to_json(),
        "abelianization": _abelianization_report(poset),
        "representation": rep,
    }


WORKED_EXAMPLES = ("chain4", "classes6")
