"""Defining graphs, vertex domination, and the subset conditions.

A vertex v dominates w when lk(w) is contained in st(v).  Domination is a
preorder; its equivalence classes form a poset.  A subset W of the vertices
is usable for the free-group reduction when it passes five combinatorial
conditions (independence, a doubly dominated vertex, no maximal class of
size exactly two, trivial division, and closure under lower bounds); the
report object records each condition separately with witnesses.

Vertex identifiers are opaque strings; every enumeration in this module is
ordered lexicographically so outputs are deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from coverrep.errors import UnknownVertex


@dataclass(frozen=True)
class SimpleGraph:
    """A finite simple graph: no loops, no multi-edges, string vertices."""

    vertices: tuple[str, ...]
    edges: frozenset[frozenset[str]]

    @classmethod
    def build(cls, vertices, edges) -> "SimpleGraph":
        verts = tuple(sorted(str(v) for v in vertices))
        if len(set(verts)) != len(verts):
            raise ValueError("duplicate vertex identifiers")
        vset = set(verts)
        eset = set()
        for a, b in edges:
            a, b = str(a), str(b)
            if a == b:
                raise ValueError(f"self-loop at {a!r}")
            if a not in vset or b not in vset:
                raise UnknownVertex(f"edge endpoint not declared: {a!r}-{b!r}")
            eset.add(frozenset((a, b)))
        return cls(verts, frozenset(eset))

    def require_vertex(self, v: str):
        if v not in self.vertices:
            raise UnknownVertex(f"unknown vertex {v!r}")

    def adjacent(self, a: str, b: str) -> bool:
        return frozenset((a, b)) in self.edges

    def link(self, v: str) -> frozenset[str]:
        self.require_vertex(v)
        return frozenset(w for w in self.vertices if self.adjacent(v, w))

    def star(self, v: str) -> frozenset[str]:
        return self.link(v) | {v}

    def sorted_edges(self) -> list[tuple[str, str]]:
        return sorted(tuple(sorted(e)) for e in self.edges)

    def induced(self, keep) -> "SimpleGraph":
        keep = set(keep)
        return SimpleGraph.build(
            [v for v in self.vertices if v in keep],
            [tuple(e) for e in self.edges if set(e) <= keep],
        )

    def components(self) -> list[frozenset[str]]:
        """Connected components, each sorted internally, ordered by minimum."""
        seen: set[str] = set()
        comps = []
        for start in self.vertices:
            if start in seen:
                continue
            comp = {start}
            stack = [start]
            while stack:
                v = stack.pop()
                for w in self.vertices:
                    if w not in comp and self.adjacent(v, w):
                        comp.add(w)
                        stack.append(w)
            seen |= comp
            comps.append(frozenset(comp))
        return sorted(comps, key=min)

    def to_json(self):
        return {"vertices": list(self.vertices), "edges": [list(e) for e in self.sorted_edges()]}

    @classmethod
    def from_json(cls, data) -> "SimpleGraph":
        return cls.build(data["vertices"], data["edges"])


def dominates(g: SimpleGraph, v: str, w: str) -> bool:
    """True when lk(w) is a subset of st(v)."""
    g.require_vertex(v)
    g.require_vertex(w)
    return g.link(w) <= g.star(v)


@dataclass(frozen=True)
class Preorder:
    """A reflexive transitive relation on a finite set of string labels."""

    elements: tuple[str, ...]
    leq: frozenset[tuple[str, str]]  # (x, y) means x <= y

    @classmethod
    def build(cls, elements, leq_pairs) -> "Preorder":
        elems = tuple(sorted(str(x) for x in elements))
        eset = set(elems)
        rel = set()
        for x, y in leq_pairs:
            x, y = str(x), str(y)
            if x not in eset or y not in eset:
                raise UnknownVertex(f"relation uses undeclared element: {x!r} <= {y!r}")
            rel.add((x, y))
        for x in elems:
            if (x, x) not in rel:
                raise ValueError(f"relation is not reflexive at {x!r}")
        for (a, b) in rel:
            for (c, d) in rel:
                if b == c and (a, d) not in rel:
                    raise ValueError(f"relation is not transitive: {a!r}<={b!r}<={d!r}")
        return cls(elems, frozenset(rel))

    @classmethod
    def closure_of(cls, elements, leq_pairs) -> "Preorder":
        """Build from generating pairs, adding the reflexive transitive closure."""
        elems = sorted(str(x) for x in elements)
        rel = {(str(x), str(y)) for x, y in leq_pairs}
        rel |= {(x, x) for x in elems}
        changed = True
        while changed:
            changed = False
            for (a, b) in list(rel):
                for (c, d) in list(rel):
                    if b == c and (a, d) not in rel:
                        rel.add((a, d))
                        changed = True
        return cls.build(elems, rel)

    @classmethod
    def chain(cls, elements) -> "Preorder":
        """elements[0] >= elements[1] >= ... (a linear order, given top first)."""
        elems = [str(x) for x in elements]
        pairs = [(elems[j], elems[i]) for i in range(len(elems)) for j in range(i, len(elems))]
        return cls.build(elems, pairs)

    @classmethod
    def antichain(cls, elements) -> "Preorder":
        elems = [str(x) for x in elements]
        return cls.build(elems, [(x, x) for x in elems])

    @classmethod
    def indiscrete(cls, elements) -> "Preorder":
        """All elements mutually comparable (one equivalence class)."""
        elems = [str(x) for x in elements]
        return cls.build(elems, [(x, y) for x in elems for y in elems])

    def le(self, x: str, y: str) -> bool:
        if x not in self.elements or y not in self.elements:
            raise UnknownVertex(f"unknown element {x!r} or {y!r}")
        return (x, y) in self.leq

    def ge(self, x: str, y: str) -> bool:
        return self.le(y, x)

    def equivalent(self, x: str, y: str) -> bool:
        return self.le(x, y) and self.le(y, x)

    def upper_set(self, v: str) -> frozenset[str]:
        """U(v) = everything >= v, including v."""
        if v not in self.elements:
            raise UnknownVertex(f"unknown element {v!r}")
        return frozenset(w for w in self.elements if self.le(v, w))

    def strict_upper_set(self, v: str) -> frozenset[str]:
        """U'(v) = U(v) minus v itself (equivalent elements stay in)."""
        return self.upper_set(v) - {v}

    def lower_set(self, v: str) -> frozenset[str]:
        if v not in self.elements:
            raise UnknownVertex(f"unknown element {v!r}")
        return frozenset(w for w in self.elements if self.le(w, v))

    def classes(self) -> list[tuple[str, ...]]:
        """Equivalence classes, each sorted, ordered by smallest member."""
        seen: set[str] = set()
        out = []
        for x in self.elements:
            if x in seen:
                continue
            cls_ = tuple(sorted(y for y in self.elements if self.equivalent(x, y)))
            seen |= set(cls_)
            out.append(cls_)
        return sorted(out, key=lambda c: c[0])

    def class_of(self, v: str) -> tuple[str, ...]:
        return tuple(sorted(w for w in self.elements if self.equivalent(v, w)))

    def is_maximal(self, v: str) -> bool:
        return all(self.le(w, v) for w in self.elements if self.le(v, w))

    def maximal_elements_of(self, subset) -> list[str]:
        subset = sorted(subset)
        return [u for u in subset
                if not any(self.le(u, w) and not self.le(w, u) for w in subset)]

    def restrict(self, subset) -> "Preorder":
        keep = set(subset)
        return Preorder.build(sorted(keep),
                              [(x, y) for (x, y) in self.leq if x in keep and y in keep])

    def is_isomorphic_to(self, other: "Preorder", mapping: dict[str, str]) -> bool:
        """Check that ``mapping`` is an isomorphism self -> other."""
        if sorted(mapping) != list(self.elements):
            return False
        if sorted(mapping.values()) != list(other.elements):
            return False
        return all(((x, y) in self.leq) == ((mapping[x], mapping[y]) in other.leq)
                   for x in self.elements for y in self.elements)

    def to_json(self):
        return {"elements": list(self.elements), "leq": sorted([x, y] for (x, y) in self.leq)}

    @classmethod
    def from_json(cls, data) -> "Preorder":
        return cls.build(data["elements"], data["leq"])


@dataclass(frozen=True)
class DominationPoset:
    """The domination preorder of a graph plus its class poset."""

    base: SimpleGraph
    relation: Preorder  # x <= y iff y dominates x
    classes: tuple[tuple[str, ...], ...]
    class_order: frozenset[tuple[int, int]]  # (i, j): classes[i] <= classes[j]

    def dominates(self, v: str, w: str) -> bool:
        return self.relation.ge(v, w)

    def upper_set(self, v: str) -> frozenset[str]:
        return self.relation.upper_set(v)

    def lower_set(self, v: str) -> frozenset[str]:
        return self.relation.lower_set(v)

    def to_dot(self) -> str:
        """Hasse diagram of the domination classes in DOT format."""
        lines = ["digraph domination {", "  rankdir=BT;"]
        names = ["{" + ",".join(c) + "}" for c in self.classes]
        for i, name in enumerate(names):
            lines.append(f'  c{i} [label="{name}"];')
        strict = {(i, j) for (i, j) in self.class_order if i != j}
        for (i, j) in sorted(strict):
            if not any((i, t) in strict and (t, j) in strict for t in range(len(self.classes))
                       if t != i and t != j):
                lines.append(f"  c{i} -> c{j};")
        lines.append("}")
        return "\n".join(lines)


def domination_poset(g: SimpleGraph) -> DominationPoset:
    pairs = [(w, v) for v in g.vertices for w in g.vertices if dominates(g, v, w)]
    rel = Preorder.build(g.vertices, pairs)
    classes = tuple(rel.classes())
    index_of = {c: i for i, c in enumerate(classes)}
    order = set()
    for ci in classes:
        for cj in classes:
            if rel.le(ci[0], cj[0]):
                order.add((index_of[ci], index_of[cj]))
    return DominationPoset(g, rel, classes, frozenset(order))


def divides_trivially(g: SimpleGraph, v: str, subset) -> bool:
    """True when W - L(v) lies in one component of the graph minus st(v)."""
    g.require_vertex(v)
    subset = set(subset)
    for w in subset:
        g.require_vertex(w)
    if v not in subset:
        raise ValueError(f"{v!r} must belong to the subset")
    lower = {w for w in g.vertices if dominates(g, v, w)}
    remainder = subset - lower
    if not remainder:
        return True
    punctured = g.induced(set(g.vertices) - g.star(v))
    comps = punctured.components()
    return any(remainder <= comp for comp in comps)


@dataclass(frozen=True)
class SubsetReport:
    """Outcome of the five subset conditions for a candidate W.

    Condition numbering follows the source pipeline: (1) W independent,
    (2) two distinct members of W dominate a third member, (3) no maximal
    domination class inside W has exactly two vertices, (4) every member
    divides W trivially, (5) W is closed under lower bounds in the whole
    graph.
    """

    subset: tuple[str, ...]
    conditions: dict[int, bool]
    witnesses: dict[int, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.conditions.values())

    def to_json(self):
        return {
            "subset": list(self.subset),
            "conditions": {str(i): bool(v) for i, v in sorted(self.conditions.items())},
            "passed": self.passed,
            "witnesses": {str(i): w for i, w in sorted(self.witnesses.items())},
        }


def check_subset(g: SimpleGraph, subset) -> SubsetReport:
    """Evaluate all five subset conditions; failures carry witnesses."""
    W = tuple(sorted(set(str(w) for w in subset)))
    for w in W:
        g.require_vertex(w)
    conditions: dict[int, bool] = {}
    witnesses: dict[int, object] = {}

    bad_edge = next((e for e in g.sorted_edges() if e[0] in W and e[1] in W), None)
    conditions[1] = bad_edge is None
    if bad_edge:
        witnesses[1] = {"edge": list(bad_edge)}

    triple = None
    for w in W:
        dominators = [v for v in W if v != w and dominates(g, v, w)]
        if len(dominators) >= 2:
            triple = {"target": w, "dominators": dominators[:2]}
            break
    conditions[2] = triple is not None
    if triple:
        witnesses[2] = triple

    restricted = domination_poset(g).relation.restrict(W) if W else None
    bad_class = None
    if restricted is not None:
        for cls_ in restricted.classes():
            if len(cls_) == 2 and all(restricted.is_maximal(x) for x in cls_):
                bad_class = list(cls_)
                break
    conditions[3] = bad_class is None
    if bad_class:
        witnesses[3] = {"class": bad_class}

    bad_divider = next((v for v in W if not divides_trivially(g, v, W)), None)
    conditions[4] = bad_divider is None
    if bad_divider:
        witnesses[4] = {"vertex": bad_divider}

    violation = None
    for v in W:
        for w in g.vertices:
            if w not in W and dominates(g, v, w):
                violation = {"inside": v, "missing_lower_bound": w}
                break
        if violation:
            break
    conditions[5] = violation is None
    if violation:
        witnesses[5] = violation

    return SubsetReport(W, conditions, witnesses)


def realize_preorder(p: Preorder) -> tuple[SimpleGraph, tuple[str, ...]]:
    """Build a graph whose domination preorder restricted to W matches p.

    One vertex ``w:x`` per element x, together with gadget vertices ``v:x``,
    ``v':x`` and ``u1, u2, u3``.  Edges: ``w:x ~ v:y`` iff x >= y in p,
    ``v:y ~ v':y``, every ``w:*`` meets u1, every ``v':*`` meets u2, and u3
    meets u1 and u2.  All vertices outside W end up pairwise incomparable,
    and W satisfies subset conditions 1, 4 and 5.
    """
    if not p.elements:
        raise ValueError("cannot realize an empty preorder")
    W = [f"w:{x}" for x in p.elements]
    V = [f"v:{x}" for x in p.elements]
    Vp = [f"v':{x}" for x in p.elements]
    U = ["u1", "u2", "u3"]
    edges = []
    for x in p.elements:
        for y in p.elements:
            if p.ge(x, y):
                edges.append((f"w:{x}", f"v:{y}"))
    for x in p.elements:
        edges.append((f"v:{x}", f"v':{x}"))
    for w in W:
        edges.append((w, "u1"))
    for vp in Vp:
        edges.append((vp, "u2"))
    edges.append(("u3", "u1"))
    edges.append(("u3", "u2"))
    graph = SimpleGraph.build(W + V + Vp + U, edges)
    return graph, tuple(sorted(W))


def find_good_subsets(g: SimpleGraph, max_size: int) -> list[tuple[str, ...]]:
    """All subsets of size <= max_size passing every subset condition.

    Exhaustive search; deliberately limited to graphs with at most 16
    vertices, which is the intended desk scale.
    """
    if len(g.vertices) > 16:
        raise ValueError("subset search is limited to graphs with at most 16 vertices")
    if max_size > len(g.vertices):
        raise ValueError("max_size exceeds the vertex count")
    found = []
    for size in range(1, max_size + 1):
        for combo in itertools.combinations(g.vertices, size):
            if check_subset(g, combo).passed:
                found.append(tuple(combo))
    return found
