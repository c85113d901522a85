"""Posets and lattices of subgraphs, building sets, nested sets.

Poset elements are canonicalized by sorted edge-index sets; every
enumeration emits sorted order so reports are stable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import GraphError, NotAtMostLogarithmic
from .graphs import (Graph, Subgraph, a_dim, contract_relative,
                     is_connected, is_saturated, omega,
                     positive_divergence_witness)


def _canonical_key(s: Subgraph):
    return (len(s.edge_set), s.sorted_edges)


@dataclass(frozen=True)
class SubgraphPoset:
    """Finite poset of subgraphs of one graph, ordered by edge inclusion.

    ``elements`` is sorted by (size, edge indices); the empty subgraph o is
    always element 0.  ``kind`` is one of divergent_lattice,
    saturated_poset, generic.
    """

    elements: tuple[Subgraph, ...]
    kind: str = "generic"

    @property
    def parent(self) -> Graph:
        return self.elements[0].parent

    def index(self, s: Subgraph) -> int:
        return self.elements.index(s)

    def __len__(self) -> int:
        return len(self.elements)

    def leq(self, x: Subgraph, y: Subgraph) -> bool:
        return x.edge_set <= y.edge_set

    def contains(self, s: Subgraph) -> bool:
        return s in set(self.elements)

    def tau(self, s: Subgraph) -> int:
        """Grading: dimension of the attached subspace divided by d."""
        dim, ad = self.parent.dim, a_dim(s)
        if ad % dim:
            raise GraphError(f"subspace dimension of {s.label()} not a "
                             f"multiple of d")
        return ad // dim

    def join(self, x: Subgraph, y: Subgraph) -> Optional[Subgraph]:
        """Least upper bound inside the poset, None if it does not exist."""
        ubs = [z for z in self.elements
               if self.leq(x, z) and self.leq(y, z)]
        mins = [z for z in ubs
                if not any(self.leq(w, z) and w != z for w in ubs)]
        return mins[0] if len(mins) == 1 else None

    def meet(self, x: Subgraph, y: Subgraph) -> Optional[Subgraph]:
        lbs = [z for z in self.elements
               if self.leq(z, x) and self.leq(z, y)]
        maxs = [z for z in lbs
                if not any(self.leq(z, w) and w != z for w in lbs)]
        return maxs[0] if len(maxs) == 1 else None

    def join_of(self, xs: Sequence[Subgraph]) -> Optional[Subgraph]:
        out = xs[0]
        for x in xs[1:]:
            out = self.join(out, x)
            if out is None:
                return None
        return out

    def covers(self) -> list[tuple[int, int]]:
        """Pairs (i, j) with elements[j] covering elements[i]."""
        els = self.elements
        out = []
        for i, x in enumerate(els):
            for j, y in enumerate(els):
                if i == j or not self.leq(x, y):
                    continue
                if not any(self.leq(x, z) and self.leq(z, y)
                           and z != x and z != y for z in els):
                    out.append((i, j))
        return out

    def atoms(self) -> tuple[Subgraph, ...]:
        """Minimal nonempty elements."""
        nonempty = [s for s in self.elements if s.edge_set]
        return tuple(s for s in nonempty
                     if not any(t.edge_set < s.edge_set for t in nonempty))

    def interval_below(self, p: Subgraph) -> list[Subgraph]:
        return [z for z in self.elements if self.leq(z, p)]


@dataclass(frozen=True)
class BuildingSet:
    base: SubgraphPoset
    members: tuple[Subgraph, ...]
    minimal: bool = False

    def __post_init__(self):
        elems = set(self.base.elements)
        for m in self.members:
            if m not in elems or not m.edge_set:
                raise GraphError("building set members must be nonempty "
                                 "poset elements")

    @property
    def is_maximal(self) -> bool:
        nonempty = tuple(s for s in self.base.elements if s.edge_set)
        return set(self.members) == set(nonempty)

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class NestedSet:
    building: BuildingSet
    members: tuple[Subgraph, ...]

    def __len__(self) -> int:
        return len(self.members)


# ---------------------------------------------------------------------------
# poset constructors
# ---------------------------------------------------------------------------

def _all_edge_subsets(graph: Graph) -> Iterable[frozenset[int]]:
    m = graph.n_edges
    if m > 22:
        raise GraphError(f"edge set too large for exhaustive scan ({m})")
    for mask in range(1 << m):
        yield frozenset(i for i in range(m) if mask >> i & 1)


def divergent_lattice(graph: Graph) -> SubgraphPoset:
    """All divergent edge subsets plus o, ordered by inclusion.

    Requires dimension > 2 (below that divergent subgraphs need not be
    saturated and the chart machinery breaks down) and a connected, at
    most logarithmic graph; join and meet are then realized by union and
    intersection.
    """
    if graph.dim <= 2:
        raise GraphError("divergent-lattice workflows need dimension > 2, "
                         f"got {graph.dim}")
    full = graph.full()
    if not is_connected(full):
        raise GraphError("divergent lattice requires a connected graph")
    witness = positive_divergence_witness(full)
    if witness is not None:
        raise NotAtMostLogarithmic(
            f"graph is not at most logarithmic: subgraph "
            f"{sorted(witness)} has positive degree of divergence",
            witness=witness)
    members = {frozenset()}
    for sub in _all_edge_subsets(graph):
        if sub and omega(Subgraph(graph, sub)) >= 0:
            members.add(sub)
    elements = tuple(sorted((Subgraph(graph, s) for s in members),
                            key=_canonical_key))
    return SubgraphPoset(elements, kind="divergent_lattice")


def saturated_poset(graph: Graph) -> SubgraphPoset:
    """All saturated subgraphs plus o, ordered by inclusion."""
    members = {frozenset()}
    for sub in _all_edge_subsets(graph):
        if is_saturated(Subgraph(graph, sub)):
            members.add(sub)
    elements = tuple(sorted((Subgraph(graph, s) for s in members),
                            key=_canonical_key))
    return SubgraphPoset(elements, kind="saturated_poset")


# ---------------------------------------------------------------------------
# lattice property report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LatticeReport:
    closed_under_union: bool
    closed_under_intersection: bool
    graded: bool
    distributive: bool
    witness: Optional[str]

    @property
    def ok(self) -> bool:
        return (self.closed_under_union and self.closed_under_intersection
                and self.graded and self.distributive)


def check_lattice_properties(poset: SubgraphPoset) -> LatticeReport:
    """Verify union/intersection closure, grading and distributivity."""
    if poset.kind != "divergent_lattice":
        raise GraphError("property check expects a divergent lattice")
    els = poset.elements
    elset = {s.edge_set for s in els}
    witness = None

    closed_u = closed_i = True
    for x, y in itertools.combinations(els, 2):
        if (x.edge_set | y.edge_set) not in elset:
            closed_u = False
            witness = witness or f"union of {x.label()} and {y.label()}"
        if (x.edge_set & y.edge_set) not in elset:
            closed_i = False
            witness = witness or f"intersection of {x.label()}, {y.label()}"

    # graded: the longest-chain rank must step by exactly one along every
    # cover (equivalently, all maximal chains between comparable elements
    # have equal length); the dimension grading tau must be monotone.
    graded = True
    try:
        taus = {s: poset.tau(s) for s in els}
    except GraphError as exc:
        graded = False
        witness = witness or str(exc)
        taus = {}
    if graded:
        for x, y in itertools.permutations(els, 2):
            if poset.leq(x, y) and taus[x] > taus[y]:
                graded = False
                witness = witness or f"tau not monotone at {x.label()}"
                break
    if graded:
        covers = poset.covers()
        rank = {0: 0}
        pending = [i for i in range(1, len(els))]
        while pending:
            progressed = False
            for i in list(pending):
                below = [a for a, b in covers if b == i]
                if all(a in rank for a in below):
                    rank[i] = max(rank[a] for a in below) + 1 if below else 0
                    pending.remove(i)
                    progressed = True
            if not progressed:
                break
        for i, j in covers:
            if rank[j] != rank[i] + 1:
                graded = False
                witness = witness or (f"maximal chains through "
                                      f"{els[j].label()} differ in length")
                break

    distributive = True
    for f, g, h in itertools.product(els, repeat=3):
        lhs = f.edge_set | (g.edge_set & h.edge_set)
        rhs = (f.edge_set | g.edge_set) & (f.edge_set | h.edge_set)
        lhs2 = f.edge_set & (g.edge_set | h.edge_set)
        rhs2 = (f.edge_set & g.edge_set) | (f.edge_set & h.edge_set)
        if lhs != rhs or lhs2 != rhs2:
            distributive = False
            witness = witness or (f"distributivity fails at {f.label()}, "
                                  f"{g.label()}, {h.label()}")
            break

    return LatticeReport(closed_u, closed_i, graded, distributive, witness)


# ---------------------------------------------------------------------------
# building sets
# ---------------------------------------------------------------------------

def _interval_product_iso(poset: SubgraphPoset, p: Subgraph,
                          factors: Sequence[Subgraph]) -> bool:
    """Check that componentwise join maps prod of [o, q_i] isomorphically
    onto [o, p]."""
    target = poset.interval_below(p)
    intervals = [poset.interval_below(q) for q in factors]
    size = 1
    for iv in intervals:
        size *= len(iv)
    if size != len(target):
        return False
    target_set = set(target)
    seen = set()
    images: dict[tuple[Subgraph, ...], Subgraph] = {}
    for combo in itertools.product(*intervals):
        img = poset.join_of(list(combo))
        if img is None or img not in target_set or img in seen:
            return False
        seen.add(img)
        images[combo] = img
    # order must be reflected, not just preserved
    for a, b in itertools.combinations(images, 2):
        a_le_b = all(poset.leq(x, y) for x, y in zip(a, b))
        b_le_a = all(poset.leq(y, x) for x, y in zip(a, b))
        img_le = poset.leq(images[a], images[b])
        img_ge = poset.leq(images[b], images[a])
        if a_le_b != img_le or b_le_a != img_ge:
            return False
    return True


def validate_building_set(members: Sequence[Subgraph],
                          poset: SubgraphPoset) -> bool:
    """Combinatorial interval-product condition plus additive dimensions."""
    mem = [m for m in members if m.edge_set]
    if len(mem) != len(members):
        return False
    elems = set(poset.elements)
    if any(m not in elems for m in mem):
        return False
    for p in poset.elements:
        if not p.edge_set:
            continue
        below = [q for q in mem if poset.leq(q, p)]
        factors = [q for q in below
                   if not any(poset.leq(q, r) and q != r for r in below)]
        if not factors:
            return False
        if a_dim(p) != sum(a_dim(q) for q in factors):
            return False
        if not _interval_product_iso(poset, p, factors):
            return False
    return True


def irreducibles(poset: SubgraphPoset) -> BuildingSet:
    """Minimal building set, computed bottom-up by grading.

    An element is reducible iff the attached-subspace dimensions of the
    maximal already-known irreducibles below it add up to its own and the
    canonical interval-product map is an isomorphism; atoms are always
    irreducible.
    """
    irr: list[Subgraph] = []
    for g in sorted((s for s in poset.elements if s.edge_set),
                    key=lambda s: (a_dim(s),) + _canonical_key(s)):
        below = [q for q in irr if q.edge_set < g.edge_set]
        factors = [q for q in below
                   if not any(q.edge_set < r.edge_set for r in below)]
        if factors and a_dim(g) == sum(a_dim(q) for q in factors) \
                and _interval_product_iso(poset, g, factors):
            continue
        irr.append(g)
    members = tuple(sorted(irr, key=_canonical_key))
    return BuildingSet(poset, members, minimal=True)


def maximal_building_set(poset: SubgraphPoset) -> BuildingSet:
    members = tuple(s for s in poset.elements if s.edge_set)
    return BuildingSet(poset, members, minimal=False)


# ---------------------------------------------------------------------------
# nested sets
# ---------------------------------------------------------------------------

def _antichain_join_ok(building: BuildingSet,
                       subset: Sequence[Subgraph]) -> bool:
    """No antichain of size >= 2 may join into the building set."""
    poset = building.base
    members = set(building.members)
    n = len(subset)
    for r in range(2, n + 1):
        for combo in itertools.combinations(subset, r):
            if any(poset.leq(a, b) or poset.leq(b, a)
                   for a, b in itertools.combinations(combo, 2)):
                continue
            j = poset.join_of(list(combo))
            if j is None or j in members:
                return False
    return True


def is_nested(building: BuildingSet, subset: Sequence[Subgraph]) -> bool:
    return _antichain_join_ok(building, list(subset))


def enumerate_nested_sets(building: BuildingSet) -> list[NestedSet]:
    """All nonempty nested subsets of the building set, sorted by size then
    member order.  Nestedness is hereditary, so subsets are grown element
    by element."""
    members = sorted(building.members, key=_canonical_key)
    found: list[tuple[Subgraph, ...]] = []

    def grow(prefix: list[Subgraph], start: int) -> None:
        for i in range(start, len(members)):
            cand = prefix + [members[i]]
            if _antichain_join_ok(building, cand):
                found.append(tuple(cand))
                grow(cand, i + 1)

    grow([], 0)
    found.sort(key=lambda t: (len(t), tuple(_canonical_key(s) for s in t)))
    return [NestedSet(building, t) for t in found]


@dataclass(frozen=True)
class NestedCardinalityReport:
    max_cardinality: int
    maximal_sizes: tuple[int, ...]
    all_maximal_equal: bool


def max_nested_cardinality(building: BuildingSet) -> NestedCardinalityReport:
    """Largest nested set; for the maximal building set also checks that
    every inclusion-maximal nested set (= maximal chain) has that size."""
    if building.is_maximal:
        sizes = _maximal_chain_sizes(building)
    else:
        nested = enumerate_nested_sets(building)
        sets = [frozenset(n.members) for n in nested]
        sizes = tuple(sorted(len(s) for s in sets
                             if not any(s < t for t in sets)))
    report = NestedCardinalityReport(
        max_cardinality=max(sizes) if sizes else 0,
        maximal_sizes=sizes,
        all_maximal_equal=len(set(sizes)) <= 1,
    )
    if building.is_maximal and not report.all_maximal_equal:
        raise GraphError("maximal nested sets of the maximal building set "
                         f"differ in size: {sizes}")
    return report


def _maximal_chain_sizes(building: BuildingSet) -> tuple[int, ...]:
    """Sizes of all maximal chains in the building set (nested sets of the
    maximal building set are exactly the chains)."""
    members = sorted(building.members, key=_canonical_key)
    ups = {m: [u for u in members if m.edge_set < u.edge_set]
           for m in members}
    minimal = [m for m in members
               if not any(m.edge_set > u.edge_set for u in members)]
    sizes: list[int] = []

    def walk(node: Subgraph, depth: int) -> None:
        succ = [u for u in ups[node]
                if not any(v.edge_set < u.edge_set for v in ups[node])]
        if not succ:
            sizes.append(depth)
            return
        for u in succ:
            walk(u, depth + 1)

    for m in minimal:
        walk(m, 1)
    return tuple(sorted(sizes))


# ---------------------------------------------------------------------------
# contraction of nested posets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ContractedNestedPoset:
    """Poset of relative contractions g // J for g in a nested set.

    Index 0 is the empty graph o.  The order is derived from the Hasse
    diagram of the nested set: lines rising out of members of J are cut and
    orphaned elements are reattached to o.
    """

    source: tuple[Subgraph, ...]
    graphs: tuple[Optional[Graph], ...]
    leq_pairs: frozenset[tuple[int, int]]

    def leq(self, i: int, j: int) -> bool:
        return (i, j) in self.leq_pairs

    def maximal_indices(self) -> tuple[int, ...]:
        n = len(self.source)
        return tuple(i for i in range(n)
                     if not any(self.leq(i, j) for j in range(n) if j != i))


def contract_nested_poset(nested: NestedSet,
                          sub: Sequence[Subgraph]) -> ContractedNestedPoset:
    """Contract every member of the nested set relative to J = sub."""
    members = sorted(nested.members, key=_canonical_key)
    jset = {s.edge_set for s in sub}
    if not jset <= {m.edge_set for m in members}:
        raise GraphError("J must be a subset of the nested set")
    parent = nested.building.base.parent
    o = parent.empty()
    nodes = [o] + members
    n = len(nodes)

    def node_leq(a: Subgraph, b: Subgraph) -> bool:
        return a.edge_set <= b.edge_set

    covers = []
    for i, x in enumerate(nodes):
        for j, y in enumerate(nodes):
            if i == j or not node_leq(x, y) or x.edge_set == y.edge_set:
                continue
            if not any(node_leq(x, z) and node_leq(z, y)
                       and z.edge_set not in (x.edge_set, y.edge_set)
                       for z in nodes):
                covers.append((i, j))
    kept = [(i, j) for (i, j) in covers if nodes[i].edge_set not in jset]
    succ: dict[int, set[int]] = {i: set() for i in range(n)}
    for i, j in kept:
        succ[i].add(j)
    reach_from_o = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for v in frontier:
            for w in succ[v]:
                if w not in reach_from_o:
                    reach_from_o.add(w)
                    nxt.append(w)
        frontier = nxt
    for i in range(1, n):
        if i not in reach_from_o:
            succ[0].add(i)
    pairs = set()
    for i in range(n):
        seen = {i}
        stack = [i]
        while stack:
            v = stack.pop()
            for w in succ[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        pairs |= {(i, j) for j in seen}
    graphs: list[Optional[Graph]] = [None]
    for m in members:
        graphs.append(contract_relative(m, list(sub)))
    return ContractedNestedPoset(tuple(nodes), tuple(graphs),
                                 frozenset(pairs))
