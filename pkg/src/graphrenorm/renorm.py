"""Renormalized pairings, periods, pole structure, RG and locality checks.

Everything numerical happens in a single chart: the chart covers the model
up to a set of measure zero, so pairings against test functions supported
in one chart are computed exactly by integrating there.  A renormalized
pairing is the alternating sum over subsets K of the nested set,

    sum_K (-1)^|K| int u_N nu_K delta_K[f^s (psi o rho)] dx,

where delta_K zeroes the marked coordinates of K inside f and the test
factor (integrand surgery), and nu_K is the product of the member cutoffs
evaluated at the unmodified point.  All 2^|N| counterterms are evaluated
on the same samples, which cancels the variance of the subtracted
combination.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .bump import BumpSpec
from .charts import Chart, ChartKernel, adapted_basis, chart_for
from .errors import GraphError, NotPrimitiveError
from .graphs import (Graph, SpanningTree, Subgraph, a_dim, classify,
                     contract_mapped, is_connected, is_spanning_forest_of)
from .lattice import (BuildingSet, divergent_lattice, enumerate_nested_sets,
                      irreducibles, max_nested_cardinality)
from .mc import (MCEstimate, MCParams, exact_estimate, mc_integrate,
                 mc_product, mc_scale, mc_sum, substream_seed)

NuLike = Union[BumpSpec, Callable]


# ---------------------------------------------------------------------------
# member cutoffs and test functions
# ---------------------------------------------------------------------------

def member_coordinates(kern: ChartKernel, k: int) -> tuple[int, list[int]]:
    """Marked index and remaining own coordinate indices of member k.

    Own coordinates are those of tree edges in the member but in none of
    its lower nested members.
    """
    chart = kern.chart
    g = chart.nested[k]
    lower: set[int] = set()
    for h in chart.nested:
        if h.edge_set < g.edge_set:
            lower |= h.edge_set
    own_edges = sorted(e for e in chart.basis.tree.edge_set & g.edge_set
                       if e not in lower)
    marked = kern.marked[k]
    own = [kern.block[e] + i for e in own_edges for i in range(kern.d)]
    own.remove(marked)
    return marked, own


def nu_callables(kern: ChartKernel,
                 nu: Union[dict, Sequence[NuLike]]) -> list[Callable]:
    """Normalize cutoff specs to vectorized callables, one per member."""
    chart = kern.chart
    if isinstance(nu, dict):
        specs = [nu[g] for g in chart.nested]
    else:
        specs = list(nu)
    if len(specs) != len(chart.nested):
        raise GraphError("need one cutoff per nested member")
    fns = []
    for k, spec in enumerate(specs):
        if isinstance(spec, BumpSpec):
            m_idx, own_idx = member_coordinates(kern, k)

            def fn(x, m_idx=m_idx, own_idx=own_idx, spec=spec):
                return spec.nu_values(x[:, m_idx], x[:, own_idx])
        elif callable(spec):
            def fn(x, k=k, spec=spec):
                return spec(x, kern, k)
        else:
            raise GraphError("cutoff must be a BumpSpec or callable")
        fns.append(fn)
    return fns


def sharp_cutoffs(kern: ChartKernel, c0: float) -> list[Callable]:
    """Minimal-subtraction cutoffs theta(c0 - |x_g|) in the marked slots."""
    if c0 <= 0:
        raise GraphError("cutoff must be positive")
    fns = []
    for k in range(len(kern.members)):
        def fn(x, _kern=None, _idx=None, k=k):
            return (np.abs(x[:, kern.marked[k]]) <= c0).astype(float)
        fns.append(fn)
    return fns


def pullback_test(psi: Union[BumpSpec, Callable]) -> Callable:
    """Test factor psi composed with the blow-down."""
    def test(xz: np.ndarray, kern: ChartKernel) -> np.ndarray:
        y = kern.rho(xz)
        if hasattr(psi, "test_values"):
            return psi.test_values(y)
        return psi(y)
    return test


def direct_test(fn: Callable) -> Callable:
    """Test factor given directly in chart coordinates."""
    def test(xz: np.ndarray, kern: ChartKernel) -> np.ndarray:
        return fn(xz)
    return test


def _check_holomorphy(kern: ChartKernel, s: float) -> None:
    for g in kern.members:
        expo = -1.0 + a_dim(g) * (1.0 - s)
        if not (-2.0 < expo < 0.0):
            raise GraphError(f"s = {s} outside the holomorphy region for "
                             f"{g.label()}")


def _mc_powers(kern: ChartKernel, stretch: int) -> list[int]:
    powers = [stretch] * kern.n_coords
    for idx in kern.marked:
        powers[idx] = 1
    return powers


def renormalized_integrand(kern: ChartKernel,
                           nu: Union[dict, Sequence[NuLike]],
                           test: Callable, s: float = 1.0) -> Callable:
    """Per-sample integrand of the renormalized pairing (all counterterms
    evaluated on the same points)."""
    _check_holomorphy(kern, s)
    nu_fns = nu_callables(kern, nu)
    n = len(kern.members)
    subsets = [tuple(c) for r in range(n + 1)
               for c in itertools.combinations(range(n), r)]

    def integrand(x: np.ndarray) -> np.ndarray:
        total = np.zeros(len(x))
        for K in subsets:
            if K:
                xz = x.copy()
                for k in K:
                    xz[:, kern.marked[k]] = 0.0
            else:
                xz = x
            term = kern.f(xz, s) * test(xz, kern)
            for k in K:
                term = term * nu_fns[k](x)
            total += (-1.0) ** len(K) * term
        return total * kern.u(x, s)

    return integrand


def pair_renormalized(kern: ChartKernel, nu: Union[dict, Sequence[NuLike]],
                      test: Callable, s: float = 1.0,
                      mc: MCParams = MCParams(),
                      trace: Optional[list] = None) -> MCEstimate:
    """Monte Carlo value of the renormalized pairing <R_nu[w^s] | test>."""
    integrand = renormalized_integrand(kern, nu, test, s)
    return mc_integrate(integrand, kern.n_coords, mc,
                        powers=_mc_powers(kern, mc.stretch), trace=trace)


def renormalize_fixed(chart: Chart, nu: Union[dict, Sequence[NuLike]],
                      psi: Union[BumpSpec, Callable], s: float = 1.0,
                      mc: MCParams = MCParams(),
                      trace: Optional[list] = None) -> MCEstimate:
    """Subtraction at fixed conditions, paired against psi o rho."""
    return pair_renormalized(ChartKernel(chart), nu, pullback_test(psi), s,
                             mc, trace=trace)


def renormalize_ms(chart: Chart, cutoff: float,
                   psi: Union[BumpSpec, Callable], s: float = 1.0,
                   mc: MCParams = MCParams(),
                   trace: Optional[list] = None) -> MCEstimate:
    """Minimal subtraction with sharp marked-coordinate cutoffs."""
    kern = ChartKernel(chart)
    return pair_renormalized(kern, sharp_cutoffs(kern, cutoff),
                             pullback_test(psi), s, mc, trace=trace)


def ms_cutoff_difference(chart: Chart, c_small: float, c_large: float,
                         psi: Union[BumpSpec, Callable], s: float = 1.0,
                         mc: MCParams = MCParams()) -> MCEstimate:
    """Single-pass estimate of (R_{c_large} - R_{c_small}) applied to psi.

    The difference of the two cutoff products is supported on the shell
    c_small < |x_gamma| < c_large in every marked coordinate of K.
    """
    if not (0 < c_small < c_large):
        raise GraphError("need 0 < c_small < c_large")
    kern = ChartKernel(chart)
    _check_holomorphy(kern, s)
    test = pullback_test(psi)
    n = len(kern.members)
    subsets = [tuple(c) for r in range(1, n + 1)
               for c in itertools.combinations(range(n), r)]

    def integrand(x: np.ndarray) -> np.ndarray:
        total = np.zeros(len(x))
        for K in subsets:
            xz = x.copy()
            for k in K:
                xz[:, kern.marked[k]] = 0.0
            term = kern.f(xz, s) * test(xz, kern)
            big = np.ones(len(x))
            small = np.ones(len(x))
            for k in K:
                m = np.abs(x[:, kern.marked[k]])
                big = big * (m <= c_large)
                small = small * (m <= c_small)
            total += (-1.0) ** len(K) * term * (big - small)
        return total * kern.u(x, s)

    return mc_integrate(integrand, kern.n_coords, mc,
                        powers=_mc_powers(kern, mc.stretch))


# ---------------------------------------------------------------------------
# periods and the leading Laurent coefficient
# ---------------------------------------------------------------------------

def period(graph: Graph, mc: MCParams = MCParams(),
           marking: Optional[tuple[int, int]] = None,
           trace: Optional[list] = None) -> MCEstimate:
    """-(2/d_G) times the kernel integral over one induced divisor chart.

    Defined for primitive divergent graphs only.  The integral runs over
    the chart coordinates with the marked slot frozen; the kernel does not
    depend on it.
    """
    full = graph.full()
    rep = classify(full)
    if not (rep.divergent and rep.primitive):
        raise NotPrimitiveError(
            "period is defined for primitive divergent graphs only")
    if not is_connected(full):
        raise GraphError("period needs a connected graph")
    building = irreducibles(divergent_lattice(graph))
    chart = chart_for(building, [full],
                      [marking] if marking is not None else None)
    kern = ChartKernel(chart)
    m_idx = kern.marked[0]
    rest = [i for i in range(kern.n_coords) if i != m_idx]
    ndim = len(rest)
    stretch = max(mc.stretch, ndim // 2 + 1)

    def integrand(z: np.ndarray) -> np.ndarray:
        x = np.zeros((len(z), kern.n_coords))
        x[:, rest] = z
        return kern.f(x, 1.0)

    est = mc_integrate(integrand, ndim, mc, powers=[stretch] * ndim,
                       trace=trace)
    return mc_scale(est, -2.0 / a_dim(full))


@dataclass(frozen=True)
class LaurentProfile:
    """Pole order and the nested sets labeling each principal-part
    stratum; optionally the leading coefficient estimate."""

    pole_order: int
    strata: tuple[tuple[int, tuple[tuple[str, ...], ...]], ...]
    leading: Optional[MCEstimate] = None

    def support(self, k: int) -> tuple[tuple[str, ...], ...]:
        return dict(self.strata).get(k, ())


def pole_profile(graph: Graph, building: BuildingSet,
                 leading: Optional[MCEstimate] = None) -> LaurentProfile:
    """Pole order = largest nested set; order -k is supported on the
    intersections of divisor components labeled by k-element nested sets."""
    nested = enumerate_nested_sets(building)
    order = max_nested_cardinality(building).max_cardinality
    strata = []
    for k in range(1, order + 1):
        labels = tuple(tuple(m.label() for m in ns.members)
                       for ns in nested if len(ns.members) == k)
        strata.append((-k, labels))
    return LaurentProfile(order, tuple(strata), leading)


def leading_coefficient(graph: Graph, mc: MCParams = MCParams(),
                        ) -> MCEstimate:
    """Sum over maximal minimal-building-set nested sets of the product of
    periods of the relatively contracted members."""
    full = graph.full()
    lattice = divergent_lattice(graph)
    building = irreducibles(lattice)
    if full not in set(building.members):
        raise GraphError("leading coefficient needs the whole graph to be "
                         "irreducible")
    nested = enumerate_nested_sets(building)
    top = max(len(ns.members) for ns in nested)
    parts = []
    for ns in [n for n in nested if len(n.members) == top]:
        ns_label = ",".join(m.label() for m in ns.members)
        factors = []
        for gamma in ns.members:
            contracted, _ = _relative_contraction(gamma, list(ns.members))
            rep = classify(contracted.full())
            if not (rep.divergent and rep.primitive):
                raise GraphError(
                    f"contraction of {gamma.label()} relative to the "
                    f"maximal nested set is not primitive")
            seed = substream_seed(mc.seed,
                                  f"lead:{ns_label}:{gamma.label()}")
            factors.append(period(contracted, mc.with_seed(seed)))
        prod = factors[0]
        for f in factors[1:]:
            prod = mc_product(prod, f)
        parts.append(prod)
    return mc_sum(parts)


def _relative_contraction(g: Subgraph, family: Sequence[Subgraph],
                          ) -> tuple[Graph, dict[int, int]]:
    from .graphs import contract_relative_mapped
    return contract_relative_mapped(g, family)


# ---------------------------------------------------------------------------
# contracted charts for the RG formula
# ---------------------------------------------------------------------------

def _members_below_set(members: Sequence[Subgraph],
                       k_idx: Sequence[int]) -> set[int]:
    """Indices of members strictly below some member of K."""
    out = set()
    for j, m in enumerate(members):
        if j in k_idx:
            continue
        if any(m.edge_set < members[i].edge_set for i in k_idx):
            out.add(j)
    return out


def _restrict_chart(chart: Chart, base: Subgraph, contract_edges: set[int],
                    keep: list[int]) -> tuple[Chart, dict[int, int]]:
    """Chart for base with ``contract_edges`` contracted, keeping the listed
    member indices (plus, when base is a proper subgraph, base itself as the
    top member).  Returns the chart and the parent->child edge map."""
    graph = chart.graph
    sub_contract = Subgraph(graph, frozenset(contract_edges))
    g2, emap = contract_mapped(base, sub_contract)
    tree2 = frozenset(emap[e] for e in chart.basis.tree.edge_set
                      if e in emap)
    tree = SpanningTree(g2, tree2)
    if not is_spanning_forest_of(tree2, g2.full()):
        raise GraphError("contracted tree fails to span")
    members2: list[Subgraph] = []
    marks2: list[tuple[int, int]] = []
    for j in keep:
        m = chart.nested[j]
        image = frozenset(emap[e] for e in m.edge_set if e in emap)
        e, i = chart.marks[j]
        members2.append(Subgraph(g2, image))
        marks2.append((emap[e], i))
    order = sorted(range(len(members2)),
                   key=lambda t: (len(members2[t].edge_set),
                                  members2[t].sorted_edges))
    chart2 = Chart(tuple(members2[t] for t in order),
                   adapted_basis(tree),
                   tuple(marks2[t] for t in order))
    return chart2, emap


def contract_chart_remainder(chart: Chart, k_idx: Sequence[int],
                             ) -> tuple[Chart, dict[int, int]]:
    """Chart of the whole graph contracted by the members of K, carrying
    the nested members that are not below K."""
    members = chart.nested
    below = _members_below_set(members, k_idx)
    keep = [j for j in range(len(members))
            if j not in k_idx and j not in below]
    contract_edges: set[int] = set()
    for i in k_idx:
        contract_edges |= members[i].edge_set
    return _restrict_chart(chart, chart.graph.full(), contract_edges, keep)


def contract_chart_member(chart: Chart, k_idx: Sequence[int],
                          gamma_idx: int) -> tuple[Chart, dict[int, int]]:
    """Chart of gamma // K carrying the members whose contraction sits
    strictly below gamma // K (the index set H_gamma plus gamma itself)."""
    members = chart.nested
    gamma = members[gamma_idx]
    contract_edges: set[int] = set()
    for i in k_idx:
        if members[i].edge_set < gamma.edge_set:
            contract_edges |= members[i].edge_set
    h_gamma = []
    for j, m in enumerate(members):
        if j in k_idx or not m.edge_set < gamma.edge_set:
            continue
        blocked = any(i in k_idx
                      and m.edge_set < members[i].edge_set
                      and members[i].edge_set < gamma.edge_set
                      for i in range(len(members)))
        if not blocked:
            h_gamma.append(j)
    chart2, emap = _restrict_chart(chart, gamma, contract_edges,
                                   h_gamma + [gamma_idx])
    return chart2, emap


def _embedding(chart: Chart, emap: dict[int, int],
               child: Chart) -> Callable[[np.ndarray], np.ndarray]:
    """Map child blow-down images into parent tree coordinates, zero on the
    contracted blocks."""
    d = chart.dim
    parent_edges = sorted(chart.basis.tree.edge_set)
    child_edges = sorted(child.basis.tree.edge_set)
    child_pos = {e: i * d for i, e in enumerate(child_edges)}
    slots = []
    for pi, e in enumerate(parent_edges):
        if e in emap and emap[e] in child_pos:
            slots.append((pi * d, child_pos[emap[e]]))

    def embed(y2: np.ndarray) -> np.ndarray:
        y = np.zeros((len(y2), len(parent_edges) * d))
        for ppos, cpos in slots:
            y[:, ppos:ppos + d] = y2[:, cpos:cpos + d]
        return y

    return embed


# ---------------------------------------------------------------------------
# renormalization-group check
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RGTerm:
    subset: tuple[str, ...]
    sign: int
    coefficient: MCEstimate
    pairing: MCEstimate


@dataclass(frozen=True)
class RGReport:
    lhs: MCEstimate
    rhs: MCEstimate
    terms: tuple[RGTerm, ...]
    n_sigma: float

    @property
    def difference(self) -> float:
        return self.lhs.value - self.rhs.value

    @property
    def combined_stderr(self) -> float:
        return math.hypot(self.lhs.stderr, self.rhs.stderr)

    @property
    def passed(self) -> bool:
        return abs(self.difference) <= self.n_sigma * self.combined_stderr


def _nu_for_chart(parent_chart: Chart, parent_nu: dict,
                  child: Chart, emap: dict[int, int],
                  sources: dict[Subgraph, Subgraph]) -> dict:
    """Carry the member cutoff specs over to a contracted chart."""
    out = {}
    for m in child.nested:
        out[m] = parent_nu[sources[m]]
    return out


def rg_check(chart: Chart, nu: dict, nu_prime: dict,
             psi: Union[BumpSpec, Callable], mc: MCParams = MCParams(),
             mc_factors: Optional[MCParams] = None,
             n_sigma: float = 3.0) -> RGReport:
    """Compare a change of renormalization points against the sum of
    contracted-graph counterterms.

    The left side evaluates both fixed-condition renormalizations on the
    same samples and keeps only the surviving counterterms.  The right
    side is the sum over nonempty subsets K of the nested set of
    (-1)^|K| c_K <R_nu[w_{G//K}] | delta_K[psi o rho]>, where each factor
    of c_K pairs the renormalized contracted member against its new
    cutoff; the index sets follow the contracted nested poset.
    """
    kern = ChartKernel(chart)
    if mc_factors is None:
        mc_factors = mc
    nu_fns = nu_callables(kern, [nu[g] for g in chart.nested])
    nup_fns = nu_callables(kern, [nu_prime[g] for g in chart.nested])
    test = pullback_test(psi)
    members = chart.nested
    n = len(members)
    subsets = [tuple(c) for r in range(1, n + 1)
               for c in itertools.combinations(range(n), r)]

    def lhs_integrand(x: np.ndarray) -> np.ndarray:
        total = np.zeros(len(x))
        for K in subsets:
            xz = x.copy()
            for k in K:
                xz[:, kern.marked[k]] = 0.0
            base = kern.f(xz, 1.0) * test(xz, kern)
            new = np.ones(len(x))
            old = np.ones(len(x))
            for k in K:
                new = new * nup_fns[k](x)
                old = old * nu_fns[k](x)
            total += (-1.0) ** len(K) * base * (new - old)
        return total * kern.u(x, 1.0)

    lhs = mc_integrate(lhs_integrand, kern.n_coords, mc,
                       powers=_mc_powers(kern, mc.stretch))

    full_edge_set = chart.graph.full().edge_set
    terms = []
    for K in subsets:
        k_label = tuple(members[i].label() for i in K)
        coeff: Optional[MCEstimate] = None
        for gamma_idx in K:
            child, emap = contract_chart_member(chart, K, gamma_idx)
            sources = _chart_sources(chart, K, child, emap,
                                     keep="member", gamma_idx=gamma_idx)
            child_kern = ChartKernel(child)
            child_nu = {m: nu[sources[m]] for m in child.nested}
            top = child.graph.full()
            top_spec = nu_prime[members[gamma_idx]]
            k_top = child.nested.index(top)
            m_idx, own_idx = member_coordinates(child_kern, k_top)

            def test_nu(x, m_idx=m_idx, own_idx=own_idx, spec=top_spec):
                return spec.nu_values(x[:, m_idx], x[:, own_idx])

            seed = substream_seed(mc.seed,
                                  f"rg:c:{k_label}:{gamma_idx}")
            factor = pair_renormalized(
                child_kern, child_nu, direct_test(test_nu), 1.0,
                mc_factors.with_seed(seed))
            coeff = factor if coeff is None else mc_product(coeff, factor)
        if any(members[i].edge_set == full_edge_set for i in K):
            k_parent = kern.n_coords
            if hasattr(psi, "value_at_origin"):
                pairing = exact_estimate(psi.value_at_origin(k_parent))
            else:
                pairing = exact_estimate(
                    float(np.asarray(psi(np.zeros((1, k_parent))))[0]))
        else:
            child, emap = contract_chart_remainder(chart, K)
            sources = _chart_sources(chart, K, child, emap, keep="remainder")
            child_kern = ChartKernel(child)
            child_nu = {m: nu[sources[m]] for m in child.nested}
            embed = _embedding(chart, emap, child)

            def test_embedded(xz, kern2, embed=embed):
                y = embed(kern2.rho(xz))
                if hasattr(psi, "test_values"):
                    return psi.test_values(y)
                return psi(y)

            seed = substream_seed(mc.seed, f"rg:T:{k_label}")
            pairing = pair_renormalized(
                child_kern, child_nu, test_embedded, 1.0,
                mc_factors.with_seed(seed))
        terms.append(RGTerm(k_label, (-1) ** len(K), coeff, pairing))

    rhs = mc_sum([mc_product(t.coefficient, t.pairing) for t in terms],
                 [t.sign for t in terms])
    return RGReport(lhs, rhs, tuple(terms), n_sigma)


def _chart_sources(chart: Chart, k_idx: Sequence[int], child: Chart,
                   emap: dict[int, int], keep: str,
                   gamma_idx: Optional[int] = None,
                   ) -> dict[Subgraph, Subgraph]:
    """Match contracted chart members back to their parent members."""
    sources = {}
    for m in child.nested:
        found = None
        for j, parent_m in enumerate(chart.nested):
            image = frozenset(emap[e] for e in parent_m.edge_set
                              if e in emap)
            if image == m.edge_set:
                if keep == "member" and gamma_idx is not None \
                        and j == gamma_idx:
                    found = parent_m
                    break
                if found is None:
                    found = parent_m
        if found is None:
            raise GraphError("could not match contracted member")
        sources[m] = found
    return sources


# ---------------------------------------------------------------------------
# locality
# ---------------------------------------------------------------------------

def _divergent_poset_of(sub: Subgraph):
    """Divergent edge subsets of one subgraph plus o, as a generic poset."""
    from .lattice import SubgraphPoset
    parent = sub.parent
    edges = sorted(sub.edge_set)
    members = {frozenset()}
    for r in range(1, len(edges) + 1):
        for combo in itertools.combinations(edges, r):
            cand = Subgraph(parent, frozenset(combo))
            from .graphs import omega
            if omega(cand) >= 0:
                members.add(frozenset(combo))
    elements = tuple(sorted((Subgraph(parent, m) for m in members),
                            key=lambda s: (len(s.edge_set), s.sorted_edges)))
    return SubgraphPoset(elements, kind="generic")


@dataclass(frozen=True)
class LocalityNumeric:
    lhs: MCEstimate
    rhs: MCEstimate
    n_sigma: float
    skipped: Optional[str] = None

    @property
    def passed(self) -> Optional[bool]:
        if self.skipped:
            return None
        tol = self.n_sigma * math.hypot(self.lhs.stderr, self.rhs.stderr)
        return abs(self.lhs.value - self.rhs.value) <= tol


@dataclass(frozen=True)
class LocalityReport:
    irreducibles_split: bool
    nested_sets_split: bool
    detail: Optional[str]
    numeric: Optional[LocalityNumeric] = None

    @property
    def combinatorial_ok(self) -> bool:
        return self.irreducibles_split and self.nested_sets_split


def locality_check(graph: Graph, g: Subgraph, h: Subgraph,
                   numerical: bool = False,
                   psi: Optional[BumpSpec] = None,
                   nu: Optional[dict] = None,
                   mc: MCParams = MCParams(),
                   mc_rhs: Optional[MCParams] = None,
                   inner_samples: int = 16,
                   n_sigma: float = 3.0) -> LocalityReport:
    """Nested sets of the union of two disjoint divergent subgraphs must
    split as disjoint unions of per-factor nested sets; optionally the
    renormalized pairing is checked to factorize accordingly.
    """
    from .graphs import is_connected as _conn, omega as _omega, \
        touched_vertices
    for name, s in (("g", g), ("h", h)):
        if not s.edge_set:
            raise GraphError(f"{name} must be nonempty")
        if not _conn(s):
            raise GraphError(f"{name} must be connected")
        if _omega(s) < 0:
            raise GraphError(f"{name} must be divergent")
    if g.edge_set & h.edge_set or touched_vertices(g) & touched_vertices(h):
        raise GraphError("subgraphs must be disjoint")

    union = g.union(h)
    poset_u = _divergent_poset_of(union)
    poset_g = _divergent_poset_of(g)
    poset_h = _divergent_poset_of(h)
    irr_u = set(irreducibles(poset_u).members)
    irr_g = set(irreducibles(poset_g).members)
    irr_h = set(irreducibles(poset_h).members)
    irr_split = irr_u == irr_g | irr_h
    detail = None
    if not irr_split:
        detail = "irreducibles of the union do not split"

    nested_split = False
    if irr_split:
        b_u = irreducibles(poset_u)
        b_g = irreducibles(poset_g)
        b_h = irreducibles(poset_h)
        all_u = {frozenset(n.members)
                 for n in enumerate_nested_sets(b_u)}
        parts_g = [frozenset(n.members)
                   for n in enumerate_nested_sets(b_g)] + [frozenset()]
        parts_h = [frozenset(n.members)
                   for n in enumerate_nested_sets(b_h)] + [frozenset()]
        combined = {a | b for a in parts_g for b in parts_h if a or b}
        nested_split = all_u == combined
        if not nested_split:
            detail = "nested sets of the union are not unions of factor " \
                     "nested sets"

    numeric = None
    if numerical:
        numeric = _locality_numeric(graph, g, h, psi, nu, mc,
                                    mc_rhs or mc, inner_samples, n_sigma)
    return LocalityReport(irr_split, nested_split, detail, numeric)


def _default_locality_psi(n_coords: int, d: int):
    from .bump import ShellSpec
    return ShellSpec(mid=3.0, width=2.0)


def _locality_numeric(graph: Graph, g: Subgraph, h: Subgraph,
                      psi: Optional[BumpSpec], nu: Optional[dict],
                      mc: MCParams, mc_rhs: MCParams, inner_samples: int,
                      n_sigma: float) -> LocalityNumeric:
    """Joint-chart pairing versus the tensor-factorized evaluation.

    The right side integrates over the two factor charts and replaces the
    cross-edge factor by an inner Monte Carlo over the remaining tree
    coordinates, per outer batch.
    """
    from .mc import sample_coordinates, _batch_generator
    building = irreducibles(divergent_lattice(graph))
    mem = set(building.members)
    if g not in mem or h not in mem:
        raise GraphError("both subgraphs must be irreducible members")
    chart = chart_for(building, [g, h])
    kern = ChartKernel(chart)
    if psi is None:
        psi = _default_locality_psi(kern.n_coords, kern.d)
    if nu is None:
        nu = {g: BumpSpec(1.0, kind="subtraction_nu"),
              h: BumpSpec(1.0, kind="subtraction_nu")}

    lhs = pair_renormalized(kern, nu, pullback_test(psi), 1.0, mc)

    # factor charts (no contraction, single member each)
    idx_g = chart.nested.index(g)
    idx_h = chart.nested.index(h)
    chart_g, emap_g = _restrict_chart(chart, g, set(), [idx_g])
    chart_h, emap_h = _restrict_chart(chart, h, set(), [idx_h])
    kern_g, kern_h = ChartKernel(chart_g), ChartKernel(chart_h)
    d = kern.d

    parent_edges = sorted(chart.basis.tree.edge_set)
    cross_edges = [e for e in range(graph.n_edges)
                   if e not in g.edge_set and e not in h.edge_set]
    inner_edges = [e for e in parent_edges
                   if e not in g.edge_set and e not in h.edge_set]
    n_inner = len(inner_edges) * d

    child_g_edges = sorted(chart_g.basis.tree.edge_set)
    child_h_edges = sorted(chart_h.basis.tree.edge_set)

    def parent_slot(e: int) -> int:
        return parent_edges.index(e) * d

    # assembly plan: parent block <- (source, offset)
    plan = []
    for e in parent_edges:
        if e in g.edge_set:
            plan.append(("g", parent_slot(e),
                         child_g_edges.index(emap_g[e]) * d))
        elif e in h.edge_set:
            plan.append(("h", parent_slot(e),
                         child_h_edges.index(emap_h[e]) * d))
        else:
            plan.append(("inner", parent_slot(e),
                         inner_edges.index(e) * d))

    ng = kern_g.n_coords
    nu_g_fn = nu_callables(kern_g, [nu[g]])[0]
    nu_h_fn = nu_callables(kern_h, [nu[h]])[0]
    inner_seed = substream_seed(mc_rhs.seed, "locality-inner")
    state = {"batch": 0}

    def rhs_integrand(z: np.ndarray) -> np.ndarray:
        n = len(z)
        xg, xh = z[:, :ng], z[:, ng:]
        rng = _batch_generator(inner_seed, state["batch"])
        state["batch"] += 1
        xin, win = sample_coordinates(rng, inner_samples,
                                      [mc_rhs.stretch] * n_inner)
        total = np.zeros(n)
        for kg, kh in itertools.product((0, 1), repeat=2):
            xgz = xg.copy()
            xhz = xh.copy()
            if kg:
                xgz[:, kern_g.marked[0]] = 0.0
            if kh:
                xhz[:, kern_h.marked[0]] = 0.0
            yg = kern_g.rho(xgz)
            yh = kern_h.rho(xhz)
            fg = kern_g.f(xgz, 1.0)
            fh = kern_h.f(xhz, 1.0)
            # inner estimate of the cross-edge pairing, shared draws
            y_full = np.zeros((n, inner_samples, kern.n_coords))
            for source, ppos, cpos in plan:
                if source == "g":
                    y_full[:, :, ppos:ppos + d] = \
                        yg[:, None, cpos:cpos + d]
                elif source == "h":
                    y_full[:, :, ppos:ppos + d] = \
                        yh[:, None, cpos:cpos + d]
                else:
                    y_full[:, :, ppos:ppos + d] = \
                        xin[None, :, cpos:cpos + d]
            flat = y_full.reshape(n * inner_samples, kern.n_coords)
            vals = kern.v_edges(flat, cross_edges, 1.0) \
                * psi.test_values(flat)
            vals = vals.reshape(n, inner_samples) * win[None, :]
            phi_hat = vals.mean(axis=1)
            term = fg * fh * phi_hat
            if kg:
                term = term * nu_g_fn(xg)
            if kh:
                term = term * nu_h_fn(xh)
            total += (-1.0) ** (kg + kh) * term
        u = np.abs(xg[:, kern_g.marked[0]]) ** -1.0 \
            * np.abs(xh[:, kern_h.marked[0]]) ** -1.0
        return total * u

    powers = [mc_rhs.stretch] * (2 * ng)
    powers[kern_g.marked[0]] = 1
    powers[ng + kern_h.marked[0]] = 1
    rhs = mc_integrate(
        rhs_integrand, 2 * ng,
        mc_rhs.with_seed(substream_seed(mc_rhs.seed, "locality-rhs")),
        powers=powers)
    return LocalityNumeric(lhs, rhs, n_sigma)
