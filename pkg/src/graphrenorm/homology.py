"""Homology of the arrangement complement, two independent ways.

``homology_from_atoms`` applies the closed-form rank table driven by the
atom counts of the divergent lattice.  ``homology_gm_oracle`` rebuilds the
intersection lattice of the atom subspaces and assembles the ranks from
reduced simplicial homology of order complexes, serving as the oracle.
Ranks are over the rationals; torsion is out of scope.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import GraphError
from .graphs import Subgraph, a_dim
from .lattice import SubgraphPoset


@dataclass(frozen=True)
class BettiTable:
    """Sparse map k -> rank H_k, stored as sorted (k, rank) pairs."""

    ranks: tuple[tuple[int, int], ...]

    @staticmethod
    def from_dict(d: dict[int, int]) -> "BettiTable":
        return BettiTable(tuple(sorted((k, r) for k, r in d.items() if r)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.ranks)

    def rank(self, k: int) -> int:
        return dict(self.ranks).get(k, 0)


def _atom_dimensions(poset: SubgraphPoset) -> list[int]:
    if poset.kind != "divergent_lattice":
        raise GraphError("homology expects a divergent lattice")
    d = poset.parent.dim
    dims = []
    for atom in poset.atoms():
        ad = a_dim(atom)
        if ad % d:
            raise GraphError("atom subspace dimension not a multiple of d")
        dims.append(ad // d)
    return dims


def homology_from_atoms(poset: SubgraphPoset) -> BettiTable:
    """Closed-form Betti table of the arrangement complement.

    Atoms with subspace dimension d*i are counted by n_i; every choice of
    alpha_i <= n_i atoms per class contributes prod C(n_i, alpha_i)
    generators in degree d*sum(alpha_i * i) - sum(alpha_i).
    """
    d = poset.parent.dim
    counts: dict[int, int] = {}
    for i in _atom_dimensions(poset):
        counts[i] = counts.get(i, 0) + 1
    ranks: dict[int, int] = {0: 1}
    classes = sorted(counts)
    choices = [range(counts[i] + 1) for i in classes]
    for alpha in itertools.product(*choices):
        if not any(alpha):
            continue
        k = d * sum(a * i for a, i in zip(alpha, classes)) - sum(alpha)
        mult = 1
        for a, i in zip(alpha, classes):
            mult *= comb(counts[i], a)
        ranks[k] = ranks.get(k, 0) + mult
    return BettiTable.from_dict(ranks)


# ---------------------------------------------------------------------------
# simplicial machinery for the oracle
# ---------------------------------------------------------------------------

def _matrix_rank(rows: list[list[int]]) -> int:
    """Exact rank over Q by Gaussian elimination."""
    if not rows or not rows[0]:
        return 0
    mat = [[Fraction(x) for x in row] for row in rows]
    nrows, ncols = len(mat), len(mat[0])
    rank = 0
    row = 0
    for col in range(ncols):
        pivot = next((r for r in range(row, nrows) if mat[r][col]), None)
        if pivot is None:
            continue
        mat[row], mat[pivot] = mat[pivot], mat[row]
        inv = 1 / mat[row][col]
        mat[row] = [x * inv for x in mat[row]]
        for r in range(nrows):
            if r != row and mat[r][col]:
                factor = mat[r][col]
                mat[r] = [a - factor * b for a, b in zip(mat[r], mat[row])]
        row += 1
        rank += 1
        if row == nrows:
            break
    return rank


def reduced_betti_numbers(facets: list[tuple[int, ...]],
                          n_vertices: int) -> dict[int, int]:
    """Reduced Betti numbers (over Q) of an abstract simplicial complex.

    ``facets`` lists faces as sorted vertex tuples; all subfaces are filled
    in.  The empty complex has reduced Betti number 1 in degree -1.
    """
    if n_vertices == 0:
        return {-1: 1}
    faces: list[set[tuple[int, ...]]] = []
    top = max((len(f) for f in facets), default=0)
    for k in range(top):
        faces.append(set())
    for f in facets:
        f = tuple(sorted(f))
        for r in range(1, len(f) + 1):
            for sub in itertools.combinations(f, r):
                faces[r - 1].add(sub)
    indexed = [sorted(level) for level in faces]
    index_of = [{s: i for i, s in enumerate(level)} for level in indexed]

    # boundary matrices; level k has the k-simplices (k+1 vertices)
    boundaries: list[list[list[int]]] = []
    aug = [[1] * len(indexed[0])]
    boundaries.append(aug)
    for k in range(1, len(indexed)):
        rows = [[0] * len(indexed[k]) for _ in indexed[k - 1]]
        for j, simplex in enumerate(indexed[k]):
            for drop in range(len(simplex)):
                face = simplex[:drop] + simplex[drop + 1:]
                rows[index_of[k - 1][face]][j] = (-1) ** drop
        boundaries.append(rows)

    ranks = [_matrix_rank(b) for b in boundaries]
    betti: dict[int, int] = {}
    for k in range(len(indexed)):
        nk = len(indexed[k])
        rank_k = ranks[k]
        rank_k1 = ranks[k + 1] if k + 1 < len(boundaries) else 0
        b = nk - rank_k - rank_k1
        if b:
            betti[k] = b
    return betti


def _order_complex_facets(elements: list[frozenset[int]],
                          ) -> tuple[list[tuple[int, ...]], int]:
    """Maximal chains of a poset of edge sets, as vertex-index tuples."""
    n = len(elements)
    below = {i: [j for j in range(n)
                 if elements[j] < elements[i]] for i in range(n)}
    chains: list[tuple[int, ...]] = []

    def grow(chain: list[int]) -> None:
        last = chain[-1]
        succ = [j for j in range(n) if elements[last] < elements[j]
                and not any(elements[last] < elements[m] < elements[j]
                            for m in range(n))]
        if not succ:
            chains.append(tuple(chain))
            return
        for j in succ:
            grow(chain + [j])

    minimal = [i for i in range(n) if not below[i]]
    for i in minimal:
        grow([i])
    return chains, n


def homology_gm_oracle(poset: SubgraphPoset) -> BettiTable:
    """Betti table assembled from the intersection lattice of the atom
    subspaces: one contribution per lattice element, given by reduced
    cohomology of the order complex of its open lower interval."""
    d = poset.parent.dim
    atoms = poset.atoms()
    parent = poset.parent
    ranks: dict[int, int] = {0: 1}  # the bottom element
    atom_sets = [a.edge_set for a in atoms]
    for r in range(1, len(atoms) + 1):
        for combo in itertools.combinations(range(len(atoms)), r):
            union = frozenset().union(*(atom_sets[i] for i in combo))
            rk = a_dim(Subgraph(parent, union))
            if r == 1:
                ranks[rk - 1] = ranks.get(rk - 1, 0) + 1
                continue
            interior = []
            for rr in range(1, r):
                for sub in itertools.combinations(combo, rr):
                    interior.append(
                        frozenset().union(*(atom_sets[i] for i in sub)))
            interior = sorted(set(interior), key=lambda s: (len(s), sorted(s)))
            facets, n_verts = _order_complex_facets(list(interior))
            betti = reduced_betti_numbers(facets, n_verts)
            for j, b in betti.items():
                k = rk - j - 2
                if b:
                    ranks[k] = ranks.get(k, 0) + b
    return BettiTable.from_dict(ranks)
