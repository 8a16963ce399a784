"""Cellular homology of a labeled complex, and top homology with quotient coefficients.

Every group here is computed the same way: lift to integer lattices, get a
basis of the cycle lattice ``K`` (chains whose boundary lands in the
coefficient relations), express the boundary-and-relation lattice ``I`` in
that basis, and run Smith normal form on ``K / I``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .algebra import (
    IntMatrix,
    QuotientModule,
    RingSpec,
    Vector,
    build_quotient,
    generates_cyclic,
    hnf_rows,
    preimage_lattice,
    solve_in_basis,
)
from .complex import LabeledComplex, canonical_chain, require_valid
from .fibers import TypeRegistry


def _subquotient(K: Sequence[Vector], gens: Sequence[Sequence[int]]) -> QuotientModule:
    coords = []
    for g in gens:
        c = solve_in_basis(K, g)
        if c is None:
            raise ArithmeticError("relation lattice is not contained in the cycle lattice")
        coords.append(c)
    return build_quotient(len(K), coords)


@dataclass(frozen=True)
class HomologySummary:
    ring: RingSpec
    groups: tuple[tuple[int, tuple[int, ...]], ...]

    def __getitem__(self, k: int) -> tuple[int, tuple[int, ...]]:
        return self.groups[k]

    def betti(self, k: int) -> int:
        return self.groups[k][0]

    def describe(self, k: int) -> str:
        free, tors = self.groups[k]
        parts = [f"Z/{d}" for d in tors]
        if free:
            parts.append("Z" if free == 1 else f"Z^{free}")
        return " + ".join(parts) if parts else "0"


def homology_over(c: LabeledComplex, ring: RingSpec | None = None) -> HomologySummary:
    ring = ring or RingSpec.integers()
    require_valid(c)
    m = 0 if ring.is_integers else ring.modulus
    groups = []
    for k in range(c.n + 1):
        nk = len(c.cells.get(k, ()))
        if k == 0:
            D = IntMatrix.zeros(0, nk)
        else:
            D = c.boundary.get(k) or IntMatrix.zeros(len(c.cells.get(k - 1, ())), nk)
        mod_rows = [tuple(m if j == i else 0 for j in range(D.rows)) for i in range(D.rows)] if m else []
        K = preimage_lattice(D, mod_rows)
        gens = []
        if k < c.n:
            up = c.boundary.get(k + 1)
            if up is not None:
                gens.extend(up.col(j) for j in range(up.cols))
        if m:
            gens.extend(tuple(m if j == i else 0 for j in range(nk)) for i in range(nk))
        q = _subquotient(K, hnf_rows(gens, nk))
        groups.append((q.free_rank, q.torsion_factors))
    return HomologySummary(ring, tuple(groups))


@dataclass(frozen=True)
class TopHomology:
    """H_n with coefficients in a quotient module, plus the canonical class in it."""

    free_rank: int
    torsion: tuple[int, ...]
    canonical_class: tuple[int, ...]
    canonical_nonzero: bool
    canonical_generates: bool

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def describe(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"


def top_homology_with_quotient(
    c: LabeledComplex, registry: TypeRegistry, q: QuotientModule
) -> TopHomology:
    """Kernel of the top boundary map tensored with q (there are no (n+1)-cells).

    Chains are integer vectors indexed by (top cell, type); a chain is a
    cycle when the boundary at every face lies in the relation lattice.
    Radial-base faces impose nothing (homology relative to the axis).
    """
    require_valid(c, registry)
    t = q.ambient_rank
    N, F = len(c.top_cells), len(c.faces)
    base = set(c.radial_base)
    D = c.top_boundary
    D = IntMatrix.from_rows([
        (0,) * N if f in base else D.row(i) for i, f in enumerate(c.faces)
    ], N)
    M = IntMatrix(F * t, N * t, tuple(
        tuple(D[f, s] if i == j else 0 for s in range(N) for j in range(t))
        for f in range(F) for i in range(t)
    ))
    rels = hnf_rows(q.relation_basis.data, t)

    def placed(block, r, nblocks):
        v = [0] * (nblocks * t)
        v[block * t:(block + 1) * t] = r
        return tuple(v)

    target = [placed(f, r, F) for f in range(F) for r in rels]
    K = preimage_lattice(M, target)
    H = _subquotient(K, [placed(s, r, N) for s in range(N) for r in rels])

    chain = canonical_chain(c, registry, q)
    lift = tuple(x for v in chain.coefficients for x in v)
    coeffs = solve_in_basis(K, lift) if K else ()
    if coeffs is None:
        raise ArithmeticError("canonical chain is not a cycle over this quotient")
    return TopHomology(
        free_rank=H.free_rank,
        torsion=H.torsion_factors,
        canonical_class=H.coordinates(coeffs),
        canonical_nonzero=not H.is_zero(coeffs),
        canonical_generates=generates_cyclic(H, coeffs),
    )
