"""Exact integer linear algebra: Smith normal form, lattices, quotient modules.

Everything here works on plain Python ints, so entries never overflow no
matter how much the pivoting inflates intermediate coefficients.  Quotients
over Z/kZ are handled by appending k * e_i rows to the relation lattice and
running the integer pipeline unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

from .errors import InputShapeError

Vector = tuple[int, ...]


@dataclass(frozen=True)
class RingSpec:
    """Either the integers or Z/kZ with k >= 2."""

    kind: str = "integers"
    modulus: int | None = None

    def __post_init__(self):
        if self.kind == "integers":
            if self.modulus is not None:
                raise ValueError("the integers carry no modulus")
        elif self.kind == "integers_mod":
            if self.modulus is None or self.modulus < 2:
                raise ValueError("Z/kZ needs a modulus k >= 2")
        else:
            raise ValueError(f"unknown ring kind {self.kind!r}")

    @classmethod
    def integers(cls) -> "RingSpec":
        return cls("integers")

    @classmethod
    def mod(cls, k: int) -> "RingSpec":
        return cls("integers_mod", k)

    @classmethod
    def parse(cls, text: str) -> "RingSpec":
        """Parse the CLI spelling: ``z``, ``z2``, ``z<k>``."""
        text = text.strip().lower()
        if text in ("z", "zz", "integers"):
            return cls.integers()
        if text.startswith("z") and text[1:].isdigit():
            return cls.mod(int(text[1:]))
        raise ValueError(f"cannot parse ring {text!r}; expected z, z2, z<k>")

    @property
    def is_integers(self) -> bool:
        return self.kind == "integers"

    def __str__(self):
        return "Z" if self.is_integers else f"Z/{self.modulus}Z"


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix stored as a tuple of row tuples."""

    rows: int
    cols: int
    data: tuple[tuple[int, ...], ...] = field(repr=False)

    def __post_init__(self):
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise InputShapeError(
                f"matrix data does not have shape {self.rows}x{self.cols}"
            )

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], cols: int | None = None) -> "IntMatrix":
        data = tuple(tuple(int(v) for v in r) for r in rows)
        if cols is None:
            if not data:
                raise InputShapeError("column count required for a matrix with no rows")
            cols = len(data[0])
        return cls(len(data), cols, data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, size: int) -> "IntMatrix":
        return cls(size, size, tuple(
            tuple(1 if i == j else 0 for j in range(size)) for i in range(size)
        ))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.data[i][j]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def row(self, i: int) -> Vector:
        return self.data[i]

    def col(self, j: int) -> Vector:
        return tuple(r[j] for r in self.data)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.data]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, tuple(zip(*self.data)) if self.rows else
                         tuple(() for _ in range(self.cols)))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise InputShapeError(f"cannot multiply {self.shape} by {other.shape}")
        ocols = other.T.data
        return IntMatrix(self.rows, other.cols, tuple(
            tuple(sum(a * b for a, b in zip(r, c)) for c in ocols) for r in self.data
        ))

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(tuple(-v for v in r) for r in self.data))

    def is_zero(self) -> bool:
        return all(v == 0 for r in self.data for v in r)

    def is_diagonal(self) -> bool:
        return all(v == 0 for i, r in enumerate(self.data) for j, v in enumerate(r) if i != j)

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise InputShapeError("determinant of a non-square matrix")
        n = self.rows
        a = self.tolist()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1


def vec_mat(x: Sequence[int], m: IntMatrix) -> Vector:
    """Row vector times matrix."""
    if len(x) != m.rows:
        raise InputShapeError(f"vector of length {len(x)} against {m.rows} rows")
    return tuple(sum(xi * m.data[i][j] for i, xi in enumerate(x) if xi) for j in range(m.cols))


@dataclass(frozen=True)
class SNFResult:
    """``U @ A @ V == D`` with U, V unimodular and D in Smith form.

    ``V_inv`` is carried along because reducing quotient elements needs to
    map coordinates back.
    """

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    V_inv: IntMatrix = field(repr=False)
    rank: int
    invariant_factors: tuple[int, ...]


def snf(A: IntMatrix) -> SNFResult:
    """Smith normal form with the smallest-|entry| pivot, row-major tie-break."""
    r, c = A.rows, A.cols
    a = A.tolist()
    U = IntMatrix.identity(r).tolist()
    V = IntMatrix.identity(c).tolist()
    Vi = IntMatrix.identity(c).tolist()

    def add_row(dst, src, q):
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def add_col(dst, src, q):
        for row in a:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]
        Vi[src] = [x - q * y for x, y in zip(Vi[src], Vi[dst])]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    t = 0
    while t < min(r, c):
        best = None
        for i in range(t, r):
            for j in range(t, c):
                v = a[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, pi, pj = best
        if pi != t:
            swap_rows(t, pi)
        if pj != t:
            swap_cols(t, pj)
        p = a[t][t]
        dirty = False
        for i in range(t + 1, r):
            if a[i][t]:
                add_row(i, t, -(a[i][t] // p))
                dirty = dirty or a[i][t] != 0
        for j in range(t + 1, c):
            if a[t][j]:
                add_col(j, t, -(a[t][j] // p))
                dirty = dirty or a[t][j] != 0
        if dirty:
            continue
        bad = next((i for i in range(t + 1, r) for j in range(t + 1, c) if a[i][j] % p), None)
        if bad is not None:
            add_row(t, bad, 1)
            continue
        if p < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
        t += 1

    D = IntMatrix(r, c, tuple(tuple(row) for row in a))
    factors = tuple(a[i][i] for i in range(t))
    return SNFResult(
        U=IntMatrix(r, r, tuple(tuple(row) for row in U)),
        D=D,
        V=IntMatrix(c, c, tuple(tuple(row) for row in V)),
        V_inv=IntMatrix(c, c, tuple(tuple(row) for row in Vi)),
        rank=t,
        invariant_factors=factors,
    )


def hnf_rows(gens: Iterable[Sequence[int]], width: int) -> list[Vector]:
    """Row Hermite normal form of the lattice spanned by ``gens``.

    Returns the nonzero rows: pivots positive and strictly right-moving,
    entries above a pivot reduced into ``[0, pivot)``.  Two generating sets
    span the same lattice iff their HNFs are equal.
    """
    rows = [list(g) for g in gens if any(g)]
    for g in rows:
        if len(g) != width:
            raise InputShapeError(f"generator of length {len(g)}, expected {width}")
    out: list[list[int]] = []
    for col in range(width):
        active = [g for g in rows if g[col]]
        rows = [g for g in rows if not g[col]]
        while len(active) > 1:
            active.sort(key=lambda g: abs(g[col]))
            piv = active[0]
            nxt = [piv]
            for g in active[1:]:
                q = g[col] // piv[col]
                g = [x - q * y for x, y in zip(g, piv)]
                if g[col]:
                    nxt.append(g)
                elif any(g):
                    rows.append(g)
            active = nxt
        if active:
            piv = active[0]
            if piv[col] < 0:
                piv = [-x for x in piv]
            for o in out:
                q = o[col] // piv[col]
                if q:
                    o[:] = [x - q * y for x, y in zip(o, piv)]
            out.append(piv)
    return [tuple(g) for g in out]


def right_kernel(M: IntMatrix) -> list[Vector]:
    """Basis of the integer lattice ``{x : M x = 0}``."""
    if M.cols == 0:
        return []
    res = snf(M)
    return [res.V.col(j) for j in range(res.rank, M.cols)]


def left_kernel(M: IntMatrix) -> list[Vector]:
    """Basis of ``{y : y M = 0}``."""
    if M.rows == 0:
        return []
    res = snf(M)
    return [res.U.row(i) for i in range(res.rank, M.rows)]


def preimage_lattice(M: IntMatrix, target: Sequence[Sequence[int]]) -> list[Vector]:
    """Basis of ``{x : M x lies in the lattice spanned by target}`` (HNF rows)."""
    a, f = M.cols, M.rows
    g = len(target)
    if g == 0:
        return hnf_rows(right_kernel(M), a)
    block = IntMatrix(f, a + g, tuple(
        tuple(M.data[i]) + tuple(-t[i] for t in target) for i in range(f)
    ))
    return hnf_rows((k[:a] for k in right_kernel(block)), a)


def solve_in_basis(basis: Sequence[Sequence[int]], y: Sequence[int]) -> Vector | None:
    """Integer coefficients ``c`` with ``c @ basis == y``; None if none exist.

    ``basis`` must have linearly independent rows.
    """
    if not basis:
        return () if not any(y) else None
    B = IntMatrix.from_rows(basis)
    res = snf(B)
    if res.rank != B.rows:
        raise InputShapeError("basis rows are not linearly independent")
    yv = vec_mat(y, res.V)
    if any(yv[res.rank:]):
        return None
    z = []
    for i, d in enumerate(res.invariant_factors):
        if yv[i] % d:
            return None
        z.append(yv[i] // d)
    return vec_mat(z, res.U)


@dataclass(frozen=True)
class QuotientModule:
    """Presentation of Z^t / A (or its mod-k image) by Smith normal form.

    Coordinates of a class: ``coordinates(x)`` returns the torsion
    coordinates (one per factor > 1, reduced mod that factor) followed by
    the free coordinates.
    """

    ambient_rank: int
    ring: RingSpec
    relation_basis: IntMatrix
    snf: SNFResult = field(repr=False)
    torsion_factors: tuple[int, ...]
    free_rank: int

    def _check(self, x: Sequence[int]) -> None:
        if len(x) != self.ambient_rank:
            raise InputShapeError(
                f"element of length {len(x)} in a module of rank {self.ambient_rank}"
            )

    def lift(self, x: Sequence[int]) -> Vector:
        self._check(x)
        return vec_mat(x, self.snf.V)

    def reduce(self, x: Sequence[int]) -> Vector:
        """Canonical representative of the class of x."""
        y = list(self.lift(x))
        for i, d in enumerate(self.snf.invariant_factors):
            y[i] %= d
        return vec_mat(y, self.snf.V_inv)

    def is_zero(self, x: Sequence[int]) -> bool:
        return not any(self.reduce(x))

    def coordinates(self, x: Sequence[int]) -> Vector:
        y = self.lift(x)
        tors = tuple(y[i] % d for i, d in enumerate(self.snf.invariant_factors) if d > 1)
        return tors + tuple(y[self.snf.rank:])

    def invariant_factors(self) -> tuple[int, tuple[int, ...]]:
        return self.free_rank, self.torsion_factors

    def unit(self, i: int) -> Vector:
        return tuple(1 if j == i else 0 for j in range(self.ambient_rank))

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion_factors

    def describe(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion_factors]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"


def build_quotient(
    ambient_rank: int,
    relations: Iterable[Sequence[int]],
    ring: RingSpec | None = None,
) -> QuotientModule:
    """Quotient of the free module of rank ``ambient_rank`` by ``relations``."""
    ring = ring or RingSpec.integers()
    rows = []
    for rel in relations:
        if len(rel) != ambient_rank:
            raise InputShapeError(
                f"relation of length {len(rel)} in a module of rank {ambient_rank}"
            )
        rows.append(tuple(int(v) for v in rel))
    if not ring.is_integers:
        k = ring.modulus
        rows.extend(tuple(k if j == i else 0 for j in range(ambient_rank))
                    for i in range(ambient_rank))
    basis = IntMatrix(len(rows), ambient_rank, tuple(rows))
    res = snf(basis)
    return QuotientModule(
        ambient_rank=ambient_rank,
        ring=ring,
        relation_basis=basis,
        snf=res,
        torsion_factors=tuple(d for d in res.invariant_factors if d > 1),
        free_rank=ambient_rank - res.rank,
    )


def element_order(q: QuotientModule, x: Sequence[int]) -> int:
    """Order of the class of x; 0 means infinite order."""
    coords = q.coordinates(x)
    nt = len(q.torsion_factors)
    if any(coords[nt:]):
        return 0
    order = 1
    for c, d in zip(coords, q.torsion_factors):
        o = d // gcd(c, d)
        order = order * o // gcd(order, o)
    return order


def generates_cyclic(q: QuotientModule, x: Sequence[int]) -> bool:
    """True iff q is cyclic and nontrivial and x generates it."""
    coords = q.coordinates(x)
    if q.free_rank == 1 and not q.torsion_factors:
        return abs(coords[0]) == 1
    if q.free_rank == 0 and len(q.torsion_factors) == 1:
        return gcd(coords[0], q.torsion_factors[0]) == 1
    return False
