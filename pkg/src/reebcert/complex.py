"""Labeled cell complexes standing in for Reeb spaces, and their certificates.

A :class:`LabeledComplex` is a CW-style complex of top dimension ``n`` with
signed boundary matrices.  Each top cell carries the fiber type of the
connected fiber component over its points, and each codimension-one face
carries a mark:

``regular``
    a sheet passes straight through (two cofaces, opposite unit signs,
    equal labels);
``singular``
    a fold or other transition; no structural constraint;
``boundary_face``
    the sheet ends on the boundary of the Reeb space (one coface);
``invisible``
    a transition that the target triangulation does not see (two cofaces,
    opposite unit signs, labels may differ).

Unmarked faces count as ``singular``.  Faces listed in ``radial_base`` are
the boundary level of a graph that is going to be spun (see
:func:`reebcert.generators.spin`); they sit on the boundary without being a
fold and generate no relation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence

from .algebra import IntMatrix, QuotientModule, RingSpec, Vector, build_quotient
from .errors import (
    IncompatibleClassifierError,
    IncompatibleQuotientError,
    InputShapeError,
    ValidationError,
)
from .fibers import Classifier, TypeRegistry

REGULAR, SINGULAR, BOUNDARY_FACE, INVISIBLE = "regular", "singular", "boundary_face", "invisible"
MARKS = (REGULAR, SINGULAR, BOUNDARY_FACE, INVISIBLE)
STRICT, VISIBILITY = "strict", "visibility"


@dataclass(frozen=True)
class LabeledComplex:
    n: int
    cells: Mapping[int, tuple[str, ...]]
    boundary: Mapping[int, IntMatrix]
    labels: Mapping[str, str]
    face_marks: Mapping[str, str] = field(default_factory=dict)
    fiber_dim: int | None = None
    radial_base: tuple[str, ...] = ()
    metadata: Mapping[str, object] = field(default_factory=dict)

    @classmethod
    def build(
        cls,
        n: int,
        cells: Mapping[int, Sequence[str]],
        incidences: Mapping[int, Iterable[tuple[str, str, int]]],
        labels: Mapping[str, str],
        face_marks: Mapping[str, str] | None = None,
        **kwargs,
    ) -> "LabeledComplex":
        """Assemble boundary matrices from sparse ``(face, cell, coeff)`` triples.

        Repeated triples add up.  Unknown cell ids raise ``InputShapeError``.
        """
        cells = {k: tuple(cells.get(k, ())) for k in range(n + 1)}
        boundary = {}
        for k in range(1, n + 1):
            fi = {c: i for i, c in enumerate(cells[k - 1])}
            ci = {c: j for j, c in enumerate(cells[k])}
            m = [[0] * len(cells[k]) for _ in cells[k - 1]]
            for face, cell, coeff in incidences.get(k, ()):
                if face not in fi:
                    raise InputShapeError(f"{face!r} is not a {k - 1}-cell")
                if cell not in ci:
                    raise InputShapeError(f"{cell!r} is not a {k}-cell")
                m[fi[face]][ci[cell]] += int(coeff)
            boundary[k] = IntMatrix(len(cells[k - 1]), len(cells[k]), tuple(map(tuple, m)))
        return cls(n, cells, boundary, dict(labels), dict(face_marks or {}), **kwargs)

    @property
    def top_cells(self) -> tuple[str, ...]:
        return tuple(self.cells.get(self.n, ()))

    @property
    def faces(self) -> tuple[str, ...]:
        return tuple(self.cells.get(self.n - 1, ()))

    @property
    def top_boundary(self) -> IntMatrix:
        return self.boundary.get(self.n) or IntMatrix.zeros(len(self.faces), len(self.top_cells))

    def mark(self, face: str) -> str:
        return self.face_marks.get(face, SINGULAR)

    def cofaces(self, face: str) -> list[tuple[str, int]]:
        """Top cells with a nonzero incidence on ``face``, with the coefficient."""
        i = self.faces.index(face)
        row = self.top_boundary.row(i)
        return [(s, c) for s, c in zip(self.top_cells, row) if c]

    def incidences(self, k: int) -> list[tuple[str, str, int]]:
        D = self.boundary.get(k)
        if D is None:
            return []
        return [
            (f, c, D[i, j])
            for j, c in enumerate(self.cells[k])
            for i, f in enumerate(self.cells[k - 1])
            if D[i, j]
        ]

    def with_top_boundary(self, D: IntMatrix) -> "LabeledComplex":
        boundary = dict(self.boundary)
        boundary[self.n] = D
        return LabeledComplex(self.n, self.cells, boundary, self.labels, self.face_marks,
                              self.fiber_dim, self.radial_base, self.metadata)


class Violation(NamedTuple):
    code: str
    message: str
    cells: tuple[str, ...] = ()

    def __str__(self):
        return f"[{self.code}] {self.message}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, code: str, message: str, *cells: str) -> None:
        self.violations.append(Violation(code, message, tuple(cells)))

    def __bool__(self):
        return self.ok


def validate(c: LabeledComplex, registry: TypeRegistry | None = None) -> ValidationReport:
    """Check every structural invariant; never raises."""
    rep = ValidationReport()
    if c.n < 1:
        rep.add("dimension", f"top dimension must be >= 1, got {c.n}")
        return rep
    for k in c.cells:
        if not 0 <= k <= c.n:
            rep.add("dimension", f"cells declared in dimension {k}, outside 0..{c.n}")
    seen: dict[str, int] = {}
    for k in range(c.n + 1):
        for cell in c.cells.get(k, ()):
            if cell in seen:
                rep.add("duplicate-cell", f"cell id {cell!r} used in dimensions "
                        f"{seen[cell]} and {k}", cell)
            seen[cell] = k
    shapes_ok = True
    for k in range(1, c.n + 1):
        D = c.boundary.get(k)
        want = (len(c.cells.get(k - 1, ())), len(c.cells.get(k, ())))
        if D is not None and D.shape != want:
            rep.add("shape", f"D_{k} has shape {D.shape}, expected {want}")
            shapes_ok = False
    for k in c.boundary:
        if not 1 <= k <= c.n:
            rep.add("dimension", f"boundary matrix D_{k} outside 1..{c.n}")
    if shapes_ok:
        for k in range(2, c.n + 1):
            A, B = c.boundary.get(k - 1), c.boundary.get(k)
            if A is None or B is None:
                continue
            P = A @ B
            for i in range(P.rows):
                for j in range(P.cols):
                    if P[i, j]:
                        rep.add("d-squared", f"D_{k - 1} D_{k} is {P[i, j]} at "
                                f"({c.cells[k - 2][i]}, {c.cells[k][j]})",
                                c.cells[k - 2][i], c.cells[k][j])

    top = set(c.top_cells)
    for cell in c.top_cells:
        if cell not in c.labels:
            rep.add("unlabeled", f"top cell {cell!r} has no fiber label", cell)
    for cell, t in c.labels.items():
        if cell not in top:
            rep.add("label-site", f"label on {cell!r}, which is not a top cell", cell)
        elif registry is not None and t not in registry:
            rep.add("unknown-type", f"top cell {cell!r} labeled with unknown type {t!r}", cell)

    faces = set(c.faces)
    for face, m in c.face_marks.items():
        if face not in faces:
            rep.add("mark-site", f"face mark on {face!r}, which is not an "
                    f"({c.n - 1})-cell", face)
        elif m not in MARKS:
            rep.add("mark", f"unknown mark {m!r} on {face!r}", face)
    if shapes_ok and c.faces:
        for face in c.faces:
            co = c.cofaces(face)
            m = c.mark(face)
            coeffs = sorted(v for _, v in co)
            if m == BOUNDARY_FACE and coeffs not in ([-1], [1]):
                rep.add("boundary-face", f"boundary face {face!r} needs exactly one "
                        f"coface with coefficient +-1, has {co}", face)
            elif m in (REGULAR, INVISIBLE):
                if coeffs != [-1, 1]:
                    rep.add(m, f"{m} face {face!r} needs two cofaces with opposite "
                            f"unit signs, has {co}", face)
                elif m == REGULAR:
                    la, lb = (c.labels.get(s) for s, _ in co)
                    if la != lb:
                        rep.add(m, f"regular face {face!r} separates labels {la!r} "
                                f"and {lb!r}", face)
    for face in c.radial_base:
        if face not in faces:
            rep.add("radial-base", f"radial base {face!r} is not an ({c.n - 1})-cell", face)
        elif c.mark(face) != BOUNDARY_FACE:
            rep.add("radial-base", f"radial base {face!r} must be marked boundary_face", face)
    return rep


def require_valid(c: LabeledComplex, registry: TypeRegistry | None = None) -> None:
    rep = validate(c, registry)
    if not rep.ok:
        raise ValidationError(rep)


class Relation(NamedTuple):
    site: str
    vector: Vector


def _face_vector(c: LabeledComplex, registry: TypeRegistry, i: int) -> Vector:
    out = [0] * len(registry)
    for s, coeff in zip(c.top_cells, c.top_boundary.row(i)):
        if coeff:
            out[registry.index(c.labels[s])] += coeff
    return tuple(out)


def strict_relations(c: LabeledComplex, registry: TypeRegistry) -> list[Relation]:
    """One relation per face: the signed sum of the labels of its cofaces.

    Zero vectors (regular faces, cancelling singular faces) are omitted.
    """
    require_valid(c, registry)
    base = set(c.radial_base)
    out = []
    for i, face in enumerate(c.faces):
        if face in base:
            continue
        v = _face_vector(c, registry, i)
        if any(v):
            out.append(Relation(face, v))
    return out


def _sheet_components(c: LabeledComplex, invisible: list[str]) -> dict[str, int]:
    """Union top cells across invisible faces; returns cell -> component id."""
    parent = {s: s for s in c.top_cells}

    def find(s):
        while parent[s] != s:
            parent[s] = parent[parent[s]]
            s = parent[s]
        return s

    for face in invisible:
        (a, _), (b, _) = c.cofaces(face)
        parent[find(a)] = find(b)
    roots: dict[str, int] = {}
    return {s: roots.setdefault(find(s), len(roots)) for s in c.top_cells}


def curve_relations(c: LabeledComplex, registry: TypeRegistry, mode: str = STRICT) -> list[Relation]:
    """Relations from combinatorial transverse curves.

    ``strict``: identical to :func:`strict_relations`.  ``visibility``:
    relations only at faces not marked invisible, plus the jump vector of
    every invisible face whose sheet component (top cells joined across
    invisible faces) touches a visible face.  Regular faces count as
    visible sites.
    """
    if mode == STRICT:
        return strict_relations(c, registry)
    if mode != VISIBILITY:
        raise ValueError(f"unknown relation mode {mode!r}")
    require_valid(c, registry)
    invisible = [f for f in c.faces if c.mark(f) == INVISIBLE]
    comp = _sheet_components(c, invisible)
    reached = set()
    for face in c.faces:
        if c.mark(face) != INVISIBLE:
            reached.update(comp[s] for s, _ in c.cofaces(face))
    base = set(c.radial_base)
    out = []
    for i, face in enumerate(c.faces):
        if face in base:
            continue
        if c.mark(face) == INVISIBLE:
            (s, _), _ = c.cofaces(face)
            if comp[s] not in reached:
                continue
        v = _face_vector(c, registry, i)
        if any(v):
            out.append(Relation(face, v))
    return out


def universal_quotient(
    c: LabeledComplex,
    registry: TypeRegistry,
    ring: RingSpec | None = None,
    extra_relations: Iterable[Sequence[int]] = (),
    mode: str = STRICT,
) -> QuotientModule:
    """Free module on the fiber types modulo the span of all curve relations.

    This is the smallest compatible quotient: a class that is zero here is
    zero in every compatible quotient.
    """
    rels = [r.vector for r in curve_relations(c, registry, mode)]
    extra = [tuple(v) for v in extra_relations]
    for v in extra:
        if len(v) != len(registry):
            raise InputShapeError(f"extra relation of length {len(v)}, registry has {len(registry)}")
    return build_quotient(len(registry), rels + extra, ring)


@dataclass(frozen=True)
class CanonicalChain:
    """Top chain assigning each top cell the reduced class of its label."""

    cells: tuple[str, ...]
    coefficients: tuple[Vector, ...]
    quotient: QuotientModule = field(repr=False)

    def __getitem__(self, cell: str) -> Vector:
        return self.coefficients[self.cells.index(cell)]

    def nonzero_cells(self) -> list[str]:
        return [s for s, v in zip(self.cells, self.coefficients) if any(v)]

    @property
    def is_zero(self) -> bool:
        return not self.nonzero_cells()


def _check_registry(registry: TypeRegistry, q: QuotientModule) -> None:
    if q.ambient_rank != len(registry):
        raise InputShapeError(
            f"quotient has rank {q.ambient_rank} but the registry has {len(registry)} types"
        )


def canonical_chain(c: LabeledComplex, registry: TypeRegistry, q: QuotientModule) -> CanonicalChain:
    _check_registry(registry, q)
    coeffs = tuple(q.reduce(registry.unit(c.labels[s])) for s in c.top_cells)
    return CanonicalChain(c.top_cells, coeffs, q)


def chain_boundary(
    c: LabeledComplex,
    q: QuotientModule,
    chain: CanonicalChain | Mapping[str, Sequence[int]],
) -> dict[str, Vector]:
    """Boundary of a top chain with coefficients in q, reduced at every face.

    Radial-base faces are left out: they lie on the rotation axis of a
    profile graph, so chains there are cycles relative to that axis.
    """
    if isinstance(chain, CanonicalChain):
        chain = dict(zip(chain.cells, chain.coefficients))
    unknown = set(chain) - set(c.top_cells)
    if unknown:
        raise InputShapeError(f"chain mentions non-top cells {sorted(unknown)}")
    zero = (0,) * q.ambient_rank
    D = c.top_boundary
    out = {}
    base = set(c.radial_base)
    for i, face in enumerate(c.faces):
        if face in base:
            continue
        acc = [0] * q.ambient_rank
        for j, s in enumerate(c.top_cells):
            coeff = D[i, j]
            if coeff:
                v = chain.get(s, zero)
                if len(v) != q.ambient_rank:
                    raise InputShapeError(f"coefficient of {s!r} has wrong length")
                for k, x in enumerate(v):
                    acc[k] += coeff * x
        out[face] = q.reduce(acc)
    return out


@dataclass(frozen=True)
class Verdict:
    """Outcome of the top-homology non-vanishing test.

    ``witness`` maps each top cell to its coefficient written in the
    coordinates of ``group`` (torsion coordinates first for quotients, free
    coordinates first for classifier groups).
    """

    nonvanishing: bool
    witness_cell: str | None
    witness: Mapping[str, tuple[int, ...]]
    free_rank: int
    torsion: tuple[int, ...]
    source: str = "universal"

    @property
    def status(self) -> str:
        return "nonvanishing" if self.nonvanishing else "inconclusive"


def theorem1_verdict(c: LabeledComplex, registry: TypeRegistry, q: QuotientModule) -> Verdict:
    """Build the canonical chain, prove it is a cycle, report whether it is nonzero.

    With no cells above dimension n, a nonzero cycle is a nonzero class in
    top homology.  The boundary is always recomputed so a quotient that is
    too small (not compatible) is rejected instead of certified.
    """
    require_valid(c, registry)
    chain = canonical_chain(c, registry, q)
    for face, v in chain_boundary(c, q, chain).items():
        if any(v):
            raise IncompatibleQuotientError(
                f"canonical chain has nonzero boundary {registry.format(v)} at {face!r}",
                face=face,
            )
    nz = chain.nonzero_cells()
    witness = {s: q.coordinates(v) for s, v in zip(chain.cells, chain.coefficients)}
    return Verdict(bool(nz), nz[0] if nz else None, witness, q.free_rank, q.torsion_factors)


class Compatibility(NamedTuple):
    compatible: bool
    offending: Relation | None


def classifier_compatible(c: LabeledComplex, registry: TypeRegistry, cl: Classifier) -> Compatibility:
    """Every strict relation must map to zero in the classifier group."""
    cl.check_total(registry)
    for rel in strict_relations(c, registry):
        if any(cl.evaluate(registry, rel.vector)):
            return Compatibility(False, rel)
    return Compatibility(True, None)


def classifier_verdict(c: LabeledComplex, registry: TypeRegistry, cl: Classifier) -> Verdict:
    ok, bad = classifier_compatible(c, registry, cl)
    if not ok:
        raise IncompatibleClassifierError(
            f"relation {registry.format(bad.vector)} at {bad.site!r} maps to "
            f"{cl.evaluate(registry, bad.vector)} != 0", offending=bad,
        )
    witness = {s: cl.assignment[c.labels[s]] for s in c.top_cells}
    D = c.top_boundary
    for i, face in enumerate(c.faces):
        acc = [0] * cl.width
        for j, s in enumerate(c.top_cells):
            if D[i, j]:
                for k, g in enumerate(witness[s]):
                    acc[k] += D[i, j] * g
        if any(cl.normalize(acc)):
            raise IncompatibleClassifierError(f"pushed chain is not a cycle at {face!r}")
    nz = [s for s in c.top_cells if any(witness[s])]
    return Verdict(bool(nz), nz[0] if nz else None, witness, cl.free_rank,
                   tuple(cl.torsion), source="classifier")


@dataclass
class Thm5Report:
    g: int
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def thm5_hypothesis_check(c: LabeledComplex, registry: TypeRegistry, g: int) -> Thm5Report:
    """Check the surface-transition conditions at every singular vertex of a graph.

    Degree-2 vertices: both non-orientable of genus < g, both orientable, or
    one orientable and the other non-orientable of genus exactly g.
    Degree-3 vertices: all orientable, or all non-orientable with exactly one
    of genus g and the rest of genus < g.  Degree counts nonzero incidences
    weighted by |coefficient|, so loop edges (zero incidence) are invisible
    here.  When non-orientable labels occur, g must be their largest genus;
    an all-orientable graph passes vacuously.
    """
    if c.n != 1:
        raise ValueError("the surface-transition check applies to graphs (n = 1)")
    require_valid(c, registry)
    types = {s: registry[c.labels[s]] for s in c.top_cells}
    for s, t in types.items():
        if not t.is_surface:
            raise ValueError(f"edge {s!r} is labeled with non-surface type {t.id!r}")
    rep = Thm5Report(g)
    nonor = [t.genus for t in types.values() if not t.orientable]
    if nonor and max(nonor) != g:
        rep.violations.append(f"largest non-orientable genus is {max(nonor)}, not g = {g}")

    def desc(t):
        return f"{t.id}({'orientable' if t.orientable else 'non-orientable'} genus {t.genus})"

    for v in c.faces:
        if c.mark(v) not in (SINGULAR, INVISIBLE):
            continue
        ends = [types[s] for s, k in c.cofaces(v) for _ in range(abs(k))]
        if len(ends) == 2:
            a, b = ends
            if not a.orientable and not b.orientable:
                ok = a.genus < g and b.genus < g
            elif a.orientable and b.orientable:
                ok = True
            else:
                no = a if not a.orientable else b
                ok = no.genus == g
            if not ok:
                rep.violations.append(
                    f"vertex {v!r}: transition {desc(a)} / {desc(b)} is not allowed")
        elif len(ends) == 3:
            if all(t.orientable for t in ends):
                continue
            if any(t.orientable for t in ends):
                rep.violations.append(f"vertex {v!r}: mixed orientability at a Y-vertex")
                continue
            top = [t for t in ends if t.genus == g]
            rest = [t for t in ends if t.genus != g]
            if len(top) != 1 or any(t.genus >= g for t in rest):
                rep.violations.append(
                    f"vertex {v!r}: Y-vertex genera {[t.genus for t in ends]} need exactly "
                    f"one of genus {g} and the others below {g}")
        elif len(ends) > 3:
            rep.violations.append(f"vertex {v!r}: degree {len(ends)} is neither 2 nor 3")
    return rep
