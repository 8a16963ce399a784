"""Fiber-type registry and group-valued classifiers.

A fiber type is an opaque symbol standing for the diffeomorphism type of a
closed connected manifold; two types are equal iff their ids are equal.
The optional metadata (surface genus, orientability, sphere tag) only feeds
the helper classifiers below and the genus checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

from .algebra import IntMatrix, Vector, build_quotient, hnf_rows, left_kernel
from .errors import ClassifierError, RegistryError

SURFACE, SPHERE, SYMBOLIC = "surface", "sphere", "symbolic"
CROSSCAP, KLEIN = "crosscap", "klein"


@dataclass(frozen=True)
class FiberType:
    id: str
    kind: str = SYMBOLIC
    orientable: bool | None = None
    genus: int | None = None
    convention: str | None = None
    group_tag: str | None = None
    name: str | None = None
    oriented: bool = False

    def __post_init__(self):
        if self.kind == SURFACE:
            if self.orientable is None or self.genus is None:
                raise ValueError(f"surface type {self.id!r} needs orientable and genus")
            if self.genus < 0:
                raise ValueError(f"surface type {self.id!r} has negative genus")
            if not self.orientable:
                if self.genus < 1:
                    raise ValueError(f"non-orientable surface {self.id!r} needs genus >= 1")
                if self.convention not in (CROSSCAP, KLEIN):
                    raise ValueError(
                        f"non-orientable surface {self.id!r}: convention must be "
                        f"{CROSSCAP!r} or {KLEIN!r}"
                    )
        elif self.kind not in (SPHERE, SYMBOLIC):
            raise ValueError(f"unknown fiber kind {self.kind!r}")

    @classmethod
    def surface(cls, id, genus, orientable=True, convention=None, oriented=False):
        if not orientable and convention is None:
            convention = CROSSCAP
        return cls(id, SURFACE, orientable=orientable, genus=genus,
                   convention=None if orientable else convention, oriented=oriented)

    @classmethod
    def sphere(cls, id, group_tag="standard", oriented=True):
        return cls(id, SPHERE, group_tag=group_tag, oriented=oriented)

    @classmethod
    def symbolic(cls, id, name=None):
        return cls(id, SYMBOLIC, name=name)

    @property
    def is_surface(self) -> bool:
        return self.kind == SURFACE


def euler_characteristic(t: FiberType) -> int:
    """Euler characteristic of a surface type under its genus convention."""
    if not t.is_surface:
        raise ValueError(f"{t.id!r} is not a surface")
    if t.orientable or t.convention == KLEIN:
        return 2 - 2 * t.genus
    return 2 - t.genus


def unoriented_cobordism_class(t: FiberType) -> int:
    """Class in the unoriented 2-dimensional cobordism group Z/2 (chi mod 2)."""
    return euler_characteristic(t) % 2


class TypeRegistry:
    """Ordered fiber types; position i is coordinate i of Z^t."""

    def __init__(self, types: Sequence[FiberType] = ()):
        self._types: list[FiberType] = []
        self._index: dict[str, int] = {}
        for t in types:
            self.register(t)

    def register(self, t: FiberType) -> int:
        if t.id in self._index:
            raise RegistryError(f"duplicate fiber type id {t.id!r}")
        self._index[t.id] = len(self._types)
        self._types.append(t)
        return self._index[t.id]

    def index(self, type_id: str) -> int:
        try:
            return self._index[type_id]
        except KeyError:
            raise RegistryError(f"unknown fiber type id {type_id!r}") from None

    def __getitem__(self, type_id: str) -> FiberType:
        return self._types[self.index(type_id)]

    def __contains__(self, type_id) -> bool:
        return type_id in self._index

    def __len__(self) -> int:
        return len(self._types)

    def __iter__(self) -> Iterator[FiberType]:
        return iter(self._types)

    def __eq__(self, other):
        return isinstance(other, TypeRegistry) and self._types == other._types

    @property
    def ids(self) -> list[str]:
        return [t.id for t in self._types]

    def unit(self, type_id: str) -> Vector:
        i = self.index(type_id)
        return tuple(1 if j == i else 0 for j in range(len(self)))

    def vector(self, coeffs: Mapping[str, int] | Sequence[tuple[int, str]]) -> Vector:
        """Build a vector from ``{id: coeff}`` or ``[(coeff, id), ...]``."""
        out = [0] * len(self)
        items = coeffs.items() if isinstance(coeffs, Mapping) else ((i, c) for c, i in coeffs)
        for type_id, c in items:
            out[self.index(type_id)] += int(c)
        return tuple(out)

    def format(self, v: Sequence[int]) -> str:
        """Human form of a vector, e.g. ``e[S] - 2 e[Sigma]``."""
        terms = []
        for t, c in zip(self._types, v):
            if not c:
                continue
            mag = "" if abs(c) == 1 else f"{abs(c)} "
            sign = "-" if c < 0 else "+"
            terms.append((sign, f"{mag}e[{t.id}]"))
        if not terms:
            return "0"
        head = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        return " ".join([head] + [f"{s} {b}" for s, b in terms[1:]])


@dataclass(frozen=True)
class Classifier:
    """Homomorphic labeling of fiber types into Z^free_rank + sum Z/torsion_i.

    Group elements are int tuples: free coordinates first, then one
    coordinate per torsion factor (normalized into ``[0, factor)``).
    """

    free_rank: int
    torsion: tuple[int, ...]
    assignment: Mapping[str, tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self):
        if self.free_rank < 0 or any(d < 2 for d in self.torsion):
            raise ClassifierError("group needs free_rank >= 0 and torsion factors >= 2")
        norm = {}
        for type_id, v in self.assignment.items():
            v = tuple(int(x) for x in v)
            if len(v) != self.width:
                raise ClassifierError(
                    f"assignment of {type_id!r} has length {len(v)}, group needs {self.width}"
                )
            norm[type_id] = self.normalize(v)
        object.__setattr__(self, "torsion", tuple(self.torsion))
        object.__setattr__(self, "assignment", norm)

    @property
    def width(self) -> int:
        return self.free_rank + len(self.torsion)

    def normalize(self, v: Sequence[int]) -> tuple[int, ...]:
        f = self.free_rank
        return tuple(v[:f]) + tuple(x % d for x, d in zip(v[f:], self.torsion))

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.width

    def check_total(self, registry: TypeRegistry) -> None:
        missing = [t for t in registry.ids if t not in self.assignment]
        if missing:
            raise ClassifierError(f"classifier has no assignment for {', '.join(missing)}")

    def evaluate(self, registry: TypeRegistry, x: Sequence[int]) -> tuple[int, ...]:
        """Image of a vector of Z^t in the group."""
        self.check_total(registry)
        acc = [0] * self.width
        for type_id, c in zip(registry.ids, x):
            if c:
                for k, g in enumerate(self.assignment[type_id]):
                    acc[k] += c * g
        return self.normalize(acc)

    def describe(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion]
        if self.free_rank:
            parts.insert(0, "Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"


def kernel_relations(cl: Classifier, registry: TypeRegistry) -> list[Vector]:
    """HNF basis of the kernel of the induced map Z^t -> G.

    Solved as a left kernel of the assignment matrix stacked over the
    torsion rows, then projected back onto the type coordinates.
    """
    cl.check_total(registry)
    t = len(registry)
    rows = [cl.assignment[i] for i in registry.ids]
    f = cl.free_rank
    for k, d in enumerate(cl.torsion):
        rows.append(tuple(d if j == f + k else 0 for j in range(cl.width)))
    if cl.width == 0:
        return [registry.unit(i) for i in registry.ids]
    M = IntMatrix.from_rows(rows, cols=cl.width)
    return hnf_rows((y[:t] for y in left_kernel(M)), t)


def classifier_quotient(cl: Classifier, registry: TypeRegistry):
    """Quotient of Z^t by the classifier kernel (isomorphic to the image)."""
    return build_quotient(len(registry), kernel_relations(cl, registry))


def euler_parity_classifier(registry: TypeRegistry) -> Classifier:
    """Z/2 classifier chi mod 2: the unoriented cobordism class of a surface."""
    return Classifier(0, (2,), {t.id: (unoriented_cobordism_class(t),) for t in registry})


def sphere_classifier(
    registry: TypeRegistry,
    free_rank: int,
    torsion: Sequence[int],
    tag_values: Mapping[str, Sequence[int]],
) -> Classifier:
    """Classifier on homotopy-sphere types keyed by ``group_tag``.

    The group and the value of each tag are user data; the tag ``standard``
    defaults to zero.
    """
    width = free_rank + len(torsion)
    assignment = {}
    for t in registry:
        if t.kind != SPHERE:
            raise ClassifierError(f"{t.id!r} is not a sphere type")
        if t.group_tag in tag_values:
            assignment[t.id] = tuple(tag_values[t.group_tag])
        elif t.group_tag == "standard":
            assignment[t.id] = (0,) * width
        else:
            raise ClassifierError(f"no group value for sphere tag {t.group_tag!r}")
    return Classifier(free_rank, tuple(torsion), assignment)
