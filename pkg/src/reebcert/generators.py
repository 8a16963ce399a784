"""Example Reeb spaces, the spin construction, and random valid scenes.

The cell structures behind these scenes are only described in words, so
each generator realizes the stated combinatorial constraints (doubling,
label ranges, cap counts) with the smallest graph that satisfies them.  Nothing
here claims that a scene is realized by an actual smooth map.
"""

from __future__ import annotations

import random
from typing import Mapping, Sequence

from .algebra import IntMatrix, RingSpec
from .complex import (
    BOUNDARY_FACE,
    INVISIBLE,
    REGULAR,
    SINGULAR,
    LabeledComplex,
    require_valid,
)
from .errors import RegistryError
from .fibers import FiberType, KLEIN, TypeRegistry, euler_parity_classifier
from .scene import Scene


def _graph(vertices, edges, marks, **kwargs) -> LabeledComplex:
    """Graph from ``edges = [(id, tail, head, label)]``; loops have zero incidence."""
    incid = []
    for e, tail, head, _ in edges:
        if tail != head:
            incid += [(head, e, 1), (tail, e, -1)]
    return LabeledComplex.build(
        1, {0: vertices, 1: [e for e, *_ in edges]}, {1: incid},
        {e: lab for e, _, _, lab in edges}, marks, **kwargs,
    )


def _need(registry: TypeRegistry, *ids: str) -> None:
    for i in ids:
        if i not in registry:
            raise RegistryError(f"unknown fiber type id {i!r}")


def fig1_theta(a1="a1", a2="a2", a3="a3", registry: TypeRegistry | None = None) -> Scene:
    """Theta graph: two Y-vertices where a1 and a2 merge into a3 and split back.

    Each Y-vertex yields the relation +-(e[a1] + e[a2] - e[a3]).
    """
    if registry is None:
        registry = TypeRegistry()
        for t in dict.fromkeys((a1, a2, a3)):
            registry.register(FiberType.symbolic(t))
    _need(registry, a1, a2, a3)
    c = _graph(
        ["v", "w"],
        [("E1", "w", "v", a1), ("E2", "w", "v", a2), ("E3", "v", "w", a3)],
        {"v": SINGULAR, "w": SINGULAR},
        fiber_dim=None, metadata={"generator": "fig1"},
    )
    return Scene(c, registry)


def loop_graph(label="F", registry: TypeRegistry | None = None) -> Scene:
    """A circle: one vertex, one loop edge.  No relation arises anywhere."""
    if registry is None:
        registry = TypeRegistry([FiberType.symbolic(label)])
    _need(registry, label)
    c = _graph(["p"], [("e", "p", "p", label)], {}, metadata={"generator": "loop"})
    return Scene(c, registry)


def loop_surface(kind: str = "crosscap") -> Scene:
    """Loop graph labeled with a projective plane or a torus, with the chi-parity classifier."""
    if kind == "crosscap":
        t = FiberType.surface("RP2", 1, orientable=False, convention="crosscap")
    elif kind == "torus":
        t = FiberType.surface("T2", 1, orientable=True)
    else:
        raise ValueError(f"unknown loop surface {kind!r}; use crosscap or torus")
    reg = TypeRegistry([t])
    s = loop_graph(t.id, reg)
    s.complex = LabeledComplex(1, s.complex.cells, s.complex.boundary, s.complex.labels,
                               fiber_dim=2, metadata={"generator": f"loop-{kind}"})
    s.ring = RingSpec.mod(2)
    s.classifier = euler_parity_classifier(reg)
    return s


def fig3_round_fold(S="S", Sigma="Sigma", registry: TypeRegistry | None = None) -> Scene:
    """Round fold map with fibers: empty outside, S on the annulus, two copies of Sigma inside.

    2-cells: annulus ``A`` (label S) and disks ``D1``, ``D2`` (label Sigma).
    The outer circle is a boundary face, the inner circle a singular face
    where two Sigma sheets merge into S.  With S != Sigma the relations are
    e[S] and e[S] - 2 e[Sigma].
    """
    if registry is None:
        registry = TypeRegistry([FiberType.sphere(S, "standard")])
        if Sigma != S:
            registry.register(FiberType.sphere(Sigma, "exotic"))
    _need(registry, S, Sigma)
    c = LabeledComplex.build(
        2,
        {0: ["p_out", "p_in"], 1: ["c_out", "c_in", "r"], 2: ["A", "D1", "D2"]},
        {
            1: [("p_out", "r", 1), ("p_in", "r", -1)],
            2: [("c_out", "A", 1), ("c_in", "A", 1), ("c_in", "D1", -1), ("c_in", "D2", -1)],
        },
        {"A": S, "D1": Sigma, "D2": Sigma},
        {"c_out": BOUNDARY_FACE, "c_in": SINGULAR},
        metadata={"generator": "fig3", "identified": S == Sigma},
    )
    return Scene(c, registry)


def fig3_profile(S="S", Sigma="Sigma") -> Scene:
    """Radial profile graph of :func:`fig3_round_fold`; spinning it gives the same relations."""
    reg = TypeRegistry([FiberType.sphere(S, "standard")])
    if Sigma != S:
        reg.register(FiberType.sphere(Sigma, "exotic"))
    c = _graph(
        ["cap", "v", "b1", "b2"],
        [("eS", "v", "cap", S), ("eA", "b1", "v", Sigma), ("eB", "b2", "v", Sigma)],
        {"cap": BOUNDARY_FACE, "v": SINGULAR, "b1": BOUNDARY_FACE, "b2": BOUNDARY_FACE},
        radial_base=("b1", "b2"), metadata={"generator": "fig3-profile"},
    )
    return Scene(c, reg)


def _doubled_chain(g: int, low: int, high: int, generator: str) -> Scene:
    """Sigma_g splits into Sigma_low and Sigma_high at u and re-forms at u'.

    One path climbs Sigma_low -> ... -> Sigma_high through degree-2 vertices,
    the other path descends, so the second copy is the first upside down.
    """
    genera = list(range(low, high + 1))
    reg = TypeRegistry()
    for k in sorted(set(genera) | {g}):
        reg.register(FiberType.surface(f"Sigma_{k}", k, oriented=True))
    name = lambda k: f"Sigma_{k}"
    vertices = ["u", "u'"]
    edges = [("G", "u'", "u", name(g))]
    for tag, seq in (("p", genera), ("q", genera[::-1])):
        inner = [f"w{tag}{i}" for i in range(1, len(seq))]
        vertices += inner
        stops = ["u"] + inner + ["u'"]
        for i, k in enumerate(seq):
            edges.append((f"{tag}{i}", stops[i], stops[i + 1], name(k)))
    c = _graph(vertices, edges, {v: SINGULAR for v in vertices}, fiber_dim=2, metadata={
        "generator": generator,
        "g": g,
        "index0_components_m3": 2,
        "index0_components_m_gt_3": 1,
        "intermediate_genera": genera[1:-1],
        "split": [low, high],
    })
    return Scene(c, reg)


def thm4_graph(g: int) -> Scene:
    """Doubled Y graph for odd g >= 3: Sigma_g -> Sigma_h + Sigma_(h+1), h = (g-1)/2."""
    if g < 3 or g % 2 == 0:
        raise ValueError(f"thm4 graph needs odd g >= 3, got {g}")
    h = (g - 1) // 2
    return _doubled_chain(g, h, h + 1, "thm4")


def thm4_graph_even(g: int) -> Scene:
    """Even g >= 4: split Sigma_g -> Sigma_1 + Sigma_(g-1), chained through genera 2..g-2."""
    if g < 4 or g % 2:
        raise ValueError(f"even thm4 graph needs even g >= 4, got {g}")
    return _doubled_chain(g, 1, g - 1, "thm4-even")


def _thm5_registry() -> TypeRegistry:
    return TypeRegistry([
        FiberType.surface("Sigma_0", 0),
        FiberType.surface("Sigma_1", 1),
        FiberType.surface("N_1", 1, orientable=False, convention=KLEIN),
        FiberType.surface("N_2", 2, orientable=False, convention=KLEIN),
    ])


def thm5_demo() -> Scene:
    """Closed Reeb graph through sphere, torus, N_2 and a pair of Klein bottles.

    Left half: cap -Sigma_0- v1 -Sigma_1- v2 -N_2- v3, where N_2 splits into
    two copies of N_1 = K; the right half is the mirror image.  Up to sign
    the relations are e[Sigma_0], e[Sigma_1] - e[Sigma_0], e[N_2] - e[Sigma_1]
    and e[N_2] - 2 e[N_1].
    """
    reg = _thm5_registry()
    chain = ["b0", "v1", "v2", "v3", "v4", "v5", "v6", "b1"]
    labels = ["Sigma_0", "Sigma_1", "N_2", None, "N_2", "Sigma_1", "Sigma_0"]
    edges = []
    for i, lab in enumerate(labels):
        a, b = chain[i], chain[i + 1]
        if lab is None:
            edges += [("Ka", a, b, "N_1"), ("Kb", a, b, "N_1")]
        else:
            edges.append((f"e{i}", a, b, lab))
    marks = {v: SINGULAR for v in chain}
    marks["b0"] = marks["b1"] = BOUNDARY_FACE
    c = _graph(chain, edges, marks, fiber_dim=2, metadata={"generator": "thm5", "g": 2})
    return Scene(c, reg)


def fig7_profile() -> Scene:
    """Half of :func:`thm5_demo` seen radially: two Klein bottles at the center."""
    reg = _thm5_registry()
    vertices = ["cap", "v6", "v5", "v4", "k1", "k2"]
    edges = [
        ("e0", "v6", "cap", "Sigma_0"), ("e1", "v5", "v6", "Sigma_1"),
        ("e2", "v4", "v5", "N_2"), ("Ka", "k1", "v4", "N_1"), ("Kb", "k2", "v4", "N_1"),
    ]
    marks = {v: SINGULAR for v in vertices}
    marks.update(cap=BOUNDARY_FACE, k1=BOUNDARY_FACE, k2=BOUNDARY_FACE)
    c = _graph(vertices, edges, marks, fiber_dim=2, radial_base=("k1", "k2"),
               metadata={"generator": "fig7-profile", "g": 2})
    return Scene(c, reg)


def spin(c: LabeledComplex, base: Sequence[str] | None = None) -> LabeledComplex:
    """Round-fold spin of a graph: radial profile times the circle.

    Each vertex v becomes a point ``p:v`` with a loop ``c:v``, each edge e an
    annulus ``A:e`` with a radial edge ``r:e``, and each base vertex gets a
    center disk ``Z:v`` carrying the label of its edge, which makes the base
    circle regular.  The annulus meets ``c:v`` with the graph's incidence
    coefficient, so every non-base relation is reproduced at the circle
    ``c:v``; base vertices carry no relation before or after.
    """
    if c.n != 1:
        raise ValueError("spin is supported for graphs (n = 1) only")
    require_valid(c)
    base = tuple(c.radial_base if base is None else base)
    if not base:
        raise ValueError("spin needs at least one radial base vertex")
    D = c.top_boundary
    V, E = c.faces, c.top_cells
    for j, e in enumerate(E):
        col = sorted(v for v in D.col(j) if v)
        if col not in ([], [-1, 1]):
            raise ValueError(f"edge {e!r} is not a graph edge (boundary {D.col(j)})")
    base_edge = {}
    for b in base:
        if b not in V:
            raise ValueError(f"base {b!r} is not a vertex")
        co = c.cofaces(b)
        if len(co) != 1 or abs(co[0][1]) != 1:
            raise ValueError(f"base {b!r} must have exactly one edge, has {co}")
        base_edge[b] = co[0]

    pts = [f"p:{v}" for v in V]
    circles = [f"c:{v}" for v in V]
    radials = [f"r:{e}" for e in E]
    annuli = [f"A:{e}" for e in E]
    caps = [f"Z:{b}" for b in base]
    inc1, inc2 = [], []
    for i, v in enumerate(V):
        for j, e in enumerate(E):
            if D[i, j]:
                inc1.append((f"p:{v}", f"r:{e}", D[i, j]))
                inc2.append((f"c:{v}", f"A:{e}", D[i, j]))
    labels = {f"A:{e}": c.labels[e] for e in E}
    for b, (e, s) in base_edge.items():
        inc2.append((f"c:{b}", f"Z:{b}", -s))
        labels[f"Z:{b}"] = c.labels[e]
    marks = {f"c:{v}": c.face_marks[v] for v in V if v in c.face_marks}
    for b in base:
        marks[f"c:{b}"] = REGULAR
    meta = dict(c.metadata)
    meta["spun_from"] = meta.get("generator", "graph")
    meta["generator"] = "spin"
    return LabeledComplex.build(
        2, {0: pts, 1: circles + radials, 2: annuli + caps}, {1: inc1, 2: inc2},
        labels, marks, fiber_dim=c.fiber_dim, metadata=meta,
    )


def spin_scene(scene: Scene, base: Sequence[str] | None = None) -> Scene:
    return Scene(spin(scene.complex, base), scene.registry, scene.ring,
                 scene.extra_relations, scene.classifier)


def fig7_round_fold() -> Scene:
    return spin_scene(fig7_profile())


# -- random instances -------------------------------------------------------

def _random_marks(rows: Mapping[str, list[tuple[str, int]]], labels, rng) -> dict[str, str]:
    marks = {}
    for face, co in rows.items():
        coeffs = sorted(k for _, k in co)
        r = rng.random()
        if coeffs in ([-1], [1]):
            marks[face] = BOUNDARY_FACE if r < 0.6 else SINGULAR
        elif coeffs == [-1, 1]:
            same = labels[co[0][0]] == labels[co[1][0]]
            if same:
                marks[face] = REGULAR if r < 0.6 else SINGULAR
            else:
                marks[face] = INVISIBLE if r < 0.4 else SINGULAR
        elif r < 0.8:
            marks[face] = SINGULAR
    return marks


def _rows(c: LabeledComplex) -> dict[str, list[tuple[str, int]]]:
    return {f: c.cofaces(f) for f in c.faces}


def _symbolic_registry(k: int) -> TypeRegistry:
    return TypeRegistry([FiberType.symbolic(f"T{i}") for i in range(k)])


def random_graph(
    seed: int,
    max_vertices: int = 5,
    max_edges: int = 6,
    n_types: int = 3,
    with_base: bool = False,
) -> Scene:
    if max_vertices < 1 or max_edges < 1 or n_types < 1:
        raise ValueError("random graph bounds must be positive")
    rng = random.Random(seed)
    reg = _symbolic_registry(rng.randint(1, n_types))
    ids = reg.ids
    nv = rng.randint(1, max_vertices)
    verts = [f"v{i}" for i in range(nv)]
    edges = []
    for j in range(rng.randint(1, max_edges)):
        tail = rng.choice(verts)
        head = tail if rng.random() < 0.1 else rng.choice(verts)
        edges.append((f"e{j}", tail, head, rng.choice(ids)))
    base = ()
    if with_base:
        verts.append("base")
        edges.append(("eb", "base", rng.choice(verts[:-1]), rng.choice(ids)))
        base = ("base",)
    c = _graph(verts, edges, {})
    marks = _random_marks(_rows(c), c.labels, rng)
    if with_base:
        marks["base"] = BOUNDARY_FACE
    c = _graph(verts, edges, marks, radial_base=base, metadata={"generator": "random-graph",
                                                                "seed": seed})
    return Scene(c, reg)


def _random_book(rng, seed, max_cells, n_types) -> Scene:
    """One point, k loops, and 2-cells glued along loops with arbitrary degrees."""
    reg = _symbolic_registry(rng.randint(1, n_types))
    k = rng.randint(1, max_cells)
    m = rng.randint(1, max_cells)
    loops = [f"l{i}" for i in range(k)]
    tops = [f"s{j}" for j in range(m)]
    inc = []
    for s in tops:
        for l in rng.sample(loops, rng.randint(1, min(3, k))):
            coeff = rng.choice([1, 1, 1, -1, -1, -1, 2, -2])
            inc.append((l, s, coeff))
    labels = {s: rng.choice(reg.ids) for s in tops}
    c = LabeledComplex.build(2, {0: ["p"], 1: loops, 2: tops}, {2: inc}, labels)
    marks = _random_marks(_rows(c), labels, rng)
    c = LabeledComplex.build(2, {0: ["p"], 1: loops, 2: tops}, {2: inc}, labels, marks,
                             metadata={"generator": "random-book", "seed": seed})
    return Scene(c, reg)


def random_scene(seed: int, max_cells: int = 6, n_types: int = 3) -> Scene:
    """Deterministic valid scene: a graph, a book of 2-cells, or a spun graph."""
    if max_cells < 1 or n_types < 1:
        raise ValueError("random scene bounds must be positive")
    rng = random.Random(seed)
    family = rng.choice(["graph", "book", "spun"])
    sub = rng.randrange(2 ** 32)
    if family == "graph":
        return random_graph(sub, max_cells, max_cells, n_types)
    if family == "book":
        return _random_book(rng, seed, max_cells, n_types)
    return spin_scene(random_graph(sub, max(1, max_cells // 2), max(1, max_cells // 2),
                                   n_types, with_base=True))


def flipped(c: LabeledComplex) -> LabeledComplex:
    """Same complex with every top cell's orientation reversed (D_n negated)."""
    return c.with_top_boundary(-c.top_boundary)


def relabeled(scene: Scene, mapping: Mapping[str, str], order: Sequence[str] | None = None) -> Scene:
    """Rename fiber types by ``mapping`` and re-register them in ``order`` (new ids)."""
    new = {}
    for t in scene.registry:
        new[mapping[t.id]] = FiberType(mapping[t.id], t.kind, t.orientable, t.genus,
                                       t.convention, t.group_tag, t.name, t.oriented)
    reg = TypeRegistry([new[i] for i in (order or list(new))])
    c = scene.complex
    cx = LabeledComplex(c.n, c.cells, c.boundary, {s: mapping[t] for s, t in c.labels.items()},
                        c.face_marks, c.fiber_dim, c.radial_base, c.metadata)
    extra = tuple(tuple((k, mapping[t]) for k, t in terms) for terms in scene.extra_relations)
    return Scene(cx, reg, scene.ring, extra, None)


GENERATORS = {
    "fig1": lambda **kw: fig1_theta(),
    "fig3": lambda **kw: fig3_round_fold(),
    "fig3-identified": lambda **kw: fig3_round_fold("S", "S"),
    "fig3-profile": lambda **kw: fig3_profile(),
    "fig7": lambda **kw: fig7_round_fold(),
    "fig7-profile": lambda **kw: fig7_profile(),
    "thm4": lambda g=3, **kw: thm4_graph(g),
    "thm4-even": lambda g=4, **kw: thm4_graph_even(g),
    "thm5": lambda **kw: thm5_demo(),
    "loop": lambda surface="crosscap", **kw: loop_surface(surface),
    "random": lambda seed=0, size=6, types=3, **kw: random_scene(seed, size, types),
}
