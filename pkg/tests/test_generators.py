from collections import Counter

import pytest

from reebcert.algebra import build_quotient, hnf_rows
from reebcert.complex import (
    BOUNDARY_FACE,
    INVISIBLE,
    REGULAR,
    SINGULAR,
    LabeledComplex,
    strict_relations,
    theorem1_verdict,
    thm5_hypothesis_check,
    universal_quotient,
    validate,
)
from reebcert.errors import RegistryError
from reebcert.fibers import FiberType, TypeRegistry
from reebcert.generators import (
    GENERATORS,
    fig3_profile,
    fig3_round_fold,
    fig7_profile,
    fig7_round_fold,
    flipped,
    random_graph,
    random_scene,
    relabeled,
    spin,
    spin_scene,
    thm4_graph,
    thm4_graph_even,
    thm5_demo,
)
from reebcert.homology import homology_over
from reebcert.scene import Scene


def lattice(vectors, width):
    return hnf_rows(vectors, width)


def quotient(s):
    return universal_quotient(s.complex, s.registry)


def test_fig3_distinct_and_identified():
    s = fig3_round_fold()
    assert sorted(r.vector for r in strict_relations(s.complex, s.registry)) == [(1, -2), (1, 0)]
    assert quotient(s).invariant_factors() == (0, (2,))
    same = fig3_round_fold("S", "S")
    assert quotient(same).is_trivial
    assert homology_over(s.complex).groups == ((1, ()), (0, ()), (1, ()))
    with pytest.raises(RegistryError):
        fig3_round_fold("S", "Nope", TypeRegistry([FiberType.sphere("S")]))


@pytest.mark.parametrize("g", [3, 5, 7, 9, 11, 13, 15])
def test_thm4_odd(g):
    s = thm4_graph(g)
    reg = s.registry
    h = (g - 1) // 2
    c = s.complex
    assert validate(c, reg).ok
    deg = Counter()
    for v in c.faces:
        deg[v] = sum(abs(k) for _, k in c.cofaces(v))
    assert sorted(deg.values()) == [2, 2, 3, 3]
    rels = [r.vector for r in strict_relations(c, reg)]
    e = lambda k: reg.unit(f"Sigma_{k}")
    want = [tuple(a - b - d for a, b, d in zip(e(g), e(h), e(h + 1))),
            tuple(a - b for a, b in zip(e(h), e(h + 1)))]
    assert lattice(rels, len(reg)) == lattice(want, len(reg))
    q = quotient(s)
    assert q.invariant_factors() == (1, ())
    assert abs(q.coordinates(e(g))[0]) == 2
    assert abs(q.coordinates(e(h))[0]) == 1
    assert theorem1_verdict(c, reg, q).nonvanishing


def test_thm4_even():
    for g in (4, 6, 8):
        s = thm4_graph_even(g)
        q = quotient(s)
        assert q.invariant_factors() == (1, ())
        t = q.coordinates(s.registry.unit("Sigma_1"))
        for k in range(1, g):
            assert q.coordinates(s.registry.unit(f"Sigma_{k}")) == t
        assert q.coordinates(s.registry.unit(f"Sigma_{g}")) == (2 * t[0],)
        inter = s.complex.metadata["intermediate_genera"]
        assert inter and all(1 <= k <= g - 2 for k in inter)
        labels = {s.registry[l].genus for l in s.complex.labels.values()} - {g}
        assert all(1 <= k <= g - 1 for k in labels)


def test_thm4_parameter_errors():
    for bad in (1, 2, 4):
        with pytest.raises(ValueError):
            thm4_graph(bad)
    for bad in (2, 3, 5):
        with pytest.raises(ValueError):
            thm4_graph_even(bad)


def test_thm5_demo_relations():
    s = thm5_demo()
    reg = s.registry
    rels = [r.vector for r in strict_relations(s.complex, reg)]
    e = reg.unit
    sub = lambda a, b, k=1: tuple(x - k * y for x, y in zip(e(a), e(b)))
    want = {e("Sigma_0"), sub("Sigma_1", "Sigma_0"), sub("N_2", "Sigma_1"), sub("N_2", "N_1", 2)}
    want |= {tuple(-x for x in v) for v in want}
    assert set(rels) <= want
    assert {v for v in want if v in rels or tuple(-x for x in v) in rels} == want
    assert thm5_hypothesis_check(s.complex, reg, 2).ok
    q = quotient(s)
    assert q.invariant_factors() == (0, (2,))
    from reebcert.algebra import generates_cyclic
    assert generates_cyclic(q, e("N_1"))
    v = theorem1_verdict(s.complex, reg, q)
    assert s.complex.labels[v.witness_cell] == "N_1"
    mixed = {sub("N_2", "Sigma_1"), tuple(-x for x in sub("N_2", "Sigma_1"))}
    q2 = build_quotient(len(reg), [r for r in rels if r not in mixed])
    assert q2.invariant_factors() == (1, ())


def test_spin_preserves_relations():
    for s in (fig3_profile(), fig7_profile()):
        spun = spin_scene(s)
        assert validate(spun.complex, spun.registry).ok
        a = sorted(r.vector for r in strict_relations(s.complex, s.registry))
        b = sorted(r.vector for r in strict_relations(spun.complex, spun.registry))
        assert a == b
    f3 = spin_scene(fig3_profile())
    assert quotient(f3).invariant_factors() == (0, (2,))
    assert homology_over(f3.complex).groups == ((1, ()), (0, ()), (1, ()))
    assert homology_over(fig7_round_fold().complex).groups == ((1, ()), (0, ()), (1, ()))


def test_spin_thm5_verdict():
    s = thm5_demo()
    spun = spin_scene(s, ["b0"])
    v1 = theorem1_verdict(s.complex, s.registry, quotient(s))
    v2 = theorem1_verdict(spun.complex, spun.registry, quotient(spun))
    assert (v1.status, v1.torsion, v1.free_rank) == (v2.status, v2.torsion, v2.free_rank)


def _segment(base):
    reg = TypeRegistry([FiberType.symbolic("F"), FiberType.symbolic("G")])
    marks = {"a": BOUNDARY_FACE, "m": SINGULAR, "b": BOUNDARY_FACE}
    incid = [("m", "e1", 1), ("a", "e1", -1), ("b", "e2", 1), ("m", "e2", -1)]
    c = LabeledComplex.build(1, {0: ["a", "m", "b"], 1: ["e1", "e2"]}, {1: incid},
                             {"e1": "F", "e2": "G"}, marks, radial_base=base)
    return Scene(c, reg)


def test_spin_segment():
    disk = spin(_segment(("b",)).complex)
    assert homology_over(disk).groups == ((1, ()), (0, ()), (0, ()))
    sphere = spin(_segment(("a", "b")).complex)
    assert homology_over(sphere).groups == ((1, ()), (0, ()), (1, ()))
    assert sphere.mark("c:m") == SINGULAR and sphere.mark("c:a") == REGULAR


def test_spin_errors():
    with pytest.raises(ValueError):
        spin(fig3_round_fold().complex)
    with pytest.raises(ValueError):
        spin(thm5_demo().complex)
    with pytest.raises(ValueError):
        spin(thm5_demo().complex, ["v3"])
    with pytest.raises(ValueError):
        spin(thm5_demo().complex, ["nope"])


def test_random_scene_determinism_and_validity():
    marks = Counter()
    for seed in range(200):
        s = random_scene(seed)
        assert validate(s.complex, s.registry).ok
        t = random_scene(seed)
        assert t.complex == s.complex and t.registry == s.registry
        marks.update(s.complex.mark(f) for f in s.complex.faces)
        rels = strict_relations(s.complex, s.registry)
        assert rels == strict_relations(t.complex, t.registry)
    assert all(marks[m] for m in (REGULAR, SINGULAR, BOUNDARY_FACE, INVISIBLE))


def test_random_bounds():
    with pytest.raises(ValueError):
        random_scene(0, max_cells=0)
    with pytest.raises(ValueError):
        random_graph(0, max_vertices=0)


def test_flip_and_relabel_helpers():
    s = fig3_round_fold()
    f = flipped(s.complex)
    assert f.top_boundary == -s.complex.top_boundary
    r = relabeled(s, {"S": "X", "Sigma": "Y"}, ["Y", "X"])
    assert r.registry.ids == ["Y", "X"]
    assert quotient(r).invariant_factors() == (0, (2,))


def test_generator_table():
    for name, make in GENERATORS.items():
        s = make()
        assert validate(s.complex, s.registry).ok, name
