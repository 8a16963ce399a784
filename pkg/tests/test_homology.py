from fractions import Fraction

import pytest

from reebcert.algebra import RingSpec, build_quotient
from reebcert.complex import LabeledComplex, theorem1_verdict, universal_quotient
from reebcert.errors import ValidationError
from reebcert.generators import (
    fig1_theta,
    fig3_round_fold,
    fig7_round_fold,
    loop_graph,
    random_scene,
    thm4_graph,
    thm5_demo,
)
from reebcert.homology import homology_over, top_homology_with_quotient


def rank_over(m, p=None):
    """Matrix rank over Q (p None) or GF(p), by plain elimination."""
    a = [[Fraction(x) if p is None else x % p for x in row] for row in m]
    rank, cols = 0, len(a[0]) if a else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(a)) if a[r][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = 1 / a[rank][c] if p is None else pow(a[rank][c], -1, p)
        for r in range(len(a)):
            if r != rank and a[r][c]:
                f = a[r][c] * inv
                a[r] = [x - f * y if p is None else (x - f * y) % p for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank


def betti_oracle(c, p=None):
    ranks = {}
    for k in range(1, c.n + 1):
        D = c.boundary.get(k)
        ranks[k] = rank_over(D.tolist(), p) if D is not None and D.rows and D.cols else 0
    return [len(c.cells.get(k, ())) - ranks.get(k, 0) - ranks.get(k + 1, 0) for k in range(c.n + 1)]


def test_circle():
    h = homology_over(loop_graph().complex)
    assert h.groups == ((1, ()), (1, ()))
    assert h.describe(1) == "Z"


def test_fig3_is_a_sphere():
    h = homology_over(fig3_round_fold().complex)
    assert h.groups == ((1, ()), (0, ()), (1, ()))


def test_disk():
    disk = LabeledComplex.build(2, {0: ["p"], 1: ["c"], 2: ["D"]}, {2: [("c", "D", 1)]},
                                {"D": "F"}, {"c": "boundary_face"})
    assert homology_over(disk).groups == ((1, ()), (0, ()), (0, ()))


def test_projective_plane_torsion():
    rp2 = LabeledComplex.build(2, {0: ["p"], 1: ["c"], 2: ["D"]}, {2: [("c", "D", 2)]},
                               {"D": "F"}, {})
    assert homology_over(rp2).groups == ((1, ()), (0, (2,)), (0, ()))
    assert homology_over(rp2, RingSpec.mod(2)).groups == ((0, (2,)), (0, (2,)), (0, (2,)))


def test_fig7_round_fold_is_a_sphere():
    assert homology_over(fig7_round_fold().complex).groups == ((1, ()), (0, ()), (1, ()))


@pytest.mark.parametrize("make,table", [
    (fig3_round_fold, [1, 0, 1]),
    (loop_graph, [1, 1]),
    (fig1_theta, [1, 2]),
    (thm5_demo, [1, 1]),
])
def test_mod2_tables(make, table):
    h = homology_over(make().complex, RingSpec.mod(2))
    assert [f + len(t) for f, t in h.groups] == table
    assert all(f == 0 and set(t) <= {2} for f, t in h.groups)


def test_invalid_complex_rejected():
    c = fig3_round_fold().complex
    bad = LabeledComplex(c.n, c.cells, c.boundary, {}, c.face_marks)
    with pytest.raises(ValidationError):
        homology_over(bad)


def test_euler_poincare_and_rank_oracle():
    for seed in range(80):
        c = random_scene(seed).complex
        h = homology_over(c)
        cells = sum((-1) ** k * len(c.cells.get(k, ())) for k in range(c.n + 1))
        assert cells == sum((-1) ** k * h.betti(k) for k in range(c.n + 1))
        assert [h.betti(k) for k in range(c.n + 1)] == betti_oracle(c)
        h2 = homology_over(c, RingSpec.mod(2))
        assert [len(t) for _, t in h2.groups] == betti_oracle(c, 2)


def test_top_homology_fig3():
    s = fig3_round_fold()
    q = universal_quotient(s.complex, s.registry)
    th = top_homology_with_quotient(s.complex, s.registry, q)
    assert (th.free_rank, th.torsion) == (0, (2,))
    assert th.canonical_nonzero and th.canonical_generates


def test_top_homology_zero_module():
    s = thm5_demo()
    q = build_quotient(len(s.registry), [s.registry.unit(t) for t in s.registry.ids])
    th = top_homology_with_quotient(s.complex, s.registry, q)
    assert th.is_trivial and not th.canonical_nonzero


def test_top_homology_loop():
    s = loop_graph()
    q = universal_quotient(s.complex, s.registry)
    th = top_homology_with_quotient(s.complex, s.registry, q)
    assert (th.free_rank, th.torsion) == (1, ())
    assert th.canonical_generates


def test_top_homology_thm4():
    s = thm4_graph(3)
    q = universal_quotient(s.complex, s.registry)
    th = top_homology_with_quotient(s.complex, s.registry, q)
    assert th.canonical_nonzero


def test_verdict_agrees_with_top_homology():
    for seed in range(60):
        s = random_scene(seed)
        q = universal_quotient(s.complex, s.registry)
        v = theorem1_verdict(s.complex, s.registry, q)
        th = top_homology_with_quotient(s.complex, s.registry, q)
        assert v.nonvanishing == th.canonical_nonzero
