import random
from fractions import Fraction

import pytest

from koszulity import modules as mo
from koszulity import truncated as tr
from koszulity.algebra import InputError


def poly_ring_truncation(dualnum, cutoff=7):
    """dims (1,1,1,...): the dual of the dual numbers."""
    k = mo.simple_module(dualnum, 1, 0)
    return tr.koszul_dual(dualnum, [k], 1, cutoff).algebra


def test_koszul_dual_dual_numbers(dualnum):
    G = poly_ring_truncation(dualnum)
    assert G.dims() == {d: 1 for d in range(8)}
    # all products of basis elements are nonzero (polynomial ring)
    for d1 in range(4):
        for d2 in range(4):
            assert G.mult(d1, {0: Fraction(1)}, d2, {0: Fraction(1)})


def test_dual_degree_zero_is_end(delta_a4, t_summands):
    G = tr.koszul_dual(delta_a4, t_summands, 2, 1).algebra
    assert G.dim(0) == 10


def test_quasi_veronese_identity(dualnum):
    G = poly_ring_truncation(dualnum)
    GV = tr.quasi_veronese(G, 1)
    assert GV.dims() == G.dims()
    assert GV.products == G.products


def test_quasi_veronese_poly_dims(dualnum):
    G = poly_ring_truncation(dualnum)
    GV = tr.quasi_veronese(G, 2)
    assert GV.dim(0) == 3
    for i in range(1, GV.cutoff + 1):
        assert GV.dim(i) == 4
    GV.check()


def test_quasi_veronese_dim_formula(delta_a4, t_summands):
    G = tr.koszul_dual(delta_a4, t_summands, 2, 5).algebra
    for r in (2, 3):
        GV = tr.quasi_veronese(G, r)
        for i in range(GV.cutoff + 1):
            expected = sum(G.dim(r * i + k - j)
                           for j in range(r) for k in range(r))
            assert GV.dim(i) == expected


def test_quasi_veronese_cutoff_guard(dualnum):
    G = tr.truncate_algebra(dualnum, 0)
    with pytest.raises(InputError):
        tr.quasi_veronese(G, 2)


def test_twist_by_identity(dualnum):
    G = poly_ring_truncation(dualnum, cutoff=4)
    tw = tr.twist_algebra(G, tr.identity_truncated_morphism(G))
    assert tw.products == G.products
    assert tw.basis == G.basis


def test_double_twist_restores(nak2):
    from koszulity.frobenius import frobenius_analysis

    # dual of the cyclic Nakayama algebra carries the swap automorphism
    s = [mo.simple_module(nak2, v, 0) for v in nak2.vertices]
    dual = tr.koszul_dual(nak2, s, 1, 3)
    from koszulity import koszul as ko

    fr = frobenius_analysis(nak2)
    md = ko.mu_permutation(s, fr.mu, rng=random.Random(0))
    phi = ko.build_mu_bar(nak2, dual, fr.mu, md, rng=random.Random(0))
    tw = tr.twist_algebra(dual.algebra, phi)
    back = tr.twist_algebra(tw, phi.inverse())
    assert back.products == dual.algebra.products
    tw.check()


def test_swap_twist_changes_products(nak2):
    from koszulity.frobenius import frobenius_analysis
    from koszulity import koszul as ko

    s = [mo.simple_module(nak2, v, 0) for v in nak2.vertices]
    dual = tr.koszul_dual(nak2, s, 1, 3)
    fr = frobenius_analysis(nak2)
    md = ko.mu_permutation(s, fr.mu, rng=random.Random(0))
    phi = ko.build_mu_bar(nak2, dual, fr.mu, md, rng=random.Random(0))
    assert not phi.is_identity()
    tw = tr.twist_algebra(dual.algebra, phi)
    tw.check()
    # tags of degree-1 elements change under the vertex permutation
    assert tw.tags(1) != dual.algebra.tags(1)


def test_induced_veronese_automorphism_identity(dualnum):
    G = poly_ring_truncation(dualnum, cutoff=5)
    ident = tr.identity_truncated_morphism(G)
    GV = tr.quasi_veronese(G, 2)
    lifted = tr.induced_veronese_automorphism(G, ident, 2, GV=GV)
    assert lifted.is_identity()


def test_induced_veronese_compatible_with_composition(nak2):
    from koszulity.frobenius import frobenius_analysis
    from koszulity import koszul as ko

    s = [mo.simple_module(nak2, v, 0) for v in nak2.vertices]
    dual = tr.koszul_dual(nak2, s, 1, 5)
    fr = frobenius_analysis(nak2)
    md = ko.mu_permutation(s, fr.mu, rng=random.Random(0))
    phi = ko.build_mu_bar(nak2, dual, fr.mu, md, rng=random.Random(0))
    G = dual.algebra
    GV = tr.quasi_veronese(G, 2)
    square = tr.compose_truncated(phi, phi)
    lift_each = tr.compose_truncated(
        tr.induced_veronese_automorphism(G, phi, 2, GV=GV),
        tr.induced_veronese_automorphism(G, phi, 2, GV=GV),
    )
    lift_square = tr.induced_veronese_automorphism(G, square, 2, GV=GV)
    for d in range(GV.cutoff + 1):
        assert lift_each.mat(d) == lift_square.mat(d)


def test_dump_deterministic(dualnum):
    G = poly_ring_truncation(dualnum, cutoff=3)
    assert G.dump() == G.dump()
    assert "basis 0 0 0" in G.dump()
    assert G.dump().endswith("end")
