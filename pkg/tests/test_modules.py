import random
from fractions import Fraction

import pytest

from koszulity import modules as mo
from koszulity.algebra import InputError
from conftest import data_path


def test_projective_dims(delta_a4):
    dims = [mo.projective_module(delta_a4, v).dims_by_degree()
            for v in delta_a4.vertices]
    assert dims == [{0: 3, 1: 1}, {0: 2, 1: 2}, {0: 2, 1: 2}, {0: 1, 1: 3}]


def test_module_validation(t_summands):
    for m in t_summands:
        assert m.validate()


def test_shift_roundtrip(t_summands):
    m = t_summands[0]
    assert mo.shift_module(mo.shift_module(m, 2), -2).dims == m.dims
    s = mo.simple_module(m.algebra, 1, 0)
    assert mo.shift_module(s, 2).dims == {(1, 2): 1}


def test_hom_evaluation_dimension(delta_a4, t_summands):
    # Hom(Lambda, M) is the degree-0 part of M as a vector space
    reg, _, _ = mo.regular_module(delta_a4)
    for m in t_summands:
        hom = mo.hom_space(reg, m)
        assert len(hom) == sum(
            n for (v, d), n in m.dims.items() if d == 0
        )


def test_hom_distinct_simples(a2):
    s1 = mo.simple_module(a2, 1, 0)
    s2 = mo.simple_module(a2, 2, 0)
    assert mo.hom_space(s1, s2) == []


def test_hom_end_T_is_ten(delta_a4, t_summands):
    T, _, _ = mo.direct_sum(delta_a4, t_summands)
    assert len(mo.hom_space(T, T)) == 10


def test_cosyzygies_of_first_summand(t_summands):
    t1 = t_summands[0]
    c1, stripped = mo.cosyzygy(t1, strip=True)
    assert stripped == []
    assert c1.dim == 5 and c1.dims_by_degree() == {-1: 4, 0: 1}
    c2, stripped = mo.cosyzygy(c1, strip=True)
    assert stripped == []
    assert c2.dim == 7


def test_envelope_of_summand(t_summands):
    t1 = t_summands[0]
    I, mono, tags = mo.injective_envelope(t1)
    assert I.dim == 8 and sorted(tags) == [(2, -1), (3, -1)]
    assert mono.is_injective() and mono.check_commutes()


def test_syzygy_of_projective_is_zero(delta_a4):
    p = mo.projective_module(delta_a4, 1)
    k, stripped = mo.syzygy(p, strip=True)
    assert k.is_zero()


def test_omega_inverse_chain_delta_a2(a2, delta_a2):
    e1 = mo.inflate_module(mo.projective_module(a2, 1), delta_a2)
    e2 = mo.inflate_module(mo.projective_module(a2, 2), delta_a2)
    c, _ = mo.cosyzygy(e1, strip=True)
    v = mo.is_isomorphic(c, mo.shift_module(e2, -1))
    assert v.isomorphic and v.certified
    c2 = e2
    for _ in range(3):
        c2, _ = mo.cosyzygy(c2, strip=True)
    v2 = mo.is_isomorphic(c2, mo.shift_module(e1, -2))
    assert v2.isomorphic and v2.certified


def test_syzygy_cosyzygy_mutually_inverse(t_summands):
    m = t_summands[0]
    c, _ = mo.cosyzygy(m, strip=True)
    back, _ = mo.syzygy(c, strip=True)
    v = mo.is_isomorphic(back, m)
    assert v.isomorphic


def test_is_isomorphic_certificates(a2, t_summands):
    m = t_summands[0]
    v = mo.is_isomorphic(m, m)
    assert v.isomorphic and v.certificate.is_isomorphism()
    s1 = mo.simple_module(a2, 1, 0)
    s2 = mo.simple_module(a2, 2, 0)
    v2 = mo.is_isomorphic(s1, s2)
    assert v2.isomorphic is False and v2.certified


def test_is_indecomposable(delta_a4, t_summands):
    for m in t_summands:
        ok, ne, head = mo.is_indecomposable(m)
        assert ok and head == 1
    s1 = mo.simple_module(delta_a4, 1, 0)
    double, _, _ = mo.direct_sum(delta_a4, [s1, s1])
    ok, ne, head = mo.is_indecomposable(double)
    assert not ok and ne == 4 and head == 4


def test_twist_by_identity(t_summands):
    from koszulity.frobenius import identity_morphism

    m = t_summands[0]
    tw = mo.twist_module(m, identity_morphism(m.algebra))
    assert tw.dims == m.dims
    v = mo.is_isomorphic(tw, m)
    assert v.isomorphic


def test_twist_by_swap(nak2):
    from koszulity.frobenius import frobenius_analysis

    rep = frobenius_analysis(nak2)
    s1 = mo.simple_module(nak2, 1, 0)
    tw = mo.twist_module(s1, rep.mu)
    assert tw.dims == {(2, 0): 1}


def test_truncations(delta_a4, t_summands):
    reg, _, _ = mo.regular_module(delta_a4)
    top = mo.truncation_above(reg, 1)
    assert top.dim == 8 and set(top.degrees()) == {1}
    bot = mo.truncation_below(reg, 0)
    assert bot.dim == 8 and set(bot.degrees()) == {0}
    mid = mo.degree_component(reg, 1)
    assert mid.dim == 8
    m = t_summands[0]
    assert mo.truncation_above(m, 0).dims == m.dims
    assert mo.truncation_below(m, 0).dims == m.dims


def test_truncation_exact_sequence(delta_a4):
    rng = random.Random(5)
    reg, _, _ = mo.regular_module(delta_a4)
    for i in (-1, 0, 1, 2):
        above = mo.truncation_above(reg, i)
        below = mo.truncation_below(reg, i - 1)
        assert above.dim + below.dim == reg.dim


def test_stable_hom_projective_source_vanishes(delta_a4, t_summands):
    reg, _, _ = mo.regular_module(delta_a4)
    for m in t_summands:
        qdim, _, _ = mo.stable_hom(reg, m)
        assert qdim == 0


def test_stable_hom_equals_hom_in_degree_zero(delta_a4, t_summands):
    # modules concentrated in degree 0 over a graded Frobenius algebra with
    # a >= 1: the stable and plain Hom spaces agree
    T, _, _ = mo.direct_sum(delta_a4, t_summands)
    qdim, _, _ = mo.stable_hom(T, T)
    assert qdim == len(mo.hom_space(T, T)) == 10


def test_module_file_roundtrip(a4):
    m = mo.parse_module_file(data_path("T1.mod"), a4)
    assert m.dim == 3
    again = mo.parse_module_source(mo.dump_module(m), a4)
    assert again.dims == m.dims
    v = mo.is_isomorphic(m, again)
    assert v.isomorphic


def test_module_file_bad_shape(a4):
    src = """
module bad over a4
space 1 0 1
space 2 0 2
action a1 0 matrix 1
end
"""
    with pytest.raises(InputError):
        mo.parse_module_source(src, a4)


def test_module_file_relation_violation(a2):
    # a2 has no relations, but a wrong-shape action must still fail cleanly
    src = """
module bad over a2
space 1 0 1
action al 0 matrix 1
end
"""
    with pytest.raises(InputError):
        mo.parse_module_source(src, a2)


def test_strip_projective_summand(delta_a4, t_summands):
    p = mo.projective_module(delta_a4, 2, -1)
    m, _, _ = mo.direct_sum(delta_a4, [t_summands[1], p])
    core, stripped = mo.strip_projective_summands(m)
    assert stripped == [(2, -1)]
    v = mo.is_isomorphic(core, t_summands[1])
    assert v.isomorphic


def test_graded_dual_module(point, dualnum, delta_a4):
    # a field: dual concentrated in degree 0
    d0 = mo.graded_dual_module(point)
    assert d0.dims_by_degree() == {0: 1}
    # dual numbers: components in degrees -1 and 0, each one-dimensional
    d1 = mo.graded_dual_module(dualnum)
    assert d1.dims_by_degree() == {-1: 1, 0: 1}
    # trivial extension: degree negation of (8, 8)
    d2 = mo.graded_dual_module(delta_a4)
    assert d2.dims_by_degree() == {-1: 8, 0: 8}
    d2.validate()


def test_dual_shifted_is_isomorphic_to_regular_for_frobenius(delta_a2):
    # DL <a> is isomorphic to the regular module for a graded Frobenius algebra
    reg, _, _ = mo.regular_module(delta_a2)
    dual = mo.shift_module(mo.graded_dual_module(delta_a2), 1)
    v = mo.is_isomorphic(reg, dual)
    assert v.isomorphic
