from fractions import Fraction

import pytest

from koszulity.linalg import Matrix
from koszulity import modules as mo
from koszulity import hereditary as hd


# ---------------------------------------------------------------------------
# independent oracle: preprojective dimension vectors by Coxeter iteration
# ---------------------------------------------------------------------------

def cartan_matrix(alg):
    n = alg.num_vertices
    c = Matrix.zero(n, n)
    for i in range(alg.dim):
        u = alg.vertex_pos[alg.source[i]]
        v = alg.vertex_pos[alg.target[i]]
        c.data[u][v] += Fraction(1)
    return c


def inverse_translate_dims(alg, dim_vec):
    """dim of the inverse translate of a non-injective module, from the
    Cartan matrix: -C^T C^{-1} applied to the dimension vector."""
    c = cartan_matrix(alg)
    op = (c.transpose() * c.inverse()).scale(-1)
    return op.apply(dim_vec)


def knitting_expected_dims(alg, d_max):
    """Degree dims of the stable-orbit algebra sum Hom(A, tau^{-d} A)."""
    out = {}
    injective_dims = {tuple(
        hd.injective_module(alg, v).block_dim(w, 0) for w in alg.vertices
    ) for v in alg.vertices}
    vec = {v: [Fraction(mo.projective_module(alg, v).block_dim(w, 0))
               for w in alg.vertices] for v in alg.vertices}
    alive = {v: True for v in alg.vertices}
    for d in range(d_max + 1):
        out[d] = sum(int(sum(vec[v])) for v in alg.vertices if alive[v])
        for v in alg.vertices:
            if not alive[v]:
                continue
            if tuple(int(x) for x in vec[v]) in {tuple(int(y) for y in t)
                                                 for t in injective_dims}:
                alive[v] = False
                continue
            vec[v] = inverse_translate_dims(alg, vec[v])
    return out


def test_coxeter_oracle_sanity(a2):
    # tau^{-1} of S2 = (0,1) is S1 = (1,0) over the path algebra 1 -> 2
    assert inverse_translate_dims(a2, [Fraction(0), Fraction(1)]) == [
        Fraction(1), Fraction(0)
    ]


def test_nakayama_correspondence(a2):
    i2 = hd.injective_module(a2, 2)
    assert i2.dims == {(2, 0): 1, (1, 0): 1}
    # P1 = I2 is projective-injective for the path algebra of 1 -> 2
    v = mo.is_isomorphic(mo.projective_module(a2, 1), i2)
    assert v.isomorphic


def test_nu_inverse_transport_composition(a2):
    # transporting a hom through injectives matches the direct construction
    x = a2.index_of["al"]
    h = hd.dual_right_mult_hom(a2, 2, 1, {x: Fraction(1)})
    moved = hd.injective_to_projective_hom(a2, 2, 1, h)
    direct = hd.left_mult_hom(a2, 2, 1, {x: Fraction(1)})
    assert moved.blocks == direct.blocks


def test_derived_nu_inverse_examples(a2, kron, point):
    # semisimple: nu = identity, so one power is the shift A[n]
    pieces, tables = hd.derived_nu_inverse_power(
        point, mo.projective_module(point, 1), 1, 1)
    assert tables[1] == {-1: 1}
    # path algebra of 1 -> 2: one power of P2 is the simple S1
    pieces, tables = hd.derived_nu_inverse_power(
        a2, mo.projective_module(a2, 2), 1, 1)
    assert tables[1] == {0: 1}
    assert pieces[0].module.dims == {(1, 0): 1}
    # Kronecker: powers of the regular module stay stalks
    reg, _, _ = mo.regular_module(kron)
    pieces, tables = hd.derived_nu_inverse_power(kron, reg, 4, 1)
    for j in range(1, 5):
        assert set(tables[j]) == {0}


def test_is_n_rep_finite_a2(a2):
    rep = hd.is_n_rep_finite(a2, 1)
    assert rep.verdict is True
    assert sorted((o.projective, o.m) for o in rep.orbits) == [(1, 0), (2, 1)]
    endpoints = {o.projective: o.endpoint for o in rep.orbits}
    assert endpoints == {1: 2, 2: 1}


def test_is_n_rep_finite_semisimple(point):
    rep = hd.is_n_rep_finite(point, 1)
    assert rep.verdict is True and all(o.m == 0 for o in rep.orbits)


def test_is_n_rep_finite_kronecker_cap(kron):
    rep = hd.is_n_rep_finite(kron, 1, orbit_cap=10)
    assert rep.verdict is None  # distinct within-cap verdict


def test_is_n_rep_infinite(kron, a2, point):
    assert hd.is_n_rep_infinite_upto(kron, 1, 6).verdict is True
    rep = hd.is_n_rep_infinite_upto(a2, 1, 6)
    assert rep.verdict is False and rep.fail_at is not None
    rep2 = hd.is_n_rep_infinite_upto(point, 1, 6)
    assert rep2.verdict is False and rep2.fail_at == (-1, 1)


def test_rep_finite_orbit_cohomology_vanishes(a2):
    rep = hd.is_n_rep_finite(a2, 1)
    for o in rep.orbits:
        for table in o.h_tables:
            assert set(table) <= {0}


def test_gldim_exactly_n_when_noninjective(a2):
    # some projective is non-injective and the vanishing holds, so gldim = 1
    from koszulity import resolution as rs

    assert rs.gldim_upto(a2, 4).value == 1


def test_preprojective_a2(a2):
    pp = hd.preprojective_algebra(a2, 1, 4)
    dims = pp.algebra.dims()
    assert [dims[d] for d in range(5)] == [3, 1, 0, 0, 0]
    assert not pp.flags
    pp.algebra.check()


def test_preprojective_point(point):
    pp = hd.preprojective_algebra(point, 1, 3)
    assert pp.algebra.dims() == {0: 1, 1: 0, 2: 0, 3: 0}


def test_preprojective_kron_matches_knitting_oracle(kron):
    pp = hd.preprojective_algebra(kron, 1, 4)
    expected = knitting_expected_dims(kron, 4)
    assert pp.algebra.dims() == expected
    assert expected == {0: 4, 1: 12, 2: 20, 3: 28, 4: 36}


def test_preprojective_degree_zero_is_algebra(kron):
    pp = hd.preprojective_algebra(kron, 1, 2)
    G = pp.algebra
    assert G.dim(0) == kron.dim
    # degree-0 products reproduce the algebra structure constants
    lab = {i: G.basis[0][i] for i in range(G.dim(0))}
    count_nonzero = sum(1 for k, v in G.products.items()
                       if k[0][0] == 0 and k[1][0] == 0 and v)
    expected = sum(1 for k, v in kron.table.items() if v)
    assert count_nonzero == expected


def test_preprojective_double_quiver_relation_a2(a2):
    # Pi_2 of the path algebra of 1 -> 2: the two degree-1 compositions
    # through the reverse arrow vanish on one side and match on the other
    pp = hd.preprojective_algebra(a2, 1, 2)
    G = pp.algebra
    star = None
    for i, (s, t, lab) in enumerate(G.basis[1]):
        star = (i, s, t)
    assert star is not None
    i, s, t = star
    assert (s, t) == (2, 1)
    # the square of the only degree-1 element lands in degree 2 = 0
    assert G.dim(2) == 0


def test_serre_rhs_table_kA2(a2):
    table = hd.serre_rhs_table(a2, 1, 2, range(-1, 2))
    assert table[(0, 0)] == a2.dim
    assert table[(1, 0)] == 1    # S1 from the orbit of P2
    assert table[(1, -1)] == 1   # P2[1] from the injective P1
    assert table[(2, 0)] == 0


def test_nakayama_mutually_inverse_labels(a4):
    for v in a4.vertices:
        i_mod = hd.nakayama_on_projective(a4, v)
        back = hd.nakayama_inverse_on_injective(a4, v)
        assert back.dims == mo.projective_module(a4, v).dims
        assert i_mod.dims == hd.injective_module(a4, v).dims


def test_complex_resolution_multidegree(a4):
    # nu_2 powers over a non-hereditary base (gldim 2) spread cohomology and
    # exercise the mapping-cone resolution of complexes; the construction
    # self-validates (d^2 = 0, chain map, cohomology preserved)
    P1 = mo.projective_module(a4, 1)
    final, tables = hd.derived_nu_inverse_power(a4, P1, 3, 2)
    assert tables[0] == {0: 3}
    assert tables[1] == {-2: 2, -1: 1}
    assert sum(tables[2].values()) > 0


def test_nakayama_involution_on_complexes(a4):
    # nu_n applied back to a nu_n^{-1} image restores the cohomology exactly
    P1 = mo.projective_module(a4, 1)
    cx = hd.BoundedComplex(a4, {0: P1}, {})
    cres = hd.injective_resolution_of_complex(cx)
    back, labeled = hd.nu_inverse_of_resolution(a4, cres, 2)
    fwd = hd.nu_forward_of_labeled(a4, labeled, back.diffs, 2)
    fwd.validate()
    assert hd.cohomology_dims(fwd) == {0: 3}


def test_complex_resolution_of_two_term_complex(a4):
    # left multiplication P2 -> P1 by the arrow has kernel and cokernel, so
    # the complex carries cohomology in both degrees
    x = a4.index_of["a1"]
    from fractions import Fraction as F

    f = hd.left_mult_hom(a4, 2, 1, {x: F(1)})
    cx = hd.BoundedComplex(a4, {0: f.domain, 1: f.codomain}, {0: f})
    cx.validate()
    dims = hd.cohomology_dims(cx)
    assert dims == {0: 1, 1: 2}
    cres = hd.injective_resolution_of_complex(cx)
    assert hd.cohomology_dims(cres.as_complex(a4)) == dims
    for p, ls in cres.terms.items():
        for lab in ls.labels:
            assert lab in a4.vertices


def test_serre_rhs_nonhereditary_base(a4):
    # the fallback makes the table computable over a gldim-2 base as well
    table = hd.serre_rhs_table(a4, 2, 2, range(-1, 2))
    assert table[(0, 0)] == a4.dim
