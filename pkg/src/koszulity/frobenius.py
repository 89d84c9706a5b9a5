"""Graded Frobenius structure: forms, Nakayama automorphisms, symmetry.

A finite-dimensional positively graded algebra of highest degree a is
graded Frobenius when the regular module is isomorphic to its shifted
graded dual. The search works with the Frobenius functional f supported on
the top degree: the pairing <x, y> = f(x y) must be nondegenerate. The
Nakayama automorphism solves <x, y> = <y, mu(x)> and symmetry means the
identity works as mu for some admissible f.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .linalg import Matrix
from .algebra import GradedAlgebra, InputError, InternalCheckError


class GradedAlgebraMorphism:
    """Algebra morphism given by images of basis elements."""

    def __init__(self, domain: GradedAlgebra, codomain: GradedAlgebra, images: dict):
        self.domain = domain
        self.codomain = codomain
        self.images = {i: {k: c for k, c in img.items() if c}
                       for i, img in images.items()}

    def apply_basis(self, i: int) -> dict:
        return self.images.get(i, {})

    def apply(self, vec: dict) -> dict:
        out = {}
        for i, c in vec.items():
            for k, ck in self.apply_basis(i).items():
                s = out.get(k, Fraction(0)) + c * ck
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return out

    def matrix(self) -> Matrix:
        n, m = self.codomain.dim, self.domain.dim
        mat = Matrix.zero(n, m)
        for j in range(m):
            for k, c in self.apply_basis(j).items():
                mat.data[k][j] = c
        return mat

    def is_identity(self) -> bool:
        if self.domain is not self.codomain and self.domain.labels != self.codomain.labels:
            return False
        for i in range(self.domain.dim):
            if self.apply_basis(i) != {i: Fraction(1)}:
                return False
        return True

    def validate(self, check_vertices: bool = False):
        dom, cod = self.domain, self.codomain
        for i in range(dom.dim):
            img = self.apply_basis(i)
            d = dom.degree[i]
            for k in img:
                if cod.degree[k] != d:
                    raise InternalCheckError("morphism does not preserve degree")
        unit_img = {}
        for v in range(dom.num_vertices):
            for k, c in self.apply_basis(v).items():
                unit_img[k] = unit_img.get(k, Fraction(0)) + c
        want = {v: Fraction(1) for v in range(cod.num_vertices)}
        if {k: c for k, c in unit_img.items() if c} != want:
            raise InternalCheckError("morphism does not preserve the unit")
        for i in range(dom.dim):
            for j in range(dom.dim):
                lhs = self.apply(dom.mult_basis(i, j))
                rhs = cod.mult(self.apply_basis(i), self.apply_basis(j))
                if lhs != rhs:
                    raise InternalCheckError(
                        f"morphism not multiplicative on "
                        f"({dom.labels[i]},{dom.labels[j]})"
                    )
        if check_vertices:
            self.vertex_permutation()
        return True

    def vertex_permutation(self) -> dict:
        """Vertex map when each e_v is sent to a vertex idempotent exactly."""
        dom, cod = self.domain, self.codomain
        perm = {}
        for v_i in range(dom.num_vertices):
            img = self.apply_basis(v_i)
            if len(img) != 1:
                raise InputError("morphism does not permute vertex idempotents")
            (k, c), = img.items()
            if c != 1 or k >= cod.num_vertices:
                raise InputError("morphism does not permute vertex idempotents")
            perm[dom.vertices[v_i]] = cod.vertices[k]
        if len(set(perm.values())) != len(perm):
            raise InputError("vertex map is not a permutation")
        return perm

    def permutes_vertices(self) -> bool:
        try:
            self.vertex_permutation()
            return True
        except InputError:
            return False

    def compose(self, other: "GradedAlgebraMorphism") -> "GradedAlgebraMorphism":
        """self o other."""
        images = {}
        for i in range(other.domain.dim):
            images[i] = self.apply(other.apply_basis(i))
        return GradedAlgebraMorphism(other.domain, self.codomain, images)

    def inverse(self) -> "GradedAlgebraMorphism":
        inv = self.matrix().inverse()
        if inv is None:
            raise InputError("morphism is not invertible")
        images = {}
        for j in range(self.codomain.dim):
            images[j] = {k: inv.data[k][j] for k in range(self.domain.dim)
                         if inv.data[k][j]}
        return GradedAlgebraMorphism(self.codomain, self.domain, images)

    def power(self, n: int) -> "GradedAlgebraMorphism":
        if n < 0:
            return self.inverse().power(-n)
        out = identity_morphism(self.domain)
        for _ in range(n):
            out = self.compose(out)
        return out


def identity_morphism(alg: GradedAlgebra) -> GradedAlgebraMorphism:
    return GradedAlgebraMorphism(
        alg, alg, {i: {i: Fraction(1)} for i in range(alg.dim)}
    )


@dataclass
class FrobeniusReport:
    is_frobenius: bool
    a: int | None = None
    symmetric: bool = False
    mu: GradedAlgebraMorphism | None = None
    mu_vertex_permutation: dict | None = None
    functional: dict | None = None
    probabilistic: bool = False
    reason: str = ""

    def nakayama_permutes_vertices(self) -> bool:
        return self.mu_vertex_permutation is not None


def _pairing_block_dims_match(alg: GradedAlgebra, a: int) -> bool:
    # block of the candidate iso at (v, d): Lambda_d e_v -> D(e_v Lambda_{a-d})
    for v in alg.vertices:
        for d in set(alg.degree):
            left = sum(1 for i in range(alg.dim)
                       if alg.target[i] == v and alg.degree[i] == d)
            right = sum(1 for i in range(alg.dim)
                        if alg.source[i] == v and alg.degree[i] == a - d)
            if left != right:
                return False
    return True


def _gram(alg: GradedAlgebra, f: dict) -> Matrix:
    n = alg.dim
    g = Matrix.zero(n, n)
    for i in range(n):
        for j in range(n):
            prod = alg.mult_basis(i, j)
            val = Fraction(0)
            for k, c in prod.items():
                fv = f.get(k)
                if fv:
                    val += c * fv
            g.data[i][j] = val
    return g


def _nakayama_from_gram(alg: GradedAlgebra, g: Matrix) -> GradedAlgebraMorphism:
    ginv = g.inverse()
    if ginv is None:
        raise InternalCheckError("gram matrix not invertible")
    images = {}
    for x in range(alg.dim):
        rhs = [g.data[x][y] for y in range(alg.dim)]
        # solve sum_z u_z f(y z) = f(x y) for all y
        u = g.solve(rhs)
        if u is None:
            raise InternalCheckError("nakayama system inconsistent")
        images[x] = {z: c for z, c in enumerate(u) if c}
    return GradedAlgebraMorphism(alg, alg, images)


def frobenius_analysis(alg: GradedAlgebra, seed: int = 0, samples: int = 64):
    """Graded Frobenius test with Nakayama automorphism and symmetry flag."""
    a = alg.highest_degree()
    if not _pairing_block_dims_match(alg, a):
        return FrobeniusReport(False, reason="graded block dimensions obstruct DL = L<-a>")
    top = [i for i in range(alg.dim) if alg.degree[i] == a]
    # only functionals supported in the top degree give degree-0 module maps
    # symmetric subspace: f(xy) = f(yx) for all basis pairs
    rows = []
    for i in range(alg.dim):
        for j in range(alg.dim):
            row = [Fraction(0)] * len(top)
            pij = alg.mult_basis(i, j)
            pji = alg.mult_basis(j, i)
            hit = False
            for t_i, t in enumerate(top):
                c = pij.get(t, Fraction(0)) - pji.get(t, Fraction(0))
                if c:
                    row[t_i] = c
                    hit = True
            if hit:
                rows.append(row)
    if rows:
        sym_space = Matrix(len(rows), len(top), rows).kernel_basis()
    else:
        sym_space = [list(r) for r in Matrix.identity(len(top)).data]

    rng = random.Random(seed)

    def candidates(space):
        for v in space:
            yield v
        if space:
            yield [sum(col) for col in zip(*space)]
            for _ in range(samples):
                yield [
                    sum(Fraction(rng.randint(-5, 5)) * v[i] for v in space)
                    for i in range(len(space[0]))
                ]

    def try_space(space):
        for vec in candidates(space):
            f = {top[i]: c for i, c in enumerate(vec) if c}
            if not f:
                continue
            g = _gram(alg, f)
            if g.is_invertible():
                return f, g
        return None

    sym_hit = try_space(sym_space)
    if sym_hit is not None:
        f, g = sym_hit
        mu = identity_morphism(alg)
        mu_check = _nakayama_from_gram(alg, g)
        if not mu_check.is_identity():
            raise InternalCheckError("symmetric form gave nontrivial nakayama")
        return FrobeniusReport(
            True, a=a, symmetric=True, mu=mu,
            mu_vertex_permutation={v: v for v in alg.vertices},
            functional=f,
        )

    full_space = [list(r) for r in Matrix.identity(len(top)).data]
    hit = try_space(full_space)
    if hit is None:
        if top:
            return FrobeniusReport(
                False, probabilistic=True,
                reason=f"no invertible combination found in {samples} samples "
                       "(probabilistic)",
            )
        return FrobeniusReport(False, reason="no top-degree functionals")
    f, g = hit
    mu = _nakayama_from_gram(alg, g)
    mu.validate()
    perm = None
    if mu.permutes_vertices():
        perm = mu.vertex_permutation()
    else:
        # retry a few candidates hoping for a vertex-permuting representative
        for vec in candidates(full_space):
            f2 = {top[i]: c for i, c in enumerate(vec) if c}
            if not f2:
                continue
            g2 = _gram(alg, f2)
            if not g2.is_invertible():
                continue
            mu2 = _nakayama_from_gram(alg, g2)
            if mu2.permutes_vertices():
                f, g, mu = f2, g2, mu2
                mu.validate()
                perm = mu.vertex_permutation()
                break
    return FrobeniusReport(
        True, a=a, symmetric=False, mu=mu, mu_vertex_permutation=perm,
        functional=f,
    )


def verify_form_identity(alg: GradedAlgebra, f: dict, mu: GradedAlgebraMorphism):
    """Check <x, y> = <y, mu(x)> on all basis pairs."""
    g = _gram(alg, f)
    for x in range(alg.dim):
        for y in range(alg.dim):
            lhs = g.data[x][y]
            rhs = Fraction(0)
            for z, c in mu.apply_basis(x).items():
                rhs += c * g.data[y][z]
            if lhs != rhs:
                return False
    return True


def socle_degrees(alg: GradedAlgebra):
    """Degrees of a basis of the right socle (elements killed by rad)."""
    rad = alg.radical_basis()
    n = alg.dim
    if not rad:
        return sorted(alg.degree)
    # socle = kernel of x -> (x r)_r : stack right-multiplication matrices
    cols = []
    for r in rad:
        rm = Matrix.zero(n, n)
        for i in range(n):
            for j, c in r.items():
                for k, ck in alg.mult_basis(i, j).items():
                    rm.data[k][i] += c * ck
        cols.append(rm)
    stacked = cols[0]
    for extra in cols[1:]:
        stacked = stacked.vstack(extra)
    kernel = stacked.kernel_basis()
    out = []
    for vec in kernel:
        degs = {alg.degree[i] for i, c in enumerate(vec) if c}
        out.extend(sorted(degs))
    return out
