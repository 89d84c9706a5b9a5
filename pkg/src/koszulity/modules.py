"""Finitely generated graded right modules over a GradedAlgebra.

A module stores a dimension for each (vertex, degree) block and, for each
non-idempotent algebra basis element x, matrices mapping the
(source(x), d) block into the (target(x), d + deg x) block. Vectors are
columns; the right action of x*y is rho(y) o rho(x).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .linalg import Matrix, frac, random_int_combination
from .algebra import GradedAlgebra, InputError, InternalCheckError


class GradedModule:
    def __init__(self, algebra: GradedAlgebra, dims: dict, action: dict, name=""):
        """dims: {(vertex, degree): dim > 0}; action: {basis index: {degree: Matrix}}."""
        self.algebra = algebra
        self.dims = {k: v for k, v in dims.items() if v}
        self.action = action
        self.name = name

    # -- block bookkeeping -------------------------------------------------

    def blocks(self):
        alg = self.algebra
        return sorted(self.dims.keys(), key=lambda vd: (vd[1], alg.vertex_pos[vd[0]]))

    def block_dim(self, v, d) -> int:
        return self.dims.get((v, d), 0)

    @property
    def dim(self) -> int:
        return sum(self.dims.values())

    def dims_by_degree(self) -> dict:
        out = {}
        for (v, d), m in self.dims.items():
            out[d] = out.get(d, 0) + m
        return out

    def degrees(self):
        return sorted({d for (_v, d) in self.dims})

    def highest_degree(self):
        ds = self.degrees()
        return ds[-1] if ds else None

    def lowest_degree(self):
        ds = self.degrees()
        return ds[0] if ds else None

    def is_zero(self) -> bool:
        return not self.dims

    def concentrated_degree(self):
        """The unique support degree, or None if not concentrated."""
        ds = self.degrees()
        return ds[0] if len(ds) == 1 else None

    def act(self, x: int, d: int) -> Matrix:
        """Action matrix of basis element x on the degree-d source block."""
        alg = self.algebra
        if x < alg.num_vertices:
            n = self.block_dim(alg.source[x], d)
            return Matrix.identity(n)
        sv, tv, dx = alg.source[x], alg.target[x], alg.degree[x]
        src_dim = self.block_dim(sv, d)
        tgt_dim = self.block_dim(tv, d + dx)
        m = self.action.get(x, {}).get(d)
        if m is None:
            return Matrix.zero(tgt_dim, src_dim)
        if m.rows != tgt_dim or m.cols != src_dim:
            raise InternalCheckError("action matrix shape mismatch")
        return m

    def apply_element(self, elem: dict, coeffs: dict) -> dict:
        """Right action of the algebra element given by coefficient dict."""
        alg = self.algebra
        out = {}
        for x, c in coeffs.items():
            if not c:
                continue
            sv, tv, dx = alg.source[x], alg.target[x], alg.degree[x]
            for (v, d), vec in elem.items():
                if v != sv:
                    continue
                mat = self.act(x, d)
                if mat.rows == 0 or mat.cols == 0:
                    continue
                img = mat.apply(vec)
                key = (tv, d + dx)
                if key not in out:
                    out[key] = [Fraction(0)] * self.block_dim(tv, d + dx)
                acc = out[key]
                for i, val in enumerate(img):
                    acc[i] += c * val
        return {k: v for k, v in out.items() if any(v)}

    def zero_element(self) -> dict:
        return {}

    def basis_elements(self):
        """All (block, index) pairs in deterministic order."""
        out = []
        for (v, d) in self.blocks():
            for i in range(self.dims[(v, d)]):
                out.append(((v, d), i))
        return out

    def unit_vector(self, block, i) -> dict:
        vec = [Fraction(0)] * self.dims[block]
        vec[i] = Fraction(1)
        return {block: vec}

    # -- validation ----------------------------------------------------------

    def validate(self):
        alg = self.algebra
        for (v, d), m in self.dims.items():
            if v not in alg.vertex_pos:
                raise InputError(f"unknown vertex {v!r} in module")
            if m <= 0:
                raise InputError("non-positive block dimension")
        for x, per_deg in self.action.items():
            if x < alg.num_vertices:
                raise InputError("explicit action for an idempotent")
            for d, mat in per_deg.items():
                sdim = self.block_dim(alg.source[x], d)
                tdim = self.block_dim(alg.target[x], d + alg.degree[x])
                if mat.rows != tdim or mat.cols != sdim:
                    raise InputError(
                        f"action of {alg.labels[x]} at degree {d} has wrong shape"
                    )
        # right-module axioms on all composable basis pairs
        for x in range(alg.dim):
            for y in range(alg.dim):
                if alg.target[x] != alg.source[y]:
                    continue
                prod = alg.mult_basis(x, y)
                for (v, d) in self.dims:
                    if v != alg.source[x]:
                        continue
                    lhs = self.act(y, d + alg.degree[x]) * self.act(x, d)
                    tdim = self.block_dim(alg.target[y], d + alg.degree[x] + alg.degree[y])
                    rhs = Matrix.zero(tdim, self.dims[(v, d)])
                    for z, c in prod.items():
                        rhs = rhs + self.act(z, d).scale(c)
                    if lhs != rhs:
                        raise InputError(
                            f"right-module axiom fails on "
                            f"{alg.labels[x]}*{alg.labels[y]} at degree {d}"
                        )
        return True


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def zero_module(alg: GradedAlgebra) -> GradedModule:
    return GradedModule(alg, {}, {}, name="0")


def simple_module(alg: GradedAlgebra, v, degree: int = 0) -> GradedModule:
    """The simple S_v placed in the given degree (radical acts by zero)."""
    return GradedModule(alg, {(v, degree): 1}, {}, name=f"S{v}<{degree}>")


def projective_module(alg: GradedAlgebra, v, shift: int = 0) -> GradedModule:
    """e_v * Lambda with its generator placed in degree `shift`."""
    cache = getattr(alg, "_proj_cache", None)
    if cache is None:
        cache = {}
        alg._proj_cache = cache
    if (v, shift) in cache:
        return cache[(v, shift)]
    idx_by_block = {}
    for i in range(alg.dim):
        if alg.source[i] != v:
            continue
        key = (alg.target[i], alg.degree[i] + shift)
        idx_by_block.setdefault(key, []).append(i)
    dims = {k: len(ix) for k, ix in idx_by_block.items()}
    action = {}
    for x in range(alg.num_vertices, alg.dim):
        sv, tv, dx = alg.source[x], alg.target[x], alg.degree[x]
        per_deg = {}
        for (w, d), ix in idx_by_block.items():
            if w != sv:
                continue
            tgt_ix = idx_by_block.get((tv, d + dx), [])
            if not tgt_ix:
                continue
            pos = {b: r for r, b in enumerate(tgt_ix)}
            mat = Matrix.zero(len(tgt_ix), len(ix))
            for c_i, b in enumerate(ix):
                prod = alg.mult_basis(b, x)
                for z, cz in prod.items():
                    mat.data[pos[z]][c_i] = cz
            if not mat.is_zero():
                per_deg[d] = mat
        if per_deg:
            action[x] = per_deg
    mod = GradedModule(alg, dims, action, name=f"P({v})<{shift}>")
    mod._proj_basis_index = idx_by_block
    cache[(v, shift)] = mod
    return mod


def regular_module(alg: GradedAlgebra):
    """Lambda as a right module over itself, as (module, list of summands)."""
    parts = [projective_module(alg, v) for v in alg.vertices]
    return direct_sum(alg, parts)


def dual_of_left_projective(alg: GradedAlgebra, v, shift: int = 0) -> GradedModule:
    """D(Lambda e_v) shifted: the graded-injective with socle at vertex v.

    Component at (w, -deg b + shift) is spanned by duals of basis elements
    b in e_w Lambda e_v; right action (psi . x)(y) = psi(x y).
    """
    cache = getattr(alg, "_inj_cache", None)
    if cache is None:
        cache = {}
        alg._inj_cache = cache
    if (v, shift) in cache:
        return cache[(v, shift)]
    idx_by_block = {}
    for i in range(alg.dim):
        if alg.target[i] != v:
            continue
        key = (alg.source[i], -alg.degree[i] + shift)
        idx_by_block.setdefault(key, []).append(i)
    dims = {k: len(ix) for k, ix in idx_by_block.items()}
    action = {}
    for x in range(alg.num_vertices, alg.dim):
        sv, tv, dx = alg.source[x], alg.target[x], alg.degree[x]
        per_deg = {}
        for (w, d), ix in idx_by_block.items():
            if w != sv:
                continue
            tgt_ix = idx_by_block.get((tv, d + dx), [])
            if not tgt_ix:
                continue
            pos = {b: r for r, b in enumerate(tgt_ix)}
            mat = Matrix.zero(len(tgt_ix), len(ix))
            # (psi_b . x) = sum_y coeff_b(x*y) psi_y over y in e_tv L e_v
            for c_i, b in enumerate(ix):
                for y in tgt_ix:
                    prod = alg.mult_basis(x, y)
                    cb = prod.get(b)
                    if cb:
                        mat.data[pos[y]][c_i] = cb
            if not mat.is_zero():
                per_deg[d] = mat
        if per_deg:
            action[x] = per_deg
    mod = GradedModule(alg, dims, action, name=f"D(P^op({v}))<{shift}>")
    mod._inj_basis_index = idx_by_block
    cache[(v, shift)] = mod
    return mod


def graded_dual_module(alg: GradedAlgebra) -> GradedModule:
    """D(Lambda) as a graded right module, (D Lambda)_i = D(Lambda_{-i})."""
    parts = [dual_of_left_projective(alg, v) for v in alg.vertices]
    total, _, _ = direct_sum(alg, parts)
    return total


def inflate_module(m0: GradedModule, big: GradedAlgebra) -> GradedModule:
    """View a module over a degree-0 subalgebra as a module over `big`.

    Basis labels of m0.algebra must appear in big with the same structure
    constants (as for a trivial extension); all other basis elements of big
    act by zero. Sound whenever the extra elements multiply into the span of
    themselves (e.g. the dual part of a trivial extension on a module
    concentrated in degree 0).
    """
    small = m0.algebra
    action = {}
    for x_small, per_deg in m0.action.items():
        lab = small.labels[x_small]
        if lab not in big.index_of:
            raise InputError(f"label {lab!r} missing in target algebra")
        action[big.index_of[lab]] = {d: mat for d, mat in per_deg.items()}
    out = GradedModule(big, dict(m0.dims), action, name=m0.name)
    return out


def direct_sum(alg: GradedAlgebra, parts):
    """Direct sum with injection and projection homs.

    Returns (module, injections, projections).
    """
    dims = {}
    offsets = []
    for p in parts:
        off = {}
        for key, m in p.dims.items():
            off[key] = dims.get(key, 0)
            dims[key] = dims.get(key, 0) + m
        offsets.append(off)
    action = {}
    for x in range(alg.num_vertices, alg.dim):
        sv, tv, dx = alg.source[x], alg.target[x], alg.degree[x]
        per_deg = {}
        degs = {d for p in parts for (v, d) in p.dims if v == sv}
        for d in degs:
            tot_src = dims.get((sv, d), 0)
            tot_tgt = dims.get((tv, d + dx), 0)
            if not tot_src or not tot_tgt:
                continue
            mat = Matrix.zero(tot_tgt, tot_src)
            nonzero = False
            for p, off in zip(parts, offsets):
                sub = p.act(x, d)
                if sub.rows == 0 or sub.cols == 0 or sub.is_zero():
                    continue
                r0 = off.get((tv, d + dx), 0)
                c0 = off.get((sv, d), 0)
                for i in range(sub.rows):
                    row = mat.data[r0 + i]
                    srow = sub.data[i]
                    for j in range(sub.cols):
                        if srow[j]:
                            row[c0 + j] = srow[j]
                            nonzero = True
            if nonzero:
                per_deg[d] = mat
        if per_deg:
            action[x] = per_deg
    total = GradedModule(alg, dims, action, name="(+)".join(p.name for p in parts))
    injections = []
    projections = []
    for p, off in zip(parts, offsets):
        inj = {}
        prj = {}
        for key, m in p.dims.items():
            big = dims[key]
            mi = Matrix.zero(big, m)
            mp = Matrix.zero(m, big)
            for i in range(m):
                mi.data[off[key] + i][i] = Fraction(1)
                mp.data[i][off[key] + i] = Fraction(1)
            inj[key] = mi
            prj[key] = mp
        injections.append(GradedModuleHom(p, total, inj))
        projections.append(GradedModuleHom(total, p, prj))
    return total, injections, projections


def shift_module(m: GradedModule, j: int) -> GradedModule:
    """M<j> with M<j>_i = M_{i-j}: an element of degree d moves to degree d+j."""
    if j == 0:
        return m
    dims = {(v, d + j): n for (v, d), n in m.dims.items()}
    action = {
        x: {d + j: mat for d, mat in per.items()} for x, per in m.action.items()
    }
    return GradedModule(m.algebra, dims, action, name=f"{m.name}<{j}>")


def twist_module(m: GradedModule, phi) -> GradedModule:
    """M_phi with action m . x = m phi(x); phi must permute vertex idempotents.

    Block (v, d) of M_phi equals block (vperm[v], d) of M.
    """
    alg = m.algebra
    vperm = phi.vertex_permutation()
    inv = {w: v for v, w in vperm.items()}
    dims = {}
    for (w, d), n in m.dims.items():
        dims[(inv[w], d)] = n
    action = {}
    for x in range(alg.num_vertices, alg.dim):
        img = phi.apply_basis(x)
        if not img:
            continue
        sv, tv, dx = alg.source[x], alg.target[x], alg.degree[x]
        per_deg = {}
        degs = {d for (v, d) in dims if v == sv}
        for d in degs:
            sdim = dims.get((sv, d), 0)
            tdim = dims.get((tv, d + dx), 0)
            if not sdim or not tdim:
                continue
            mat = Matrix.zero(tdim, sdim)
            any_nz = False
            for y, c in img.items():
                sub = m.act(y, d)
                if sub.rows and sub.cols and not sub.is_zero():
                    mat = mat + sub.scale(c)
                    any_nz = True
            if any_nz and not mat.is_zero():
                per_deg[d] = mat
        if per_deg:
            action[x] = per_deg
    return GradedModule(alg, dims, action, name=f"{m.name}_tw")


def truncation_above(m: GradedModule, i: int) -> GradedModule:
    """Submodule M_{>=i}."""
    dims = {(v, d): n for (v, d), n in m.dims.items() if d >= i}
    action = {}
    for x, per in m.action.items():
        keep = {d: mat for d, mat in per.items() if d >= i}
        if keep:
            action[x] = keep
    return GradedModule(m.algebra, dims, action, name=f"{m.name}_(>={i})")


def truncation_below(m: GradedModule, i: int) -> GradedModule:
    """Quotient M_{<=i} = M / M_{>=i+1}."""
    dims = {(v, d): n for (v, d), n in m.dims.items() if d <= i}
    action = {}
    for x, per in m.action.items():
        dx = m.algebra.degree[x]
        keep = {d: mat for d, mat in per.items() if d + dx <= i and d <= i}
        if keep:
            action[x] = keep
    return GradedModule(m.algebra, dims, action, name=f"{m.name}_(<={i})")


def degree_component(m: GradedModule, i: int) -> GradedModule:
    """M_i as a module (positive-degree part of the algebra acts by zero)."""
    dims = {(v, d): n for (v, d), n in m.dims.items() if d == i}
    action = {}
    for x, per in m.action.items():
        if m.algebra.degree[x] != 0:
            continue
        keep = {d: mat for d, mat in per.items() if d == i}
        if keep:
            action[x] = keep
    return GradedModule(m.algebra, dims, action, name=f"{m.name}_{i}")


# ---------------------------------------------------------------------------
# homomorphisms
# ---------------------------------------------------------------------------

class GradedModuleHom:
    def __init__(self, domain: GradedModule, codomain: GradedModule, blocks: dict):
        self.domain = domain
        self.codomain = codomain
        self.blocks = {}
        for key, mat in blocks.items():
            td = codomain.block_dim(*key)
            sd = domain.block_dim(*key)
            if mat.rows != td or mat.cols != sd:
                raise InternalCheckError("hom block shape mismatch")
            if not mat.is_zero():
                self.blocks[key] = mat

    def block(self, v, d) -> Matrix:
        key = (v, d)
        if key in self.blocks:
            return self.blocks[key]
        return Matrix.zero(self.codomain.block_dim(v, d), self.domain.block_dim(v, d))

    def apply(self, elem: dict) -> dict:
        out = {}
        for key, vec in elem.items():
            mat = self.block(*key)
            if mat.rows == 0:
                continue
            img = mat.apply(vec)
            if any(img):
                out[key] = img
        return out

    def compose(self, other: "GradedModuleHom") -> "GradedModuleHom":
        """self o other (other applied first)."""
        if other.codomain is not self.domain and other.codomain.dims != self.domain.dims:
            raise InternalCheckError("composition domain mismatch")
        keys = set(self.blocks) | set(other.blocks)
        blocks = {}
        for key in keys:
            m = self.block(*key) * other.block(*key)
            if not m.is_zero():
                blocks[key] = m
        return GradedModuleHom(other.domain, self.codomain, blocks)

    def add(self, other: "GradedModuleHom") -> "GradedModuleHom":
        keys = set(self.blocks) | set(other.blocks)
        blocks = {k: self.block(*k) + other.block(*k) for k in keys}
        return GradedModuleHom(self.domain, self.codomain, blocks)

    def scale(self, c) -> "GradedModuleHom":
        return GradedModuleHom(
            self.domain, self.codomain,
            {k: m.scale(c) for k, m in self.blocks.items()},
        )

    def is_zero(self) -> bool:
        return not self.blocks

    def is_injective(self) -> bool:
        for key, n in self.domain.dims.items():
            mat = self.block(*key)
            if mat.rank() < n:
                return False
        return True

    def is_surjective(self) -> bool:
        for key, n in self.codomain.dims.items():
            mat = self.block(*key)
            if mat.rank() < n:
                return False
        return True

    def is_isomorphism(self) -> bool:
        if set(self.domain.dims) != set(self.codomain.dims):
            ok = all(self.domain.block_dim(*k) == self.codomain.block_dim(*k)
                     for k in set(self.domain.dims) | set(self.codomain.dims))
            if not ok:
                return False
        for key in set(self.domain.dims) | set(self.codomain.dims):
            if self.domain.block_dim(*key) != self.codomain.block_dim(*key):
                return False
            if not self.block(*key).is_invertible():
                return False
        return True

    def inverse(self) -> "GradedModuleHom":
        blocks = {}
        for key in self.domain.dims:
            inv = self.block(*key).inverse()
            if inv is None:
                raise InternalCheckError("inverting a non-isomorphism")
            blocks[key] = inv
        return GradedModuleHom(self.codomain, self.domain, blocks)

    def check_commutes(self) -> bool:
        alg = self.domain.algebra
        for x in [*range(alg.num_vertices, alg.dim)]:
            sv, tv, dx = alg.source[x], alg.target[x], alg.degree[x]
            degs = {d for (v, d) in self.domain.dims if v == sv}
            degs |= {d for (v, d) in self.codomain.dims if v == sv}
            for d in degs:
                lhs = self.block(tv, d + dx) * self.domain.act(x, d)
                rhs = self.codomain.act(x, d) * self.block(sv, d)
                if lhs != rhs:
                    return False
        return True


def identity_hom(m: GradedModule) -> GradedModuleHom:
    return GradedModuleHom(
        m, m, {key: Matrix.identity(n) for key, n in m.dims.items()}
    )


def hom_frame(domain: GradedModule, codomain: GradedModule):
    """Deterministic coordinate frame for degree-0 homs domain -> codomain."""
    keys = []
    for key in domain.blocks():
        if codomain.block_dim(*key):
            keys.append(key)
    layout = []
    offset = 0
    for key in keys:
        size = domain.dims[key] * codomain.dims[key]
        layout.append((key, offset, size))
        offset += size
    return layout, offset


def hom_flatten(h: GradedModuleHom, layout, total) -> list:
    vec = [Fraction(0)] * total
    for key, off, _size in layout:
        mat = h.blocks.get(key)
        if mat is None:
            continue
        cols = mat.cols
        for i in range(mat.rows):
            row = mat.data[i]
            for j in range(cols):
                vec[off + i * cols + j] = row[j]
    return vec


def hom_unflatten(domain, codomain, layout, vec) -> GradedModuleHom:
    blocks = {}
    for key, off, size in layout:
        rows = codomain.dims[key]
        cols = domain.dims[key]
        mat = Matrix.zero(rows, cols)
        for i in range(rows):
            for j in range(cols):
                mat.data[i][j] = vec[off + i * cols + j]
        if not mat.is_zero():
            blocks[key] = mat
    return GradedModuleHom(domain, codomain, blocks)


def hom_space(m: GradedModule, n: GradedModule):
    """Basis of degree-0 module homomorphisms m -> n.

    Results are cached per module pair; modules are immutable after
    construction so the cache stays valid.
    """
    if m.algebra is not n.algebra and m.algebra.labels != n.algebra.labels:
        raise InputError("hom_space requires the same base algebra")
    cache = getattr(m, "_hom_cache", None)
    if cache is None:
        cache = {}
        m._hom_cache = cache
    hit = cache.get(id(n))
    if hit is not None and hit[0] is n:
        return list(hit[1])
    alg = m.algebra
    layout, total = hom_frame(m, n)
    if total == 0:
        return []
    pos = {key: (off, m.dims[key], n.dims[key]) for key, off, _ in layout}
    rows = []
    gens = alg.generating_set()
    for x in gens:
        sv, tv, dx = alg.source[x], alg.target[x], alg.degree[x]
        degs = sorted({d for (v, d) in m.dims if v == sv})
        for d in degs:
            a_m = m.act(x, d)            # m-block (sv,d) -> (tv,d+dx)
            a_n = n.act(x, d)
            src_m = m.block_dim(sv, d)
            tgt_m = m.block_dim(tv, d + dx)
            src_n = n.block_dim(sv, d)
            tgt_n = n.block_dim(tv, d + dx)
            # constraint: f_(tv,d+dx) a_m = a_n f_(sv,d)
            # rows indexed by (tgt_n, src_m)
            if tgt_n * src_m == 0:
                continue
            for i in range(tgt_n):
                for j in range(src_m):
                    row = [Fraction(0)] * total
                    hit = False
                    if (tv, d + dx) in pos and tgt_m:
                        off, cols, _r = pos[(tv, d + dx)]
                        for k in range(tgt_m):
                            c = a_m.data[k][j]
                            if c:
                                row[off + i * cols + k] += c
                                hit = True
                    if (sv, d) in pos and src_n:
                        off, cols, _r = pos[(sv, d)]
                        for k in range(src_n):
                            c = a_n.data[i][k]
                            if c:
                                row[off + k * cols + j] -= c
                                hit = True
                    if hit:
                        rows.append(row)
    if rows:
        mat = Matrix(len(rows), total, rows)
        kernel = mat.kernel_basis()
    else:
        kernel = []
        for i in range(total):
            v = [Fraction(0)] * total
            v[i] = Fraction(1)
            kernel.append(v)
    out = [hom_unflatten(m, n, layout, v) for v in kernel]
    cache[id(n)] = (n, out)
    return list(out)


def hom_space_with_constraints(m, n, constraints):
    """Homs m -> n with prescribed values: constraints = [(elem, image), ...].

    Each elem is an element dict of m, image an element dict of n. Returns
    one solution hom or None.
    """
    basis = hom_space(m, n)
    if not basis:
        basis = []
    layout, total = hom_frame(m, n)
    rows = []
    rhs = []
    # unknowns: coefficients of basis homs
    images = []
    for h in basis:
        images.append(h)
    for elem, target in constraints:
        applied = [h.apply(elem) for h in basis]
        keys = set(target)
        for a in applied:
            keys |= set(a)
        for key in sorted(keys, key=lambda vd: (vd[1], str(vd[0]))):
            dimk = n.block_dim(*key)
            for i in range(dimk):
                row = [a.get(key, [Fraction(0)] * dimk)[i] for a in applied]
                rows.append(row)
                rhs.append(target.get(key, [Fraction(0)] * dimk)[i])
    if not rows:
        return zero_hom(m, n)
    matr = Matrix(len(rows), len(basis), rows)
    sol = matr.solve(rhs)
    if sol is None:
        return None
    out = zero_hom(m, n)
    for c, h in zip(sol, basis):
        if c:
            out = out.add(h.scale(c))
    return out


def zero_hom(m, n) -> GradedModuleHom:
    return GradedModuleHom(m, n, {})


# ---------------------------------------------------------------------------
# sub/quotient machinery
# ---------------------------------------------------------------------------

def submodule(m: GradedModule, spans: dict, name="sub"):
    """Submodule from per-block row-span lists {block: [vector, ...]}.

    The spans must be action-closed; returns (module, inclusion hom).
    """
    alg = m.algebra
    bases = {}
    for key, vecs in spans.items():
        if not vecs:
            continue
        mat = Matrix(len(vecs), m.dims[key], vecs)
        R, piv = mat.rref()
        rows = [R.data[i] for i in range(len(piv))]
        if rows:
            bases[key] = Matrix(len(rows), m.dims[key], rows)
    dims = {key: b.rows for key, b in bases.items()}
    action = {}
    for x in range(alg.num_vertices, alg.dim):
        sv, tv, dx = alg.source[x], alg.target[x], alg.degree[x]
        per = {}
        for (v, d), b in bases.items():
            if v != sv:
                continue
            tgt = bases.get((tv, d + dx))
            amb = m.act(x, d)
            img = amb * b.transpose()  # columns = images of sub-basis vectors
            if img.is_zero():
                continue
            if tgt is None:
                raise InternalCheckError("span not action-closed")
            sol = tgt.transpose().solve_matrix(img)
            if sol is None:
                raise InternalCheckError("span not action-closed")
            if not sol.is_zero():
                per[d] = sol
        if per:
            action[x] = per
    sub = GradedModule(alg, dims, action, name=name)
    incl = GradedModuleHom(sub, m, {key: b.transpose() for key, b in bases.items()})
    return sub, incl


def kernel_submodule(f: GradedModuleHom, name="ker"):
    m = f.domain
    spans = {}
    for key, dimk in m.dims.items():
        mat = f.block(*key)
        if mat.rows == 0:
            spans[key] = [list(v) for v in Matrix.identity(dimk).data]
        else:
            spans[key] = mat.kernel_basis()
    return submodule(m, spans, name=name)


def image_spans(f: GradedModuleHom):
    spans = {}
    for key in f.blocks:
        mat = f.blocks[key]
        cols = [mat.column(j) for j in range(mat.cols)]
        spans[key] = cols
    return spans


def quotient_module(m: GradedModule, spans: dict, name="quot"):
    """Quotient of m by the action-closed span; returns (module, projection)."""
    alg = m.algebra
    reducers = {}
    for key, dimk in m.dims.items():
        vecs = spans.get(key, [])
        if vecs:
            mat = Matrix(len(vecs), dimk, vecs)
            R, piv = mat.rref()
        else:
            R, piv = Matrix(0, dimk), []
        free = [j for j in range(dimk) if j not in set(piv)]
        # projection: ambient coords -> free coords after reduction
        proj = Matrix.zero(len(free), dimk)
        for r_i, j in enumerate(free):
            proj.data[r_i][j] = Fraction(1)
        for r_i, pc in enumerate(piv):
            for q_i, j in enumerate(free):
                c = R.data[r_i][j]
                if c:
                    proj.data[q_i][pc] = -c
        # proj sends e_pc to -sum over free of R[r][j]; lift sends free coord to e_j
        lift = Matrix.zero(dimk, len(free))
        for q_i, j in enumerate(free):
            lift.data[j][q_i] = Fraction(1)
        reducers[key] = (proj, lift)
    dims = {key: reducers[key][0].rows for key in m.dims if reducers[key][0].rows}
    action = {}
    for x in range(alg.num_vertices, alg.dim):
        sv, tv, dx = alg.source[x], alg.target[x], alg.degree[x]
        per = {}
        for (v, d) in m.dims:
            if v != sv:
                continue
            key_t = (tv, d + dx)
            if dims.get((v, d), 0) == 0 or dims.get(key_t, 0) == 0:
                continue
            proj_t, _ = reducers[key_t]
            _, lift_s = reducers[(v, d)]
            mat = proj_t * m.act(x, d) * lift_s
            if not mat.is_zero():
                per[d] = mat
        if per:
            action[x] = per
    quot = GradedModule(alg, dims, action, name=name)
    proj_blocks = {}
    for key in m.dims:
        pr = reducers[key][0]
        if pr.rows:
            proj_blocks[key] = pr
    proj = GradedModuleHom(m, quot, proj_blocks)
    return quot, proj


def cokernel(f: GradedModuleHom, name="coker"):
    return quotient_module(f.codomain, image_spans(f), name=name)


# ---------------------------------------------------------------------------
# top, socle, covers, envelopes, syzygies
# ---------------------------------------------------------------------------

def radical_span(m: GradedModule):
    """Per-block spanning vectors of M . rad(Lambda)."""
    alg = m.algebra
    spans = {key: [] for key in m.dims}
    for r in alg.radical_basis():
        for (key, i) in m.basis_elements():
            img = m.apply_element(m.unit_vector(key, i), r)
            for k2, vec in img.items():
                spans[k2].append(vec)
    return spans


def top_data(m: GradedModule):
    """Generators of M/M.rad: list of (block, lift-vector in M coords)."""
    from .linalg import complement_basis

    spans = radical_span(m)
    gens = []
    for key in m.blocks():
        dimk = m.dims[key]
        rows = [list(v) for v in spans.get(key, [])]
        base = Matrix(len(rows), dimk, rows) if rows else Matrix(0, dimk)
        for j in complement_basis(base, dimk):
            vec = [Fraction(0)] * dimk
            vec[j] = Fraction(1)
            gens.append((key, vec))
    return gens


def socle_spans(m: GradedModule):
    """Per-block basis of soc M = elements killed by rad."""
    alg = m.algebra
    rad = alg.radical_basis()
    out = {}
    for key, dimk in m.dims.items():
        stacked = []
        for r in rad:
            # matrix of (.r) restricted to this block: collect rows per target block
            per_target = {}
            for i in range(dimk):
                img = m.apply_element(m.unit_vector(key, i), r)
                for k2, vec in img.items():
                    per_target.setdefault(k2, [[Fraction(0)] * dimk
                                               for _ in range(len(vec))])
                    col = per_target[k2]
                    for r_i, val in enumerate(vec):
                        col[r_i][i] = val
            for k2, rows in per_target.items():
                stacked.extend(rows)
        if stacked:
            mat = Matrix(len(stacked), dimk, stacked)
            out[key] = mat.kernel_basis()
        else:
            out[key] = [list(v) for v in Matrix.identity(dimk).data]
    return {k: v for k, v in out.items() if v}


def projective_cover(m: GradedModule):
    """Minimal projective cover: returns (P, epi, generator tags).

    generator tags: list of (vertex, degree) matching the summands
    e_v Lambda <degree> of P in order.
    """
    alg = m.algebra
    alg.assert_split_basic()
    gens = top_data(m)
    parts = []
    tags = []
    for (v, d), _vec in gens:
        parts.append(projective_module(alg, v, d))
        tags.append((v, d))
    if not parts:
        return zero_module(alg), zero_hom(zero_module(alg), m), []
    P, injections, _ = direct_sum(alg, parts)
    blocks = {}
    for key in P.dims:
        blocks[key] = Matrix.zero(m.block_dim(*key), P.dims[key])
    # build epi columnwise: P basis elements are (generator, algebra element)
    for p_idx, part in enumerate(parts):
        (v, d), lift = gens[p_idx]
        idx_by_block = part._proj_basis_index
        for key, ix in idx_by_block.items():
            inj = injections[p_idx].blocks.get(key)
            if inj is None or m.block_dim(*key) == 0:
                continue
            for c_i, b in enumerate(ix):
                img = m.apply_element({(v, d): lift}, {b: Fraction(1)})
                vec = img.get(key)
                if vec is None:
                    continue
                col_in_P = next(r for r in range(inj.rows) if inj.data[r][c_i])
                for r_i, val in enumerate(vec):
                    blocks[key].data[r_i][col_in_P] = val
    epi = GradedModuleHom(P, m, blocks)
    if not epi.is_surjective():
        raise InternalCheckError("projective cover map not surjective")
    return P, epi, tags


def syzygy(m: GradedModule, strip: bool = False):
    """Kernel of the projective cover. With strip=True (self-injective use),
    projective summands of the result are split off and reported."""
    P, epi, tags = projective_cover(m)
    if not tags:
        return zero_module(m.algebra), []
    K, _incl = kernel_submodule(epi, name=f"Syz({m.name})")
    stripped = []
    if strip:
        K, stripped = strip_projective_summands(K)
    return K, stripped


def _socle_info(alg: GradedAlgebra):
    """For each vertex v: (socle vertex, socle degree, socle element coeff dict)
    of the projective e_v Lambda. Requires a simple socle (basic self-injective)."""
    cached = getattr(alg, "_socle_info_cache", None)
    if cached is not None:
        return cached
    info = {}
    for v in alg.vertices:
        P = projective_module(alg, v)
        spans = socle_spans(P)
        keys = [k for k, vecs in spans.items() if vecs]
        total = sum(len(spans[k]) for k in keys)
        if total != 1:
            raise InputError(
                f"socle of projective at vertex {v!r} is not simple; "
                "algebra is not basic self-injective in the supported sense"
            )
        (w, d) = keys[0]
        vec = spans[(w, d)][0]
        idx_by_block = P._proj_basis_index[(w, d)]
        elt = {}
        for i, c in enumerate(vec):
            if c:
                elt[idx_by_block[i]] = c
        info[v] = (w, d, elt)
    alg._socle_info_cache = info
    return info


def injective_envelope(m: GradedModule):
    """Minimal injective envelope over a self-injective graded algebra.

    Returns (I, mono, tags) with I a sum of shifted projectives e_w L <j>.
    """
    alg = m.algebra
    info = _socle_info(alg)
    soc = socle_spans(m)
    soc_to = {}  # vertex v -> projective vertex w with soc(e_w L) = S_v
    for w, (sv, _sd, _e) in info.items():
        if sv in soc_to:
            raise InputError("socle assignment not a permutation")
        soc_to[sv] = w
    parts = []
    tags = []
    soc_list = []
    for key in sorted(soc, key=lambda vd: (vd[1], str(vd[0]))):
        (v, d) = key
        for vec in soc[key]:
            w = soc_to.get(v)
            if w is None:
                raise InputError("no projective with matching socle vertex")
            _sv, sd, _elt = info[w]
            shift = d - sd
            parts.append(projective_module(alg, w, shift))
            tags.append((w, shift))
            soc_list.append(((v, d), vec))
    if not parts:
        return zero_module(alg), zero_hom(m, zero_module(alg)), []
    I, injections, _ = direct_sum(alg, parts)
    constraints = []
    for p_idx, ((key, vec), part) in enumerate(zip(soc_list, parts)):
        w, shift = tags[p_idx]
        _sv, sd, elt = info[w]
        # generator of e_w L <shift> is its unique basis elt at block (w, shift);
        # its image under the socle element spans soc of the part
        gen_block = (w, shift)
        gen_index = part._proj_basis_index[gen_block].index(alg.idempotent_index(w))
        gvec = [Fraction(0)] * part.dims[gen_block]
        gvec[gen_index] = Fraction(1)
        img = part.apply_element({gen_block: gvec}, elt)
        target = injections[p_idx].apply(img)
        constraints.append(({key: vec}, target))
    mono = hom_space_with_constraints(m, I, constraints)
    if mono is None:
        raise InternalCheckError("socle embedding does not extend to the module")
    if not mono.is_injective():
        raise InternalCheckError("injective envelope map not injective")
    return I, mono, tags


def cosyzygy(m: GradedModule, strip: bool = False):
    """Cokernel of the injective envelope; see syzygy for stripping."""
    I, mono, tags = injective_envelope(m)
    if not tags:
        return zero_module(m.algebra), []
    C, _proj = cokernel(mono, name=f"Cosyz({m.name})")
    stripped = []
    if strip:
        C, stripped = strip_projective_summands(C)
    return C, stripped


def find_projective_summand(m: GradedModule):
    """Find (v, j, element) such that e_v L <j> splits off via gen -> element."""
    alg = m.algebra
    info = _socle_info(alg)
    for (v, j) in m.blocks():
        _w, _d, selt = info[v]
        # the map M_(v,j) -> M_(t, j+h), x -> x . socle-element of e_v L
        for i in range(m.dims[(v, j)]):
            img = m.apply_element(m.unit_vector((v, j), i), selt)
            if img:
                return v, j, m.unit_vector((v, j), i)
    return None


def strip_projective_summands(m: GradedModule):
    """Split off all projective direct summands (self-injective base).

    Returns (module without projective summands, list of (v, j) stripped).
    """
    stripped = []
    current = m
    while not current.is_zero():
        found = find_projective_summand(current)
        if found is None:
            break
        v, j, elem = found
        alg = current.algebra
        P = projective_module(alg, v, j)
        gen_block = (v, j)
        gen_index = P._proj_basis_index[gen_block].index(alg.idempotent_index(v))
        # f: P -> current, generator -> elem
        fblocks = {}
        for key, ix in P._proj_basis_index.items():
            if current.block_dim(*key) == 0:
                continue
            mat = Matrix.zero(current.block_dim(*key), P.dims[key])
            for c_i, b in enumerate(ix):
                img = current.apply_element(elem, {b: Fraction(1)})
                vec = img.get(key)
                if vec:
                    for r_i, val in enumerate(vec):
                        mat.data[r_i][c_i] = val
            if not mat.is_zero():
                fblocks[key] = mat
        f = GradedModuleHom(P, current, fblocks)
        if not f.is_injective():
            raise InternalCheckError("projective summand detection produced a non-mono")
        # retraction g with g o f = id
        gvec = [Fraction(0)] * P.dims[gen_block]
        gvec[gen_index] = Fraction(1)
        gen_elem = {gen_block: gvec}
        constraints = [(f.apply(gen_elem), gen_elem)]
        g = hom_space_with_constraints(current, P, constraints)
        if g is None:
            raise InternalCheckError("projective summand does not split")
        C, _incl = kernel_submodule(g, name=current.name + "-proj")
        stripped.append((v, j))
        current = C
    return current, stripped


# ---------------------------------------------------------------------------
# stable homs, isomorphism, indecomposability
# ---------------------------------------------------------------------------

def stable_hom(m: GradedModule, n: GradedModule, prefer=None):
    """Basis of Hom modulo maps factoring through projectives.

    Returns (quotient dimension, representative homs, reducer) where
    reducer(h) gives coordinates of the class of h in the quotient basis.
    Homs in `prefer` are tried first as representatives.
    """
    H = hom_space(m, n)
    if not H:
        return 0, [], lambda h: []
    P, epi, tags = projective_cover(n)
    F = []
    if tags:
        for u in hom_space(m, P):
            F.append(epi.compose(u))
    layout, total = hom_frame(m, n)
    fvecs = [hom_flatten(h, layout, total) for h in F]
    fmat = Matrix(len(fvecs), total, fvecs) if fvecs else Matrix(0, total)
    R, piv = fmat.rref()
    frank = len(piv)
    reps = []
    rep_vecs = []
    base_rows = [R.data[i] for i in range(frank)]
    rank_now = frank
    for h in (list(prefer) if prefer else []) + H:
        vec = hom_flatten(h, layout, total)
        cand = base_rows + rep_vecs + [vec]
        r2 = Matrix(len(cand), total, cand).rank()
        if r2 > rank_now:
            reps.append(h)
            rep_vecs.append(vec)
            rank_now = r2
    qdim = rank_now - frank

    span_rows = base_rows + rep_vecs
    span_mat = Matrix(len(span_rows), total, span_rows) if span_rows else Matrix(0, total)

    def reducer(h):
        vec = hom_flatten(h, layout, total)
        if span_mat.rows == 0:
            if any(vec):
                raise InternalCheckError("hom outside computed span")
            return [Fraction(0)] * qdim
        sol = span_mat.transpose().solve(vec)
        if sol is None:
            raise InternalCheckError("hom outside computed span")
        return sol[frank:]

    return qdim, reps, reducer


@dataclass
class IsoVerdict:
    isomorphic: bool | None  # None = probably not (probabilistic)
    certified: bool
    certificate: object = None
    reason: str = ""

    @property
    def probabilistic(self) -> bool:
        return not self.certified


def is_isomorphic(m: GradedModule, n: GradedModule, rng=None, samples: int = 64):
    """Isomorphism test with certificates; NO may be probabilistic."""
    import random as _random

    if rng is None:
        rng = _random.Random(0)
    keys = set(m.dims) | set(n.dims)
    for key in keys:
        if m.block_dim(*key) != n.block_dim(*key):
            return IsoVerdict(False, True, reason="graded dimension vectors differ")
    if m.is_zero():
        return IsoVerdict(True, True, certificate=zero_hom(m, n))
    H = hom_space(m, n)
    if not H:
        return IsoVerdict(False, True, reason="no nonzero homomorphisms")
    for h in H:
        if h.is_isomorphism():
            return IsoVerdict(True, True, certificate=h)
    layout, total = hom_frame(m, n)
    vecs = [hom_flatten(h, layout, total) for h in H]
    sumvec = [sum(col) for col in zip(*vecs)]
    cands = [sumvec]
    for _ in range(samples):
        cands.append(random_int_combination(vecs, rng))
    for vec in cands:
        h = hom_unflatten(m, n, layout, vec)
        if h.is_isomorphism():
            return IsoVerdict(True, True, certificate=h)
    return IsoVerdict(
        None, False,
        reason=f"no invertible combination found in {samples} samples (probabilistic)",
    )


def endomorphism_table(m: GradedModule):
    """Basis of End(M) and structure constants of composition."""
    E = hom_space(m, m)
    layout, total = hom_frame(m, m)
    vecs = [hom_flatten(h, layout, total) for h in E]
    span = Matrix(len(vecs), total, vecs)
    spanT = span.transpose()
    table = {}
    for i, hi in enumerate(E):
        for j, hj in enumerate(E):
            comp = hi.compose(hj)
            sol = spanT.solve(hom_flatten(comp, layout, total))
            if sol is None:
                raise InternalCheckError("End(M) not closed under composition")
            table[(i, j)] = {k: c for k, c in enumerate(sol) if c}
    return E, table


def is_indecomposable(m: GradedModule):
    """True iff End(M)/rad is one-dimensional (char-0 trace form radical)."""
    if m.is_zero():
        return False, 0, 0
    E, table = endomorphism_table(m)
    ne = len(E)
    # trace form (i, j) -> tr(L_{b_i b_j}) on End(M); kernel = radical in char 0
    gram = Matrix(ne, ne)
    for i in range(ne):
        for j in range(ne):
            prod = table[(i, j)]
            tr = Fraction(0)
            for k, c in prod.items():
                for l in range(ne):
                    tr += c * table[(k, l)].get(l, Fraction(0))
            gram.data[i][j] = tr
    rad_dim = len(gram.kernel_basis())
    head = ne - rad_dim
    return head == 1, ne, head


# ---------------------------------------------------------------------------
# translations of homomorphisms
# ---------------------------------------------------------------------------

def shift_hom(f: GradedModuleHom, j: int, dom=None, cod=None) -> GradedModuleHom:
    """The hom f<j> between shifted modules."""
    dom = dom if dom is not None else shift_module(f.domain, j)
    cod = cod if cod is not None else shift_module(f.codomain, j)
    blocks = {(v, d + j): m for (v, d), m in f.blocks.items()}
    return GradedModuleHom(dom, cod, blocks)


@dataclass
class CoverData:
    module: GradedModule
    cover: GradedModule          # P
    epi: GradedModuleHom         # P -> module
    tags: list
    kernel: GradedModule         # Omega(module)
    incl: GradedModuleHom        # kernel -> P


def cover_data(m: GradedModule) -> CoverData:
    P, epi, tags = projective_cover(m)
    K, incl = kernel_submodule(epi, name=f"Syz({m.name})")
    return CoverData(m, P, epi, tags, K, incl)


@dataclass
class EnvelopeData:
    module: GradedModule
    envelope: GradedModule       # I
    mono: GradedModuleHom        # module -> I
    tags: list
    cokernel: GradedModule       # Omega^{-1}(module)
    proj: GradedModuleHom        # I -> cokernel


def envelope_data(m: GradedModule) -> EnvelopeData:
    I, mono, tags = injective_envelope(m)
    C, proj = cokernel(mono, name=f"Cosyz({m.name})")
    return EnvelopeData(m, I, mono, tags, C, proj)


def syzygy_of_hom(f: GradedModuleHom, src: CoverData, tgt: CoverData):
    """Omega(f): Omega(M) -> Omega(N) through chosen minimal covers."""
    # u: src.cover -> tgt.cover with tgt.epi o u = f o src.epi
    basis = hom_space(src.cover, tgt.cover)
    rows, rhs = [], []
    for x in generator_elements(src.cover):
        target = f.apply(src.epi.apply(x))
        images = [tgt.epi.apply(h.apply(x)) for h in basis]
        keys = set(target)
        for im in images:
            keys |= set(im)
        for k2 in sorted(keys, key=lambda vd: (vd[1], str(vd[0]))):
            dimk = tgt.module.block_dim(*k2)
            for r in range(dimk):
                rows.append([im.get(k2, [Fraction(0)] * dimk)[r] for im in images])
                rhs.append(target.get(k2, [Fraction(0)] * dimk)[r])
    if rows:
        sol = Matrix(len(rows), len(basis), rows).solve(rhs)
        if sol is None:
            raise InternalCheckError("cover lifting failed")
    else:
        sol = [Fraction(0)] * len(basis)
    u = zero_hom(src.cover, tgt.cover)
    for c, h in zip(sol, basis):
        if c:
            u = u.add(h.scale(c))
    # restrict to kernels
    blocks = {}
    for key in src.kernel.dims:
        mat = u.block(*key) * src.incl.block(*key)
        tgt_inc = tgt.incl.block(*key)
        if tgt_inc.cols == 0:
            if not mat.is_zero():
                raise InternalCheckError("syzygy restriction escapes the kernel")
            continue
        solm = tgt_inc.solve_matrix(mat)
        if solm is None:
            raise InternalCheckError("syzygy restriction escapes the kernel")
        if not solm.is_zero():
            blocks[key] = solm
    return GradedModuleHom(src.kernel, tgt.kernel, blocks)


def cosyzygy_of_hom(f: GradedModuleHom, src: EnvelopeData, tgt: EnvelopeData):
    """Omega^{-1}(f) through chosen minimal envelopes."""
    constraints = []
    for x in generator_elements(src.module):
        constraints.append((src.mono.apply(x), tgt.mono.apply(f.apply(x))))
    u = hom_space_with_constraints(src.envelope, tgt.envelope, constraints)
    if u is None:
        raise InternalCheckError("envelope extension failed")
    blocks = {}
    for key in src.cokernel.dims:
        # section of src.proj, then push through u and project
        pr = src.proj.block(*key)
        sec = pr.solve_matrix(Matrix.identity(pr.rows))
        if sec is None:
            raise InternalCheckError("cokernel projection has no section")
        mat = tgt.proj.block(*key) * u.block(*key) * sec
        if not mat.is_zero():
            blocks[key] = mat
    return GradedModuleHom(src.cokernel, tgt.cokernel, blocks)


# ---------------------------------------------------------------------------
# module file format
# ---------------------------------------------------------------------------

def parse_module_source(text: str, alg: GradedAlgebra) -> GradedModule:
    """Parse the line-oriented module format over a presented algebra.

        module NAME over ALGEBRA
        space VERTEX DEGREE DIM
        action ARROW DEGREE matrix r1c1,r1c2;r2c1,r2c2
        end

    Action lines name arrows of the quiver presentation; matrices map the
    (source, DEGREE) block to the (target, DEGREE + arrow degree) block with
    rows indexed by the target block. Omitted actions are zero. The actions
    of longer basis paths are composed from the arrow actions along the
    stored path witnesses, and the module axioms are then validated.
    """
    if alg.path_witness is None:
        raise InputError("module files need an algebra with a quiver presentation")
    name = None
    dims = {}
    arrow_action = {}
    ended = False
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ended:
            raise InputError("content after 'end'")
        parts = line.split()
        kw = parts[0]
        if kw == "module":
            if len(parts) != 4 or parts[2] != "over":
                raise InputError("module line must be 'module NAME over ALGEBRA'")
            name = parts[1]
        elif kw == "space":
            v, d, m = int(parts[1]), int(parts[2]), int(parts[3])
            if v not in alg.vertex_pos:
                raise InputError(f"unknown vertex {v}")
            if m < 0:
                raise InputError("negative dimension")
            if m:
                dims[(v, d)] = m
        elif kw == "action":
            if len(parts) < 4 or parts[3] != "matrix":
                raise InputError(f"bad action line: {line!r}")
            arrow = parts[1]
            d = int(parts[2])
            body = " ".join(parts[4:])
            rows = [r for r in body.split(";") if r.strip()]
            mat = [[frac(x) for x in r.split(",")] for r in rows]
            arrow_action[(arrow, d)] = mat
        elif kw == "end":
            ended = True
        else:
            raise InputError(f"unknown keyword {kw!r}")
    if name is None:
        raise InputError("missing module header")
    if not ended:
        raise InputError("missing 'end'")
    action = {}
    for (arrow, d), mat in arrow_action.items():
        if arrow not in alg.index_of:
            raise InputError(f"unknown arrow {arrow!r}")
        x = alg.index_of[arrow]
        wit = alg.path_witness.get(arrow)
        if wit is None or len(wit) != 1:
            raise InputError(f"{arrow!r} is not an arrow of the presentation")
        sdim = dims.get((alg.source[x], d), 0)
        tdim = dims.get((alg.target[x], d + alg.degree[x]), 0)
        m = Matrix(len(mat), len(mat[0]) if mat else 0, mat) if mat else Matrix(0, 0)
        if m.rows != tdim or m.cols != sdim:
            raise InputError(
                f"action of {arrow} at degree {d} must be {tdim}x{sdim}"
            )
        if not m.is_zero():
            action.setdefault(x, {})[d] = m
    out = GradedModule(alg, dims, action, name=name)
    _extend_action_along_witnesses(out)
    out.validate()
    return out


def _extend_action_along_witnesses(m: GradedModule):
    alg = m.algebra
    for b in range(alg.num_vertices, alg.dim):
        wit = alg.path_witness.get(alg.labels[b], ())
        if len(wit) <= 1:
            continue
        per = {}
        for (v, d) in list(m.dims):
            if v != alg.source[b]:
                continue
            mat = None
            cur_d = d
            ok = True
            for nm in wit:
                x = alg.index_of[nm]
                step = m.act(x, cur_d)
                mat = step if mat is None else step * mat
                cur_d += alg.degree[x]
                if mat.rows == 0:
                    ok = False
                    break
            if ok and mat is not None and not mat.is_zero():
                per[d] = mat
        if per:
            m.action[b] = per


def parse_module_file(path, alg: GradedAlgebra) -> GradedModule:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_module_source(fh.read(), alg)


def dump_module(m: GradedModule, name=None) -> str:
    alg = m.algebra
    lines = [f"module {name or m.name or 'M'} over {alg.name}"]
    for (v, d) in m.blocks():
        lines.append(f"space {v} {d} {m.dims[(v, d)]}")
    for x in sorted(m.action, key=lambda i: alg.labels[i]):
        for d in sorted(m.action[x]):
            mat = m.action[x][d]
            body = ";".join(",".join(str(e) for e in row) for row in mat.data)
            lines.append(f"action {alg.labels[x]} {d} matrix {body}")
    lines.append("end")
    return "\n".join(lines)


def generator_elements(m: GradedModule):
    """Elements generating M as a module (lifts of a basis of M/M.rad).

    Two module homomorphisms out of M agree iff they agree on these, which
    keeps constraint systems small.
    """
    cached = getattr(m, "_gen_elems", None)
    if cached is not None:
        return cached
    gens = [({key: vec},)[0] for (key, vec) in top_data(m)]
    m._gen_elems = gens
    return gens
