"""Minimal graded projective resolutions, Ext tables and Yoneda products.

A term of a resolution is a formal direct sum of shifted projectives
e_v Lambda<d>, realized as an explicit module on demand. A map between
formal projectives is a matrix of algebra elements: entry (l, k) lies in
e_{v_l} Lambda e_{v_k} and acts by left multiplication on the k-th
generator. Hom(P, N) is then a direct sum of blocks of N and the induced
maps are right actions, which keeps Ext computations small.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .linalg import Matrix
from .algebra import GradedAlgebra, InputError, InternalCheckError
from . import modules as mo


class FormalProjective:
    """Direct sum of e_v Lambda <d> with explicit realization."""

    def __init__(self, alg: GradedAlgebra, gens):
        self.alg = alg
        self.gens = list(gens)  # list of (vertex, degree)
        self.parts = [mo.projective_module(alg, v, d) for (v, d) in self.gens]
        if self.parts:
            self.module, self.injections, self.projections = mo.direct_sum(
                alg, self.parts
            )
        else:
            self.module = mo.zero_module(alg)
            self.injections, self.projections = [], []
        # column map: block key -> list of (gen index, algebra basis index)
        self.colmap = {}
        for key in self.module.dims:
            cols = [None] * self.module.dims[key]
            for p_i, part in enumerate(self.parts):
                inj = self.injections[p_i].blocks.get(key)
                if inj is None:
                    continue
                ix = part._proj_basis_index.get(key, [])
                for c_i, b in enumerate(ix):
                    row = next(r for r in range(inj.rows) if inj.data[r][c_i])
                    cols[row] = (p_i, b)
            self.colmap[key] = cols

    @property
    def rank(self) -> int:
        return len(self.gens)

    def generator_element(self, k: int) -> dict:
        v, d = self.gens[k]
        part = self.parts[k]
        gen_index = part._proj_basis_index[(v, d)].index(
            self.alg.idempotent_index(v)
        )
        vec = [Fraction(0)] * part.dims[(v, d)]
        vec[gen_index] = Fraction(1)
        return self.injections[k].apply({(v, d): vec})

    def element_to_formal(self, elem: dict):
        """Decompose an explicit element into algebra elements per generator."""
        out = [dict() for _ in self.gens]
        for key, vec in elem.items():
            cols = self.colmap[key]
            for pos, val in enumerate(vec):
                if val:
                    p_i, b = cols[pos]
                    out[p_i][b] = out[p_i].get(b, Fraction(0)) + val
        return [{b: c for b, c in comp.items() if c} for comp in out]

    def formal_to_element(self, column) -> dict:
        """Inverse of element_to_formal for a single formal column."""
        elem = {}
        for p_i, comp in enumerate(column):
            part = self.parts[p_i]
            for b, c in comp.items():
                key = None
                for blk, ix in part._proj_basis_index.items():
                    if b in ix:
                        key = blk
                        pos = ix.index(b)
                        break
                if key is None:
                    raise InternalCheckError("formal entry outside projective")
                vec = [Fraction(0)] * part.dims[key]
                vec[pos] = c
                img = self.injections[p_i].apply({key: vec})
                for k2, v2 in img.items():
                    if k2 not in elem:
                        elem[k2] = [Fraction(0)] * len(v2)
                    for i, x in enumerate(v2):
                        elem[k2][i] += x
        return {k: v for k, v in elem.items() if any(v)}


def formal_explicit_hom(source: FormalProjective, target: FormalProjective, columns):
    """Explicit hom for a formal matrix given as columns (per source gen)."""
    alg = source.alg
    blocks = {}
    for key in source.module.dims:
        blocks[key] = Matrix.zero(target.module.block_dim(*key),
                                  source.module.dims[key])
    for k, col in enumerate(columns):
        base = target.formal_to_element(col)
        # image of (gen_k . x) = base . x for each basis element x of e_v L
        v, d = source.gens[k]
        part = source.parts[k]
        inj = source.injections[k]
        for key, ix in part._proj_basis_index.items():
            injblk = inj.blocks.get(key)
            if injblk is None:
                continue
            for c_i, b in enumerate(ix):
                img = target.module.apply_element(base, {b: Fraction(1)})
                if not img:
                    continue
                row_in_total = next(
                    r for r in range(injblk.rows) if injblk.data[r][c_i]
                )
                vec = img.get(key)
                if vec is None:
                    continue
                for r_i, val in enumerate(vec):
                    blocks[key].data[r_i][row_in_total] = val
    blocks = {k: m for k, m in blocks.items() if not m.is_zero()}
    return mo.GradedModuleHom(source.module, target.module, blocks)


def compose_formal(alg: GradedAlgebra, a_cols, a_rank, b_cols):
    """Columns of A o B where B: Q -> R and A: R -> S are formal matrices.

    a_cols: columns of A (per generator of R), each a list over gens of S.
    b_cols: columns of B (per generator of Q), each a list over gens of R.
    """
    out = []
    for col in b_cols:
        acc = None
        for r_i, lam in enumerate(col):
            if not lam:
                continue
            a_col = a_cols[r_i]
            if acc is None:
                acc = [dict() for _ in a_col]
            for s_i, mu in enumerate(a_col):
                if not mu:
                    continue
                prod = alg.mult(mu, lam)
                if prod:
                    tgt = acc[s_i]
                    for k, c in prod.items():
                        s = tgt.get(k, Fraction(0)) + c
                        if s:
                            tgt[k] = s
                        else:
                            tgt.pop(k, None)
        if acc is None:
            acc = [dict() for _ in (a_cols[0] if a_cols else [])]
        out.append(acc)
    return out


class MinimalResolution:
    """Minimal projective resolution built by iterated covers and kernels."""

    def __init__(self, m: mo.GradedModule):
        self.module = m
        self.terms = []       # FormalProjective per homological degree
        self.diff_cols = []   # diff_cols[i]: columns of d_i : P_i -> P_{i-1}, i>=1
        self.diff_homs = [None]  # explicit homs, diff_homs[i] for i>=1
        self.eps = None
        self.syzygies = [m]   # syzygies[i] = Omega^i M (no stripping here)
        self._extend_once_zero = False

    def length(self) -> int:
        return len(self.terms) - 1

    def extend(self, upto: int):
        while len(self.terms) <= upto and not self._extend_once_zero:
            self._step()
        return self

    def _step(self):
        alg = self.module.algebra
        cur = self.syzygies[-1]
        if cur.is_zero():
            self.terms.append(FormalProjective(alg, []))
            if len(self.terms) > 1:
                self.diff_cols.append([])
                self.diff_homs.append(
                    mo.zero_hom(self.terms[-1].module, self.terms[-2].module)
                )
            else:
                self.eps = mo.zero_hom(self.terms[-1].module, self.module)
            self._extend_once_zero = True
            return
        P, epi, tags = mo.projective_cover(cur)
        fp = FormalProjective(alg, tags)
        # identify: the cover produced by projective_cover matches fp part order
        if len(self.terms) == 0:
            # eps: fp.module -> M via the cover epi (same explicit module layout)
            self.eps = mo.GradedModuleHom(fp.module, self.module, dict(epi.blocks))
            K, incl = mo.kernel_submodule(epi, name="Omega^1")
            self.terms.append(fp)
            self._last_incl = incl
            self.syzygies.append(K)
            return
        prev_fp = self.terms[-1]
        prev_incl = self._last_incl  # K_{i-1} -> P_{i-1}.module
        cols = []
        gens = mo.top_data(cur)
        # projective_cover used the same top_data order; map generators through
        for (key, lift) in gens:
            img = prev_incl.apply({key: lift})
            cols.append(prev_fp.element_to_formal(img))
        dhom = formal_explicit_hom(fp, prev_fp, cols)
        # kernel of the cover epi of cur gives next syzygy, embedded via incl
        K, incl_k = mo.kernel_submodule(epi, name=f"Omega^{len(self.terms) + 1}")
        # embed K into P_i.module, then push into explicit chain:
        self.terms.append(fp)
        self.diff_cols.append(cols)
        self.diff_homs.append(dhom)
        self._last_incl = incl_k
        self.syzygies.append(K)
        # minimality: syzygy contained in the radical of the cover
        # (guaranteed by top-based construction)

    def term_gens(self, i: int):
        return self.terms[i].gens if i < len(self.terms) else []

    def generator_degrees(self, i: int):
        return sorted(d for (_v, d) in self.term_gens(i))

    def is_finished_at(self, i: int) -> bool:
        return i < len(self.terms) and self.terms[i].rank == 0


# ---------------------------------------------------------------------------
# Ext computations
# ---------------------------------------------------------------------------

def _hom_complex_frame(res: MinimalResolution, n: mo.GradedModule, i: int, j: int):
    """Coordinates of Hom(P_i, N<j>) = sum over gens of N_{(v, d - j)}."""
    layout = []
    offset = 0
    for k, (v, d) in enumerate(res.term_gens(i)):
        size = n.block_dim(v, d - j)
        layout.append(((v, d - j), offset, size))
        offset += size
    return layout, offset


def delta_matrix(res: MinimalResolution, n: mo.GradedModule, i: int, j: int):
    """Matrix of f -> f o d_{i+1} on the Hom-complex coordinates."""
    src_layout, src_total = _hom_complex_frame(res, n, i, j)
    tgt_layout, tgt_total = _hom_complex_frame(res, n, i + 1, j)
    mat = Matrix.zero(tgt_total, src_total)
    if i + 1 >= len(res.terms):
        return mat
    cols = res.diff_cols[i]  # columns of d_{i+1}: P_{i+1} -> P_i (see extend())
    for c, col in enumerate(cols):
        key_c, off_c, size_c = tgt_layout[c]
        if size_c == 0:
            continue
        for k, lam in enumerate(col):
            if not lam:
                continue
            key_k, off_k, size_k = src_layout[k]
            if size_k == 0:
                continue
            for s in range(size_k):
                unit = [Fraction(0)] * size_k
                unit[s] = Fraction(1)
                img = n.apply_element({key_k: unit}, lam)
                vec = img.get(key_c)
                if vec:
                    for t, val in enumerate(vec):
                        mat.data[off_c + t][off_k + s] += val
    return mat


@dataclass
class ExtGroup:
    i: int
    j: int
    dim: int
    reps: list          # cocycles as coordinate vectors
    layout: list
    total: int
    _span: Matrix = None
    _brank: int = 0

    def reduce(self, vec):
        """Coordinates of a cocycle's class in the chosen basis."""
        if self._span.rows == 0:
            if any(vec):
                raise InternalCheckError("cocycle outside computed span")
            return [Fraction(0)] * self.dim
        sol = self._span.transpose().solve(list(vec))
        if sol is None:
            raise InternalCheckError("cocycle outside computed span")
        return sol[self._brank:]


def ext_group(res: MinimalResolution, n: mo.GradedModule, i: int, j: int) -> ExtGroup:
    res.extend(i + 1)
    layout, total = _hom_complex_frame(res, n, i, j)
    if total == 0:
        return ExtGroup(i, j, 0, [], layout, 0, Matrix(0, 0), 0)
    d_out = delta_matrix(res, n, i, j)
    cocycles = d_out.kernel_basis() if d_out.rows else [
        [Fraction(1) if t == s else Fraction(0) for t in range(total)]
        for s in range(total)
    ]
    if i >= 1:
        d_in = delta_matrix(res, n, i - 1, j)
        bcols = [d_in.column(c) for c in range(d_in.cols)]
    else:
        bcols = []
    brows = []
    if bcols:
        bmat = Matrix(len(bcols), total, bcols)
        R, piv = bmat.rref()
        brows = [R.data[r] for r in range(len(piv))]
    brank = len(brows)
    reps = []
    span_rows = list(brows)
    rank_now = brank
    for z in cocycles:
        cand = span_rows + [z]
        r2 = Matrix(len(cand), total, cand).rank()
        if r2 > rank_now:
            reps.append(z)
            span_rows.append(z)
            rank_now = r2
    span = Matrix(len(span_rows), total, span_rows) if span_rows else Matrix(0, total)
    return ExtGroup(i, j, rank_now - brank, reps, layout, total, span, brank)


def cocycle_values(res: MinimalResolution, eg: ExtGroup, vec):
    """Cocycle coordinate vector -> list of N-elements per generator of P_i."""
    out = []
    for k, (key, off, size) in enumerate(eg.layout):
        comp = list(vec[off: off + size])
        out.append({key: comp} if any(comp) else {})
    return out


def values_to_vec(eg: ExtGroup, values):
    vec = [Fraction(0)] * eg.total
    for k, (key, off, size) in enumerate(eg.layout):
        comp = values[k].get(key)
        if comp:
            for t, val in enumerate(comp):
                vec[off + t] = val
    return vec


@dataclass
class ExtTable:
    i_max: int
    j_min: int
    j_max: int
    dims: dict          # (i, j) -> dimension
    groups: dict        # (i, j) -> ExtGroup

    def dim(self, i, j):
        return self.dims.get((i, j), 0)

    def tsv(self) -> str:
        lines = ["i\\j\t" + "\t".join(str(j) for j in range(self.j_min, self.j_max + 1))]
        for i in range(self.i_max + 1):
            row = [str(i)]
            for j in range(self.j_min, self.j_max + 1):
                row.append(str(self.dim(i, j)))
            lines.append("\t".join(row))
        return "\n".join(lines)


def ext_table(res: MinimalResolution, n: mo.GradedModule, i_max: int,
              j_min: int, j_max: int, cross_check=None) -> ExtTable:
    """Bigraded Ext dims with representatives.

    cross_check: optional callable (i, j, dim) for the stable-hom comparison.
    """
    res.extend(i_max + 1)
    dims = {}
    groups = {}
    for i in range(i_max + 1):
        for j in range(j_min, j_max + 1):
            eg = ext_group(res, n, i, j)
            if eg.dim:
                dims[(i, j)] = eg.dim
            groups[(i, j)] = eg
            if cross_check is not None:
                cross_check(i, j, eg.dim)
    return ExtTable(i_max, j_min, j_max, dims, groups)


def hom_window(res: MinimalResolution, n: mo.GradedModule, i: int):
    """All j with Hom(P_i, N<j>) possibly nonzero."""
    degs = [d for (_v, d) in res.term_gens(i)]
    if not degs or n.is_zero():
        return range(0)
    nd = n.degrees()
    return range(min(d - nd[-1] for d in degs), max(d - nd[0] for d in degs) + 1)


def ungraded_ext_dim(m: mo.GradedModule, n: mo.GradedModule, i: int) -> int:
    """Ext over the ungraded algebra, with the graded row-sum self-test."""
    alg = m.algebra
    ualg = alg.forget_grading()

    def forget(mod):
        dims = {}
        for (v, d), k in mod.dims.items():
            dims[(v, 0)] = dims.get((v, 0), 0) + k
        # block offsets per vertex
        offs = {}
        acc = {}
        for (v, d) in mod.blocks():
            offs[(v, d)] = acc.get(v, 0)
            acc[v] = acc.get(v, 0) + mod.dims[(v, d)]
        action = {}
        for x in range(alg.num_vertices, alg.dim):
            sv, tv = alg.source[x], alg.target[x]
            dx = alg.degree[x]
            tot_s = dims.get((sv, 0), 0)
            tot_t = dims.get((tv, 0), 0)
            if not tot_s or not tot_t:
                continue
            mat = Matrix.zero(tot_t, tot_s)
            nz = False
            for (v, d) in mod.blocks():
                if v != sv:
                    continue
                sub = mod.act(x, d)
                if sub.rows == 0 or sub.cols == 0 or sub.is_zero():
                    continue
                r0 = offs.get((tv, d + dx))
                if r0 is None:
                    continue
                c0 = offs[(v, d)]
                for r in range(sub.rows):
                    for c in range(sub.cols):
                        if sub.data[r][c]:
                            mat.data[r0 + r][c0 + c] = sub.data[r][c]
                            nz = True
            if nz:
                action[x] = {0: mat}
        return mo.GradedModule(ualg, dims, action, name=mod.name + "_u")

    mu, nu = forget(m), forget(n)
    ures = MinimalResolution(mu)
    udim = ext_group(ures, nu, i, 0).dim
    # graded side
    gres = MinimalResolution(m)
    gres.extend(i + 1)
    total = 0
    for j in hom_window(gres, n, i):
        total += ext_group(gres, n, i, j).dim
    if total != udim:
        raise InternalCheckError(
            f"graded/ungraded Ext mismatch at i={i}: {total} vs {udim}"
        )
    return udim


# ---------------------------------------------------------------------------
# chain lifting and Yoneda products
# ---------------------------------------------------------------------------

class CocycleLift:
    """Chain maps g_m: P(src)_{p+m} -> P(tgt)_m lifting a cocycle.

    The cocycle lives in Ext^p(source module, target module <q>); values are
    stored in unshifted coordinates so the lift solves in plain modules.
    """

    def __init__(self, src_res: MinimalResolution, tgt_res: MinimalResolution,
                 p: int, values):
        self.src_res = src_res
        self.tgt_res = tgt_res
        self.p = p
        self.values = values
        self.stages = []  # stages[m] = columns of g_m

    def ensure(self, m_max: int):
        alg = self.src_res.module.algebra
        self.src_res.extend(self.p + m_max + 1)
        self.tgt_res.extend(m_max + 1)
        while len(self.stages) <= m_max:
            m = len(self.stages)
            src_fp = self.src_res.terms[self.p + m]
            tgt_fp = self.tgt_res.terms[m]
            cols = []
            if m == 0:
                eps = self.tgt_res.eps
                for k in range(src_fp.rank):
                    val = self.values[k]
                    pre = _solve_hom_preimage(eps, val)
                    if pre is None:
                        raise InternalCheckError("cocycle value misses augmentation")
                    cols.append(tgt_fp.element_to_formal(pre))
            else:
                prev_cols = self.stages[m - 1]
                d_src = self.src_res.diff_cols[self.p + m - 1]
                d_tgt_hom = self.tgt_res.diff_homs[m]
                rhs_cols = compose_formal(alg, prev_cols,
                                          len(prev_cols), d_src)
                prev_tgt_fp = self.tgt_res.terms[m - 1]
                for k in range(src_fp.rank):
                    rhs = prev_tgt_fp.formal_to_element(rhs_cols[k])
                    pre = _solve_hom_preimage(d_tgt_hom, rhs)
                    if pre is None:
                        raise InternalCheckError("chain lifting failed (not a cycle)")
                    cols.append(tgt_fp.element_to_formal(pre))
            self.stages.append(cols)
        return self


def _solve_hom_preimage(h: mo.GradedModuleHom, target: dict):
    """Solve h(x) = target blockwise; None if no solution."""
    out = {}
    for key, vec in target.items():
        blk = h.block(*key)
        if blk.cols == 0:
            if any(vec):
                return None
            continue
        sol = blk.solve(list(vec))
        if sol is None:
            return None
        if any(sol):
            out[key] = sol
    return out


def yoneda_product(value_module: mo.GradedModule,
                   f_p: int, f_values,
                   g_lift: CocycleLift):
    """Values of the product cocycle (f composed after the translated g).

    f is a cocycle at homological degree f_p over g_lift's target
    resolution, with values in value_module; the result is a cocycle over
    g_lift.src_res at degree f_p + g_lift.p with values in value_module.
    """
    g_lift.ensure(f_p)
    cols = g_lift.stages[f_p]
    out = []
    for col in cols:
        acc = {}
        for l, lam in enumerate(col):
            if not lam:
                continue
            val = f_values[l]
            if not val:
                continue
            img = value_module.apply_element(val, lam)
            for key, vec in img.items():
                if key not in acc:
                    acc[key] = [Fraction(0)] * len(vec)
                for t, x in enumerate(vec):
                    acc[key][t] += x
        out.append({k: v for k, v in acc.items() if any(v)})
    return out


# ---------------------------------------------------------------------------
# global dimension and tilting modules
# ---------------------------------------------------------------------------

@dataclass
class GldimResult:
    value: int | None     # exact value when determined, else None
    exceeded: bool        # True when all we know is gldim >= bound + 1
    bound: int

    def __str__(self):
        if self.exceeded:
            return f">= {self.bound + 1}"
        return str(self.value)

    def le(self, n: int) -> bool | None:
        if not self.exceeded:
            return self.value <= n
        return None if self.bound < n else False


def gldim_upto(a0: GradedAlgebra, bound: int) -> GldimResult:
    """Global dimension via minimal resolutions of the simple modules."""
    worst = 0
    for v in a0.vertices:
        s = mo.simple_module(a0, v, 0)
        res = MinimalResolution(s)
        res.extend(bound + 1)
        pd = None
        for i in range(len(res.terms)):
            if res.terms[i].rank == 0:
                pd = i - 1
                break
        if pd is None:
            if res.syzygies[-1].is_zero():
                pd = len(res.terms) - 1
            else:
                return GldimResult(None, True, bound)
        worst = max(worst, pd)
    return GldimResult(worst, False, bound)


def projective_dimension_upto(m: mo.GradedModule, bound: int):
    res = MinimalResolution(m)
    res.extend(bound + 1)
    for i in range(len(res.terms)):
        if res.terms[i].rank == 0:
            return i - 1, res
    if res.syzygies[-1].is_zero():
        return len(res.terms) - 1, res
    return None, res


@dataclass
class TiltingReport:
    is_tilting: bool
    pd: int | None = None
    ext_checked_upto: int = 0
    coresolution_mults: list = None
    reason: str = ""
    probabilistic: bool = False
    inconclusive: bool = False


def decompose_in_add(m: mo.GradedModule, summands, rng=None):
    """Multiplicities c_i with m isomorphic to sum of summands^{c_i}, or None.

    Candidate multiplicities come from graded dimension vectors, the
    certificate is an explicit isomorphism.
    """
    if m.is_zero():
        return [0] * len(summands)
    keys = sorted({k for s in summands for k in s.dims}
                  | set(m.dims), key=lambda vd: (vd[1], str(vd[0])))
    cols = []
    for s in summands:
        cols.append([Fraction(s.block_dim(*k)) for k in keys])
    target = [Fraction(m.block_dim(*k)) for k in keys]
    matr = Matrix(len(keys), len(summands),
                  [[cols[c][r] for c in range(len(summands))]
                   for r in range(len(keys))])
    sol = matr.solve(target)
    if sol is None:
        return None
    mults = []
    for x in sol:
        if x.denominator != 1 or x < 0:
            return None
        mults.append(int(x))
    parts = []
    for c, s in zip(mults, summands):
        parts.extend([s] * c)
    if not parts:
        return None
    total, _, _ = mo.direct_sum(m.algebra, parts)
    verdict = mo.is_isomorphic(m, total, rng=rng)
    if verdict.isomorphic:
        return mults
    return None


def tilting_module_check(a0: GradedAlgebra, summands, pd_cap: int = 16,
                         rng=None) -> TiltingReport:
    """Tilting test for T = direct sum of the given indecomposable summands.

    Checks finite projective dimension, Ext-vanishing, and builds the
    coresolution of the regular module in add T greedily.
    """
    if not a0.is_concentrated_degree_zero():
        raise InputError("tilting check expects an algebra in degree 0")
    T, _, _ = mo.direct_sum(a0, list(summands))
    pd, res = projective_dimension_upto(T, pd_cap)
    if pd is None:
        return TiltingReport(False, inconclusive=True,
                             reason=f"projective dimension exceeds cap {pd_cap}")
    for i in range(1, pd + 1):
        if ext_group(res, T, i, 0).dim:
            return TiltingReport(False, pd=pd, ext_checked_upto=i,
                                 reason=f"Ext^{i}(T,T) nonzero")
    # coresolution 0 -> A -> T^0 -> ... -> T^l -> 0
    current, _, _ = mo.regular_module(a0)
    mults = []
    cap = pd + a0.dim + 1
    step = 0
    while True:
        found = decompose_in_add(current, list(summands), rng=rng)
        if found is not None:
            mults.append(found)
            break
        if step > cap:
            return TiltingReport(False, pd=pd, ext_checked_upto=pd,
                                 inconclusive=True,
                                 reason=f"coresolution cap {cap} exceeded")
        homs = mo.hom_space(current, T)
        if not homs:
            return TiltingReport(False, pd=pd, ext_checked_upto=pd,
                                 reason="no maps into add T; regular module "
                                        "does not embed")
        parts = [T] * len(homs)
        total, injections, _ = mo.direct_sum(a0, parts)
        univ = mo.zero_hom(current, total)
        for h_i, h in enumerate(homs):
            univ = univ.add(injections[h_i].compose(h))
        if not univ.is_injective():
            return TiltingReport(False, pd=pd, ext_checked_upto=pd,
                                 reason="universal map into add T not injective")
        mults.append(len(homs))
        current, _ = mo.cokernel(univ)
        step += 1
    return TiltingReport(True, pd=pd, ext_checked_upto=pd,
                         coresolution_mults=mults)
