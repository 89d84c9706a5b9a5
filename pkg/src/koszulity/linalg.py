"""Exact dense linear algebra over the rationals.

Every entry is a `fractions.Fraction`, so rank, kernels and solutions are
exact; there is no tolerance anywhere in the package. Matrices are treated
as immutable once constructed (no method mutates `self`).
"""

from __future__ import annotations

from fractions import Fraction

Q = Fraction
ZERO = Fraction(0)
ONE = Fraction(1)


def frac(x) -> Fraction:
    return x if type(x) is Fraction else Fraction(x)


class Matrix:
    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data=None):
        self.rows = rows
        self.cols = cols
        if data is None:
            self.data = [[ZERO] * cols for _ in range(rows)]
        else:
            if len(data) != rows:
                raise ValueError("row count mismatch")
            self.data = [[frac(x) for x in row] for row in data]
            for row in self.data:
                if len(row) != cols:
                    raise ValueError("column count mismatch")

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(rows: int, cols: int) -> "Matrix":
        return Matrix(rows, cols)

    @staticmethod
    def identity(n: int) -> "Matrix":
        m = Matrix(n, n)
        for i in range(n):
            m.data[i][i] = ONE
        return m

    @staticmethod
    def from_rows(rows) -> "Matrix":
        rows = [list(r) for r in rows]
        if not rows:
            return Matrix(0, 0)
        return Matrix(len(rows), len(rows[0]), rows)

    @staticmethod
    def column_vector(entries) -> "Matrix":
        entries = list(entries)
        return Matrix(len(entries), 1, [[x] for x in entries])

    def copy(self) -> "Matrix":
        m = Matrix(self.rows, self.cols)
        m.data = [row[:] for row in self.data]
        return m

    # -- basics --------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(tuple(r) for r in self.data)))

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols}, {self.data!r})"

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.data for x in row)

    def row(self, i):
        return list(self.data[i])

    def column(self, j):
        return [self.data[i][j] for i in range(self.rows)]

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in add")
        m = Matrix(self.rows, self.cols)
        m.data = [
            [a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.data, other.data)
        ]
        return m

    def __sub__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in sub")
        m = Matrix(self.rows, self.cols)
        m.data = [
            [a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.data, other.data)
        ]
        return m

    def __neg__(self) -> "Matrix":
        m = Matrix(self.rows, self.cols)
        m.data = [[-a for a in row] for row in self.data]
        return m

    def scale(self, c) -> "Matrix":
        c = frac(c)
        m = Matrix(self.rows, self.cols)
        m.data = [[c * a for a in row] for row in self.data]
        return m

    def __mul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in mul")
        out = Matrix(self.rows, other.cols)
        odata = out.data
        bdata = other.data
        for i, arow in enumerate(self.data):
            orow = odata[i]
            for k, a in enumerate(arow):
                if a:
                    brow = bdata[k]
                    for j, b in enumerate(brow):
                        if b:
                            orow[j] += a * b
        return out

    def apply(self, vec):
        """Matrix times column vector (vector given and returned as a list)."""
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        out = []
        for row in self.data:
            s = ZERO
            for a, v in zip(row, vec):
                if a and v:
                    s += a * v
            out.append(s)
        return out

    def transpose(self) -> "Matrix":
        m = Matrix(self.cols, self.rows)
        if self.rows == 0:
            m.data = [[] for _ in range(self.cols)]
        else:
            m.data = [list(col) for col in zip(*self.data)]
        return m

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise ValueError("row mismatch in hstack")
        m = Matrix(self.rows, self.cols + other.cols)
        m.data = [ra + rb for ra, rb in zip(self.data, other.data)]
        return m

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise ValueError("col mismatch in vstack")
        m = Matrix(self.rows + other.rows, self.cols)
        m.data = [row[:] for row in self.data] + [row[:] for row in other.data]
        return m

    # -- elimination ----------------------------------------------------

    def rref(self):
        """Reduced row-echelon form.

        Returns (R, pivots) where R is the RREF and pivots the strictly
        increasing list of pivot columns. Row space is preserved.
        """
        data = [row[:] for row in self.data]
        nr, nc = self.rows, self.cols
        pivots = []
        r = 0
        for c in range(nc):
            if r == nr:
                break
            pr = None
            for i in range(r, nr):
                if data[i][c]:
                    pr = i
                    break
            if pr is None:
                continue
            if pr != r:
                data[r], data[pr] = data[pr], data[r]
            p = data[r][c]
            if p != 1:
                inv = ONE / p
                data[r] = [x * inv for x in data[r]]
            rowr = data[r]
            for i in range(nr):
                if i == r:
                    continue
                f = data[i][c]
                if f:
                    rowi = data[i]
                    data[i] = [a - f * b for a, b in zip(rowi, rowr)]
            pivots.append(c)
            r += 1
        out = Matrix(nr, nc)
        out.data = data
        return out, pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel_basis(self):
        """Basis of the right kernel {x : self @ x = 0}, as lists."""
        R, pivots = self.rref()
        free = [c for c in range(self.cols) if c not in set(pivots)]
        basis = []
        for fc in free:
            v = [ZERO] * self.cols
            v[fc] = ONE
            for r, pc in enumerate(pivots):
                v[pc] = -R.data[r][fc]
            basis.append(v)
        return basis

    def nullity(self) -> int:
        return self.cols - self.rank()

    def solve(self, b):
        """Solve self @ x = b exactly; returns a list or None if inconsistent."""
        if len(b) != self.rows:
            raise ValueError("rhs length mismatch")
        aug = Matrix(self.rows, self.cols + 1)
        aug.data = [row[:] + [frac(x)] for row, x in zip(self.data, b)]
        R, pivots = aug.rref()
        if self.cols in pivots:
            return None
        x = [ZERO] * self.cols
        for r, pc in enumerate(pivots):
            x[pc] = R.data[r][self.cols]
        return x

    def solve_matrix(self, B: "Matrix"):
        """Solve self @ X = B columnwise; returns Matrix or None."""
        if B.rows != self.rows:
            raise ValueError("shape mismatch")
        aug = self.hstack(B)
        R, pivots = aug.rref()
        if any(p >= self.cols for p in pivots):
            return None
        X = Matrix(self.cols, B.cols)
        for r, pc in enumerate(pivots):
            X.data[pc] = R.data[r][self.cols :]
        return X

    def inverse(self):
        """Exact inverse, or None when not square or singular."""
        if self.rows != self.cols:
            return None
        aug = self.hstack(Matrix.identity(self.rows))
        R, pivots = aug.rref()
        if pivots != list(range(self.rows)):
            return None
        inv = Matrix(self.rows, self.cols)
        inv.data = [row[self.cols :] for row in R.data]
        return inv

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows


def row_space_contains(span_rows: Matrix, vec) -> bool:
    """Is vec in the row space of span_rows?"""
    if span_rows.rows == 0:
        return all(x == 0 for x in vec)
    sol = span_rows.transpose().solve(list(vec))
    return sol is not None


def complement_basis(sub_rows: Matrix, amb_dim: int):
    """Extend a row-span to all of Q^amb_dim by standard basis vectors.

    Returns indices of standard basis vectors whose addition completes the
    span; deterministic (smallest indices first).
    """
    rows = [row[:] for row in sub_rows.data]
    chosen = []
    rank = Matrix.from_rows(rows).rank() if rows else 0
    for j in range(amb_dim):
        if rank == amb_dim:
            break
        e = [ZERO] * amb_dim
        e[j] = ONE
        r2 = Matrix(len(rows) + 1, amb_dim, rows + [e]).rank()
        if r2 > rank:
            rows.append(e)
            chosen.append(j)
            rank = r2
    return chosen


def random_int_combination(vectors, rng, lo=-5, hi=5):
    """Random integer combination of a list of equal-length vectors."""
    if not vectors:
        return None
    n = len(vectors[0])
    coeffs = [Fraction(rng.randint(lo, hi)) for _ in vectors]
    out = [ZERO] * n
    for c, v in zip(coeffs, vectors):
        if c:
            for i, x in enumerate(v):
                if x:
                    out[i] += c * x
    return out
