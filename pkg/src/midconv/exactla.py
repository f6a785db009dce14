"""Exact dense linear algebra over the rationals.

Matrices are immutable, every entry is a `fractions.Fraction`, and no
floating point appears anywhere.  Echelon forms are computed by
fraction-free (Bareiss) elimination on denominator-cleared integer rows,
which keeps intermediate entries at determinant-minor size; final results
are reduced back to canonical fractions.

Subspaces are stored in column-reduced echelon form with leftmost pivots.
This representative is unique, so two subspaces are equal iff their basis
matrices are identical, and all downstream tie-breaking (quotient
complements, canonical kernels) is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Scalar = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def as_scalar(x) -> Fraction:
    """Coerce an int, string like "-3/2", or Fraction to an exact Scalar."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact scalar: {x!r}")


class Mat:
    """Immutable dense matrix with Fraction entries, stored row-major."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Iterable[Iterable]):
        rows = tuple(tuple(as_scalar(x) for x in row) for row in data)
        self.data = rows
        self.rows = len(rows)
        self.cols = len(rows[0]) if rows else 0
        for row in rows:
            if len(row) != self.cols:
                raise ValueError("ragged rows")

    # -- constructors -------------------------------------------------

    @staticmethod
    def zeros(rows: int, cols: int) -> "Mat":
        m = object.__new__(Mat)
        m.data = tuple((_ZERO,) * cols for _ in range(rows))
        m.rows, m.cols = rows, cols
        return m

    @staticmethod
    def identity(n: int) -> "Mat":
        return Mat.diagonal([_ONE] * n)

    @staticmethod
    def diagonal(values: Sequence) -> "Mat":
        vals = [as_scalar(v) for v in values]
        n = len(vals)
        return Mat(
            [[vals[i] if i == j else _ZERO for j in range(n)] for i in range(n)]
        )

    @staticmethod
    def from_columns(cols: Sequence[Sequence], rows: int | None = None) -> "Mat":
        cols = [list(c) for c in cols]
        if rows is None:
            if not cols:
                raise ValueError("need explicit row count for empty column list")
            rows = len(cols[0])
        if not cols:
            return Mat.zeros(rows, 0)
        return Mat([[cols[j][i] for j in range(len(cols))] for i in range(rows)])

    @staticmethod
    def block(grid: Sequence[Sequence["Mat"]]) -> "Mat":
        """Assemble a matrix from a rectangular grid of blocks."""
        out_rows: list[tuple[Fraction, ...]] = []
        for block_row in grid:
            height = block_row[0].rows
            for b in block_row:
                if b.rows != height:
                    raise ValueError("block heights differ within a row")
            for i in range(height):
                row: list[Fraction] = []
                for b in block_row:
                    row.extend(b.data[i])
                out_rows.append(tuple(row))
        m = object.__new__(Mat)
        m.data = tuple(out_rows)
        m.rows = len(out_rows)
        m.cols = len(out_rows[0]) if out_rows else 0
        return m

    # -- access -------------------------------------------------------

    def __getitem__(self, key) -> Fraction:
        i, j = key
        return self.data[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.data[i]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self.data)

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "Mat":
        return Mat([[self.data[i][j] for j in col_idx] for i in row_idx])

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other: "Mat") -> "Mat":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in addition")
        return Mat(
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.data, other.data)
            ]
        )

    def __sub__(self, other: "Mat") -> "Mat":
        return self + (-other)

    def __neg__(self) -> "Mat":
        return Mat([[-x for x in row] for row in self.data])

    def __mul__(self, other):
        if isinstance(other, Mat):
            if self.cols != other.rows:
                raise ValueError("shape mismatch in product")
            bt = list(zip(*other.data)) if other.data else []
            if other.cols == 0 or self.rows == 0:
                return Mat.zeros(self.rows, other.cols)
            return Mat(
                [
                    [
                        sum(a * b for a, b in zip(row, colv) if a)
                        for colv in bt
                    ]
                    for row in self.data
                ]
            )
        return self.scaled(as_scalar(other))

    def __rmul__(self, other):
        return self.scaled(as_scalar(other))

    def scaled(self, s: Fraction) -> "Mat":
        return Mat([[s * x for x in row] for row in self.data])

    def __pow__(self, k: int) -> "Mat":
        if self.rows != self.cols:
            raise ValueError("power of a non-square matrix")
        acc = Mat.identity(self.rows)
        for _ in range(k):
            acc = acc * self
        return acc

    def transpose(self) -> "Mat":
        return Mat(list(zip(*self.data))) if self.data else Mat.zeros(self.cols, 0)

    def trace(self) -> Fraction:
        if self.rows != self.cols:
            raise ValueError("trace of a non-square matrix")
        return sum((self.data[i][i] for i in range(self.rows)), _ZERO)

    def apply(self, vec: Sequence[Fraction]) -> list[Fraction]:
        """Matrix-vector product as a plain list."""
        return [sum((a * v for a, v in zip(row, vec) if a), _ZERO) for row in self.data]

    # -- predicates ---------------------------------------------------

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.data for x in row)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def scalar_multiple_of_identity(self) -> Fraction | None:
        """Return c if the matrix equals c*I, else None."""
        if not self.is_square():
            return None
        c = self.data[0][0] if self.rows else _ZERO
        for i in range(self.rows):
            for j in range(self.cols):
                if self.data[i][j] != (c if i == j else 0):
                    return None
        return c

    def __eq__(self, other) -> bool:
        return isinstance(other, Mat) and self.data == other.data \
            and self.rows == other.rows and self.cols == other.cols

    def __hash__(self):
        return hash((self.rows, self.cols, self.data))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in row) for row in self.data)
        return f"Mat[{self.rows}x{self.cols}: {body}]"


def hstack(blocks: Sequence[Mat]) -> Mat:
    return Mat.block([list(blocks)])


def vstack(blocks: Sequence[Mat]) -> Mat:
    return Mat.block([[b] for b in blocks])


def kron(a: Mat, b: Mat) -> Mat:
    """Kronecker product with (X⊗Y)[a*n+c, b*m+d] = X[a,b]·Y[c,d]."""
    out = []
    for i in range(a.rows):
        for k in range(b.rows):
            row = []
            for j in range(a.cols):
                aij = a.data[i][j]
                row.extend(aij * y for y in b.data[k])
            out.append(row)
    return Mat(out)


# ---------------------------------------------------------------------
# Fraction-free elimination
# ---------------------------------------------------------------------

def _integer_rows(rows: Iterable[Sequence[Fraction]]) -> list[list[int]]:
    """Clear denominators row by row (row scaling preserves the row space)."""
    out = []
    for row in rows:
        den = 1
        for x in row:
            d = x.denominator
            den = den // gcd(den, d) * d
        out.append([int(x.numerator * (den // x.denominator)) for x in row])
    return out


def _bareiss_forward(rows: list[list[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """One-step fraction-free forward elimination; returns echelon rows
    (pivot rows only) and the pivot column indices."""
    rows = [r[:] for r in rows]
    nrows = len(rows)
    piv_cols: list[int] = []
    prev = 1
    pr = 0
    for pc in range(ncols):
        sel = None
        for i in range(pr, nrows):
            if rows[i][pc]:
                sel = i
                break
        if sel is None:
            continue
        if sel != pr:
            rows[pr], rows[sel] = rows[sel], rows[pr]
        p = rows[pr][pc]
        prow = rows[pr]
        for i in range(pr + 1, nrows):
            ri = rows[i]
            f = ri[pc]
            for j in range(pc, ncols):
                ri[j] = (p * ri[j] - f * prow[j]) // prev
        prev = p
        piv_cols.append(pc)
        pr += 1
        if pr == nrows:
            break
    return rows[:pr], piv_cols


def _rref_rows(rows: Iterable[Sequence[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form of the given spanning rows (unique)."""
    int_rows = _integer_rows(rows)
    ech, piv_cols = _bareiss_forward(int_rows, ncols)
    rref = [[Fraction(x) for x in row] for row in ech]
    for i in reversed(range(len(piv_cols))):
        pc = piv_cols[i]
        p = rref[i][pc]
        if p != 1:
            rref[i] = [x / p for x in rref[i]]
        for k in range(i):
            f = rref[k][pc]
            if f:
                rref[k] = [a - f * b for a, b in zip(rref[k], rref[i])]
    return rref, piv_cols


def rank(m: Mat) -> int:
    _, piv = _bareiss_forward(_integer_rows(m.data), m.cols)
    return len(piv)


def det(m: Mat) -> Fraction:
    """Exact determinant via Bareiss elimination."""
    if not m.is_square():
        raise ValueError("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return _ONE
    rows = []
    scale = _ONE
    for row in m.data:
        den = 1
        for x in row:
            d = x.denominator
            den = den // gcd(den, d) * d
        scale /= den
        rows.append([int(x.numerator * (den // x.denominator)) for x in row])
    sign = 1
    prev = 1
    for pc in range(n):
        sel = None
        for i in range(pc, n):
            if rows[i][pc]:
                sel = i
                break
        if sel is None:
            return _ZERO
        if sel != pc:
            rows[pc], rows[sel] = rows[sel], rows[pc]
            sign = -sign
        p = rows[pc][pc]
        for i in range(pc + 1, n):
            ri = rows[i]
            f = ri[pc]
            for j in range(pc, n):
                ri[j] = (p * ri[j] - f * rows[pc][j]) // prev
        prev = p
    return sign * scale * prev


def inverse(m: Mat) -> Mat:
    """Exact inverse; raises ValueError on singular input."""
    if not m.is_square():
        raise ValueError("inverse of a non-square matrix")
    n = m.rows
    aug = [list(m.data[i]) + [_ONE if i == j else _ZERO for j in range(n)]
           for i in range(n)]
    rref, piv = _rref_rows(aug, 2 * n)
    if piv != list(range(n)):
        raise ValueError("matrix is singular")
    return Mat([row[n:] for row in rref])


# ---------------------------------------------------------------------
# Subspaces
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^ambient_dim in canonical column-echelon form.

    `basis` has the basis vectors as columns; column i has a 1 in row
    pivot_rows[i] and zeros in every other pivot row.  The representative
    is unique, so equality of subspaces is equality of these fields.
    """

    ambient_dim: int
    basis: Mat
    pivot_rows: tuple[int, ...]

    @staticmethod
    def zero(ambient_dim: int) -> "Subspace":
        return Subspace(ambient_dim, Mat.zeros(ambient_dim, 0), ())

    @staticmethod
    def from_spanning(vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        vecs = [[as_scalar(x) for x in v] for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise ValueError("spanning vector has wrong length")
        if not vecs:
            return Subspace.zero(ambient_dim)
        rref, piv = _rref_rows(vecs, ambient_dim)
        if not piv:
            return Subspace.zero(ambient_dim)
        basis = Mat([[rref[j][i] for j in range(len(piv))] for i in range(ambient_dim)])
        return Subspace(ambient_dim, basis, tuple(piv))

    @property
    def dim(self) -> int:
        return len(self.pivot_rows)

    def basis_columns(self) -> list[list[Fraction]]:
        return [list(self.basis.col(j)) for j in range(self.dim)]

    def reduce_vector(self, vec: Sequence) -> list[Fraction]:
        """Residue of vec modulo the subspace: kill all pivot rows."""
        v = [as_scalar(x) for x in vec]
        if len(v) != self.ambient_dim:
            raise ValueError("vector has wrong length")
        for j, p in enumerate(self.pivot_rows):
            c = v[p]
            if c:
                col = self.basis.col(j)
                v = [a - c * b for a, b in zip(v, col)]
        return v

    def contains_vector(self, vec: Sequence) -> bool:
        return all(x == 0 for x in self.reduce_vector(vec))

    def contains(self, other: "Subspace") -> bool:
        return all(self.contains_vector(c) for c in other.basis_columns())

    def sum(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient dimensions differ")
        return Subspace.from_spanning(
            self.basis_columns() + other.basis_columns(), self.ambient_dim
        )

    def intersect(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient dimensions differ")
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient_dim)
        # Solve A x = B y: kernel of [A | -B] projected through A.
        a_cols = self.basis_columns()
        b_cols = other.basis_columns()
        stacked = Mat(
            [
                [a_cols[j][i] for j in range(len(a_cols))]
                + [-b_cols[j][i] for j in range(len(b_cols))]
                for i in range(self.ambient_dim)
            ]
        )
        _, ker = rref_nullspace(stacked)
        vecs = []
        for kcol in ker.basis_columns():
            x = kcol[: len(a_cols)]
            vec = [
                sum((a_cols[j][i] * x[j] for j in range(len(a_cols))), _ZERO)
                for i in range(self.ambient_dim)
            ]
            vecs.append(vec)
        return Subspace.from_spanning(vecs, self.ambient_dim)


def rref_nullspace(m: Mat) -> tuple[int, Subspace]:
    """Rank and canonical right nullspace of m."""
    rref, piv = _rref_rows(m.data, m.cols) if m.rows else ([], [])
    piv_set = set(piv)
    free = [j for j in range(m.cols) if j not in piv_set]
    vecs = []
    for f in free:
        v = [_ZERO] * m.cols
        v[f] = _ONE
        for i, p in enumerate(piv):
            v[p] = -rref[i][f]
        vecs.append(v)
    return len(piv), Subspace.from_spanning(vecs, m.cols)


class IncrementalSpan:
    """Mutable echelon accumulator for growing a span vector by vector."""

    def __init__(self, ambient_dim: int):
        self.ambient_dim = ambient_dim
        self._rows: list[tuple[int, list[Fraction]]] = []  # (pivot, row), pivots increasing

    @property
    def dim(self) -> int:
        return len(self._rows)

    def residue(self, vec: Sequence) -> list[Fraction]:
        v = [as_scalar(x) for x in vec]
        for p, row in self._rows:
            c = v[p]
            if c:
                v = [a - c * b for a, b in zip(v, row)]
        return v

    def add(self, vec: Sequence) -> bool:
        """Insert vec; returns True iff it enlarged the span."""
        v = self.residue(vec)
        piv = next((i for i, x in enumerate(v) if x), None)
        if piv is None:
            return False
        inv = _ONE / v[piv]
        v = [x * inv for x in v]
        for p, row in self._rows:
            c = row[piv]
            if c:
                row[:] = [a - c * b for a, b in zip(row, v)]
        self._rows.append((piv, v))
        self._rows.sort(key=lambda t: t[0])
        return True


# ---------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class Poly:
    """Univariate polynomial over Q, coefficients lowest degree first."""

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable):
        cs = [as_scalar(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # zero polynomial has degree -1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [_ZERO] * (n - len(self.coeffs))
        b = list(other.coeffs) + [_ZERO] * (n - len(other.coeffs))
        return Poly([x + y for x, y in zip(a, b)])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def __mul__(self, other: "Poly") -> "Poly":
        if self.is_zero() or other.is_zero():
            return Poly([])
        out = [_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [_ZERO] * max(0, len(rem) - len(other.coeffs) + 1)
        d = other.coeffs
        lead = d[-1]
        while len(rem) >= len(d) and any(rem):
            if rem[-1] == 0:
                rem.pop()
                continue
            k = len(rem) - len(d)
            c = rem[-1] / lead
            q[k] = c
            for i, dc in enumerate(d):
                rem[k + i] -= c * dc
            rem.pop()
        return Poly(q), Poly(rem)

    def derivative(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        lead = self.coeffs[-1]
        return Poly([c / lead for c in self.coeffs])

    @staticmethod
    def gcd(a: "Poly", b: "Poly") -> "Poly":
        while not b.is_zero():
            _, r = a.divmod(b)
            a, b = b, r
        return a.monic()

    def squarefree_part(self) -> "Poly":
        if self.degree <= 0:
            return self.monic()
        g = Poly.gcd(self, self.derivative())
        q, r = self.divmod(g)
        assert r.is_zero()
        return q.monic()

    def __call__(self, x) -> Fraction:
        x = as_scalar(x)
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def of_matrix(self, m: Mat) -> Mat:
        acc = Mat.zeros(m.rows, m.cols)
        for c in reversed(self.coeffs):
            acc = acc * m + Mat.diagonal([c] * m.rows)
        return acc


# ---------------------------------------------------------------------
# Characteristic polynomial and spectra
# ---------------------------------------------------------------------

def charpoly(m: Mat) -> Poly:
    """Monic characteristic polynomial det(xI - m), by Faddeev-LeVerrier."""
    if not m.is_square():
        raise ValueError("characteristic polynomial of a non-square matrix")
    n = m.rows
    coeffs = [_ZERO] * n + [_ONE]  # x^n + c_{n-1} x^{n-1} + ... + c_0
    mk = Mat.identity(n)
    for k in range(1, n + 1):
        mk = m * mk
        ck = -mk.trace() / k
        coeffs[n - k] = ck
        if k < n:
            mk = mk + Mat.diagonal([ck] * n)
    return Poly(coeffs)


def _variations(values: list[Fraction]) -> int:
    signs = [1 if v > 0 else -1 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _integer_roots_monic(q: Poly) -> list[int]:
    """All integer roots of a monic polynomial with integer coefficients,
    by Sturm isolation and exact verification (no integer factorization)."""
    sf = q.squarefree_part()
    if sf.degree <= 0:
        return []
    if sf.degree == 1:
        r = -sf.coeffs[0] / sf.coeffs[1]
        return [int(r)] if r.denominator == 1 and q(r) == 0 else []
    chain = [sf, sf.derivative()]
    while chain[-1].degree > 0:
        _, r = chain[-2].divmod(chain[-1])
        if r.is_zero():
            break
        chain.append(-r)

    def var_at(x: Fraction) -> int:
        return _variations([p(x) for p in chain])

    def count(a: Fraction, b: Fraction) -> int:
        return var_at(a) - var_at(b)

    bound = 1 + max(abs(c) for c in sf.coeffs[:-1])
    b0 = Fraction(int(bound) + 1)
    lo, hi = -b0 - Fraction(1, 2), b0 + Fraction(1, 2)
    roots: set[int] = set()
    stack = [(lo, hi, count(lo, hi))]
    while stack:
        a, b, cnt = stack.pop()
        if cnt <= 0:
            continue
        width = b - a
        if cnt == 1 and width < 1:
            # at most one integer in (a, b]
            c = int(b) if b.denominator == 1 else (b.numerator // b.denominator)
            if a < c <= b and q(Fraction(c)) == 0:
                roots.add(c)
            continue
        mid = (a + b) / 2
        if mid.denominator == 1:
            if sf(mid) == 0:
                roots.add(int(mid))
            # move the split point off the grid of candidate roots
            mid = mid + width / 4
        cl = count(a, mid)
        stack.append((a, mid, cl))
        stack.append((mid, b, cnt - cl))
    return sorted(roots)


def rational_spectrum(m: Mat) -> tuple[list[tuple[Fraction, int]], bool]:
    """All rational eigenvalues with algebraic multiplicities.

    Returns (pairs, fully_rational) with pairs sorted by descending
    multiplicity, then ascending eigenvalue; fully_rational is True iff
    the multiplicities sum to the matrix size.
    """
    p = charpoly(m)
    n = m.rows
    if n == 0:
        return [], True
    # substitute x = y/D to get a monic integer polynomial in y
    d = 1
    for c in p.coeffs:
        q = c.denominator
        d = d // gcd(d, q) * q
    q_coeffs = [c * d ** (n - i) for i, c in enumerate(p.coeffs)]
    q_poly = Poly(q_coeffs)
    eigs = []
    total = 0
    for y in _integer_roots_monic(q_poly):
        lam = Fraction(y, d)
        mult = 0
        rem = p
        while True:
            quo, r = rem.divmod(Poly([-lam, _ONE]))
            if not r.is_zero():
                break
            mult += 1
            rem = quo
        eigs.append((lam, mult))
        total += mult
    eigs.sort(key=lambda t: (-t[1], t[0]))
    return eigs, total == n


def is_semisimple(m: Mat) -> bool:
    """True iff m is diagonalizable over the complex numbers, i.e. the
    squarefree part of the characteristic polynomial annihilates m."""
    if not m.is_square():
        raise ValueError("semisimplicity of a non-square matrix")
    if m.rows == 0:
        return True
    return charpoly(m).squarefree_part().of_matrix(m).is_zero()


def jordan_partition(m: Mat, lam) -> tuple[int, ...]:
    """Jordan block sizes of eigenvalue lam, descending; empty if lam is
    not an eigenvalue.  Computed from the nullity sequence of (m-lam)^k."""
    if not m.is_square():
        raise ValueError("jordan partition of a non-square matrix")
    lam = as_scalar(lam)
    n = m.rows
    shifted = m - Mat.diagonal([lam] * n)
    nullities = [0]
    power = Mat.identity(n)
    for _ in range(n):
        power = power * shifted
        nullities.append(n - rank(power))
        if nullities[-1] == nullities[-2]:
            break
    # blocks of size >= k: nullities[k] - nullities[k-1]
    geq = [nullities[k] - nullities[k - 1] for k in range(1, len(nullities))]
    geq = [g for g in geq if g > 0]
    return conjugate_partition(tuple(geq))


def conjugate_partition(p: Sequence[int]) -> tuple[int, ...]:
    """Transpose of an integer partition (input sorted descending)."""
    p = [x for x in p if x > 0]
    if not p:
        return ()
    out = []
    for k in range(1, max(p) + 1):
        out.append(sum(1 for x in p if x >= k))
    return tuple(out)


def primary_components(m: Mat) -> list[tuple[Fraction | None, Subspace]]:
    """Split Q^n into the generalized eigenspaces of the rational
    eigenvalues, plus one residual invariant component spanning the
    non-rational part of the spectrum (None tag) if there is one."""
    if not m.is_square():
        raise ValueError("primary components of a non-square matrix")
    n = m.rows
    spec, full = rational_spectrum(m)
    comps: list[tuple[Fraction | None, Subspace]] = []
    residual = charpoly(m)
    for lam, mult in spec:
        shifted = m - Mat.diagonal([lam] * n)
        _, ker = rref_nullspace(shifted ** mult)
        comps.append((lam, ker))
        for _ in range(mult):
            residual, r = residual.divmod(Poly([-lam, _ONE]))
            assert r.is_zero()
    if not full:
        _, ker = rref_nullspace(residual.of_matrix(m))
        comps.append((None, ker))
    assert sum(c[1].dim for c in comps) == n
    return comps
