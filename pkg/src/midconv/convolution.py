"""Convolution matrices, the kernel subspaces and middle convolution.

The convolution of an n-dimensional tuple lives on V' = V^{oplus M} with
M the slot count.  Middle convolution with parameter mu is the induced
action on the quotient V'/(K + L(mu)); the quotient is realized on the
coordinate complement of the non-pivot rows of the canonical echelon basis
of K + L(mu), which makes the output fully deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionError
from .exactla import Mat, Subspace, as_scalar, rref_nullspace
from .model import MatrixTuple, SingularPoint, validate

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class ConvolvedTuple:
    """The size-nM tuple of convolution matrices, with the slot layout of
    the direct sum V' recorded in block_index."""

    base: MatrixTuple
    mu: Fraction
    block_index: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class MCOutcome:
    """Result of one middle convolution.

    `projection` (n~ x nM) and `section` (nM x n~) realize the chosen
    coordinate complement: projection * section is the identity and every
    result coefficient equals projection * conv_matrix * section.
    """

    result: MatrixTuple
    dim_K: tuple[int, ...]
    dim_L: int
    projection: Mat
    section: Mat


def _block_upper_toeplitz(coeffs: list[Mat]) -> Mat:
    """[[c0 c1 ... ck], [0 c0 ... c_{k-1}], ..., [0 ... 0 c0]]."""
    n = coeffs[0].rows
    k = len(coeffs)
    z = Mat.zeros(n, n)
    grid = [[coeffs[b - a] if b >= a else z for b in range(k)] for a in range(k)]
    return Mat.block(grid)


def convolution_matrices(t: MatrixTuple, mu) -> ConvolvedTuple:
    """Build the convolution matrices of the tuple for parameter mu.

    For each slot (i, j) the matrix has one dense block row at slot (i, j)
    containing the full coefficient row (with mu*I added in column (i, 0)
    when i != 0), a band of mu*I blocks at rows (i, j') for j' > j in
    columns (i, j'-j), and zeros elsewhere.
    """
    validate(t)
    mu = as_scalar(mu)
    n = t.size
    slots = t.slots()
    m_total = len(slots)
    pos = {s: k for k, s in enumerate(slots)}
    nm = n * m_total

    def build(i: int, j: int) -> Mat:
        rows = [[_ZERO] * nm for _ in range(nm)]

        def write(block_row: int, block_col: int, mat: Mat, add: bool = False):
            r0, c0 = block_row * n, block_col * n
            for a in range(n):
                row = rows[r0 + a]
                for b in range(n):
                    v = mat.data[a][b]
                    if add:
                        row[c0 + b] += v
                    else:
                        row[c0 + b] = v

        dense = pos[(i, j)]
        for (ii, jj) in slots:
            write(dense, pos[(ii, jj)], t.coeff(ii, jj))
        if i != 0:
            r0, c0 = dense * n, pos[(i, 0)] * n
            for a in range(n):
                rows[r0 + a][c0 + a] += mu
        m_i = t.point(i).poincare_rank
        for jp in range(j + 1, m_i + 1):
            r0, c0 = pos[(i, jp)] * n, pos[(i, jp - j)] * n
            for a in range(n):
                rows[r0 + a][c0 + a] = mu
        return Mat(rows)

    inf = SingularPoint(
        None, t.infinity.poincare_rank,
        tuple(build(0, j) for j in range(t.infinity.poincare_rank, 0, -1)),
    )
    fin = []
    for i, p in enumerate(t.finite, start=1):
        fin.append(
            SingularPoint(
                p.location, p.poincare_rank,
                tuple(build(i, j) for j in range(p.poincare_rank, -1, -1)),
            )
        )
    base = MatrixTuple(nm, inf, tuple(fin))
    return ConvolvedTuple(base, mu, tuple(slots))


def _slot_offsets(t: MatrixTuple) -> dict[tuple[int, int], int]:
    return {s: k * t.size for k, s in enumerate(t.slots())}


def subspace_K(t: MatrixTuple) -> tuple[list[Subspace], Subspace]:
    """Per-point kernels of the block-Toeplitz principal parts, embedded in
    V'; the point at infinity contributes the zero space.  Returns the list
    (indexed by point) and their direct sum."""
    validate(t)
    n = t.size
    nm = n * t.slot_count
    offs = _slot_offsets(t)
    per_point: list[Subspace] = [Subspace.zero(nm)]
    for i, p in enumerate(t.finite, start=1):
        toep = _block_upper_toeplitz(list(p.coeffs))
        _, ker = rref_nullspace(toep)
        vecs = []
        for col in ker.basis_columns():
            v = [_ZERO] * nm
            for idx, j in enumerate(range(p.poincare_rank, -1, -1)):
                base = offs[(i, j)]
                for a in range(n):
                    v[base + a] = col[idx * n + a]
            vecs.append(v)
        per_point.append(Subspace.from_spanning(vecs, nm))
    combined = Subspace.from_spanning(
        [c for s in per_point for c in s.basis_columns()], nm
    )
    return per_point, combined


def subspace_Lprime(t: MatrixTuple, mu) -> Subspace:
    """Solutions supported on the infinity slots and the common residue
    slot: the kernel of the infinity block-Toeplitz system whose corner is
    the derived residue minus mu*I, embedded with v_0^{(i)} = -ell at every
    finite point."""
    validate(t)
    mu = as_scalar(mu)
    n = t.size
    nm = n * t.slot_count
    offs = _slot_offsets(t)
    m0 = t.infinity.poincare_rank
    corner = t.residue_at_infinity() - Mat.diagonal([mu] * n)
    toep = _block_upper_toeplitz(list(t.infinity.coeffs) + [corner])
    _, ker = rref_nullspace(toep)
    vecs = []
    for col in ker.basis_columns():
        v = [_ZERO] * nm
        for idx, j in enumerate(range(m0, 0, -1)):
            base = offs[(0, j)]
            for a in range(n):
                v[base + a] = col[idx * n + a]
        ell = col[m0 * n:(m0 + 1) * n]
        for i in range(1, t.num_finite + 1):
            base = offs[(i, 0)]
            for a in range(n):
                v[base + a] = -ell[a]
        vecs.append(v)
    return Subspace.from_spanning(vecs, nm)


def subspace_L(t: MatrixTuple, mu) -> Subspace:
    """L(mu): equal to L'(mu) for mu != 0; for mu = 0 the kernel of the
    single block row formed by all stored coefficients."""
    mu = as_scalar(mu)
    if mu != 0:
        return subspace_Lprime(t, mu)
    validate(t)
    row = Mat.block([[t.coeff(i, j) for (i, j) in t.slots()]])
    _, ker = rref_nullspace(row)
    return ker


def predicted_size(t: MatrixTuple, mu) -> int:
    """Size of the middle convolution quotient, from subspace dimensions
    alone (for mu != 0 the kernel sum is direct)."""
    mu = as_scalar(mu)
    nm = t.size * t.slot_count
    _, big_k = subspace_K(t)
    if mu != 0:
        return nm - big_k.dim - subspace_Lprime(t, mu).dim
    return nm - big_k.sum(subspace_L(t, 0)).dim


def middle_convolution(t: MatrixTuple, mu, pivot_side: str = "left") -> MCOutcome:
    """Middle convolution with parameter mu.

    The quotient V'/(K + L(mu)) is realized on the coordinate subspace
    complementary to the pivot rows of the canonical basis of K + L(mu);
    `pivot_side` selects leftmost (default) or rightmost pivot rows, which
    changes the result only by simultaneous similarity.
    """
    if pivot_side not in ("left", "right"):
        raise ValueError("pivot_side must be 'left' or 'right'")
    validate(t)
    mu = as_scalar(mu)
    conv = convolution_matrices(t, mu)
    per_point, big_k = subspace_K(t)
    big_l = subspace_L(t, mu)
    w = big_k.sum(big_l)
    nm = t.size * t.slot_count
    new_size = nm - w.dim
    if new_size == 0:
        raise PreconditionError(
            "middle convolution quotient is zero-dimensional (degenerate input)"
        )

    if pivot_side == "left":
        reducer = list(zip(w.pivot_rows, w.basis_columns()))
    else:
        rev = Subspace.from_spanning(
            [list(reversed(c)) for c in w.basis_columns()], nm
        )
        reducer = [
            (nm - 1 - p, list(reversed(c)))
            for p, c in zip(rev.pivot_rows, rev.basis_columns())
        ]
    pivot_set = {p for p, _ in reducer}
    comp = [c for c in range(nm) if c not in pivot_set]

    def reduce_vec(v: list[Fraction]) -> list[Fraction]:
        for p, b in reducer:
            c = v[p]
            if c:
                v = [a - c * x for a, x in zip(v, b)]
        return v

    def quotient_matrix(big: Mat) -> Mat:
        cols = []
        for c in comp:
            img = reduce_vec(list(big.col(c)))
            cols.append([img[x] for x in comp])
        return Mat([[cols[j][i] for j in range(new_size)] for i in range(new_size)])

    def quotient_point(p: SingularPoint) -> SingularPoint:
        return SingularPoint(
            p.location, p.poincare_rank,
            tuple(quotient_matrix(a) for a in p.coeffs),
        )

    result = MatrixTuple(
        new_size,
        quotient_point(conv.base.infinity),
        tuple(quotient_point(p) for p in conv.base.finite),
    )

    proj_rows = []
    for c in comp:
        row = [_ZERO] * nm
        row[c] = _ONE
        for p, b in reducer:
            row[p] -= b[c]
        proj_rows.append(row)
    projection = Mat(proj_rows)
    section = Mat([[_ONE if (comp[j] == i) else _ZERO for j in range(new_size)]
                   for i in range(nm)])

    return MCOutcome(
        result=result,
        dim_K=tuple(s.dim for s in per_point),
        dim_L=big_l.dim,
        projection=projection,
        section=section,
    )


@dataclass(frozen=True)
class InvarianceReport:
    """Exact membership checks: does every convolution matrix map each of
    K, L(mu), L'(mu) into itself?  Any False here is a bug."""

    slots: tuple[tuple[int, int], ...]
    k_ok: tuple[bool, ...]
    l_ok: tuple[bool, ...]
    lprime_ok: tuple[bool, ...]

    @property
    def all_pass(self) -> bool:
        return all(self.k_ok) and all(self.l_ok) and all(self.lprime_ok)


def check_invariance(t: MatrixTuple, mu) -> InvarianceReport:
    """Verify the invariance of K, L(mu) and L'(mu) under every
    convolution matrix by exact membership tests."""
    validate(t)
    mu = as_scalar(mu)
    conv = convolution_matrices(t, mu)
    _, big_k = subspace_K(t)
    big_l = subspace_L(t, mu)
    big_lp = subspace_Lprime(t, mu)
    slots = conv.block_index

    def stable(space: Subspace, big: Mat) -> bool:
        return all(
            space.contains_vector(big.apply(col)) for col in space.basis_columns()
        )

    mats = [conv.base.coeff(i, j) for (i, j) in slots]
    return InvarianceReport(
        slots=slots,
        k_ok=tuple(stable(big_k, m) for m in mats),
        l_ok=tuple(stable(big_l, m) for m in mats),
        lprime_ok=tuple(stable(big_lp, m) for m in mats),
    )
