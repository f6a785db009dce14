"""Commutant dimensions, index of rigidity, irreducibility, similarity.

The index of a tuple is  sum_i dim C^(i) - (M-1) n^2  where C^(i) is the
space of block-Toeplitz matrices commuting with the point's block-Toeplitz
coefficient matrix (the derived residue enters at infinity).  Commutant
dimensions are always obtained from exact nullspaces; the closed formula
in terms of multiplicity patterns is only used as a cross-check because it
carries semisimplicity hypotheses that the nullspace does not.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionError
from .exactla import (
    IncrementalSpan,
    Mat,
    as_scalar,
    det,
    hstack,
    inverse,
    is_semisimple,
    kron,
    primary_components,
    rational_spectrum,
    rref_nullspace,
)
from .model import MatrixTuple, SpectralType, strip_trivial, validate

_ZERO = Fraction(0)


def _ad(a: Mat) -> Mat:
    """Matrix of X -> aX - Xa on row-major vectorized X."""
    n = a.rows
    i_n = Mat.identity(n)
    return kron(a, i_n) - kron(i_n, a.transpose())


def _nullity(m: Mat) -> int:
    r, _ = rref_nullspace(m)
    return m.cols - r


def centralizer_dim(a: Mat) -> int:
    """dim{X : Xa = aX}, via primary decomposition plus exact nullspaces."""
    n = a.rows
    comps = primary_components(a)
    if len(comps) == 1:
        if a.scalar_multiple_of_identity() is not None:
            return n * n
        return _nullity(_ad(a))
    p = hstack([Mat.from_columns(s.basis_columns(), n) for _, s in comps])
    b = inverse(p) * a * p
    total = 0
    off = 0
    for _, s in comps:
        idx = range(off, off + s.dim)
        total += centralizer_dim(b.submatrix(idx, idx))
        off += s.dim
    return total


def _pair_commutant_dense(a1: Mat, a0: Mat) -> int:
    """Nullity of {(C1, C0) : [a1,C1] = 0, [a1,C0] + [a0,C1] = 0}."""
    n = a1.rows
    ad1 = _ad(a1)
    ad0 = _ad(a0)
    z = Mat.zeros(n * n, n * n)
    big = Mat.block([[ad1, z], [ad0, ad1]])
    return _nullity(big)


def _pair_commutant_dim(a1: Mat, a0: Mat) -> int:
    """Commutant dimension of a rank-one point, split along the primary
    components of the leading coefficient: blocks with disjoint spectra
    determine the off-diagonal parts uniquely, so only the diagonal blocks
    contribute equations or parameters."""
    n = a1.rows
    c = a1.scalar_multiple_of_identity()
    if c is not None:
        return n * n + centralizer_dim(a0)
    comps = primary_components(a1)
    if len(comps) == 1:
        return _pair_commutant_dense(a1, a0)
    p = hstack([Mat.from_columns(s.basis_columns(), n) for _, s in comps])
    pinv = inverse(p)
    b1 = pinv * a1 * p
    b0 = pinv * a0 * p
    total = 0
    off = 0
    for _, s in comps:
        idx = range(off, off + s.dim)
        total += _pair_commutant_dim(b1.submatrix(idx, idx), b0.submatrix(idx, idx))
        off += s.dim
    return total


def commutant_dim(t: MatrixTuple, i: int) -> int:
    """Dimension of the commutant of point i's block-Toeplitz coefficient
    matrix, as the exact nullspace of the coupled commutator relations
    sum_{j=0}^{k} [A_{m-j}, C_{m-k+j}] = 0  for k = 0..m.

    For i = 0 the relations include the derived residue.
    """
    validate(t)
    coeffs = t.point_coeffs_with_residue(i)  # A_m, ..., A_0
    m = len(coeffs) - 1
    n = t.size
    if m == 0:
        return centralizer_dim(coeffs[0])
    if m == 1:
        return _pair_commutant_dim(coeffs[0], coeffs[1])
    nn = n * n
    z = Mat.zeros(nn, nn)
    ads = [_ad(a) for a in coeffs]  # ads[idx] = ad of A_{m-idx}
    grid = []
    for k in range(m + 1):
        row = []
        for s_idx in range(m + 1):  # column block: unknown C_{m - s_idx}
            jj = k - s_idx  # pairs C_{m-k+j} with A_{m-j} at j = k - s_idx
            row.append(ads[jj] if jj >= 0 else z)
        grid.append(row)
    return _nullity(Mat.block(grid))


@dataclass(frozen=True)
class RigidityReport:
    """Per-point commutant dimensions, local indices and the global index;
    the identity  index = sum(local) + 2 n^2  holds on every report."""

    n: int
    r: int
    M: int
    commutant_dims: tuple[int, ...]
    local_indices: tuple[int, ...]
    index: int


def local_index(t: MatrixTuple, i: int) -> int:
    """dim C^(i) - (m_i + 1) n^2."""
    validate(t)
    m_i = t.point(i).poincare_rank
    return commutant_dim(t, i) - (m_i + 1) * t.size * t.size


def index(t: MatrixTuple) -> RigidityReport:
    """Global index of rigidity with its per-point breakdown."""
    validate(t)
    n = t.size
    dims = tuple(commutant_dim(t, i) for i in range(t.num_points))
    locs = tuple(
        d - (t.point(i).poincare_rank + 1) * n * n for i, d in enumerate(dims)
    )
    m_total = t.slot_count
    idx = sum(dims) - (m_total - 1) * n * n
    assert idx == sum(locs) + 2 * n * n
    return RigidityReport(
        n=n, r=t.num_finite, M=m_total,
        commutant_dims=dims, local_indices=locs, index=idx,
    )


def index_from_spectral(types: list[SpectralType], r: int, n: int) -> int:
    """Index of rigidity from multiplicity patterns alone:
    sum over points and blocks of (n_l^2 + sum of squared parts) - 2 r n^2."""
    if len(types) != r + 1:
        raise PreconditionError(f"expected {r + 1} spectral types, got {len(types)}")
    total = 0
    for st in types:
        if st.size != n:
            raise PreconditionError("spectral type size differs from n")
        for nl, parts in st.pattern():
            total += nl * nl + sum(q * q for q in parts)
    return total - 2 * r * n * n


def okubo_index(t_mat: Mat, a_mat: Mat) -> int:
    """Index of rigidity of an Okubo normal form (zI - T) dPsi/dz = A Psi:
    sum_j (n_j^2 + dim Z(A^[j,j])) + dim Z(A) - n^2, with all centralizer
    dimensions computed as exact nullspaces."""
    if not t_mat.is_square() or not a_mat.is_square() or t_mat.rows != a_mat.rows:
        raise PreconditionError("T and A must be square of equal size")
    if not is_semisimple(t_mat):
        raise PreconditionError("T is not semisimple")
    spec, full = rational_spectrum(t_mat)
    if not full:
        raise PreconditionError("T does not have a fully rational spectrum")
    if not is_semisimple(a_mat):
        raise PreconditionError("A is not semisimple")
    n = t_mat.rows
    spec = sorted(spec, key=lambda v: v[0])
    bases = []
    for d, mult in spec:
        _, ker = rref_nullspace(t_mat - Mat.diagonal([d] * n))
        bases.append((mult, ker))
    p = hstack([Mat.from_columns(s.basis_columns(), n) for _, s in bases])
    b = inverse(p) * a_mat * p
    total = centralizer_dim(a_mat) - n * n
    off = 0
    for mult, _ in bases:
        idx = range(off, off + mult)
        blk = b.submatrix(idx, idx)
        if not is_semisimple(blk):
            raise PreconditionError("a diagonal block of A is not semisimple")
        total += mult * mult + centralizer_dim(blk)
        off += mult
    return total


def is_irreducible(t: MatrixTuple) -> bool:
    """Absolute irreducibility by the Burnside criterion: the unital
    algebra generated by all coefficients (including the derived residue)
    has dimension n^2."""
    validate(t)
    n = t.size
    if n == 1:
        return True
    gens = t.all_coeffs_with_residue()
    span = IncrementalSpan(n * n)

    def flat(m: Mat) -> list[Fraction]:
        return [x for row in m.data for x in row]

    work: list[Mat] = []
    for m in [Mat.identity(n)] + gens:
        if span.add(flat(m)):
            work.append(m)
    target = n * n
    while work and span.dim < target:
        x = work.pop()
        for g in gens:
            y = x * g
            if span.add(flat(y)):
                work.append(y)
                if span.dim == target:
                    break
    return span.dim == target


def _weighted_grid(dim: int, top: int):
    """All non-zero integer points of {0..top}^dim ordered by total sum,
    then lexicographically."""
    for total in range(1, dim * top + 1):
        for point in _compositions(total, dim, top):
            yield point


def _compositions(total: int, dim: int, top: int):
    if dim == 1:
        if 0 <= total <= top:
            yield (total,)
        return
    for first in range(min(total, top), -1, -1):
        for rest in _compositions(total - first, dim - 1, top):
            yield (first,) + rest


def are_similar(a: MatrixTuple, b: MatrixTuple) -> Mat | None:
    """Search for an invertible S with S A_j^(i) = B_j^(i) S for all slots.

    The intertwiner space is an exact nullspace; the invertibility search
    walks a deterministic grid of rational combinations whose density
    (degree-of-determinant + 1 values per coordinate) certifies that a
    fully zero sweep means no invertible element exists.
    """
    a = strip_trivial(a)
    b = strip_trivial(b)
    if a.size != b.size:
        raise PreconditionError("tuples have different sizes")
    skel_a = [(p.poincare_rank,) for p in [a.infinity] + list(a.finite)]
    skel_b = [(p.poincare_rank,) for p in [b.infinity] + list(b.finite)]
    if skel_a != skel_b:
        raise PreconditionError("tuples have different singularity skeletons")
    n = a.size
    if a == b:
        return Mat.identity(n)
    i_n = Mat.identity(n)
    rows = []
    for (i, j) in a.slots():
        block = kron(i_n, a.coeff(i, j).transpose()) - kron(b.coeff(i, j), i_n)
        rows.append(block)
    _, space = rref_nullspace(Mat.block([[r] for r in rows]))
    d = space.dim
    if d == 0:
        return None
    basis = [
        Mat([col[k * n:(k + 1) * n] for k in range(n)])
        for col in space.basis_columns()
    ]
    for coeffs in _weighted_grid(d, n):
        s = Mat.zeros(n, n)
        for c, m in zip(coeffs, basis):
            if c:
                s = s + m.scaled(as_scalar(c))
        if det(s) != 0:
            return s
    return None
