"""Tuple model for linear ODE systems with irregular singularities.

A system

    dY/dz = ( -sum_{j=1}^{m0} A_j^{(0)} z^{j-1}
              + sum_{i=1}^{r} sum_{j=0}^{m_i} A_j^{(i)} / (z - t_i)^{j+1} ) Y

is stored as the tuple of its coefficient matrices together with the
singularity bookkeeping (Poincare ranks m_i, locations t_i).  The residue
at infinity A_0^{(0)} = -(A_0^{(1)} + ... + A_0^{(r)}) is always derived,
never stored, which enforces the global trace condition on inputs.

Locations t_i are carried as metadata only; no operation in this package
depends on their values, just on their distinctness.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import PreconditionError, ValidationError
from .exactla import (
    Mat,
    as_scalar,
    conjugate_partition,
    hstack,
    inverse,
    is_semisimple,
    jordan_partition,
    rational_spectrum,
    rref_nullspace,
)

INFINITY = None  # location tag for the point at infinity


@dataclass(frozen=True)
class SingularPoint:
    """One singular point with its coefficient matrices.

    `coeffs` is ordered by descending pole order j: a finite point of
    Poincare rank m carries the m+1 matrices A_m, ..., A_0; the point at
    infinity carries only A_m, ..., A_1 (empty when m = 0).
    """

    location: Fraction | None
    poincare_rank: int
    coeffs: tuple[Mat, ...]

    @property
    def is_infinity(self) -> bool:
        return self.location is None

    def coeff(self, j: int) -> Mat:
        """Coefficient A_j (j = rank..0 finite, rank..1 at infinity)."""
        idx = self.poincare_rank - j
        if idx < 0 or idx >= len(self.coeffs):
            raise IndexError(f"no coefficient with pole index {j}")
        return self.coeffs[idx]


@dataclass(frozen=True)
class MatrixTuple:
    """The full tuple of coefficient matrices of one system."""

    size: int
    infinity: SingularPoint
    finite: tuple[SingularPoint, ...]

    @property
    def num_finite(self) -> int:
        return len(self.finite)

    @property
    def slot_count(self) -> int:
        """M = r + sum of all Poincare ranks; the number of stored slots."""
        return self.num_finite + self.infinity.poincare_rank + sum(
            p.poincare_rank for p in self.finite
        )

    def point(self, i: int) -> SingularPoint:
        """Point i, with i = 0 the point at infinity and 1..r the finite ones."""
        if i == 0:
            return self.infinity
        return self.finite[i - 1]

    @property
    def num_points(self) -> int:
        return 1 + self.num_finite

    def slots(self) -> list[tuple[int, int]]:
        """Slot order (0,m0),...,(0,1),(1,m1),...,(1,0),...,(r,0)."""
        out = [(0, j) for j in range(self.infinity.poincare_rank, 0, -1)]
        for i, p in enumerate(self.finite, start=1):
            out.extend((i, j) for j in range(p.poincare_rank, -1, -1))
        return out

    def coeff(self, i: int, j: int) -> Mat:
        return self.point(i).coeff(j)

    def residue_at_infinity(self) -> Mat:
        """The derived residue A_0^{(0)} = -(A_0^{(1)} + ... + A_0^{(r)})."""
        acc = Mat.zeros(self.size, self.size)
        for p in self.finite:
            acc = acc + p.coeff(0)
        return -acc

    def point_coeffs_with_residue(self, i: int) -> list[Mat]:
        """A_m, ..., A_0 of point i, including the derived residue for i=0."""
        p = self.point(i)
        out = list(p.coeffs)
        if i == 0:
            out.append(self.residue_at_infinity())
        return out

    def all_coeffs_with_residue(self) -> list[Mat]:
        out = []
        for i in range(self.num_points):
            out.extend(self.point_coeffs_with_residue(i))
        return out


def finite_point(t, poincare_rank: int, coeffs: Sequence[Mat]) -> SingularPoint:
    return SingularPoint(as_scalar(t), poincare_rank, tuple(coeffs))


def infinity_point(poincare_rank: int, coeffs: Sequence[Mat]) -> SingularPoint:
    return SingularPoint(INFINITY, poincare_rank, tuple(coeffs))


def make_tuple(size: int, infinity: SingularPoint,
               finite: Sequence[SingularPoint]) -> MatrixTuple:
    t = MatrixTuple(size, infinity, tuple(finite))
    validate(t)
    return t


def validate(t: MatrixTuple) -> None:
    """Check every structural invariant; raises ValidationError."""
    n = t.size
    if n < 1:
        raise ValidationError("matrix size must be at least 1")
    if not t.infinity.is_infinity:
        raise ValidationError("infinity slot holds a finite point")
    if t.infinity.poincare_rank < 0:
        raise ValidationError("negative Poincare rank at infinity")
    if len(t.infinity.coeffs) != t.infinity.poincare_rank:
        raise ValidationError(
            f"point 0 (infinity): expected {t.infinity.poincare_rank} "
            f"coefficients, got {len(t.infinity.coeffs)}"
        )
    seen: set[Fraction] = set()
    for i, p in enumerate(t.finite, start=1):
        if p.is_infinity:
            raise ValidationError(f"point {i}: finite slot holds infinity")
        if p.location in seen:
            raise ValidationError(f"point {i}: duplicate location t = {p.location}")
        seen.add(p.location)
        if p.poincare_rank < 0:
            raise ValidationError(f"point {i}: negative Poincare rank")
        if len(p.coeffs) != p.poincare_rank + 1:
            raise ValidationError(
                f"point {i}: expected {p.poincare_rank + 1} coefficients, "
                f"got {len(p.coeffs)}"
            )
    for i in range(t.num_points):
        for a in t.point(i).coeffs:
            if a.rows != n or a.cols != n:
                raise ValidationError(
                    f"point {i}: coefficient has shape {a.rows}x{a.cols}, "
                    f"expected {n}x{n}"
                )
    if t.slot_count < 1:
        raise ValidationError("tuple has no coefficient slots (M = 0)")


# ---------------------------------------------------------------------
# Addition, padding, stripping
# ---------------------------------------------------------------------

def addition(t: MatrixTuple, shifts: Sequence) -> MatrixTuple:
    """Shift every coefficient slot: A_j^{(i)} -> A_j^{(i)} + mu_j^{(i)} I.

    `shifts` lists one scalar per slot, in slot order; its length must be
    the tuple's slot count M.
    """
    validate(t)
    vals = [as_scalar(x) for x in shifts]
    if len(vals) != t.slot_count:
        raise ValidationError(
            f"shift vector has length {len(vals)}, expected M = {t.slot_count}"
        )
    n = t.size
    by_slot = dict(zip(t.slots(), vals))

    def shifted(point: SingularPoint, i: int) -> SingularPoint:
        new = []
        for idx, a in enumerate(point.coeffs):
            j = point.poincare_rank - idx
            c = by_slot[(i, j)]
            new.append(a + Mat.diagonal([c] * n) if c else a)
        return SingularPoint(point.location, point.poincare_rank, tuple(new))

    return MatrixTuple(
        n,
        shifted(t.infinity, 0),
        tuple(shifted(p, i) for i, p in enumerate(t.finite, start=1)),
    )


def pad_point(t: MatrixTuple, i: int) -> MatrixTuple:
    """Promote a rank-0 point to rank 1 with zero leading coefficient.

    The underlying system is unchanged; this realizes the identification
    of the regular-singular case with the rank-one case.
    """
    validate(t)
    p = t.point(i)
    if p.poincare_rank != 0:
        raise PreconditionError(f"point {i} already has Poincare rank {p.poincare_rank}")
    z = Mat.zeros(t.size, t.size)
    new = SingularPoint(p.location, 1, (z,) + p.coeffs)
    if i == 0:
        return MatrixTuple(t.size, new, t.finite)
    fin = list(t.finite)
    fin[i - 1] = new
    return MatrixTuple(t.size, t.infinity, tuple(fin))


def strip_trivial(t: MatrixTuple) -> MatrixTuple:
    """Drop zero leading coefficients (lowering ranks) and finite points
    whose coefficients are all zero.  Explicit, never done silently."""
    validate(t)

    def lowered(p: SingularPoint) -> SingularPoint:
        coeffs = list(p.coeffs)
        m = p.poincare_rank
        while m > 0 and coeffs[0].is_zero():
            coeffs.pop(0)
            m -= 1
        return SingularPoint(p.location, m, tuple(coeffs))

    inf = lowered(t.infinity)
    fin = []
    for p in t.finite:
        q = lowered(p)
        if q.poincare_rank == 0 and q.coeffs[0].is_zero():
            continue
        fin.append(q)
    out = MatrixTuple(t.size, inf, tuple(fin))
    if out.slot_count < 1:
        raise ValidationError("stripping would leave a tuple with no slots")
    return out


def removable_points(t: MatrixTuple) -> tuple[int, ...]:
    """Point indices whose stored coefficients are all scalar multiples of
    the identity; such points can be zeroed by addition and omitted."""
    validate(t)
    out = []
    if t.infinity.poincare_rank >= 1 and all(
        a.scalar_multiple_of_identity() is not None for a in t.infinity.coeffs
    ):
        out.append(0)
    for i, p in enumerate(t.finite, start=1):
        if all(a.scalar_multiple_of_identity() is not None for a in p.coeffs):
            out.append(i)
    return tuple(out)


def remove_point(t: MatrixTuple, i: int) -> tuple[MatrixTuple, list[Fraction]]:
    """Zero out a removable point by addition and strip it.

    Returns the new tuple and the shift vector that was applied (listed in
    the slot order of the input tuple).  For i = 0 the point at infinity is
    kept with rank lowered to zero.
    """
    if i not in removable_points(t):
        raise PreconditionError(f"point {i} is not removable")
    shift = []
    for (pi, pj) in t.slots():
        if pi == i:
            c = t.coeff(pi, pj).scalar_multiple_of_identity()
            shift.append(-c)
        else:
            shift.append(Fraction(0))
    return strip_trivial(addition(t, shift)), shift


def conjugated(t: MatrixTuple, p: Mat) -> MatrixTuple:
    """Simultaneous conjugation A -> P^{-1} A P of every coefficient."""
    validate(t)
    pinv = inverse(p)

    def conj_point(pt: SingularPoint) -> SingularPoint:
        return SingularPoint(
            pt.location, pt.poincare_rank,
            tuple(pinv * a * p for a in pt.coeffs),
        )

    return MatrixTuple(
        t.size, conj_point(t.infinity), tuple(conj_point(q) for q in t.finite)
    )


# ---------------------------------------------------------------------
# Spectral types
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class EigenData:
    """One eigenvalue of a compressed residue block: its algebraic
    multiplicity and Jordan block sizes (descending)."""

    value: Fraction
    multiplicity: int
    jordan: tuple[int, ...]

    @property
    def geometric(self) -> int:
        return len(self.jordan)

    @property
    def parts(self) -> tuple[int, ...]:
        """Multiplicity parts in normal-form convention: the conjugate of
        the Jordan partition (a semisimple eigenvalue of multiplicity m
        contributes the single part m)."""
        return conjugate_partition(self.jordan)


@dataclass(frozen=True)
class SpectralBlock:
    """One eigenspace of the leading coefficient, with the spectral data
    of the residue compressed to that eigenspace."""

    eigenvalue: Fraction
    size: int
    inner: tuple[EigenData, ...]

    def parts(self) -> tuple[int, ...]:
        flat = [q for e in self.inner for q in e.parts]
        return tuple(sorted(flat, reverse=True))


@dataclass(frozen=True)
class SpectralType:
    """Nested multiplicity pattern of a pair (leading coefficient, residue)
    at one singular point."""

    size: int
    blocks: tuple[SpectralBlock, ...]

    def pattern(self) -> tuple[tuple[int, tuple[int, ...]], ...]:
        """Eigenvalue-free multiplicity pattern, canonically sorted."""
        items = [(b.size, b.parts()) for b in self.blocks]
        items.sort(key=lambda x: (-x[0], tuple(-p for p in x[1])))
        return tuple(items)

    def pattern_str(self) -> str:
        return format_pattern(self.pattern())


def format_pattern(pattern: Sequence[tuple[int, tuple[int, ...]]]) -> str:
    """Render a pattern; a single outer block prints in the short
    regular-singular notation."""
    if len(pattern) == 1:
        return "(" + ",".join(str(q) for q in pattern[0][1]) + ")"
    outer = "(" + ",".join(str(nl) for nl, _ in pattern) + ")"
    inner = ",".join(
        "(" + ",".join(str(q) for q in parts) + ")" for _, parts in pattern
    )
    return f"{outer}-({inner})"


def _eigendata_of(block: Mat, where: str) -> tuple[EigenData, ...]:
    spec, full = rational_spectrum(block)
    if not full:
        raise PreconditionError(f"{where}: spectrum is not fully rational")
    data = [
        EigenData(lam, mult, jordan_partition(block, lam)) for lam, mult in spec
    ]
    data.sort(key=lambda e: (-e.geometric, -e.multiplicity, e.value))
    return tuple(data)


def spectral_type(t: MatrixTuple, i: int) -> SpectralType:
    """Multiplicity pattern of point i (0 = infinity, using the derived
    residue there).  Requires Poincare rank at most 1, a semisimple leading
    coefficient and fully rational spectra."""
    validate(t)
    p = t.point(i)
    if p.poincare_rank > 1:
        raise PreconditionError(
            f"point {i}: spectral types are defined only for Poincare rank <= 1, "
            f"got {p.poincare_rank}"
        )
    n = t.size
    pair = t.point_coeffs_with_residue(i)
    if p.poincare_rank == 1:
        a1, a0 = pair[0], pair[1]
    else:
        a1, a0 = Mat.zeros(n, n), pair[0]
    if not is_semisimple(a1):
        raise PreconditionError(f"point {i}: leading coefficient is not semisimple")
    spec, full = rational_spectrum(a1)
    if not full:
        raise PreconditionError(
            f"point {i}: leading coefficient spectrum is not fully rational"
        )
    spec = sorted(spec, key=lambda v: v[0])
    bases = []
    for d, mult in spec:
        _, ker = rref_nullspace(a1 - Mat.diagonal([d] * n))
        assert ker.dim == mult, "semisimple eigenspace must match multiplicity"
        bases.append((d, mult, ker))
    pmat = hstack([Mat.from_columns(b.basis_columns(), n) for _, _, b in bases])
    compressed = inverse(pmat) * a0 * pmat
    blocks = []
    offset = 0
    for d, mult, _ in bases:
        idx = range(offset, offset + mult)
        sub = compressed.submatrix(idx, idx)
        blocks.append(
            SpectralBlock(d, mult, _eigendata_of(sub, f"point {i}, block at {d}"))
        )
        offset += mult
    blocks.sort(
        key=lambda b: (-b.size, tuple(-q for q in b.parts()), b.eigenvalue)
    )
    return SpectralType(n, tuple(blocks))


def build_L(q: Sequence[int], lambdas: Sequence) -> Mat:
    """Normal-form block matrix with lambda_s I on the diagonal and
    rectangular identities on the superdiagonal.

    With all lambdas distinct this is conjugate to the diagonal matrix with
    multiplicities q; with all lambdas equal its Jordan partition at that
    value is the conjugate partition of q.
    """
    q = [int(x) for x in q]
    lam = [as_scalar(x) for x in lambdas]
    if len(q) != len(lam):
        raise ValidationError("q and lambdas must have the same length")
    if not q or any(x < 1 for x in q):
        raise ValidationError("q must consist of positive integers")
    if any(a < b for a, b in zip(q, q[1:])):
        raise ValidationError("q must be non-increasing")
    n = sum(q)
    offs = [0]
    for x in q:
        offs.append(offs[-1] + x)
    m = [[Fraction(0)] * n for _ in range(n)]
    for s, (sz, lv) in enumerate(zip(q, lam)):
        for a in range(sz):
            m[offs[s] + a][offs[s] + a] = lv
        if s + 1 < len(q):
            for a in range(q[s + 1]):
                m[offs[s] + a][offs[s + 1] + a] = Fraction(1)
    return Mat(m)


# ---------------------------------------------------------------------
# Named example systems
# ---------------------------------------------------------------------

def hypergeometric_example(nu, gamma, alpha, k) -> MatrixTuple:
    """Rank-two confluent-hypergeometric system: an irregular point at
    infinity with diagonal leading coefficient diag(0, -nu) and a regular
    singular point at the origin whose residue has eigenvalues 0 and
    -gamma."""
    nu, gamma, alpha, k = map(as_scalar, (nu, gamma, alpha, k))
    if k == 0:
        raise PreconditionError("k must be nonzero (it divides a matrix entry)")
    a1_inf = Mat.diagonal([0, -nu])
    a0 = Mat([[-alpha, k], [alpha * (gamma - alpha) / k, alpha - gamma]])
    return make_tuple(
        2, infinity_point(1, [a1_inf]), [finite_point(0, 0, [a0])]
    )


def bessel_example(a11, a12, a21, a22) -> MatrixTuple:
    """Rank-two system with nilpotent leading coefficient at infinity;
    solutions are Bessel-type.  Irreducible iff a21 != 0 (checked by the
    irreducibility test, not here)."""
    a1_inf = Mat([[0, -1], [0, 0]])
    a0 = Mat([[a11, a12], [a21, a22]])
    return make_tuple(
        2, infinity_point(1, [a1_inf]), [finite_point(0, 0, [a0])]
    )


def from_okubo(t_mat: Mat, a_mat: Mat) -> MatrixTuple:
    """Birkhoff-form system dV/dz = (T - (A+I)/z) V obtained from an Okubo
    normal form (zI - T) dPsi/dz = A Psi by Laplace transformation.

    T must be semisimple with fully rational spectrum; the generalized
    (non-diagonalizable T) case is not supported.
    """
    if not t_mat.is_square() or not a_mat.is_square() or t_mat.rows != a_mat.rows:
        raise ValidationError("T and A must be square of equal size")
    if not is_semisimple(t_mat):
        raise PreconditionError("T is not semisimple (generalized Okubo form is unsupported)")
    _, full = rational_spectrum(t_mat)
    if not full:
        raise PreconditionError("T does not have a fully rational spectrum")
    n = t_mat.rows
    a0 = -(a_mat + Mat.identity(n))
    return make_tuple(
        n, infinity_point(1, [-t_mat]), [finite_point(0, 0, [a0])]
    )


def inverse_laplace_example(a11, a12, a21, a22) -> MatrixTuple:
    """Stored fixture: the inverse Laplace transform of the nilpotent
    Birkhoff system, a generalized Okubo system with a rank-1 irregular
    point at the origin and no polynomial part at infinity."""
    a11, a12, a21, a22 = map(as_scalar, (a11, a12, a21, a22))
    lead = -Mat([[a21, a22 + 1], [0, 0]])
    res = -Mat([[a11 + 1, a12], [a21, a22 + 1]])
    return make_tuple(
        2, infinity_point(0, []), [finite_point(0, 1, [lead, res])]
    )
