"""Katz-style reduction: addition + middle convolution until the size
stops decreasing, with classification of the terminal patterns.

One step, on a tuple whose points all have Poincare rank one, semisimple
leading coefficients and fully rational spectra:

  * per point, pick the eigenvalue block maximizing
    (n_l^2 + sum of squared parts) / n_l and, inside it, the residue
    eigenvalue of maximal geometric multiplicity;
  * shift the picked eigenvalues to zero by addition (leading coefficient
    everywhere, residue at the finite points);
  * choose the convolution parameter among the eigenvalues of the shifted
    compressed block at infinity, maximizing dim L'(mu), ties to the
    smaller value;
  * apply middle convolution and strip points that became trivial.

For index 2 this strictly decreases the size down to one; for index 0 it
stops at one of the catalog patterns below.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .errors import AssumptionViolated, PreconditionError
from .convolution import middle_convolution, subspace_K, subspace_Lprime
from .model import (
    EigenData,
    MatrixTuple,
    SpectralBlock,
    addition,
    format_pattern,
    pad_point,
    remove_point,
    removable_points,
    spectral_type,
    strip_trivial,
    validate,
)
from .rigidity import index, is_irreducible

PointPattern = tuple[tuple[int, tuple[int, ...]], ...]


@dataclass(frozen=True)
class PivotChoice:
    """Chosen eigenvalue block and inner eigenvalue for one point."""

    point: int
    block: SpectralBlock
    inner: EigenData

    @property
    def kernel_target(self) -> int:
        """n_l + n_{l,1}: the kernel dimension the shifts aim for."""
        return self.block.size + self.inner.geometric


@dataclass(frozen=True)
class ReductionStep:
    """One addition + convolution step; `shift` is listed in the slot
    order of the rank-padded tuple the step operated on."""

    pivots: tuple[PivotChoice, ...]
    shift: tuple[Fraction, ...]
    mu: Fraction
    size_before: int
    size_after: int
    removed_points: tuple[int, ...] = ()


@dataclass(frozen=True)
class ReducedToRankOne:
    pass


@dataclass(frozen=True)
class Terminal:
    label: str
    pattern: "TerminalPattern"


@dataclass(frozen=True)
class AssumptionViolation:
    reason: str


Verdict = ReducedToRankOne | Terminal | AssumptionViolation


@dataclass(frozen=True)
class ReductionTrace:
    steps: tuple[ReductionStep, ...]
    terminal: MatrixTuple
    verdict: Verdict


# ---------------------------------------------------------------------
# Pivot choice and one reduction step
# ---------------------------------------------------------------------

def _spectral_types_for_reduction(t: MatrixTuple):
    types = []
    for i in range(t.num_points):
        try:
            types.append(spectral_type(t, i))
        except PreconditionError as e:
            raise AssumptionViolated(str(e)) from e
    return types


def choose_pivot(t: MatrixTuple) -> list[PivotChoice]:
    """Per-point pivot blocks for one reduction step.

    Requires every point padded to Poincare rank one.  The chosen block
    maximizes (n_l^2 + sum_j n_{l,j}^2)/n_l; ties go to the larger
    n_l + n_{l,1}, then to the earlier block in canonical order.
    """
    validate(t)
    for i in range(t.num_points):
        if t.point(i).poincare_rank != 1:
            raise AssumptionViolated(
                f"point {i}: Poincare rank must be 1 (pad rank-0 points first)"
            )
    choices = []
    for i, st in enumerate(_spectral_types_for_reduction(t)):
        best = None
        for bi, block in enumerate(st.blocks):
            parts = block.parts()
            ratio = Fraction(block.size ** 2 + sum(q * q for q in parts), block.size)
            inner = block.inner[0]  # max geometric multiplicity, then smaller value
            key = (ratio, block.size + inner.geometric, -bi)
            if best is None or key > best[0]:
                best = (key, PivotChoice(i, block, inner))
        choices.append(best[1])
    return choices


def _reduction_shift(t: MatrixTuple, pivots: list[PivotChoice]) -> list[Fraction]:
    """Shift the chosen leading eigenvalue to 0 at every point and the
    chosen residue eigenvalue to 0 at the finite points (the infinity
    residue has no slot; the convolution parameter absorbs it)."""
    shift = []
    for (i, j) in t.slots():
        pv = pivots[i]
        if j == 1:
            shift.append(-pv.block.eigenvalue)
        elif j == 0 and i != 0:
            shift.append(-pv.inner.value)
        else:
            shift.append(Fraction(0))
    return shift


def _choose_mu(shifted: MatrixTuple) -> Fraction:
    """Scan the eigenvalues of the compressed block at infinity belonging
    to the (now zero) pivot eigenvalue and maximize dim L'(mu); ties break
    to the smaller value."""
    st0 = spectral_type(shifted, 0)
    zero_block = next(
        (b for b in st0.blocks if b.eigenvalue == 0), None
    )
    if zero_block is None:
        raise AssumptionViolated(
            "shifted leading coefficient at infinity has no zero eigenvalue"
        )
    best = None
    for cand in sorted(e.value for e in zero_block.inner):
        d = subspace_Lprime(shifted, cand).dim
        if best is None or d > best[0]:
            best = (d, cand)
    return best[1]


def reduce_step(t: MatrixTuple) -> tuple[MatrixTuple | None, ReductionStep]:
    """One addition + middle convolution step.

    Returns (next_tuple, step); next_tuple is None when no step can
    decrease the size (the input is terminal).  Raises AssumptionViolated
    outside the algorithm's hypotheses, including the forced mu = 0 case,
    which contradicts irreducibility whenever the size would drop.
    """
    validate(t)
    padded = t
    for i in range(t.num_points):
        if padded.point(i).poincare_rank == 0:
            padded = pad_point(padded, i)
    if not is_irreducible(padded):
        raise AssumptionViolated("module is reducible")
    pivots = choose_pivot(padded)
    shift = _reduction_shift(padded, pivots)
    shifted = addition(padded, shift)
    mu = _choose_mu(shifted)
    n = padded.size
    nm = n * padded.slot_count
    _, big_k = subspace_K(shifted)
    new_size = nm - big_k.dim - subspace_Lprime(shifted, mu).dim
    step = ReductionStep(
        pivots=tuple(pivots),
        shift=tuple(shift),
        mu=mu,
        size_before=n,
        size_after=new_size,
    )
    if new_size >= n:
        return None, step
    if mu == 0:
        raise AssumptionViolated(
            "convolution parameter would be 0 while the size decreases; "
            "this contradicts irreducibility"
        )
    outcome = middle_convolution(shifted, mu)
    assert outcome.result.size == new_size
    out = strip_trivial(outcome.result)
    removed = []
    if out.size > 1:
        while True:
            rp = [i for i in removable_points(out) if i != 0]
            if not rp:
                break
            i = rp[0]
            lost = out.point(i).poincare_rank + 1
            if out.slot_count - lost < 1:
                break
            out, _ = remove_point(out, i)
            removed.append(i)
        if (0 in removable_points(out)
                and out.slot_count - out.infinity.poincare_rank >= 1):
            out, _ = remove_point(out, 0)
            removed.append(0)
    if removed:
        step = ReductionStep(
            pivots=step.pivots, shift=step.shift, mu=step.mu,
            size_before=step.size_before, size_after=step.size_after,
            removed_points=tuple(removed),
        )
    return out, step


def reduce(t: MatrixTuple) -> ReductionTrace:
    """Iterate reduce_step until rank one, a terminal pattern, or an
    assumption failure; sizes strictly decrease along the trace."""
    validate(t)
    steps: list[ReductionStep] = []
    cur = t
    while True:
        if cur.size == 1:
            return ReductionTrace(tuple(steps), cur, ReducedToRankOne())
        try:
            nxt, step = reduce_step(cur)
        except AssumptionViolated as e:
            return ReductionTrace(tuple(steps), cur, AssumptionViolation(str(e)))
        if nxt is None:
            try:
                pattern = terminal_pattern(cur)
                name = classify_terminal(pattern)
                label = (
                    f"{name}, d={pattern.d}" if name is not None else "uncataloged"
                )
            except (PreconditionError, AssumptionViolated) as e:
                return ReductionTrace(
                    tuple(steps), cur, AssumptionViolation(str(e))
                )
            return ReductionTrace(tuple(steps), cur, Terminal(label, pattern))
        assert nxt.size < cur.size, "reduction step must strictly decrease size"
        steps.append(step)
        cur = nxt


def probe_index_conjecture(t: MatrixTuple, mu) -> dict:
    """Empirical probe: is the rigidity index preserved by one middle
    convolution on this input?  Intended for inputs outside the proven
    hypotheses; a mismatch is reported as a finding, never raised."""
    before = index(t)
    outcome = middle_convolution(t, mu)
    after = index(outcome.result)
    return {
        "mu": mu,
        "size_before": t.size,
        "size_after": outcome.result.size,
        "idx_before": before.index,
        "idx_after": after.index,
        "preserved": before.index == after.index,
    }


# ---------------------------------------------------------------------
# Terminal patterns: normalization, catalog, classification
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class TerminalPattern:
    """Point-permutation-normalized multiplicity pattern with the common
    divisor d extracted; `points` is the base (d = 1) pattern.

    The enumerator and classifier reason about patterns only; whether a
    pattern is realized by an irreducible system is not decided here.
    """

    points: tuple[PointPattern, ...]
    d: int
    realizability: str = field(default="unknown")

    def pattern_str(self) -> str:
        return "{" + ", ".join(format_pattern(p) for p in self.points) + "}"


def make_terminal_pattern(point_patterns: list[PointPattern]) -> TerminalPattern:
    """Normalize: sort points, extract the gcd of all multiplicities."""
    d = 0
    for pat in point_patterns:
        for _, parts in pat:
            for q in parts:
                d = gcd(d, q)
    if d == 0:
        raise PreconditionError("empty pattern")
    base = []
    for pat in point_patterns:
        base.append(
            tuple(
                (nl // d, tuple(q // d for q in parts)) for nl, parts in pat
            )
        )
    return TerminalPattern(tuple(sorted(base, reverse=True)), d)


def terminal_pattern(t: MatrixTuple) -> TerminalPattern:
    """Pattern of a tuple all of whose points have rank <= 1."""
    validate(t)
    pats = [spectral_type(t, i).pattern() for i in range(t.num_points)]
    return make_terminal_pattern(pats)


def _reg(*parts: int) -> PointPattern:
    return ((sum(parts), tuple(parts)),)


def _irr(*blocks: tuple[int, tuple[int, ...]]) -> PointPattern:
    return tuple(blocks)


_CATALOG_RAW: list[tuple[str, list[PointPattern]]] = [
    ("four singularities {(d,d), (d,d), (d,d), (d,d)}",
     [_reg(1, 1)] * 4),
    ("three singularities {(d,d,d), (d,d,d), (d,d,d)}",
     [_reg(1, 1, 1)] * 3),
    ("three singularities {(2d,2d), (d,d,d,d), (d,d,d,d)}",
     [_reg(2, 2), _reg(1, 1, 1, 1), _reg(1, 1, 1, 1)]),
    ("three singularities {(3d,3d), (2d,2d,2d), (d,d,d,d,d,d)}",
     [_reg(3, 3), _reg(2, 2, 2), _reg(1, 1, 1, 1, 1, 1)]),
    ("three singularities {(d,d)-((d),(d)), (d,d), (d,d)}",
     [_irr((1, (1,)), (1, (1,))), _reg(1, 1), _reg(1, 1)]),
    ("two singularities {(d,d)-((d),(d)), (d,d)-((d),(d))}",
     [_irr((1, (1,)), (1, (1,)))] * 2),
    ("two singularities {(d,d,d)-((d),(d),(d)), (d,d,d)}",
     [_irr((1, (1,)), (1, (1,)), (1, (1,))), _reg(1, 1, 1)]),
    ("two singularities {(d,d,d,d)-((d),(d),(d),(d)), (2d,2d)}",
     [_irr((1, (1,)), (1, (1,)), (1, (1,)), (1, (1,))), _reg(2, 2)]),
    ("two singularities {(2d,2d)-((d,d),(d,d)), (d,d,d,d)}",
     [_irr((2, (1, 1)), (2, (1, 1))), _reg(1, 1, 1, 1)]),
    ("two singularities {(3d,2d)-((d,d,d),(2d)), (d,d,d,d,d)}",
     [_irr((3, (1, 1, 1)), (2, (2,))), _reg(1, 1, 1, 1, 1)]),
    ("two singularities {(2d,2d,2d)-((d,d),(d,d),(d,d)), (3d,3d)}",
     [_irr((2, (1, 1)), (2, (1, 1)), (2, (1, 1))), _reg(3, 3)]),
    ("two singularities {(3d,3d,2d)-((d,d,d),(d,d,d),(2d)), (4d,4d)}",
     [_irr((3, (1, 1, 1)), (3, (1, 1, 1)), (2, (2,))), _reg(4, 4)]),
    ("two singularities {(5d,4d,3d)-((d,d,d,d,d),(2d,2d),(3d)), (6d,6d)}",
     [_irr((5, (1, 1, 1, 1, 1)), (4, (2, 2)), (3, (3,))), _reg(6, 6)]),
    ("two singularities {(5d,4d)-((d,d,d,d,d),(2d,2d)), (3d,3d,3d)}",
     [_irr((5, (1, 1, 1, 1, 1)), (4, (2, 2))), _reg(3, 3, 3)]),
    ("two singularities {(3d,3d)-((d,d,d),(d,d,d)), (2d,2d,2d)}",
     [_irr((3, (1, 1, 1)), (3, (1, 1, 1))), _reg(2, 2, 2)]),
    ("two singularities {(5d,3d)-((d,d,d,d,d),(3d)), (2d,2d,2d,2d)}",
     [_irr((5, (1, 1, 1, 1, 1)), (3, (3,))), _reg(2, 2, 2, 2)]),
    ("two singularities {(4d,3d)-((2d,2d),(3d)), (d,d,d,d,d,d,d)}",
     [_irr((4, (2, 2)), (3, (3,))), _reg(1, 1, 1, 1, 1, 1, 1)]),
]

CATALOG: dict[tuple[PointPattern, ...], str] = {
    tuple(sorted(pats, reverse=True)): name for name, pats in _CATALOG_RAW
}
assert len(CATALOG) == 17


def classify_terminal(p: TerminalPattern) -> str | None:
    """Catalog name of the normalized pattern, or None if uncataloged.
    Invariant under point permutation and under scaling by d."""
    return CATALOG.get(tuple(sorted(p.points, reverse=True)))


# ---------------------------------------------------------------------
# Independent enumerator of terminal patterns
# ---------------------------------------------------------------------

def _point_patterns_by_c(n: int) -> dict[PointPattern, int]:
    """All size-n point patterns that can occur at a terminal tuple,
    keyed to their common block value c = n_l + n_{l,1}.

    At a terminal point every block has uniform inner parts n_l / p_l and
    the value n_l + n_{l,1} is the same for every block; a block of size
    n_l then has inner part c - n_l, which must divide n_l.  The all-scalar
    pattern (c = 2n) is excluded because such a point is removable.
    """
    out: dict[PointPattern, int] = {}
    for c in range(2, 2 * n):
        lo = (c + 1) // 2  # smallest block size with c - n_l <= n_l
        valid_sizes = [
            s for s in range(lo, min(c - 1, n) + 1) if s % (c - s) == 0
        ]

        def rec(remaining: int, max_size: int, acc: list[int]):
            if remaining == 0:
                blocks = tuple(
                    (s, (c - s,) * (s // (c - s))) for s in acc
                )
                key = lambda b: (-b[0], tuple(-q for q in b[1]))
                out[tuple(sorted(blocks, key=key))] = c
                return
            for s in valid_sizes:
                if s <= max_size and s <= remaining:
                    rec(remaining - s, s, acc + [s])

        rec(n, n, [])
    return out


def enumerate_terminals(r: int, n_max: int) -> list[TerminalPattern]:
    """All terminal multiplicity patterns with r finite points (r+1
    singularities) and size at most n_max: index 0, the terminal sum
    condition sum_i (n_l + n_{l,1}) = 2 r n, uniform inner multiplicities,
    and no removable point.  Deduplicated by normalization."""
    if r < 1:
        raise PreconditionError("need at least one finite singular point (r >= 1)")
    if not 1 <= n_max <= 12:
        raise PreconditionError("n_max must be between 1 and 12")
    found: set[TerminalPattern] = set()
    for n in range(1, n_max + 1):
        cands = sorted(_point_patterns_by_c(n).items())
        target = 2 * r * n

        def rec(points_left: int, start: int, total_c: int, acc: list[PointPattern]):
            if points_left == 0:
                if total_c == target:
                    tp = make_terminal_pattern(list(acc))
                    weight = sum(
                        nl * nl + sum(q * q for q in parts)
                        for pat in acc for nl, parts in pat
                    )
                    assert weight - 2 * r * n * n == 0
                    found.add(tp)
                return
            if total_c + 2 * points_left > target:
                return
            if total_c + (2 * n - 1) * points_left < target:
                return
            for k in range(start, len(cands)):
                pat, c = cands[k]
                rec(points_left - 1, k, total_c + c, acc + [pat])

        rec(r + 1, 0, 0, [])
    return sorted(
        found,
        key=lambda tp: (tp.d * sum(nl for nl, _ in tp.points[0]), tp.d, tp.points),
    )
