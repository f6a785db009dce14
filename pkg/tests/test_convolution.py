"""Convolution matrices, kernel subspaces, middle convolution."""

from fractions import Fraction as F

import pytest

from midconv.errors import PreconditionError
from midconv.exactla import Mat, rref_nullspace
from midconv.convolution import (
    check_invariance,
    convolution_matrices,
    middle_convolution,
    predicted_size,
    subspace_K,
    subspace_L,
    subspace_Lprime,
)
from midconv.model import (
    addition,
    bessel_example,
    finite_point,
    hypergeometric_example,
    infinity_point,
    make_tuple,
    pad_point,
    strip_trivial,
)
from midconv.rigidity import are_similar, is_irreducible
import support

HYP = hypergeometric_example(1, F(1, 2), F(1, 3), 1)
NU, GAMMA, ALPHA, K = F(1), F(1, 2), F(1, 3), F(1)


# ---------------------------------------------------------------------
# convolution_matrices
# ---------------------------------------------------------------------

def test_conv_matrices_hypergeometric_blocks():
    mu = F(1, 3)
    conv = convolution_matrices(HYP, mu)
    a1, a0 = HYP.infinity.coeffs[0], HYP.finite[0].coeffs[0]
    z = Mat.zeros(2, 2)
    eye = Mat.identity(2)
    assert conv.base.coeff(0, 1) == Mat.block([[a1, a0], [z, z]])
    assert conv.base.coeff(1, 0) == Mat.block([[z, z], [a1, a0 + mu * eye]])
    assert conv.block_index == ((0, 1), (1, 0))


def test_conv_matrices_single_slot():
    t = make_tuple(1, infinity_point(0, []), [finite_point(0, 0, [Mat([[5]])])])
    conv = convolution_matrices(t, F(2))
    assert conv.base.size == 1
    assert conv.base.coeff(1, 0) == Mat([[7]])  # A + mu


def test_conv_matrices_vs_definition_oracle():
    rng = support.rng(55)
    for _ in range(6):
        t = support.rand_tuple(rng, 2, 2, [1, 1, 0])
        mu = support.rand_fraction(rng)
        conv = convolution_matrices(t, mu)
        oracle = support.convolution_oracle(t, mu)
        for (i, j) in t.slots():
            assert conv.base.coeff(i, j) == oracle[(i, j)], (i, j)


def test_conv_matrices_mu_band():
    # rank-2 point at infinity: band of mu blocks above the dense row
    rng = support.rng(56)
    t = support.rand_tuple(rng, 2, 1, [2, 0])
    mu = F(5, 7)
    conv = convolution_matrices(t, mu)
    oracle = support.convolution_oracle(t, mu)
    for (i, j) in t.slots():
        assert conv.base.coeff(i, j) == oracle[(i, j)]


# ---------------------------------------------------------------------
# subspaces
# ---------------------------------------------------------------------

def test_K_hypergeometric():
    per, big = subspace_K(HYP)
    assert [s.dim for s in per] == [0, 1]
    assert big.dim == 1
    # spanned by (0, 0, k, alpha): canonical form scales the pivot to 1
    assert big.contains_vector([0, 0, K, ALPHA])


def test_K_trivial_when_leading_invertible():
    t = make_tuple(
        2, infinity_point(1, [Mat.diagonal([1, 2])]),
        [finite_point(0, 1, [Mat.diagonal([3, 1]), support.rand_matrix(support.rng(1), 2)]),
         finite_point(1, 0, [Mat.diagonal([2, 5])])],
    )
    _, big = subspace_K(t)
    assert big.dim == 0


def test_K_padded_point_formula():
    # rank-0 point padded: dim K = n + dim ker A_0, against a direct
    # nullspace of the 2n x 2n block matrix
    rng = support.rng(77)
    for _ in range(5):
        a0 = support.rand_matrix(rng, 3)
        t = make_tuple(
            3, infinity_point(1, [Mat.diagonal([1, 2, 3])]),
            [finite_point(0, 0, [a0])],
        )
        tp = pad_point(t, 1)
        per, _ = subspace_K(tp)
        _, ker_a0 = rref_nullspace(a0)
        assert per[1].dim == 3 + ker_a0.dim
        z = Mat.zeros(3, 3)
        direct = Mat.block([[z, a0], [z, z]])
        r, _ = rref_nullspace(direct)
        assert per[1].dim == 6 - r


def test_Lprime_hypergeometric_at_alpha():
    lp = subspace_Lprime(HYP, ALPHA)
    assert lp.dim == 2
    assert lp.contains_vector([1, 0, 0, 0])
    assert lp.contains_vector([0, ALPHA * (GAMMA - ALPHA), K * NU, 0])


def test_Lprime_hypergeometric_generic_mu():
    for mu in (F(1), F(-2, 5), F(7, 3)):
        assert subspace_Lprime(HYP, mu).dim == 1


def test_Lprime_bessel_bounded():
    b = bessel_example(1, 0, 1, 1)
    rng = support.rng(5)
    for _ in range(20):
        shift = [support.rand_fraction(rng), support.rand_fraction(rng)]
        mu = support.rand_fraction(rng)
        assert subspace_Lprime(addition(b, shift), mu).dim <= 1


def test_L_equals_Lprime_for_nonzero_mu():
    for mu in (F(1, 3), F(-1), F(2, 7)):
        assert subspace_L(HYP, mu) == subspace_Lprime(HYP, mu)


def test_L_at_zero_rank_formula():
    row = Mat.block([[HYP.infinity.coeffs[0], HYP.finite[0].coeffs[0]]])
    r, _ = rref_nullspace(row)
    assert subspace_L(HYP, 0).dim == 4 - r
    assert subspace_L(HYP, 0).dim == 2


def test_K_plus_Lprime0_inside_L0():
    rng = support.rng(6)
    for _ in range(10):
        t = support.rand_tuple(rng, 2, 1, [rng.choice([0, 1]), rng.choice([0, 1])])
        _, big_k = subspace_K(t)
        l0 = subspace_L(t, 0)
        assert l0.contains(big_k.sum(subspace_Lprime(t, 0)))


# ---------------------------------------------------------------------
# middle_convolution
# ---------------------------------------------------------------------

def test_mc_hypergeometric_rank_one_output():
    out = middle_convolution(HYP, ALPHA)
    assert out.result.size == 1
    assert out.result.infinity.coeffs[0] == Mat([[-NU]])
    assert out.result.finite[0].coeffs[0] == Mat([[ALPHA - GAMMA]])
    assert out.dim_K == (0, 1)
    assert out.dim_L == 2
    assert out.projection * out.section == Mat.identity(1)


def test_mc_zero_parameter_is_identity_up_to_similarity():
    out = middle_convolution(HYP, 0)
    assert out.result.size == 2
    assert are_similar(HYP, out.result) is not None


def test_mc_rank_one_seed_recovers_explicit_matrices():
    seed = make_tuple(
        1, infinity_point(1, [Mat([[-NU]])]),
        [finite_point(0, 0, [Mat([[ALPHA - GAMMA]])])],
    )
    out = middle_convolution(seed, -ALPHA)
    assert out.result.size == 2
    assert out.result.infinity.coeffs[0] == Mat([[-NU, ALPHA - GAMMA], [0, 0]])
    assert out.result.finite[0].coeffs[0] == Mat([[0, 0], [-NU, -GAMMA]])


def test_mc_degenerate_quotient_raises():
    z = Mat.zeros(2, 2)
    t = make_tuple(2, infinity_point(0, []), [finite_point(0, 0, [z])])
    with pytest.raises(PreconditionError, match="zero-dimensional"):
        middle_convolution(t, 0)


def test_predicted_size_matches_mc():
    rng = support.rng(8)
    for _ in range(10):
        t = support.rand_tuple(rng, 2, 1, [rng.choice([0, 1, 2]), rng.choice([0, 1])])
        mu = F(rng.choice([1, -1, 2]), rng.choice([1, 2, 3]))
        try:
            out = middle_convolution(t, mu)
        except PreconditionError:
            continue
        assert out.result.size == predicted_size(t, mu)


def test_predicted_size_hypergeometric():
    assert predicted_size(HYP, ALPHA) == 4 - 1 - 2 == 1


def test_predicted_size_padded_formula():
    tp = pad_point(HYP, 1)
    # (2r+1) n - sum(n_l + n_{l,1}) = 6 - (2 + 3) = 1
    assert predicted_size(tp, ALPHA) == 1
    assert predicted_size(tp, ALPHA) == predicted_size(HYP, ALPHA)


def test_predicted_size_full_when_subspaces_trivial():
    t = make_tuple(
        2, infinity_point(1, [Mat.diagonal([1, 2])]),
        [finite_point(0, 0, [Mat.diagonal([3, 4])])],
    )
    # leading coefficient invertible: L' trivial; residue invertible: K trivial
    assert predicted_size(t, F(7)) == 4


def test_padding_equivalence_strip_and_similarity():
    out_padded = middle_convolution(pad_point(HYP, 1), ALPHA)
    out_plain = middle_convolution(HYP, ALPHA)
    assert out_padded.result.size == out_plain.result.size
    stripped = strip_trivial(out_padded.result)
    assert are_similar(stripped, out_plain.result) is not None


def test_complement_independence():
    rng = support.rng(21)
    for _ in range(5):
        t = support.rand_tuple(rng, 2, 1, [1, 0])
        if not is_irreducible(t):
            continue
        mu = F(rng.choice([1, -1]), rng.choice([1, 2]))
        left = middle_convolution(t, mu, pivot_side="left").result
        right = middle_convolution(t, mu, pivot_side="right").result
        assert are_similar(left, right) is not None


def test_involution_on_hypergeometric():
    fwd = middle_convolution(HYP, ALPHA)
    back = middle_convolution(fwd.result, -ALPHA)
    s = are_similar(HYP, back.result)
    assert s is not None
    # the classical intertwiner [[alpha-gamma, -k], [nu, 0]] works too
    w = Mat([[ALPHA - GAMMA, -K], [NU, 0]])
    for (i, j) in HYP.slots():
        assert w * HYP.coeff(i, j) == back.result.coeff(i, j) * w


# ---------------------------------------------------------------------
# check_invariance
# ---------------------------------------------------------------------

def test_invariance_hypergeometric():
    assert check_invariance(HYP, ALPHA).all_pass


def test_invariance_random():
    rng = support.rng(9)
    for _ in range(8):
        t = support.rand_tuple(
            rng, rng.choice([2, 3]), rng.choice([1, 2]),
            [rng.choice([0, 1, 2])] + [rng.choice([0, 1]) for _ in range(2)],
        )
        t = make_tuple(t.size, t.infinity, t.finite[: rng.choice([1, 2])])
        mu = support.rand_fraction(rng)
        assert check_invariance(t, mu).all_pass


def test_invariance_vacuous_when_trivial():
    t = make_tuple(
        2, infinity_point(1, [Mat.diagonal([1, 2])]),
        [finite_point(0, 0, [Mat.diagonal([3, 4])])],
    )
    rep = check_invariance(t, F(7))
    assert rep.all_pass


def test_mc_outcome_projection_contract():
    # result coefficients literally equal projection * conv_matrix * section
    mu = F(1, 3)
    out = middle_convolution(HYP, mu)
    conv = convolution_matrices(HYP, mu)
    for (i, j) in HYP.slots():
        assert out.result.coeff(i, j) == out.projection * conv.base.coeff(i, j) * out.section
    assert out.projection * out.section == Mat.identity(out.result.size)


def test_mc_rejects_bad_pivot_side():
    with pytest.raises(ValueError):
        middle_convolution(HYP, F(1, 3), pivot_side="top")


def test_mc_on_okubo_style_tuple_without_infinity_part():
    # no polynomial part at infinity (m0 = 0), rank-1 finite point
    from midconv.model import inverse_laplace_example

    t = inverse_laplace_example(1, 0, 1, 1)
    mu = F(1, 2)
    assert check_invariance(t, mu).all_pass
    out = middle_convolution(t, mu)
    assert out.result.size == predicted_size(t, mu)


def test_involution_and_index_heavyweight():
    # n = 4, two finite points, every slot rank 1: the convolution grows the
    # size past nM/2 and the inverse convolution works on a ~80-dim ambient
    from midconv.model import SingularPoint, make_tuple as mk
    from midconv.rigidity import index

    rng = support.rng(777)
    while True:
        inf = SingularPoint(None, 1,
                            (support.semisimple_rational(rng, 4, (0, 1, 2, -1)),))
        fins = [
            SingularPoint(F(i), 1,
                          (support.semisimple_rational(rng, 4, (0, 1, -1)),
                           support.rand_matrix(rng, 4)))
            for i in range(2)
        ]
        t = mk(4, inf, fins)
        if is_irreducible(t):
            break
    mu = F(1, 2)
    idx0 = index(t).index
    fwd = middle_convolution(t, mu)
    assert fwd.result.size > t.size
    assert index(fwd.result).index == idx0
    back = middle_convolution(fwd.result, -mu)
    assert back.result.size == t.size
    assert are_similar(t, back.result) is not None
