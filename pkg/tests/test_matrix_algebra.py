# This code is part of dpsplit
#
# (C) Copyright dpsplit contributors 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.
import pytest
from sympy.polys.domains import QQ

from dpsplit.algebra import scalars
from dpsplit.algebra.apolarity import ann_graded, generator_counts
from dpsplit.algebra.forms import gradient
from dpsplit.algebra.matrix_algebra import (
    ann_linear_multiples_perp,
    block_truncation,
    choose_support_idempotent,
    combine,
    compute_mf,
    expected_mf_dimension,
    fg_modules,
    gamma_f,
    gamma_image,
    gamma_kernel,
    gf_algebra,
    graded_gamma_dimensions,
    graded_mf,
    expected_graded_gamma_dimensions,
    in_mf,
    mf_restricted,
    mfd,
    star,
)
from dpsplit.generators import jordan_block
from tests.conftest import EXAMPLE_NAMES, EXAMPLES, SEED
from tests.utils.corpus import form, random_corpus, same_span
from tests.utils.records import get_form, get_record

_SWAP = scalars.matrix([[0, 1], [1, 0]], QQ)
CORPUS = random_corpus(SEED, 120, 4, 6, [QQ, scalars.prime_field(7)])
SMALL_CORPUS = [f for f in CORPUS if f.num_vars <= 3]


def _flat(ms):
    return [scalars.flatten(m) for m in ms]


@pytest.mark.parametrize("name", EXAMPLE_NAMES)
def test_mf_dimension(name):
    """dim M_f of every worked example, and its agreement with 1 + beta_1d + r beta_11"""
    f = get_form(EXAMPLES, name)
    mf = compute_mf(f)
    assert mf.dimension == get_record(EXAMPLES, name)["mf_dimension"]
    assert mf.dimension == expected_mf_dimension(f)
    assert all(in_mf(f, b) for b in mf.basis)


def test_mf_of_binary_cubic():
    """M_f = <I, A> with A swapping the variables"""
    f = form("x1^(3) + x1 x2^(2)", 2)
    mf = compute_mf(f)
    assert same_span(_flat(mf.basis), _flat([scalars.identity(2, QQ), _SWAP]))
    assert mf.closed_under_mult and mf.commutative


def test_mf_of_square_zero_tail():
    """M_f = <I, A, A^2> for the Jordan block A"""
    f = form("x1^(3) x3 + x1^(2) x2^(2)", 3)
    a = jordan_block(3)
    expected = [scalars.identity(3, QQ), a, a * a]
    assert same_span(_flat(compute_mf(f).basis), _flat(expected))


def test_mf_of_single_power():
    """for x1^[3] in two variables M_f is the upper triangular matrices"""
    mf = compute_mf(form("x1^(3)", 2))
    assert mf.dimension == 3
    assert all(scalars.entry(b, 1, 0) == QQ.zero for b in mf.basis)


def test_gamma_of_swap():
    """gamma_f(A) = x1^(2) x2 + x2^(3) and gamma_f(I) = f"""
    f = form("x1^(3) + x1 x2^(2)", 2)
    assert gamma_f(f, _SWAP) == form("x1^(2) x2 + x2^(3)", 2)
    assert gamma_f(f, scalars.identity(2, QQ)) == f


def test_gamma_of_jordan_block():
    """gamma_f(A) = x1^(d-1) x2 for the square zero tail"""
    f = form("x1^(3) x3 + x1^(2) x2^(2)", 3)
    assert gamma_f(f, jordan_block(3)) == form("x1^(3) x2", 3)


def test_gamma_outside_mf():
    """matrices outside M_f are rejected"""
    f = form("x1^(3) + x1 x2^(2)", 2)
    with pytest.raises(ValueError):
        gamma_f(f, scalars.matrix([[1, 0], [0, 0]], QQ))


def test_gamma_is_gradient_map():
    """∂ gamma_f(A) = A ∂f"""
    f = form("x1 x2^(2) + x2 x3^(2) + x3^(3)", 3)
    for b in compute_mf(f).basis:
        assert gradient(gamma_f(f, b)) == combine(b, gradient(f))


def test_gamma_kernel_dimension():
    """ker gamma_f has dimension r beta_11"""
    assert gamma_kernel(form("x1^(3)", 2)).dimension == 2
    assert gamma_kernel(form("x1^(3) + x1 x2^(2)", 2)).dimension == 0


@pytest.mark.parametrize("name", ["binary_cubic", "worked_ternary_cubic", "square_zero_tail"])
def test_gamma_image_is_perp(name):
    """im gamma_f = (R_1 ann(f)_{d-1})^⊥"""
    f = get_form(EXAMPLES, name)
    assert same_span(gamma_image(f), ann_linear_multiples_perp(f))


def test_support_idempotent_of_single_power():
    """x1^[d] in two variables gives diag(1, 0)"""
    e = choose_support_idempotent(form("x1^(4)", 2))
    assert scalars.entries(e) == scalars.entries(scalars.matrix([[1, 0], [0, 0]], QQ))


def test_support_idempotent_of_linear_power():
    """(x1 + x2)^[d] gives a rank one idempotent fixing (1, 1)"""
    f = form("x1^(3) + x1^(2) x2 + x1 x2^(2) + x2^(3)", 2)
    e = choose_support_idempotent(f)
    assert scalars.is_idempotent(e)
    assert scalars.rank(e) == 1
    assert scalars.mat_vec(e, [QQ.one, QQ.one]) == [QQ.one, QQ.one]


def test_support_idempotent_without_linear_annihilator():
    """ann(f)_1 = 0 gives the identity"""
    e = choose_support_idempotent(form("x1^(3) + x1 x2^(2)", 2))
    assert scalars.entries(e) == scalars.entries(scalars.identity(2, QQ))


def test_mf_restricted_to_support():
    """x1^[3] in two variables restricted to diag(1, 0) is one dimensional"""
    f = form("x1^(3)", 2)
    e = choose_support_idempotent(f)
    restricted = mf_restricted(f, e)
    assert restricted.dimension == 1
    assert same_span(_flat(restricted.basis), _flat([e]))


def test_mf_restricted_with_identity_is_mf():
    """with ann(f)_1 = 0 the restriction changes nothing"""
    f = form("x1 x2^(2) + x2 x3^(2) + x3^(3)", 3)
    restricted = mf_restricted(f, scalars.identity(3, QQ))
    assert same_span(_flat(restricted.basis), _flat(compute_mf(f).basis))


def test_mf_restricted_rejects_non_idempotent():
    f = form("x1^(3) + x1 x2^(2)", 2)
    with pytest.raises(ValueError):
        mf_restricted(f, _SWAP)


def test_gf_algebra_has_f_as_unit():
    """G_f is a commutative algebra whose unit is f"""
    f = form("x1^(3) + x1 x2^(2)", 2)
    alg, forms = gf_algebra(f)
    assert alg.dim == 2
    assert alg.is_commutative() and alg.has_identity()
    unit = [QQ.zero] * len(forms[0].to_vector())
    for c, g in zip(alg.identity, forms):
        unit = [u + c * v for u, v in zip(unit, g.to_vector())]
    assert unit == f.to_vector()


@pytest.mark.parametrize("name", ["binary_cubic", "worked_ternary_cubic", "binary_limit"])
def test_graded_mf_degree_zero_is_mf(name):
    """M^f_0 = M_f"""
    f = get_form(EXAMPLES, name)
    assert graded_mf(f, 0).dimension == compute_mf(f).dimension


@pytest.mark.parametrize("name", ["binary_cubic", "worked_ternary_cubic", "square_zero_tail"])
def test_graded_gamma_dimensions_in_degree_zero(name):
    """image and kernel of gamma^f_0 match the generator count formula"""
    f = get_form(EXAMPLES, name)
    assert graded_gamma_dimensions(f, 0) == expected_graded_gamma_dimensions(f, 0)


def test_graded_mf_caps():
    """graded spaces beyond the caps are refused"""
    f = form("x1^(5) + x2^(5)", 2)
    with pytest.raises(ValueError):
        graded_mf(f, 3)


def test_mfd_degree_one_is_mf():
    """M_{f,∂} = M_f"""
    f = form("x1 x2^(2) + x2 x3^(2) + x3^(3)", 3)
    assert same_span(_flat(mfd(f, 1).basis), _flat(compute_mf(f).basis))


def test_fg_quotient_in_degree_zero():
    """dim (G/F)_0 = beta_1d"""
    modules = fg_modules(form("x1^(3) + x1 x2^(2)", 2))
    assert modules.quotient_dimension(0) == 1


def test_star_product_of_swap():
    """gamma(A) * gamma(A) = gamma(A^2) = f"""
    f = form("x1^(3) + x1 x2^(2)", 2)
    g = gamma_f(f, _SWAP)
    assert star(f, g, 0, g, 0) == f


def test_star_product_degree_bound():
    f = form("x1^(3) + x1 x2^(2)", 2)
    with pytest.raises(ValueError):
        star(f, f, 1, f, 0)


def test_block_truncation():
    """I with diag(0, 1) truncates to diag(1, 0), which lies in M_f"""
    f = form("x1^(3) + x2^(3)", 2)
    a1 = scalars.matrix([[0, 0], [0, 1]], QQ)
    b = block_truncation(f, [scalars.identity(2, QQ), a1], 1)
    assert scalars.entries(b) == scalars.entries(scalars.matrix([[1, 0], [0, 0]], QQ))
    assert in_mf(f, b)


def test_block_truncation_hypothesis():
    """A_1 must vanish in the kept rows"""
    f = form("x1^(3) + x2^(3)", 2)
    with pytest.raises(ValueError):
        block_truncation(f, [scalars.identity(2, QQ), scalars.identity(2, QQ)], 1)


@pytest.mark.parametrize("f", CORPUS)
def test_mf_dimension_on_random_forms(f):
    """the symmetry system kernel has dimension 1 + beta_1d + r beta_11, with the algebra laws from d = 3 on"""
    mf = compute_mf(f)
    assert mf.dimension == expected_mf_dimension(f)
    if f.degree >= 3:
        assert mf.closed_under_mult
        if not ann_graded(f, 1).dimension:
            assert mf.commutative


@pytest.mark.parametrize("f", SMALL_CORPUS)
def test_graded_gamma_dimensions_on_random_forms(f):
    for e in range(min(2, f.degree - 1) + 1):
        assert graded_gamma_dimensions(f, e) == expected_graded_gamma_dimensions(f, e)


@pytest.mark.parametrize("f", SMALL_CORPUS)
def test_fg_quotient_on_random_forms(f):
    """dim (G/F)_e = beta_{1,d-e}"""
    modules = fg_modules(f)
    counts = generator_counts(f)
    for e in range(min(2, f.degree) + 1):
        assert modules.quotient_dimension(e) == counts.get(f.degree - e, 0)
