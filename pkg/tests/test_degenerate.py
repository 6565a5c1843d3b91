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
from dpsplit.algebra.matrix_algebra import in_mf
from dpsplit.generators import jordan_block, jordan_extremal_form
from dpsplit.splitting.degenerate import (
    NoNilpotentError,
    degenerate_split_multimatrix,
    degenerate_split_onematrix,
    find_nilpotent,
    relaxed_power_hypothesis,
)
from tests.conftest import PRIME, SEED
from tests.utils.corpus import form

_LIMIT = "x1^(3) x2"


def _corner(size, indices):
    rows = [[1 if i == j and i in indices else 0 for j in range(size)] for i in range(size)]
    return scalars.matrix(rows, QQ)


def test_one_parameter_family():
    """x1^(d-1) x2 is a limit of forms splitting once"""
    f = form(_LIMIT, 2)
    result = degenerate_split_onematrix(f, jordan_block(2), seed=SEED, prime=PRIME)
    assert result.num_params == 1
    assert result.family.at_zero() == f
    assert len(result.components) == 2
    assert all(level.ok for level in result.levels)
    certificate = result.certificate
    assert certificate.verified
    assert certificate.split_length >= 2
    assert certificate.prime == PRIME


def test_one_parameter_family_is_flat():
    """the specialization has the Hilbert function of x1^(3) x2"""
    result = degenerate_split_onematrix(form(_LIMIT, 2), jordan_block(2), seed=SEED)
    assert result.certificate.flat
    assert result.certificate.hilbert_at_zero.to_list() == [1, 2, 2, 2, 1]


def test_jordan_extremal_form_family():
    """the extremal form in four variables degenerates from four components"""
    f = jordan_extremal_form(4, 3)
    a = find_nilpotent(f, seed=SEED)
    assert scalars.nilpotency_index(a) == 4
    result = degenerate_split_onematrix(f, a, seed=SEED, prime=PRIME)
    assert result.num_params == 3
    assert result.certificate.verified
    assert result.certificate.split_length >= 4


def test_square_zero_tail_family():
    """a nilpotent of index three gives a two parameter family"""
    f = form("x1^(3) x3 + x1^(2) x2^(2)", 3)
    result = degenerate_split_onematrix(f, jordan_block(3), seed=SEED, prime=PRIME)
    assert result.num_params == 2
    assert result.family.at_zero() == f
    assert result.certificate.verified


def test_family_without_reduction():
    """specializing over the rationals needs no prime"""
    result = degenerate_split_onematrix(form(_LIMIT, 2), jordan_block(2), seed=SEED, prime=None)
    assert result.certificate.prime is None
    assert result.certificate.verified


def test_family_over_prime_field():
    f = form(_LIMIT, 2, scalars.prime_field(PRIME))
    a = scalars.lift_matrix(jordan_block(2), f.domain)
    result = degenerate_split_onematrix(f, a, seed=SEED)
    assert result.certificate.prime == PRIME
    assert result.family.at_zero() == f


def test_family_document():
    """to_dict carries the parameters and the certificate"""
    result = degenerate_split_onematrix(form(_LIMIT, 2), jordan_block(2), seed=SEED)
    data = result.to_dict()
    assert data["family"]["params"] == 1
    assert data["certificate"]["verified"]
    assert result.family.params == ("t1",)


def test_specialize_needs_point_of_right_length():
    result = degenerate_split_onematrix(form(_LIMIT, 2), jordan_block(2), seed=SEED)
    with pytest.raises(ValueError):
        result.family.specialize([1, 2])


def test_onematrix_needs_degree_three():
    with pytest.raises(ValueError):
        degenerate_split_onematrix(form("x1 x2", 2), jordan_block(2))


def test_onematrix_needs_nilpotent():
    with pytest.raises(ValueError):
        degenerate_split_onematrix(form(_LIMIT, 2), scalars.identity(2, QQ))


def test_onematrix_needs_member_of_mf():
    lower = scalars.matrix([[0, 0], [1, 0]], QQ)
    with pytest.raises(ValueError):
        degenerate_split_onematrix(form(_LIMIT, 2), lower)


def test_multimatrix_family():
    """two orthogonal corners each contribute one parameter"""
    f = form("x1^(3) x2 + x3^(3) x4", 4)
    first = scalars.unit_matrix(4, 0, 1, QQ)
    second = scalars.unit_matrix(4, 2, 3, QQ)
    data = [(first, _corner(4, {0, 1}), 1), (second, _corner(4, {2, 3}), 1)]
    assert all(in_mf(f, a) for a, _, _ in data)
    result = degenerate_split_multimatrix(f, data, seed=SEED, prime=PRIME)
    assert result.num_params == 2
    assert result.family.at_zero() == f
    assert result.certificate.verified
    assert result.certificate.split_length >= 3


def test_multimatrix_needs_orthogonal_corners():
    f = form("x1^(3) x2 + x3^(3) x4", 4)
    first = scalars.unit_matrix(4, 0, 1, QQ)
    second = scalars.unit_matrix(4, 2, 3, QQ)
    everything = scalars.identity(4, QQ)
    with pytest.raises(ValueError):
        degenerate_split_multimatrix(f, [(first, everything, 1), (second, everything, 1)])


def test_multimatrix_needs_corner_fixing_matrix():
    f = form("x1^(3) x2 + x3^(3) x4", 4)
    first = scalars.unit_matrix(4, 0, 1, QQ)
    with pytest.raises(ValueError):
        degenerate_split_multimatrix(f, [(first, _corner(4, {2, 3}), 1)])


def test_multimatrix_needs_low_power_in_range():
    f = form("x1^(3) x2 + x3^(3) x4", 4)
    first = scalars.unit_matrix(4, 0, 1, QQ)
    with pytest.raises(ValueError):
        degenerate_split_multimatrix(f, [(first, _corner(4, {0, 1}), 2)])


def test_find_nilpotent_without_nilradical():
    """M_f of the binary cubic is reduced"""
    with pytest.raises(NoNilpotentError):
        find_nilpotent(form("x1^(3) + x1 x2^(2)", 2))


def test_find_nilpotent_prefers_high_index():
    a = find_nilpotent(form("x1^(3) x3 + x1^(2) x2^(2)", 3), seed=SEED)
    assert scalars.nilpotency_index(a) == 3


def test_relaxed_power_hypothesis():
    """A and A^2 in M_f with unit factors give every power from one on"""
    f = form(_LIMIT, 2)
    eye = scalars.identity(2, QQ)
    assert relaxed_power_hypothesis(f, jordan_block(2), 1, eye, eye)


def test_relaxed_power_hypothesis_fails_outside_mf():
    """A^1 B with A a lower Jordan block is not in M_f"""
    f = form(_LIMIT, 2)
    lower = scalars.matrix([[0, 0], [1, 0]], QQ)
    eye = scalars.identity(2, QQ)
    assert not relaxed_power_hypothesis(f, lower, 1, eye, eye)


def test_relaxed_power_hypothesis_needs_units():
    f = form(_LIMIT, 2)
    a = jordan_block(2)
    with pytest.raises(ValueError):
        relaxed_power_hypothesis(f, a, 1, a, scalars.identity(2, QQ))
