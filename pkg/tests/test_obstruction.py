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
from dpsplit.generators import build_counterexample, jordan_extremal_form
from dpsplit.splitting.obstruction import nilpotent_rank_obstruction, pencil_min_rank
from tests.conftest import ANNIHILATORS, SEED
from tests.utils.corpus import form
from tests.utils.records import get_record


def _diag(*values):
    size = len(values)
    return scalars.matrix([[values[i] if i == j else 0 for j in range(size)] for i in range(size)], QQ)


def test_rank_one_nilpotent_obstructs_two_splits():
    """x1^(3) x2 cannot be a limit of forms with three components"""
    verdict = nilpotent_rank_obstruction(form("x1^(3) x2", 2), 2, 3, seed=SEED)
    assert verdict.obstructed
    assert verdict.verdict == "obstructed"
    assert verdict.bound == 0
    assert verdict.min_rank == 1
    assert verdict.nilpotent_dimension == 1
    assert verdict.method == "exact"
    assert verdict.witness == [["0", "1"], ["0", "0"]]


def test_rank_one_nilpotent_allows_one_split():
    verdict = nilpotent_rank_obstruction(form("x1^(3) x2", 2), 2, 2, seed=SEED)
    assert not verdict.obstructed
    assert verdict.bound == 1


def test_extra_powers_raise_the_bar():
    """adding x3^(4) leaves the bound at s / (m - r + s)"""
    verdict = nilpotent_rank_obstruction(form("x1^(3) x2", 2), 3, 3, seed=SEED)
    assert verdict.bound == 1
    assert not verdict.obstructed


def test_two_dimensional_nilpotent_space():
    """the square zero tail has nilpotents A and A^2, with A^2 of rank one"""
    verdict = nilpotent_rank_obstruction(form("x1^(3) x3 + x1^(2) x2^(2)", 3), 3, 3, seed=SEED)
    assert verdict.nilpotent_dimension == 2
    assert verdict.min_rank == 1
    assert verdict.method == "exact"
    assert verdict.bound == 1
    assert not verdict.obstructed


def test_linear_annihilator_gives_rank_one_nilpotents():
    verdict = nilpotent_rank_obstruction(form("x1^(3)", 2), 2, 3)
    assert verdict.method == "linear-annihilator"
    assert not verdict.obstructed


def test_no_nilpotents():
    """x1 x2 x3 has M_f = K and nothing to degenerate with"""
    verdict = nilpotent_rank_obstruction(form("x1 x2 x3", 3), 3, 2)
    assert verdict.obstructed
    assert verdict.nilpotent_dimension == 0
    assert verdict.min_rank is None


def test_regularly_split_core_is_rejected():
    with pytest.raises(ValueError):
        nilpotent_rank_obstruction(form("x1^(3) + x2^(3)", 2), 2, 3)


@pytest.mark.parametrize("r, m", [(1, 3), (2, 1), (3, 2)])
def test_bad_arguments(r, m):
    """r below s, or m not above r - s + 1"""
    with pytest.raises(ValueError):
        nilpotent_rank_obstruction(form("x1^(3) x2", 2), r, m)


def test_needs_degree_three():
    with pytest.raises(ValueError):
        nilpotent_rank_obstruction(form("x1 x2", 2), 2, 3)


def test_verdict_to_dict():
    data = nilpotent_rank_obstruction(form("x1^(3) x2", 2), 2, 3).to_dict()
    assert data["verdict"] == "obstructed"
    assert data["bound"] == 0


@pytest.mark.parametrize(
    "first, second, expected",
    [
        (_diag(1, 1), _diag(1, 2), 1),
        (_diag(1, 1), scalars.matrix([[0, -1], [1, 0]], QQ), 1),
        (scalars.unit_matrix(4, 0, 1, QQ), scalars.unit_matrix(4, 2, 3, QQ), 1),
        (_diag(1, 1, 0), _diag(0, 1, 1), 2),
    ],
)
def test_pencil_min_rank(first, second, expected):
    """least rank of a nonzero x A + y B, roots outside the base field included"""
    assert pencil_min_rank(first, second) == expected



@pytest.mark.parametrize("s, q, d", [(2, 1, 5), (3, 1, 4), (4, 1, 3)])
def test_built_counterexamples_are_obstructed(s, q, d):
    """the displaced identities leave only nilpotents of rank s, above the bound s // 3"""
    f = build_counterexample(s, q, d).form
    verdict = nilpotent_rank_obstruction(f, f.num_vars, 3, seed=SEED)
    assert verdict.obstructed
    assert verdict.min_rank == s
    assert verdict.nilpotent_dimension == q + 1


@pytest.mark.parametrize(
    "name, rank", [("rank_two_nilpotents", 2), ("rank_three_nilpotents", 3), ("rank_four_nilpotents", 4)]
)
def test_recorded_counterexamples_are_obstructed(name, rank):
    record = get_record(ANNIHILATORS, name)
    h = form(record["form"], record["r"])
    verdict = nilpotent_rank_obstruction(h, h.num_vars, 3, seed=SEED)
    assert verdict.obstructed
    assert verdict.min_rank == rank
    assert verdict.method == "exact"


@pytest.mark.parametrize("r, d", [(3, 3), (3, 4), (4, 3), (4, 4)])
def test_jordan_extremal_forms_are_not_obstructed(r, d):
    """a rank one power of the Jordan block meets the bound for r components"""
    verdict = nilpotent_rank_obstruction(jordan_extremal_form(r, d), r, r, seed=SEED)
    assert not verdict.obstructed
    assert verdict.min_rank == 1
