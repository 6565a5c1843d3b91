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
import numpy as np
import pytest

from dpsplit.algebra.apolarity import HilbertFunction
from dpsplit.resolutions import (
    BettiTable,
    TwistMultiset,
    betti_join,
    component_betti_table,
    component_tangent_data,
    extend_betti,
    hilbert_join,
    intersection_twists,
    join_resolution_twists,
    nu,
    nu_n,
    pgor_dim_small,
    psplit_dim,
    split_form_data,
    tangent_formula,
    tangent_space_dim,
)
from dpsplit.splitting.regular import regular_split
from tests.conftest import EXAMPLES, SEED
from tests.utils.corpus import form, random_components
from tests.utils.records import get_form, get_record


def _power_table(d):
    """S/(∂^(d+1)) in one variable"""
    return BettiTable(1, d, {(0, 0): 1, (1, d): 1})


@pytest.mark.parametrize(
    "s, t, k, expected",
    [(1, 1, 1, 1), (1, 1, 2, 0), (2, 1, 1, 2), (2, 1, 2, 1), (2, 2, 1, 4)],
)
def test_nu(s, t, k, expected):
    assert nu(s, t, k) == expected


def test_nu_n_for_two_components_matches_nu():
    """with full supports nu_n(2, s + t, (s, t), k) = nu(s, t, k)"""
    for k in range(4):
        assert nu_n(2, 3, [2, 1], k) == nu(2, 1, k)


def test_nu_n_checks_supports():
    with pytest.raises(ValueError):
        nu_n(2, 2, [1], 1)
    with pytest.raises(ValueError):
        nu_n(2, 2, [2, 1], 1)


def test_extend_betti():
    """adding a variable convolves each column with C(1, .)"""
    table = extend_betti(_power_table(3), 1)
    assert table.num_vars == 2
    assert table.rows() == [[1, 0, 0, 0], [1, 0, 0, 1], [0, 0, 0, 1]]


def test_extend_betti_needs_non_negative_count():
    with pytest.raises(ValueError):
        extend_betti(_power_table(3), -1)


def test_component_table_of_power():
    """x1^(3) among two variables has ann = (∂2, ∂1^4)"""
    table = component_betti_table(form("x1^(3)", 2))
    assert table.get(1, 0) == 1
    assert table.get(1, 3) == 1
    assert table.get(2, 3) == 1


def test_component_table_of_binary_complete_intersection():
    """x1^(3) x2 has ann = (∂2^2, ∂1^4)"""
    table = component_betti_table(form("x1^(3) x2", 2))
    assert table.rows() == [[1, 0, 0, 0, 0], [0, 1, 0, 1, 0], [0, 0, 0, 0, 1]]
    assert table.is_self_dual()


def test_component_table_needs_small_support():
    with pytest.raises(ValueError):
        component_betti_table(form("x1^(3) + x2^(3) + x3^(3)", 3))


def test_betti_join_of_powers():
    """x1^(3) + x2^(3) has the table of a complete intersection of degrees 2 and 3"""
    tables = [component_betti_table(form("x1^(3)", 2)), component_betti_table(form("x2^(3)", 2))]
    joined = betti_join(tables, [1, 1], 2, 3)
    assert joined.rows() == get_record(EXAMPLES, "binary_cubic_powers")["betti_rows"]
    assert joined.is_self_dual()


def test_betti_join_checks_shapes():
    tables = [component_betti_table(form("x1^(3)", 2))]
    with pytest.raises(ValueError):
        betti_join(tables, [1, 1], 2, 3)
    with pytest.raises(ValueError):
        betti_join(tables, [1], 3, 3)
    with pytest.raises(ValueError):
        betti_join(tables, [1], 2, 1)


def test_split_form_data_of_binary_cubic():
    """the table is computed from the components of the regular splitting"""
    f = get_form(EXAMPLES, "binary_cubic")
    data = split_form_data(regular_split(f, seed=SEED).forms)
    assert data["supports"] == [1, 1]
    assert data["hilbert"] == get_record(EXAMPLES, "binary_cubic")["hilbert"]
    assert data["betti"]["rows"] == [[1, 0, 0, 0], [0, 1, 1, 0], [0, 0, 0, 1]]
    assert data["tangent_formula"] == 4


def test_split_form_data_needs_components():
    with pytest.raises(ValueError):
        split_form_data([])
    with pytest.raises(ValueError):
        split_form_data([form("x1^(3)", 2), form("x1^(4)", 2)])


def test_join_resolution_twists():
    """ann(x^(3) + y^(3)) = (xy, x^3 - y^3) resolves with twists -2, -3 and -5"""
    twists = join_resolution_twists(_power_table(3), _power_table(3), 3)
    assert twists.module(1) == {-2: 1, -3: 1}
    assert twists.module(2) == {-5: 1}
    assert twists.is_self_dual()


def test_join_resolution_twists_needs_no_linear_generators():
    table = extend_betti(_power_table(3), 1)
    with pytest.raises(ValueError):
        join_resolution_twists(table, _power_table(3), 3)


def test_intersection_twists():
    """(xy, x^4, y^4) has generators in degrees 2, 4, 4 and two syzygies of degree 5"""
    twists = intersection_twists(_power_table(3), _power_table(3), 3)
    assert twists.module(1) == {-2: 1, -4: 2}
    assert twists.module(2) == {-5: 2}
    assert twists.rank(1) == 3


def test_twist_multiset():
    twists = TwistMultiset(2, 3)
    twists.add(1, -2, 1)
    twists.add(1, -2, 0)
    assert twists.rank(1) == 1
    assert twists.to_dict()["modules"] == {"1": [[-2, 1]]}
    with pytest.raises(ValueError):
        twists.add(1, -3, -1)


def test_betti_table_rejects_negative_entries():
    with pytest.raises(ValueError):
        BettiTable(1, 2, {(0, 0): -1})


def test_hilbert_join():
    joined = hilbert_join([HilbertFunction((1, 1, 1, 1)), HilbertFunction((1, 1, 1, 1))])
    assert joined.to_list() == [1, 2, 2, 1]


def test_hilbert_join_checks_degrees():
    with pytest.raises(ValueError):
        hilbert_join([HilbertFunction((1, 1, 1)), HilbertFunction((1, 1, 1, 1))])
    with pytest.raises(ValueError):
        hilbert_join([])


@pytest.mark.parametrize("name", ["binary_quartic_powers", "binary_cubic_powers"])
def test_tangent_space_dim(name):
    f = get_form(EXAMPLES, name)
    assert tangent_space_dim(f) == get_record(EXAMPLES, name)["tangent_dimension"]


@pytest.mark.parametrize("name", ["binary_quartic_powers", "binary_cubic_powers"])
def test_tangent_formula_matches_direct_count(name):
    """the formula over the components equals dim (R/I^2)_d"""
    f = get_form(EXAMPLES, name)
    report = regular_split(f, seed=SEED)
    data = [component_tangent_data(g) for g in report.forms]
    assert tangent_formula(data, f.num_vars, f.degree) == tangent_space_dim(f)


def test_tangent_formula_for_three_powers():
    """x1^(4) + x2^(4) + x3^(4)"""
    f = form("x1^(4) + x2^(4) + x3^(4)", 3)
    data = [component_tangent_data(g) for g in regular_split(f, seed=SEED).forms]
    assert tangent_formula(data, 3, 4) == tangent_space_dim(f)


def _split_forms(count):
    rng = np.random.default_rng(SEED)
    return [random_components(rng, int(rng.integers(4, 6)), local=False) for _ in range(count)]


@pytest.mark.parametrize("components", _split_forms(20))
def test_tangent_formula_on_random_split_forms(components):
    """the count from the component data equals dim (R/I^2)_d of the sum"""
    f = sum(components[1:], components[0])
    data = [component_tangent_data(g) for g in components]
    assert tangent_formula(data, f.num_vars, f.degree) == tangent_space_dim(f)


def test_component_tangent_data_of_power():
    """T = dim (R/I^2)_d - s (r - s) = 1 for a power of a linear form"""
    data = component_tangent_data(form("x1^(4)", 2))
    assert data.support_dimension == 1
    assert data.tangent_dimension == 1
    assert data.beta_top == 0


def test_tangent_needs_degree_three():
    with pytest.raises(ValueError):
        tangent_space_dim(form("x1 x2", 2))
    with pytest.raises(ValueError):
        tangent_formula([component_tangent_data(form("x1^(3)", 2))], 2, 2)


def test_psplit_dim():
    """two points on the line: 1 + 0 + 0 + 1 + 1"""
    assert psplit_dim(2, [1, 1], [0, 0]).dimension == 3
    assert psplit_dim(3, [2, 1], [3, 0]).fiber_dimension == 5


def test_psplit_dim_checks_supports():
    with pytest.raises(ValueError):
        psplit_dim(2, [2, 1], [0, 0])
    with pytest.raises(ValueError):
        psplit_dim(2, [0, 1], [0, 0])
    with pytest.raises(ValueError):
        psplit_dim(2, [1], [0, 0])


@pytest.mark.parametrize(
    "values, expected",
    [((1, 1, 1, 1), 0), ((1, 2, 2, 1), 3), ((1, 2, 2, 2, 1), 3), ((1, 2, 1), 2)],
)
def test_pgor_dim_small(values, expected):
    assert pgor_dim_small(HilbertFunction(values)) == expected


def test_pgor_dim_small_needs_small_h1():
    with pytest.raises(ValueError):
        pgor_dim_small(HilbertFunction((1, 3, 1)))
