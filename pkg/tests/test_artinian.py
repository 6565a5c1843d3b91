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
from dpsplit.algebra.artinian import (
    StructAlgebra,
    block_decompose,
    check_coid,
    coid_product,
    group_coid,
    idempotent_matrices,
    maximal_coid,
    nilradical,
    simultaneous_diagonalize,
)
from dpsplit.generators import jordan_block
from tests.conftest import FIELDS, SEED


def _diagonal_basis(size, domain):
    return [scalars.unit_matrix(size, i, i, domain) for i in range(size)]


def _algebra(rows_list, domain=QQ):
    return StructAlgebra.from_matrices([scalars.matrix(rows, domain) for rows in rows_list], domain)


def _local_basis(domain):
    a = scalars.lift_matrix(jordan_block(3), domain)
    return [scalars.identity(3, domain), a, a * a]


@pytest.mark.parametrize("domain", FIELDS)
def test_coid_of_diagonal_algebra(domain):
    """K x K x K splits into three blocks"""
    alg = StructAlgebra.from_matrices(_diagonal_basis(3, domain), domain)
    coid = maximal_coid(alg, seed=SEED)
    assert coid.length == 3
    assert coid.residue_degrees == (1, 1, 1)
    assert coid.certified
    assert check_coid(alg, coid.idempotents)


@pytest.mark.parametrize("domain", FIELDS)
def test_coid_of_local_algebra(domain):
    """K[t]/t^3 is local with a two dimensional nilradical"""
    alg = StructAlgebra.from_matrices(_local_basis(domain), domain)
    assert len(nilradical(alg)) == 2
    coid = maximal_coid(alg, seed=SEED)
    assert coid.length == 1
    assert coid.idempotents == (tuple(alg.identity),)


@pytest.mark.parametrize("domain", FIELDS)
def test_coid_of_swap_algebra(domain):
    """A^2 = 1 splits K[A] into two copies of K"""
    alg = _algebra([[[1, 0], [0, 1]], [[0, 1], [1, 0]]], domain)
    coid = maximal_coid(alg, seed=SEED)
    assert coid.length == 2
    assert not coid.requires_extension


def test_coid_of_gaussian_algebra_over_rationals():
    """A^2 = -1 gives a single block with residue field of degree two"""
    alg = _algebra([[[1, 0], [0, 1]], [[0, -1], [1, 0]]])
    coid = maximal_coid(alg, seed=SEED)
    assert coid.length == 1
    assert coid.residue_degrees == (2,)
    assert coid.requires_extension
    assert coid.certified


@pytest.mark.parametrize("p, length", [(101, 2), (103, 1)])
def test_coid_of_gaussian_algebra_mod_p(p, length):
    """-1 is a square modulo 101 but not modulo 103"""
    domain = scalars.prime_field(p)
    alg = _algebra([[[1, 0], [0, 1]], [[0, -1], [1, 0]]], domain)
    assert maximal_coid(alg).length == length


def test_coid_is_deterministic():
    """the same seed gives the same coid"""
    alg = StructAlgebra.from_matrices(_diagonal_basis(4, QQ), QQ)
    assert maximal_coid(alg, seed=3).idempotents == maximal_coid(alg, seed=3).idempotents


def test_coid_of_non_commutative_algebra():
    basis = [scalars.unit_matrix(2, i, j, QQ) for i in range(2) for j in range(2)]
    alg = StructAlgebra.from_matrices(basis, QQ)
    with pytest.raises(ValueError):
        maximal_coid(alg)


def test_from_matrices_needs_closure():
    with pytest.raises(ValueError):
        _algebra([[[1, 0], [0, 1]], [[0, 1], [0, 0]], [[0, 0], [1, 0]]])


def test_from_matrices_needs_identity():
    with pytest.raises(ValueError):
        _algebra([[[1, 0], [0, 0]]])


def test_from_matrices_with_corner_unit():
    """E Mat E is an algebra with unit E, not the identity"""
    e = scalars.unit_matrix(3, 0, 0, QQ) + scalars.unit_matrix(3, 1, 1, QQ)
    basis = [scalars.unit_matrix(3, 0, 0, QQ), scalars.unit_matrix(3, 1, 1, QQ)]
    alg = StructAlgebra.from_matrices(basis, QQ, unit=e)
    assert alg.identity == [QQ.one, QQ.one]
    coid = maximal_coid(alg, seed=SEED)
    assert coid.length == 2
    total = sum(idempotent_matrices(basis, coid, QQ), scalars.zeros(3, 3, QQ))
    assert scalars.entries(total) == scalars.entries(e)


def test_from_matrices_needs_its_unit():
    with pytest.raises(ValueError):
        StructAlgebra.from_matrices([scalars.unit_matrix(3, 0, 0, QQ)], QQ, unit=scalars.identity(3, QQ))


def test_check_coid_rejects_bad_sets():
    """non-orthogonal, incomplete and zero members are rejected"""
    alg = StructAlgebra.from_matrices(_diagonal_basis(2, QQ), QQ)
    one, zero = QQ.one, QQ.zero
    assert check_coid(alg, [(one, zero), (zero, one)])
    assert not check_coid(alg, [(one, zero)])
    assert not check_coid(alg, [(one, one), (one, zero)])
    assert not check_coid(alg, [(one, one), (zero, zero)])


def _embed_block(m, size, offset):
    rows = [[0] * size for _ in range(size)]
    for i, row in enumerate(scalars.entries(m)):
        for j, c in enumerate(row):
            rows[i + offset][j + offset] = c
    return scalars.matrix(rows, QQ)


def test_block_decompose():
    """K x K x K[t]/t^3 decomposes into blocks of dimension 1, 1 and 3"""
    units = [_embed_block(scalars.identity(1, QQ), 5, i) for i in range(2)]
    tail = [_embed_block(m, 5, 2) for m in _local_basis(QQ)]
    alg = StructAlgebra.from_matrices(units + tail, QQ)
    pieces = block_decompose(alg, seed=SEED)
    assert sorted(block.dim for _, block in pieces) == [1, 1, 3]


def test_group_and_product_of_coids():
    """grouping coarsens a coid and the product refines again"""
    alg = StructAlgebra.from_matrices(_diagonal_basis(3, QQ), QQ)
    coid = maximal_coid(alg)
    coarse = group_coid(coid, [[0, 1], [2]])
    assert coarse.length == 2
    assert check_coid(alg, coarse.idempotents)
    assert coid_product(alg, coid, coarse).length == 3


def test_group_coid_keeps_residue_degrees():
    """grouped members carry the residue algebra dimension of their part"""
    gaussian = [[[1, 0], [0, 1]], [[0, -1], [1, 0]]]
    rows = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    for k, m in enumerate(gaussian):
        for i in range(2):
            for j in range(2):
                rows[k][i][j] = m[i][j]
    rows[2][2][2] = 1
    alg = _algebra(rows)
    coid = maximal_coid(alg, seed=SEED)
    assert sorted(coid.residue_degrees) == [1, 2]
    coarse = group_coid(coid, [[0, 1]])
    assert coarse.residue_degrees == (3,)
    assert coarse.requires_extension
    assert coarse.to_dict()["residue_degrees"] == (3,)
    split = group_coid(coid, [[0], [1]])
    assert split.residue_degrees == coid.residue_degrees
    assert split.extras["local_degrees"] == list(coid.residue_degrees)


def test_group_coid_needs_partition():
    alg = StructAlgebra.from_matrices(_diagonal_basis(3, QQ), QQ)
    coid = maximal_coid(alg)
    with pytest.raises(ValueError):
        group_coid(coid, [[0], [0, 1, 2]])


def test_simultaneous_diagonalize():
    """P⁻¹E_iP are 0/1 diagonal matrices whose ranks add up to the size"""
    basis = [scalars.identity(2, QQ), scalars.matrix([[0, 1], [1, 0]], QQ)]
    alg = StructAlgebra.from_matrices(basis, QQ)
    idempotents = idempotent_matrices(basis, maximal_coid(alg), QQ)
    p = simultaneous_diagonalize(idempotents)
    total = 0
    for e in idempotents:
        conjugate = scalars.entries(p.inverse * e * p.matrix)
        for i, row in enumerate(conjugate):
            for j, c in enumerate(row):
                assert c in (QQ.zero, QQ.one)
                assert i == j or c == QQ.zero
        total += scalars.rank(e)
    assert total == 2


def test_simultaneous_diagonalize_rejects_non_coid():
    eye = scalars.identity(2, QQ)
    with pytest.raises(ValueError):
        simultaneous_diagonalize([eye, eye])
    with pytest.raises(ValueError):
        simultaneous_diagonalize([])
