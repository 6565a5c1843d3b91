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
"""Ideals and inverse systems attached to sets of matrices"""
from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy.polys.domains.domain import Domain
from sympy.polys.matrices import DomainMatrix

from . import scalars
from .apolarity import ann_graded, annihilates, multiples, partials_space, perp_forms
from .artinian import StructAlgebra, idempotent_matrices, maximal_coid, simultaneous_diagonalize
from .forms import DiffOp, DPForm, exponent_vectors, monomial_count, unit_exponent
from .matrix_algebra import in_mf

logger = logging.getLogger(__name__)

DEFAULT_DEGREE_BOUND = 5


@dataclass(frozen=True)
class MatrixSetIdeal:
    """An ideal of R generated by quadrics, kept with the matrices it came from

    ``generators`` is the rref basis of the degree 2 piece; every other piece is
    spanned by multiples of it.
    """

    num_vars: int
    generators: Tuple[DiffOp, ...]
    domain: Domain
    matrices: Tuple[DomainMatrix, ...] = ()

    def piece(self, e: int) -> List[List[Any]]:
        """An rref basis of the degree e piece as coefficient vectors"""
        if e < 2:
            return []
        return scalars.span_basis(multiples(self.generators, e), monomial_count(self.num_vars, e), self.domain)

    def dimension(self, e: int) -> int:
        return len(self.piece(e))

    def piece_ops(self, e: int) -> List[DiffOp]:
        return [DiffOp.from_vector(v, self.num_vars, e, self.domain) for v in self.piece(e)]

    def contains(self, op: DiffOp) -> bool:
        return scalars.in_span(op.to_vector(), self.piece(op.degree), self.domain)

    def is_zero(self) -> bool:
        return not self.generators


# ---------------------------------------------------------------- minors


def _check_matrices(ms: Sequence[DomainMatrix]) -> Tuple[int, Domain]:
    if not ms:
        raise ValueError("empty matrix set")
    size = ms[0].shape[0]
    for m in ms:
        if m.shape != (size, size):
            raise ValueError(f"expected {size}x{size} matrices, got {m.shape}")
    return size, ms[0].domain


def linear_column(m: Optional[DomainMatrix], size: int, domain: Domain) -> List[DiffOp]:
    """The column of linear operators m∂, or ∂ itself when m is None"""
    if m is None:
        return [DiffOp.variable(i, size, domain) for i in range(size)]
    column = []
    for row in scalars.entries(m):
        terms = {unit_exponent(size, j): c for j, c in enumerate(row) if c}
        column.append(DiffOp(size, 1, terms, domain))
    return column


def two_by_two_minors(columns: Sequence[Sequence[DiffOp]]) -> List[DiffOp]:
    """All 2x2 minors of the matrix with the given columns of linear operators"""
    minors = []
    for a, first in enumerate(columns):
        for second in columns[a + 1 :]:
            for i in range(len(first)):
                for j in range(i + 1, len(first)):
                    minors.append(first[i] * second[j] - first[j] * second[i])
    return minors


def _ideal(minors: Sequence[DiffOp], size: int, domain: Domain, ms: Sequence[DomainMatrix]) -> MatrixSetIdeal:
    basis = scalars.span_basis([m.to_vector() for m in minors], monomial_count(size, 2), domain)
    generators = tuple(DiffOp.from_vector(v, size, 2, domain) for v in basis)
    return MatrixSetIdeal(size, generators, domain, tuple(ms))


def ideal_of(ms: Sequence[DomainMatrix]) -> MatrixSetIdeal:
    """I(M), the sum over A in M of the 2x2 minors of (∂ A∂)"""
    size, domain = _check_matrices(ms)
    d = linear_column(None, size, domain)
    minors = [op for m in ms for op in two_by_two_minors([d, linear_column(m, size, domain)])]
    return _ideal(minors, size, domain, ms)


def check_ideal(ms: Sequence[DomainMatrix]) -> MatrixSetIdeal:
    """The ideal spanned by the 2x2 minors of (A∂ B∂) over pairs A, B in M"""
    size, domain = _check_matrices(ms)
    cols = [linear_column(m, size, domain) for m in ms]
    minors = []
    for a, first in enumerate(cols):
        for second in cols[a + 1 :]:
            minors.extend(two_by_two_minors([first, second]))
    return _ideal(minors, size, domain, ms)


def stacked_minor_ideal(ms: Sequence[DomainMatrix]) -> MatrixSetIdeal:
    """The ideal of 2x2 minors of (∂ A_1∂ ... A_n∂)"""
    size, domain = _check_matrices(ms)
    cols = [linear_column(None, size, domain)] + [linear_column(m, size, domain) for m in ms]
    return _ideal(two_by_two_minors(cols), size, domain, ms)


def _same_piece(first: Sequence[Sequence[Any]], second: Sequence[Sequence[Any]], length: int, domain: Domain) -> bool:
    return first == second or (
        len(first) == len(second)
        and scalars.span_dimension(list(first) + list(second), length, domain) == len(first)
    )


def _contained(first: Sequence[Sequence[Any]], second: Sequence[Sequence[Any]], length: int, domain: Domain) -> bool:
    return scalars.span_dimension(list(first) + list(second), length, domain) == len(second)


# ---------------------------------------------------------------- inverse systems


def x_space(ms: Sequence[DomainMatrix], d: int, verify: bool = True) -> List[DPForm]:
    """A basis of X_d(M) = {f in 𝓡_d : M ⊆ M_f}, the perp of I(M)_d

    For d >= 3 the result is checked against the description by second
    partials: f lies in X_d(M) exactly when R_{d-2}(f) ⊆ X_2(M).

    Raises:
        ValueError: d < 0
        RuntimeError: the recursive description disagrees
    """
    if d < 0:
        raise ValueError(f"degree must be non-negative, got {d}")
    size, domain = _check_matrices(ms)
    ideal = ideal_of(ms)
    ops = ideal.piece_ops(d)
    result = perp_forms(ops, size, d, domain)
    if verify and d >= 3:
        quadratic = [f.to_vector() for f in x_space(ms, 2, verify=False)]
        length = monomial_count(size, 2)
        for f in result:
            for g in partials_space(f, d - 2):
                if not scalars.in_span(g.to_vector(), quadratic, domain):
                    raise RuntimeError("a second partial of an element of X_d(M) leaves X_2(M)")
        logger.debug(
            "X_%d(M) of dimension %d checked against X_2(M) of dimension %d",
            d,
            len(result),
            length - ideal.dimension(2),
        )
    return result


def generated_algebra(ms: Sequence[DomainMatrix]) -> List[DomainMatrix]:
    """A basis of the unital algebra generated by ``ms``, by saturating spans under products"""
    size, domain = _check_matrices(ms)
    length = size * size
    spanning = [scalars.flatten(scalars.identity(size, domain))] + [scalars.flatten(m) for m in ms]
    basis = scalars.span_basis(spanning, length, domain)
    while True:
        matrices = [scalars.unflatten(v, size, domain) for v in basis]
        products = [scalars.flatten(a * b) for a in matrices for b in matrices]
        grown = scalars.span_basis(basis + products, length, domain)
        if len(grown) == len(basis):
            return matrices
        basis = grown


@dataclass
class ClosureReport:
    """Degreewise comparison of I(M), the pairwise-minor ideal and I(M')

    Each mapping sends a degree to whether the statement holds in it.
    """

    degree_bound: int
    contained: Dict[int, bool]
    equal_from_three: Dict[int, bool]
    generated_algebra_ideal: Dict[int, bool]
    stacked_minors: Dict[int, bool]
    generated_dimension: int
    extras: Dict[str, Any] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return all(
            all(values.values())
            for values in (self.contained, self.equal_from_three, self.generated_algebra_ideal, self.stacked_minors)
        )

    def to_dict(self) -> Dict[str, Any]:
        return {**asdict(self), "holds": self.holds}


def closure_identities(ms: Sequence[DomainMatrix], degree_bound: int = DEFAULT_DEGREE_BOUND) -> ClosureReport:
    """Compares I(M), the pairwise-minor ideal, I(M') and the stacked minors degreewise

    Checked up to ``degree_bound``:

    * I(M)_e is contained in the pairwise-minor ideal, with equality for e >= 3;
    * the ideal of the generated algebra M' equals the pairwise-minor ideal;
    * I(M') equals the 2x2 minors of (∂ A_1∂ ... A_n∂) with A_i the non-identity members.

    Raises:
        ValueError: the identity matrix is not in ``ms``
    """
    size, domain = _check_matrices(ms)
    unit = scalars.entries(scalars.identity(size, domain))
    if not any(scalars.entries(m) == unit for m in ms):
        raise ValueError("matrix set must contain the identity")
    ideal = ideal_of(ms)
    pairwise = check_ideal(ms)
    algebra = generated_algebra(ms)
    algebra_ideal = ideal_of(algebra)
    stacked = stacked_minor_ideal([m for m in ms if scalars.entries(m) != unit] or [scalars.identity(size, domain)])
    contained, equal, generated, minors = {}, {}, {}, {}
    for e in range(2, degree_bound + 1):
        length = monomial_count(size, e)
        own, other = ideal.piece(e), pairwise.piece(e)
        contained[e] = _contained(own, other, length, domain)
        if e >= 3:
            equal[e] = _same_piece(own, other, length, domain)
        generated[e] = _same_piece(algebra_ideal.piece(e), other, length, domain)
        minors[e] = _same_piece(algebra_ideal.piece(e), stacked.piece(e), length, domain)
    report = ClosureReport(degree_bound, contained, equal, generated, minors, len(algebra))
    logger.info("closure identities up to degree %d hold: %s", degree_bound, report.holds)
    return report


# ---------------------------------------------------------------- zero locus


@dataclass
class EigenLocus:
    """Common eigenvectors of a matrix set, as joint eigenspaces over the base field"""

    size: int
    components: List[List[List[Any]]]
    full_space: bool
    requires_extension: bool

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def eigen_locus(ms: Sequence[DomainMatrix]) -> EigenLocus:
    """The zero set of I(M): vectors that are eigenvectors of every A in M

    Joint eigenspaces are formed by choosing one base-field eigenvalue per
    matrix; empty intersections are dropped. Eigenvalues outside the base field
    only raise the ``requires_extension`` flag.
    """
    size, domain = _check_matrices(ms)
    spaces = [[scalars.unit_vector(size, i, domain) for i in range(size)]]
    extension = False
    for m in ms:
        roots, irreducible = scalars.linear_roots(m.charpoly(), domain)
        extension = extension or irreducible
        unit = scalars.identity(size, domain)
        eigenspaces = [scalars.kernel_basis(m - unit * root) for root in roots]
        refined = []
        for space in spaces:
            for eigenspace in eigenspaces:
                meet = scalars.intersect_spaces(space, eigenspace, size, domain)
                if meet:
                    refined.append(meet)
        spaces = refined
    spaces = [scalars.span_basis(space, size, domain) for space in spaces]
    full = len(spaces) == 1 and len(spaces[0]) == size
    return EigenLocus(size, spaces, full, extension)


# ---------------------------------------------------------------- U and V


def _transpose(m: DomainMatrix) -> DomainMatrix:
    return m.transpose()


def uv_spaces(
    a_list: Sequence[DomainMatrix], b_list: Sequence[DomainMatrix], size: int, domain: Domain
) -> Tuple[List[List[Any]], List[List[Any]]]:
    """U = Σ im A_kᵀ + Σ ker B_kᵀ and V = ∩ ker A_kᵀ ∩ ∩ im B_kᵀ

    An empty intersection is the whole space.
    """
    u = []
    for a in a_list:
        u.extend(scalars.column_space(_transpose(a)))
    for b in b_list:
        u.extend(scalars.kernel_basis(_transpose(b)))
    u = scalars.span_basis(u, size, domain)
    v = [scalars.unit_vector(size, i, domain) for i in range(size)]
    for a in a_list:
        v = scalars.intersect_spaces(v, scalars.kernel_basis(_transpose(a)), size, domain)
    for b in b_list:
        v = scalars.intersect_spaces(v, scalars.column_space(_transpose(b)), size, domain)
    return u, scalars.span_basis(v, size, domain)


def _linear_op(vector: Sequence[Any], size: int, domain: Domain) -> DiffOp:
    return DiffOp(size, 1, {unit_exponent(size, i): c for i, c in enumerate(vector) if c}, domain)


def _require_members(f: DPForm, matrices: Sequence[DomainMatrix]):
    for m in matrices:
        if not in_mf(f, m):
            raise ValueError("matrix is not in M_f")


def uv_annihilator_products(
    f: DPForm, a_list: Sequence[DomainMatrix], b_list: Sequence[DomainMatrix]
) -> List[DiffOp]:
    """The quadrics (uᵀ∂)(vᵀ∂) for u in a basis of U and v in a basis of V

    Every A_k and B_k must lie in M_f.

    Raises:
        ValueError: a matrix is not in M_f
        RuntimeError: a product fails to annihilate f
    """
    _require_members(f, list(a_list) + list(b_list))
    if not a_list and not b_list:
        return []
    size, domain = f.num_vars, f.domain
    u, v = uv_spaces(a_list, b_list, size, domain)
    products = []
    for first in u:
        for second in v:
            op = _linear_op(first, size, domain) * _linear_op(second, size, domain)
            if not annihilates(op, f):
                raise RuntimeError(f"{op} does not annihilate f")
            products.append(op)
    return products


def uv_obstruction(f: DPForm, a_list: Sequence[DomainMatrix], b_list: Sequence[DomainMatrix]) -> bool:
    """Whether U and V force a linear annihilator

    True when U + V is the whole space and U ∩ V ≠ 0, or when dim U = r - 1 and
    dim V >= 2. A True verdict is re-verified against ann(f)_1.

    Raises:
        ValueError: a matrix is not in M_f
        RuntimeError: the verdict holds but ann(f)_1 = 0
    """
    _require_members(f, list(a_list) + list(b_list))
    if f.degree < 2 or (not a_list and not b_list):
        return False
    size, domain = f.num_vars, f.domain
    u, v = uv_spaces(a_list, b_list, size, domain)
    spans_all = scalars.span_dimension(u + v, size, domain) == size
    meets = bool(scalars.intersect_spaces(u, v, size, domain))
    verdict = (spans_all and meets) or (len(u) == size - 1 and len(v) >= 2)
    if verdict:
        if not ann_graded(f, 1).dimension:
            raise RuntimeError("U and V force a linear annihilator but ann(f)_1 = 0")
    logger.debug("dim U = %d, dim V = %d, verdict %s", len(u), len(v), verdict)
    return verdict


# ---------------------------------------------------------------- regular decomposition


@dataclass
class RegularDecompositionReport:
    """Per degree: (dimension of the whole, sum over the blocks) for R/I(M) and X(M)"""

    block_sizes: List[int]
    quotient: Dict[int, Tuple[int, int]]
    inverse_system: Dict[int, Tuple[int, int]]
    direct: Dict[int, bool]

    @property
    def holds(self) -> bool:
        return (
            all(a == b for a, b in self.quotient.values())
            and all(a == b for a, b in self.inverse_system.values())
            and all(self.direct.values())
        )

    def to_dict(self) -> Dict[str, Any]:
        return {**asdict(self), "holds": self.holds}


def _block_coordinates(num_vars: int, degree: int, block: Sequence[int]) -> List[int]:
    inside = set(block)
    return [
        index
        for index, alpha in enumerate(exponent_vectors(num_vars, degree))
        if all(a == 0 or i in inside for i, a in enumerate(alpha))
    ]


def _restrict(vectors: Sequence[Sequence[Any]], coords: Sequence[int], length: int, domain: Domain) -> List[List[Any]]:
    """A basis of the span of ``vectors`` intersected with the coordinate subspace on ``coords``"""
    units = [scalars.unit_vector(length, i, domain) for i in coords]
    return scalars.intersect_spaces(list(vectors), units, length, domain)


def regular_decomposition_check(
    ms: Sequence[DomainMatrix], degree_bound: int = DEFAULT_DEGREE_BOUND, seed: int = 0
) -> RegularDecompositionReport:
    """Checks that R/I(M) and X(M) split over the blocks of the maximal coid of M

    The algebra is first brought to block diagonal form by the simultaneous
    diagonalization of its coid. Then, in each degree e, the quotient dimension
    of I(M) is compared with the sum over blocks i of the quotient dimensions of
    S_i ∩ I(M E_i), where S_i is the polynomial ring in the block's variables;
    likewise X(M)_e is compared with the direct sum of 𝒮_i ∩ X(M E_i).

    Raises:
        ValueError: the span of ``ms`` is not a commutative algebra with identity
    """
    size, domain = _check_matrices(ms)
    vectors = scalars.span_basis([scalars.flatten(m) for m in ms], size * size, domain)
    basis = [scalars.unflatten(v, size, domain) for v in vectors]
    alg = StructAlgebra.from_matrices(basis, domain)
    if not alg.is_commutative():
        raise ValueError("matrix algebra is not commutative")
    coid = maximal_coid(alg, seed=seed)
    idempotents = idempotent_matrices(basis, coid, domain)
    change = simultaneous_diagonalize(idempotents)
    p, p_inv = change.matrix, change.inverse
    conjugated = [p_inv * m * p for m in basis]
    blocks, start = [], 0
    for e in idempotents:
        width = scalars.rank(e)
        blocks.append(list(range(start, start + width)))
        start += width
    local_idempotents = [p_inv * e * p for e in idempotents]
    whole = ideal_of(conjugated)
    parts = [ideal_of([m * e for m in conjugated]) for e in local_idempotents]
    quotient, inverse_system, direct = {}, {}, {}
    for e in range(1, degree_bound + 1):
        length = monomial_count(size, e)
        whole_piece = whole.piece(e)
        total_quotient, total_inverse, pieces = 0, 0, []
        for block, part in zip(blocks, parts):
            coords = _block_coordinates(size, e, block)
            inside = _restrict(part.piece(e), coords, length, domain)
            total_quotient += len(coords) - len(inside)
            forms = [f.to_vector() for f in perp_forms(part.piece_ops(e), size, e, domain)]
            local = _restrict(forms, coords, length, domain)
            total_inverse += len(local)
            pieces.extend(local)
        own_forms = [f.to_vector() for f in perp_forms(whole.piece_ops(e), size, e, domain)]
        quotient[e] = (length - len(whole_piece), total_quotient)
        inverse_system[e] = (len(own_forms), total_inverse)
        direct[e] = (
            scalars.span_dimension(pieces, length, domain) == total_inverse
            and _contained(pieces, own_forms, length, domain)
        )
    report = RegularDecompositionReport([len(b) for b in blocks], quotient, inverse_system, direct)
    logger.info("regular decomposition over %d blocks holds: %s", len(blocks), report.holds)
    return report
