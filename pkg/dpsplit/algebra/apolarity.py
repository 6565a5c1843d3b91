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
"""Catalecticants, graded pieces of annihilator ideals, Hilbert functions and apolar complements"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy.polys.domains.domain import Domain
from sympy.polys.matrices import DomainMatrix

from . import scalars
from .forms import DiffOp, DPForm, ExponentVec, contract, exponent_vectors, monomial_count, monomial_positions

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Catalecticant:
    """The matrix of the pairing R_{d-e} x R_e -> K, (D, E) -> DE(f)

    Rows are indexed by the monomials of R_{d-e}, columns by those of R_e, both
    in lexicographically descending order.
    """

    degree: int
    matrix: DomainMatrix
    row_basis: Tuple[ExponentVec, ...]
    column_basis: Tuple[ExponentVec, ...]

    @property
    def rank(self) -> int:
        return scalars.rank(self.matrix)


@dataclass(frozen=True)
class GradedPiece:
    """A basis of ann_R(f)_e"""

    degree: int
    basis: Tuple[DiffOp, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def vectors(self) -> List[List[Any]]:
        return [op.to_vector() for op in self.basis]


@dataclass(frozen=True)
class HilbertFunction:
    """The h-vector (h_0, ..., h_d) of R/ann_R(f)"""

    values: Tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, index: int) -> int:
        return self.values[index]

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def is_symmetric(self) -> bool:
        return self.values == self.values[::-1]

    def to_list(self) -> List[int]:
        return list(self.values)


def _require_nonzero(f: DPForm):
    if f.is_zero():
        raise ValueError("zero form")


def catalecticant(f: DPForm, e: int) -> Catalecticant:
    """Cat^d_e(f), entry (i, j) = D_i E_j (f) = coefficient of x^[beta_i + gamma_j] in f

    Raises:
        ValueError: e outside 0..d
    """
    d = f.degree
    if not 0 <= e <= d:
        raise ValueError(f"catalecticant degree {e} outside 0..{d}")
    rows = exponent_vectors(f.num_vars, d - e)
    cols = exponent_vectors(f.num_vars, e)
    zero = f.domain.zero
    grid = [
        [f.terms.get(tuple(b + g for b, g in zip(beta, gamma)), zero) for gamma in cols] for beta in rows
    ]
    return Catalecticant(e, scalars.matrix(grid, f.domain, cols=len(cols)), rows, cols)


def ann_graded(f: DPForm, e: int) -> GradedPiece:
    """A basis of ann_R(f)_e, the kernel of the degree-e catalecticant pairing"""
    r, domain = f.num_vars, f.domain
    if e < 0:
        return GradedPiece(e, ())
    if e > f.degree or f.is_zero():
        basis = tuple(DiffOp.monomial(alpha, domain) for alpha in exponent_vectors(r, e))
        return GradedPiece(e, basis)
    kernel = scalars.kernel_basis(catalecticant(f, e).matrix)
    return GradedPiece(e, tuple(DiffOp.from_vector(v, r, e, domain) for v in kernel))


def annihilates(op: DiffOp, f: DPForm) -> bool:
    return contract(op, f).is_zero()


def hilbert_function(f: DPForm) -> HilbertFunction:
    """h_e = rank Cat^d_e(f) for e = 0..d

    Raises:
        ValueError: zero form
    """
    _require_nonzero(f)
    values = tuple(catalecticant(f, e).rank for e in range(f.degree + 1))
    if values != values[::-1]:
        raise RuntimeError(f"Hilbert function {values} is not symmetric")
    return HilbertFunction(values)


def multiples(ops: Sequence[DiffOp], degree: int) -> List[List[Any]]:
    """Coefficient vectors spanning (R . ops)_degree

    Every operator is multiplied by every monomial of the complementary degree.
    """
    vectors = []
    for op in ops:
        if op.is_zero() or op.degree > degree:
            continue
        positions = monomial_positions(op.num_vars, degree)
        for mu in exponent_vectors(op.num_vars, degree - op.degree):
            vector = [op.domain.zero] * len(positions)
            for alpha, c in op.terms.items():
                vector[positions[tuple(a + m for a, m in zip(alpha, mu))]] = c
            vectors.append(vector)
    return vectors


def _linear_multiples_dimension(piece: GradedPiece, num_vars: int, domain: Domain) -> int:
    degree = piece.degree + 1
    return scalars.span_dimension(multiples(piece.basis, degree), monomial_count(num_vars, degree), domain)


def generator_counts(f: DPForm) -> Dict[int, int]:
    """beta_{1j} = dim ann(f)_j - dim (R_1 ann(f)_{j-1}) for j = 1..d+1

    Raises:
        ValueError: zero form
    """
    _require_nonzero(f)
    counts = {}
    previous = ann_graded(f, 0)
    for j in range(1, f.degree + 2):
        current = ann_graded(f, j)
        counts[j] = current.dimension - _linear_multiples_dimension(previous, f.num_vars, f.domain)
        previous = current
    logger.debug("generator counts of %s: %s", f, counts)
    return counts


def ideal_generators(f: DPForm) -> Dict[int, List[DiffOp]]:
    """Minimal generators of ann_R(f) by degree, for degrees 1..d+1

    In each degree the generators complete the span of R_1 ann(f)_{j-1} inside
    ann(f)_j, taking kernel basis elements in order.
    """
    _require_nonzero(f)
    r, domain = f.num_vars, f.domain
    generators: Dict[int, List[DiffOp]] = {}
    previous = ann_graded(f, 0)
    for j in range(1, f.degree + 2):
        current = ann_graded(f, j)
        spanned = scalars.span_basis(multiples(previous.basis, j), monomial_count(r, j), domain)
        chosen = []
        for op in current.basis:
            vector = op.to_vector()
            if not scalars.in_span(vector, spanned, domain):
                chosen.append(op)
                spanned = spanned + [vector]
        if chosen:
            generators[j] = chosen
        previous = current
    return generators


def _common_shape(elements: Sequence, num_vars, degree, domain):
    if elements:
        num_vars = elements[0].num_vars if num_vars is None else num_vars
        domain = elements[0].domain if domain is None else domain
        degrees = {e.degree for e in elements if not e.is_zero()}
        if len(degrees) > 1:
            raise ValueError(f"elements of mixed degrees {sorted(degrees)}")
        if degrees:
            degree = degrees.pop() if degree is None else degree
    if num_vars is None or degree is None or domain is None:
        raise ValueError("num_vars, degree and domain are needed for an empty space")
    return num_vars, degree, domain


def perp(
    space: Sequence[DPForm],
    num_vars: Optional[int] = None,
    degree: Optional[int] = None,
    domain: Optional[Domain] = None,
) -> List[DiffOp]:
    """V^⊥ in R_d for a space V of forms in 𝓡_d

    Raises:
        ValueError: mixed degrees, or an empty space without shape data
    """
    num_vars, degree, domain = _common_shape(space, num_vars, degree, domain)
    kernel = scalars.kernel_basis(
        scalars.matrix([f.to_vector() for f in space], domain, cols=monomial_count(num_vars, degree))
    )
    return [DiffOp.from_vector(v, num_vars, degree, domain) for v in kernel]


def perp_forms(
    ops: Sequence[DiffOp],
    num_vars: Optional[int] = None,
    degree: Optional[int] = None,
    domain: Optional[Domain] = None,
) -> List[DPForm]:
    """W^⊥ in 𝓡_d for a space W of operators in R_d"""
    num_vars, degree, domain = _common_shape(ops, num_vars, degree, domain)
    kernel = scalars.kernel_basis(
        scalars.matrix([op.to_vector() for op in ops], domain, cols=monomial_count(num_vars, degree))
    )
    return [DPForm.from_vector(v, num_vars, degree, domain) for v in kernel]


def partials_space(f: DPForm, e: int) -> List[DPForm]:
    """A basis of R_e(f), forms of degree d - e"""
    r, domain = f.num_vars, f.domain
    degree = f.degree - e
    if degree < 0:
        return []
    images = [contract(DiffOp.monomial(alpha, domain), f).to_vector() for alpha in exponent_vectors(r, e)]
    basis = scalars.span_basis(images, monomial_count(r, degree), domain)
    return [DPForm.from_vector(v, r, degree, domain) for v in basis]


def ann_product_piece(f: DPForm, degree: Optional[int] = None) -> List[DiffOp]:
    """A basis of (ann(f)^2)_k, k = d by default

    Assembled from pairwise products of minimal generators, multiplied up to
    degree k.
    """
    k = f.degree if degree is None else degree
    r, domain = f.num_vars, f.domain
    generators = [g for j, ops in sorted(ideal_generators(f).items()) if j < k for g in ops]
    products = []
    for i, a in enumerate(generators):
        for b in generators[i:]:
            if a.degree + b.degree <= k:
                products.append(a * b)
    basis = scalars.span_basis(multiples(products, k), monomial_count(r, k), domain)
    return [DiffOp.from_vector(v, r, k, domain) for v in basis]
