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
"""Exact base fields and the dense exact linear algebra every other module is built on"""
from __future__ import annotations

import functools
import logging
from typing import Any, Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import QQ, Poly, Symbol, isprime
from sympy.polys.domains import GF
from sympy.polys.domains.domain import Domain
from sympy.polys.matrices import DomainMatrix

logger = logging.getLogger(__name__)

Vector = List[Any]
FieldDescriptor = Union[str, dict]

RATIONALS = QQ
_MAX_PRIME = 2**63


@functools.lru_cache(maxsize=None)
def prime_field(p: int) -> Domain:
    """The prime field F_p with canonical representatives in [0, p)

    Args:
        p: the characteristic, a prime below 2**63

    Returns:
        the sympy finite field domain

    Raises:
        ValueError: p is not a machine-word prime
    """
    if p < 2 or p >= _MAX_PRIME or not isprime(p):
        raise ValueError(f"{p} is not a supported prime")
    return GF(p, symmetric=False)


def field_from_descriptor(descriptor: Union[FieldDescriptor, int, None]) -> Domain:
    """Resolves "Q", {"p": prime}, a bare prime or a prime string to a domain"""
    if descriptor is None or descriptor in ("Q", "QQ"):
        return RATIONALS
    if isinstance(descriptor, dict):
        if set(descriptor) != {"p"}:
            raise ValueError(f"unknown field descriptor {descriptor!r}")
        return prime_field(int(descriptor["p"]))
    if isinstance(descriptor, str):
        try:
            return prime_field(int(descriptor))
        except ValueError:
            raise ValueError(f"unknown field descriptor {descriptor!r}") from None
    return prime_field(int(descriptor))


def field_descriptor(domain: Domain) -> FieldDescriptor:
    """The interchange descriptor of a base field"""
    if domain == RATIONALS:
        return "Q"
    if domain.is_FiniteField:
        return {"p": int(domain.mod)}
    raise ValueError(f"{domain} is not a base field")


def base_field(domain: Domain) -> Domain:
    """The field of constants underneath a parameter ring or fraction field"""
    while domain.is_PolynomialRing or domain.is_FractionField:
        domain = domain.domain
    return domain


def characteristic(domain: Domain) -> int:
    return int(domain.characteristic())


def lift_scalar(target: Domain, value: Any, source: Domain) -> Any:
    """Embeds a scalar of ``source`` into ``target``

    ``target`` is either ``source`` itself or a polynomial ring or fraction field
    built over it.
    """
    if target == source:
        return value
    if target.is_PolynomialRing and target.domain == source:
        return target.ring.ground_new(value)
    if target.is_FractionField and target.domain == source:
        return target.field.ground_new(value)
    return target.convert_from(value, source)


def scalar_str(value: Any, domain: Domain) -> str:
    """Renders a base-field scalar as an integer or "num/den" string"""
    if domain.is_FiniteField:
        return str(int(domain.to_int(value)) % int(domain.mod))
    numerator, denominator = int(domain.numer(value)), int(domain.denom(value))
    if denominator == 1:
        return str(numerator)
    return f"{numerator}/{denominator}"


def parse_scalar(text: str, domain: Domain) -> Any:
    """Parses an integer or "a/b" string into the base field

    Raises:
        ValueError: the text is not a number, or a denominator vanishes
    """
    text = text.strip()
    numerator, _, denominator = text.partition("/")
    num = int(numerator)
    den = int(denominator) if denominator else 1
    if den == 0 or (domain.is_FiniteField and den % int(domain.mod) == 0):
        raise ValueError(f"zero denominator in {text!r}")
    return domain.convert(num) / domain.convert(den)


# ---------------------------------------------------------------- matrices


def matrix(rows: Sequence[Sequence[Any]], domain: Domain, cols: Optional[int] = None) -> DomainMatrix:
    """Builds a dense matrix, converting python ints and keeping the shape of empty inputs"""
    rows = [[_coerce(entry, domain) for entry in row] for row in rows]
    ncols = cols if cols is not None else (len(rows[0]) if rows else 0)
    if any(len(row) != ncols for row in rows):
        raise ValueError("ragged rows")
    return DomainMatrix(rows, (len(rows), ncols), domain)


def _coerce(entry: Any, domain: Domain) -> Any:
    if isinstance(entry, int):
        return domain.convert(entry)
    return entry


def zeros(rows: int, cols: int, domain: Domain) -> DomainMatrix:
    return DomainMatrix([[domain.zero] * cols for _ in range(rows)], (rows, cols), domain)


def identity(size: int, domain: Domain) -> DomainMatrix:
    rows = [[domain.one if i == j else domain.zero for j in range(size)] for i in range(size)]
    return DomainMatrix(rows, (size, size), domain)


def unit_matrix(size: int, i: int, j: int, domain: Domain) -> DomainMatrix:
    """The matrix unit with a single one at (i, j)"""
    rows = [[domain.zero] * size for _ in range(size)]
    rows[i][j] = domain.one
    return DomainMatrix(rows, (size, size), domain)


def entries(m: DomainMatrix) -> List[List[Any]]:
    return m.to_dense().to_list()


def entry(m: DomainMatrix, i: int, j: int) -> Any:
    return m.rep.getitem(i, j)


def flatten(m: DomainMatrix) -> Vector:
    """Row-major coordinates of a matrix"""
    return [value for row in entries(m) for value in row]


def unflatten(vector: Sequence[Any], size: int, domain: Domain) -> DomainMatrix:
    """Inverse of :func:`flatten` for square matrices"""
    rows = [list(vector[i * size : (i + 1) * size]) for i in range(size)]
    return DomainMatrix(rows, (size, size), domain)


def columns(m: DomainMatrix) -> List[Vector]:
    return [list(column) for column in zip(*entries(m))] if m.shape[0] else [[] for _ in range(m.shape[1])]


def from_columns(vectors: Sequence[Sequence[Any]], length: int, domain: Domain) -> DomainMatrix:
    """A length × len(vectors) matrix with the given columns"""
    rows = [[vector[i] for vector in vectors] for i in range(length)]
    return DomainMatrix(rows, (length, len(vectors)), domain)


def is_zero_vector(vector: Sequence[Any]) -> bool:
    return all(not value for value in vector)


def is_zero(m: DomainMatrix) -> bool:
    return m.is_zero_matrix


def mat_vec(m: DomainMatrix, vector: Sequence[Any]) -> Vector:
    domain = m.domain
    result = []
    for row in entries(m):
        total = domain.zero
        for a, b in zip(row, vector):
            if a and b:
                total += a * b
        result.append(total)
    return result


def is_idempotent(m: DomainMatrix) -> bool:
    return entries(m * m) == entries(m)


def nilpotency_index(m: DomainMatrix) -> Optional[int]:
    """Least k with m^k = 0, or None when m is not nilpotent"""
    size = m.shape[0]
    power = identity(size, m.domain)
    for k in range(1, size + 1):
        power = power * m
        if power.is_zero_matrix:
            return k
    return None


def rref(m: DomainMatrix) -> Tuple[DomainMatrix, List[int]]:
    """Reduced row-echelon form and pivot columns

    The form is normalized (pivots equal one, cleared above and below), hence
    canonical; pivots are the leftmost nonzero column of each nonzero row.
    """
    rows, cols = m.shape
    if rows == 0 or cols == 0:
        return m, []
    reduced, pivots = m.to_dense().to_field().rref()
    return reduced, list(pivots)


def rank(m: DomainMatrix) -> int:
    return len(rref(m)[1])


def kernel_basis(m: DomainMatrix) -> List[Vector]:
    """Basis of {x : m x = 0}

    Free columns are taken in increasing order; each basis vector has a one in
    its free column, zeros in the other free columns, and solved pivot entries.
    """
    rows, cols = m.shape
    domain = m.domain.get_field() if m.domain.has_assoc_Field else m.domain
    if rows == 0:
        return [unit_vector(cols, c, domain) for c in range(cols)]
    reduced, pivots = rref(m)
    domain = reduced.domain
    reduced_rows = entries(reduced)
    pivot_set = set(pivots)
    basis = []
    for free in range(cols):
        if free in pivot_set:
            continue
        vector = unit_vector(cols, free, domain)
        for i, pivot in enumerate(pivots):
            vector[pivot] = -reduced_rows[i][free]
        basis.append(vector)
    return basis


def unit_vector(length: int, index: int, domain: Domain) -> Vector:
    vector = [domain.zero] * length
    vector[index] = domain.one
    return vector


def solve(m: DomainMatrix, rhs: Sequence[Any]) -> Optional[Vector]:
    """A particular solution of m x = rhs, free variables set to zero, or None"""
    rows, cols = m.shape
    domain = m.domain
    if rows == 0:
        return [domain.zero] * cols
    augmented = matrix([row + [value] for row, value in zip(entries(m), rhs)], domain, cols=cols + 1)
    reduced, pivots = rref(augmented)
    if pivots and pivots[-1] == cols:
        return None
    reduced_rows = entries(reduced)
    solution = [reduced.domain.zero] * cols
    for i, pivot in enumerate(pivots):
        solution[pivot] = reduced_rows[i][cols]
    return solution


def span_basis(vectors: Sequence[Sequence[Any]], length: int, domain: Domain) -> List[Vector]:
    """Canonical (rref) basis of the span of ``vectors``"""
    if not vectors:
        return []
    reduced, pivots = rref(matrix(vectors, domain, cols=length))
    return [list(row) for row in entries(reduced)[: len(pivots)]]


def span_dimension(vectors: Sequence[Sequence[Any]], length: int, domain: Domain) -> int:
    if not vectors:
        return 0
    return rank(matrix(vectors, domain, cols=length))


def in_span(vector: Sequence[Any], vectors: Sequence[Sequence[Any]], domain: Domain) -> bool:
    if is_zero_vector(vector):
        return True
    if not vectors:
        return False
    length = len(vector)
    return span_dimension(list(vectors) + [vector], length, domain) == span_dimension(
        vectors, length, domain
    )


def coordinates(vector: Sequence[Any], basis: Sequence[Sequence[Any]], domain: Domain) -> Optional[Vector]:
    """Coefficients expressing ``vector`` in ``basis``, or None if it lies outside the span"""
    if not basis:
        return [] if is_zero_vector(vector) else None
    return solve(from_columns(basis, len(vector), domain), vector)


def intersect_spaces(
    first: Sequence[Sequence[Any]], second: Sequence[Sequence[Any]], length: int, domain: Domain
) -> List[Vector]:
    """Basis of span(first) ∩ span(second)"""
    if not first or not second:
        return []
    stacked = list(first) + [[-value for value in vector] for vector in second]
    relations = kernel_basis(from_columns(stacked, length, domain))
    meets = []
    for relation in relations:
        combined = [domain.zero] * length
        for coefficient, vector in zip(relation[: len(first)], first):
            if coefficient:
                combined = [a + coefficient * b for a, b in zip(combined, vector)]
        meets.append(combined)
    return span_basis(meets, length, domain)


def column_space(m: DomainMatrix) -> List[Vector]:
    """Basis of the column space (rref rows of the transpose)"""
    rows, cols = m.shape
    if cols == 0 or rows == 0:
        return []
    return span_basis(columns(m), rows, m.domain)


def complement_units(basis: Sequence[Sequence[Any]], length: int, domain: Domain) -> List[int]:
    """Coordinates whose unit vectors complete a span to the whole space

    These are the non-pivot columns of the rref of ``basis``.
    """
    if not basis:
        return list(range(length))
    _, pivots = rref(matrix(basis, domain, cols=length))
    pivot_set = set(pivots)
    return [c for c in range(length) if c not in pivot_set]


def minimal_polynomial(
    element: Sequence[Any],
    multiply: Callable[[Sequence[Any], Sequence[Any]], Sequence[Any]],
    one: Sequence[Any],
    domain: Domain,
) -> Vector:
    """Monic minimal polynomial of an element of a finite-dimensional unital algebra

    Args:
        element: coordinates of the element
        multiply: the algebra product on coordinate vectors
        one: coordinates of the unit of the (sub)algebra
        domain: the base field

    Returns:
        coefficients, highest degree first

    Raises:
        RuntimeError: no relation among the first dim + 1 powers
    """
    length = len(one)
    powers = [list(one)]
    current = list(one)
    for _ in range(length + 1):
        current = list(multiply(current, element))
        relation = coordinates(current, powers, domain)
        if relation is not None:
            return [domain.one] + [-c for c in reversed(relation)]
        powers.append(current)
    raise RuntimeError("powers of the element never became dependent")


# ---------------------------------------------------------------- sampling


def random_element(domain: Domain, rng: np.random.Generator, radius: int = 9) -> Any:
    """A seeded random scalar: integers in [-radius, radius] over Q, residues over F_p"""
    if domain.is_FiniteField:
        return domain.convert(int(rng.integers(0, int(domain.mod))))
    return domain.convert(int(rng.integers(-radius, radius + 1)))


def random_nonzero(domain: Domain, rng: np.random.Generator, radius: int = 9) -> Any:
    while True:
        value = random_element(domain, rng, radius)
        if value:
            return value


def random_matrix(rows: int, cols: int, domain: Domain, rng: np.random.Generator) -> DomainMatrix:
    return matrix([[random_element(domain, rng) for _ in range(cols)] for _ in range(rows)], domain, cols=cols)


def random_invertible(size: int, domain: Domain, rng: np.random.Generator) -> DomainMatrix:
    while True:
        candidate = random_matrix(size, size, domain, rng)
        if candidate.det():
            return candidate


# ---------------------------------------------------------------- univariate polynomials

_T = Symbol("t")


def to_poly(coeffs: Sequence[Any], domain: Domain) -> Poly:
    """A univariate sympy Poly in t from coefficients listed highest degree first"""
    return Poly([domain.to_sympy(c) for c in coeffs], _T, domain=domain)


def factor_polynomial(coeffs: Sequence[Any], domain: Domain) -> List[Tuple[Poly, int]]:
    """Irreducible factors over the base field with multiplicities"""
    _, factors = to_poly(coeffs, domain).factor_list()
    return factors


def linear_roots(coeffs: Sequence[Any], domain: Domain) -> Tuple[List[Any], bool]:
    """Roots in the base field, and whether an irreducible factor of degree > 1 remains"""
    roots = []
    extension = False
    for factor, _ in factor_polynomial(coeffs, domain):
        if factor.degree() == 1:
            a, b = (domain.from_sympy(c) for c in factor.all_coeffs())
            roots.append(-b / a)
        else:
            extension = True
    return roots, extension


# ---------------------------------------------------------------- parameters


def parameter_symbols(count: int) -> Tuple[Symbol, ...]:
    """The parameters t1..tn"""
    return tuple(Symbol(f"t{i + 1}") for i in range(count))


def parameter_ring(domain: Domain, count: int) -> Domain:
    """K[t1..tn] over a base field"""
    return domain.poly_ring(*parameter_symbols(count))


def parameter_field(domain: Domain, count: int) -> Domain:
    """K(t1..tn) over a base field"""
    return domain.frac_field(*parameter_symbols(count))


def matrix_power(m: DomainMatrix, exponent: int) -> DomainMatrix:
    result = identity(m.shape[0], m.domain)
    for _ in range(exponent):
        result = result * m
    return result


def lift_matrix(m: DomainMatrix, target: Domain) -> DomainMatrix:
    """Embeds a matrix over a base field into a parameter ring or field"""
    if m.domain == target:
        return m
    return matrix([[lift_scalar(target, c, m.domain) for c in row] for row in entries(m)], target, cols=m.shape[1])


def reduce_scalar(value: Any, source: Domain, target: Domain) -> Any:
    """Reduces a rational scalar into a prime field

    Raises:
        ValueError: the denominator vanishes modulo the characteristic
    """
    if source == target:
        return value
    numerator, denominator = int(source.numer(value)), int(source.denom(value))
    if denominator % int(target.mod) == 0:
        raise ValueError(f"denominator {denominator} vanishes modulo {int(target.mod)}")
    return target.convert(numerator) / target.convert(denominator)


def evaluate_polynomial(poly: Any, point: Sequence[Any], domain: Domain) -> Any:
    """Value of a multivariate polynomial over ``domain`` at ``point``"""
    total = domain.zero
    for monom, coefficient in poly.items():
        term = coefficient
        for value, exponent in zip(point, monom):
            if exponent:
                term = term * value**exponent
        total += term
    return total
