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
"""Finite-dimensional commutative algebras: coids, nilradicals and block decompositions"""
from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import Poly
from sympy.polys.domains.domain import Domain
from sympy.polys.matrices import DomainMatrix

from . import scalars
from .forms import BaseChange

logger = logging.getLogger(__name__)

DEFAULT_COID_ATTEMPTS = 12


@dataclass
class StructAlgebra:
    """A unital algebra on K^n given by structure constants

    ``constants[i][j]`` holds the coordinates of e_i e_j.
    """

    dim: int
    constants: List[List[List[Any]]]
    identity: List[Any]
    domain: Domain

    @classmethod
    def from_matrices(
        cls, basis: Sequence[DomainMatrix], domain: Domain, unit: Optional[DomainMatrix] = None
    ) -> "StructAlgebra":
        """The algebra spanned by ``basis`` under matrix multiplication

        Args:
            unit: the unit of the span, the identity matrix when omitted. Corner
                algebras E Mat E have unit E.

        Raises:
            ValueError: the span is not closed or lacks its unit
        """
        vectors = [scalars.flatten(b) for b in basis]
        constants = []
        for a in basis:
            row = []
            for b in basis:
                coords = scalars.coordinates(scalars.flatten(a * b), vectors, domain)
                if coords is None:
                    raise ValueError("matrix span is not closed under multiplication")
                row.append(coords)
            constants.append(row)
        if unit is None:
            unit = scalars.identity(basis[0].shape[0], domain)
        identity = scalars.coordinates(scalars.flatten(unit), vectors, domain)
        if identity is None:
            raise ValueError("matrix span does not contain its unit")
        return cls(len(basis), constants, identity, domain)

    def zero(self) -> List[Any]:
        return [self.domain.zero] * self.dim

    def basis_element(self, index: int) -> List[Any]:
        vector = self.zero()
        vector[index] = self.domain.one
        return vector

    def multiply(self, x: Sequence[Any], y: Sequence[Any]) -> List[Any]:
        result = self.zero()
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if not b:
                    continue
                c = a * b
                for k, v in enumerate(self.constants[i][j]):
                    if v:
                        result[k] += c * v
        return result

    def power(self, x: Sequence[Any], exponent: int, unit: Optional[Sequence[Any]] = None) -> List[Any]:
        result = list(unit if unit is not None else self.identity)
        base = list(x)
        while exponent:
            if exponent & 1:
                result = self.multiply(result, base)
            exponent >>= 1
            if exponent:
                base = self.multiply(base, base)
        return result

    def is_commutative(self) -> bool:
        return all(
            self.constants[i][j] == self.constants[j][i] for i in range(self.dim) for j in range(i + 1, self.dim)
        )

    def is_associative(self) -> bool:
        for i in range(self.dim):
            for j in range(self.dim):
                left = self.constants[i][j]
                for k in range(self.dim):
                    e_k = self.basis_element(k)
                    e_i = self.basis_element(i)
                    if self.multiply(left, e_k) != self.multiply(e_i, self.constants[j][k]):
                        return False
        return True

    def has_identity(self) -> bool:
        return all(
            self.multiply(self.identity, self.basis_element(i)) == self.basis_element(i) for i in range(self.dim)
        )

    def multiplication_matrix(self, x: Sequence[Any]) -> DomainMatrix:
        """The matrix of y -> x y in the standard basis"""
        images = [self.multiply(x, self.basis_element(j)) for j in range(self.dim)]
        return scalars.from_columns(images, self.dim, self.domain)

    def trace(self, x: Sequence[Any]) -> Any:
        m = self.multiplication_matrix(x)
        total = self.domain.zero
        for i in range(self.dim):
            total += scalars.entry(m, i, i)
        return total

    def minimal_polynomial(self, x: Sequence[Any], unit: Optional[Sequence[Any]] = None) -> List[Any]:
        return scalars.minimal_polynomial(x, self.multiply, unit if unit is not None else self.identity, self.domain)


@dataclass
class Coid:
    """A complete set of orthogonal idempotents, as coordinate vectors"""

    idempotents: Tuple[Tuple[Any, ...], ...]
    seed: int = 0
    residue_degrees: Tuple[int, ...] = ()
    certified: bool = True
    extras: Dict[str, Any] = field(default_factory=dict)

    @property
    def length(self) -> int:
        return len(self.idempotents)

    @property
    def requires_extension(self) -> bool:
        degrees = self.extras.get("local_degrees", self.residue_degrees)
        return any(degree > 1 for degree in degrees)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["idempotents"] = [[str(c) for c in e] for e in self.idempotents]
        data["requires_extension"] = self.requires_extension
        return data


def _require_commutative(alg: StructAlgebra):
    if not alg.is_commutative():
        raise ValueError("algebra is not commutative")


def _add(x: Sequence[Any], y: Sequence[Any]) -> List[Any]:
    return [a + b for a, b in zip(x, y)]


def _sub(x: Sequence[Any], y: Sequence[Any]) -> List[Any]:
    return [a - b for a, b in zip(x, y)]


def _scale(c: Any, x: Sequence[Any]) -> List[Any]:
    return [c * a for a in x]


def is_idempotent(alg: StructAlgebra, e: Sequence[Any]) -> bool:
    return alg.multiply(e, e) == list(e)


def check_coid(alg: StructAlgebra, idempotents: Sequence[Sequence[Any]]) -> bool:
    """e_i^2 = e_i != 0, e_i e_j = 0 for i != j and sum e_i = 1"""
    total = alg.zero()
    for i, e in enumerate(idempotents):
        if scalars.is_zero_vector(e) or not is_idempotent(alg, e):
            return False
        for other in idempotents[i + 1 :]:
            if not scalars.is_zero_vector(alg.multiply(e, other)):
                return False
        total = _add(total, e)
    return total == list(alg.identity)


def block_basis(alg: StructAlgebra, e: Sequence[Any]) -> List[List[Any]]:
    """Basis of the ideal eA"""
    return scalars.span_basis([alg.multiply(e, alg.basis_element(i)) for i in range(alg.dim)], alg.dim, alg.domain)


def nilradical(alg: StructAlgebra) -> List[List[Any]]:
    """Basis of the nilpotent elements

    In characteristic 0 this is the radical of the trace form; in characteristic p
    it is the kernel of the F_p-linear map x -> x^(p^k) with p^k >= dim.
    """
    _require_commutative(alg)
    domain = alg.domain
    p = scalars.characteristic(domain)
    if p == 0:
        traces = [alg.trace(alg.basis_element(l)) for l in range(alg.dim)]
        form = [
            [sum((c * t for c, t in zip(alg.constants[i][j], traces) if c), domain.zero) for j in range(alg.dim)]
            for i in range(alg.dim)
        ]
        kernel = scalars.kernel_basis(scalars.matrix(form, domain, cols=alg.dim))
    else:
        exponent = p
        while exponent < alg.dim:
            exponent *= p
        images = [alg.power(alg.basis_element(i), exponent) for i in range(alg.dim)]
        kernel = scalars.kernel_basis(scalars.from_columns(images, alg.dim, domain))
    return scalars.span_basis(kernel, alg.dim, domain)


def _evaluate(alg: StructAlgebra, poly: Poly, x: Sequence[Any], unit: Sequence[Any]) -> List[Any]:
    result = alg.zero()
    for c in poly.all_coeffs():
        result = _add(alg.multiply(result, x), _scale(alg.domain.from_sympy(c), unit))
    return result


def _split_by_minimal_polynomial(
    alg: StructAlgebra, x: Sequence[Any], unit: Sequence[Any]
) -> Optional[Tuple[List[Any], List[Any]]]:
    """Splits the block with unit ``unit`` along the primary factors of x's minimal polynomial"""
    domain = alg.domain
    coeffs = alg.minimal_polynomial(x, unit)
    factors = scalars.factor_polynomial(coeffs, domain)
    if len(factors) < 2:
        return None
    minimal = scalars.to_poly(coeffs, domain)
    base, multiplicity = factors[0]
    primary = base**multiplicity
    cofactor = minimal.quo(primary)
    s, _, h = cofactor.gcdex(primary)
    if h.degree() != 0:
        raise RuntimeError("primary factors of a minimal polynomial are not coprime")
    lifted = (s * cofactor).rem(minimal)
    first = _evaluate(alg, lifted, x, unit)
    second = _sub(unit, first)
    for e in (first, second):
        if scalars.is_zero_vector(e) or not is_idempotent(alg, e):
            raise RuntimeError("Bezout lift did not produce an idempotent")
    return first, second


def _frobenius_fixed_space(alg: StructAlgebra, basis: Sequence[Sequence[Any]]) -> List[List[Any]]:
    """{x in span(basis) : x^p = x} over F_p, one dimension per local block"""
    p = scalars.characteristic(alg.domain)
    images = [_sub(alg.power(b, p), b) for b in basis]
    relations = scalars.kernel_basis(scalars.from_columns(images, alg.dim, alg.domain))
    fixed = []
    for relation in relations:
        vector = alg.zero()
        for c, b in zip(relation, basis):
            if c:
                vector = _add(vector, _scale(c, b))
        fixed.append(vector)
    return fixed


def _residue_degree(alg: StructAlgebra, basis: Sequence[Sequence[Any]], nil: Sequence[Sequence[Any]]) -> int:
    meet = scalars.intersect_spaces(list(basis), list(nil), alg.dim, alg.domain)
    return len(basis) - len(meet)


def _split_block(
    alg: StructAlgebra,
    unit: List[Any],
    nil: Sequence[Sequence[Any]],
    rng: np.random.Generator,
    attempts: int,
) -> Tuple[Optional[Tuple[List[Any], List[Any]]], bool]:
    """Tries to split the block eA; returns (split or None, whether locality is certified)"""
    domain = alg.domain
    basis = block_basis(alg, unit)
    if len(basis) == 1:
        return None, True
    if scalars.characteristic(domain):
        fixed = _frobenius_fixed_space(alg, basis)
        for vector in fixed:
            if not scalars.in_span(vector, [unit], domain):
                return _split_by_minimal_polynomial(alg, vector, unit), True
        return None, True
    quotient_dimension = _residue_degree(alg, basis, nil)
    candidates = [list(b) for b in basis]
    for _ in range(attempts):
        combination = alg.zero()
        for b in basis:
            combination = _add(combination, _scale(scalars.random_element(domain, rng), b))
        candidates.append(combination)
    for x in candidates:
        split = _split_by_minimal_polynomial(alg, x, unit)
        if split is not None:
            return split, True
        (base, _), = scalars.factor_polynomial(alg.minimal_polynomial(x, unit), domain)
        if base.degree() == quotient_dimension:
            return None, True
    logger.warning("could not certify that a block of dimension %d is local", len(basis))
    return None, False


def maximal_coid(alg: StructAlgebra, seed: int = 0, attempts: int = DEFAULT_COID_ATTEMPTS) -> Coid:
    """The unique maximal coid of a commutative algebra over its base field

    Args:
        alg: the algebra
        seed: seed of the random combinations tried in characteristic 0
        attempts: number of random combinations per block

    Returns:
        the coid, with the residue field degree of each block

    Raises:
        ValueError: the algebra is not commutative
    """
    _require_commutative(alg)
    rng = np.random.default_rng(seed)
    nil = nilradical(alg)
    pending = [list(alg.identity)]
    found: List[Tuple[List[Any], int]] = []
    certified = True
    while pending:
        unit = pending.pop()
        split, sure = _split_block(alg, unit, nil, rng, attempts)
        certified = certified and sure
        if split is None:
            found.append((unit, _residue_degree(alg, block_basis(alg, unit), nil)))
        else:
            logger.debug("split a block into pieces of dimension %s", [len(block_basis(alg, e)) for e in split])
            pending.extend(split)
    found.sort(key=lambda item: [str(c) for c in item[0]])
    idempotents = tuple(tuple(e) for e, _ in found)
    if not check_coid(alg, idempotents):
        raise RuntimeError("computed idempotents do not form a coid")
    logger.info("maximal coid of length %d", len(idempotents))
    return Coid(idempotents, seed, tuple(degree for _, degree in found), certified)


def block_algebra(alg: StructAlgebra, e: Sequence[Any]) -> Tuple[StructAlgebra, List[List[Any]]]:
    """The algebra eA in its rref basis, with that basis"""
    basis = block_basis(alg, e)
    constants = []
    for a in basis:
        row = []
        for b in basis:
            coords = scalars.coordinates(alg.multiply(a, b), basis, alg.domain)
            if coords is None:
                raise RuntimeError("block is not closed under multiplication")
            row.append(coords)
        constants.append(row)
    unit = scalars.coordinates(list(e), basis, alg.domain)
    return StructAlgebra(len(basis), constants, unit, alg.domain), basis


def block_decompose(
    alg: StructAlgebra, coid: Optional[Coid] = None, seed: int = 0
) -> List[Tuple[Tuple[Any, ...], StructAlgebra]]:
    """Pairs (e_i, e_i A) over the maximal coid"""
    coid = coid or maximal_coid(alg, seed=seed)
    blocks = [(e, block_algebra(alg, e)[0]) for e in coid.idempotents]
    if sum(block.dim for _, block in blocks) != alg.dim:
        raise RuntimeError("block dimensions do not add up")
    return blocks


def coid_product(alg: StructAlgebra, first: Coid, second: Coid) -> Coid:
    """The coid of nonzero products e_i f_j, which refines both"""
    products = []
    for e in first.idempotents:
        for f in second.idempotents:
            product = alg.multiply(e, f)
            if not scalars.is_zero_vector(product):
                products.append(tuple(product))
    return Coid(tuple(products), first.seed)


def group_coid(coid: Coid, partition: Sequence[Sequence[int]]) -> Coid:
    """Sums the idempotents of each part

    The residue degree of a grouped member is the sum over its part, the
    dimension of its residue algebra. The local degrees stay in ``extras``.

    Raises:
        ValueError: the parts do not partition the indices
    """
    flat = sorted(i for part in partition for i in part)
    if flat != list(range(coid.length)) or any(not part for part in partition):
        raise ValueError(f"{partition} is not a partition of 0..{coid.length - 1}")
    grouped = []
    for part in partition:
        total = list(coid.idempotents[part[0]])
        for i in part[1:]:
            total = _add(total, coid.idempotents[i])
        grouped.append(tuple(total))
    degrees: Tuple[int, ...] = ()
    extras: Dict[str, Any] = {"partition": [list(part) for part in partition]}
    if coid.residue_degrees:
        degrees = tuple(sum(coid.residue_degrees[i] for i in part) for part in partition)
        extras["local_degrees"] = list(coid.extras.get("local_degrees", coid.residue_degrees))
    return Coid(tuple(grouped), coid.seed, degrees, coid.certified, extras)


def idempotent_matrices(basis: Sequence[DomainMatrix], coid: Coid, domain: Domain) -> List[DomainMatrix]:
    """The idempotents of a matrix algebra's coid as matrices"""
    size = basis[0].shape[0]
    result = []
    for e in coid.idempotents:
        m = scalars.zeros(size, size, domain)
        for c, b in zip(e, basis):
            if c:
                m = m + b * c
        result.append(m)
    return result


def simultaneous_diagonalize(idempotents: Sequence[DomainMatrix]) -> BaseChange:
    """P whose columns run through bases of im E_1, im E_2, ...

    P^-1 E_i P is then the 0/1 diagonal matrix of the i-th consecutive block.

    Raises:
        ValueError: the matrices are not a coid
    """
    if not idempotents:
        raise ValueError("empty coid")
    domain = idempotents[0].domain
    size = idempotents[0].shape[0]
    total = scalars.zeros(size, size, domain)
    for i, e in enumerate(idempotents):
        if e.is_zero_matrix or not scalars.is_idempotent(e):
            raise ValueError("not a coid: a member is zero or not idempotent")
        for other in idempotents[i + 1 :]:
            if not (e * other).is_zero_matrix:
                raise ValueError("not a coid: members are not orthogonal")
        total = total + e
    if scalars.entries(total) != scalars.entries(scalars.identity(size, domain)):
        raise ValueError("not a coid: members do not sum to the identity")
    columns = [column for e in idempotents for column in scalars.column_space(e)]
    return BaseChange(scalars.from_columns(columns, size, domain))
