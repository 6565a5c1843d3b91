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
"""The algebra M_f, the map gamma_f and their graded and restricted relatives"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy.polys.domains.domain import Domain
from sympy.polys.matrices import DomainMatrix

from . import scalars
from .apolarity import ann_graded, generator_counts, hilbert_function, multiples, partials_space, perp_forms
from .artinian import StructAlgebra
from .forms import (
    DiffOp,
    DPForm,
    contract,
    exponent_vectors,
    gradient,
    hessian,
    monomial_count,
    monomial_positions,
    unit_exponent,
)

logger = logging.getLogger(__name__)

OpGrid = Tuple[Tuple[DiffOp, ...], ...]

GRADED_MAX_VARS = 5
GRADED_MAX_DEGREE = 2


@dataclass
class MatrixAlgebraSpace:
    """A space of size x size matrices given by an rref-canonical basis"""

    size: int
    basis: Tuple[DomainMatrix, ...]
    domain: Domain
    closed_under_mult: bool = False
    commutative: bool = False
    extras: Dict[str, Any] = field(default_factory=dict)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def vectors(self) -> List[List[Any]]:
        return [scalars.flatten(b) for b in self.basis]

    def contains(self, m: DomainMatrix) -> bool:
        return scalars.in_span(scalars.flatten(m), self.vectors(), self.domain)

    def coordinates(self, m: DomainMatrix) -> Optional[List[Any]]:
        return scalars.coordinates(scalars.flatten(m), self.vectors(), self.domain)

    def element(self, coords: Sequence[Any]) -> DomainMatrix:
        result = scalars.zeros(self.size, self.size, self.domain)
        for c, b in zip(coords, self.basis):
            if c:
                result = result + b * c
        return result

    def structure_algebra(self) -> StructAlgebra:
        """The basis structure constants; restricted spaces take E as unit"""
        unit = self.extras.get("idempotent")
        if unit is not None:
            unit = scalars.matrix(unit, self.domain)
        return StructAlgebra.from_matrices(self.basis, self.domain, unit=unit)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "size": self.size,
            "dimension": self.dimension,
            "basis": [scalars.entries(b) for b in self.basis],
            "closed_under_mult": self.closed_under_mult,
            "commutative": self.commutative,
            "extras": dict(self.extras),
        }


@dataclass
class GradedMatrixSpace:
    """A basis of M^f_e, matrices with entries in R_e making A ∂∂ᵀf symmetric"""

    degree: int
    size: int
    basis: Tuple[OpGrid, ...]
    domain: Domain

    @property
    def dimension(self) -> int:
        return len(self.basis)


@dataclass
class ContractionModules:
    """F_e = R_e(f) inside G_e = im gamma^f_e, for e = 0..d"""

    form: DPForm
    f_spaces: Dict[int, List[DPForm]]
    g_spaces: Dict[int, List[DPForm]]

    def quotient_dimension(self, e: int) -> int:
        return len(self.g_spaces[e]) - len(self.f_spaces[e])

    def to_dict(self):
        return {
            "F": {e: len(v) for e, v in self.f_spaces.items()},
            "G": {e: len(v) for e, v in self.g_spaces.items()},
        }


# ---------------------------------------------------------------- linear systems


def _symmetrizing_kernel(
    grid: Sequence[Sequence[DPForm]], num_vars: int, domain: Domain, unknown_degree: int = 0
) -> List[List[Any]]:
    """Canonical basis of {A : A . grid is symmetric}, A with entries in R_{unknown_degree}

    Unknown (i, k, gamma) is the coefficient of d^gamma in A_ik, and its column is
    (i * size + k) * dim R_e + position(gamma).
    """
    size = len(grid)
    gammas = exponent_vectors(num_vars, unknown_degree)
    width = len(gammas)
    unknowns = size * size * width
    rows = []
    for i in range(size):
        for j in range(i + 1, size):
            equations: Dict[Tuple[int, ...], Dict[int, Any]] = {}
            for k in range(size):
                for column, sign, entry in (
                    ((i * size + k) * width, 1, grid[k][j]),
                    ((j * size + k) * width, -1, grid[k][i]),
                ):
                    for g, gamma in enumerate(gammas):
                        for alpha, c in entry.terms.items():
                            mu = tuple(a - b for a, b in zip(alpha, gamma))
                            if min(mu) < 0:
                                continue
                            equation = equations.setdefault(mu, {})
                            value = c if sign > 0 else -c
                            equation[column + g] = equation.get(column + g, domain.zero) + value
            for equation in equations.values():
                row = [domain.zero] * unknowns
                for column, value in equation.items():
                    row[column] = value
                rows.append(row)
    kernel = scalars.kernel_basis(scalars.matrix(rows, domain, cols=unknowns))
    return scalars.span_basis(kernel, unknowns, domain)


def _check_closure(basis: Sequence[DomainMatrix], domain: Domain) -> Tuple[bool, bool]:
    vectors = [scalars.flatten(b) for b in basis]
    closed = all(
        scalars.in_span(scalars.flatten(a * b), vectors, domain) for a in basis for b in basis
    )
    commutative = all(
        scalars.entries(a * b) == scalars.entries(b * a) for i, a in enumerate(basis) for b in basis[i + 1 :]
    )
    return closed, commutative


def _require_nonzero(f: DPForm):
    if f.is_zero():
        raise ValueError("zero form")


def _matrix_rows(m: DomainMatrix) -> List[List[Any]]:
    return scalars.entries(m)


def combine(m: DomainMatrix, forms: Sequence[DPForm]) -> List[DPForm]:
    """The column m . (forms), with forms as a column of equal-degree forms"""
    result = []
    for row in _matrix_rows(m):
        total = DPForm.zero(forms[0].num_vars, forms[0].degree, forms[0].domain)
        for c, w in zip(row, forms):
            if c and not w.is_zero():
                total = total + w.scale(c)
        result.append(total)
    return result


def in_mf(f: DPForm, a: DomainMatrix) -> bool:
    """Whether A ∂∂ᵀf is symmetric"""
    h = hessian(f)
    size = f.num_vars
    if a.shape != (size, size):
        raise ValueError(f"expected a {size}x{size} matrix, got {a.shape}")
    ah = [combine(a, [h[k][j] for k in range(size)]) for j in range(size)]
    return all(ah[j][i] == ah[i][j] for i in range(size) for j in range(i + 1, size))


def integrate_gradient(vector: Sequence[DPForm], num_vars: int, degree: int, domain: Domain) -> DPForm:
    """The unique g of the given degree with ∂g = vector

    Raises:
        ValueError: the vector is not a gradient
    """
    if degree < 1:
        raise ValueError("only forms of positive degree are determined by their gradient")
    terms = {}
    for alpha in exponent_vectors(num_vars, degree):
        i = next(index for index, a in enumerate(alpha) if a)
        beta = tuple(a - (1 if index == i else 0) for index, a in enumerate(alpha))
        terms[alpha] = vector[i].coefficient(beta)
    g = DPForm(num_vars, degree, terms, domain)
    if any(p != v for p, v in zip(gradient(g), vector)):
        raise ValueError("vector of forms is not a gradient")
    return g


# ---------------------------------------------------------------- M_f and gamma_f


def compute_mf(f: DPForm) -> MatrixAlgebraSpace:
    """M_f = {A : A ∂∂ᵀf symmetric}

    Raises:
        ValueError: zero form
        RuntimeError: closure under products or commutativity fails where it must hold
    """
    _require_nonzero(f)
    r, d, domain = f.num_vars, f.degree, f.domain
    logger.info("computing M_f for r=%d d=%d", r, d)
    kernel = _symmetrizing_kernel(hessian(f), r, domain)
    basis = tuple(scalars.unflatten(v, r, domain) for v in kernel)
    closed, commutative = _check_closure(basis, domain)
    if d >= 3 and not closed:
        raise RuntimeError("M_f is not closed under multiplication")
    if d >= 3 and not commutative and not ann_graded(f, 1).dimension:
        raise RuntimeError("M_f is not commutative although ann(f)_1 = 0")
    return MatrixAlgebraSpace(r, basis, domain, closed_under_mult=closed, commutative=commutative)


def expected_mf_dimension(f: DPForm) -> int:
    """1 + beta_{1d} + r beta_{11}"""
    counts = generator_counts(f)
    return 1 + counts.get(f.degree, 0) + f.num_vars * counts.get(1, 0)


def gamma_f(f: DPForm, a: DomainMatrix, check: bool = True) -> DPForm:
    """The unique g in 𝓡_d with ∂g = A∂f

    Raises:
        ValueError: d < 1, or A is not in M_f
    """
    if f.degree < 1:
        raise ValueError("gamma_f needs a form of positive degree")
    if check and not in_mf(f, a):
        raise ValueError("matrix is not in M_f")
    image = combine(a, gradient(f))
    try:
        return integrate_gradient(image, f.num_vars, f.degree, f.domain)
    except ValueError:
        raise RuntimeError("A∂f is not a gradient for a member of M_f") from None


def gamma_kernel(f: DPForm) -> MatrixAlgebraSpace:
    """ker gamma_f = {A : A∂f = 0}"""
    r, domain = f.num_vars, f.domain
    grad = gradient(f)
    positions = monomial_positions(r, f.degree - 1)
    rows = []
    for i in range(r):
        for beta, position in positions.items():
            row = [domain.zero] * (r * r)
            for k in range(r):
                row[i * r + k] = grad[k].coefficient(beta)
            rows.append(row)
    kernel = scalars.span_basis(scalars.kernel_basis(scalars.matrix(rows, domain, cols=r * r)), r * r, domain)
    return MatrixAlgebraSpace(r, tuple(scalars.unflatten(v, r, domain) for v in kernel), domain)


def gamma_image(f: DPForm, mf: Optional[MatrixAlgebraSpace] = None) -> List[DPForm]:
    """A basis of gamma_f(M_f)"""
    mf = mf or compute_mf(f)
    r, d, domain = f.num_vars, f.degree, f.domain
    images = [gamma_f(f, b, check=False).to_vector() for b in mf.basis]
    return [DPForm.from_vector(v, r, d, domain) for v in scalars.span_basis(images, monomial_count(r, d), domain)]


def ann_linear_multiples_perp(f: DPForm, e: int = 0) -> List[DPForm]:
    """(R_1 ann(f)_{d-e-1})^⊥ inside 𝓡_{d-e}"""
    r, domain = f.num_vars, f.domain
    degree = f.degree - e
    ops = multiples(ann_graded(f, degree - 1).basis, degree)
    vectors = scalars.span_basis(ops, monomial_count(r, degree), domain)
    ops = [DiffOp.from_vector(v, r, degree, domain) for v in vectors]
    return perp_forms(ops, r, degree, domain)


# ---------------------------------------------------------------- restriction to E


def _support_vectors(f: DPForm) -> List[List[Any]]:
    """The linear forms spanning R_{d-1}(f), as coefficient vectors"""
    r, domain = f.num_vars, f.domain
    return [
        [g.coefficient(unit_exponent(r, i)) for i in range(r)]
        for g in (contract(DiffOp.monomial(mu, domain), f) for mu in exponent_vectors(r, f.degree - 1))
    ]


def support_space(f: DPForm) -> List[List[Any]]:
    """rref basis of R_{d-1}(f) in coordinates of x1..xr"""
    return scalars.span_basis(_support_vectors(f), f.num_vars, f.domain)


def support_dimension(f: DPForm) -> int:
    return len(support_space(f))


def choose_support_idempotent(f: DPForm) -> DomainMatrix:
    """An idempotent E with E∂f = ∂f and rank E = dim R_{d-1}(f)

    Its image is R_{d-1}(f) and its kernel is spanned by the unit vectors of the
    non-pivot coordinates.
    """
    _require_nonzero(f)
    r, domain = f.num_vars, f.domain
    support = support_space(f)
    complement = scalars.complement_units(support, r, domain)
    if not complement:
        return scalars.identity(r, domain)
    units = [[domain.one if i == c else domain.zero for i in range(r)] for c in complement]
    change = scalars.from_columns(support + units, r, domain)
    diagonal = scalars.matrix(
        [[domain.one if i == j and i < len(support) else domain.zero for j in range(r)] for i in range(r)],
        domain,
    )
    return change * diagonal * change.inv()


def mf_restricted(f: DPForm, e: DomainMatrix, mf: Optional[MatrixAlgebraSpace] = None) -> MatrixAlgebraSpace:
    """M_f^E = M_f ∩ E Mat E

    Raises:
        ValueError: E is not an idempotent of M_f fixing ∂f with rank dim R_{d-1}(f)
        RuntimeError: dim M_f^E + dim ker gamma_f differs from dim M_f
    """
    r, domain = f.num_vars, f.domain
    if not scalars.is_idempotent(e):
        raise ValueError("E is not idempotent")
    mf = mf or compute_mf(f)
    if not mf.contains(e):
        raise ValueError("E is not in M_f")
    if combine(e, gradient(f)) != gradient(f):
        raise ValueError("E does not fix ∂f")
    if scalars.rank(e) != support_dimension(f):
        raise ValueError("rank of E differs from dim R_{d-1}(f)")
    corner = [
        scalars.flatten(e * scalars.unit_matrix(r, i, j, domain) * e) for i in range(r) for j in range(r)
    ]
    meet = scalars.intersect_spaces(mf.vectors(), scalars.span_basis(corner, r * r, domain), r * r, domain)
    basis = tuple(scalars.unflatten(v, r, domain) for v in meet)
    kernel_dimension = gamma_kernel(f).dimension
    if len(basis) + kernel_dimension != mf.dimension:
        raise RuntimeError(
            f"dim M_f^E = {len(basis)} and dim ker gamma = {kernel_dimension} do not add up to {mf.dimension}"
        )
    closed, commutative = _check_closure(basis, domain)
    return MatrixAlgebraSpace(
        r, basis, domain, closed_under_mult=closed, commutative=commutative, extras={"idempotent": scalars.entries(e)}
    )


def block_truncation(f: DPForm, matrices: Sequence[DomainMatrix], s: int) -> DomainMatrix:
    """Keeps the first s rows of A_0 when A_1..A_n vanish there and span A_0's other rows

    Args:
        f: the form with A_0..A_n in M_f
        matrices: A_0, A_1, ..., A_n
        s: number of leading rows kept, 0 < s < r

    Returns:
        B, the first s rows of A_0 over zero rows, which lies in M_f

    Raises:
        ValueError: a hypothesis fails
        RuntimeError: B is not in M_f
    """
    r, domain = f.num_vars, f.domain
    if not 0 < s < r:
        raise ValueError(f"s must lie in 1..{r - 1}")
    if not matrices:
        raise ValueError("need at least A_0")
    for a in matrices:
        if not in_mf(f, a):
            raise ValueError("every A_i must lie in M_f")
    head, *rest = [scalars.entries(a) for a in matrices]
    for rows in rest:
        if any(not scalars.is_zero_vector(rows[j]) for j in range(s)):
            raise ValueError("A_i must vanish in the first s rows for i >= 1")
    for j in range(s, r):
        if not scalars.in_span(head[j], [rows[j] for rows in rest], domain):
            raise ValueError(f"row {j + 1} of A_0 is not spanned by the rows of A_1..A_n")
    truncated = [head[j] if j < s else [domain.zero] * r for j in range(r)]
    b = scalars.matrix(truncated, domain)
    if not in_mf(f, b):
        raise RuntimeError("truncated matrix is not in M_f")
    return b


def gf_algebra(f: DPForm) -> Tuple[StructAlgebra, List[DPForm]]:
    """G_f = gamma_f(M_f) with gamma(A) * gamma(B) = gamma(AB); f is its identity

    Returns:
        the structure-constant algebra and the basis of forms it is written in
    """
    e = choose_support_idempotent(f)
    restricted = mf_restricted(f, e)
    forms = [gamma_f(f, b, check=False) for b in restricted.basis]
    vectors = [g.to_vector() for g in forms]
    domain = f.domain
    constants = []
    for a in restricted.basis:
        row = []
        for b in restricted.basis:
            product = gamma_f(f, a * b, check=False).to_vector()
            coords = scalars.coordinates(product, vectors, domain)
            if coords is None:
                raise RuntimeError("G_f is not closed under the star product")
            row.append(coords)
        constants.append(row)
    unit = scalars.coordinates(f.to_vector(), vectors, domain)
    return StructAlgebra(len(forms), constants, unit, domain), forms


# ---------------------------------------------------------------- graded versions


def _check_graded_caps(f: DPForm, e: int, max_vars: int, max_degree: int):
    if not 0 <= e < f.degree:
        raise ValueError(f"degree {e} outside 0..{f.degree - 1}")
    if f.num_vars > max_vars or e > max_degree:
        raise ValueError(f"graded matrix spaces are limited to r <= {max_vars} and e <= {max_degree}")


def _grid_from_vector(vector: Sequence[Any], size: int, num_vars: int, e: int, domain: Domain) -> OpGrid:
    width = monomial_count(num_vars, e)
    return tuple(
        tuple(
            DiffOp.from_vector(vector[(i * size + k) * width : (i * size + k + 1) * width], num_vars, e, domain)
            for k in range(size)
        )
        for i in range(size)
    )


def grid_apply(grid: OpGrid, forms: Sequence[DPForm]) -> List[DPForm]:
    """The column A(w) with (A w)_i = sum_k A_ik(w_k)"""
    result = []
    for row in grid:
        total = None
        for op, w in zip(row, forms):
            image = contract(op, w)
            total = image if total is None else total + image
        result.append(total)
    return result


def grid_product(first: OpGrid, second: OpGrid) -> OpGrid:
    size = len(first)
    return tuple(
        tuple(_sum_ops([first[i][k] * second[k][j] for k in range(size)]) for j in range(size)) for i in range(size)
    )


def grid_combination(coeffs: Sequence[Any], grids: Sequence[OpGrid]) -> OpGrid:
    size = len(grids[0])
    return tuple(
        tuple(_sum_ops([g[i][j].scale(c) for c, g in zip(coeffs, grids)]) for j in range(size)) for i in range(size)
    )


def _sum_ops(ops: Sequence[DiffOp]) -> DiffOp:
    total = ops[0]
    for op in ops[1:]:
        total = total + op
    return total


def graded_mf(
    f: DPForm, e: int, max_vars: int = GRADED_MAX_VARS, max_degree: int = GRADED_MAX_DEGREE
) -> GradedMatrixSpace:
    """M^f_e, matrices over R_e with A ∂∂ᵀf symmetric

    Raises:
        ValueError: e outside 0..d-1 or beyond the size caps
    """
    _require_nonzero(f)
    _check_graded_caps(f, e, max_vars, max_degree)
    r, domain = f.num_vars, f.domain
    kernel = _symmetrizing_kernel(hessian(f), r, domain, unknown_degree=e)
    basis = tuple(_grid_from_vector(v, r, r, e, domain) for v in kernel)
    return GradedMatrixSpace(e, r, basis, domain)


def in_graded_mf(f: DPForm, grid: OpGrid) -> bool:
    image = grid_apply(grid, gradient(f))
    return all(
        contract(DiffOp.variable(j, f.num_vars, f.domain), image[i])
        == contract(DiffOp.variable(i, f.num_vars, f.domain), image[j])
        for i in range(f.num_vars)
        for j in range(i + 1, f.num_vars)
    )


def gamma_graded(f: DPForm, e: int, grid: OpGrid, check: bool = True) -> DPForm:
    """The unique g in 𝓡_{d-e} with ∂g = A∂f for A in M^f_e

    Raises:
        ValueError: A is not in M^f_e
    """
    if check and not in_graded_mf(f, grid):
        raise ValueError("matrix is not in M^f_e")
    return integrate_gradient(grid_apply(grid, gradient(f)), f.num_vars, f.degree - e, f.domain)


def graded_gamma_dimensions(f: DPForm, e: int, space: Optional[GradedMatrixSpace] = None) -> Tuple[int, int]:
    """(dim im gamma^f_e, dim ker gamma^f_e) by direct linear algebra"""
    space = space or graded_mf(f, e)
    images = [gamma_graded(f, e, b, check=False).to_vector() for b in space.basis]
    image_dimension = scalars.span_dimension(images, monomial_count(f.num_vars, f.degree - e), f.domain)
    return image_dimension, space.dimension - image_dimension


def expected_graded_gamma_dimensions(f: DPForm, e: int) -> Tuple[int, int]:
    """(H(d-e) + beta_{1,d-e}, r e C(r-1+e, e+1) + r dim ann(f)_{e+1})"""
    r, d = f.num_vars, f.degree
    hilbert = hilbert_function(f)
    counts = generator_counts(f)
    image = hilbert[d - e] + counts.get(d - e, 0)
    kernel = r * e * math.comb(r - 1 + e, e + 1) + r * ann_graded(f, e + 1).dimension
    return image, kernel


def fg_modules(f: DPForm) -> ContractionModules:
    """F_e = R_e(f) and G_e = (R_1 ann(f)_{d-e-1})^⊥ for e = 0..d"""
    _require_nonzero(f)
    f_spaces = {e: partials_space(f, e) for e in range(f.degree + 1)}
    g_spaces = {e: ann_linear_multiples_perp(f, e) for e in range(f.degree + 1)}
    for e in range(f.degree + 1):
        g_vectors = [g.to_vector() for g in g_spaces[e]]
        if not all(scalars.in_span(h.to_vector(), g_vectors, f.domain) for h in f_spaces[e]):
            raise RuntimeError(f"F_{e} is not contained in G_{e}")
    return ContractionModules(f, f_spaces, g_spaces)


def _graded_lift(f: DPForm, e: int, g: DPForm) -> Tuple[OpGrid, List[OpGrid]]:
    """A matrix A in M^f_e with gamma(A) = g, and a basis of ker gamma^f_e"""
    space = graded_mf(f, e)
    length = monomial_count(f.num_vars, f.degree - e)
    images = [gamma_graded(f, e, b, check=False).to_vector() for b in space.basis]
    system = scalars.from_columns(images, length, f.domain)
    coords = scalars.solve(system, g.to_vector())
    if coords is None:
        raise ValueError(f"form is not in G_{e}")
    kernel = [grid_combination(v, space.basis) for v in scalars.kernel_basis(system)]
    return grid_combination(coords, space.basis), kernel


def star(f: DPForm, g: DPForm, a: int, h: DPForm, b: int) -> DPForm:
    """g * h = gamma^f_{a+b}(AB) for lifts A of g in M^f_a and B of h in M^f_b

    Raises:
        ValueError: a + b > d - 3, or g, h are not in G_a, G_b
        RuntimeError: the product depends on the chosen lifts
    """
    if a < 0 or b < 0 or a + b > f.degree - 3:
        raise ValueError(f"star product needs a + b <= d - 3, got a={a} b={b} d={f.degree}")
    lift_g, kernel_g = _graded_lift(f, a, g)
    lift_h, kernel_h = _graded_lift(f, b, h)
    product = gamma_graded(f, a + b, grid_product(lift_g, lift_h), check=False)
    if kernel_g:
        shifted = grid_combination([f.domain.one, f.domain.one], [lift_g, kernel_g[0]])
        if gamma_graded(f, a + b, grid_product(shifted, lift_h), check=False) != product:
            raise RuntimeError("star product depends on the lift of the first factor")
    if kernel_h:
        shifted = grid_combination([f.domain.one, f.domain.one], [lift_h, kernel_h[0]])
        if gamma_graded(f, a + b, grid_product(lift_g, shifted), check=False) != product:
            raise RuntimeError("star product depends on the lift of the second factor")
    return product


def mfd(f: DPForm, e: int) -> MatrixAlgebraSpace:
    """M_{f,D} = {A : A (D Dᵀ f) symmetric} for D the monomial basis of R_e

    Raises:
        ValueError: e < 1
        RuntimeError: closure fails although d >= 3e
    """
    _require_nonzero(f)
    if e < 1:
        raise ValueError("M_{f,D} needs e >= 1")
    r, d, domain = f.num_vars, f.degree, f.domain
    monomials = exponent_vectors(r, e)
    grid = [
        [contract(DiffOp.monomial(tuple(x + y for x, y in zip(p, q)), domain), f) for q in monomials]
        for p in monomials
    ]
    size = len(monomials)
    kernel = _symmetrizing_kernel(grid, r, domain)
    basis = tuple(scalars.unflatten(v, size, domain) for v in kernel)
    closed, commutative = _check_closure(basis, domain)
    if d >= 3 * e and not closed:
        raise RuntimeError("M_{f,D} is not closed under multiplication")
    if d >= 3 * e and not ann_graded(f, e).dimension and not commutative:
        raise RuntimeError("M_{f,D} is not commutative although ann(f)_e = 0")
    return MatrixAlgebraSpace(size, basis, domain, closed_under_mult=closed, commutative=commutative, extras={"e": e})
