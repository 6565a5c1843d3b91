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
"""Regular splittings: extraction from the coid of M_f^E, verification and grouping"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix

from ..algebra import scalars
from ..algebra.apolarity import HilbertFunction, ann_graded, generator_counts, hilbert_function
from ..algebra.artinian import DEFAULT_COID_ATTEMPTS, Coid, group_coid, idempotent_matrices, maximal_coid
from ..algebra.forms import DPForm, format_form, gradient, monomial_count, power_of_linear_form
from ..algebra.matrix_algebra import (
    MatrixAlgebraSpace,
    choose_support_idempotent,
    combine,
    compute_mf,
    gamma_f,
    mf_restricted,
    support_space,
)

logger = logging.getLogger(__name__)


@dataclass
class Component:
    """One additive component g_i = gamma_f(E_i) of a splitting"""

    form: DPForm
    idempotent: DomainMatrix
    hilbert: HilbertFunction
    support_dimension: int
    block_basis: Optional[Tuple[DomainMatrix, ...]] = None

    @property
    def block_dimension(self) -> Optional[int]:
        """dim M_f^E E_i, the block algebra this component comes from"""
        return None if self.block_basis is None else len(self.block_basis)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "form": format_form(self.form),
            "idempotent": _matrix_text(self.idempotent),
            "hilbert": self.hilbert.to_list(),
            "support_dimension": self.support_dimension,
            "block_dimension": self.block_dimension,
            "block_basis": None if self.block_basis is None else [_matrix_text(b) for b in self.block_basis],
        }


def _matrix_text(m: DomainMatrix) -> List[List[str]]:
    return [[str(c) for c in row] for row in scalars.entries(m)]


@dataclass
class SplittingReport:
    """f = g_1 + ... + g_n with the idempotents E_i of M_f^E"""

    form: DPForm
    components: List[Component]
    coid: Optional[Coid] = None
    extras: Dict[str, Any] = field(default_factory=dict)

    @property
    def length(self) -> int:
        return len(self.components)

    @property
    def forms(self) -> List[DPForm]:
        return [c.form for c in self.components]

    @property
    def idempotents(self) -> List[DomainMatrix]:
        return [c.idempotent for c in self.components]

    @property
    def support_dimensions(self) -> List[int]:
        return [c.support_dimension for c in self.components]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "form": format_form(self.form),
            "length": self.length,
            "components": [c.to_dict() for c in self.components],
            "coid": self.coid.to_dict() if self.coid else None,
            "extras": dict(self.extras),
        }


@dataclass
class SplittingCheck:
    """Outcome of :func:`verify_regular_splitting`; falsy when any check failed"""

    ok: bool
    diagnostics: List[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def _make_component(
    g: DPForm, e: DomainMatrix, block: Optional[Sequence[DomainMatrix]] = None
) -> Component:
    basis = None if block is None else tuple(block)
    return Component(g, e, hilbert_function(g), len(support_space(g)), basis)


def support_projections(f: DPForm, components: Sequence[DPForm]) -> List[DomainMatrix]:
    """Idempotents E_i with E_i∂f = ∂g_i for a claimed splitting f = Σ g_i

    E_i projects onto R_{d-1}(g_i) along the other supports and a fixed
    coordinate complement of their sum.

    Raises:
        ValueError: the supports are dependent, or E_i∂f differs from ∂g_i
    """
    r, domain = f.num_vars, f.domain
    supports = [support_space(g) for g in components]
    stacked = [v for support in supports for v in support]
    if scalars.span_dimension(stacked, r, domain) != len(stacked):
        raise ValueError("supports of the components are not independent")
    complement = scalars.complement_units(stacked, r, domain)
    change = scalars.from_columns(stacked + [scalars.unit_vector(r, c, domain) for c in complement], r, domain)
    inverse = change.inv()
    projections, start = [], 0
    for g, support in zip(components, supports):
        diagonal = scalars.matrix(
            [
                [domain.one if i == j and start <= i < start + len(support) else domain.zero for j in range(r)]
                for i in range(r)
            ],
            domain,
        )
        e = change * diagonal * inverse
        if combine(e, gradient(f)) != gradient(g):
            raise ValueError("E_i∂f differs from ∂g_i")
        projections.append(e)
        start += len(support)
    return projections


def _split_quadric(f: DPForm) -> List[DPForm]:
    """Diagonalizes the Gram matrix of a quadric by symmetric elimination"""
    r, domain = f.num_vars, f.domain
    if scalars.characteristic(domain) == 2:
        raise ValueError("quadrics are only split in characteristic other than 2")
    gram = [[f.coefficient(tuple(int(k == i) + int(k == j) for k in range(r))) for j in range(r)] for i in range(r)]
    components = []
    while True:
        pivot = _quadric_pivot(gram, domain)
        if pivot is None:
            break
        gv = [sum((gram[i][j] * pivot[j] for j in range(r)), domain.zero) for i in range(r)]
        value = sum((pivot[i] * gv[i] for i in range(r)), domain.zero)
        coeffs = [c / value for c in gv]
        components.append(power_of_linear_form(coeffs, 2, domain).scale(value))
        gram = [[gram[i][j] - gv[i] * gv[j] / value for j in range(r)] for i in range(r)]
    return components


def _quadric_pivot(gram: List[List[Any]], domain) -> Optional[List[Any]]:
    r = len(gram)
    for i in range(r):
        if gram[i][i]:
            return scalars.unit_vector(r, i, domain)
    for i in range(r):
        for j in range(i + 1, r):
            if gram[i][j]:
                v = scalars.unit_vector(r, i, domain)
                v[j] = domain.one
                return v
    return None


def regular_split(
    f: DPForm, seed: int = 0, attempts: int = DEFAULT_COID_ATTEMPTS, verify: bool = True
) -> SplittingReport:
    """The unique maximal regular splitting of f

    Components are gamma_f(E_i) for the maximal coid {E_i} of M_f^E, where E is
    an idempotent fixing ∂f whose image is R_{d-1}(f). Quadrics are split by
    symmetric elimination instead, since M_f is no algebra in degree 2.

    Args:
        f: a nonzero form of degree at least 2
        seed: seed of the coid search
        attempts: random combinations tried per block in characteristic 0
        verify: re-check the result with :func:`verify_regular_splitting`

    Returns:
        the splitting report

    Raises:
        ValueError: d <= 1 or f = 0
        RuntimeError: the computed splitting fails verification
    """
    if f.is_zero():
        raise ValueError("zero form")
    if f.degree <= 1:
        raise ValueError(f"regular splitting needs d >= 2, got {f.degree}")
    logger.info("splitting a form with r=%d d=%d", f.num_vars, f.degree)
    if f.degree == 2:
        forms = _split_quadric(f)
        idempotents = support_projections(f, forms)
        report = SplittingReport(f, [_make_component(g, e) for g, e in zip(forms, idempotents)])
    else:
        e = choose_support_idempotent(f)
        restricted = mf_restricted(f, e)
        coid = maximal_coid(restricted.structure_algebra(), seed=seed, attempts=attempts)
        idempotents = idempotent_matrices(restricted.basis, coid, f.domain)
        blocks = [block_basis(restricted, ei) for ei in idempotents]
        dimensions = [len(block) for block in blocks]
        if sum(dimensions) != restricted.dimension:
            raise RuntimeError(f"block algebras of dimensions {dimensions} do not add up to {restricted.dimension}")
        components = [
            _make_component(gamma_f(f, ei, check=False), ei, block) for ei, block in zip(idempotents, blocks)
        ]
        report = SplittingReport(f, components, coid, {"mf_restricted_dimension": restricted.dimension})
    if verify:
        check = verify_regular_splitting(f, report.forms)
        if not check:
            raise RuntimeError(f"computed splitting failed verification: {check.diagnostics}")
    logger.info("maximal regular splitting has %d components", report.length)
    return report


def block_basis(space: MatrixAlgebraSpace, e: DomainMatrix) -> List[DomainMatrix]:
    """rref basis of the block algebra space * e"""
    size, domain = space.size, space.domain
    vectors = scalars.span_basis([scalars.flatten(b * e) for b in space.basis], size**2, domain)
    return [scalars.unflatten(v, size, domain) for v in vectors]


def verify_regular_splitting(f: DPForm, components: Sequence[DPForm]) -> SplittingCheck:
    """Checks that the components form a regular splitting of f

    Checked: equal degrees, Σ g_i = f, g_i ≠ 0, independent supports whose sum
    is R_{d-1}(f), and ann(f)_e = ∩ ann(g_i)_e for 0 < e < d.
    """
    diagnostics = []
    r, d, domain = f.num_vars, f.degree, f.domain
    if not components:
        return SplittingCheck(False, ["no components"])
    if any(g.degree != d or g.num_vars != r or g.domain != domain for g in components):
        return SplittingCheck(False, ["components do not live in the ring and degree of f"])
    if any(g.is_zero() for g in components):
        diagnostics.append("a component is zero")
    total = DPForm.zero(r, d, domain)
    for g in components:
        total = total + g
    if total != f:
        diagnostics.append("components do not sum to f")
    supports = [support_space(g) for g in components]
    stacked = [v for support in supports for v in support]
    dimension = scalars.span_dimension(stacked, r, domain)
    if dimension != len(stacked):
        diagnostics.append(f"supports overlap: dimension {dimension} < {len(stacked)}")
    elif dimension != len(support_space(f)):
        diagnostics.append("supports do not add up to R_{d-1}(f)")
    if not diagnostics:
        for e in range(1, d):
            own = ann_graded(f, e).vectors()
            meet = None
            for g in components:
                piece = ann_graded(g, e).vectors()
                meet = piece if meet is None else scalars.intersect_spaces(meet, piece, monomial_count(r, e), domain)
            if len(meet or []) != len(own) or not all(scalars.in_span(v, meet, domain) for v in own):
                diagnostics.append(f"ann(f)_{e} differs from the intersection of the component annihilators")
    return SplittingCheck(not diagnostics, diagnostics)


def group(report: SplittingReport, partition: Sequence[Sequence[int]]) -> SplittingReport:
    """Coarsens a splitting by summing the components and idempotents of each part

    Raises:
        ValueError: the parts do not partition the component indices
    """
    flat = sorted(i for part in partition for i in part)
    if flat != list(range(report.length)) or any(not part for part in partition):
        raise ValueError(f"{partition} is not a partition of 0..{report.length - 1}")
    components = []
    for part in partition:
        g = report.components[part[0]].form
        e = report.components[part[0]].idempotent
        for i in part[1:]:
            g = g + report.components[i].form
            e = e + report.components[i].idempotent
        bases = [report.components[i].block_basis for i in part]
        block = [b for basis in bases for b in basis] if all(basis is not None for basis in bases) else None
        components.append(_make_component(g, e, block))
    coid = group_coid(report.coid, partition) if report.coid else None
    return SplittingReport(report.form, components, coid, dict(report.extras))


def splitting_upper_bound(f: DPForm) -> int:
    """dim M_f - 1, the most regular splits any family specializing to f can reach

    Raises:
        ValueError: f = 0
    """
    if f.is_zero():
        raise ValueError("zero form")
    mf = compute_mf(f)
    if ann_graded(f, 1).dimension:
        logger.warning("ann(f)_1 != 0: the bound %d counts matrices acting on unused variables", mf.dimension - 1)
    return mf.dimension - 1


def splitting_decision(f: DPForm, seed: int = 0) -> str:
    """Which kind of splitting f admits: "regular", "degenerate", "none" or "unknown"

    "regular" when the maximal coid has at least two members; "degenerate" when
    ann(f)_1 = 0, beta_{1d} > 0 and M_f holds a nonzero nilpotent; "none" when
    ann(f)_1 = 0 and beta_{1d} = 0. Anything else is "unknown".

    Raises:
        ValueError: d < 3
    """
    from .degenerate import find_nilpotent, NoNilpotentError

    if f.degree < 3:
        raise ValueError(f"splitting decisions need d >= 3, got {f.degree}")
    if regular_split(f, seed=seed).length >= 2:
        return "regular"
    if ann_graded(f, 1).dimension:
        return "unknown"
    if not generator_counts(f).get(f.degree, 0):
        return "none"
    try:
        find_nilpotent(f, seed=seed)
    except NoNilpotentError:
        return "unknown"
    return "degenerate"
