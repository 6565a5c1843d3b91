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
"""Degenerate splittings: families f_t over K[t1..tn] specializing to f that split over K(t1..tn)"""
from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy.polys.domains.domain import Domain
from sympy.polys.matrices import DomainMatrix

from ..algebra import scalars
from ..algebra.apolarity import HilbertFunction, hilbert_function
from ..algebra.artinian import nilradical
from ..algebra.forms import BaseChange, DPForm, apply_base_change, format_form
from ..algebra.matrix_algebra import choose_support_idempotent, compute_mf, gamma_f, in_mf, mf_restricted
from .regular import regular_split

logger = logging.getLogger(__name__)

DEFAULT_PRIME = 101
DEFAULT_RETRY_BUDGET = 5


class NoNilpotentError(ValueError):
    """M_f holds no nonzero nilpotent matrix"""

    def __init__(self, message: str = "no nilpotent available"):
        super().__init__(message)


@dataclass(frozen=True)
class ParamForm:
    """A form with coefficients in K[t1..tn]"""

    form: DPForm
    base: Domain

    @property
    def num_params(self) -> int:
        return len(self.form.domain.symbols)

    @property
    def params(self) -> Tuple[str, ...]:
        return tuple(str(s) for s in self.form.domain.symbols)

    def specialize(self, point: Sequence[Any]) -> DPForm:
        """The form over the base field at t = point"""
        if len(point) != self.num_params:
            raise ValueError(f"expected {self.num_params} values, got {len(point)}")
        point = [self.base.convert(v) if isinstance(v, int) else v for v in point]
        return self.form.map_coefficients(lambda c: scalars.evaluate_polynomial(c, point, self.base), self.base)

    def at_zero(self) -> DPForm:
        return self.specialize([0] * self.num_params)

    def reduce(self, prime: int) -> "ParamForm":
        """The family with rational coefficients reduced modulo ``prime``

        Raises:
            ValueError: a denominator vanishes modulo ``prime``
        """
        target = scalars.prime_field(prime)
        if self.base == target:
            return self
        if self.base != scalars.RATIONALS:
            raise ValueError(f"cannot reduce a family over {self.base}")
        ring = scalars.parameter_ring(target, self.num_params)

        def reduce(c):
            return ring.ring.from_dict(
                {m: scalars.reduce_scalar(v, self.base, target) for m, v in c.items()}
            )

        return ParamForm(self.form.map_coefficients(reduce, ring), target)

    def coefficient_strings(self) -> Dict[Tuple[int, ...], str]:
        return {alpha: str(c.as_expr()) for alpha, c in self.form}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "field": scalars.field_descriptor(self.base),
            "params": self.num_params,
            "r": self.form.num_vars,
            "d": self.form.degree,
            "terms": [{"exp": list(alpha), "coef": text} for alpha, text in self.coefficient_strings().items()],
        }


@dataclass
class LevelCheck:
    """Exact identities verified at one level of the construction"""

    level: int
    index: int
    power_identity: bool
    factor_identity: bool
    membership: bool

    @property
    def ok(self) -> bool:
        return self.power_identity and self.factor_identity and self.membership


@dataclass
class Certificate:
    """Evidence that a family splits: a random specialization and what it splits into"""

    expected_splits: int
    prime: Optional[int]
    point: List[str]
    attempts: int
    split_length: int
    mf_dimension_at_point: int
    mf_dimension_at_zero: int
    hilbert_at_point: Optional[HilbertFunction]
    hilbert_at_zero: HilbertFunction
    seed: int = 0

    @property
    def verified(self) -> bool:
        return (
            self.split_length >= self.expected_splits + 1
            and self.mf_dimension_at_point <= self.mf_dimension_at_zero
        )

    @property
    def flat(self) -> bool:
        return self.hilbert_at_point == self.hilbert_at_zero

    def to_dict(self) -> Dict[str, Any]:
        return {
            "expected_splits": self.expected_splits,
            "prime": self.prime,
            "point": self.point,
            "attempts": self.attempts,
            "split_length": self.split_length,
            "mf_dimension_at_point": self.mf_dimension_at_point,
            "mf_dimension_at_zero": self.mf_dimension_at_zero,
            "hilbert_at_point": self.hilbert_at_point.to_list() if self.hilbert_at_point else None,
            "hilbert_at_zero": self.hilbert_at_zero.to_list(),
            "flat": self.flat,
            "verified": self.verified,
            "seed": self.seed,
        }


@dataclass
class DegenerateSplitting:
    """f_t with its additive components over K(t1..tn) and a specialization certificate"""

    family: ParamForm
    components: List[DPForm]
    levels: List[LevelCheck]
    certificate: Certificate
    extras: Dict[str, Any] = field(default_factory=dict)

    @property
    def num_params(self) -> int:
        return self.family.num_params

    def to_dict(self) -> Dict[str, Any]:
        return {
            "family": self.family.to_dict(),
            "components": [format_form(c) for c in self.components],
            "levels": [asdict(level) for level in self.levels],
            "certificate": self.certificate.to_dict(),
            "extras": dict(self.extras),
        }


# ---------------------------------------------------------------- expansions in one parameter


def _split_by_parameter(value: Any, index: int, field_domain: Domain) -> Dict[int, Any]:
    """Coefficients of the powers of t_index in a rational function free of t_index below the line"""
    if not value:
        return {}
    numer, denom = value.numer, value.denom
    if denom.degree(index) > 0:
        raise RuntimeError(f"denominator depends on t{index + 1}")
    ring = field_domain.field.ring
    groups: Dict[int, Dict[Tuple[int, ...], Any]] = {}
    for monom, coefficient in numer.items():
        stripped = tuple(0 if i == index else m for i, m in enumerate(monom))
        groups.setdefault(monom[index], {})[stripped] = coefficient
    return {k: field_domain.field.new(ring.from_dict(terms), denom) for k, terms in groups.items()}


def _expand_form(form: DPForm, index: int) -> Dict[int, DPForm]:
    """form = Σ_k t_index^k form_k"""
    domain = form.domain
    buckets: Dict[int, Dict[Tuple[int, ...], Any]] = {}
    for alpha, c in form.terms.items():
        for k, part in _split_by_parameter(c, index, domain).items():
            buckets.setdefault(k, {})[alpha] = part
    return {k: DPForm(form.num_vars, form.degree, terms, domain) for k, terms in buckets.items()}


def _substitute(form: DPForm, replacements: List[Tuple[Any, Any]]) -> DPForm:
    """Simultaneous substitution t_i -> poly_i in every coefficient"""
    if not replacements:
        return form
    domain = form.domain
    return form.map_coefficients(
        lambda c: domain.field.new(c.numer.compose(replacements), c.denom.compose(replacements)), domain
    )


def _denominator_lcm(form: DPForm) -> Any:
    ring = form.domain.field.ring
    result = ring.one
    for _, c in form.terms.items():
        result = result.lcm(c.denom)
    return result.monic() if not result.is_ground else ring.one


# ---------------------------------------------------------------- the construction


def _generalized_inverse(power: DomainMatrix, restrict: DomainMatrix) -> DomainMatrix:
    """Q in E Mat E with power Q power = power, free unknowns set to zero"""
    size, domain = power.shape[0], power.domain
    rows_power = scalars.entries(power)
    equations, rhs = [], []
    for i in range(size):
        for l in range(size):
            equations.append(
                [rows_power[i][j] * rows_power[k][l] for j in range(size) for k in range(size)]
            )
            rhs.append(rows_power[i][l])
    solution = scalars.solve(scalars.matrix(equations, domain, cols=size * size), rhs)
    if solution is None:
        raise RuntimeError("no generalized inverse for a nilpotent power")
    return restrict * scalars.unflatten(solution, size, domain) * restrict


@dataclass
class _Level:
    tail: DPForm
    component: DPForm
    remainder: DPForm
    next_matrix: DomainMatrix
    check: LevelCheck


def _one_level(f: DPForm, a: DomainMatrix, index: int, restrict: DomainMatrix, level: int) -> _Level:
    """One step on f with a nilpotent a of the given index, introducing t_{level+1}"""
    domain = f.domain
    size = f.num_vars
    t = domain.field.gens[level]
    n = index - 1
    power = scalars.matrix_power(a, n)
    q = _generalized_inverse(power, restrict)
    unit = scalars.identity(size, domain)
    p = unit
    for k in range(1, n + 1):
        p = p + scalars.matrix_power(a, n - k) * q * t**k
    a_t = a + q * power * t
    a_t_power = scalars.matrix_power(a_t, n)
    power_identity = scalars.entries(a_t_power * a_t) == scalars.entries(a_t_power * t)
    factor_identity = scalars.entries(a_t_power) == scalars.entries(p * power)
    g = gamma_f(f, power)
    g_t = apply_base_change(BaseChange(p), g)
    expansion = _expand_form(g_t, level)
    zero = DPForm.zero(size, f.degree, domain)
    tail = zero
    remainder = f
    for k, part in expansion.items():
        if k > n:
            tail = tail + part.scale(t ** (k - n))
        else:
            remainder = remainder - part * (domain.one / t ** (n - k))
    f_t = f + tail
    membership = in_mf(f_t, a_t)
    check = LevelCheck(level, index, power_identity, factor_identity, membership)
    if not check.ok:
        raise RuntimeError(f"construction identities fail at level {level + 1}: {check}")
    component = g_t * (domain.one / t**n)
    complement = unit - a_t_power * (domain.one / t**n)
    next_matrix = a_t * complement
    return _Level(tail, component, remainder, next_matrix, check)


def _to_param_form(form: DPForm, base: Domain) -> ParamForm:
    """Moves a polynomial-valued form from K(t) to K[t]

    Raises:
        RuntimeError: a coefficient keeps a denominator
    """
    count = len(form.domain.symbols)
    ring = scalars.parameter_ring(base, count)

    def convert(c):
        if not c.denom.is_ground:
            raise RuntimeError("family coefficient is not polynomial in the parameters")
        return ring.ring.from_dict(dict(c.numer.quo_ground(c.denom.LC)))

    return ParamForm(form.map_coefficients(convert, ring), base)


def _run_construction(
    f: DPForm, tasks: Sequence[Tuple[DomainMatrix, DomainMatrix, int, int]], count: int
) -> Tuple[ParamForm, List[DPForm], List[LevelCheck]]:
    """Runs the levels for every (A, E, index, stop) task and rescales the parameters

    Level j introduces t_{j+1}; its tail is rescaled by t_{j+1} -> c t_{j+1} with
    c clearing the denominators left by earlier levels.
    """
    base = f.domain
    field_domain = scalars.parameter_field(base, count)
    ring_gens = field_domain.field.ring.gens
    current = f.lift(field_domain)
    family = current
    components, checks, replacements = [], [], []
    level = 0
    for a, restrict, index, stop in tasks:
        a = scalars.lift_matrix(a, field_domain)
        restrict = scalars.lift_matrix(restrict, field_domain)
        while index > stop:
            logger.info("degenerate level %d of %d", level + 1, count)
            step = _one_level(current, a, index, restrict, level)
            tail = _substitute(step.tail, replacements)
            scale = _denominator_lcm(tail)
            replacements.append((ring_gens[level], ring_gens[level] * scale))
            tail = _substitute(tail, [(ring_gens[level], ring_gens[level] * scale)])
            family = family + tail
            components.append(step.component)
            checks.append(step.check)
            current, a = step.remainder, step.next_matrix
            index -= 1
            level += 1
            if index > stop and scalars.nilpotency_index(a) != index:
                raise RuntimeError(f"next matrix is not nilpotent of index {index}")
    components.append(current)
    components = [_substitute(c, replacements) for c in components]
    param_form = _to_param_form(family, base)
    if param_form.at_zero() != f:
        raise RuntimeError("the family does not specialize to f at t = 0")
    return param_form, components, checks


def certify(
    family: ParamForm,
    expected_splits: int,
    f: DPForm,
    seed: int = 0,
    prime: Optional[int] = DEFAULT_PRIME,
    retry_budget: int = DEFAULT_RETRY_BUDGET,
) -> Certificate:
    """Specializes the family at seeded random points until one splits often enough

    Over the rationals the family is first reduced modulo ``prime`` (when given).
    A point is accepted when regular_split finds at least expected_splits + 1
    components and dim M_f has not grown beyond its value at t = 0.
    """
    target = family
    f_zero = f
    if prime is not None and family.base == scalars.RATIONALS:
        target = family.reduce(prime)
        f_zero = target.at_zero()
    else:
        prime = None if not family.base.is_FiniteField else int(family.base.mod)
    base = target.base
    rng = np.random.default_rng(seed)
    zero_dimension = compute_mf(f_zero).dimension
    zero_hilbert = hilbert_function(f_zero)
    certificate = None
    for attempt in range(1, retry_budget + 1):
        point = [scalars.random_nonzero(base, rng) for _ in range(target.num_params)]
        specialized = target.specialize(point)
        labels = [scalars.scalar_str(v, base) for v in point]
        if specialized.is_zero():
            logger.info("specialization attempt %d rejected: zero form", attempt)
            continue
        length = regular_split(specialized, seed=seed).length
        certificate = Certificate(
            expected_splits,
            prime,
            labels,
            attempt,
            length,
            compute_mf(specialized).dimension,
            zero_dimension,
            hilbert_function(specialized),
            zero_hilbert,
            seed,
        )
        if certificate.verified:
            logger.info("specialization at %s splits into %d components", labels, length)
            return certificate
        logger.info("specialization attempt %d rejected: %d components", attempt, length)
    if certificate is None:
        certificate = Certificate(
            expected_splits, prime, [], retry_budget, 0, 0, zero_dimension, None, zero_hilbert, seed
        )
    logger.warning("no specialization among %d attempts certified the family", retry_budget)
    return certificate


def _require_nilpotent(a: DomainMatrix) -> int:
    index = scalars.nilpotency_index(a)
    if index is None or index < 2:
        raise ValueError("matrix is not a nonzero nilpotent")
    return index


def degenerate_split_onematrix(
    f: DPForm,
    a: DomainMatrix,
    seed: int = 0,
    prime: Optional[int] = DEFAULT_PRIME,
    retry_budget: int = DEFAULT_RETRY_BUDGET,
) -> DegenerateSplitting:
    """A family f_t with f_0 = f splitting n times, from a nilpotent A in M_f of index n + 1

    Each level takes Q with A^n Q A^n = A^n, sets A_t = A + t Q A^n and
    P = I + Σ t^k A^(n-k) Q, and moves the powers t^k, k > n, of phi_P(gamma_f(A^n))
    into f; the complement idempotent then hands a nilpotent of index n to the
    remainder.

    Raises:
        ValueError: d < 3, or A is not a nonzero nilpotent member of M_f
        RuntimeError: a construction identity fails
    """
    if f.degree < 3:
        raise ValueError(f"degenerate splitting needs d >= 3, got {f.degree}")
    index = _require_nilpotent(a)
    if not in_mf(f, a):
        raise ValueError("matrix is not in M_f")
    n = index - 1
    unit = scalars.identity(f.num_vars, f.domain)
    family, components, levels = _run_construction(f, [(a, unit, index, 1)], n)
    certificate = certify(family, n, f, seed, prime, retry_budget)
    return DegenerateSplitting(family, components, levels, certificate)


def degenerate_split_multimatrix(
    f: DPForm,
    data: Sequence[Tuple[DomainMatrix, DomainMatrix, int]],
    seed: int = 0,
    prime: Optional[int] = DEFAULT_PRIME,
    retry_budget: int = DEFAULT_RETRY_BUDGET,
) -> DegenerateSplitting:
    """A family splitting Σ (n_i - a_i) times from nilpotents A_i living in orthogonal corners E_i

    Args:
        f: the form, d >= 3
        data: triples (A_i, E_i, a_i) with E_i A_i = A_i E_i = A_i, 1 <= a_i < index A_i
            and A_i^k in M_f for every k >= a_i

    Raises:
        ValueError: a hypothesis fails
    """
    if f.degree < 3:
        raise ValueError(f"degenerate splitting needs d >= 3, got {f.degree}")
    if not data:
        raise ValueError("need at least one matrix")
    tasks = []
    for i, (a, e, low) in enumerate(data):
        index = _require_nilpotent(a)
        if not scalars.is_idempotent(e) or e.is_zero_matrix:
            raise ValueError(f"E_{i + 1} is not a nonzero idempotent")
        if not scalars.entries(e * a) == scalars.entries(a) == scalars.entries(a * e):
            raise ValueError(f"E_{i + 1} A_{i + 1} = A_{i + 1} E_{i + 1} = A_{i + 1} fails")
        if not 1 <= low < index:
            raise ValueError(f"a_{i + 1} = {low} outside 1..{index - 1}")
        for k in range(low, index):
            if not in_mf(f, scalars.matrix_power(a, k)):
                raise ValueError(f"A_{i + 1}^{k} is not in M_f")
        for other in data[i + 1 :]:
            if not (e * other[1]).is_zero_matrix or not (other[1] * e).is_zero_matrix:
                raise ValueError("idempotents are not orthogonal")
        tasks.append((a, e, index, low))
    count = sum(index - low for _, _, index, low in tasks)
    family, components, levels = _run_construction(f, tasks, count)
    certificate = certify(family, count, f, seed, prime, retry_budget)
    return DegenerateSplitting(family, components, levels, certificate)


def relaxed_power_hypothesis(
    f: DPForm, a: DomainMatrix, low: int, b: DomainMatrix, c: DomainMatrix
) -> bool:
    """Whether A^low B and A^(low+1) C in M_f, with B, C units of K[A], give A^k in M_f for k >= low

    Returns False when the two products are not in M_f.

    Raises:
        ValueError: B or C is not an invertible element of K[A]
        RuntimeError: the products lie in M_f but some power A^k, k >= low, does not
    """
    index = _require_nilpotent(a)
    powers = [scalars.flatten(scalars.matrix_power(a, k)) for k in range(index)]
    for unit in (b, c):
        if not scalars.in_span(scalars.flatten(unit), powers, f.domain) or not unit.det():
            raise ValueError("B and C must be invertible elements of K[A]")
    if not (in_mf(f, scalars.matrix_power(a, low) * b) and in_mf(f, scalars.matrix_power(a, low + 1) * c)):
        return False
    for k in range(low, index):
        if not in_mf(f, scalars.matrix_power(a, k)):
            raise RuntimeError(f"A^{k} is not in M_f")
    return True


def find_nilpotent(f: DPForm, seed: int = 0, attempts: int = 8) -> DomainMatrix:
    """A nilpotent of M_f of the largest index found among basis elements and random combinations

    Raises:
        NoNilpotentError: the nilradical of M_f^E is zero
    """
    e = choose_support_idempotent(f)
    restricted = mf_restricted(f, e)
    radical = nilradical(restricted.structure_algebra())
    if not radical:
        raise NoNilpotentError()
    rng = np.random.default_rng(seed)
    candidates = [restricted.element(v) for v in radical]
    for _ in range(attempts):
        coeffs = [scalars.random_element(f.domain, rng) for _ in radical]
        combination = [sum((c * v[i] for c, v in zip(coeffs, radical)), f.domain.zero) for i in range(len(radical[0]))]
        if not scalars.is_zero_vector(combination):
            candidates.append(restricted.element(combination))
    best = max(candidates, key=lambda m: scalars.nilpotency_index(m) or 0)
    logger.debug("nilpotent of index %s chosen", scalars.nilpotency_index(best))
    return best
