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
"""Builders for structured forms: power sum expansion terms, Jordan extremal forms, rank-bounded counterexamples"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from sympy import QQ
from sympy.polys.domains.domain import Domain
from sympy.polys.matrices import DomainMatrix

from .algebra import scalars
from .algebra.forms import DiffOp, DPForm, exponent_vectors, format_form, partial
from .algebra.matrix_algebra import integrate_gradient

logger = logging.getLogger(__name__)


def _weight(alpha: Sequence[int]) -> int:
    return sum(i * a for i, a in enumerate(alpha))


@dataclass(frozen=True)
class TermFamily:
    """The forms h_{d0}, ..., h_{d,(r-1)d} with (x_1 + t x_2 + ... + t^{r-1} x_r)^[d] = sum_k t^k h_{dk}"""

    num_vars: int
    degree: int
    forms: tuple
    domain: Domain

    def __len__(self) -> int:
        return len(self.forms)

    def term(self, k: int) -> DPForm:
        """h_{dk}, the zero form outside 0..(r-1)d"""
        if 0 <= k < len(self.forms):
            return self.forms[k]
        return DPForm.zero(self.num_vars, self.degree, self.domain)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "r": self.num_vars,
            "d": self.degree,
            "terms": [format_form(h) for h in self.forms],
        }


def hdk_terms(r: int, d: int, domain: Domain = QQ) -> TermFamily:
    """h_{dk} = sum of x^[alpha] over |alpha| = d with sum_i (i-1) alpha_i = k

    Raises:
        ValueError: r < 1 or d < 0
    """
    if r < 1 or d < 0:
        raise ValueError(f"need r >= 1 and d >= 0, got r={r}, d={d}")
    buckets: List[Dict] = [dict() for _ in range((r - 1) * d + 1)]
    for alpha in exponent_vectors(r, d):
        buckets[_weight(alpha)][alpha] = domain.one
    return TermFamily(r, d, tuple(DPForm(r, d, terms, domain) for terms in buckets), domain)


def jordan_extremal_form(r: int, d: int, domain: Domain = QQ) -> DPForm:
    """h_{d,r-1}, whose M_f is generated by the fundamental Jordan block

    Raises:
        ValueError: r < 2 or d < 3
    """
    if r < 2 or d < 3:
        raise ValueError(f"Jordan extremal forms need r >= 2 and d >= 3, got r={r}, d={d}")
    return hdk_terms(r, d, domain).term(r - 1)


def jordan_block(size: int, domain: Domain = QQ) -> DomainMatrix:
    """The nilpotent matrix with ones on the superdiagonal"""
    rows = [[domain.one if j == i + 1 else domain.zero for j in range(size)] for i in range(size)]
    return scalars.matrix(rows, domain, cols=size)


def shift_minors(r: int, domain: Domain = QQ) -> List[DiffOp]:
    """Generators ∂_i ∂_{j+1} - ∂_{i+1} ∂_j of the 2x2 minors of the shifted row matrix"""
    ops = []
    for i in range(r - 1):
        for j in range(i + 1, r - 1):
            op = DiffOp.variable(i, r, domain) * DiffOp.variable(j + 1, r, domain) - DiffOp.variable(
                i + 1, r, domain
            ) * DiffOp.variable(j, r, domain)
            if not op.is_zero():
                ops.append(op)
    return ops


@dataclass
class ConsecutiveTerms:
    """Outcome of the consecutive-terms test

    When ``holds``, forms[j] is the coefficient of t^{offset + j} in
    c_t (x_r + t x_{r-1} + ... + t^{r-1} x_1)^[d], with c_t given by
    ``coefficients`` from the constant term up.
    """

    holds: bool
    offset: Optional[int] = None
    coefficients: List[Any] = field(default_factory=list)
    failures: List[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> Dict[str, Any]:
        return {
            "holds": self.holds,
            "offset": self.offset,
            "coefficients": [str(c) for c in self.coefficients],
            "failures": list(self.failures),
        }


def _reverse_weight(alpha: Sequence[int]) -> int:
    r = len(alpha)
    return sum((r - 1 - i) * a for i, a in enumerate(alpha))


def _reverse_coordinates(f: DPForm) -> Optional[Dict[int, Any]]:
    coordinates: Dict[int, Any] = {}
    for alpha in exponent_vectors(f.num_vars, f.degree):
        k, value = _reverse_weight(alpha), f.coefficient(alpha)
        if k in coordinates and coordinates[k] != value:
            return None
        coordinates[k] = value
    return {k: v for k, v in coordinates.items() if v}


def consecutive_terms_check(forms: Sequence[DPForm]) -> ConsecutiveTerms:
    """Decides whether ∂_i f_{j+1} = ∂_{i+1} f_j for all i < r and j < n

    Raises:
        ValueError: fewer than two forms, or forms of mixed shape
        RuntimeError: the identities hold but no Toeplitz witness exists
    """
    if len(forms) < 2:
        raise ValueError(f"need at least two forms, got {len(forms)}")
    r, d, domain = forms[0].num_vars, forms[0].degree, forms[0].domain
    if any(f.num_vars != r or f.degree != d or f.domain != domain for f in forms):
        raise ValueError("forms of mixed shape")
    failures = [
        f"∂_{i + 1} f_{j + 2} != ∂_{i + 2} f_{j + 1}"
        for j in range(len(forms) - 1)
        for i in range(r - 1)
        if partial(forms[j + 1], i) != partial(forms[j], i + 1)
    ]
    if failures:
        return ConsecutiveTerms(False, failures=failures)

    # forms[j] = sum_k c_{offset + j - k} g_{dk} with g_{dk} the reversed-weight classes
    by_shift: Dict[int, Any] = {}
    for j, f in enumerate(forms):
        coordinates = _reverse_coordinates(f)
        if coordinates is None:
            raise RuntimeError(f"form {j + 1} is not a combination of expansion terms")
        for k, value in coordinates.items():
            if by_shift.setdefault(j - k, value) != value:
                raise RuntimeError(f"coefficients of forms are not Toeplitz at shift {j - k}")
    if not by_shift:
        return ConsecutiveTerms(True, 0, [])
    low, high = min(by_shift), max(by_shift)
    coefficients = [by_shift.get(l, domain.zero) for l in range(low, high + 1)]
    return ConsecutiveTerms(True, -low, coefficients)


def hankel_window(
    s: int,
    degree: int,
    count: int,
    offset: Optional[int] = None,
    coefficients: Optional[Sequence[Any]] = None,
    domain: Domain = QQ,
) -> List[DPForm]:
    """Consecutive coefficients h_1, ..., h_count of c_t (x_s + t x_{s-1} + ... + t^{s-1} x_1)^[degree]

    h_i is the coefficient of t^{offset + i}.

    The default window, offset 1 - s and c_t = 1, puts the constant term at h_{s-1}.
    """
    offset = 1 - s if offset is None else offset
    coefficients = [domain.one] if coefficients is None else [domain.convert(c) for c in coefficients]
    buckets: Dict[int, Dict] = {}
    for alpha in exponent_vectors(s, degree):
        buckets.setdefault(_reverse_weight(alpha), {})[alpha] = domain.one
    window = []
    for i in range(1, count + 1):
        h = DPForm.zero(s, degree, domain)
        for l, c in enumerate(coefficients):
            terms = buckets.get(offset + i - l)
            if terms and c:
                h = h + DPForm(s, degree, terms, domain).scale(c)
        window.append(h)
    return window


@dataclass
class Counterexample:
    """f = sum_i x_{s+i} g_i together with the expected basis I, B_0, ..., B_q of M_f"""

    form: DPForm
    basis: List[DomainMatrix]
    s: int
    q: int
    window: List[DPForm]

    @property
    def nilpotents(self) -> List[DomainMatrix]:
        return self.basis[1:]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "s": self.s,
            "q": self.q,
            "form": format_form(self.form),
            "window": [format_form(h) for h in self.window],
            "basis": [[[str(c) for c in row] for row in scalars.entries(m)] for m in self.basis],
        }


def _embed(g: DPForm, num_vars: int) -> DPForm:
    pad = (0,) * (num_vars - g.num_vars)
    return DPForm(num_vars, g.degree, {alpha + pad: c for alpha, c in g.terms.items()}, g.domain)


def displaced_identity(s: int, q: int, k: int, domain: Domain = QQ) -> DomainMatrix:
    """B_k with ones at (i, s + k + i), i = 1..s, in size 2s + q"""
    size = 2 * s + q
    rows = [[domain.zero] * size for _ in range(size)]
    for i in range(s):
        rows[i][s + k + i] = domain.one
    return scalars.matrix(rows, domain, cols=size)


def build_counterexample(
    s: int,
    q: int,
    d: int,
    offset: Optional[int] = None,
    coefficients: Optional[Sequence[Any]] = None,
    domain: Domain = QQ,
) -> Counterexample:
    """A form in r = 2s + q variables whose M_f holds no nonzero nilpotent of rank below s

    The window h_1, ..., h_{r-1} of degree d - 2 forms in x_1..x_s is read off
    c_t (x_s + t x_{s-1} + ... )^[d-2]; each g_k satisfies ∂_i g_k = h_{k-1+i}.

    Raises:
        ValueError: s < 2, q < 1, d < 3, q + 2 > (d - 2)(s - 1), or a window
            that is nonzero below s - 1 or dependent from s - 1 to s + q + 1
    """
    if s < 2 or q < 1 or d < 3:
        raise ValueError(f"need s >= 2, q >= 1 and d >= 3, got s={s}, q={q}, d={d}")
    if q + 2 > (d - 2) * (s - 1):
        raise ValueError(f"q + 2 = {q + 2} exceeds (d - 2)(s - 1) = {(d - 2) * (s - 1)}")
    r = 2 * s + q
    window = hankel_window(s, d - 2, r - 1, offset, coefficients, domain)
    if any(not h.is_zero() for h in window[: s - 2]):
        raise ValueError(f"window terms before h_{s - 1} must vanish")
    core = window[s - 2 : s + q + 1]
    if scalars.span_dimension([h.to_vector() for h in core], len(core[0].to_vector()), domain) != len(core):
        raise ValueError(f"window terms h_{s - 1}..h_{s + q + 1} are linearly dependent")

    f = DPForm.zero(r, d, domain)
    for k in range(1, s + q + 1):
        g = integrate_gradient([window[k - 2 + i] for i in range(1, s + 1)], s, d - 1, domain)
        variable = DPForm.monomial(tuple(1 if v == s + k - 1 else 0 for v in range(r)), domain)
        f = f + variable * _embed(g, r)
    basis = [scalars.identity(r, domain)] + [displaced_identity(s, q, k, domain) for k in range(q + 1)]
    logger.info("built counterexample with s=%d q=%d d=%d in %d variables", s, q, d, r)
    return Counterexample(f, basis, s, q, window)
