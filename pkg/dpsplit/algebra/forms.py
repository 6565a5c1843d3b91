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
"""Divided power forms, the dual polynomial ring acting by contraction, and linear base change"""
from __future__ import annotations

import functools
import logging
import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Callable, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from sympy import symbols
from sympy.polys.domains.domain import Domain
from sympy.polys.matrices import DomainMatrix
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyElement, PolyRing

from . import scalars

logger = logging.getLogger(__name__)

ExponentVec = Tuple[int, ...]


class FormParseError(ValueError):
    """Raised when the text of a form cannot be parsed"""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.reason = message
        self.line = line
        self.column = column


@functools.lru_cache(maxsize=None)
def exponent_vectors(num_vars: int, degree: int) -> Tuple[ExponentVec, ...]:
    """All exponent vectors of the given degree, lexicographically descending"""
    if degree < 0:
        return ()
    if num_vars == 1:
        return ((degree,),)
    vectors = []
    for first in range(degree, -1, -1):
        for rest in exponent_vectors(num_vars - 1, degree - first):
            vectors.append((first,) + rest)
    return tuple(vectors)


@functools.lru_cache(maxsize=None)
def monomial_positions(num_vars: int, degree: int) -> Dict[ExponentVec, int]:
    return {alpha: i for i, alpha in enumerate(exponent_vectors(num_vars, degree))}


def monomial_count(num_vars: int, degree: int) -> int:
    """dim R_e = dim 𝓡_e"""
    if degree < 0:
        return 0
    return math.comb(num_vars - 1 + degree, degree)


def unit_exponent(num_vars: int, index: int) -> ExponentVec:
    return tuple(1 if i == index else 0 for i in range(num_vars))


@functools.lru_cache(maxsize=None)
def dual_ring(num_vars: int, domain: Domain) -> PolyRing:
    """The ring R = K[d1..dr] in which differential operators are multiplied"""
    generators = symbols(f"d1:{num_vars + 1}")
    return PolyRing(generators, domain, lex)


@dataclass(frozen=True, eq=False)
class _Homogeneous:
    num_vars: int
    degree: int
    terms: Mapping[ExponentVec, Any]
    domain: Domain

    def __post_init__(self):
        if self.num_vars < 1:
            raise ValueError(f"need at least one variable, got {self.num_vars}")
        cleaned = {}
        for alpha, coefficient in self.terms.items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != self.num_vars or min(alpha) < 0 or sum(alpha) != self.degree:
                raise ValueError(
                    f"exponent {alpha} does not fit {self.num_vars} variables in degree {self.degree}"
                )
            if coefficient:
                cleaned[alpha] = coefficient
        object.__setattr__(self, "terms", cleaned)

    @classmethod
    def zero(cls, num_vars: int, degree: int, domain: Domain):
        return cls(num_vars, degree, {}, domain)

    @classmethod
    def monomial(cls, alpha: Sequence[int], domain: Domain, coefficient: Any = None):
        coefficient = domain.one if coefficient is None else coefficient
        return cls(len(alpha), sum(alpha), {tuple(alpha): coefficient}, domain)

    @classmethod
    def from_vector(cls, vector: Sequence[Any], num_vars: int, degree: int, domain: Domain):
        """Builds an element from its coordinates in the lexicographic monomial basis"""
        basis = exponent_vectors(num_vars, degree)
        if len(vector) != len(basis):
            raise ValueError(f"expected {len(basis)} coordinates, got {len(vector)}")
        return cls(num_vars, degree, dict(zip(basis, vector)), domain)

    def to_vector(self) -> List[Any]:
        zero = self.domain.zero
        return [self.terms.get(alpha, zero) for alpha in exponent_vectors(self.num_vars, self.degree)]

    def coefficient(self, alpha: Sequence[int]) -> Any:
        return self.terms.get(tuple(alpha), self.domain.zero)

    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> List[int]:
        """Indices of the variables that occur"""
        return [i for i in range(self.num_vars) if any(alpha[i] for alpha in self.terms)]

    def _check_compatible(self, other: "_Homogeneous"):
        if type(self) is not type(other):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if self.num_vars != other.num_vars or self.domain != other.domain:
            raise ValueError("operands live in different rings")

    def __add__(self, other):
        self._check_compatible(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.degree != other.degree:
            raise ValueError(f"cannot add degree {self.degree} and degree {other.degree}")
        terms = dict(self.terms)
        for alpha, coefficient in other.terms.items():
            terms[alpha] = terms.get(alpha, self.domain.zero) + coefficient
        return type(self)(self.num_vars, self.degree, terms, self.domain)

    def __neg__(self):
        return type(self)(self.num_vars, self.degree, {a: -c for a, c in self.terms.items()}, self.domain)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, scalar: Any):
        if isinstance(scalar, int):
            scalar = self.domain.convert(scalar)
        return type(self)(
            self.num_vars, self.degree, {a: scalar * c for a, c in self.terms.items()}, self.domain
        )

    def map_coefficients(self, func: Callable[[Any], Any], domain: Domain):
        """Applies ``func`` to every coefficient, landing in ``domain``"""
        return type(self)(
            self.num_vars, self.degree, {a: func(c) for a, c in self.terms.items()}, domain
        )

    def lift(self, domain: Domain):
        """The same element with coefficients embedded in a parameter ring or field"""
        if domain == self.domain:
            return self
        source = self.domain
        return self.map_coefficients(lambda c: scalars.lift_scalar(domain, c, source), domain)

    def __eq__(self, other):
        if not isinstance(other, _Homogeneous) or type(self) is not type(other):
            return NotImplemented
        if self.num_vars != other.num_vars or self.domain != other.domain:
            return False
        if self.is_zero() and other.is_zero():
            return True
        return self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        return hash((type(self).__name__, self.num_vars, self.degree, frozenset(self.terms.items())))

    def __iter__(self) -> Iterator[Tuple[ExponentVec, Any]]:
        positions = monomial_positions(self.num_vars, self.degree)
        return iter(sorted(self.terms.items(), key=lambda item: positions[item[0]]))


class DPForm(_Homogeneous):
    """A homogeneous element of the divided power algebra 𝓡 = K[x1..xr]^DP"""

    def __mul__(self, other):
        if isinstance(other, DPForm):
            return multiply(self, other)
        return self.scale(other)

    def __str__(self):
        return format_form(self)

    def __repr__(self):
        return f"DPForm(r={self.num_vars}, d={self.degree}, {format_form(self)!r})"


class DiffOp(_Homogeneous):
    """A homogeneous element of R = K[d1..dr] acting on 𝓡 by contraction"""

    @classmethod
    def variable(cls, index: int, num_vars: int, domain: Domain) -> "DiffOp":
        """The operator d_{index + 1}"""
        return cls.monomial(unit_exponent(num_vars, index), domain)

    @classmethod
    def from_poly(cls, poly: PolyElement, num_vars: int, domain: Domain, degree: Optional[int] = None):
        degrees = {sum(monom) for monom in poly.keys()}
        if len(degrees) > 1:
            raise ValueError("operator is not homogeneous")
        if degrees:
            degree = degrees.pop()
        elif degree is None:
            raise ValueError("the degree of a zero operator must be given")
        return cls(num_vars, degree, dict(poly), domain)

    @property
    def poly(self) -> PolyElement:
        return dual_ring(self.num_vars, self.domain).from_dict(dict(self.terms))

    def __mul__(self, other):
        if isinstance(other, DiffOp):
            self._check_compatible(other)
            return DiffOp.from_poly(
                self.poly * other.poly, self.num_vars, self.domain, self.degree + other.degree
            )
        return self.scale(other)

    def __call__(self, form: DPForm) -> DPForm:
        return contract(self, form)

    def __str__(self):
        return format_form(self, prefix="d")

    def __repr__(self):
        return f"DiffOp(r={self.num_vars}, e={self.degree}, {format_form(self, prefix='d')!r})"


def _check_action(op: DiffOp, form: DPForm):
    if op.num_vars != form.num_vars:
        raise ValueError(f"operator in {op.num_vars} variables applied to a form in {form.num_vars}")
    if op.domain != form.domain:
        raise ValueError(f"operator over {op.domain} applied to a form over {form.domain}")


def contract(op: DiffOp, form: DPForm) -> DPForm:
    """Applies op to form: d^beta(x^[alpha]) = x^[alpha - beta], zero when beta exceeds alpha

    An operator of degree above the degree of the form yields the zero form of
    negative degree.
    """
    _check_action(op, form)
    terms: Dict[ExponentVec, Any] = {}
    zero = form.domain.zero
    for beta, c in op.terms.items():
        for alpha, a in form.terms.items():
            gamma = tuple(x - y for x, y in zip(alpha, beta))
            if min(gamma) < 0:
                continue
            terms[gamma] = terms.get(gamma, zero) + c * a
    return DPForm(form.num_vars, form.degree - op.degree, terms, form.domain)


def partial(form: DPForm, index: int) -> DPForm:
    """d_{index + 1} applied to form"""
    return contract(DiffOp.variable(index, form.num_vars, form.domain), form)


def gradient(form: DPForm) -> List[DPForm]:
    """The column ∂f"""
    return [partial(form, i) for i in range(form.num_vars)]


def hessian(form: DPForm) -> List[List[DPForm]]:
    """The symmetric grid ∂∂ᵀf"""
    first = gradient(form)
    return [[partial(g, j) for j in range(form.num_vars)] for g in first]


def _multiplicity(alpha: ExponentVec, beta: ExponentVec) -> int:
    weight = 1
    for a, b in zip(alpha, beta):
        if a and b:
            weight *= math.comb(a + b, a)
    return weight


def multiply(first: DPForm, second: DPForm) -> DPForm:
    """Divided power product: x^[a] x^[b] = C(a+b, a) x^[a+b] in each variable"""
    first._check_compatible(second)
    domain = first.domain
    terms: Dict[ExponentVec, Any] = {}
    for alpha, a in first.terms.items():
        for beta, b in second.terms.items():
            gamma = tuple(x + y for x, y in zip(alpha, beta))
            value = a * b * domain.convert(_multiplicity(alpha, beta))
            terms[gamma] = terms.get(gamma, domain.zero) + value
    return DPForm(first.num_vars, first.degree + second.degree, terms, domain)


def one(num_vars: int, domain: Domain) -> DPForm:
    return DPForm.monomial((0,) * num_vars, domain)


def power_of_linear_form(coeffs: Sequence[Any], degree: int, domain: Domain) -> DPForm:
    """l^[d] = sum over |alpha| = d of (prod c_i^alpha_i) x^[alpha] for l = sum c_i x_i"""
    if degree < 0:
        raise ValueError(f"negative degree {degree}")
    coeffs = [domain.convert(c) if isinstance(c, int) else c for c in coeffs]
    terms = {}
    for alpha in exponent_vectors(len(coeffs), degree):
        value = domain.one
        for c, a in zip(coeffs, alpha):
            if a:
                value *= c**a
        terms[alpha] = value
    return DPForm(len(coeffs), degree, terms, domain)


@dataclass(frozen=True)
class BaseChange:
    """An invertible matrix P acting by x -> Pᵀx on forms and d -> P⁻¹d on operators"""

    matrix: DomainMatrix

    def __post_init__(self):
        rows, cols = self.matrix.shape
        if rows != cols:
            raise ValueError(f"base change must be square, got {rows}x{cols}")
        if not self.matrix.det():
            raise ValueError("base change matrix is singular")

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def inverse(self) -> DomainMatrix:
        return self.matrix.inv()

    def compose(self, other: "BaseChange") -> "BaseChange":
        """phi_{PQ} = phi_P after phi_Q"""
        return BaseChange(self.matrix * other.matrix)


def _as_base_change(p) -> BaseChange:
    return p if isinstance(p, BaseChange) else BaseChange(p)


def apply_base_change(p, element):
    """Applies phi_P to a DPForm or a DiffOp

    Args:
        p: a BaseChange or an invertible DomainMatrix
        element: the form or operator; base-field elements are lifted when P lives
            over a parameter ring or field

    Returns:
        phi_P(element), of the same kind as ``element``

    Raises:
        ValueError: P is singular or its size does not match
    """
    p = _as_base_change(p)
    if p.size != element.num_vars:
        raise ValueError(f"base change of size {p.size} on {element.num_vars} variables")
    domain = p.matrix.domain
    if element.domain != domain:
        element = element.lift(domain)
    if isinstance(element, DiffOp):
        return _base_change_op(p, element)
    return _base_change_form(p, element)


def _base_change_form(p: BaseChange, form: DPForm) -> DPForm:
    domain = form.domain
    size = p.size
    images = scalars.columns(p.matrix)
    powers: Dict[Tuple[int, int], DPForm] = {}

    def power(i: int, a: int) -> DPForm:
        if (i, a) not in powers:
            powers[(i, a)] = power_of_linear_form(images[i], a, domain)
        return powers[(i, a)]

    result = DPForm.zero(size, form.degree, domain)
    for alpha, c in form.terms.items():
        image = one(size, domain)
        for i, a in enumerate(alpha):
            if a:
                image = multiply(image, power(i, a))
        result = result + image.scale(c)
    return result


def _base_change_op(p: BaseChange, op: DiffOp) -> DiffOp:
    ring = dual_ring(op.num_vars, op.domain)
    rows = scalars.entries(p.inverse)
    replacements = [
        (ring.gens[i], sum((g * c for c, g in zip(row, ring.gens) if c), ring.zero))
        for i, row in enumerate(rows)
    ]
    image = op.poly.compose(replacements)
    return DiffOp.from_poly(image, op.num_vars, op.domain, op.degree)


# ---------------------------------------------------------------- text syntax

_TOKEN = re.compile(
    r"(?P<space>[ \t\r\n]+)"
    r"|(?P<number>\d+(?:/\d+)?)"
    r"|(?P<var>[a-z])(?P<index>\d+)"
    r"|(?P<power>\^\s*(?:\(\s*(?P<pexp>\d+)\s*\)|\[\s*(?P<bexp>\d+)\s*\]|(?P<nexp>\d+)))"
    r"|(?P<sign>[+-])"
    r"|(?P<star>\*)"
)


def _position(text: str, offset: int) -> Tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    column = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, column


def _tokenize(text: str) -> List[Tuple[str, Any, int]]:
    tokens = []
    offset = 0
    while offset < len(text):
        match = _TOKEN.match(text, offset)
        if match is None:
            raise FormParseError(f"unexpected character {text[offset]!r}", *_position(text, offset))
        kind = match.lastgroup
        if match.group("space") is not None:
            pass
        elif match.group("number") is not None:
            tokens.append(("number", match.group("number"), offset))
        elif match.group("var") is not None:
            tokens.append(("var", (match.group("var"), int(match.group("index"))), offset))
        elif match.group("power") is not None:
            exponent = match.group("pexp") or match.group("bexp") or match.group("nexp")
            tokens.append(("power", int(exponent), offset))
        elif kind in ("sign", "star"):
            tokens.append((kind, match.group(kind), offset))
        offset = match.end()
    return tokens


def _parse(text: str, num_vars: int, domain: Domain, prefix: str, degree: Optional[int]):
    tokens = _tokenize(text)
    terms: Dict[ExponentVec, Any] = {}
    seen_degree = degree
    pos = 0

    def fail(message: str, at: int):
        offset = tokens[at][2] if at < len(tokens) else len(text)
        raise FormParseError(message, *_position(text, offset))

    expect_term = True
    sign = domain.one
    while pos < len(tokens):
        kind, value, offset = tokens[pos]
        if kind == "sign":
            if not expect_term:
                expect_term = True
                sign = domain.one
            if value == "-":
                sign = -sign
            pos += 1
            continue
        if not expect_term:
            fail("expected '+' or '-' between terms", pos)
        coefficient = domain.one
        has_coefficient = False
        if kind == "number":
            try:
                coefficient = scalars.parse_scalar(value, domain)
            except ValueError as exc:
                fail(str(exc), pos)
            has_coefficient = True
            pos += 1
            if pos < len(tokens) and tokens[pos][0] == "star":
                pos += 1
                if pos >= len(tokens) or tokens[pos][0] != "var":
                    fail("expected a variable after '*'", pos)
        alpha = [0] * num_vars
        has_monomial = False
        while pos < len(tokens) and tokens[pos][0] in ("var", "star"):
            if tokens[pos][0] == "star":
                pos += 1
                if pos >= len(tokens) or tokens[pos][0] != "var":
                    fail("expected a variable after '*'", pos)
                continue
            (name, index), at = tokens[pos][1], pos
            if name != prefix:
                fail(f"unknown variable {name}{index}, expected {prefix}1..{prefix}{num_vars}", at)
            if not 1 <= index <= num_vars:
                fail(f"variable {prefix}{index} out of range 1..{num_vars}", at)
            if alpha[index - 1]:
                fail(f"variable {prefix}{index} repeated in a monomial", at)
            pos += 1
            exponent = 1
            if pos < len(tokens) and tokens[pos][0] == "power":
                exponent = tokens[pos][1]
                pos += 1
            alpha[index - 1] = exponent
            has_monomial = True
        if not has_coefficient and not has_monomial:
            fail("expected a term", pos)
        term_degree = sum(alpha)
        if seen_degree is None:
            seen_degree = term_degree
        elif term_degree != seen_degree:
            fail(f"term of degree {term_degree} in a form of degree {seen_degree}", pos - 1)
        key = tuple(alpha)
        terms[key] = terms.get(key, domain.zero) + sign * coefficient
        expect_term = False
        sign = domain.one
    if expect_term and tokens:
        fail("dangling sign", len(tokens))
    if seen_degree is None:
        raise FormParseError("empty input, the degree is unknown", 1, 1)
    return terms, seen_degree


def parse_form(text: str, num_vars: int, domain: Domain, degree: Optional[int] = None) -> DPForm:
    """Parses ``c * x1^(a1) x2^(a2) + ...`` where ^(k) is a divided power

    Raises:
        FormParseError: malformed text, unknown variables or mixed degrees
    """
    terms, degree = _parse(text, num_vars, domain, "x", degree)
    return DPForm(num_vars, degree, terms, domain)


def parse_op(text: str, num_vars: int, domain: Domain, degree: Optional[int] = None) -> DiffOp:
    """Parses an operator such as ``d1^2 - d2^2``"""
    terms, degree = _parse(text, num_vars, domain, "d", degree)
    return DiffOp(num_vars, degree, terms, domain)


def _coefficient_text(value: Any, domain: Domain) -> Tuple[str, bool]:
    """Returns the rendering of |value| and whether value is negative"""
    if domain.is_QQ or domain.is_FiniteField:
        text = scalars.scalar_str(value, domain)
        if text.startswith("-"):
            return text[1:], True
        return text, False
    return f"({domain.to_sympy(value)})", False


def format_form(element: _Homogeneous, prefix: Optional[str] = None) -> str:
    """Renders an element in the syntax accepted by :func:`parse_form` / :func:`parse_op`"""
    if element.is_zero():
        return "0"
    if prefix is None:
        prefix = "d" if isinstance(element, DiffOp) else "x"
    divided = prefix == "x"
    pieces = []
    for alpha, c in element:
        coefficient, negative = _coefficient_text(c, element.domain)
        factors = []
        for i, a in enumerate(alpha):
            if not a:
                continue
            if a == 1:
                factors.append(f"{prefix}{i + 1}")
            elif divided:
                factors.append(f"{prefix}{i + 1}^({a})")
            else:
                factors.append(f"{prefix}{i + 1}^{a}")
        monomial = " ".join(factors)
        if not monomial:
            body = coefficient
        elif coefficient == "1":
            body = monomial
        else:
            body = f"{coefficient} * {monomial}"
        if not pieces:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f"- {body}" if negative else f"+ {body}")
    return " ".join(pieces)
