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
"""Interchange documents for forms and parameter families, and JSON encoding of reports"""
from __future__ import annotations

import json
import pathlib
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, Field, field_validator, model_validator
from sympy import sympify
from sympy.polys.matrices import DomainMatrix

from .algebra import scalars
from .algebra.forms import DPForm, format_form
from .splitting.degenerate import ParamForm


class TermDocument(BaseModel, extra="forbid"):
    """One term: exponent vector and coefficient text"""

    exp: List[int]
    coef: str


class FormDocument(BaseModel, extra="allow"):
    """Schema of a divided-power form document"""

    field: Union[str, Dict[str, int]] = "Q"
    r: int = Field(ge=1)
    d: int = Field(ge=0)
    terms: List[TermDocument] = []
    name: Optional[str] = None

    @field_validator("field")
    @classmethod
    def _known_field(cls, value):
        scalars.field_from_descriptor(value)
        return value

    @model_validator(mode="after")
    def _exponents_fit(self):
        for term in self.terms:
            if len(term.exp) != self.r or min(term.exp) < 0 or sum(term.exp) != self.d:
                raise ValueError(f"exponent {term.exp} does not fit r={self.r}, d={self.d}")
        return self

    @property
    def domain(self):
        return scalars.field_from_descriptor(self.field)

    def to_form(self) -> DPForm:
        """The form described by this document

        Raises:
            ValueError: a coefficient does not parse in the field
        """
        domain = self.domain
        terms: Dict[tuple, Any] = {}
        for term in self.terms:
            alpha = tuple(term.exp)
            terms[alpha] = terms.get(alpha, domain.zero) + scalars.parse_scalar(term.coef, domain)
        return DPForm(self.r, self.d, terms, domain)

    @classmethod
    def from_form(cls, f: DPForm, name: Optional[str] = None) -> "FormDocument":
        """A canonical document: terms in lexicographically descending exponent order"""
        terms = [
            TermDocument(exp=list(alpha), coef=scalars.scalar_str(c, f.domain))
            for alpha, c in sorted(f.terms.items(), reverse=True)
        ]
        return cls(field=scalars.field_descriptor(f.domain), r=f.num_vars, d=f.degree, terms=terms, name=name)

    def canonical(self) -> "FormDocument":
        return type(self).from_form(self.to_form(), self.name)

    def to_json(self) -> str:
        return dump_json(self.model_dump(exclude_none=True))


class ParamFormDocument(FormDocument):
    """A form document whose coefficients are polynomials in t1..tn"""

    params: int = Field(ge=1)

    def to_param_form(self) -> ParamForm:
        """The family described by this document

        Raises:
            ValueError: a coefficient is not a polynomial in t1..tn over the field
        """
        base = self.domain
        ring = scalars.parameter_ring(base, self.params)
        names = {str(s): s for s in scalars.parameter_symbols(self.params)}
        terms: Dict[tuple, Any] = {}
        for term in self.terms:
            try:
                value = ring.from_sympy(sympify(term.coef, locals=names))
            except Exception as exc:
                raise ValueError(f"coefficient {term.coef!r} is not a polynomial in t1..t{self.params}") from exc
            alpha = tuple(term.exp)
            terms[alpha] = terms.get(alpha, ring.zero) + value
        return ParamForm(DPForm(self.r, self.d, terms, ring), base)

    def to_form(self) -> DPForm:
        return self.to_param_form().form

    @classmethod
    def from_param_form(cls, family: ParamForm, name: Optional[str] = None) -> "ParamFormDocument":
        strings = family.coefficient_strings()
        terms = [TermDocument(exp=list(alpha), coef=strings[alpha]) for alpha in sorted(strings, reverse=True)]
        return cls(
            field=scalars.field_descriptor(family.base),
            r=family.form.num_vars,
            d=family.form.degree,
            params=family.num_params,
            terms=terms,
            name=name,
        )

    def canonical(self) -> "ParamFormDocument":
        return type(self).from_param_form(self.to_param_form(), self.name)


def load_document(source: Union[str, pathlib.Path, Dict[str, Any]]) -> FormDocument:
    """Reads a form or parameter-family document from a path, a JSON string or a dict

    Raises:
        json.JSONDecodeError: malformed JSON
        pydantic.ValidationError: a document that does not fit the schema
    """
    if isinstance(source, pathlib.Path):
        data = json.loads(source.read_text())
    elif isinstance(source, str):
        data = json.loads(source)
    else:
        data = dict(source)
    if "params" in data:
        return ParamFormDocument.model_validate(data)
    return FormDocument.model_validate(data)


class DpsplitJsonEncoder(json.JSONEncoder):
    """A json encoder for reports holding exact scalars, matrices and forms"""

    def __encode(self, param: Any) -> Any:
        """
        Convert dictionary to contain only JSON serializable types. For example,
        if the key is an exponent tuple we convert it to a string.
        """
        if isinstance(param, dict):
            encoded = {}
            for key, value in param.items():
                if isinstance(key, (bool, float, int, str)) or key is None:
                    encoded[key] = self.__encode(value)
                else:
                    encoded[str(key)] = self.__encode(value)
            return encoded
        elif isinstance(param, (list, tuple)):
            return [self.__encode(p) for p in param]
        else:
            return param

    def encode(self, o: Any) -> str:
        return super().encode(self.__encode(o))

    def iterencode(self, o: Any, _one_shot: bool = False):
        return super().iterencode(self.__encode(o), _one_shot)

    def default(self, o: Any) -> Any:
        if isinstance(o, BaseModel):
            return o.model_dump(exclude_none=True)
        if isinstance(o, DomainMatrix):
            return [[str(c) for c in row] for row in scalars.entries(o)]
        if isinstance(o, DPForm):
            return format_form(o)
        if hasattr(o, "to_dict"):
            return o.to_dict()
        # numpy arrays and scalars
        if hasattr(o, "tolist"):
            return o.tolist()
        if type(o).__module__.split(".")[0] in ("sympy", "gmpy2", "flint"):
            return str(o)
        return json.JSONEncoder.default(self, o)


def dump_json(payload: Any) -> str:
    return json.dumps(payload, cls=DpsplitJsonEncoder, indent=2, ensure_ascii=False)
