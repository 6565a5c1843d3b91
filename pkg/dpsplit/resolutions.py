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
"""Betti tables, resolution twists, Hilbert functions and dimension counts of split forms"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import comb
from typing import Any, Dict, List, Sequence, Tuple

from .algebra.apolarity import HilbertFunction, ann_product_piece, generator_counts, hilbert_function
from .algebra.forms import DPForm, monomial_count

logger = logging.getLogger(__name__)


def binomial(a: int, b: int) -> int:
    """C(a, b), zero unless 0 <= b <= a"""
    if a < 0 or b < 0 or b > a:
        return 0
    return comb(a, b)


def nu(s: int, t: int, k: int) -> int:
    """Rank of the k-th module in the resolution of m_S m_T"""
    return binomial(s + t, k + 1) - binomial(s, k + 1) - binomial(t, k + 1)


def nu_n(n: int, r: int, supports: Sequence[int], k: int) -> int:
    """(n-1) C(r, k+1) + C(r-s, k+1) - sum_i C(r-s_i, k+1) with s = sum_i s_i

    Raises:
        ValueError: when the number of support dimensions is not n, or they exceed r
    """
    if len(supports) != n:
        raise ValueError(f"expected {n} support dimensions, got {len(supports)}")
    s = sum(supports)
    if s > r:
        raise ValueError(f"support dimensions {list(supports)} exceed r={r}")
    return (
        (n - 1) * binomial(r, k + 1)
        + binomial(r - s, k + 1)
        - sum(binomial(r - si, k + 1) for si in supports)
    )


@dataclass
class BettiTable:
    """Shifted graded Betti numbers beta_{kj} = beta_{k,k+j} of a graded quotient ring

    Attributes:
        num_vars: number of variables of the polynomial ring
        degree: largest j that may carry a nonzero entry
        entries: nonzero entries keyed by (k, j)
    """

    num_vars: int
    degree: int
    entries: Dict[Tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        self.entries = {key: value for key, value in self.entries.items() if value}
        for (k, j), value in self.entries.items():
            if value < 0:
                raise ValueError(f"negative Betti number {value} at ({k}, {j})")

    def get(self, k: int, j: int) -> int:
        return self.entries.get((k, j), 0)

    def row(self, k: int) -> List[int]:
        return [self.get(k, j) for j in range(self.degree + 1)]

    def rows(self) -> List[List[int]]:
        return [self.row(k) for k in range(self.num_vars + 1)]

    def is_self_dual(self) -> bool:
        r, d = self.num_vars, self.degree
        return all(self.get(k, j) == self.get(r - k, d - j) for k in range(r + 1) for j in range(d + 1))

    def to_dict(self) -> Dict[str, Any]:
        return {"num_vars": self.num_vars, "degree": self.degree, "rows": self.rows()}


@dataclass
class TwistMultiset:
    """The twists of each free module H_k of a graded free resolution

    ``modules[k][tau]`` is the multiplicity of R(tau) in H_k.
    """

    num_vars: int
    degree: int
    modules: Dict[int, Dict[int, int]] = field(default_factory=dict)

    def add(self, k: int, twist: int, multiplicity: int):
        if multiplicity < 0:
            raise ValueError(f"negative multiplicity {multiplicity} for R({twist}) in H_{k}")
        if multiplicity == 0:
            return
        slot = self.modules.setdefault(k, {})
        slot[twist] = slot.get(twist, 0) + multiplicity

    def module(self, k: int) -> Dict[int, int]:
        return dict(self.modules.get(k, {}))

    def rank(self, k: int) -> int:
        return sum(self.modules.get(k, {}).values())

    def is_self_dual(self) -> bool:
        """H_k and H_{r-k} exchange twists tau <-> -d-r-tau"""
        r, d = self.num_vars, self.degree
        for k in range(1, r):
            mirrored = {-d - r - tau: m for tau, m in self.module(r - k).items()}
            if mirrored != self.module(k):
                return False
        return True

    def to_dict(self) -> Dict[str, Any]:
        return {
            "num_vars": self.num_vars,
            "degree": self.degree,
            "modules": {
                str(k): [[twist, mult] for twist, mult in sorted(slot.items(), reverse=True)]
                for k, slot in sorted(self.modules.items())
            },
        }


def extend_betti(table: BettiTable, extra_vars: int) -> BettiTable:
    """Table of R/(S m_T + I T) from the table of S/I, T having ``extra_vars`` variables

    Each column is convolved with the binomial row C(t, .).
    """
    if extra_vars < 0:
        raise ValueError(f"negative number of extra variables {extra_vars}")
    t = extra_vars
    entries: Dict[Tuple[int, int], int] = {}
    for (i, j), value in table.entries.items():
        for k in range(i, i + t + 1):
            entries[(k, j)] = entries.get((k, j), 0) + binomial(t, k - i) * value
    return BettiTable(table.num_vars + t, table.degree, entries)


def _own_ring_table(g: DPForm) -> Tuple[BettiTable, int]:
    d = g.degree
    s = hilbert_function(g)[1]
    if s == 1:
        return BettiTable(1, d, {(0, 0): 1, (1, d): 1}), s
    if s == 2:
        counts = generator_counts(g)
        entries = {(0, 0): 1, (2, d): 1}
        for j, count in counts.items():
            if j >= 2 and count:
                entries[(1, j - 1)] = entries.get((1, j - 1), 0) + count
        if sum(entries.get((1, j), 0) for j in range(d + 1)) != 2:
            raise RuntimeError(f"binary component {g} is not a complete intersection")
        return BettiTable(2, d, entries), s
    raise ValueError(f"component Betti tables are only built for support dimension <= 2, got {s}")


def component_betti_table(g: DPForm) -> BettiTable:
    """Shifted Betti table of R/ann_R(g) for a form whose support has dimension at most 2

    A support of dimension one gives (∂^{d+1}), dimension two a complete
    intersection with generator degrees read off ann_R(g); the table is then
    extended to all variables of g.

    Raises:
        ValueError: zero form, d < 1, or a support of dimension > 2
    """
    if g.degree < 1:
        raise ValueError(f"component of degree {g.degree} has no Betti table here")
    base, s = _own_ring_table(g)
    return extend_betti(base, g.num_vars - s)


def betti_join(tables: Sequence[BettiTable], supports: Sequence[int], r: int, d: int) -> BettiTable:
    """Shifted Betti table of R/ann_R(f) for a regular splitting f = g_1 + ... + g_n

    Args:
        tables: tables of R/ann_R(g_i), all in the ambient ring of r variables
        supports: s_i = dim R_{d-1}(g_i)
        r: number of variables
        d: degree of f

    Returns:
        The table with inner entries sum_i beta^{g_i}_{kj} + nu_{nk} [j=1] + nu_{n,r-k} [j=d-1]
        and rim entries C(r-s, k) at j=0 and C(r-s, k-s) at j=d.

    Raises:
        ValueError: d < 2, mismatched table shapes or support dimensions
    """
    if d < 2:
        raise ValueError(f"Betti join needs d >= 2, got {d}")
    if len(tables) != len(supports) or not tables:
        raise ValueError(f"{len(tables)} tables for {len(supports)} support dimensions")
    for table in tables:
        if table.num_vars != r or table.degree != d:
            raise ValueError(
                f"table for {table.num_vars} variables and degree {table.degree} does not fit r={r}, d={d}"
            )
    n, s = len(tables), sum(supports)
    if s > r:
        raise ValueError(f"support dimensions {list(supports)} exceed r={r}")
    entries: Dict[Tuple[int, int], int] = {}
    for k in range(r + 1):
        entries[(k, 0)] = binomial(r - s, k)
        entries[(k, d)] = binomial(r - s, k - s)
        for j in range(1, d):
            value = sum(table.get(k, j) for table in tables)
            if j == 1:
                value += nu_n(n, r, supports, k)
            if j == d - 1:
                value += nu_n(n, r, supports, r - k)
            entries[(k, j)] = value
    return BettiTable(r, d, entries)


def _check_component_table(table: BettiTable, name: str):
    if table.get(1, 0):
        raise ValueError(f"the annihilator of {name} has linear generators")


def join_resolution_twists(g_table: BettiTable, h_table: BettiTable, d: int) -> TwistMultiset:
    """Twists of the minimal resolution of ann_R(g + h) for g, h in disjoint variable sets

    Args:
        g_table: shifted table of S/ann_S(g) in the s variables of g
        h_table: shifted table of T/ann_T(h) in the t variables of h
        d: common degree

    Raises:
        ValueError: d < 2, or either annihilator has linear generators
    """
    if d < 2:
        raise ValueError(f"resolution twists need d >= 2, got {d}")
    _check_component_table(g_table, "g")
    _check_component_table(h_table, "h")
    s, t = g_table.num_vars, h_table.num_vars
    r = s + t
    twists = TwistMultiset(r, d)
    for k in range(1, r):
        twists.add(k, -k - 1, nu(s, t, k))
        twists.add(k, -d - k + 1, nu(s, t, r - k))
        for j in range(1, d):
            count = sum(binomial(r - s, k - i) * g_table.get(i, j) for i in range(1, s))
            count += sum(binomial(r - t, k - i) * h_table.get(i, j) for i in range(1, t))
            twists.add(k, -k - j, count)
    twists.add(r, -r - d, 1)
    return twists


def intersection_twists(g_table: BettiTable, h_table: BettiTable, d: int) -> TwistMultiset:
    """Twists of the minimal resolution of m_S m_T + ann_S(g) T + S ann_T(h) = ann_R(g) ∩ ann_R(h)"""
    _check_component_table(g_table, "g")
    _check_component_table(h_table, "h")
    s, t = g_table.num_vars, h_table.num_vars
    r = s + t
    twists = TwistMultiset(r, d)
    for k in range(1, r + 1):
        twists.add(k, -k - 1, nu(s, t, k))
        for j in range(d + 1):
            count = sum(
                binomial(t, k - i) * g_table.get(i, j) + binomial(s, k - i) * h_table.get(i, j)
                for i in range(1, k + 1)
            )
            twists.add(k, -k - j, count)
    return twists


def hilbert_join(functions: Sequence[HilbertFunction]) -> HilbertFunction:
    """H(f) = sum_i H(g_i) - (n-1)(delta_0 + delta_d)

    Raises:
        ValueError: no functions, or functions of different degrees
    """
    if not functions:
        raise ValueError("no Hilbert functions to join")
    degrees = {h.degree for h in functions}
    if len(degrees) != 1:
        raise ValueError(f"Hilbert functions of mismatched degrees {sorted(degrees)}")
    d, n = degrees.pop(), len(functions)
    values = [sum(h[e] for h in functions) for e in range(d + 1)]
    values[0] -= n - 1
    values[d] -= n - 1
    return HilbertFunction(tuple(values))


def tangent_space_dim(f: DPForm) -> int:
    """dim (R/I^2)_d for I = ann_R(f)

    Raises:
        ValueError: d < 3 or zero form
    """
    if f.degree < 3:
        raise ValueError(f"tangent dimension needs d >= 3, got {f.degree}")
    if f.is_zero():
        raise ValueError("zero form")
    square = ann_product_piece(f)
    value = monomial_count(f.num_vars, f.degree) - len(square)
    logger.debug("dim (R/I^2)_%s = %s for %s", f.degree, value, f)
    return value


@dataclass(frozen=True)
class TangentData:
    """Per-component input of the tangent dimension count

    Attributes:
        support_dimension: s_i
        tangent_dimension: dim of the tangent space of S^i/J_i in its own s_i variables
        beta_top: beta_{1,d-1} of J_i
    """

    support_dimension: int
    tangent_dimension: int
    beta_top: int

    def to_dict(self) -> Dict[str, int]:
        return {
            "support_dimension": self.support_dimension,
            "tangent_dimension": self.tangent_dimension,
            "beta_top": self.beta_top,
        }


def component_tangent_data(g: DPForm) -> TangentData:
    """(s, T, beta_{1,d-1}) for a component g, T = dim (R/ann_R(g)^2)_d - s(r - s)"""
    r, d = g.num_vars, g.degree
    s = hilbert_function(g)[1]
    tangent = tangent_space_dim(g) - s * (r - s)
    beta_top = generator_counts(g).get(d - 1, 0) if d - 1 >= 2 else 0
    return TangentData(s, tangent, beta_top)


def tangent_formula(components: Sequence[TangentData], r: int, d: int) -> int:
    """Tangent dimension at R/ann_R(f) from the data of a regular splitting of f

    For d >= 4 this is sum T_i + sum s_i (r - s_i) + sum_i (s - s_i) beta^i_{1,d-1};
    for d = 3 the last sum is replaced by C(s, 3) - sum_i C(s_i, 3).

    Raises:
        ValueError: d < 3, no components, or supports exceeding r
    """
    if d < 3:
        raise ValueError(f"tangent formula needs d >= 3, got {d}")
    if not components:
        raise ValueError("no components")
    supports = [c.support_dimension for c in components]
    s = sum(supports)
    if s > r:
        raise ValueError(f"support dimensions {supports} exceed r={r}")
    value = sum(c.tangent_dimension for c in components) + sum(si * (r - si) for si in supports)
    if d == 3:
        value += binomial(s, 3) - sum(binomial(si, 3) for si in supports)
    else:
        value += sum((s - c.support_dimension) * c.beta_top for c in components)
    return value


@dataclass(frozen=True)
class PSplitDimension:
    dimension: int
    fiber_dimension: int

    def to_dict(self) -> Dict[str, int]:
        return {"dimension": self.dimension, "fiber_dimension": self.fiber_dimension}


def psplit_dim(r: int, supports: Sequence[int], pgor_dims: Sequence[int]) -> PSplitDimension:
    """n - 1 + sum_i dim PGor(s_i, H_i) + sum_i s_i (r - s_i), with the fiber dimension sum_i s_i^2

    Raises:
        ValueError: mismatched lengths, non-positive supports or supports exceeding r
    """
    if len(supports) != len(pgor_dims) or not supports:
        raise ValueError(f"{len(supports)} support dimensions for {len(pgor_dims)} PGor dimensions")
    if any(si < 1 for si in supports):
        raise ValueError(f"support dimensions must be positive, got {list(supports)}")
    if sum(supports) > r:
        raise ValueError(f"support dimensions {list(supports)} exceed r={r}")
    n = len(supports)
    dimension = n - 1 + sum(pgor_dims) + sum(si * (r - si) for si in supports)
    return PSplitDimension(dimension, sum(si * si for si in supports))


def pgor_dim_small(h: HilbertFunction) -> int:
    """dim PGor(s, H) for h_1 = s <= 2

    Raises:
        ValueError: h_1 > 2
    """
    d = h.degree
    s = h[1] if d >= 1 else 0
    if s <= 1:
        return 0
    if s == 2:
        return min(2 * max(h) - 1, d)
    raise ValueError(f"no dimension formula for PGor with h_1 = {s}")


def split_form_data(components: Sequence[DPForm]) -> Dict[str, Any]:
    """Betti table, Hilbert function and tangent data of f = sum of the given regular splitting

    Raises:
        ValueError: components of mixed shape
    """
    if not components:
        raise ValueError("no components")
    r, d = components[0].num_vars, components[0].degree
    if any(g.num_vars != r or g.degree != d for g in components):
        raise ValueError("components of mixed shape")
    supports = [hilbert_function(g)[1] for g in components]
    result: Dict[str, Any] = {
        "supports": supports,
        "hilbert": hilbert_join([hilbert_function(g) for g in components]).to_list(),
    }
    if max(supports) <= 2 and d >= 2:
        tables = [component_betti_table(g) for g in components]
        result["betti"] = betti_join(tables, supports, r, d).to_dict()
    if d >= 3:
        data = [component_tangent_data(g) for g in components]
        result["tangent_formula"] = tangent_formula(data, r, d)
    return result
