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
"""Rank obstructions to degenerate splittings of h + x_{s+1}^[d] + ... + x_r^[d]"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

from sympy import Symbol
from sympy.polys.matrices import DomainMatrix

from ..algebra import scalars
from ..algebra.apolarity import ann_graded
from ..algebra.artinian import maximal_coid, nilradical
from ..algebra.matrix_algebra import compute_mf

logger = logging.getLogger(__name__)

DEFAULT_GRID_RADIUS = 2


@dataclass
class ObstructionVerdict:
    """Whether M_h lacks nonzero nilpotents of rank at most ``bound``

    ``method`` is "exact" for nilpotent spaces of dimension at most 2 (pencil
    minors), "sampled" for larger ones, and "linear-annihilator" when
    ann(h)_1 != 0 supplies rank one nilpotents.
    """

    obstructed: bool
    bound: int
    nilpotent_dimension: int
    min_rank: Optional[int]
    method: str
    witness: Optional[List[List[str]]] = None

    @property
    def verdict(self) -> str:
        return "obstructed" if self.obstructed else "not obstructed"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "verdict": self.verdict,
            "bound": self.bound,
            "nilpotent_dimension": self.nilpotent_dimension,
            "min_rank": self.min_rank,
            "method": self.method,
            "witness": self.witness,
        }


def _minors(rows: List[List[Any]], order: int) -> List[Any]:
    size = len(rows)
    result = []
    for picked_rows in itertools.combinations(range(size), order):
        for picked_cols in itertools.combinations(range(size), order):
            sub = [[rows[i][j] for j in picked_cols] for i in picked_rows]
            result.append(sub)
    return result


def pencil_min_rank(first: DomainMatrix, second: DomainMatrix) -> int:
    """The least rank of a nonzero member x A + y B of a pencil, over the algebraic closure

    Rank <= k somewhere on the pencil exactly when all (k+1)-minors of x A + y B
    share a root in P^1: either at (1 : 0), or as a common factor of the
    minors of x A + B.
    """
    domain = first.domain
    x = Symbol("x")
    ring_domain = domain.poly_ring(x)
    ring = ring_domain.ring
    gen = ring.gens[0]
    rows_a, rows_b = scalars.entries(first), scalars.entries(second)
    pencil = [[gen * ring.ground_new(a) + ring.ground_new(b) for a, b in zip(ra, rb)] for ra, rb in zip(rows_a, rows_b)]
    best = min(scalars.rank(first), scalars.rank(second))
    for k in range(1, best):
        common = ring.zero
        for sub in _minors(pencil, k + 1):
            det = DomainMatrix(sub, (k + 1, k + 1), ring_domain).det()
            common = common.gcd(det) if common else det
            if common and common.is_ground:
                break
        if not common or not common.is_ground:
            return k
    return best


def _grid_min_rank(basis: Sequence[DomainMatrix], radius: int) -> Optional[DomainMatrix]:
    domain = basis[0].domain
    size = basis[0].shape[0]
    values = range(-radius, radius + 1)
    best, best_rank = None, None
    for coeffs in itertools.product(values, repeat=len(basis)):
        if not any(coeffs):
            continue
        m = scalars.zeros(size, size, domain)
        for c, b in zip(coeffs, basis):
            if c:
                m = m + b * domain.convert(c)
        if m.is_zero_matrix:
            continue
        rank = scalars.rank(m)
        if best_rank is None or rank < best_rank:
            best, best_rank = m, rank
    return best


def nilpotent_rank_obstruction(
    h: Any, r: int, m: int, grid_radius: int = DEFAULT_GRID_RADIUS, seed: int = 0
) -> ObstructionVerdict:
    """Decides whether f = h + x_{s+1}^[d] + ... + x_r^[d] is kept from splitting m - 1 times

    A family f_t with f_0 = f splitting m - 1 times needs a nonzero nilpotent
    of rank <= s/(m - r + s) in M_h. The verdict is "obstructed" when there is
    none.

    Args:
        h: the core form in s variables, not regularly split
        r: the ambient number of variables, r >= s
        m: the target number of components, m > r - s + 1
        grid_radius: half-width of the sampling grid for nilpotent spaces of
            dimension at least 3
        seed: seed of the coid search

    Raises:
        ValueError: a hypothesis fails, including nontrivial idempotents in M_h
    """
    s, d = h.num_vars, h.degree
    if d < 3:
        raise ValueError(f"needs d >= 3, got {d}")
    if r < s:
        raise ValueError(f"ambient r = {r} below s = {s}")
    if m <= r - s + 1:
        raise ValueError(f"m = {m} must exceed r - s + 1 = {r - s + 1}")
    bound = s // (m - r + s)
    if ann_graded(h, 1).dimension:
        return ObstructionVerdict(False, bound, 0, 1, "linear-annihilator")
    mf = compute_mf(h)
    alg = mf.structure_algebra()
    coid = maximal_coid(alg, seed=seed)
    if coid.length > 1:
        raise ValueError("M_h contains nontrivial idempotents")
    if coid.requires_extension:
        raise ValueError("M_h is local with a residue field larger than the base field")
    radical = [mf.element(v) for v in nilradical(alg)]
    logger.info("nilpotent space of dimension %d, rank bound %d", len(radical), bound)
    if not radical:
        return ObstructionVerdict(True, bound, 0, None, "exact")
    if len(radical) == 1:
        witness, min_rank, method = radical[0], scalars.rank(radical[0]), "exact"
    elif len(radical) == 2:
        min_rank, method = pencil_min_rank(*radical), "exact"
        witness = None
    else:
        witness = _grid_min_rank(radical, grid_radius)
        min_rank, method = scalars.rank(witness), "sampled"
    rendered = None
    if witness is not None:
        rendered = [[scalars.scalar_str(c, h.domain) for c in row] for row in scalars.entries(witness)]
    return ObstructionVerdict(min_rank > bound, bound, len(radical), min_rank, method, rendered)
