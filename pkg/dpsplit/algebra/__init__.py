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
"""Exact arithmetic over Q and F_p: divided-power forms, apolarity, M_f and coids

    scalars
    forms
    apolarity
    matrix_algebra
    matrix_ideals
    artinian
"""

from .apolarity import (
    HilbertFunction,
    ann_graded,
    catalecticant,
    generator_counts,
    hilbert_function,
    ideal_generators,
)
from .artinian import Coid, StructAlgebra, maximal_coid
from .forms import DiffOp, DPForm, FormParseError, apply_base_change, contract, format_form, parse_form
from .matrix_algebra import MatrixAlgebraSpace, compute_mf, gamma_f, in_mf
