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

from .algebra import DiffOp, DPForm, FormParseError, compute_mf, format_form, hilbert_function, parse_form
from .config import Dpsplitrc, Settings
from .splitting import NoNilpotentError, ParamForm, regular_split
from .version import __version__
