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
"""Regular splittings, degenerate splittings over parameter rings and rank obstructions"""

from .degenerate import (
    DegenerateSplitting,
    NoNilpotentError,
    ParamForm,
    degenerate_split_multimatrix,
    degenerate_split_onematrix,
    find_nilpotent,
)
from .obstruction import ObstructionVerdict, nilpotent_rank_obstruction
from .regular import (
    SplittingReport,
    group,
    regular_split,
    splitting_decision,
    splitting_upper_bound,
    verify_regular_splitting,
)
