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
"""Package version, read from the VERSION.txt shipped next to this module"""
import pathlib

_VERSION_FILE = pathlib.Path(__file__).parent / "VERSION.txt"

__version__ = _VERSION_FILE.read_text(encoding="utf-8").strip()
