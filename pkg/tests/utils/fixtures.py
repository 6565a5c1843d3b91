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
"""Access to the golden example records and rc files under tests/fixtures"""
import json
import pathlib
from typing import Any, Dict, List, Union

FIXTURES_DIR = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def get_fixture_path(*parts: str) -> pathlib.Path:
    """Path of a fixture, given as path parts relative to tests/fixtures"""
    return FIXTURES_DIR.joinpath(*parts)


def load_json_fixture(file_name: str) -> Union[Dict[str, Any], List[Dict[str, Any]]]:
    """Parses a JSON fixture, e.g. the list of example form records

    Args:
        file_name: name of the file inside tests/fixtures

    Returns:
        the decoded JSON value
    """
    return json.loads(get_fixture_path(file_name).read_text(encoding="utf-8"))
