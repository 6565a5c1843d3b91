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
import shutil
from pathlib import Path
from tempfile import gettempdir

import numpy as np
import pytest
from sympy.polys.domains import QQ

from dpsplit.algebra import scalars
from tests.utils.fixtures import get_fixture_path, load_json_fixture

EXAMPLES = load_json_fixture("examples.json")
EXAMPLE_NAMES = [item["name"] for item in EXAMPLES]
ANNIHILATORS = load_json_fixture("annihilators.json")
ANNIHILATOR_NAMES = [item["name"] for item in ANNIHILATORS]
SEED = 20231
PRIME = 101
GF101 = scalars.prime_field(PRIME)
FIELDS = [QQ, GF101]


@pytest.fixture
def rng() -> np.random.Generator:
    """A freshly seeded generator for random corpora"""
    yield np.random.default_rng(SEED)


@pytest.fixture
def mock_rc_file() -> Path:
    """An empty dpsplit rc file in the temp directory"""
    rc_file = Path(gettempdir()) / ".dpsplit" / "test_dpsplitrc"
    rc_file.parent.mkdir(parents=True, exist_ok=True)

    with open(rc_file, mode="w"):
        pass

    yield rc_file
    rc_file.unlink(missing_ok=True)


@pytest.fixture
def filled_rc_file(mock_rc_file) -> Path:
    """The rc file fixture overwritten with a [defaults] section and an unknown key"""
    shutil.copyfile(get_fixture_path("dpsplitrc.ini"), mock_rc_file)
    yield mock_rc_file


@pytest.fixture
def document_file(tmp_path) -> Path:
    """A path where tests can drop a form document"""
    yield tmp_path / "form.json"
