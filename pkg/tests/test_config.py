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
import pytest

from dpsplit.config import Dpsplitrc, Settings, load_settings


def test_load_empty_rc_file(mock_rc_file):
    """an rc file without a [defaults] section gives the default settings"""
    assert Dpsplitrc(mock_rc_file).load_settings() == Settings()


def test_load_missing_rc_file(tmp_path):
    """a missing rc file gives the default settings"""
    assert load_settings(tmp_path / "absent") == Settings()


def test_load_filled_rc_file(filled_rc_file):
    """known keys are read as integers, unknown keys are kept as extras"""
    settings = Dpsplitrc(filled_rc_file).load_settings()
    assert settings.seed == 7
    assert settings.prime == 103
    assert settings.retry_budget == 3
    assert settings.degree_bound == Settings().degree_bound
    assert settings.extras == {"plot_style": "dark"}


def test_save_settings(mock_rc_file):
    """save_settings writes every key, extras flattened into [defaults]"""
    settings = Settings(seed=11, extras={"plot_style": "light"})
    Dpsplitrc(mock_rc_file).save_settings(settings)
    with open(mock_rc_file, "r") as file:
        actual_config = file.read()

    assert "[defaults]\n" in actual_config
    assert "seed = 11\n" in actual_config
    assert "plot_style = light\n" in actual_config
    assert Dpsplitrc(mock_rc_file).load_settings() == settings


def test_save_creates_directory(tmp_path):
    rc_file = tmp_path / "nested" / "dpsplitrc"
    Dpsplitrc(rc_file).save_settings(Settings(prime=7))
    assert load_settings(rc_file).prime == 7


def test_non_integer_setting(mock_rc_file):
    with open(mock_rc_file, "w") as file:
        file.write("[defaults]\nseed = many\n")
    with pytest.raises(ValueError):
        Dpsplitrc(mock_rc_file).load_settings()


def test_negative_setting():
    with pytest.raises(ValueError):
        Settings(retry_budget=-1)


def test_updated_ignores_none():
    """command line overrides left unset keep the loaded values"""
    settings = Settings(seed=3, prime=103)
    updated = settings.updated(seed=None, prime=107, degree_bound=4)
    assert (updated.seed, updated.prime, updated.degree_bound) == (3, 107, 4)
    assert settings.prime == 103
