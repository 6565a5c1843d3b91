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
"""Handles the loading and saving of default settings to the dpsplitrc file"""
from __future__ import annotations

import dataclasses
import logging
import pathlib
import re
from configparser import ConfigParser
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Optional

logger = logging.getLogger(__name__)

DPSPLITRC_FILE = pathlib.Path.home() / ".dpsplit" / "dpsplitrc"
DEFAULTS_SECTION = "defaults"


@dataclass
class Settings:
    """Defaults shared by the library entry points and the command line

    Attributes:
        seed: seed of every randomized choice
        prime: characteristic used for specialization certificates of rational families
        retry_budget: number of specialization points tried before giving up
        degree_bound: highest degree compared in ideal identities
        coid_attempts: random elements tried when searching for a maximal coid
        graded_max_vars: largest r for which graded generalizations are computed
        graded_max_degree: largest e for which graded generalizations are computed
        grid_radius: radius of the sampling grid over nilpotent spaces of dimension >= 3
        extras: unknown keys found in the rc file, kept as strings
    """

    seed: int = 0
    prime: int = 101
    retry_budget: int = 5
    degree_bound: int = 5
    coid_attempts: int = 12
    graded_max_vars: int = 5
    graded_max_degree: int = 2
    grid_radius: int = 2
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        for item in dataclasses.fields(self):
            if item.name == "extras":
                continue
            value = int(getattr(self, item.name))
            if value < 0:
                raise ValueError(f"setting {item.name} must be non-negative, got {value}")
            setattr(self, item.name, value)

    def to_dict(self) -> dict:
        return asdict(self)

    def updated(self, **overrides: Any) -> "Settings":
        """A copy with every non-None override applied"""
        values = self.to_dict()
        values.update({k: v for k, v in overrides.items() if v is not None})
        return Settings(**values)


class Dpsplitrc:
    """the Configuration parser for dpsplitrc files"""

    def __init__(self, rc_file: pathlib.Path = DPSPLITRC_FILE):
        """Initializes a Dpsplitrc instance

        The instance saves to and retrieves its data from rc_file

        Args:
            rc_file: the path where the dpsplitrc file is saved, defaults to ``$HOME/.dpsplit/dpsplitrc``
        """
        self._file_path = pathlib.Path(rc_file)
        self._parser = Dpsplitrc._get_parser(self._file_path)

    @property
    def file_path(self) -> pathlib.Path:
        return self._file_path

    def load_settings(self) -> Settings:
        """Retrieves the settings from the dpsplitrc file

        Missing keys fall back to the defaults of :class:`Settings`, unknown
        keys end up in its extras.

        Raises:
            ValueError: a known key holds a value that is not a non-negative integer
        """
        parser = self._parser
        if not parser or not parser.has_section(DEFAULTS_SECTION):
            return Settings()

        known = {item.name for item in dataclasses.fields(Settings)} - {"extras"}
        options: Dict[str, Any] = {"extras": {}}
        for key, value in parser.items(DEFAULTS_SECTION):
            if key in known:
                try:
                    options[key] = int(value)
                except ValueError:
                    raise ValueError(f"setting {key} in {self._file_path} is not an integer: {value!r}") from None
            else:
                options["extras"][key] = value

        logger.debug("loaded settings from %s", self._file_path)
        return Settings(**options)

    def save_settings(self, settings: Settings):
        """Saves the settings into the dpsplitrc file, creating its directory if needed

        Args:
            settings: the :class:`Settings` to save
        """
        if not self._parser:
            self._parser = ConfigParser()
        if self._parser.has_section(DEFAULTS_SECTION):
            self._parser.remove_section(DEFAULTS_SECTION)
        self._parser.add_section(DEFAULTS_SECTION)

        config = settings.to_dict()
        config.update(config.pop("extras"))  # flatten on 'extras'
        for key, value in config.items():
            self._parser.set(DEFAULTS_SECTION, str(key), str(value))

        self._file_path.parent.mkdir(parents=True, exist_ok=True)
        with self._file_path.open("w") as dest:
            self._parser.write(dest)

    @staticmethod
    def _get_parser(rc_file: pathlib.Path) -> Optional[ConfigParser]:
        """Initializes a :class:`configparser.ConfigParser` instance that
        has read from rc_file

        It returns None if rc_file does not exist.
        """
        if not rc_file.exists():
            return None

        parser = ConfigParser()
        parser.SECTCRE = re.compile(r"\[ *(?P<header>[^]]+?) *\]")
        parser.read(rc_file)

        return parser


def load_settings(rc_file: Optional[pathlib.Path] = None) -> Settings:
    return Dpsplitrc(rc_file or DPSPLITRC_FILE).load_settings()
