"""
Configuration management for ncinequality.

This module handles loading and validating numerical settings from:
1. an explicit path (``--config PATH`` on the command line)
2. ~/.ncinequality/config.json
3. built-in defaults
"""

import json
import os
from typing import Any, Optional

from traitlets import Float, HasTraits, Int, TraitError, validate

from .logger import get_logger

USER_CONFIG_PATH = "~/.ncinequality/config.json"


class Settings(HasTraits):
    """Validated numerical settings shared by the library and the CLI."""

    structural_tolerance = Float(1e-10).tag(config=True)
    comparison_tolerance = Float(1e-12).tag(config=True)
    bisection_tolerance = Float(1e-6).tag(config=True)
    pstar_match_tolerance = Float(1e-9).tag(config=True)
    max_workers = Int(1).tag(config=True)

    @validate(
        "structural_tolerance",
        "comparison_tolerance",
        "bisection_tolerance",
        "pstar_match_tolerance",
    )
    def _check_positive(self, proposal):
        if not proposal["value"] > 0:
            raise TraitError(f"{proposal['trait'].name} must be positive")
        return proposal["value"]

    @validate("max_workers")
    def _check_workers(self, proposal):
        if proposal["value"] < 1:
            raise TraitError("max_workers must be at least 1")
        return proposal["value"]

    def as_dict(self) -> dict[str, Any]:
        """Current settings as a plain dictionary."""
        return {name: getattr(self, name) for name in self.trait_names(config=True)}


class ConfigurationManager:
    """Manages configuration loading and validation for ncinequality."""

    def __init__(self):
        """Initialize with default settings."""
        self.settings = Settings()
        self.source: Optional[str] = None
        self.logger = get_logger()

    def load(self, path: Optional[str] = None) -> Settings:
        """
        Load settings from config files.

        Priority order:
        1. ``path`` if given
        2. ~/.ncinequality/config.json
        3. Default values

        Args:
            path: Optional explicit configuration file

        Returns:
            Validated Settings instance
        """
        candidates = [path] if path else []
        candidates.append(USER_CONFIG_PATH)

        for candidate in candidates:
            expanded = os.path.expanduser(candidate)
            if os.path.exists(expanded):
                return self._load_file(expanded)
            if candidate == path:
                self.logger.warning(f"Configuration file {path} not found. Using defaults.")

        self.logger.info("No configuration file found. Using default settings.")
        return self.settings

    def _load_file(self, path: str) -> Settings:
        """Load one JSON file, falling back to defaults field by field."""
        try:
            with open(path, encoding="utf-8") as f:
                config = json.load(f)
        except Exception as e:
            self.logger.warning(f"Could not read configuration file {path}: {str(e)}")
            return self.settings

        if not isinstance(config, dict):
            self.logger.warning(f"Configuration file {path} must hold a JSON object.")
            return self.settings

        self.logger.info(f"Loading configuration from {path}")
        self.source = path
        known = set(self.settings.trait_names(config=True))
        for key, value in config.items():
            if key not in known:
                self.logger.warning(f"Ignoring unknown configuration key '{key}'")
                continue
            try:
                setattr(self.settings, key, value)
            except TraitError as e:
                self.logger.warning(
                    f"Invalid value for '{key}' ({value!r}): {str(e)}. Keeping default."
                )
        return self.settings


def load_settings(path: Optional[str] = None) -> Settings:
    """Shortcut for ``ConfigurationManager().load(path)``."""
    return ConfigurationManager().load(path)
