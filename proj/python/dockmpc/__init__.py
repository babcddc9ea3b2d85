# Copyright 2026 The dockmpc Authors
# SPDX-License-Identifier: Apache-2.0
"""Receding-horizon docking controller for two omnidirectional robots."""

import json as _json
import os as _os

from ._core import (
    ConfigError,
    DomainError,
    Error,
    NumericError,
    check_gradients,
    compare,
    preset_names,
    residuals,
)
from . import _core

__all__ = [
    "ConfigError",
    "DomainError",
    "Error",
    "NumericError",
    "check_gradients",
    "compare",
    "load_config",
    "preset",
    "preset_names",
    "residuals",
    "run",
    "save_config",
]


def preset(name):
    """Built-in scenario as a configuration dict (angles in degrees)."""
    return _json.loads(_core.preset_json(name))


def load_config(path):
    """Reads and validates a JSON configuration file."""
    with open(path, encoding="utf-8") as f:
        return _json.loads(_core.normalize_config(f.read()))


def save_config(config, path):
    """Validates a configuration and writes it with all defaults filled in."""
    text = _core.normalize_config(_json.dumps(config))
    with open(path, "w", encoding="utf-8") as f:
        f.write(text + "\n")


def run(config, out_dir=None):
    """Runs a scenario given a preset name or a configuration dict.

    Returns a dict with outcome, message, metrics and a column-oriented
    trajectory. When out_dir is set the CSV, SVG and JSON outputs are written.
    """
    if isinstance(config, str):
        config = preset(config)
    if out_dir is not None:
        _os.makedirs(out_dir, exist_ok=True)
    return _core.run(_json.dumps(config), out_dir is not None, out_dir or "")
