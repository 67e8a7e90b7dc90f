"""Cavity-modified magnetic exchange: dielectric models, cavity kernels, exchange and spin waves."""

from pathlib import Path

from ._cavityj import *  # noqa: F401,F403
from ._cavityj import ConfigError, __version__, load_dielectric_preset

_HERE = Path(__file__).resolve().parent
# Installed wheels carry the presets; editable installs read them from the source tree.
PRESET_DIRS = [_HERE / "presets", _HERE.parent.parent / "presets"]


def preset(name: str) -> "DielectricModel":  # noqa: F405
    """Load a bundled substrate preset such as 'gold' or 'srtio3'."""
    for d in PRESET_DIRS:
        path = d / f"{name}.json"
        if path.is_file():
            return load_dielectric_preset(str(path))
    raise ConfigError(f"unknown substrate preset '{name}'")
