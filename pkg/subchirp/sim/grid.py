"""Sweep grid files

One `key = v1, v2, ...` assignment per line; `#` starts a comment and
`[section]` headers are ignored. The grid is the Cartesian product of all
value lists, expanded in the order of GRID_KEYS.
"""

from itertools import product
from typing import Dict, List

import logging
from pydantic import ValidationError

from subchirp.errors import ConfigError
from subchirp.sim.runner import TrialConfig

logger = logging.getLogger(__name__)

GRID_KEYS = ["m", "L", "codebook", "decoder", "noise_var", "trials", "seed"]
ALIASES = {"users": "L", "noise": "noise_var"}


def parse_grid(text: str) -> Dict[str, List[str]]:
    grid: Dict[str, List[str]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line or (line.startswith("[") and line.endswith("]")):
            continue
        if "=" not in line:
            raise ConfigError(f"Line {lineno}: expected key = values")
        key, values = (part.strip() for part in line.split("=", 1))
        key = ALIASES.get(key, key)
        if key not in GRID_KEYS:
            raise ConfigError(f"Line {lineno}: unknown key '{key}'")
        items = [v.strip().strip('"').strip("'") for v in values.strip("[]").split(",") if v.strip()]
        if not items:
            raise ConfigError(f"Line {lineno}: no values for '{key}'")
        grid[key] = items
    return grid


def expand_grid(grid: Dict[str, List[str]]) -> List[TrialConfig]:
    for required in ("m", "L", "trials"):
        if required not in grid:
            raise ConfigError(f"Sweep grid is missing '{required}'")
    keys = [k for k in GRID_KEYS if k in grid]
    configs = []
    for values in product(*(grid[k] for k in keys)):
        try:
            configs.append(TrialConfig(**dict(zip(keys, values))))
        except ValidationError as e:
            raise ConfigError(f"Invalid sweep point {dict(zip(keys, values))}: {e}") from e
    logger.info(f"Sweep grid expands to {len(configs)} configurations")
    return configs


def load_grid(text: str) -> List[TrialConfig]:
    return expand_grid(parse_grid(text))
