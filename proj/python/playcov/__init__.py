"""Curiosity-driven playtest coverage: sandbox, visit buffer, rollouts and analysis."""

import os
from pathlib import Path

from playcov._core import *  # noqa: F401,F403
from playcov._core import __doc__ as _core_doc

__doc__ = _core_doc
__version__ = "0.1.0"


def scenario_path(name):
    """Resolve a bundled scenario file like ``mesa.scn`` to an absolute path.

    Looks at ``$PLAYCOV_SCENARIO_DIR`` first (source checkouts), then the
    scenarios directory shipped inside the installed package.
    """
    env_dir = os.environ.get("PLAYCOV_SCENARIO_DIR")
    if env_dir:
        candidate = Path(env_dir) / name
        if candidate.exists():
            return str(candidate)
    packaged = Path(__file__).parent / "scenarios" / name
    if packaged.exists():
        return str(packaged)
    raise FileNotFoundError(f"no bundled scenario named {name!r}")
