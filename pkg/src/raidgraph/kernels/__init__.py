"""Hot loops behind the public API.

Two interchangeable backends expose the same functions: ``_numba``
(compiled, the default) and ``_numpy`` (vectorised fallback). Set
``RAIDGRAPH_DISABLE_NUMBA=1`` to force the numpy path; it is also used
automatically when numba cannot be imported.
"""

import importlib
import os

_FLAG = "RAIDGRAPH_DISABLE_NUMBA"


def get_backend(name):
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    return importlib.import_module(f"{__name__}._{name}")


def _select():
    if os.environ.get(_FLAG, "").strip().lower() not in ("", "0", "false", "no"):
        return "numpy"
    try:
        import numba  # noqa: F401
    except ImportError:
        return "numpy"
    return "numba"


BACKEND = _select()
_impl = get_backend(BACKEND)

permanent_mod64 = _impl.permanent_mod64
hall_scan = _impl.hall_scan
strict_nash_indices = _impl.strict_nash_indices
exp3_play = _impl.exp3_play

__all__ = [
    "BACKEND",
    "get_backend",
    "permanent_mod64",
    "hall_scan",
    "strict_nash_indices",
    "exp3_play",
]
