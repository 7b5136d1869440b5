"""Kernel backend selection.

The compiled extension ``quadric_landau._core`` is preferred when it has been
built; otherwise the pure-Python kernels are used.  Set the environment
variable ``QUADRIC_LANDAU_BACKEND`` to ``python`` or ``cython`` to force a
choice (forcing ``cython`` raises if the extension is missing).
"""

import os

from . import _core_py

_forced = os.environ.get("QUADRIC_LANDAU_BACKEND", "").strip().lower()

if _forced == "python":
    core = _core_py
    BACKEND = "python"
elif _forced == "cython":
    from . import _core as core  # noqa: F401

    BACKEND = "cython"
else:
    try:
        from . import _core as core  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        core = _core_py
        BACKEND = "python"

EL2D = _core_py.EL2D
HYP2D = _core_py.HYP2D
PAR2D = _core_py.PAR2D
EL3D = _core_py.EL3D
PAR3D = _core_py.PAR3D

STATUS_OK = _core_py.STATUS_OK
STATUS_SINGULARITY = _core_py.STATUS_SINGULARITY
STATUS_STEP_UNDERFLOW = _core_py.STATUS_STEP_UNDERFLOW
STATUS_MAX_STEPS = _core_py.STATUS_MAX_STEPS
STATUS_EVENT_OVERFLOW = _core_py.STATUS_EVENT_OVERFLOW
