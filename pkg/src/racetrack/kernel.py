"""Selects the compiled kernel when available.

Set ``RACETRACK_BACKEND=python`` to force the pure-Python fallback.
"""

from __future__ import annotations

import os

from . import _pykernel

python_backend = _pykernel

try:
    from . import _ckernel as compiled_backend
except ImportError:  # extension not built
    compiled_backend = None

if os.environ.get("RACETRACK_BACKEND", "").lower() == "python" or compiled_backend is None:
    backend = _pykernel
else:
    backend = compiled_backend

INF = _pykernel.INF


def available() -> list:
    return [b for b in (compiled_backend, _pykernel) if b is not None]
