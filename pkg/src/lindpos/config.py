"""Project-wide tolerances and backend selection."""
from __future__ import annotations

import os
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    hermitian: float = 1e-12
    reconstruction: float = 1e-10
    positivity: float = 1e-10


TOL = Tolerances()

#: Set LINDPOS_DISABLE_NUMBA=1 to force the pure-numpy kernels.
NUMBA_DISABLED = os.environ.get("LINDPOS_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

#: Default directory for CLI output documents when --output is not given.
OUTPUT_DIR_ENV = "LINDPOS_OUTPUT_DIR"

DEFAULT_TIME_GRID = (0.0, 0.01, 0.05, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0)

#: Damping rate of the reference qubit evolutions.
REFERENCE_RATE = 4.0
