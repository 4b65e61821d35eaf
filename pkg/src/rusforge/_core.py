"""Kernel selection: compiled extension when available, pure Python otherwise.

Set ``RUSFORGE_PURE_PYTHON=1`` to force the fallback (used by the benchmark
and the parity tests).
"""

from __future__ import annotations

import os

BACKEND = "python"

if os.environ.get("RUSFORGE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from ._core_c import (  # type: ignore[import-not-found]
            apply_1q,
            trial_divide,
            zw_abs2,
            zw_div_sqrt2,
            zw_mul,
            zw_sqrt2_valuation,
        )

        BACKEND = "cython"
    except ImportError:
        pass

if BACKEND == "python":
    from ._core_py import (  # noqa: F401
        apply_1q,
        trial_divide,
        zw_abs2,
        zw_div_sqrt2,
        zw_mul,
        zw_sqrt2_valuation,
    )

__all__ = [
    "BACKEND",
    "apply_1q",
    "trial_divide",
    "zw_abs2",
    "zw_div_sqrt2",
    "zw_mul",
    "zw_sqrt2_valuation",
]
