"""Kernel selection: compiled extension when available and applicable,
pure Python otherwise.

The environment variable ASPCORE2_KERNEL forces a choice: "c" requires the
compiled kernel (ImportError if missing), "py" forces the pure one. The
compiled kernel only handles programs whose packed integers fit machine
words; unsuitable programs silently use the pure kernel.
"""

from __future__ import annotations

import os

from . import _kernel_py

_INT64_MAX = (1 << 62) - 1

_compiled = None
_forced = os.environ.get("ASPCORE2_KERNEL", "").strip().lower()
if _forced == "py":
    ACTIVE_KERNEL = "python"
else:
    try:
        from . import _kernel as _compiled_module

        _compiled = _compiled_module
        ACTIVE_KERNEL = "compiled"
    except ImportError:
        if _forced == "c":
            raise ImportError(
                "ASPCORE2_KERNEL=c but the compiled kernel is not built"
            ) from None
        ACTIVE_KERNEL = "python"


def compiled_available() -> bool:
    return _compiled is not None


def fits_compiled(flat) -> bool:
    """Whether every packed integer fits the compiled kernel's word sizes."""
    size, _conflicts, _rules, _agg_index, aggs, tuples, _conds = flat
    if size > 62:
        return False
    for meta in aggs:
        if abs(meta[5]) > _INT64_MAX or abs(meta[9]) > _INT64_MAX:
            return False
        total = 0
        for t in range(meta[10], meta[10] + meta[11]):
            weight = tuples[t][0]
            if abs(weight) > _INT64_MAX:
                return False
            total += abs(weight)
        if total > _INT64_MAX:
            return False
    return True


def solve_masks(flat, kernel: str | None = None) -> list[int]:
    """Enumerate answer-set bitmasks with the selected kernel."""
    choice = kernel or ACTIVE_KERNEL
    if choice == "compiled" and _compiled is not None and fits_compiled(flat):
        return _compiled.solve_masks(flat)
    return _kernel_py.solve_masks(flat)
