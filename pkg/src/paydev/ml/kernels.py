"""Split-kernel backend selection.

The compiled extension is preferred when importable; the numpy fallback is
contractually bit-identical. Set PAYDEV_KERNEL=python or PAYDEV_KERNEL=cython
to force a backend (the benchmark and the equivalence tests do).
"""

import os

from paydev.ml import _split_py
from paydev.ml._split_py import node_score  # noqa: F401  (shared definition)

try:
    from paydev.ml import _split_cy
except ImportError:
    _split_cy = None


def _select():
    forced = os.environ.get("PAYDEV_KERNEL", "")
    if forced == "python":
        return "python", _split_py.best_split
    if forced == "cython":
        if _split_cy is None:
            raise ImportError(
                "PAYDEV_KERNEL=cython but paydev.ml._split_cy is not built"
            )
        return "cython", _split_cy.best_split
    if forced:
        raise ValueError(f"unknown PAYDEV_KERNEL value {forced!r}")
    if _split_cy is not None:
        return "cython", _split_cy.best_split
    return "python", _split_py.best_split


BACKEND, best_split = _select()


def available_backends():
    """name -> best_split implementation, for benchmarks and tests."""
    out = {"python": _split_py.best_split}
    if _split_cy is not None:
        out["cython"] = _split_cy.best_split
    return out
