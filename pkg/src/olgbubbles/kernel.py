"""Backend selection for the hot per-period kernels.

Prefers the compiled extension; falls back to the pure-Python twin when the
extension is absent or OLGBUBBLES_BACKEND=python is set. Both backends are
bit-identical (see tests/test_kernel.py), so the choice only affects speed.
"""

import os

from . import _reference

_impl = _reference
BACKEND = "python"

if os.environ.get("OLGBUBBLES_BACKEND", "").lower() != "python":
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        pass

HORIZON = _reference.HORIZON
CAPITAL_DEATH = _reference.CAPITAL_DEATH
PRICE_NEGATIVE = _reference.PRICE_NEGATIVE
CONVERGED = _reference.CONVERGED

simulate = _impl.simulate
shoot_scan = _impl.shoot_scan


def backends():
    """Name -> module map of the available kernel implementations."""
    out = {"python": _reference}
    try:
        from . import _speedups

        out["compiled"] = _speedups
    except ImportError:
        pass
    return out
