"""Scan kernels for the brute-force oracle.

The compiled Cython module is used when it was built; otherwise the numpy
implementation is loaded. Set ``DIOPH_KERNEL=python`` to force the fallback.
"""
import os

from . import _fallback

BACKEND = "python"
sup_scan = _fallback.sup_scan
spherical_scan = _fallback.spherical_scan

if os.environ.get("DIOPH_KERNEL", "").lower() != "python":
    try:
        from . import _scan
    except ImportError:
        pass
    else:
        BACKEND = "compiled"
        sup_scan = _scan.sup_scan
        spherical_scan = _scan.spherical_scan


def get_backend(name=None):
    """Return a (sup_scan, spherical_scan) pair for 'compiled', 'python' or the default."""
    if name is None:
        return sup_scan, spherical_scan
    if name == "python":
        return _fallback.sup_scan, _fallback.spherical_scan
    if name == "compiled":
        from . import _scan

        return _scan.sup_scan, _scan.spherical_scan
    raise ValueError(f"unknown kernel backend {name!r}")
