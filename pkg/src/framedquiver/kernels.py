"""Prime-field kernel selection.

The compiled ``_kernels`` extension is used when it imports; otherwise the
pure-Python ``_kernels_py`` module is used.  Setting ``FRAMEDQUIVER_PURE=1``
forces the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("FRAMEDQUIVER_PURE"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:  # pragma: no cover - depends on the build
        _impl = _kernels_py

BACKEND = "compiled" if _impl is not _kernels_py else "python"

rref_modp = _impl.rref_modp
rank_modp = _impl.rank_modp
scan_subspaces = _impl.scan_subspaces
