"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when it was built; otherwise,
or when ``OODIR_PURE_PYTHON`` is set to a non-empty value other than ``0``,
the numpy implementations in ``_pykernels`` are used. ``BACKEND`` names the
active choice.
"""

import os

from . import _pykernels

_force_python = os.environ.get("OODIR_PURE_PYTHON", "") not in ("", "0")

if _force_python:
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

real_sh_matrix = _impl.real_sh_matrix
hsh_radial_table = _impl.hsh_radial_table
gegenbauer = _impl.gegenbauer
hsh_norm = _impl.hsh_norm
sh_offsets = _pykernels.sh_offsets


def compiled_available() -> bool:
    try:
        from . import _ckernels  # noqa: F401
    except ImportError:
        return False
    return True
