"""Hot numerical kernels.

The compiled Cython extension ``_core`` is used when it has been built;
otherwise the pure-Python ``_fallback`` twins are imported. Set
``SEQDISC_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _fallback

BACKEND = "python"

if os.environ.get("SEQDISC_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _core as _impl
        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _fallback
else:
    _impl = _fallback

covering_arc = _impl.covering_arc
phase_sumset = _impl.phase_sumset
counter_uniforms = _impl.counter_uniforms
sample_categorical = _impl.sample_categorical
derive_seed = _fallback.derive_seed

__all__ = ["BACKEND", "covering_arc", "phase_sumset", "counter_uniforms", "sample_categorical", "derive_seed"]
