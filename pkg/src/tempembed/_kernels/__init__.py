"""Hot loops for the neural embedders.

The compiled extension is used when it imports; otherwise (or when
``TEMPEMBED_PURE_PYTHON=1`` is set) the pure-Python twins take over.  Both
implement identical sampling semantics; see ``benchmarks/bench_kernels.py``.
"""

import os

from . import _pykernels as python

BACKEND = "python"
compiled = None

if os.environ.get("TEMPEMBED_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as compiled
        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on the build
        compiled = None

_impl = compiled if compiled is not None else python

node2vec_walks = _impl.node2vec_walks
sgns_train = _impl.sgns_train
line_train = _impl.line_train
splitmix_uniforms = _impl.splitmix_uniforms

__all__ = ["BACKEND", "compiled", "python", "node2vec_walks", "sgns_train",
           "line_train", "splitmix_uniforms"]
