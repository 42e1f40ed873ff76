"""Backend selection for the brute-force kernels.

The compiled module is used when it imports; ``ZN_PURE_PYTHON=1`` forces the
pure-Python fallback.  Both expose ``step``, ``run``, ``is_admissible``,
``count_brute``, ``admissible_words`` and ``follower_masks``.
"""

import os

from . import _pykernels

if os.environ.get("ZN_PURE_PYTHON") == "1":
    backend = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as backend
        BACKEND = "cython"
    except ImportError:
        backend = _pykernels
        BACKEND = "python"

step = backend.step
run = backend.run
is_admissible = backend.is_admissible
count_brute = backend.count_brute
admissible_words = backend.admissible_words
follower_masks = backend.follower_masks
