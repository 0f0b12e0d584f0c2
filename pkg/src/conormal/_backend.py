"""Selects the flow kernel at import.

The compiled extension is used when it was built; otherwise the numpy
implementation. Setting ``CONORMAL_PURE=1`` forces the numpy kernel.
"""

import os

from . import _flowkernel_py
from ._layout import WIDTH

BACKEND = "python"
kernel = _flowkernel_py

if os.environ.get("CONORMAL_PURE") != "1":
    try:
        from . import _flowkernel as _compiled
    except ImportError:
        pass
    else:
        if _compiled.TERM_WIDTH != WIDTH:
            raise ImportError("compiled kernel layout is stale; rebuild the extension")
        kernel = _compiled
        BACKEND = "compiled"

integrate = kernel.integrate
eval_terms = _flowkernel_py.eval_terms
