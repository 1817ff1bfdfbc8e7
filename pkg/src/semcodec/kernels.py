"""Kernel backend selection: compiled extension if built, NumPy otherwise.

Set SEMCODEC_PURE_PYTHON=1 to force the fallback (used by the benchmark
and by tests that compare the two backends).
"""

from __future__ import annotations

import os

if os.environ.get("SEMCODEC_PURE_PYTHON") == "1":
    from ._kernels_py import BACKEND, lasso_cd_gram
else:
    try:
        from ._speedups import BACKEND, lasso_cd_gram  # type: ignore[no-redef]
    except ImportError:
        from ._kernels_py import BACKEND, lasso_cd_gram  # type: ignore[no-redef]

__all__ = ["BACKEND", "lasso_cd_gram"]
