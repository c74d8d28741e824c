"""Select the compiled kernels when they were built, else the Python ones."""

import os

try:
    if os.environ.get("DIVPOW_PURE_PYTHON"):
        raise ImportError("compiled kernels disabled by DIVPOW_PURE_PYTHON")
    from ._kernels import (  # type: ignore[attr-defined]
        chunk_canonical,
        interval_fillings,
        lie_comb_bracket,
        lie_tree_normal_form,
        young_fillings,
    )

    COMPILED = True
except ImportError:
    from ._kernels_py import (
        chunk_canonical,
        interval_fillings,
        lie_comb_bracket,
        lie_tree_normal_form,
        young_fillings,
    )

    COMPILED = False

__all__ = [
    "COMPILED",
    "chunk_canonical",
    "interval_fillings",
    "lie_comb_bracket",
    "lie_tree_normal_form",
    "young_fillings",
]
