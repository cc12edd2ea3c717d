"""Backend selection for the constraint-search kernel.

The compiled extension is used when it imports; setting ``PCFV_PURE_PYTHON=1``
forces the pure-Python implementation.  ``BACKEND`` names the active one.
"""
from __future__ import annotations

import os

from . import _pykernels

_compiled = None
if os.environ.get("PCFV_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _compiled  # type: ignore[no-redef]
    except ImportError:
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"

_I64 = 2 ** 62


def search(n_pos, n_dom, tables, le_pairs, le_dom, constraints, plot_sets, cap,
           n_val=None, backend=None, count_only=False):
    """Enumerate constrained assignments; see ``_pykernels.search``.

    ``n_val`` bounds the values stored in ``tables``; it is needed to pack
    plot tuples for the compiled kernel, which is skipped when they would
    not fit in 64 bits.
    """
    backend = backend or BACKEND
    if n_val is None:
        n_val = max((max(t) for t in tables if t), default=0) + 1
    if backend == "cython" and _compiled is not None:
        longest = max((len(h) for h, _, _ in constraints), default=0)
        if max(n_val, 2) ** longest < _I64:
            return _compiled.search(n_pos, n_dom, tables, le_pairs, le_dom, constraints,
                                    plot_sets, cap, max(n_val, 1), count_only)
    return _pykernels.search(n_pos, n_dom, tables, le_pairs, le_dom, constraints, plot_sets, cap,
                             count_only)


def count(n_pos, n_dom, tables, le_pairs, le_dom, constraints, plot_sets, n_val=None, backend=None) -> int:
    """Number of solutions, without materializing them."""
    return search(n_pos, n_dom, tables, le_pairs, le_dom, constraints, plot_sets, 0,
                  n_val, backend, count_only=True)


def identity_tables(n: int) -> list[tuple[int]]:
    return [(e,) for e in range(n)]
