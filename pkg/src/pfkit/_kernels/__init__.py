"""Batch kernels for grid evaluation, with backend selection at import.

The hot loop of a parameter sweep is: eigenvalues of a 2x2 complex matrix,
the coalescence discriminant, |gamma| and the phase class, per grid point.
A Cython extension (``_core``) implements it as a tight C loop; a
numpy-vectorized fallback (``_fallback``) implements the identical contract.
The compiled backend is used when importable unless ``PFKIT_PURE`` is set in
the environment.

Both backends expose::

    sweep_eval(h00, h01, h10, h11, tol)
        -> (e0, e1, disc, abs_gamma, phase_code)

on contiguous complex128 arrays, where e0 <= e1 lexicographically by
(re, im), ``disc`` is |e1 - e0|^2, ``abs_gamma`` is |h01| / |e1 - e0| (inf
on coalescent rows) and ``phase_code`` is int8: 0 unbroken, 1 broken, 2
exceptional point, 3 unclassifiable.  The classification rules match the
scalar ones in :mod:`pfkit.mat2` / :mod:`pfkit.symmetry` exactly.

They also expose ``format_rows`` (CSV body formatting of result columns),
which produces byte-identical output on both backends.
"""

import os

from . import _fallback

PHASE_LABELS = ("unbroken", "broken", "ep", "unclassifiable")

if os.environ.get("PFKIT_PURE"):
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from . import _core as _impl
        BACKEND = "compiled"
    except ImportError:
        _impl = _fallback
        BACKEND = "python"

sweep_eval = _impl.sweep_eval
format_rows = _impl.format_rows

__all__ = ["sweep_eval", "format_rows", "BACKEND", "PHASE_LABELS"]
