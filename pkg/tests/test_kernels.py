"""Backend equivalence: the compiled kernel must match the NumPy fallback
and both must match the scalar routines."""

import numpy as np
import pytest

from pfkit import _kernels
from pfkit._kernels import _fallback
from pfkit.errors import DegenerateSpectrum
from pfkit.mat2 import eigenpairs, eigvals2
from pfkit.symmetry import classify_phase

try:
    from pfkit._kernels import _core
except ImportError:
    _core = None

TOL = 1e-10


def random_batch(rng, n):
    def z():
        return rng.normal(size=n) + 1j * rng.normal(size=n)
    return z(), z(), z(), z()


def special_batch():
    """Hand-picked rows covering every phase class and edge."""
    mats = [
        (0, 1, 1, 0),          # unbroken
        (2j, 1, 1, -2j),       # broken
        (1j, 1, 1, -1j),       # exceptional point
        (1, 1, 0, 1),          # Jordan block
        (1j, 0, 0, 2j),        # unclassifiable
        (1, 0, 1, 2),          # vanishing (0,1) entry
        (3, 0, 0, 3),          # scalar
    ]
    cols = list(zip(*mats))
    return tuple(np.array(c, dtype=complex) for c in cols)


class TestBackendsAgree:
    @pytest.mark.skipif(_core is None, reason="compiled kernel not built")
    def test_random_batches(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            h = random_batch(rng, 512)
            out_c = _core.sweep_eval(*h, TOL)
            out_p = _fallback.sweep_eval(*h, TOL)
            for a, b in zip(out_c, out_p):
                if a.dtype == np.int8:
                    assert np.array_equal(a, b)
                else:
                    both_inf = np.isinf(a) & np.isinf(b) if a.dtype != complex \
                        else np.zeros(len(a), bool)
                    mask = ~both_inf
                    assert np.allclose(a[mask], b[mask], rtol=1e-12, atol=1e-12)

    @pytest.mark.skipif(_core is None, reason="compiled kernel not built")
    def test_special_rows(self):
        h = special_batch()
        out_c = _core.sweep_eval(*h, TOL)
        out_p = _fallback.sweep_eval(*h, TOL)
        assert np.array_equal(out_c[4], out_p[4])  # identical phase codes
        assert np.array_equal(np.isinf(out_c[3]), np.isinf(out_p[3]))

    @pytest.mark.skipif(_core is None, reason="compiled kernel not built")
    def test_csv_formatter_bytes_identical(self):
        rng = np.random.default_rng(21)
        n = 4096
        scale = np.power(10.0, rng.integers(-12, 12, n).astype(float))

        def fcol():
            return np.ascontiguousarray(rng.normal(size=n) * scale)

        cols = [fcol() for _ in range(8)]
        cols[4][::7] = np.inf  # the abs_gamma sentinel
        phase = np.ascontiguousarray(rng.integers(0, 4, n), dtype=np.int8)
        pf = np.ascontiguousarray(rng.integers(0, 2, n), dtype=np.uint8)
        for p2 in (None, fcol()):
            args = (cols[0], p2, cols[1], cols[2], cols[3], cols[4],
                    cols[5], cols[6], cols[7], phase, pf)
            assert _core.format_rows(*args) == _fallback.format_rows(*args)


class TestKernelMatchesScalar:
    def test_eigenvalues_match_closed_form(self):
        rng = np.random.default_rng(12)
        h = random_batch(rng, 300)
        e0, e1, *_ = _kernels.sweep_eval(*h, TOL)
        for i in range(300):
            m = np.array([[h[0][i], h[1][i]], [h[2][i], h[3][i]]])
            lo, hi = eigvals2(m)
            assert abs(e0[i] - lo) < 1e-12 * (1 + abs(lo))
            assert abs(e1[i] - hi) < 1e-12 * (1 + abs(hi))

    def test_phase_codes_match_classifier(self):
        rng = np.random.default_rng(14)
        h = random_batch(rng, 300)
        *_, phase = _kernels.sweep_eval(*h, TOL)
        labels = np.array(_kernels.PHASE_LABELS)[phase]
        for i in range(300):
            m = np.array([[h[0][i], h[1][i]], [h[2][i], h[3][i]]])
            assert labels[i] == classify_phase(m, tol=TOL).phase.label

    def test_ep_decision_matches_eigenpairs(self):
        h = special_batch()
        *_, phase = _kernels.sweep_eval(*h, TOL)
        for i in range(len(phase)):
            m = np.array([[h[0][i], h[1][i]], [h[2][i], h[3][i]]])
            degenerate = False
            try:
                eigenpairs(m, tol=TOL)
            except DegenerateSpectrum:
                degenerate = True
            assert degenerate == (phase[i] == 2)


class TestBackendSelection:
    def test_backend_reported(self):
        assert _kernels.BACKEND in ("compiled", "python")

    def test_pure_env_forces_fallback(self, monkeypatch):
        import importlib
        import pfkit._kernels as kmod

        monkeypatch.setenv("PFKIT_PURE", "1")
        reloaded = importlib.reload(kmod)
        try:
            assert reloaded.BACKEND == "python"
        finally:
            monkeypatch.delenv("PFKIT_PURE")
            importlib.reload(kmod)
