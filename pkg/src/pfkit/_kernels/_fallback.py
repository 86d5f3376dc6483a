"""NumPy-vectorized sweep kernel (pure-Python backend)."""

import numpy as np

_LABELS = ("unbroken", "broken", "ep", "unclassifiable")


def format_rows(p1, p2, e0r, e0i, e1r, e1i, absg, disc, margin, phase, pf):
    """CSV body rows (no header) as one str; p2 may be None for 1D grids."""
    g = "%.17g"
    p1l = p1.tolist()
    ph = phase.tolist()
    pfl = pf.tolist()
    cols = [a.tolist() for a in (e0r, e0i, e1r, e1i, absg, disc, margin)]
    if p2 is None:
        fmt = g + ",," + ",".join([g] * 7) + ",%s,%s\n"
        rows = (fmt % (p1l[i], cols[0][i], cols[1][i], cols[2][i], cols[3][i],
                       cols[4][i], cols[5][i], cols[6][i],
                       _LABELS[ph[i]], "true" if pfl[i] else "false")
                for i in range(len(p1l)))
    else:
        p2l = p2.tolist()
        fmt = ",".join([g] * 9) + ",%s,%s\n"
        rows = (fmt % (p1l[i], p2l[i], cols[0][i], cols[1][i], cols[2][i],
                       cols[3][i], cols[4][i], cols[5][i], cols[6][i],
                       _LABELS[ph[i]], "true" if pfl[i] else "false")
                for i in range(len(p1l)))
    return "".join(rows)


def sweep_eval(h00, h01, h10, h11, tol):
    """Eigenvalues, coalescence data and phase class for a batch of matrices.

    See the package docstring for the exact output contract.
    """
    h00 = np.ascontiguousarray(h00, dtype=complex)
    h01 = np.ascontiguousarray(h01, dtype=complex)
    h10 = np.ascontiguousarray(h10, dtype=complex)
    h11 = np.ascontiguousarray(h11, dtype=complex)

    tr = h00 + h11
    det = h00 * h11 - h01 * h10
    half = 0.5 * tr
    d = np.sqrt(half * half - det)
    ea = half - d
    eb = half + d
    swap = (eb.real < ea.real) | ((eb.real == ea.real) & (eb.imag < ea.imag))
    e0 = np.where(swap, eb, ea)
    e1 = np.where(swap, ea, eb)

    gap = np.abs(e1 - e0)
    disc = gap * gap
    is_ep = gap < tol * (1.0 + np.abs(tr))

    with np.errstate(divide="ignore", invalid="ignore"):
        abs_gamma = np.abs(h01) / gap
    abs_gamma = np.where(is_ep, np.inf, abs_gamma)

    def real_(z):
        return np.abs(z.imag) <= tol * (1.0 + np.abs(z.real))

    both_real = real_(e0) & real_(e1)
    conj_pair = np.abs(e1 - np.conj(e0)) <= tol * (1.0 + np.abs(e0) + np.abs(e1))

    phase = np.full(h00.shape, 3, dtype=np.int8)
    phase[conj_pair & ~both_real] = 1
    phase[both_real] = 0
    phase[is_ep] = 2
    return e0, e1, disc, abs_gamma, phase
