"""Symmetries of the decomposed Hamiltonian and phase classification.

A matrix commuting with H = omega*N + rho*1 (omega, gamma nonzero) is
pinned down by two free entries; demanding an involution fixes it to a
unique +-X pair.  X plays the role of a generalized parity, and the plain
parity-times-conjugation symmetry corresponds to matrices of the shape

    H = [[A, B], [conj(B)/x^2, conj(A)]],     x real, nonzero,

whose spectrum is real (unbroken), a complex-conjugate pair (broken) or
coalescent (exceptional point) according to the sign of

    Q_x = x^2 |B|^2 - x^4 (Im A)^2.

``classify_phase`` applies the same trichotomy to arbitrary matrices via
eigenvalue geometry alone.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateParameters,
    InternalInconsistency,
    NotInPTForm,
    TrivialCommutant,
)
from .mat2 import eigvals2, max_abs

__all__ = [
    "Phase",
    "PhaseResult",
    "PTReport",
    "commutant",
    "involutive_symmetry",
    "check_pt",
    "classify_phase",
]


class Phase(enum.Enum):
    UNBROKEN = "unbroken"
    BROKEN = "broken"
    EXCEPTIONAL_POINT = "ep"
    UNCLASSIFIABLE = "unclassifiable"

    @property
    def label(self):
        return self.value


def commutant(dec, x11, x12):
    """A member of the two-parameter family commuting with dec's matrix.

    X = [[x11, x12], [-x12*alpha*beta, x11 - x12*(alpha + beta)]].

    Raises TrivialCommutant when omega == 0 or gamma == 0, where every
    matrix commutes and the family is meaningless.
    """
    if dec.omega == 0 or dec.gamma == 0:
        raise TrivialCommutant("every matrix commutes; commutant is trivial")
    a, b = dec.alpha, dec.beta
    x11 = complex(x11)
    x12 = complex(x12)
    return np.array([[x11, x12],
                     [-x12 * a * b, x11 - x12 * (a + b)]], dtype=complex)


def involutive_symmetry(dec):
    """The commuting involution X (and its negative).

    X = [[(a+b)/(a-b), 2/(a-b)], [-2ab/(a-b), -(a+b)/(a-b)]] squares to the
    identity and commutes with the decomposed matrix; -X is the only other
    solution and is returned alongside.
    """
    a, b = dec.alpha, dec.beta
    if a == b:
        raise DegenerateParameters("alpha == beta admits no involution")
    d = a - b
    x = np.array([[(a + b) / d, 2.0 / d],
                  [-2.0 * a * b / d, -(a + b) / d]], dtype=complex)
    return x, -x


@dataclass(frozen=True)
class PhaseResult:
    """Classification outcome with its eigenvalue witness."""

    phase: Phase
    eigenvalues: tuple
    gap: float
    q: float | None = None  # populated when the matrix is in plain PT form

    @property
    def coalesced_value(self):
        if self.phase is Phase.EXCEPTIONAL_POINT:
            return 0.5 * (self.eigenvalues[0] + self.eigenvalues[1])
        return None


def _phase_from_eigvals(lo, hi, tr, tol):
    gap = abs(hi - lo)
    if gap < tol * (1.0 + abs(tr)):
        return Phase.EXCEPTIONAL_POINT, gap
    def real_(z):
        return abs(z.imag) <= tol * (1.0 + abs(z.real))
    if real_(lo) and real_(hi):
        return Phase.UNBROKEN, gap
    if abs(hi - np.conj(lo)) <= tol * (1.0 + abs(lo) + abs(hi)):
        return Phase.BROKEN, gap
    return Phase.UNCLASSIFIABLE, gap


def classify_phase(h, tol=1e-9):
    """Unbroken / broken / exceptional-point trichotomy for any 2x2 matrix.

    Works through eigenvalue geometry: real distinct spectrum is unbroken, a
    genuinely complex conjugate pair is broken, coalescence within ``tol``
    is an exceptional point, and anything else (complex eigenvalues that are
    not mutual conjugates) is reported as unclassifiable.  When the matrix
    happens to be in plain PT form the scalar Q is attached to the witness.
    """
    lo, hi = eigvals2(h)
    tr = h[0, 0] + h[1, 1]
    phase, gap = _phase_from_eigvals(lo, hi, tr, tol)
    q = None
    scale = 1.0 + max_abs(h)
    if (abs(h[1, 0] - np.conj(h[0, 1])) <= tol * scale
            and abs(h[1, 1] - np.conj(h[0, 0])) <= tol * scale):
        q = float(abs(h[0, 1]) ** 2 - h[0, 0].imag ** 2)
    return PhaseResult(phase, (lo, hi), gap, q)


@dataclass(frozen=True)
class PTReport:
    """Outcome of the generalized parity-conjugation symmetry check."""

    pt_symmetric: bool
    x_param: float
    q: float
    phase: Phase
    eps_plus: complex
    eps_minus: complex
    lambda_plus: complex | None
    lambda_minus: complex | None
    alpha: complex | None = None
    beta: complex | None = None


def _pt_matrix(x):
    return np.array([[0.0, x], [1.0 / x, 0.0]], dtype=complex)


def check_pt(h, x=1.0, tol=1e-9):
    """Check the generalized PT structure of ``h`` at parity scale ``x``.

    ``h`` must satisfy h[1,0] == conj(h[0,1])/x^2 and h[1,1] == conj(h[0,0])
    within ``tol`` (otherwise NotInPTForm is raised, carrying both residuals).
    For matrices in form, the report gives Q_x, the analytic eigenvalues
    eps_{x,+-} = Re(h00) +- sqrt(Q_x)/x^2, the phase by the sign of Q_x, and
    the eigen-action factors of the antilinear symmetry on the unit-norm
    eigenvectors: in the unbroken phase the eigenvectors are fixed up to the
    unimodular lambda_+-, in the broken phase they are exchanged.

    The Q-based phase is cross-checked against eigenvalue geometry; any
    disagreement raises InternalInconsistency.
    """
    x = float(x)
    if x == 0.0:
        raise ValueError("x must be a nonzero real")
    scale = 1.0 + max_abs(h)
    res_off = abs(h[1, 0] - np.conj(h[0, 1]) / x ** 2)
    res_diag = abs(h[1, 1] - np.conj(h[0, 0]))
    if res_off > tol * scale or res_diag > tol * scale:
        raise NotInPTForm(
            "matrix is not in generalized PT form: "
            f"offdiagonal residual {res_off:.3e}, diagonal residual {res_diag:.3e}",
            offdiag_residual=float(res_off), diag_residual=float(res_diag))

    a00 = complex(h[0, 0])
    b01 = complex(h[0, 1])
    u = a00.imag
    qx = x ** 2 * abs(b01) ** 2 - x ** 4 * u ** 2
    # the eigenvalue gap is 2*sqrt(Qx)/x^2, so the coalescence window of the
    # eigenvalue classifier (gap < tol*(1+|tr|)) translates to this Q band
    q_band = (0.5 * tol * (1.0 + abs(h[0, 0] + h[1, 1])) * x ** 2) ** 2
    root = np.sqrt(complex(qx))
    eps_p = a00.real + root / x ** 2
    eps_m = a00.real - root / x ** 2

    if abs(qx) < q_band:
        phase = Phase.EXCEPTIONAL_POINT
    elif qx > 0:
        phase = Phase.UNBROKEN
    else:
        phase = Phase.BROKEN

    geom = classify_phase(h, tol=tol)
    if geom.phase is not phase:
        # the generic eigenvalue route loses the gap below ~sqrt(eps) to
        # cancellation; only a disagreement beyond that floor is a bug
        gap_q = 2.0 * float(np.sqrt(abs(qx))) / x ** 2
        floor = 4.0 * np.sqrt(np.finfo(float).eps) * (1.0 + abs(a00) + abs(b01))
        if abs(geom.gap - gap_q) > floor:
            raise InternalInconsistency(
                f"Q-based phase {phase} disagrees with eigenvalue geometry "
                f"{geom.phase} (gaps {gap_q:.3e} vs {geom.gap:.3e})")

    lam_p = lam_m = None
    alpha = beta = None
    if phase is not Phase.EXCEPTIONAL_POINT:
        pt = _pt_matrix(x)

        def unit_vec(eps):
            v = np.array([b01, eps - a00], dtype=complex)
            return v / np.linalg.norm(v)

        v_p, v_m = unit_vec(eps_p), unit_vec(eps_m)
        # eigenvector (1, -a) slopes, rho assigned to eps_minus
        alpha = (a00 - eps_m) / b01
        beta = (a00 - eps_p) / b01

        def action_factor(v_src, v_dst):
            w = pt @ np.conj(v_src)
            k = int(np.argmax(np.abs(v_dst)))
            lam = w[k] / v_dst[k]
            if float(np.max(np.abs(w - lam * v_dst))) > 1e3 * tol * float(np.max(np.abs(w))):
                raise InternalInconsistency(
                    "antilinear symmetry does not map eigenvectors as classified")
            return complex(lam)

        if phase is Phase.UNBROKEN:
            lam_p = action_factor(v_p, v_p)
            lam_m = action_factor(v_m, v_m)
        else:
            lam_p = action_factor(v_p, v_m)
            lam_m = action_factor(v_m, v_p)

    return PTReport(
        pt_symmetric=True,
        x_param=x,
        q=float(qx),
        phase=phase,
        eps_plus=complex(eps_p),
        eps_minus=complex(eps_m),
        lambda_plus=lam_p,
        lambda_minus=lam_m,
        alpha=None if alpha is None else complex(alpha),
        beta=None if beta is None else complex(beta),
    )
