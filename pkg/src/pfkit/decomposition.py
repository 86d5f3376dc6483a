"""Ladder-operator decomposition H = omega*N + rho*1 of a 2x2 matrix.

Given a diagonalizable H with a nonzero (0, 1) entry, the decomposition
extracts (omega, rho, alpha, beta, gamma) such that

    H = [[omega*gamma*alpha + rho,  omega*gamma             ],
         [-omega*gamma*alpha*beta, -omega*gamma*beta + rho  ]]

with eigenvalues rho and rho + omega.  From it the module builds the
biorthogonal eigenbasis, the metric operators S_phi / S_psi with closed-form
square roots, and the similarity-transformed genuinely fermionic picture
(c, N0, h, e0, e1) in which h is self-adjoint whenever omega and rho are real.
"""

import enum
from dataclasses import dataclass, field

import numpy as np

from .algebra import General, PFParameters, build
from .errors import (
    EigenvectorDegenerate,
    ExceptionalPoint,
    NotPositiveDefinite,
    UnsupportedShape,
    ZeroParameter,
)
from .mat2 import (
    DEGENERACY_TOL,
    dagger,
    eigvals2,
    hermitian_sqrt_oracle,
    max_abs,
    vec2,
)

__all__ = [
    "Branch",
    "Decomposition",
    "assemble",
    "decompose",
    "pf_parameters",
    "pf_pair",
    "BiorthogonalSystem",
    "biorthogonal_system",
    "PCoefficients",
    "QCoefficients",
    "MetricPair",
    "metrics",
    "FermionicPicture",
    "fermionize",
    "IntertwiningReport",
    "intertwining_check",
]

#: closed-form square roots must match the spectral oracle this tightly
#: before they are trusted; beyond it the oracle value is substituted
ORACLE_ARBITRATION_TOL = 1e-6


class Branch(enum.Enum):
    PLUS = "plus"
    MINUS = "minus"


@dataclass(frozen=True)
class Decomposition:
    """The (omega, rho, alpha, beta, gamma) data of one branch.

    Invariants (validated on construction): (alpha - beta) * gamma == 1 and
    mu == omega * gamma, both to tight tolerance.
    """

    omega: complex
    rho: complex
    alpha: complex
    beta: complex
    gamma: complex
    mu: complex
    branch: Branch

    def __post_init__(self):
        scale = 1.0 + abs(self.alpha * self.gamma) + abs(self.beta * self.gamma)
        if abs((self.alpha - self.beta) * self.gamma - 1.0) > 1e-10 * scale:
            raise ValueError("(alpha - beta) * gamma must equal 1")
        if abs(self.mu - self.omega * self.gamma) > 1e-12 * (1 + abs(self.mu)):
            raise ValueError("mu must equal omega * gamma")

    def matrix(self):
        """Reconstruct the matrix this decomposition represents."""
        return assemble(self, self.omega, self.rho)


def _abg(params_or_dec):
    return (params_or_dec.alpha, params_or_dec.beta, params_or_dec.gamma)


def assemble(params, omega, rho):
    """Matrix of omega*N + rho*1 for the given parameters.

    ``params`` may be a :class:`PFParameters` or a :class:`Decomposition`;
    only alpha, beta and gamma are read.
    """
    alpha, beta, gamma = _abg(params)
    mu = omega * gamma
    return np.array([[mu * alpha + rho, mu],
                     [-mu * alpha * beta, -mu * beta + rho]], dtype=complex)


def decompose(h, branch=Branch.MINUS, tol=DEGENERACY_TOL):
    """Invert :func:`assemble` for a concrete matrix.

    Parameters
    ----------
    h : ndarray
        2x2 complex matrix with ``h[0, 1] != 0`` and distinct eigenvalues.
    branch : Branch
        MINUS assigns rho to the lexicographically smaller eigenvalue
        (model catalogs relabel branches with their own conventions).
    tol : float
        Eigenvalue-coalescence tolerance, relative to 1 + |tr h|.

    Raises
    ------
    ExceptionalPoint
        Eigenvalues coalesce within ``tol``; no pseudo-fermions exist there.
    UnsupportedShape
        ``h[0, 1] == 0``: the ladder form puts omega*gamma in that slot and
        requires it nonzero.
    EigenvectorDegenerate
        Reconstruction from the extracted eigendata lost accuracy (input is
        nearly defective but cleared the coalescence band).
    """
    if h[0, 1] == 0:
        raise UnsupportedShape("matrix has a vanishing (0,1) entry")
    lo, hi = eigvals2(h)
    gap = abs(hi - lo)
    if gap < tol * (1.0 + abs(h[0, 0] + h[1, 1])):
        raise ExceptionalPoint(
            f"eigenvalues coalesce near {0.5 * (lo + hi):.6g}",
            value=0.5 * (lo + hi))
    rho, other = (lo, hi) if branch is Branch.MINUS else (hi, lo)
    omega = other - rho
    mu = complex(h[0, 1])
    alpha = (h[0, 0] - rho) / mu
    beta = (h[0, 0] - other) / mu
    gamma = mu / omega
    dec = Decomposition(omega, rho, complex(alpha), complex(beta),
                        complex(gamma), mu, branch)
    if max_abs(dec.matrix() - h) > 1e-10 * (1.0 + max_abs(h)):
        raise EigenvectorDegenerate("eigenvector extraction lost accuracy")
    return dec


def pf_parameters(dec, alpha11=None, alpha12=None):
    """Fix the one-complex-parameter gauge and return full parameters.

    The map from a matrix to pseudo-fermion parameters is underdetermined by
    one complex scale.  By default ``a12 = 1``; supplying ``alpha11`` instead
    sets ``a12 = alpha11 / alpha`` (the convention used by the model
    catalog), which requires ``alpha != 0``.
    """
    alpha, beta, gamma = dec.alpha, dec.beta, dec.gamma
    if alpha11 is not None:
        if alpha == 0:
            raise ZeroParameter(
                "alpha11 gauge needs alpha != 0; pass alpha12 instead")
        a12 = complex(alpha11) / alpha
        a11 = complex(alpha11)
    else:
        a12 = complex(alpha12) if alpha12 is not None else 1.0 + 0j
        if a12 == 0:
            raise ZeroParameter("alpha12 must be nonzero")
        a11 = alpha * a12
    b12 = -gamma ** 2 / a12
    b11 = beta * b12
    return PFParameters(a11, a12, b11, b12).validate()


def pf_pair(dec, params=None):
    """Operator pair (a, b) realizing the decomposition."""
    p = params if params is not None else pf_parameters(dec)
    return build(General(p))


@dataclass(frozen=True)
class BiorthogonalSystem:
    """Eigenvectors of H and its adjoint, mutually biorthonormal."""

    phi0: np.ndarray
    phi1: np.ndarray
    psi0: np.ndarray
    psi1: np.ndarray
    nphi: complex
    npsi: complex

    def projectors(self):
        """Skew projectors P_j f = <psi_j, f> phi_j; they sum to identity."""
        p0 = np.outer(self.phi0, self.psi0.conj())
        p1 = np.outer(self.phi1, self.psi1.conj())
        return p0, p1


def biorthogonal_system(dec, params=None, n_phi=1.0):
    """Eigenbasis {phi_j} of H and {psi_j} of H's adjoint.

    phi0 = n_phi * (1, -alpha) and phi1 = (gamma*n_phi/a12) * (1, -beta);
    the psi vectors are built from the numerically stable closed forms (see
    :func:`pfkit.algebra.vacuum_states`) and satisfy <psi_k, phi_n> = delta
    exactly under the normalization split n_phi * conj(n_psi) = a12*b11/gamma.
    """
    p = params if params is not None else pf_parameters(dec)
    nphi = complex(n_phi)
    if nphi == 0:
        raise ZeroParameter("n_phi must be nonzero")
    alpha, beta, gamma = dec.alpha, dec.beta, dec.gamma
    npsi = np.conj(p.a12 * p.b11 / (gamma * nphi))
    phi0 = nphi * vec2(1.0, -alpha)
    phi1 = (gamma * nphi / p.a12) * vec2(1.0, -beta)
    psi0 = vec2(np.conj(p.a12 * p.b11 / (gamma * nphi)),
                np.conj(p.a12 * p.b12 / (gamma * nphi)))
    psi1 = np.conj(p.a12 / nphi) * vec2(np.conj(alpha), 1.0)
    return BiorthogonalSystem(phi0, phi1, psi0, psi1, nphi, complex(npsi))


@dataclass(frozen=True)
class PCoefficients:
    """Scalar ladder for the closed-form square root of S_phi."""

    p1: float
    p2: float
    p3: float
    p4: float
    p5: float
    p: complex


@dataclass(frozen=True)
class QCoefficients:
    """Scalar ladder for the closed-form square root of S_psi."""

    q1: float
    q2: float
    q3: float
    q4: float
    q5: float
    q: complex


@dataclass(frozen=True)
class MetricPair:
    """Metric operators with their closed-form square roots.

    All four matrices are Hermitian; s_phi and s_psi are positive definite
    and mutually inverse.  ``discrepancies`` lists any entry where the
    closed-form root disagreed with the spectral oracle beyond arbitration
    tolerance (the oracle value is what gets stored in that case).
    """

    s_phi: np.ndarray
    s_psi: np.ndarray
    s_phi_sqrt: np.ndarray
    s_psi_sqrt: np.ndarray
    t_ratio: float
    pcoef: PCoefficients
    qcoef: QCoefficients
    discrepancies: tuple = field(default_factory=tuple)


def _sqrt_ladder(s):
    """Closed-form Hermitian square root of a 2x2 Hermitian PD matrix.

    Returns (root, (c1..c5, c)) where the scalars follow the ladder pattern

        c1 = (s00 - s11)^2 + 4*|s10|^2          # squared eigenvalue gap
        c2, c3 = trace -+ sqrt(c1)              # twice the eigenvalues
        c4, c5 = (s00 - s11) -+ sqrt(c1)
        c  = (sqrt(c3) - sqrt(c2)) * s10

    and the root is

        [[ (sqrt(c3)*c5 - sqrt(c2)*c4)/2, conj(c) ],
         [ c,  (sqrt(c2)*c5 - sqrt(c3)*c4)/2 ]] / sqrt(2*c1).

    c2 and one of c4/c5 are computed through product identities
    (c2*c3 = 4*det, c4*c5 = -4*|s10|^2) to dodge cancellation when the
    matrix is ill conditioned.
    """
    s00, s11 = s[0, 0].real, s[1, 1].real
    off = complex(s[1, 0])
    sig = s00 - s11
    tau = s00 + s11
    det = s00 * s11 - abs(off) ** 2
    c1 = sig * sig + 4.0 * abs(off) ** 2
    if c1 == 0.0:  # scalar matrix: sqrt is scalar too and the ladder is 0/0
        r = float(np.sqrt(tau / 2.0))
        return np.array([[r, 0.0], [0.0, r]], dtype=complex), \
            (0.0, tau, tau, 0.0, 0.0, 0j)
    r1 = np.sqrt(c1)
    c3 = tau + r1
    c2 = 4.0 * det / c3 if c3 > 0 else tau - r1
    if sig >= 0.0:
        c5 = sig + r1
        c4 = -4.0 * abs(off) ** 2 / c5 if c5 > 0 else sig - r1
    else:
        c4 = sig - r1
        c5 = -4.0 * abs(off) ** 2 / c4
    c2 = max(c2, 0.0)
    r2, r3 = np.sqrt(c2), np.sqrt(c3)
    c = (r3 - r2) * off
    denom = np.sqrt(2.0 * c1)
    root = np.array([[(r3 * c5 - r2 * c4) / 2.0, np.conj(c)],
                     [c, (r2 * c5 - r3 * c4) / 2.0]], dtype=complex) / denom
    return root, (float(c1), float(c2), float(c3), float(c4), float(c5), c)


def metrics(dec, params=None, n_phi=1.0, oracle_tol=1e-9):
    """Metric operators S_phi, S_psi and their square roots.

    S_phi and S_psi are the frame operators of the two eigenbases
    (sums of outer products); S_phi also has the closed form

        |n_phi|^2 * [[1 + t, -conj(alpha) - conj(beta)*t],
                     [-alpha - beta*t, |alpha|^2 + t*|beta|^2]],

    t = |gamma/a12|^2, which is what gets evaluated here.  The square roots
    come from the scalar ladder of :func:`_sqrt_ladder` and are
    cross-validated against the spectral oracle: residuals above
    ``oracle_tol`` are recorded, and above the arbitration threshold the
    oracle value replaces the closed form.
    """
    p = params if params is not None else pf_parameters(dec)
    sys_ = biorthogonal_system(dec, p, n_phi=n_phi)
    alpha, beta = dec.alpha, dec.beta
    t = abs(dec.gamma / p.a12) ** 2
    nphi2 = abs(sys_.nphi) ** 2
    s_phi = nphi2 * np.array(
        [[1.0 + t, -np.conj(alpha) - np.conj(beta) * t],
         [-alpha - beta * t, abs(alpha) ** 2 + t * abs(beta) ** 2]],
        dtype=complex)
    s_psi = (np.outer(sys_.psi0, sys_.psi0.conj())
             + np.outer(sys_.psi1, sys_.psi1.conj()))

    if not (s_phi[0, 0].real > 0
            and (s_phi[0, 0] * s_phi[1, 1] - s_phi[0, 1] * s_phi[1, 0]).real > 0):
        # unreachable while (alpha - beta) * gamma == 1 holds
        raise NotPositiveDefinite("metric operator lost positivity")

    root_phi, pc = _sqrt_ladder(s_phi)
    root_psi, qc = _sqrt_ladder(s_psi)

    discrepancies = []
    checked = []
    for name, root, s in (("s_phi_sqrt", root_phi, s_phi),
                          ("s_psi_sqrt", root_psi, s_psi)):
        oracle = hermitian_sqrt_oracle(s)
        res = max_abs(root - oracle) / (1.0 + max_abs(oracle))
        if not res <= ORACLE_ARBITRATION_TOL:  # NaN-safe: oracle wins
            discrepancies.append((name, float(res)))
            root = oracle
        elif res > oracle_tol:
            discrepancies.append((name, float(res)))
        checked.append(root)
    root_phi, root_psi = checked

    return MetricPair(
        s_phi=s_phi,
        s_psi=s_psi,
        s_phi_sqrt=root_phi,
        s_psi_sqrt=root_psi,
        t_ratio=float(t),
        pcoef=PCoefficients(*pc),
        qcoef=QCoefficients(*qc),
        discrepancies=tuple(discrepancies),
    )


@dataclass(frozen=True)
class FermionicPicture:
    """Similarity-transformed picture with genuine fermion operators."""

    c: np.ndarray
    cdag: np.ndarray
    n0: np.ndarray
    h: np.ndarray
    e0: np.ndarray
    e1: np.ndarray


def fermionize(dec, pair, metric):
    """Map (a, b, H, phi_j) to the fermionic picture.

    c = S_psi^{1/2} a S_phi^{1/2} (S_phi^{1/2} is S_psi^{-1/2}); its adjoint
    equals the same transform of b.  h = S_psi^{1/2} H S_phi^{1/2} shares the
    spectrum {rho, rho + omega} and is self-adjoint when both are real.
    e_j = S_psi^{1/2} phi_j form an orthonormal eigenbasis of h.
    """
    if pair.params is None:
        raise ValueError("fermionize requires a parameterized pair")
    rp, rm = metric.s_psi_sqrt, metric.s_phi_sqrt
    c = rp @ pair.a @ rm
    n0 = dagger(c) @ c
    h = rp @ assemble(dec, dec.omega, dec.rho) @ rm
    sys_ = biorthogonal_system(dec, pair.params)
    return FermionicPicture(
        c=c,
        cdag=dagger(c),
        n0=n0,
        h=h,
        e0=rp @ sys_.phi0,
        e1=rp @ sys_.phi1,
    )


@dataclass(frozen=True)
class IntertwiningReport:
    """Residuals of the intertwining and basis-mapping identities."""

    intertwine_psi: float   # || S_psi N - N^dag S_psi ||
    intertwine_phi: float   # || S_phi N^dag - N S_phi ||
    map_psi_to_phi: float   # max_n || S_phi psi_n - phi_n ||
    map_phi_to_psi: float   # max_n || S_psi phi_n - psi_n ||
    norm_bound_phi: tuple   # (||S_phi||, ||phi0||^2 + ||phi1||^2)
    norm_bound_psi: tuple
    bounds_hold: bool

    @property
    def max_residual(self):
        return max(self.intertwine_psi, self.intertwine_phi,
                   self.map_psi_to_phi, self.map_phi_to_psi)


def intertwining_check(dec, metric, params=None, n_phi=1.0):
    """Verify that the metric operators intertwine N with its adjoint.

    Checks S_psi N = N^dag S_psi, S_phi N^dag = N S_phi, the basis mappings
    S_phi psi_n = phi_n / S_psi phi_n = psi_n, and the operator-norm bounds
    ||S_phi|| <= ||phi0||^2 + ||phi1||^2 (likewise for S_psi).
    """
    p = params if params is not None else pf_parameters(dec)
    pair = pf_pair(dec, p)
    sys_ = biorthogonal_system(dec, p, n_phi=n_phi)
    n = pair.b @ pair.a
    nd = dagger(n)
    s_phi, s_psi = metric.s_phi, metric.s_psi
    r_ipsi = max_abs(s_psi @ n - nd @ s_psi)
    r_iphi = max_abs(s_phi @ nd - n @ s_phi)
    r_map_pp = max(
        float(np.max(np.abs(s_phi @ sys_.psi0 - sys_.phi0))),
        float(np.max(np.abs(s_phi @ sys_.psi1 - sys_.phi1))),
    )
    r_map_fp = max(
        float(np.max(np.abs(s_psi @ sys_.phi0 - sys_.psi0))),
        float(np.max(np.abs(s_psi @ sys_.phi1 - sys_.psi1))),
    )
    opnorm_phi = float(np.linalg.norm(s_phi, 2))
    opnorm_psi = float(np.linalg.norm(s_psi, 2))
    bound_phi = float(np.linalg.norm(sys_.phi0) ** 2 + np.linalg.norm(sys_.phi1) ** 2)
    bound_psi = float(np.linalg.norm(sys_.psi0) ** 2 + np.linalg.norm(sys_.psi1) ** 2)
    slack = 1e-9 * (1.0 + bound_phi + bound_psi)
    holds = opnorm_phi <= bound_phi + slack and opnorm_psi <= bound_psi + slack
    return IntertwiningReport(
        intertwine_psi=r_ipsi,
        intertwine_phi=r_iphi,
        map_psi_to_phi=r_map_pp,
        map_phi_to_psi=r_map_fp,
        norm_bound_phi=(opnorm_phi, bound_phi),
        norm_bound_psi=(opnorm_psi, bound_psi),
        bounds_hold=holds,
    )
