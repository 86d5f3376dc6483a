"""Model catalog: concrete 2x2 families with pseudo-fermion identifications.

Six parameterized models are covered:

* ``DG``   -- [[r e^{i theta}, s e^{i phi}], [t_c e^{-i phi}, r e^{-i theta}]]
              (all parameters real; t_c is the third amplitude, renamed to
              avoid clashing with the metric ratio t).
* ``Part`` -- the phi = 0, s = t_c specialization of DG.
* ``GMM``  -- [[e1 - i g1, nu0], [nu0, e2 - i g2]] with g1, g2 >= 0.
* ``MO``   -- E [[cos theta, e^{-i phi} sin theta],
               [e^{i phi} sin theta, -cos theta]] with complex E, theta, phi;
              this family admits pseudo-fermions for every parameter value.
* ``Rel``  -- [[m c^2, c px + v], [c px - v, -m c^2]].
* ``JSM``  -- [[a, i b], [i b, -a]] with real a, nonzero real b.

``identify`` produces both branch decompositions with explicit parameters;
``ep_condition`` evaluates a signed margin that vanishes exactly on the
exceptional-point (or no-pseudo-fermion) locus of each family.
"""

import cmath
from dataclasses import dataclass
from typing import Union

import numpy as np

from .decomposition import Branch, Decomposition, assemble, metrics, pf_parameters
from .errors import ExceptionalPoint, NoPseudoFermions, NotReducible, ZeroParameter
from .mat2 import max_abs
from .symmetry import Phase, classify_phase

__all__ = [
    "DG",
    "Part",
    "GMM",
    "MO",
    "Rel",
    "JSM",
    "ModelSpec",
    "Identification",
    "EPCondition",
    "to_matrix",
    "identify",
    "ep_condition",
    "phase_of",
    "dg_metrics",
    "reduce_model",
    "model_to_dict",
    "model_from_dict",
]


@dataclass(frozen=True)
class DG:
    r: float
    s: float
    t_c: float
    theta: float
    phi: float


@dataclass(frozen=True)
class Part:
    r: float
    s: float
    theta: float


@dataclass(frozen=True)
class GMM:
    e1: float
    e2: float
    g1: float
    g2: float
    nu0: complex

    def __post_init__(self):
        if self.g1 < 0 or self.g2 < 0:
            raise ValueError("g1 and g2 must be nonnegative")


@dataclass(frozen=True)
class MO:
    E: complex
    theta: complex
    phi: complex

    def __post_init__(self):
        if self.E == 0:
            raise ValueError("E must be nonzero")
        if self.theta == 0:
            raise ValueError("theta must be nonzero")


@dataclass(frozen=True)
class Rel:
    m: float
    c: float
    px: float
    v: float


@dataclass(frozen=True)
class JSM:
    a_r: float
    b_r: float

    def __post_init__(self):
        if self.b_r == 0:
            raise ValueError("b_r must be nonzero")


ModelSpec = Union[DG, Part, GMM, MO, Rel, JSM]


def to_matrix(spec):
    """The literal matrix of a model instance."""
    if isinstance(spec, DG):
        return np.array(
            [[spec.r * cmath.exp(1j * spec.theta), spec.s * cmath.exp(1j * spec.phi)],
             [spec.t_c * cmath.exp(-1j * spec.phi), spec.r * cmath.exp(-1j * spec.theta)]],
            dtype=complex)
    if isinstance(spec, Part):
        return to_matrix(DG(spec.r, spec.s, spec.s, spec.theta, 0.0))
    if isinstance(spec, GMM):
        return np.array([[spec.e1 - 1j * spec.g1, spec.nu0],
                         [spec.nu0, spec.e2 - 1j * spec.g2]], dtype=complex)
    if isinstance(spec, MO):
        return spec.E * np.array(
            [[cmath.cos(spec.theta), cmath.exp(-1j * spec.phi) * cmath.sin(spec.theta)],
             [cmath.exp(1j * spec.phi) * cmath.sin(spec.theta), -cmath.cos(spec.theta)]],
            dtype=complex)
    if isinstance(spec, Rel):
        mc2 = spec.m * spec.c ** 2
        return np.array([[mc2, spec.c * spec.px + spec.v],
                         [spec.c * spec.px - spec.v, -mc2]], dtype=complex)
    if isinstance(spec, JSM):
        return np.array([[spec.a_r, 1j * spec.b_r],
                         [1j * spec.b_r, -spec.a_r]], dtype=complex)
    raise TypeError(f"unknown model spec {spec!r}")


@dataclass(frozen=True)
class EPCondition:
    """Exceptional-point / no-pseudo-fermion verdict with a signed margin.

    ``margin`` is a continuous function of the model parameters vanishing
    exactly on the degenerate set; ``kind`` is one of "none", "at_ep",
    "no_pf".  The MO family has no degenerate set and reports an infinite
    margin.
    """

    kind: str
    margin: float
    value: complex | None = None
    reason: str | None = None


def _dg_margin(spec):
    return (spec.r * np.sin(spec.theta)) ** 2 - spec.s * spec.t_c


def ep_condition(spec, tol=1e-10):
    """Locate the spec relative to its family's degenerate locus."""
    if isinstance(spec, Part):
        return ep_condition(DG(spec.r, spec.s, spec.s, spec.theta, 0.0), tol)
    if isinstance(spec, DG):
        margin = _dg_margin(spec)
        scale = 1.0 + (spec.r * np.sin(spec.theta)) ** 2 + abs(spec.s * spec.t_c)
        if abs(margin) <= tol * scale:
            return EPCondition("at_ep", float(margin),
                               value=complex(spec.r * np.cos(spec.theta)))
        return EPCondition("none", float(margin))
    if isinstance(spec, GMM):
        z = complex(-(spec.e2 - spec.e1), spec.g2 - spec.g1)
        disc = z * z + 4.0 * complex(spec.nu0) ** 2
        margin = abs(disc)
        scale = 1.0 + abs(z) ** 2 + 4.0 * abs(spec.nu0) ** 2
        if margin <= tol * scale:
            eps_sum = spec.e1 + spec.e2
            g_sum = spec.g1 + spec.g2
            return EPCondition("at_ep", float(margin),
                               value=0.5 * complex(eps_sum, -g_sum))
        if spec.nu0 == 0:
            return EPCondition("no_pf", float(margin),
                               reason="nu0 = 0: both off-diagonal entries vanish")
        return EPCondition("none", float(margin))
    if isinstance(spec, MO):
        return EPCondition("none", float("inf"))
    if isinstance(spec, Rel):
        mc2 = spec.m * spec.c ** 2
        cpx = spec.c * spec.px
        margin = cpx + spec.v
        # genuine coalescence (squared spectral half-gap) trumps the no-PF check
        gap2 = mc2 ** 2 + cpx ** 2 - spec.v ** 2
        if abs(gap2) <= tol * (1.0 + mc2 ** 2 + cpx ** 2 + spec.v ** 2):
            return EPCondition("at_ep", float(margin), value=0.0 + 0j)
        scale = 1.0 + abs(cpx) + abs(spec.v)
        if abs(margin) <= tol * scale:
            return EPCondition("no_pf", float(margin),
                               reason="c*px = -v: the (0,1) entry vanishes")
        return EPCondition("none", float(margin))
    if isinstance(spec, JSM):
        margin = spec.a_r ** 2 - spec.b_r ** 2
        scale = 1.0 + spec.a_r ** 2 + spec.b_r ** 2
        if abs(margin) <= tol * scale:
            return EPCondition("at_ep", float(margin), value=0.0 + 0j)
        return EPCondition("none", float(margin))
    raise TypeError(f"unknown model spec {spec!r}")


@dataclass(frozen=True)
class DGAux:
    """Model-specific scalars of the DG identification."""

    x_r: float
    x_rr_plus: complex
    x_rr_minus: complex
    alpha12: complex
    beta11: complex


@dataclass(frozen=True)
class Identification:
    """Both branch decompositions of a model instance."""

    dec_plus: Decomposition
    dec_minus: Decomposition
    params_plus: object
    params_minus: object
    aux: object = None


def _branch_dec(omega, rho, alpha, beta, gamma, branch):
    return Decomposition(complex(omega), complex(rho), complex(alpha),
                         complex(beta), complex(gamma),
                         complex(omega) * complex(gamma), branch)


def _identify_from_branches(spec, minus, plus, alpha11, aux=None):
    h = to_matrix(spec)
    out = {}
    for branch, (omega, rho, alpha, beta, gamma) in (
            (Branch.MINUS, minus), (Branch.PLUS, plus)):
        dec = _branch_dec(omega, rho, alpha, beta, gamma, branch)
        a11 = None if alpha == 0 else alpha11
        params = pf_parameters(dec, alpha11=a11)
        recon = assemble(dec, dec.omega, dec.rho)
        err = max_abs(recon - h)
        if err > 1e-10 * (1.0 + max_abs(h)):
            raise ExceptionalPoint(
                f"identification failed to reconstruct the matrix (err {err:.2e})")
        out[branch] = (dec, params)
    return Identification(
        dec_plus=out[Branch.PLUS][0],
        dec_minus=out[Branch.MINUS][0],
        params_plus=out[Branch.PLUS][1],
        params_minus=out[Branch.MINUS][1],
        aux=aux,
    )


def _dg_branches(spec):
    r, s, t_c, th, ph = spec.r, spec.s, spec.t_c, spec.theta, spec.phi
    big_r = r * np.sin(th) / s
    x_r = big_r ** 2 - t_c / s
    sq = cmath.sqrt(complex(x_r))  # principal branch: +i sqrt|x_r| for x_r < 0
    e_m = cmath.exp(-1j * ph)
    mu = s * cmath.exp(1j * ph)
    branches = {}
    for sign, branch in ((+1, Branch.PLUS), (-1, Branch.MINUS)):
        # upper sign rows: alpha uses R - sq, rho uses R + sq
        alpha = 1j * e_m * (big_r - sign * sq)
        beta = 1j * e_m * (big_r + sign * sq)
        rho = r * cmath.exp(-1j * th) + 1j * s * (big_r + sign * sq)
        gamma = sign * 1j * cmath.exp(1j * ph) / (2.0 * sq)
        omega = mu / gamma
        branches[branch] = (omega, rho, alpha, beta, gamma)
    x_rr_p = big_r - sq
    x_rr_m = big_r + sq
    return branches, x_r, x_rr_p, x_rr_m


def identify(spec, alpha11=1.0):
    """Pseudo-fermion identification of a model instance, both branches.

    The gauge scale is fixed by ``alpha11`` (a12 = alpha11/alpha); when a
    branch has alpha == 0 (possible for Rel) that branch falls back to the
    a12 = 1 gauge.  Each branch is validated by reconstructing the model
    matrix.

    Raises
    ------
    ExceptionalPoint
        The spec sits on its family's eigenvalue-coalescence locus.
    NoPseudoFermions
        The spec admits no representation at all (Rel with c*px == -v).
    NotReducible
        A Rel/JSM instance whose route goes through a reduction that
        double precision cannot resolve (extreme parameter ratios).
    """
    cond = ep_condition(spec)
    if cond.kind == "at_ep":
        raise ExceptionalPoint(
            f"model is at an exceptional point (margin {cond.margin:.3e})",
            value=cond.value)
    if cond.kind == "no_pf":
        raise NoPseudoFermions(cond.reason or "no pseudo-fermions", reason=cond.reason)

    if isinstance(spec, Part):
        return identify(DG(spec.r, spec.s, spec.s, spec.theta, 0.0), alpha11)
    if isinstance(spec, DG):
        branches, x_r, x_rr_p, x_rr_m = _dg_branches(spec)
        ident = _identify_from_branches(
            spec, branches[Branch.MINUS], branches[Branch.PLUS], alpha11)
        aux = DGAux(
            x_r=float(x_r),
            x_rr_plus=complex(x_rr_p),
            x_rr_minus=complex(x_rr_m),
            alpha12=ident.params_minus.a12,
            beta11=ident.params_minus.b11,
        )
        return Identification(ident.dec_plus, ident.dec_minus,
                              ident.params_plus, ident.params_minus, aux)
    if isinstance(spec, GMM):
        de = spec.e2 - spec.e1
        dg = spec.g2 - spec.g1
        eps_sum = spec.e1 + spec.e2
        g_sum = spec.g1 + spec.g2
        nu0 = complex(spec.nu0)
        z = complex(-de, dg)
        d = cmath.sqrt(z * z + 4.0 * nu0 ** 2)
        branches = {}
        for sign, branch in ((+1, Branch.PLUS), (-1, Branch.MINUS)):
            alpha = (z - sign * d) / (2.0 * nu0)
            beta = (z + sign * d) / (2.0 * nu0)
            rho = 0.5 * (complex(eps_sum, -g_sum) + sign * d)
            gamma = -sign * nu0 / d
            omega = nu0 / gamma
            branches[branch] = (omega, rho, alpha, beta, gamma)
        return _identify_from_branches(
            spec, branches[Branch.MINUS], branches[Branch.PLUS], alpha11)
    if isinstance(spec, MO):
        e, th, ph = complex(spec.E), complex(spec.theta), complex(spec.phi)
        sin, cos = cmath.sin(th), cmath.cos(th)
        # mu must match the (0,1) entry: E sin(theta) e^{-i phi}
        mu = e * sin * cmath.exp(-1j * ph)
        branches = {}
        for sign, branch in ((+1, Branch.PLUS), (-1, Branch.MINUS)):
            alpha = cmath.exp(1j * ph) / sin * (cos - sign * 1.0)
            beta = cmath.exp(1j * ph) / sin * (cos + sign * 1.0)
            rho = sign * e
            gamma = -sign * 0.5 * sin * cmath.exp(-1j * ph)
            omega = mu / gamma
            branches[branch] = (omega, rho, alpha, beta, gamma)
        return _identify_from_branches(
            spec, branches[Branch.MINUS], branches[Branch.PLUS], alpha11)
    if isinstance(spec, Rel):
        mc2 = spec.m * spec.c ** 2
        cpx = spec.c * spec.px
        if cpx == spec.v:  # direct assignment (v != 0 here, else no_pf above)
            mu = 2.0 * spec.v
            ratio = mc2 / spec.v
            minus = (2.0 * mc2, -mc2, ratio, 0.0, mu / (2.0 * mc2))
            plus = (-2.0 * mc2, mc2, 0.0, ratio, mu / (-2.0 * mc2))
            return _identify_from_branches(spec, minus, plus, alpha11)
        return identify(reduce_model(spec), alpha11)
    if isinstance(spec, JSM):
        return identify(reduce_model(spec), alpha11)
    raise TypeError(f"unknown model spec {spec!r}")


def phase_of(spec, tol=1e-9):
    """Phase of the model instance, with a model-level witness.

    The classification agrees with :func:`pfkit.symmetry.classify_phase`
    applied to the model matrix.  For DG the witness carries both branch
    omegas, which are real in the unbroken phase and mutually adjoint purely
    imaginary numbers in the broken phase.
    """
    result = classify_phase(to_matrix(spec), tol=tol)
    witness = {"eigenvalues": result.eigenvalues, "gap": result.gap}
    if isinstance(spec, (DG, Part)) and result.phase is not Phase.EXCEPTIONAL_POINT:
        branches, _, _, _ = _dg_branches(
            spec if isinstance(spec, DG) else DG(spec.r, spec.s, spec.s, spec.theta, 0.0))
        witness["omega_plus"] = branches[Branch.PLUS][0]
        witness["omega_minus"] = branches[Branch.MINUS][0]
    return result.phase, witness


def dg_metrics(spec, branch=Branch.MINUS, alpha11=1.0, n_phi=1.0):
    """Metric operators of a DG instance from the model-specialized formulas.

    Uses the x_r / x_rr scalars of the DG identification:

        t_pm    = |s * x_rr / (alpha11 * mu * sqrt(x_r))|^2 / 4
        S_phi   = |n_phi|^2 * [[1 + t, i e^{i phi} conj(x_rr + t*x_rr')],
                               [-i e^{-i phi} (x_rr + t*x_rr'),
                                |x_rr|^2 + t*|x_rr'|^2]]

    (x_rr' is the opposite-branch scalar) and the matching specialization
    for S_psi.  The result is cross-checked against the generic route
    (:func:`pfkit.decomposition.metrics` on the identification); the two
    must agree to 1e-9, which pins down the sign and factor conventions.
    """
    if isinstance(spec, Part):
        spec = DG(spec.r, spec.s, spec.s, spec.theta, 0.0)
    if spec.s == 0 or spec.t_c == 0:
        raise ZeroParameter(
            "the specialized metric formulas need s != 0 and t_c != 0; "
            "use the generic route for degenerate amplitudes")
    cond = ep_condition(spec)
    if cond.kind == "at_ep":
        raise ExceptionalPoint(
            f"model is at an exceptional point (margin {cond.margin:.3e})",
            value=cond.value)

    ident = identify(spec, alpha11=alpha11)
    dec = ident.dec_minus if branch is Branch.MINUS else ident.dec_plus
    params = ident.params_minus if branch is Branch.MINUS else ident.params_plus

    s, t_c, ph = spec.s, spec.t_c, spec.phi
    x_r = ident.aux.x_r
    sq = cmath.sqrt(complex(x_r))
    mu = s * cmath.exp(1j * ph)
    if branch is Branch.MINUS:
        x_rr, x_rr_o = ident.aux.x_rr_minus, ident.aux.x_rr_plus
    else:
        x_rr, x_rr_o = ident.aux.x_rr_plus, ident.aux.x_rr_minus
    if x_rr == 0 or x_rr_o == 0:
        raise ZeroParameter(
            "a branch slope cancelled to zero at double precision; the "
            "specialized display divides by it (use the generic route)")
    a11 = complex(alpha11)

    t = 0.25 * abs(s * x_rr / (a11 * mu * sq)) ** 2
    e_p, e_m = cmath.exp(1j * ph), cmath.exp(-1j * ph)
    nphi2 = abs(n_phi) ** 2
    s_phi = nphi2 * np.array(
        [[1.0 + t, 1j * e_p * np.conj(x_rr + t * x_rr_o)],
         [-1j * e_m * (x_rr + t * x_rr_o), abs(x_rr) ** 2 + t * abs(x_rr_o) ** 2]],
        dtype=complex)

    u = 4.0 * abs(s * a11 * sq / t_c) ** 2
    npsi2 = abs(params.a12 * params.b11 / dec.gamma) ** 2 / nphi2
    s_psi = npsi2 * np.array(
        [[1.0 + abs(x_rr) ** 2 * u,
          -1j * e_p * (1.0 / x_rr_o + np.conj(x_rr) * u)],
         [1j * e_m * (1.0 / np.conj(x_rr_o) + x_rr * u),
          1.0 / abs(x_rr_o) ** 2 + u]],
        dtype=complex)

    generic = metrics(dec, params, n_phi=n_phi)
    err = max(max_abs(s_phi - generic.s_phi), max_abs(s_psi - generic.s_psi))
    scale = 1.0 + max(max_abs(generic.s_phi), max_abs(generic.s_psi))
    if err > 1e-9 * scale:
        raise ExceptionalPoint(
            f"specialized and generic metric routes disagree (err {err:.2e})")
    return generic


def reduce_model(spec):
    """Map a model instance onto the family it specializes.

    Part -> DG (phi = 0, t_c = s); JSM -> MO (phi = 0, E = sqrt(a^2 - b^2),
    sin theta = i b / E); Rel -> MO through tan theta = sqrt(c^2 px^2 - v^2)
    / (m c^2), E = m c^2 / cos theta, cos phi = c px / (E sin theta).  In
    every case the reduced instance reproduces the source matrix to 1e-12.

    Raises
    ------
    NotReducible
        Rel with c^2 px^2 == v^2 (the off-diagonal entries cannot both be
        nonzero in the target family) and JSM with a == +-b (coalescent).
    """
    if isinstance(spec, Part):
        return DG(spec.r, spec.s, spec.s, spec.theta, 0.0)
    if isinstance(spec, JSM):
        a, b = spec.a_r, spec.b_r
        if a ** 2 == b ** 2:
            raise NotReducible(
                "a^2 == b^2: spectrum coalesces and the target family "
                "(which has none of that) cannot host it")
        e = cmath.sqrt(complex(a ** 2 - b ** 2))
        theta = cmath.acos(a / e)
        if theta == 0 or cmath.sin(theta) == 0:
            raise NotReducible(
                "b is below double-precision resolution against a; the "
                "reduced angle underflows to a forbidden value")
        if abs(cmath.sin(theta) - 1j * b / e) > abs(cmath.sin(theta) + 1j * b / e):
            theta = -theta
        return _validated_mo(spec, MO(E=e, theta=theta, phi=0.0))
    if isinstance(spec, Rel):
        mc2 = spec.m * spec.c ** 2
        cpx = spec.c * spec.px
        disc = cpx ** 2 - spec.v ** 2
        if disc == 0:
            raise NotReducible(
                "c^2 px^2 == v^2: one off-diagonal entry vanishes, which the "
                "target family cannot reproduce")
        e2 = mc2 ** 2 + disc
        if e2 == 0:
            raise ExceptionalPoint("eigenvalues coalesce at 0", value=0.0 + 0j)
        e = cmath.sqrt(complex(e2))
        theta = cmath.acos(mc2 / e)
        esin = e * cmath.sin(theta)
        if theta == 0 or esin == 0:
            raise NotReducible(
                "off-diagonal scale is below double-precision resolution "
                "against m c^2; the reduced angle underflows")
        phi = cmath.acos(cpx / esin)
        if abs(cmath.sin(phi) - 1j * spec.v / esin) > abs(cmath.sin(phi) + 1j * spec.v / esin):
            phi = -phi
        return _validated_mo(spec, MO(E=e, theta=theta, phi=phi))
    raise NotReducible(f"{type(spec).__name__} has no reduction target")


def _validated_mo(source, mo):
    err = max_abs(to_matrix(mo) - to_matrix(source))
    if err > 1e-12 * (1.0 + max_abs(to_matrix(source))):
        raise NotReducible(f"reduction failed to reproduce the matrix (err {err:.2e})")
    return mo


_MODEL_TYPES = {"DG": DG, "Part": Part, "GMM": GMM, "MO": MO, "Rel": Rel, "JSM": JSM}

_COMPLEX_FIELDS = {"nu0", "E", "theta", "phi"}


def _encode_value(name, value):
    z = complex(value)
    if name in _COMPLEX_FIELDS or z.imag != 0.0:
        return [z.real, z.imag]
    return z.real


def _decode_value(value):
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError(f"complex values are [re, im] pairs, got {value!r}")
        return complex(float(value[0]), float(value[1]))
    return float(value)


def model_to_dict(spec):
    """JSON-ready encoding: {"model": name, "params": {...}}."""
    name = type(spec).__name__
    params = {k: _encode_value(k, v) for k, v in vars(spec).items()}
    return {"model": name, "params": params}


def model_from_dict(doc):
    """Inverse of :func:`model_to_dict`; complex entries are [re, im] pairs."""
    try:
        cls = _MODEL_TYPES[doc["model"]]
    except KeyError as exc:
        raise ValueError(f"unknown model {doc.get('model')!r}") from exc
    params = {k: _decode_value(v) for k, v in doc.get("params", {}).items()}
    expected = set(cls.__dataclass_fields__)
    got = set(params)
    if got != expected:
        raise ValueError(
            f"{doc['model']} expects parameters {sorted(expected)}, got {sorted(got)}")
    if cls in (DG, Part, Rel, JSM):
        params = {k: float(np.real(v)) if isinstance(v, complex) else v
                  for k, v in params.items()}
    if cls is GMM:
        params = {k: (complex(v) if k == "nu0" else float(np.real(v)))
                  for k, v in params.items()}
    return cls(**params)
