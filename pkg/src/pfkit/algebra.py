"""Pseudo-fermion operator pairs.

A pseudo-fermion pair is two 2x2 matrices (a, b) obeying the deformed
anti-commutation rules {a, b} = 1, a^2 = b^2 = 0 with b generally different
from a's adjoint.  Three families cover all non-trivial pairs:

* family one:   a = [[0, 1], [0, 0]],            b = [[beta, -beta^2], [1, -beta]]
* family two:   a = [[alpha, 1], [-alpha^2, -alpha]], b = [[0, 0], [1, 0]]
* general:      both operators of the shape [[z11, z12], [-z11^2/z12, -z11]]
                with parameters (a11, a12) and (b11, b12) tied by one
                scalar constraint (see :class:`PFParameters`).

Family one is the general family at (0, 1, beta, -beta^2); family two is a
singular x -> 0 limit of (alpha, 1, x, -x^2) that never satisfies the
constraint at finite x, which is why it keeps its own literal matrices.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConstraintViolated, DegenerateParameters, ZeroParameter
from .mat2 import anticommutator, dagger, identity2, mat2, max_abs, vec2

__all__ = [
    "CONSTRAINT_TOL",
    "PFParameters",
    "PFPair",
    "FamilyOne",
    "FamilyTwo",
    "General",
    "build",
    "family_two_limit",
    "FamilyTwoLimit",
    "vacuum_states",
    "excited_states",
    "number_operators",
    "sample_parameters",
]

#: tolerance on the defining constraint residual
CONSTRAINT_TOL = 1e-10

#: tolerance on the anti-commutation defect of a constructed pair
CAR_TOL = 1e-10


@dataclass(frozen=True)
class PFParameters:
    """The four complex parameters of the general family.

    The pair is admissible when ``a12 != 0``, ``b12 != 0`` and the constraint

        2*a11*b11 - a11^2*b12/a12 - b11^2*a12/b12 == 1

    holds.  Derived quantities: ``alpha = a11/a12``, ``beta = b11/b12`` and
    ``gamma = a12*b11 - a11*b12``, with ``(alpha - beta) * gamma == 1`` and
    ``-gamma^2 == a12*b12`` as equivalent statements of the constraint.
    """

    a11: complex
    a12: complex
    b11: complex
    b12: complex

    @property
    def alpha(self):
        return self.a11 / self.a12

    @property
    def beta(self):
        return self.b11 / self.b12

    @property
    def gamma(self):
        return self.a12 * self.b11 - self.a11 * self.b12

    def constraint_residual(self):
        lhs = (2 * self.a11 * self.b11
               - self.a11 ** 2 * self.b12 / self.a12
               - self.b11 ** 2 * self.a12 / self.b12)
        return abs(lhs - 1.0)

    def validate(self, tol=CONSTRAINT_TOL):
        if self.a12 == 0 or self.b12 == 0:
            raise ZeroParameter("a12 and b12 must be nonzero")
        res = self.constraint_residual()
        if res > tol:
            raise ConstraintViolated(
                f"parameter constraint residual {res:.3e} exceeds {tol:.1e}",
                residual=res)
        return self


@dataclass(frozen=True)
class PFPair:
    """A validated pseudo-fermion pair.

    ``params`` is None for family two, whose lowering operator sits outside
    the general parameterization (its would-be b12 vanishes).
    """

    a: np.ndarray
    b: np.ndarray
    params: PFParameters | None


@dataclass(frozen=True)
class FamilyOne:
    beta: complex


@dataclass(frozen=True)
class FamilyTwo:
    alpha: complex


@dataclass(frozen=True)
class General:
    params: PFParameters


def _general_matrices(a11, a12, b11, b12):
    # raw family shape, no constraint validation (see family_two_limit)
    if a12 == 0 or b12 == 0:
        raise ZeroParameter("a12 and b12 must be nonzero")
    a = mat2(a11, a12, -a11 ** 2 / a12, -a11)
    b = mat2(b11, b12, -b11 ** 2 / b12, -b11)
    return a, b


def _check_car(a, b, tol=CAR_TOL):
    defect = max(
        max_abs(anticommutator(a, b) - identity2()),
        max_abs(a @ a),
        max_abs(b @ b),
    )
    if defect > tol:
        raise ConstraintViolated(
            f"anti-commutation defect {defect:.3e} exceeds {tol:.1e}",
            residual=defect)


def build(kind):
    """Construct the literal operator pair for a family descriptor.

    The anti-commutation rules are verified before the pair is returned.

    Raises
    ------
    ZeroParameter
        Family parameter that must be nonzero is zero.
    ConstraintViolated
        General-family parameters break the scalar constraint.
    """
    if isinstance(kind, FamilyOne):
        if kind.beta == 0:
            raise ZeroParameter("family-one beta must be nonzero")
        beta = complex(kind.beta)
        params = PFParameters(0.0, 1.0, beta, -beta ** 2).validate()
        a = mat2(0, 1, 0, 0)
        b = mat2(beta, -beta ** 2, 1, -beta)
        pair = PFPair(a, b, params)
    elif isinstance(kind, FamilyTwo):
        if kind.alpha == 0:
            raise ZeroParameter("family-two alpha must be nonzero")
        al = complex(kind.alpha)
        a = mat2(al, 1, -al ** 2, -al)
        b = mat2(0, 0, 1, 0)
        pair = PFPair(a, b, None)
    elif isinstance(kind, General):
        p = kind.params.validate()
        a, b = _general_matrices(p.a11, p.a12, p.b11, p.b12)
        pair = PFPair(a, b, p)
    else:
        raise TypeError(f"unknown family descriptor {kind!r}")
    _check_car(pair.a, pair.b)
    return pair


@dataclass(frozen=True)
class FamilyTwoLimit:
    """Convergence report for the singular family-two limit."""

    xs: tuple
    a_residuals: tuple
    b_residuals: tuple
    monotone: bool
    final_residual: float


def family_two_limit(alpha, x_sequence):
    """Drive the general family along (alpha, 1, x, -x^2) toward family two.

    The path violates the scalar constraint at every finite x (the
    anti-commutator is (1 + alpha*x)^2 times the identity), so the raw
    family matrices are formed directly instead of going through
    :func:`build`.  Reports the max-norm distance of a(x) and b(x) from the
    family-two matrices for each x.
    """
    if alpha == 0:
        raise ZeroParameter("alpha must be nonzero")
    xs = [float(x) for x in x_sequence]
    if any(b >= a for a, b in zip(xs, xs[1:])):
        raise ValueError("x_sequence must be strictly decreasing")
    target = build(FamilyTwo(alpha))
    a_res, b_res = [], []
    for x in xs:
        a, b = _general_matrices(alpha, 1.0, x, -x ** 2)
        a_res.append(max_abs(a - target.a))
        b_res.append(max_abs(b - target.b))
    mono = all(x1 >= x2 for x1, x2 in zip(a_res, a_res[1:])) and \
        all(x1 >= x2 for x1, x2 in zip(b_res, b_res[1:]))
    final = max(a_res[-1], b_res[-1]) if xs else float("nan")
    return FamilyTwoLimit(tuple(xs), tuple(a_res), tuple(b_res), mono, final)


def _nullvector(m):
    # null direction of a rank-one 2x2 matrix, from its larger row
    r0, r1 = m[0], m[1]
    row = r0 if np.abs(r0).sum() >= np.abs(r1).sum() else r1
    if np.abs(row).sum() == 0.0:
        raise DegenerateParameters("operator vanishes; vacuum is not unique")
    return vec2(row[1], -row[0])


def vacuum_states(pair, n_phi=1.0):
    """Vacua of the pair: a phi0 = 0 and b^dagger psi0 = 0.

    phi0 carries the (1, -alpha) parameterization scaled by ``n_phi``; psi0
    is normalized so that <psi0, phi0> = 1 exactly.  For parameterized pairs
    psi0 is built from the closed form

        psi0 = (conj(a12*b11 / (gamma*n_phi)), conj(a12*b12 / (gamma*n_phi)))

    which stays finite even when b11 = 0 (where the textbook (1, 1/conj(beta))
    scaling degenerates).  Family two falls back to a direct nullspace
    computation.
    """
    p = pair.params
    if p is None:
        phi0 = _nullvector(pair.a)
        # gauge: leading component n_phi when possible
        phi0 = phi0 * (n_phi / phi0[0]) if phi0[0] != 0 else phi0
        psi0 = _nullvector(dagger(pair.b))
        ip = np.vdot(psi0, phi0)
        if ip == 0:
            raise DegenerateParameters("vacua are orthogonal; cannot normalize")
        psi0 = psi0 / np.conj(ip)
        return phi0, psi0
    nphi = complex(n_phi)
    if nphi == 0:
        raise ZeroParameter("n_phi must be nonzero")
    gamma = p.gamma
    phi0 = nphi * vec2(1.0, -p.alpha)
    psi0 = vec2(np.conj(p.a12 * p.b11 / (gamma * nphi)),
                np.conj(p.a12 * p.b12 / (gamma * nphi)))
    return phi0, psi0


def excited_states(pair, phi0, psi0):
    """One-excitation vectors phi1 = b phi0 and psi1 = a^dagger psi0."""
    return pair.b @ phi0, dagger(pair.a) @ psi0


def number_operators(pair):
    """Number operator N = b a and its adjoint."""
    n = pair.b @ pair.a
    return n, dagger(n)


def sample_parameters(rng):
    """Draw one random admissible :class:`PFParameters`.

    a11, a12 and b12 are drawn with radius uniform on [0.2, 2] and uniform
    phase; b11 then solves the constraint quadratic

        b11 = a11*b12/a12 +- sqrt(-b12/a12)

    and the root farther from a11 is kept, which keeps alpha - beta (and
    hence every metric operator built downstream) well conditioned.
    """

    def draw():
        rad = rng.uniform(0.2, 2.0)
        ang = rng.uniform(0.0, 2.0 * np.pi)
        return rad * complex(np.cos(ang), np.sin(ang))

    a11, a12, b12 = draw(), draw(), draw()
    base = a11 * b12 / a12
    root = np.sqrt(complex(-b12 / a12))
    cands = [base + root, base - root]
    b11 = max(cands, key=lambda z: abs(z - a11))
    return PFParameters(a11, a12, complex(b11), b12).validate()
