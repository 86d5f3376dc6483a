"""Seeded invariant verification across the whole stack.

``run_verification`` draws random admissible parameter sets, pushes each one
through operators, eigenbases, metrics and the fermionic picture, and
records the worst residual of every structural identity.  With a fixed seed
the residual table is reproducible to the bit, which is what the CLI
``verify`` subcommand exposes.
"""

from dataclasses import dataclass

import numpy as np

from .algebra import (
    General,
    build,
    excited_states,
    number_operators,
    sample_parameters,
    vacuum_states,
)
from .decomposition import (
    Branch,
    Decomposition,
    assemble,
    biorthogonal_system,
    decompose,
    fermionize,
    intertwining_check,
    metrics,
)
from .mat2 import anticommutator, dagger, eigvals2, hermitian_sqrt_oracle, identity2, max_abs
from .symmetry import commutant, involutive_symmetry

__all__ = ["InvariantLine", "VerificationReport", "run_verification", "format_table"]

#: (name, gate) in report order; strict gates at 1e-10, metric-route gates at 1e-9
GATES = [
    ("anticommutator_defect", 1e-10),
    ("a_squared", 1e-10),
    ("b_squared", 1e-10),
    ("biorthonormality", 1e-10),
    ("ladder_lowering", 1e-10),
    ("number_eigenrelations", 1e-10),
    ("number_idempotent", 1e-10),
    ("number_trace", 1e-10),
    ("projector_resolution", 1e-10),
    ("reconstruction", 1e-10),
    ("metric_duality", 1e-9),
    ("intertwining", 1e-9),
    ("basis_mapping", 1e-9),
    ("sqrt_closed_vs_oracle", 1e-9),
    ("sqrt_squares_back", 1e-9),
    ("fermion_anticommutator", 1e-9),
    ("fermion_nilpotent", 1e-9),
    ("fermion_adjoint_route", 1e-9),
    ("h_hermiticity", 1e-9),
    ("h_spectrum", 1e-9),
    ("e_orthonormality", 1e-9),
    ("n0_similarity", 1e-9),
    ("commutant_commutes", 1e-10),
    ("involution_squares", 1e-10),
    ("norm_bounds_hold", 0.5),  # boolean: 0.0 pass, 1.0 fail
]


@dataclass(frozen=True)
class InvariantLine:
    name: str
    residual: float
    gate: float

    @property
    def passed(self):
        return self.residual <= self.gate


@dataclass(frozen=True)
class VerificationReport:
    count: int
    seed: int
    lines: tuple

    @property
    def passed(self):
        return all(line.passed for line in self.lines)


def run_verification(count=1000, seed=0, inject_fault=False):
    """Max residual of every invariant over ``count`` random draws.

    ``inject_fault`` flips the sign of one off-diagonal entry of the first
    metric operator before the residuals are taken.  It exists to prove the
    harness can fail: a run with the fault injected must come back red.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    worst = {name: 0.0 for name, _ in GATES}
    ident = identity2()

    def bump(name, value):
        if value > worst[name]:
            worst[name] = float(value)

    for k in range(count):
        params = sample_parameters(rng)
        pair = build(General(params))
        a, b = pair.a, pair.b

        bump("anticommutator_defect", max_abs(anticommutator(a, b) - ident))
        bump("a_squared", max_abs(a @ a))
        bump("b_squared", max_abs(b @ b))

        phi0, psi0 = vacuum_states(pair)
        phi1, psi1 = excited_states(pair, phi0, psi0)
        n, nd = number_operators(pair)
        gram = np.array([[np.vdot(p, f) for f in (phi0, phi1)]
                         for p in (psi0, psi1)])
        bump("biorthonormality", max_abs(gram - np.eye(2)))
        bump("ladder_lowering", max(
            float(np.max(np.abs(a @ phi1 - phi0))),
            float(np.max(np.abs(dagger(b) @ psi1 - psi0)))))
        bump("number_eigenrelations", max(
            float(np.max(np.abs(n @ phi0))),
            float(np.max(np.abs(n @ phi1 - phi1))),
            float(np.max(np.abs(nd @ psi0))),
            float(np.max(np.abs(nd @ psi1 - psi1)))))
        bump("number_idempotent", max_abs(n @ n - n))
        bump("number_trace", abs(n[0, 0] + n[1, 1] - 1.0))

        # real omega/rho keep the transformed picture self-adjoint
        omega = float(rng.uniform(0.3, 2.0) * rng.choice([-1.0, 1.0]))
        rho = float(rng.uniform(-2.0, 2.0))
        dec = Decomposition(omega, rho, params.alpha, params.beta,
                            params.gamma, omega * params.gamma, Branch.MINUS)
        h_mat = assemble(dec, omega, rho)

        redec = decompose(h_mat, Branch.MINUS)
        bump("reconstruction", max_abs(assemble(redec, redec.omega, redec.rho) - h_mat))

        sys_ = biorthogonal_system(dec, params)
        p0, p1 = sys_.projectors()
        bump("projector_resolution", max_abs(p0 + p1 - ident))

        met = metrics(dec, params)
        if inject_fault and k == 0:
            bad = met.s_phi.copy()
            bad[0, 1] = -bad[0, 1]
            bad[1, 0] = -bad[1, 0]
            met = type(met)(bad, met.s_psi, met.s_phi_sqrt, met.s_psi_sqrt,
                            met.t_ratio, met.pcoef, met.qcoef, met.discrepancies)
        scale_phi = 1.0 + max_abs(met.s_phi)
        scale_psi = 1.0 + max_abs(met.s_psi)
        bump("metric_duality", max_abs(met.s_phi @ met.s_psi - ident))
        rep = intertwining_check(dec, met, params)
        bump("intertwining", max(rep.intertwine_psi, rep.intertwine_phi))
        bump("basis_mapping", max(rep.map_psi_to_phi, rep.map_phi_to_psi))
        bump("norm_bounds_hold", 0.0 if rep.bounds_hold else 1.0)

        bump("sqrt_closed_vs_oracle", max(
            max_abs(met.s_phi_sqrt - hermitian_sqrt_oracle(met.s_phi)) / scale_phi,
            max_abs(met.s_psi_sqrt - hermitian_sqrt_oracle(met.s_psi)) / scale_psi))
        bump("sqrt_squares_back", max(
            max_abs(met.s_phi_sqrt @ met.s_phi_sqrt - met.s_phi) / scale_phi,
            max_abs(met.s_psi_sqrt @ met.s_psi_sqrt - met.s_psi) / scale_psi))

        fp = fermionize(dec, pair, met)
        bump("fermion_anticommutator", max_abs(anticommutator(fp.c, fp.cdag) - ident))
        bump("fermion_nilpotent", max_abs(fp.c @ fp.c))
        bump("fermion_adjoint_route",
             max_abs(fp.cdag - met.s_psi_sqrt @ b @ met.s_phi_sqrt))
        bump("h_hermiticity", max_abs(fp.h - dagger(fp.h)))
        lo, hi = eigvals2(fp.h)
        expect = sorted([rho, rho + omega])
        bump("h_spectrum", max(abs(lo - expect[0]), abs(hi - expect[1])))
        e_gram = np.array([[np.vdot(x, y) for y in (fp.e0, fp.e1)]
                           for x in (fp.e0, fp.e1)])
        bump("e_orthonormality", max_abs(e_gram - np.eye(2)))
        bump("n0_similarity",
             max_abs(fp.n0 - met.s_psi_sqrt @ n @ met.s_phi_sqrt))

        x11 = complex(rng.normal(), rng.normal())
        x12 = complex(rng.normal(), rng.normal())
        xc = commutant(dec, x11, x12)
        bump("commutant_commutes", max_abs(xc @ h_mat - h_mat @ xc))
        xi, xneg = involutive_symmetry(dec)
        bump("involution_squares", max(
            max_abs(xi @ xi - ident),
            max_abs(xneg @ xneg - ident),
            max_abs(xi @ h_mat - h_mat @ xi)))

    lines = tuple(InvariantLine(name, worst[name], gate) for name, gate in GATES)
    return VerificationReport(count=count, seed=seed, lines=lines)


def format_table(report):
    """Fixed-layout residual table (bit-reproducible for a fixed seed)."""
    out = [f"verification: count={report.count} seed={report.seed}"]
    width = max(len(line.name) for line in report.lines)
    for line in report.lines:
        status = "pass" if line.passed else "FAIL"
        out.append(f"{line.name:<{width}}  {line.residual:.17e}  "
                   f"gate {line.gate:.1e}  {status}")
    out.append("result: " + ("PASS" if report.passed else "FAIL"))
    return "\n".join(out) + "\n"
