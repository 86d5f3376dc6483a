import numpy as np
import pytest

from pfkit.algebra import sample_parameters
from pfkit.decomposition import Branch, Decomposition, decompose
from pfkit.errors import DegenerateParameters, NotInPTForm, TrivialCommutant
from pfkit.mat2 import commutator, identity2, mat2, max_abs
from pfkit.symmetry import Phase, check_pt, classify_phase, commutant, involutive_symmetry

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)


def random_dec(rng):
    p = sample_parameters(rng)
    omega = complex(rng.normal(), rng.normal()) + 0.7
    rho = complex(rng.normal(), rng.normal())
    return Decomposition(omega, rho, p.alpha, p.beta, p.gamma,
                         omega * p.gamma, Branch.MINUS)


def pt_form_matrix(a00, b01, x=1.0):
    """Generalized PT-form matrix [[A, B], [conj(B)/x^2, conj(A)]]."""
    return np.array([[a00, b01],
                     [np.conj(b01) / x ** 2, np.conj(a00)]], dtype=complex)


def random_pt_matrix(rng, phase, x=1.0):
    """Random generalized PT-form matrix in the requested phase."""
    re_a = rng.normal()
    u = rng.uniform(0.2, 1.5)        # |Im A|
    if phase is Phase.EXCEPTIONAL_POINT:
        unit = (1.0, -1.0, 1.0j, -1.0j)[int(rng.integers(4))]
        b01 = abs(x) * u * unit  # |b01| = x |Im A| exactly when x > 0
    else:
        ang = rng.uniform(0, 2 * np.pi)
        mag = abs(x) * u * (rng.uniform(1.3, 3.0) if phase is Phase.UNBROKEN
                            else rng.uniform(0.2, 0.75))
        b01 = mag * complex(np.cos(ang), np.sin(ang))
    return pt_form_matrix(complex(re_a, u), b01, x)


class TestCommutant:
    def test_identity_member(self):
        dec = decompose(PAULI_X)
        assert np.allclose(commutant(dec, 1.0, 0.0), identity2())

    def test_pauli_x_member(self):
        dec = decompose(PAULI_X)  # alpha = 1, beta = -1
        x = commutant(dec, 0.0, 1.0)
        assert np.allclose(x, PAULI_X)
        assert max_abs(commutator(x, PAULI_X)) < 1e-14

    def test_always_commutes(self):
        rng = np.random.default_rng(3)
        for _ in range(300):
            dec = random_dec(rng)
            h = dec.matrix()
            x = commutant(dec, complex(rng.normal(), rng.normal()),
                          complex(rng.normal(), rng.normal()))
            assert max_abs(commutator(x, h)) < 1e-10 * (1 + max_abs(h)) * (1 + max_abs(x))

    def test_trivial_when_omega_zero(self):
        dec = Decomposition(1.0, 0.0, 1.0, -1.0, 0.5, 0.5, Branch.MINUS)
        frozen = object.__new__(Decomposition)
        object.__setattr__(frozen, "omega", 0.0)
        for f in ("rho", "alpha", "beta", "gamma", "mu", "branch"):
            object.__setattr__(frozen, f, getattr(dec, f) if f != "mu" else 0.0)
        with pytest.raises(TrivialCommutant):
            commutant(frozen, 1.0, 0.0)


class TestInvolution:
    def test_pauli_x(self):
        dec = decompose(PAULI_X)  # alpha = 1, beta = -1
        x, xneg = involutive_symmetry(dec)
        assert np.allclose(x, PAULI_X) or np.allclose(xneg, PAULI_X)

    def test_alpha_zero_closed_form(self):
        beta = 2.0 - 1.0j
        gamma = 1.0 / (0.0 - beta)
        dec = Decomposition(1.0, 0.0, 0.0, beta, gamma, gamma, Branch.MINUS)
        x, _ = involutive_symmetry(dec)
        expected = np.array([[-1.0, -2.0 / beta], [0.0, 1.0]])
        assert max_abs(x - expected) < 1e-14

    def test_squares_to_identity_and_commutes(self):
        rng = np.random.default_rng(7)
        for _ in range(300):
            dec = random_dec(rng)
            h = dec.matrix()
            for x in involutive_symmetry(dec):
                assert max_abs(x @ x - identity2()) < 1e-10 * (1 + max_abs(x)) ** 2
                assert max_abs(commutator(x, h)) \
                    < 1e-10 * (1 + max_abs(h)) * (1 + max_abs(x))

    def test_degenerate_rejected(self):
        dec = decompose(PAULI_X)
        frozen = object.__new__(Decomposition)
        for f in ("omega", "rho", "alpha", "gamma", "mu", "branch"):
            object.__setattr__(frozen, f, getattr(dec, f))
        object.__setattr__(frozen, "beta", dec.alpha)
        with pytest.raises(DegenerateParameters):
            involutive_symmetry(frozen)


class TestCheckPT:
    def test_exceptional_point_case(self):
        rep = check_pt(mat2(1j, 1, 1, -1j))
        assert rep.phase is Phase.EXCEPTIONAL_POINT
        assert abs(rep.q) < 1e-14
        assert abs(rep.eps_plus) < 1e-7 and abs(rep.eps_minus) < 1e-7

    def test_unbroken_real_symmetric(self):
        rep = check_pt(PAULI_X)
        assert rep.phase is Phase.UNBROKEN
        assert abs(rep.q - 1.0) < 1e-14
        assert abs(abs(rep.lambda_plus) - 1) < 1e-10
        assert abs(abs(rep.lambda_minus) - 1) < 1e-10
        assert abs(rep.eps_plus - 1) < 1e-14
        assert abs(rep.eps_minus + 1) < 1e-14

    def test_broken_conjugate_pair(self):
        h = mat2(2j, 1, 1, -2j)
        rep = check_pt(h)
        assert rep.phase is Phase.BROKEN
        # eigenvalues +-i*sqrt(3), exchanged by the antilinear symmetry
        assert abs(rep.eps_plus - 1j * np.sqrt(3)) < 1e-12
        assert abs(rep.eps_minus + 1j * np.sqrt(3)) < 1e-12
        assert abs(abs(rep.lambda_plus) - 1) < 1e-10
        assert abs(abs(rep.lambda_minus) - 1) < 1e-10

    def test_not_in_form_reports_residuals(self):
        with pytest.raises(NotInPTForm) as exc:
            check_pt(mat2(1, 2, 3, 4))
        assert exc.value.offdiag_residual > 0
        assert exc.value.diag_residual > 0

    def test_rejects_zero_x(self):
        with pytest.raises(ValueError):
            check_pt(PAULI_X, x=0.0)

    def test_unbroken_slopes_at_unit_x(self):
        rng = np.random.default_rng(11)
        for _ in range(300):
            h = random_pt_matrix(rng, Phase.UNBROKEN)
            rep = check_pt(h)
            assert rep.phase is Phase.UNBROKEN
            assert abs(abs(rep.lambda_plus) - 1) < 1e-10
            assert abs(abs(rep.lambda_minus) - 1) < 1e-10
            assert abs(abs(rep.alpha) - 1.0) < 1e-8
            assert abs(abs(rep.beta) - 1.0) < 1e-8

    def test_broken_slopes_at_unit_x(self):
        rng = np.random.default_rng(13)
        for _ in range(300):
            h = random_pt_matrix(rng, Phase.BROKEN)
            rep = check_pt(h)
            assert rep.phase is Phase.BROKEN
            assert abs(rep.alpha * np.conj(rep.beta) - 1.0) < 1e-8
            assert abs(abs(rep.lambda_plus) - 1) < 1e-10
            assert abs(abs(rep.lambda_minus) - 1) < 1e-10
            # conjugate pair: omega = -2i Im(rho) whatever the common real part
            rho, other = rep.eps_minus, rep.eps_plus
            assert abs((other - rho) - (-2j * rho.imag)) < 1e-8 * (1 + abs(rho))

    def test_broken_traceless_rho_purely_imaginary(self):
        # with no real diagonal shift the conjugate pair sits on the
        # imaginary axis: rho imaginary and omega = -2i Im(rho)
        rng = np.random.default_rng(131)
        for _ in range(200):
            u = rng.uniform(0.3, 1.5)
            ang = rng.uniform(0, 2 * np.pi)
            b01 = u * rng.uniform(0.2, 0.75) * complex(np.cos(ang), np.sin(ang))
            rep = check_pt(pt_form_matrix(complex(0.0, u), b01))
            assert rep.phase is Phase.BROKEN
            rho = rep.eps_minus
            assert abs(rho.real) < 1e-10 * (1 + abs(rho))
            assert abs((rep.eps_plus - rho) - (-2j * rho.imag)) < 1e-10 * (1 + abs(rho))

    def test_generalized_x_unbroken(self):
        # |alpha| = |beta| = 1/x and |alpha*beta| = 1/x^2 away from x = 1
        rng = np.random.default_rng(17)
        for _ in range(200):
            x = rng.uniform(0.4, 2.5)
            h = random_pt_matrix(rng, Phase.UNBROKEN, x=x)
            rep = check_pt(h, x=x)
            assert rep.phase is Phase.UNBROKEN
            assert abs(abs(rep.lambda_plus) - 1) < 1e-10
            assert abs(abs(rep.alpha) - 1.0 / x) < 1e-8
            assert abs(abs(rep.beta) - 1.0 / x) < 1e-8
            assert abs(rep.alpha * rep.beta * x ** 2 + np.conj(h[0, 1]) / h[0, 1]) < 1e-8

    def test_generalized_x_broken(self):
        rng = np.random.default_rng(19)
        for _ in range(200):
            x = rng.uniform(0.4, 2.5)
            h = random_pt_matrix(rng, Phase.BROKEN, x=x)
            rep = check_pt(h, x=x)
            assert rep.phase is Phase.BROKEN
            assert abs(rep.alpha * np.conj(rep.beta) - 1.0 / x ** 2) < 1e-8
            # the two exchange factors multiply to one: conj(l+) * l- == 1
            assert abs(np.conj(rep.lambda_plus) * rep.lambda_minus - 1) < 1e-10

    def test_ep_classification_matches_decompose_failure(self):
        # pseudo-fermions must fail to exist exactly where the symmetry
        # check reports coalescence
        from pfkit.errors import ExceptionalPoint

        rng = np.random.default_rng(43)
        for _ in range(200):
            want = (Phase.UNBROKEN, Phase.BROKEN,
                    Phase.EXCEPTIONAL_POINT)[int(rng.integers(3))]
            u = rng.uniform(0.2, 1.5)
            if want is Phase.EXCEPTIONAL_POINT:
                unit = (1.0, -1.0, 1.0j, -1.0j)[int(rng.integers(4))]
                h = pt_form_matrix(complex(0.0, u), u * unit)
            else:
                h = random_pt_matrix(rng, want)
            rep = check_pt(h)
            raised = False
            try:
                decompose(h)
            except ExceptionalPoint:
                raised = True
            assert raised == (rep.phase is Phase.EXCEPTIONAL_POINT)

    def test_eps_matches_eigenvalues(self):
        rng = np.random.default_rng(23)
        for _ in range(200):
            x = rng.uniform(0.4, 2.5)
            phase = (Phase.UNBROKEN, Phase.BROKEN)[int(rng.integers(2))]
            h = random_pt_matrix(rng, phase, x=x)
            rep = check_pt(h, x=x)
            ev = list(np.linalg.eigvals(h))
            for g in (rep.eps_plus, rep.eps_minus):
                nearest = min(ev, key=lambda e: abs(g - e))
                ev.remove(nearest)
                assert abs(g - nearest) < 1e-9 * (1 + abs(nearest))


class TestClassifyPhase:
    def test_real_distinct_unbroken(self):
        assert classify_phase(mat2(1, 0.5, 0, 2)).phase is Phase.UNBROKEN

    def test_dg_exceptional_point(self):
        # coalescence at theta = pi/2 with r = s = t_c = 1, phi = 0
        from pfkit.catalog import DG, to_matrix

        res = classify_phase(to_matrix(DG(1, 1, 1, np.pi / 2, 0)))
        assert res.phase is Phase.EXCEPTIONAL_POINT
        assert abs(res.coalesced_value) < 1e-12  # r cos(theta)

    def test_gmm_exceptional_point(self):
        from pfkit.catalog import GMM, to_matrix

        # z = -ie with e = 2|nu0| makes the discriminant vanish
        spec = GMM(e1=0.0, e2=0.0, g1=0.0, g2=2.0, nu0=1.0)
        res = classify_phase(to_matrix(spec))
        assert res.phase is Phase.EXCEPTIONAL_POINT
        # coalesced value (e1 + e2 - i(g1 + g2)) / 2 = -i
        assert abs(res.coalesced_value - (-1j)) < 1e-12

    def test_unclassifiable(self):
        res = classify_phase(mat2(1j, 0, 0, 2j))
        assert res.phase is Phase.UNCLASSIFIABLE

    def test_q_attached_only_in_pt_form(self):
        assert classify_phase(PAULI_X).q == 1.0
        assert classify_phase(mat2(1, 0.5, 0, 2)).q is None

    def test_q_sign_matches_geometry(self):
        rng = np.random.default_rng(29)
        for _ in range(500):
            phase = (Phase.UNBROKEN, Phase.BROKEN)[int(rng.integers(2))]
            h = random_pt_matrix(rng, phase)
            res = classify_phase(h)
            assert res.phase is phase
            assert (res.q > 0) == (phase is Phase.UNBROKEN)
