import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rssw.kuranishi import (
    ConvergenceError,
    CutoffCollision,
    SandboxConfig,
    approx_f,
    approx_g,
    check_instance,
    make_planted_problem,
    make_problem,
    measured_sup,
    phi_apply,
    phi_derivative,
    phi_invert,
    safe_cutoffs,
    spectral_split,
    sphere_samples,
    verify_zero_correspondence,
)

CFG = SandboxConfig()


@pytest.fixture(scope="module")
def small():
    P = make_problem(4, dim_c=12, dim_r=10, spectrum_range=(1.0, 20.0))
    return P, spectral_split(P, safe_cutoffs(P, 3)[1])


class TestGenerator:
    def test_zero_quadratic(self):
        P = make_problem(1, 8, 7, q_scale=0.0)
        assert not P.T.any()

    def test_prescribed_spectrum(self):
        P = make_problem(2, 5, 4, spectrum=[1.0, 2.0, 3.0])
        nonzero = np.sort(P.eig_c[0])[-3:]
        assert np.max(np.abs(nonzero - [1, 2, 3])) < 1e-12
        assert P.kernel_dims == (2, 1)

    def test_reproducible(self):
        a, b = make_problem(9, 10, 9), make_problem(9, 10, 9)
        assert np.array_equal(a.D, b.D) and np.array_equal(a.T, b.T)
        assert not np.array_equal(a.D, make_problem(10, 10, 9).D)

    def test_inconsistent_kernel(self):
        with pytest.raises(ValueError):
            make_problem(0, 10, 9, kernel_dims=(2, 2))

    def test_exactly_quadratic(self, small):
        P, _ = small
        v = np.random.default_rng(0).standard_normal(P.dim_c)
        assert np.allclose(P.Q(3.5 * v), 3.5**2 * P.Q(v), rtol=1e-13, atol=0)

    def test_spectra_shared(self, small):
        P, _ = small
        r = len(P.spectrum)
        assert np.max(np.abs(np.sort(P.eig_c[0])[-r:] - np.sort(P.eig_r[0])[-r:])) < 1e-10

    def test_contraction_budget(self, small):
        P, S = small
        pts = sphere_samples(np.random.default_rng(1), np.eye(P.dim_c), 3 * CFG.radius, 100)
        assert measured_sup(P, S, pts, with_inverse=True) <= CFG.gamma_target


class TestSplit:
    def test_below_spectrum_leaves_kernel(self, small):
        P, _ = small
        S = spectral_split(P, 0.5)
        assert S.dim_C_low == P.kernel_dims[0]

    def test_above_spectrum(self, small):
        P, _ = small
        S = spectral_split(P, 1e3)
        assert not S.proj_C_high.any() and not S.D_high_inv.any()
        assert np.allclose(S.proj_C_low, np.eye(P.dim_c))

    def test_restricted_inverse(self, small):
        P, S = small
        assert np.max(np.abs(S.D_high_inv @ P.D @ S.proj_C_high - S.proj_C_high)) < 1e-10
        assert np.max(np.abs(P.D @ S.D_high_inv @ S.proj_R_high - S.proj_R_high)) < 1e-10
        bound = 1 / np.sqrt(min(x for x in P.spectrum if x > S.cutoff))
        assert np.linalg.norm(S.D_high_inv, 2) <= bound * (1 + 1e-12)

    def test_projections(self, small):
        P, S = small
        for lo, hi in ((S.proj_C_low, S.proj_C_high), (S.proj_R_low, S.proj_R_high)):
            for p in (lo, hi):
                assert np.allclose(p @ p, p, atol=1e-12) and np.allclose(p, p.T, atol=1e-12)
            assert np.allclose(lo + hi, np.eye(len(lo)), atol=1e-12)
        assert np.max(np.abs(P.D @ S.proj_C_high - S.proj_R_high @ P.D)) < 1e-10

    def test_collision(self, small):
        P, _ = small
        with pytest.raises(CutoffCollision):
            spectral_split(P, float(P.spectrum[2]) + 1e-8)
        with pytest.raises(CutoffCollision):
            spectral_split(P, 0.0)


class TestPhi:
    def test_identity_without_q(self):
        P = make_problem(3, 8, 7, q_scale=0.0)
        S = spectral_split(P, safe_cutoffs(P, 2)[0])
        v = np.arange(8.0)
        assert np.array_equal(phi_apply(P, S, v), v)
        u, it = phi_invert(P, S, v, CFG)
        assert it == 1 and np.array_equal(u, v)

    def test_origin_fixed(self, small):
        P, S = small
        assert not phi_apply(P, S, np.zeros(P.dim_c)).any()

    def test_derivative_finite_difference(self, small):
        P, S = small
        rng = np.random.default_rng(5)
        v, w = rng.standard_normal(P.dim_c), rng.standard_normal(P.dim_c)
        h = 1e-5
        fd = (phi_apply(P, S, v + h * w) - phi_apply(P, S, v - h * w)) / (2 * h)
        assert np.max(np.abs(fd - phi_derivative(P, S, v) @ w)) < 1e-6

    def test_roundtrip(self, small):
        P, S = small
        rng = np.random.default_rng(6)
        for v in sphere_samples(rng, np.eye(P.dim_c), CFG.radius, 100) * rng.uniform(0, 1, (100, 1)):
            w, _ = phi_invert(P, S, phi_apply(P, S, v), CFG)
            assert np.linalg.norm(w - v) < 1e-9

    def test_ball_sandwich(self, small):
        P, S = small
        R = CFG.radius
        pts = sphere_samples(np.random.default_rng(7), np.eye(P.dim_c), R, 200)
        g = measured_sup(P, S, pts, with_inverse=True)
        norms = [np.linalg.norm(phi_apply(P, S, v)) for v in pts]
        assert R * (1 - g) <= min(norms) and max(norms) <= R * (1 + g)

    def test_non_convergence_reports_residual(self):
        P = make_problem(8, 8, 7, q_scale=500.0)
        S = spectral_split(P, safe_cutoffs(P, 2)[0])
        u = 50 * np.ones(8)
        with pytest.raises(ConvergenceError) as exc:
            phi_invert(P, S, u, SandboxConfig(max_iter=20))
        assert exc.value.residual > 0


class TestReduction:
    def test_f_without_q(self):
        P = make_problem(3, 8, 7, q_scale=0.0)
        S = spectral_split(P, safe_cutoffs(P, 2)[1])
        u = S.basis_C_low @ np.ones(S.dim_C_low)
        assert np.allclose(approx_f(P, S, CFG, u), P.D @ u, atol=1e-12)

    def test_f_equals_g(self, small):
        P, S = small
        for u in sphere_samples(np.random.default_rng(8), S.basis_C_low, 0.7, 20):
            assert np.linalg.norm(approx_f(P, S, CFG, u) - approx_g(P, S, CFG, u)) < 1e-9


@pytest.fixture(scope="module")
def planted():
    P0 = make_problem(11, 20, 18, spectrum_range=(1.0, 30.0))
    cutoff = safe_cutoffs(P0, 3)[1]
    return make_planted_problem(11, cutoff, 20, 18, spectrum_range=(1.0, 30.0))


class TestPlanted:
    def test_zero(self, planted):
        P, S, v_star = planted
        assert np.linalg.norm(P.F(v_star)) < 1e-12
        assert np.isclose(np.linalg.norm(v_star), CFG.radius / 2)

    def test_correspondence(self, planted):
        P, S, v_star = planted
        rep = verify_zero_correspondence(P, S, CFG, v_star)
        assert rep["zero"] and rep["low_zero"] and rep["holds"]

    def test_f_vanishes_at_image(self, planted):
        P, S, v_star = planted
        u = phi_apply(P, S, v_star)
        assert np.linalg.norm(S.proj_C_high @ u) < 1e-12
        assert np.linalg.norm(approx_f(P, S, CFG, u)) < 1e-8

    def test_zero_set_is_the_small_sphere(self, planted):
        P, S, v_star = planted
        rng = np.random.default_rng(3)
        n2 = v_star @ v_star
        for x in np.linspace(0, 1, 7):
            kappa = S.kernel_basis @ rng.standard_normal(S.kernel_basis.shape[1])
            kappa *= np.sqrt(x * (1 - x) * n2) / np.linalg.norm(kappa)
            v = x * v_star + kappa
            assert np.linalg.norm(P.F(v)) < 1e-12
            assert np.linalg.norm(v) <= np.sqrt(n2) + 1e-12

    def test_generic_points(self, planted):
        P, S, _ = planted
        for v in sphere_samples(np.random.default_rng(4), np.eye(P.dim_c), 0.5, 10):
            rep = verify_zero_correspondence(P, S, CFG, v)
            assert rep["F_norm"] > 10 * CFG.tol_nonlinear and not rep["low_zero"] and rep["holds"]

    def test_kernel_vector_without_q(self):
        P = make_problem(5, 9, 8, q_scale=0.0)
        S = spectral_split(P, safe_cutoffs(P, 2)[0])
        rep = verify_zero_correspondence(P, S, CFG, S.kernel_basis[:, 0])
        assert rep["zero"] and rep["low_zero"] and rep["holds"]

    def test_contraction_on_3R(self, planted):
        P, S, _ = planted
        pts = sphere_samples(np.random.default_rng(9), np.eye(P.dim_c), 3 * CFG.radius, 200)
        assert measured_sup(P, S, pts, with_inverse=True) <= CFG.gamma_target


def test_sup_decreases_with_cutoff(small):
    P, _ = small
    pts = sphere_samples(np.random.default_rng(0), np.eye(P.dim_c), 1.0, 40)
    sups = [measured_sup(P, spectral_split(P, c), pts) for c in safe_cutoffs(P, 5)]
    assert all(b <= a + 1e-12 for a, b in zip(sups, sups[1:])) and sups[-1] < sups[0]


@settings(max_examples=8)
@given(st.integers(0, 10**6))
def test_instance_report_is_clean(seed):
    rep = check_instance(seed, 14, 12, n_roundtrip=10, n_boundary=40, n_sphere=60)
    assert rep["sandwich_ok"] and rep["monotone_ok"] and rep["planted"]["holds"]
    assert rep["generic_biconditional"] and rep["sphere_ok"]
    assert rep["roundtrip_err"] < 1e-9 and rep["f_minus_g_err"] < 1e-9
