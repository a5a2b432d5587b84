"""Finite-dimensional Kuranishi model on synthetic operators.

``F(v) = D v + Q(v, v)`` with ``D: R^dim_c -> R^dim_r`` linear and ``Q`` a
symmetric bilinear tensor. A spectral cutoff splits both sides into low and
high parts, ``phi = 1 + D_high^-1 pi_high Q`` straightens the high directions,
and the zeros of ``F`` become zeros of a map between the low parts.

This is the only floating-point module. Default tolerances: ``1e-10`` for
linear-algebra identities, ``1e-8`` for nonlinear fixed points.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SandboxConfig",
    "KuranishiProblem",
    "SpectralSplit",
    "ConvergenceError",
    "CutoffCollision",
    "make_problem",
    "make_planted_problem",
    "spectral_split",
    "phi_apply",
    "phi_derivative",
    "phi_invert",
    "approx_f",
    "approx_g",
    "verify_zero_correspondence",
    "measured_sup",
    "sphere_samples",
    "safe_cutoffs",
    "demo",
]

TIE_TOL = 1e-6


class ConvergenceError(RuntimeError):
    def __init__(self, residual: float, iterations: int):
        super().__init__(f"fixed-point iteration stalled at residual {residual:.3e} after {iterations} steps")
        self.residual = residual
        self.iterations = iterations


class CutoffCollision(ValueError):
    """Cutoff within ``TIE_TOL`` of an eigenvalue of ``D^T D``."""


@dataclass(frozen=True)
class SandboxConfig:
    gamma_target: float = 0.25
    tol: float = 1e-10
    tol_nonlinear: float = 1e-8
    max_iter: int = 200
    radius: float = 1.0

    def __post_init__(self):
        if not 0 < self.gamma_target < 1:
            raise ValueError(f"gamma_target must lie in (0, 1), got {self.gamma_target}")
        if self.radius <= 0:
            raise ValueError("radius must be positive")


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class KuranishiProblem:
    D: np.ndarray
    T: np.ndarray  # shape (dim_r, dim_c, dim_c), symmetric in the last two axes
    spectrum: np.ndarray  # prescribed nonzero eigenvalues of D^T D, ascending
    eig_c: tuple = field(repr=False)  # (eigenvalues, eigenvectors) of D^T D
    eig_r: tuple = field(repr=False)  # same for D D^T
    seed: int | None = None

    @property
    def dim_c(self) -> int:
        return self.D.shape[1]

    @property
    def dim_r(self) -> int:
        return self.D.shape[0]

    @property
    def kernel_dims(self) -> tuple:
        rank = len(self.spectrum)
        return self.dim_c - rank, self.dim_r - rank

    def Q(self, v: np.ndarray) -> np.ndarray:
        return (self.T @ v) @ v

    def Q_bilinear(self, v: np.ndarray, w: np.ndarray) -> np.ndarray:
        return (self.T @ w) @ v

    def dQ(self, v: np.ndarray) -> np.ndarray:
        """Jacobian of ``v -> Q(v, v)`` at ``v``."""
        return 2.0 * (self.T @ v)

    def F(self, v: np.ndarray) -> np.ndarray:
        return self.D @ v + self.Q(v)


def _orthogonal(rng: np.random.Generator, n: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def _spectrum(rng, rank: int, spectrum_range) -> np.ndarray:
    lo, hi = spectrum_range
    if not 0 < lo < hi:
        raise ValueError("spectrum_range must satisfy 0 < lo < hi")
    base = np.linspace(lo, hi, rank)
    if rank == 1:
        return base
    gap = (hi - lo) / (rank - 1)
    jitter = rng.uniform(-0.25, 0.25, rank) * gap
    jitter[0] = abs(jitter[0])
    jitter[-1] = -abs(jitter[-1])
    return np.sort(base + jitter)


def _build(D: np.ndarray, T: np.ndarray, spectrum: np.ndarray, seed) -> KuranishiProblem:
    eig_c = np.linalg.eigh(D.T @ D)
    eig_r = np.linalg.eigh(D @ D.T)
    return KuranishiProblem(
        _frozen(D),
        _frozen(T),
        _frozen(spectrum),
        (_frozen(eig_c[0]), _frozen(eig_c[1])),
        (_frozen(eig_r[0]), _frozen(eig_r[1])),
        seed,
    )


def _operator(rng, dim_c, dim_r, kernel_dims, spectrum, spectrum_range):
    if dim_c < 1 or dim_r < 1:
        raise ValueError("dimensions must be positive")
    if spectrum is not None:
        lam = np.sort(np.asarray(spectrum, dtype=float))
        if np.any(lam <= 0):
            raise ValueError("prescribed eigenvalues of D^T D must be positive")
        rank = len(lam)
    elif kernel_dims is not None:
        rank = dim_c - kernel_dims[0]
        lam = None
    else:
        rank = min(dim_c, dim_r) - 1
        lam = None
    if kernel_dims is not None and (dim_c - kernel_dims[0] != rank or dim_r - kernel_dims[1] != rank):
        raise ValueError(f"kernel_dims {kernel_dims} inconsistent with rank {rank} for a {dim_r}x{dim_c} map")
    if not 0 <= rank <= min(dim_c, dim_r):
        raise ValueError(f"rank {rank} impossible for a {dim_r}x{dim_c} map")
    if lam is None:
        lam = _spectrum(rng, rank, spectrum_range) if rank else np.zeros(0)
    U = _orthogonal(rng, dim_r)
    V = _orthogonal(rng, dim_c)
    D = (U[:, :rank] * np.sqrt(lam)) @ V[:, :rank].T
    return D, lam


def _contraction_scale(T: np.ndarray, lam: np.ndarray, radius: float, gamma: float) -> float:
    """Factor making ``6R ||T||_F / s_min <= gamma``.

    ``||D_high^-1 pi dQ_v|| <= 2 ||T||_F ||v|| / s_min`` for every cutoff, so
    this bounds the contraction constant on ``B(0, 3R)``.
    """
    norm = np.linalg.norm(T)
    if norm == 0 or len(lam) == 0:
        return 0.0
    s_min = np.sqrt(lam[0])
    return gamma * s_min / (6.0 * radius * norm)


def make_problem(
    seed: int,
    dim_c: int = 40,
    dim_r: int = 38,
    kernel_dims: tuple | None = None,
    spectrum_range: tuple = (1.0, 100.0),
    q_scale: float = 1.0,
    cfg: SandboxConfig | None = None,
    spectrum=None,
) -> KuranishiProblem:
    """Random instance with a prescribed spectrum for ``D^T D``.

    ``q_scale`` in ``[0, 1]`` multiplies a tensor already sized to the
    contraction budget ``cfg.gamma_target``; ``q_scale = 0`` gives ``Q = 0``.
    """
    cfg = cfg or SandboxConfig()
    if q_scale < 0:
        raise ValueError("q_scale must be non-negative")
    rng = np.random.default_rng(seed)
    D, lam = _operator(rng, dim_c, dim_r, kernel_dims, spectrum, spectrum_range)
    raw = rng.standard_normal((dim_r, dim_c, dim_c))
    T = 0.5 * (raw + raw.transpose(0, 2, 1))
    T = T * (_contraction_scale(T, lam, cfg.radius, cfg.gamma_target) * q_scale)
    return _build(D, T, lam, seed)


@dataclass(frozen=True, eq=False)
class SpectralSplit:
    cutoff: float
    proj_C_low: np.ndarray
    proj_C_high: np.ndarray
    proj_R_low: np.ndarray
    proj_R_high: np.ndarray
    D_high_inv: np.ndarray  # dim_c x dim_r, zero on the low part of R
    basis_C_low: np.ndarray = field(repr=False)
    basis_C_high: np.ndarray = field(repr=False)
    kernel_basis: np.ndarray = field(repr=False)

    @property
    def dim_C_low(self) -> int:
        return self.basis_C_low.shape[1]


def safe_cutoffs(P: KuranishiProblem, count: int) -> list:
    """``count`` increasing cutoffs at midpoints of spectral gaps, spread over the spectrum."""
    lam = np.asarray(P.spectrum)
    if len(lam) < 2:
        raise ValueError("need at least two eigenvalues to place a cutoff")
    idx = np.unique(np.linspace(0, len(lam) - 2, count + 2).round().astype(int)[1:-1])
    return [float((lam[i] + lam[i + 1]) / 2) for i in idx]


def spectral_split(P: KuranishiProblem, cutoff: float) -> SpectralSplit:
    """Split both sides at ``cutoff``: high = eigenvalues of ``D^T D`` strictly above it."""
    cutoff = float(cutoff)
    if cutoff < TIE_TOL:
        raise CutoffCollision(f"cutoff {cutoff} must exceed {TIE_TOL} so the kernel stays low")
    vals_c, vecs_c = P.eig_c
    vals_r, vecs_r = P.eig_r
    for vals in (vals_c, vals_r):
        near = np.abs(vals - cutoff)
        if near.size and near.min() <= TIE_TOL:
            raise CutoffCollision(f"cutoff {cutoff} within {TIE_TOL} of eigenvalue {vals[near.argmin()]}")
    hi_c = vals_c > cutoff
    hi_r = vals_r > cutoff
    Vh = vecs_c[:, hi_c]
    Vl = vecs_c[:, ~hi_c]
    Uh = vecs_r[:, hi_r]
    Ul = vecs_r[:, ~hi_r]
    ker = vecs_c[:, vals_c <= TIE_TOL]
    # D_high^-1 = V_h diag(1/lambda) V_h^T D^T
    D_high_inv = (Vh / vals_c[hi_c]) @ (Vh.T @ P.D.T)
    return SpectralSplit(
        cutoff,
        _frozen(Vl @ Vl.T),
        _frozen(Vh @ Vh.T),
        _frozen(Ul @ Ul.T),
        _frozen(Uh @ Uh.T),
        _frozen(D_high_inv),
        _frozen(Vl),
        _frozen(Vh),
        _frozen(ker),
    )


def _correction(P: KuranishiProblem, S: SpectralSplit, v: np.ndarray) -> np.ndarray:
    return S.D_high_inv @ (S.proj_R_high @ P.Q(v))


def phi_apply(P: KuranishiProblem, S: SpectralSplit, v: np.ndarray) -> np.ndarray:
    return v + _correction(P, S, v)


def phi_derivative(P: KuranishiProblem, S: SpectralSplit, v: np.ndarray) -> np.ndarray:
    return np.eye(P.dim_c) + S.D_high_inv @ S.proj_R_high @ P.dQ(v)


def phi_invert(P: KuranishiProblem, S: SpectralSplit, u: np.ndarray, cfg: SandboxConfig | None = None):
    """Solve ``phi(v) = u`` by ``v <- u - D^-1 pi Q(v)``; returns ``(v, iterations)``."""
    cfg = cfg or SandboxConfig()
    u = np.asarray(u, dtype=float)
    v = u.copy()
    last = float("inf")
    with np.errstate(over="ignore", invalid="ignore"):
        for it in range(1, cfg.max_iter + 1):
            nxt = u - _correction(P, S, v)
            # phi(v) - u = v - nxt, so the step is the residual of the previous iterate
            residual = float(np.linalg.norm(v - nxt))
            if not np.isfinite(residual):
                # diverged; report the last finite residual
                raise ConvergenceError(last, it)
            v, last = nxt, residual
            if residual <= cfg.tol:
                return v, it
    raise ConvergenceError(last, cfg.max_iter)


def approx_f(P, S, cfg, u_low) -> np.ndarray:
    """Low part of ``F`` pulled back through ``phi^-1``."""
    v, _ = phi_invert(P, S, u_low, cfg)
    return S.proj_R_low @ P.F(v)


def approx_g(P, S, cfg, u_low) -> np.ndarray:
    """``(1 - pi)(D u + Q(phi^-1 u))``; agrees with ``approx_f`` on the low part."""
    v, _ = phi_invert(P, S, u_low, cfg)
    return S.proj_R_low @ (P.D @ np.asarray(u_low, dtype=float) + P.Q(v))


def verify_zero_correspondence(P, S, cfg, v, tol: float | None = None) -> dict:
    """Both sides of: ``F(v) = 0`` iff ``phi(v)`` is low and the low part of ``F(v)`` vanishes."""
    cfg = cfg or SandboxConfig()
    tol = cfg.tol_nonlinear if tol is None else tol
    v = np.asarray(v, dtype=float)
    Fv = P.F(v)
    u = phi_apply(P, S, v)
    f_norm = float(np.linalg.norm(Fv))
    u_high = float(np.linalg.norm(S.proj_C_high @ u))
    F_high = float(np.linalg.norm(S.proj_R_high @ Fv))
    F_low = float(np.linalg.norm(S.proj_R_low @ Fv))
    lhs = f_norm <= tol
    rhs = u_high <= tol and F_low <= tol
    return {
        "F_norm": f_norm,
        "phi_high_norm": u_high,
        "F_high_norm": F_high,
        "F_low_norm": F_low,
        "zero": lhs,
        "low_zero": rhs,
        "holds": lhs == rhs,
    }


def make_planted_problem(
    seed: int,
    cutoff: float,
    dim_c: int = 40,
    dim_r: int = 38,
    kernel_dims: tuple | None = None,
    spectrum_range: tuple = (1.0, 100.0),
    cfg: SandboxConfig | None = None,
):
    """Instance with a known zero ``v_star`` and a compact zero set.

    ``Q(v, v) = (<v, u0>^2 + |P_ker v|^2) w0`` with ``u0 = v*/|v*|`` and
    ``w0 = -D v* / |v*|^2``. Writing a zero as ``x v* + kappa`` with ``kappa``
    in the kernel forces ``|kappa|^2 = x(1-x)|v*|^2``, so every zero has norm at
    most ``|v*| = R/2``. The high part of ``v*`` has norm at most
    ``gamma R / 24``, which keeps ``|D^-1 pi dQ_v| <= gamma`` on ``B(0, 3R)``.

    Returns ``(problem, split, v_star)``.
    """
    cfg = cfg or SandboxConfig()
    rng = np.random.default_rng(seed)
    D, lam = _operator(rng, dim_c, dim_r, kernel_dims, None, spectrum_range)
    bare = _build(D, np.zeros((dim_r, dim_c, dim_c)), lam, seed)
    S = spectral_split(bare, cutoff)
    vals_c, vecs_c = bare.eig_c
    low_nonker = vecs_c[:, (vals_c > TIE_TOL) & (vals_c <= cutoff)]
    if low_nonker.shape[1] == 0:
        raise ValueError("cutoff leaves no low eigenvector outside the kernel; raise it")
    R = cfg.radius
    h = cfg.gamma_target * R / 24 * rng.uniform(0.5, 1.0)
    high = S.basis_C_high @ rng.standard_normal(S.basis_C_high.shape[1])
    nh = np.linalg.norm(high)
    high = high / nh * h if nh > 0 else high * 0
    low = low_nonker @ rng.standard_normal(low_nonker.shape[1])
    low *= np.sqrt((R / 2) ** 2 - np.dot(high, high)) / np.linalg.norm(low)
    v_star = low + high
    n2 = float(np.dot(v_star, v_star))
    u0 = v_star / np.sqrt(n2)
    w0 = -(D @ v_star) / n2
    M = np.outer(u0, u0) + S.kernel_basis @ S.kernel_basis.T
    T = w0[:, None, None] * M[None, :, :]
    return _build(D, T, lam, seed), S, v_star


def measured_sup(P, S, samples, with_inverse: bool = False) -> float:
    """``max ||pi_high dQ_v||`` (or with ``D_high^-1`` in front) over the sample points."""
    left = S.D_high_inv @ S.proj_R_high if with_inverse else S.proj_R_high
    best = 0.0
    for v in samples:
        best = max(best, float(np.linalg.norm(left @ P.dQ(v), 2)))
    return best


def sphere_samples(rng: np.random.Generator, basis: np.ndarray, radius: float, n: int) -> np.ndarray:
    """``n`` points of norm ``radius`` in the column span of the orthonormal ``basis``."""
    g = rng.standard_normal((n, basis.shape[1]))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return radius * (g @ basis.T)


def _max_abs(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if a.size else 0.0


def check_instance(
    seed: int,
    dim_c: int = 40,
    dim_r: int = 38,
    cfg: SandboxConfig | None = None,
    cutoff: float | None = None,
    n_roundtrip: int = 100,
    n_boundary: int = 200,
    n_sphere: int = 500,
    margins=(0.05, 0.1, 0.2, 0.3, 0.4),
) -> dict:
    """Every sandbox verification on one seeded instance; floats only, JSON-ready."""
    cfg = cfg or SandboxConfig()
    R = cfg.radius
    rng = np.random.default_rng([seed, 1])
    P = make_problem(seed, dim_c, dim_r, cfg=cfg)
    cut = safe_cutoffs(P, 5)
    if cutoff is None:
        cutoff = cut[1]
    S = spectral_split(P, cutoff)
    out: dict = {"seed": seed, "dim_c": dim_c, "dim_r": dim_r, "gamma_target": cfg.gamma_target, "cutoff": cutoff}

    # nonzero spectra of D^T D and D D^T agree
    rank = len(P.spectrum)
    ec = np.sort(P.eig_c[0])[::-1][:rank]
    er = np.sort(P.eig_r[0])[::-1][:rank]
    out["spectrum_sharing_err"] = _max_abs(ec - er)
    out["spectrum_prescribed_err"] = _max_abs(ec[::-1] - P.spectrum)

    # restricted inverse
    I_c, I_r = S.proj_C_high, S.proj_R_high
    out["inverse_left_err"] = _max_abs(S.D_high_inv @ P.D @ I_c - I_c)
    out["inverse_right_err"] = _max_abs(P.D @ S.D_high_inv @ I_r - I_r)
    out["split_commute_err"] = _max_abs(P.D @ I_c - I_r @ P.D)

    # round trip on B(0, R)
    worst = 0.0
    iters = 0
    for _ in range(n_roundtrip):
        v = sphere_samples(rng, np.eye(dim_c), R * rng.uniform() ** (1 / dim_c), 1)[0]
        w, it = phi_invert(P, S, phi_apply(P, S, v), cfg)
        worst = max(worst, float(np.linalg.norm(w - v)))
        iters = max(iters, it)
    out["roundtrip_err"] = worst
    out["roundtrip_max_iter"] = iters

    # ball sandwich at boundary points; gamma measured at those same points
    bd = sphere_samples(rng, np.eye(dim_c), R, n_boundary)
    gamma_m = measured_sup(P, S, bd, with_inverse=True)
    norms = np.array([np.linalg.norm(phi_apply(P, S, v)) for v in bd])
    out["gamma_measured"] = gamma_m
    out["sandwich_min_ratio"] = float(norms.min() / R)
    out["sandwich_max_ratio"] = float(norms.max() / R)
    out["sandwich_ok"] = bool(norms.min() >= R * (1 - gamma_m) and norms.max() <= R * (1 + gamma_m))

    # f = g on the low part
    fg = 0.0
    for u in sphere_samples(rng, S.basis_C_low, R / 2, 20):
        fg = max(fg, float(np.linalg.norm(approx_f(P, S, cfg, u) - approx_g(P, S, cfg, u))))
    out["f_minus_g_err"] = fg

    # generic points are not zeros, and the correspondence agrees
    generic = [verify_zero_correspondence(P, S, cfg, v) for v in sphere_samples(rng, np.eye(dim_c), R / 2, 10)]
    out["generic_biconditional"] = all(r["holds"] for r in generic)
    out["generic_min_F"] = min(r["F_norm"] for r in generic)

    # shrinking high-mode derivative along increasing cutoffs
    fixed = sphere_samples(np.random.default_rng([seed, 2]), np.eye(dim_c), R, 50)
    sups = [measured_sup(P, spectral_split(P, c), fixed) for c in cut]
    out["monotone_cutoffs"] = cut
    out["monotone_sups"] = sups
    out["monotone_ok"] = bool(all(b <= a + 1e-12 for a, b in zip(sups, sups[1:])) and sups[-1] < sups[0])

    # planted instance
    Pp, Sp, v_star = make_planted_problem(seed, cutoff, dim_c, dim_r, cfg=cfg)
    rep = verify_zero_correspondence(Pp, Sp, cfg, v_star)
    u_star = phi_apply(Pp, Sp, v_star)
    out["planted"] = rep
    out["planted_f_at_phi"] = float(np.linalg.norm(approx_f(Pp, Sp, cfg, Sp.proj_C_low @ u_star)))
    big = sphere_samples(rng, np.eye(dim_c), 3 * R, n_boundary)
    gamma_3r = measured_sup(Pp, Sp, big, with_inverse=True)
    out["planted_gamma_3R"] = gamma_3r
    kept = [mg for mg in margins if 1.5 * R * (1 + mg) < 3 * R * (1 - gamma_3r)]
    out["sphere_margins"] = kept
    residual = np.inf
    for mg in kept:
        for u in sphere_samples(rng, Sp.basis_C_low, 1.5 * R * (1 + mg), n_sphere // max(len(kept), 1)):
            residual = min(residual, float(np.linalg.norm(approx_f(Pp, Sp, cfg, u))))
    out["sphere_min_residual"] = float(residual) if kept else None
    out["sphere_ok"] = bool(kept) and residual > 10 * cfg.tol
    return out


def demo(seed: int = 0, dim_c: int = 40, dim_r: int = 38, gamma: float = 0.25, cutoff: float | None = None) -> dict:
    cfg = SandboxConfig(gamma_target=gamma)
    return check_instance(seed, dim_c, dim_r, cfg, cutoff)
