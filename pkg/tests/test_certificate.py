import io

import numpy as np
import pytest

from helmmg.certificate import (
    TwoGridConfig,
    assemble_D,
    assemble_D_tilde,
    assemble_gamma,
    certify,
    gamma_tilde_ratio,
    lambda_min_hermitian,
    omega_sweep,
    smoother_correction,
)
from helmmg.linalg import DenseLimitError
from helmmg.problem import (
    ProblemSpec,
    ShiftSpec,
    assemble_helmholtz,
    build_wavenumber_field,
)
from helmmg.transfer import build_transfer_2d


def make_cfg(k=5.0, n=9, scheme="bezier", coarsen="csl", omega=4.5, nu=1,
             beta2=0.7):
    spec = ProblemSpec(kind="constant-k", k=k, nodes_per_dim=n,
                       shift=ShiftSpec(kind="fixed", beta2=beta2))
    f = build_wavenumber_field(spec)
    A = assemble_helmholtz(spec, f, shift_on=False)
    B = assemble_helmholtz(spec, f, shift_on=True) if coarsen == "csl" else A
    pair = build_transfer_2d(n, scheme)
    return TwoGridConfig(A=A, coarse_build_op=B, pair=pair, omega=omega, nu=nu)


def test_smoother_correction_identity():
    # I - M_nu A == (I - X^-1 A)^nu for several nu
    cfg = make_cfg()
    A = cfg.A.toarray()
    N = A.shape[0]
    S = np.eye(N) - (1.0 / cfg.omega) * (A / np.diag(A)[:, None])
    for nu in (0, 1, 2, 3):
        M = smoother_correction(A, cfg.omega, nu)
        want = np.linalg.matrix_power(S, nu)
        got = np.eye(N) - M @ A
        assert np.linalg.norm(got - want) / max(np.linalg.norm(want), 1) <= 1e-11


@pytest.mark.parametrize("nu", [1, 2])
def test_I_minus_DA_equals_dense_T0(nu):
    # the Lemma's claim T0 = I - D A against the explicit product
    cfg = make_cfg(nu=nu)
    A = cfg.A.toarray()
    N = A.shape[0]
    P = cfg.pair.P.toarray()
    R = cfg.pair.R.toarray()
    Ac = R @ cfg.coarse_build_op.toarray() @ P
    CGC = np.eye(N) - P @ np.linalg.solve(Ac, R) @ A
    S = np.eye(N) - (1.0 / cfg.omega) * (A / np.diag(A)[:, None])
    T0 = CGC @ np.linalg.matrix_power(S, nu)
    D = assemble_D(cfg)
    err = np.linalg.norm(np.eye(N) - D @ A - T0, "fro") / np.linalg.norm(T0, "fro")
    assert err <= 1e-11


def test_D_tilde_drops_coupling_term():
    cfg = make_cfg()
    A = cfg.A.toarray()
    D = assemble_D(cfg)
    Dt = assemble_D_tilde(cfg)
    P = cfg.pair.P.toarray()
    R = cfg.pair.R.toarray()
    Ac = R @ cfg.coarse_build_op.toarray() @ P
    CC = P @ np.linalg.solve(Ac, R)
    M = smoother_correction(A, cfg.omega, cfg.nu)
    assert np.allclose(Dt, M + CC, rtol=1e-12)
    assert np.allclose(D, Dt - CC @ A @ M, rtol=1e-12)


def test_gamma_is_hermitian_and_matches_T0():
    cfg = make_cfg()
    A = cfg.A.toarray()
    G = assemble_gamma(cfg, simplified=False)
    assert np.linalg.norm(G - G.conj().T) / np.linalg.norm(G) <= 1e-12
    D = assemble_D(cfg)
    T0 = np.eye(A.shape[0]) - D @ A
    # T0^H T0 = I - Gamma
    lhs = T0.conj().T @ T0
    rhs = np.eye(A.shape[0]) - G
    assert np.linalg.norm(lhs - rhs) / np.linalg.norm(rhs) <= 1e-11


def test_lambda_min_on_known_spectrum():
    Q, _ = np.linalg.qr(np.random.default_rng(2).standard_normal((10, 10)))
    vals = np.linspace(0.3, 4.0, 10)
    G = Q @ np.diag(vals) @ Q.T
    lam = lambda_min_hermitian(G)
    assert np.isclose(lam, 0.3, rtol=1e-8)


def test_certify_known_good_configuration():
    # Bezier + CSL at k = 5 is certified convergent
    rep = certify(make_cfg(k=5.0, n=9, omega=3.5), log=io.StringIO())
    assert rep.hpd_gamma.ok
    assert rep.hpd_gamma_tilde.ok
    assert rep.spectral_norm_T0 < 1.0
    assert rep.hermiticity_residual_gamma <= 1e-12
    # norm bound ||T0|| <= sqrt(1 - lambda_min(Gamma))
    assert rep.spectral_norm_T0 <= np.sqrt(1 - rep.lambda_min_gamma) + 1e-8
    assert rep.sigma_max_DA < 2.0
    assert rep.consistency_warnings == []


def test_certify_known_bad_configuration():
    # linear transfer coarsened on A is not certified and ||T0|| > 1
    rep = certify(make_cfg(k=5.0, n=9, coarsen="original", scheme="linear",
                           omega=3.5), log=io.StringIO())
    assert not rep.hpd_gamma_tilde.ok
    assert rep.spectral_norm_T0 > 1.0


def test_certify_report_text_and_csv():
    rep = certify(make_cfg(omega=3.5), log=io.StringIO())
    text = rep.to_text()
    assert "Gamma HPD" in text and "||T0||" in text
    row = rep.to_csv_row()
    assert len(row.split(",")) == len(rep.CSV_HEADER.split(","))


def test_gamma_tilde_ratio_positive_and_small():
    val = gamma_tilde_ratio(make_cfg(omega=4.5, nu=1))
    assert 0 < val < 1


def test_ratio_decreases_with_omega():
    # the optimality table's qualitative trend: larger omega gives a
    # smaller ratio at nu = 1
    lo = gamma_tilde_ratio(make_cfg(omega=1.5, nu=1))
    hi = gamma_tilde_ratio(make_cfg(omega=7.0, nu=1))
    assert hi < lo


def test_omega_sweep_grid_and_flags():
    rows = omega_sweep(lambda w, nu: make_cfg(omega=w, nu=nu),
                       omegas=(2.0, 4.5), nus=(0, 1))
    assert len(rows) == 4
    flags = {(r["omega"], r["nu"]): r["flag"] for r in rows}
    assert flags[(2.0, 0)] == "degenerate-no-smoothing"
    assert flags[(2.0, 1)] == ""
    assert all(np.isfinite(r["ratio"]) for r in rows)


def test_dense_limit_enforced():
    cfg = make_cfg()
    big = TwoGridConfig(A=FakeBig(), coarse_build_op=cfg.coarse_build_op,
                        pair=cfg.pair, omega=4.5, nu=1)
    with pytest.raises(DenseLimitError):
        big.check_dense_limit()


class FakeBig:
    shape = (3000, 3000)
