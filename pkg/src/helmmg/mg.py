"""Multilevel hierarchy construction and V-/W-cycle stationary iteration.

Level 0 smooths and computes residuals with the unshifted Helmholtz
operator A.  The coarse chain is built by Galerkin coarsening starting
from the CSL C (or from A when ``coarsen_on='original'``):

    L_1 = R C P,   L_{j+1} = R L_j P,

halving nodes-per-dimension (n -> (n+1)/2) until n < 10; the coarsest
operator is LU-factorized densely.  One cycle at a level is: optional
pre-smoothing, restrict the residual, recurse gamma times starting from
the zero coarse correction, prolongate-and-add, post-smooth.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .problem import assemble_helmholtz, build_wavenumber_field
from .smoothing import SmootherConfig, apply_smoother
from .transfer import build_transfer_2d, galerkin_coarse

COARSEST_NODES = 10  # stop coarsening when nodes-per-dim drops below this


@dataclass
class Level:
    """One hierarchy level: operator, grid size, transfer to next level."""

    op: object  # ComplexSparseMatrix (CSR)
    n: int
    pair: object = None  # TransferPair, absent on the coarsest level
    diag: np.ndarray = None  # cached operator diagonal for Jacobi


@dataclass
class Hierarchy:
    """Ordered levels (fine to coarse) plus the coarsest dense LU."""

    levels: list
    coarse_lu: tuple
    spec: object = None

    @property
    def fine_operator(self):
        return self.levels[0].op

    @property
    def nlevels(self):
        return len(self.levels)


@dataclass
class CycleConfig:
    """Cycle shape and stopping rule."""

    gamma: int = 1  # 1 = V-cycle, 2 = W-cycle
    smoother: SmootherConfig = field(default_factory=SmootherConfig)
    tol: float = 1e-5
    max_cycles: int = 1000

    def __post_init__(self):
        if self.gamma not in (1, 2):
            raise ValueError("gamma must be 1 (V-cycle) or 2 (W-cycle)")
        if self.tol <= 0:
            raise ValueError("tol must be positive")


@dataclass
class SolveResult:
    """Solution, cycle count, residual history and final status."""

    u: np.ndarray
    cycles: int
    residual_history: list
    status: str  # {"converged" | "max-cycles" | "diverged"}

    @property
    def converged(self):
        return self.status == "converged"


def build_hierarchy(spec, scheme="bezier", coarsen_on="csl"):
    """Build the multilevel hierarchy for a problem spec.

    Level 0 always stores the unshifted A; the coarsening chain descends
    from the CSL (``coarsen_on='csl'``) or from A (``'original'``).
    """
    if coarsen_on not in ("csl", "original"):
        raise ValueError(f"unknown coarsen_on mode {coarsen_on!r}")
    n = spec.nodes_per_dim
    if n < 11:
        raise ValueError("hierarchy needs nodes_per_dim >= 11 (at least two levels)")
    fieldvals = build_wavenumber_field(spec)
    A = assemble_helmholtz(spec, fieldvals, shift_on=False)
    chain_op = (
        assemble_helmholtz(spec, fieldvals, shift_on=True)
        if coarsen_on == "csl"
        else A
    )
    levels = [Level(op=A, n=n, diag=A.diagonal())]
    op = chain_op
    # stop on an even node count too: node-coincident coarsening needs odd n
    while n >= COARSEST_NODES and n % 2 == 1:
        pair = build_transfer_2d(n, scheme)
        op = galerkin_coarse(op, pair)
        n = (n + 1) // 2
        levels[-1].pair = pair
        levels.append(Level(op=op, n=n, diag=op.diagonal()))
    coarse_dense = levels[-1].op.toarray()
    try:
        lu, piv = sla.lu_factor(coarse_dense)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - defensive
        raise np.linalg.LinAlgError(
            f"coarsest operator not factorizable ({exc}); try a different shift"
        ) from exc
    pivots = np.abs(np.diag(lu))
    if pivots.min(initial=np.inf) < 1e-14 * max(np.abs(coarse_dense).max(), 1e-300):
        raise np.linalg.LinAlgError(
            "coarsest operator singular to LU tolerance; try a different shift"
        )
    return Hierarchy(levels=levels, coarse_lu=(lu, piv), spec=spec)


def cycle(h, level, u, b, cfg):
    """One multigrid cycle at ``level``; returns the updated iterate."""
    L = h.levels[level]
    if level == h.nlevels - 1:
        return sla.lu_solve(h.coarse_lu, b)
    sm = cfg.smoother
    if sm.nu_pre:
        u = apply_smoother(L.op, u, b, sm, sm.nu_pre, diag=L.diag)
    r = b - L.op @ u
    rc = L.pair.R @ r
    ec = np.zeros(rc.shape[0], dtype=complex)
    for _ in range(cfg.gamma):
        ec = cycle(h, level + 1, ec, rc, cfg)
    u = u + L.pair.P @ ec
    return apply_smoother(L.op, u, b, sm, sm.nu, diag=L.diag)


DIVERGENCE_GUARD = 1e8


def solve(h, b, cfg):
    """Stationary multigrid iteration from u = 0 to the relative tolerance.

    The residual is recomputed from scratch every cycle; iteration stops
    at ||b - A u|| / ||b|| <= tol, at max_cycles, or on divergence
    (relative residual above 1e8).
    """
    A = h.fine_operator
    b = np.asarray(b, dtype=complex)
    if not np.all(np.isfinite(b)):
        raise ValueError("right-hand side contains non-finite entries")
    bn = np.linalg.norm(b)
    u = np.zeros_like(b)
    history = []
    if bn == 0.0:
        return SolveResult(u=u, cycles=0, residual_history=history, status="converged")
    for it in range(1, cfg.max_cycles + 1):
        u = cycle(h, 0, u, b, cfg)
        rel = float(np.linalg.norm(b - A @ u) / bn)
        history.append(rel)
        if rel <= cfg.tol:
            return SolveResult(u=u, cycles=it, residual_history=history,
                               status="converged")
        if rel > DIVERGENCE_GUARD or not np.isfinite(rel):
            return SolveResult(u=u, cycles=it, residual_history=history,
                               status="diverged")
    return SolveResult(u=u, cycles=cfg.max_cycles, residual_history=history,
                       status="max-cycles")


def history_csv(f, history):
    """Write the residual history as CSV 'cycle,relres' rows."""
    f.write("cycle,relres\n")
    for i, rel in enumerate(history, start=1):
        f.write(f"{i},{rel:.10e}\n")
