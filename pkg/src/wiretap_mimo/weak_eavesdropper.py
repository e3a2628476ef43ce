"""Weak-eavesdropper optimal covariance, capacity bounds and saturation values.

The weak objective replaces the eavesdropper's log-det by its linearization:

    C_w(R) = ln|I + W1 R| - tr(W2 R)

This problem is concave and admits a closed-form maximizer

    R*_w = Q^(1/2) (I - What1^{-1})_+ Q^(1/2),   What1 = Q^(1/2) W1 Q^(1/2)

with Q the pseudo-inverse of lam*I + W2 and lam >= 0 chosen so that the full
power is used below the saturation threshold and lam = 0 above it.  The weak
capacity sandwiches the true secrecy capacity within P_T^2 lam_max(W2)^2 / 2,
which is what :func:`capacity_bounds_weak` reports.
"""

from __future__ import annotations

import math

import numpy as np

from . import common_rsv
from .core import (CapacityBounds, ChannelPair, ConvergenceError,
                   HermitianMatrix, KktResidual, NotApplicableError,
                   SolveConfig, SolveResult, SolveStatus, frob, secrecy_rate,
                   sym)

# numerical policy is shared across the closed-form solvers
WeakSolveConfig = SolveConfig

# shared-eigenbasis detection tolerance of the diagonal fast path
_COMMON_BASIS_TOL = 1e-8


def _weak_core(pair: ChannelPair):
    """Precompute the W2 eigendecomposition reused across the lam bisection."""
    s2, v2 = np.linalg.eigh(pair.w2.entries)
    s2 = np.clip(s2, 0.0, None)
    return s2, v2


def _weak_cov_at(pair: ChannelPair, s2: np.ndarray, v2: np.ndarray, lam: float):
    """Covariance, trace and weak capacity of the closed form at multiplier lam.

    ``lam = 0`` uses the pseudo-inverse of W2 (equivalently, the problem
    projected orthogonally to the nullspace of W2).
    """
    tol = pair.rank_tol
    d = lam + s2
    top = float(np.max(d)) if d.size else 0.0
    inv_sqrt = np.where(d > tol * top, 1.0 / np.sqrt(np.where(d > 0, d, 1.0)), 0.0)
    qh = (v2 * inv_sqrt) @ v2.conj().T  # Q^(1/2)
    w1h = sym(qh @ pair.w1.entries @ qh)
    ev, u = np.linalg.eigh(w1h)
    # (I - What1^{-1})_+ keeps only eigenmodes with eigenvalue above one;
    # singular modes of What1 drop out automatically
    gains = np.where(ev > 1.0, 1.0 - 1.0 / np.where(ev > 1.0, ev, 1.0), 0.0)
    qu = qh @ u
    cov = (qu * gains) @ qu.conj().T
    trace = float(np.einsum("ij,j,ij->", qu.conj(), gains, qu).real)
    # weak capacity in closed form: sum of ln over active modes minus the
    # leakage trace tr(What2 * D)
    w2h = sym(qh @ pair.w2.entries @ qh)
    leak = float(np.einsum("ij,j,ij->", u.conj(), gains, (w2h @ u)).real)
    cw = float(np.sum(np.log(ev[ev > 1.0]))) - leak
    return cov, trace, cw


def _null_space_contained(pair: ChannelPair) -> bool:
    """Whether the nullspace of W2 lies inside the nullspace of W1."""
    nullb = pair.w2.null_basis()
    if nullb.shape[1] == 0:
        return True
    resid = np.linalg.norm(pair.w1.entries @ nullb, 2)
    return resid <= pair.rank_tol * max(frob(pair.w1.entries), 1e-300)


def threshold_power(pair: ChannelPair) -> float:
    """Saturation power beyond which the weak solution stops using extra power.

    Infinite when W2 has a nullspace direction that W1 can still exploit
    (power can always be dumped there at no leakage cost).  When the
    nullspace of W2 sits inside that of W1, the value is computed on the
    matrices projected orthogonally to the W2 nullspace, which is what the
    pseudo-inverse realizes.
    """
    if pair.w2.rank() < pair.m and not _null_space_contained(pair):
        return math.inf
    s2, v2 = _weak_core(pair)
    _, trace, _ = _weak_cov_at(pair, s2, v2, 0.0)
    return trace


def _diag_threshold(l1: np.ndarray, l2: np.ndarray, tol: float) -> float:
    top1 = float(np.max(l1)) if l1.size else 0.0
    free = (l2 <= 0) & (l1 > tol * top1)
    if np.any(free):
        return math.inf
    with np.errstate(divide="ignore"):
        inv2 = np.where(l2 > 0, 1.0 / np.where(l2 > 0, l2, 1.0), math.inf)
        inv1 = np.where(l1 > 0, 1.0 / np.where(l1 > 0, l1, 1.0), math.inf)
    return float(np.sum(np.maximum(np.where(l1 > 0, inv2 - inv1, 0.0), 0.0)))


def _diag_powers(l1: np.ndarray, l2: np.ndarray, lam: float) -> np.ndarray:
    with np.errstate(divide="ignore"):
        inv1 = np.where(l1 > 0, 1.0 / np.where(l1 > 0, l1, 1.0), math.inf)
    return np.maximum(np.where(l1 > 0, 1.0 / (lam + l2) - inv1, 0.0), 0.0)


def _solve_weak_diagonal(pair: ChannelPair, channel, p_total: float,
                         cfg: SolveConfig) -> SolveResult:
    """Shared-eigenbasis fast path: per-mode powers (1/(lam+l2_i) - 1/l1_i)_+."""
    l1, l2 = channel.lam1, channel.lam2
    p_star = _diag_threshold(l1, l2, pair.rank_tol)
    if p_total >= p_star:
        lam = 0.0
        powers = _diag_powers(l1, l2, lam)
    else:
        lo, hi = 0.0, float(np.max(l1))
        lam = 0.5 * hi
        powers = _diag_powers(l1, l2, lam)
        resid = float(np.sum(powers)) - p_total
        for _ in range(cfg.max_iters):
            if abs(resid) <= cfg.power_tol:
                break
            if resid > 0:
                lo = lam
            else:
                hi = lam
            nxt = 0.5 * (lo + hi)
            if nxt == lam:
                break
            lam = nxt
            powers = _diag_powers(l1, l2, lam)
            resid = float(np.sum(powers)) - p_total
        if abs(resid) > cfg.power_tol:
            raise ConvergenceError(
                f"weak-solver bisection stalled with power residual {resid:.3e}",
                residual=resid)
    cov = (channel.basis * powers) @ channel.basis.conj().T
    cw = float(np.sum(np.log1p(l1 * powers) - l2 * powers))
    return _assemble(pair, cov, powers, cw, lam)


def _assemble(pair: ChannelPair, cov: np.ndarray, powers: np.ndarray,
              cw: float, lam: float) -> SolveResult:
    capacity = max(cw, 0.0)
    used = float(np.sum(powers))
    zero = capacity == 0.0 and used <= pair.rank_tol
    return SolveResult(
        covariance=HermitianMatrix(np.zeros((pair.m, pair.m))) if zero
        else HermitianMatrix(sym(cov), rank_tol=pair.rank_tol),
        capacity_nats=capacity,
        lagrange_lambda=lam,
        active_modes=int(np.count_nonzero(powers > 0)),
        power_used=0.0 if zero else used,
        status=SolveStatus.ZERO_RATE if zero else SolveStatus.SOLVED,
        mode_powers=np.zeros_like(powers) if zero else powers,
    )


def _solve_weak_general(pair: ChannelPair, p_total: float,
                        cfg: SolveConfig) -> SolveResult:
    s2, v2 = _weak_core(pair)
    p_star = threshold_power(pair)
    if p_total >= p_star:
        cov, trace, cw = _weak_cov_at(pair, s2, v2, 0.0)
        lam = 0.0
    else:
        lo, hi = 0.0, float(np.max(np.clip(pair.w1.eigenvalues(), 0.0, None)))
        if hi <= 0:
            cov, trace, cw, lam = np.zeros((pair.m, pair.m)), 0.0, 0.0, 0.0
        else:
            lam = 0.5 * hi
            cov, trace, cw = _weak_cov_at(pair, s2, v2, lam)
            resid = trace - p_total
            for _ in range(cfg.max_iters):
                if abs(resid) <= cfg.power_tol:
                    break
                if resid > 0:
                    lo = lam
                else:
                    hi = lam
                nxt = 0.5 * (lo + hi)
                if nxt == lam:
                    break
                lam = nxt
                cov, trace, cw = _weak_cov_at(pair, s2, v2, lam)
                resid = trace - p_total
            if abs(resid) > cfg.power_tol:
                raise ConvergenceError(
                    f"weak-solver bisection stalled with power residual {resid:.3e}",
                    residual=resid)
    powers = np.clip(np.linalg.eigvalsh(sym(cov))[::-1], 0.0, None)
    cut = pair.rank_tol * (float(np.max(powers)) if powers.size else 0.0)
    powers = np.where(powers > cut, powers, 0.0)
    return _assemble(pair, cov, powers, cw, lam)


def solve_weak(pair: ChannelPair, p_total: float,
               cfg: SolveConfig | None = None) -> SolveResult:
    """Maximize the weak-eavesdropper rate ln|I + W1 R| - tr(W2 R).

    The multiplier is bisected on (0, lambda_max(W1)] until the trace meets
    min(P_T, P_T*); above the threshold power only partial power is used.
    Channels whose Gram matrices commute take the exact diagonal fast path.
    """
    if not p_total > 0:
        raise ValueError("p_total must be positive")
    cfg = cfg or SolveConfig()
    try:
        channel = common_rsv.detect_common_rsv(pair, tol=_COMMON_BASIS_TOL)
    except common_rsv.NotCommutingError:
        channel = None
    if channel is not None:
        return _solve_weak_diagonal(pair, channel, p_total, cfg)
    return _solve_weak_general(pair, p_total, cfg)


def capacity_bounds_weak(pair: ChannelPair, p_total: float,
                         cfg: SolveConfig | None = None) -> CapacityBounds:
    """Capacity sandwich C_w <= C(R*_w) <= C_s <= C_w + P_T^2 lam_max(W2)^2 / 2."""
    res = solve_weak(pair, p_total, cfg)
    lam2_max = float(np.max(np.clip(pair.w2.eigenvalues(), 0.0, None)))
    gap = 0.5 * (p_total * lam2_max) ** 2
    mid = max(secrecy_rate(pair, res.covariance), 0.0)
    return CapacityBounds(
        lower_nats=res.capacity_nats,
        mid_nats=mid,
        upper_nats=res.capacity_nats + gap,
        gap_bound_nats=gap,
        provenance=("weak-eavesdropper capacity",
                    "achievable rate of the weak-optimal covariance",
                    "weak capacity plus quadratic leakage bound"),
    )


def saturation_capacities(pair: ChannelPair) -> tuple[float, float]:
    """High-SNR limits (exact, weak) for W1 > W2 > 0.

    exact = ln|W1| - ln|W2|; weak = exact - tr(I - W2 W1^{-1}).  Raises
    NotApplicableError outside the strict ordering, where the closed forms
    do not apply.
    """
    ev2 = pair.w2.eigenvalues()
    if ev2[-1] <= pair.w2.rank_tol * max(float(ev2[0]), 0.0):
        raise NotApplicableError("saturation formulas need W2 positive definite")
    diff = HermitianMatrix(pair.w1.entries - pair.w2.entries, rank_tol=pair.rank_tol)
    evd = diff.eigenvalues()
    if evd[-1] <= pair.rank_tol * abs(float(evd[0])):
        raise NotApplicableError("saturation formulas need W1 - W2 positive definite")
    _, logdet1 = np.linalg.slogdet(pair.w1.entries)
    _, logdet2 = np.linalg.slogdet(pair.w2.entries)
    exact = float(logdet1 - logdet2)
    corr = pair.m - float(np.trace(
        pair.w2.entries @ np.linalg.inv(pair.w1.entries)).real)
    return exact, exact - corr


def kkt_residual_weak(pair: ChannelPair, r, lam: float,
                      p_total: float) -> KktResidual:
    """KKT violation norms of (R, lambda) for the weak problem.

    The dual variable is M = W2 + lambda*I - (I + W1 R)^{-1} W1; optimality
    requires M >= 0, M R = 0 and lambda * (tr R - P_T) = 0.
    """
    ra = np.asarray(r.entries if isinstance(r, HermitianMatrix) else r)
    w1 = pair.w1.entries
    w1h = pair.w1.sqrt_psd().entries
    inner = np.eye(pair.m) + sym(w1h @ ra @ w1h)
    s = sym(w1h @ np.linalg.solve(inner, w1h))
    m_dual = sym(pair.w2.entries + lam * np.eye(pair.m) - s)
    ev = np.linalg.eigvalsh(m_dual)
    neg = float(np.sqrt(np.sum(np.minimum(ev, 0.0) ** 2)))
    slack = frob(m_dual @ ra)
    power = abs(lam * (float(np.trace(ra).real) - p_total))
    return KktResidual(neg, slack, power)
