"""Isotropic-eavesdropper solver: capacity, thresholds, bounds and asymptotics.

An isotropic eavesdropper has the same channel power gain ``epsilon`` in every
transmit direction (W2 = epsilon * I).  The optimal signaling directions are
then the eigenvectors of W1 and the problem reduces to a per-eigenmode power
allocation over the gains ``g_i = lambda_i(W1)``.  Conjugating the eavesdropper
gain by the extreme eigenvalues of a general W2 turns the same solver into
capacity bounds for arbitrary channels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from . import _waterfill
from .core import (CapacityBounds, ChannelPair, HermitianMatrix, SolveConfig,
                   SolveResult, SolveStatus)


@dataclass(frozen=True, eq=False)
class IsotropicProblem:
    """Per-eigenmode view of a channel facing an isotropic eavesdropper.

    ``gains`` are the eigenvalues of W1 sorted in decreasing order;
    ``epsilon`` is the uniform eavesdropper gain.  ``epsilon = 0`` is accepted
    as an explicit no-eavesdropper flag and reproduces standard water-filling.
    """

    gains: np.ndarray
    epsilon: float
    p_total: float

    def __post_init__(self):
        g = np.asarray(self.gains, dtype=float)
        if g.ndim != 1 or g.size == 0:
            raise ValueError("gains must be a nonempty 1-D vector")
        if np.any(g < 0):
            raise ValueError("gains must be nonnegative")
        if np.any(np.diff(g) > 0):
            raise ValueError("gains must be sorted in decreasing order")
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")
        if not self.p_total > 0:
            raise ValueError("p_total must be positive")
        g.setflags(write=False)
        object.__setattr__(self, "gains", np.asarray(g))

    @property
    def m(self) -> int:
        return self.gains.size


def _zero_result(m: int) -> SolveResult:
    return SolveResult(
        covariance=HermitianMatrix(np.zeros((m, m))),
        capacity_nats=0.0,
        lagrange_lambda=0.0,
        active_modes=0,
        power_used=0.0,
        status=SolveStatus.ZERO_RATE,
        mode_powers=np.zeros(m),
    )


def solve_isotropic(problem: IsotropicProblem,
                    cfg: SolveConfig | None = None) -> SolveResult:
    """Capacity and per-mode powers against an isotropic eavesdropper.

    The covariance is returned in the eigenbasis of the gains (diagonal);
    rotate by the eigenvectors of W1 to express it in the antenna basis.
    Full power is always used whenever ``g_1 > epsilon``, even deep in the
    saturation regime; use :func:`asymptotic_capacity`'s saturation ratio to
    detect when extra power has stopped paying.
    """
    cfg = cfg or SolveConfig()
    g = problem.gains
    eps = problem.epsilon
    if g[0] <= eps:
        return _zero_result(problem.m)
    if eps == 0.0:
        powers, lam = _waterfill.standard_waterfill(g, problem.p_total)
    else:
        powers, lam = _waterfill.secrecy_waterfill(
            g, eps, problem.p_total,
            power_tol=cfg.power_tol, max_iters=cfg.max_iters)
    capacity = _waterfill.parallel_secrecy_value(g, eps, powers)
    return SolveResult(
        covariance=HermitianMatrix(np.diag(powers)),
        capacity_nats=max(capacity, 0.0),
        lagrange_lambda=float(lam) if math.isfinite(lam) else 0.0,
        active_modes=int(np.count_nonzero(powers > 0)),
        power_used=float(np.sum(powers)),
        status=SolveStatus.SOLVED,
        mode_powers=powers,
    )


def threshold_powers(gains: np.ndarray, epsilon: float) -> np.ndarray:
    """Power thresholds P_k at which the k-th eigenmode becomes active.

    ``out[k-1]`` is the total power above which at least ``k`` modes are
    active; ``out[0] = 0``.  Entries are ``inf`` once ``g_k <= epsilon``
    (those modes never activate).  Finite entries are strictly increasing
    for strictly decreasing gains.
    """
    g = np.asarray(gains, dtype=float)
    if np.any(np.diff(g) > 0):
        raise ValueError("gains must be sorted in decreasing order")
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    m = g.size
    out = np.zeros(m)
    for k in range(2, m + 1):
        gk = g[k - 1]
        if gk <= epsilon or gk <= 0:
            out[k - 1:] = math.inf
            break
        # the k-th mode activates exactly when the multiplier drops to g_k - eps
        out[k - 1] = float(np.sum(
            _waterfill.secrecy_mode_powers(g[:k - 1], epsilon, gk - epsilon)))
    return out


def capacity_bounds_isotropic(pair: ChannelPair, p_total: float,
                              cfg: SolveConfig | None = None) -> CapacityBounds:
    """Sandwich the secrecy capacity between isotropic solves at the extreme
    eigenvalues of W2: C*(eps_max) <= C_s <= C*(eps_min)."""
    gains = np.clip(pair.w1.eigenvalues(), 0.0, None)
    ev2 = np.clip(pair.w2.eigenvalues(), 0.0, None)
    eps1 = float(ev2[0])
    epsm = float(ev2[-1])
    if eps1 <= 0:
        raise ValueError("W2 must be nonzero; use standard water-filling instead")
    lower = solve_isotropic(IsotropicProblem(gains, eps1, p_total), cfg).capacity_nats
    upper = solve_isotropic(IsotropicProblem(gains, epsm, p_total), cfg).capacity_nats
    m_plus = int(np.count_nonzero(gains > epsm))
    if m_plus == 0:
        gap = 0.0
    else:
        finite_gap = m_plus * math.log(
            (1.0 + eps1 * p_total / m_plus) / (1.0 + epsm * p_total / m_plus))
        ratio_gap = m_plus * math.log(eps1 / epsm) if epsm > 0 else math.inf
        gap = min(finite_gap, ratio_gap)
    return CapacityBounds(
        lower_nats=lower,
        mid_nats=0.5 * (lower + upper),
        upper_nats=upper,
        gap_bound_nats=gap,
        provenance=("isotropic solve at largest eigenvalue of W2",
                    "midpoint (informational)",
                    "isotropic solve at smallest eigenvalue of W2"),
    )


class AsymptoticRegime(Enum):
    HIGH_SNR = "HighSNR"
    HIGH_SNR_REFINED = "HighSNRRefined"
    LOW_SNR = "LowSNR"


@dataclass(frozen=True)
class AsymptoticReport:
    """Asymptotic capacity value plus the validity diagnostics.

    ``saturation_ratio`` is P_T * C_inf / beta**2 (saturation needs >> 1);
    it is None when epsilon = 0 or no mode beats the eavesdropper.
    ``single_mode`` reports whether P_T is below the beamforming threshold.
    """

    value: float
    saturation_ratio: Optional[float]
    single_mode: bool


def _saturation_terms(g: np.ndarray, eps: float) -> tuple[float, float]:
    active = g > eps
    c_inf = float(np.sum(np.log(g[active] / eps)))
    beta = float(np.sum(np.sqrt(1.0 / eps - 1.0 / g[active])))
    return c_inf, beta


def asymptotic_capacity(problem: IsotropicProblem,
                        regime: AsymptoticRegime) -> AsymptoticReport:
    """Closed-form high/low-SNR capacity values with validity diagnostics."""
    g = problem.gains
    eps = problem.epsilon
    p = problem.p_total

    thresholds = threshold_powers(g, eps)
    single_mode = bool(g.size < 2 or p <= thresholds[1])

    ratio: Optional[float] = None
    if eps > 0 and np.any(g > eps):
        c_inf, beta = _saturation_terms(g, eps)
        if beta > 0:
            ratio = p * c_inf / (beta * beta)

    if regime in (AsymptoticRegime.HIGH_SNR, AsymptoticRegime.HIGH_SNR_REFINED):
        if eps <= 0:
            raise ValueError("high-SNR saturation requires epsilon > 0")
        if not np.any(g > eps):
            raise ValueError("high-SNR regime requires some g_i > epsilon")
        c_inf, beta = _saturation_terms(g, eps)
        value = c_inf
        if regime is AsymptoticRegime.HIGH_SNR_REFINED:
            value = c_inf - beta * beta / p
        return AsymptoticReport(value, ratio, single_mode)

    if g[0] <= eps:
        raise ValueError("low-SNR regime requires g_1 > epsilon")
    value = math.log1p(g[0] * p) - math.log1p(eps * p)
    return AsymptoticReport(value, ratio, single_mode)


@dataclass(frozen=True)
class NegligibilityReport:
    """Dimensionless margins deciding whether the eavesdropper matters.

    Both must be small: ``snr_margin = epsilon * P_T`` (saturation onset) and
    ``gain_margin = max over active modes of epsilon / g_i`` (per-mode loss).
    """

    snr_margin: float
    gain_margin: float
    negligible: bool
    threshold: float


def negligibility_margins(problem: IsotropicProblem,
                          threshold: float = 0.1) -> NegligibilityReport:
    eps = problem.epsilon
    snr_margin = eps * problem.p_total
    if eps == 0.0:
        return NegligibilityReport(0.0, 0.0, True, threshold)
    res = solve_isotropic(problem)
    active = res.mode_powers > 0
    if not np.any(active):
        gain_margin = math.inf
    else:
        gain_margin = float(np.max(eps / problem.gains[active]))
    negligible = snr_margin < threshold and gain_margin < threshold
    return NegligibilityReport(snr_margin, gain_margin, negligible, threshold)
