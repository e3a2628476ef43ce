"""Optimality certificates for zero-forcing, water-filling and isotropic signaling.

Each certificate checks the closed-form sufficient conditions under which a
low-complexity transmission strategy is exactly optimal for the wiretap
channel, and, when they hold, returns the certified covariance and capacity.
Constructive generators produce channels that pass the certificates by
design, and the KKT residual checker verifies stationarity, complementary
slackness and power slackness of any candidate (R, lambda).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from . import common_rsv
from ._waterfill import standard_waterfill
from .core import (ChannelPair, HermitianMatrix, KktResidual,
                   NotApplicableError, SolveConfig, frob, secrecy_rate, sym)

# relative tolerance for "a single multiplier fits every mode" checks
_CONSISTENCY_TOL = 1e-8
_ZF_PRODUCT_TOL = 1e-10


class Verdict(Enum):
    SUFFICIENT_HOLDS = "SufficientHolds"
    NECESSARY_FAILS = "NecessaryFails"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True, eq=False)
class CertificateReport:
    """Outcome of an optimality check with per-condition diagnostics.

    The certified covariance and capacity are present exactly when the
    verdict is SUFFICIENT_HOLDS.
    """

    verdict: Verdict
    details: dict = field(default_factory=dict)
    certified_covariance: Optional[HermitianMatrix] = None
    certified_capacity: Optional[float] = None

    def __post_init__(self):
        certified = (self.certified_covariance is not None
                     and self.certified_capacity is not None)
        if certified != (self.verdict is Verdict.SUFFICIENT_HOLDS):
            raise ValueError("certified fields must be present exactly for "
                             "SufficientHolds verdicts")


def _try_common_basis(pair: ChannelPair):
    try:
        return common_rsv.detect_common_rsv(pair), None
    except common_rsv.NotCommutingError as err:
        return None, err


def zf_certify(pair: ChannelPair, p_total: float,
               cfg: SolveConfig | None = None) -> CertificateReport:
    """Certify zero-forcing: transmit only where the eavesdropper is blind.

    Sufficient conditions: shared eigenbasis, water-filling over the
    zero-leakage modes, and every leaky mode weak enough that activating it
    would not pay (lam1_i <= lam2_i + lambda).  A certified solution needs
    no wiretap code: the eavesdropper receives exactly nothing.
    """
    if not p_total > 0:
        raise ValueError("p_total must be positive")
    if pair.w2.rank() == pair.m:
        return CertificateReport(Verdict.NECESSARY_FAILS, details={
            "reason": "W2 is positive definite: no zero-leakage direction exists",
            "w2_rank": pair.m,
        })
    channel, err = _try_common_basis(pair)
    if channel is None:
        return CertificateReport(Verdict.INCONCLUSIVE, details={
            "reason": "W1 and W2 do not share an eigenbasis",
            "commutator_norm": err.commutator_norm,
        })
    l1, l2 = channel.lam1, channel.lam2
    cut2 = pair.w2.rank_tol * float(np.max(l2)) if np.max(l2) > 0 else 0.0
    cut1 = pair.w1.rank_tol * float(np.max(l1)) if np.max(l1) > 0 else 0.0
    zf_mode = l2 <= cut2
    usable = zf_mode & (l1 > cut1)
    if not np.any(usable):
        return CertificateReport(Verdict.NECESSARY_FAILS, details={
            "reason": "no zero-leakage mode carries positive legitimate gain",
        })

    powers = np.zeros_like(l1)
    alloc, lam = standard_waterfill(l1[usable], p_total)
    powers[np.flatnonzero(usable)] = alloc

    leaky = ~zf_mode
    margin = float(np.min(l2[leaky] + lam - l1[leaky])) if np.any(leaky) else math.inf
    cond_c = margin >= -1e-12 * max(1.0, lam)
    details = {
        "zf_modes": int(np.count_nonzero(usable)),
        "water_lambda": lam,
        "leaky_mode_margin": margin,
        "leaky_modes_inactive_ok": bool(cond_c),
    }
    if not cond_c:
        details["reason"] = ("a leaky mode is strong enough to be worth activating; "
                             "sufficiency fails")
        return CertificateReport(Verdict.INCONCLUSIVE, details=details)

    cov = (channel.basis * powers) @ channel.basis.conj().T
    cov_h = HermitianMatrix(sym(cov), rank_tol=pair.rank_tol)
    leak_norm = frob(pair.w2.entries @ cov_h.entries)
    scale = max(frob(pair.w2.entries) * frob(cov_h.entries), 1e-300)
    details["w2_r_product_norm"] = leak_norm
    if leak_norm > _ZF_PRODUCT_TOL * scale:
        details["reason"] = "numerical zero-forcing check W2 R = 0 failed"
        return CertificateReport(Verdict.INCONCLUSIVE, details=details)

    active = powers > 0
    capacity = float(np.sum(np.log(l1[active] / lam)))
    details["no_wiretap_code_needed"] = True
    return CertificateReport(Verdict.SUFFICIENT_HOLDS, details=details,
                             certified_covariance=cov_h,
                             certified_capacity=capacity)


def zf_necessity_check(pair: ChannelPair, r, p_total: float,
                       tol: float = 1e-8) -> CertificateReport:
    """Check the necessary conditions for a user-supplied R to be ZF-optimal.

    Active eigenvectors of R must be eigenvectors of W1, lie in the nullspace
    of W2, and carry water-filling powers with a single water level.  Passing
    never certifies optimality (verdict stays INCONCLUSIVE); any violation is
    NECESSARY_FAILS.
    """
    ra = np.asarray(r.entries if isinstance(r, HermitianMatrix) else r)
    ev, u = np.linalg.eigh(sym(ra))
    ev, u = ev[::-1], u[:, ::-1]
    cut = pair.rank_tol * max(float(np.max(np.abs(ev))), 0.0)
    active = ev > cut
    details: dict = {"active_modes": int(np.count_nonzero(active))}
    if not np.any(active):
        details["reason"] = "R carries no power; necessity checks are vacuous"
        return CertificateReport(Verdict.INCONCLUSIVE, details=details)

    ua = u[:, active]
    w1, w2 = pair.w1.entries, pair.w2.entries
    n1 = max(frob(w1), 1e-300)
    n2 = max(frob(w2), 1e-300)

    # active directions must leak nothing
    null_resid = float(np.linalg.norm(w2 @ ua, 2)) / n2
    # and must be eigenvectors of W1
    w1u = w1 @ ua
    rayleigh = np.einsum("ij,ij->j", ua.conj(), w1u).real
    eig_resid = float(np.max(np.linalg.norm(w1u - ua * rayleigh, axis=0))) / n1
    # water-filling powers: p_i + 1/lam1_i must share one water level
    levels = ev[active] + 1.0 / rayleigh
    level_spread = float(np.max(levels) - np.min(levels))
    level_ok = level_spread <= _CONSISTENCY_TOL * float(np.mean(levels))

    # block structure of W2 in the eigenbasis of R: active block must vanish
    w2_hat = u.conj().T @ w2 @ u
    k = int(np.count_nonzero(active))
    block_active = float(np.linalg.norm(w2_hat[:k, :k]))
    block_cross = float(np.linalg.norm(w2_hat[:k, k:]))

    details.update({
        "w2_null_residual": null_resid,
        "w1_eigvec_residual": eig_resid,
        "water_level_spread": level_spread,
        "water_lambda": 1.0 / float(np.mean(levels)),
        "w2_active_block_norm": block_active,
        "w2_cross_block_norm": block_cross,
    })
    ok = null_resid <= tol and eig_resid <= tol and level_ok
    if not ok:
        details["reason"] = "necessary conditions for ZF optimality are violated"
        return CertificateReport(Verdict.NECESSARY_FAILS, details=details)
    details["reason"] = "necessary conditions hold; optimality not established"
    return CertificateReport(Verdict.INCONCLUSIVE, details=details)


def wf_certify(pair: ChannelPair, p_total: float,
               cfg: SolveConfig | None = None) -> CertificateReport:
    """Certify that the standard water-filling covariance is wiretap-optimal.

    Requires a shared eigenbasis, one inverse-gain offset alpha with
    1/lam2_i = 1/lam1_i + alpha across all active modes, and inactive modes
    that either satisfy the same relation or are dominated (lam1_i <= lam2_i).
    """
    if not p_total > 0:
        raise ValueError("p_total must be positive")
    channel, err = _try_common_basis(pair)
    if channel is None:
        return CertificateReport(Verdict.INCONCLUSIVE, details={
            "reason": "W1 and W2 do not share an eigenbasis",
            "commutator_norm": err.commutator_norm,
        })
    l1, l2 = channel.lam1, channel.lam2
    powers, lam = standard_waterfill(l1, p_total)
    active = powers > 0
    details: dict = {"active_modes": int(np.count_nonzero(active)),
                     "water_lambda": lam}
    if not np.any(active):
        details["reason"] = "W1 carries no positive gain"
        return CertificateReport(Verdict.INCONCLUSIVE, details=details)

    cut2 = pair.w2.rank_tol * float(np.max(l2)) if np.max(l2) > 0 else 0.0
    if np.any(active & (l2 <= cut2)):
        details["reason"] = ("an active mode has zero eavesdropper gain; the "
                             "inverse-gain relation is undefined (use the ZF check)")
        return CertificateReport(Verdict.INCONCLUSIVE, details=details)

    alphas = 1.0 / l2[active] - 1.0 / l1[active]
    spread = float(np.max(alphas) - np.min(alphas))
    alpha = float(np.mean(alphas))
    details["alpha"] = alpha
    details["alpha_spread"] = spread
    if alpha <= 0 or spread > _CONSISTENCY_TOL * abs(alpha):
        details["reason"] = "no single positive inverse-gain offset fits the active modes"
        return CertificateReport(Verdict.INCONCLUSIVE, details=details)

    for i in np.flatnonzero(~active):
        if l1[i] <= l2[i] * (1 + 1e-12) + 1e-300:
            continue
        if l2[i] > cut2:
            implied = 1.0 / l2[i] - 1.0 / l1[i]
            if abs(implied - alpha) <= _CONSISTENCY_TOL * abs(alpha):
                continue
        details["reason"] = f"inactive mode {i} satisfies neither the alpha relation " \
                            f"nor lam1 <= lam2"
        return CertificateReport(Verdict.INCONCLUSIVE, details=details)

    cov = (channel.basis * powers) @ channel.basis.conj().T
    cov_h = HermitianMatrix(sym(cov), rank_tol=pair.rank_tol)
    capacity = max(secrecy_rate(pair, cov_h), 0.0)
    details["lambda_prime"] = alpha * lam * lam / (1.0 + alpha * lam)
    return CertificateReport(Verdict.SUFFICIENT_HOLDS, details=details,
                             certified_covariance=cov_h,
                             certified_capacity=capacity)


def is_certify(pair: ChannelPair, p_total: float) -> CertificateReport:
    """Certify that the isotropic covariance R = (P_T / m) I is optimal.

    Requires a shared eigenbasis, W1 > W2 > 0, and one multiplier value
    lambda = 1/(a_i + a) - 1/(b_i + a) consistent across all modes, where
    a_i and b_i are the inverse eigenvalues and a = P_T / m.
    """
    if not p_total > 0:
        raise ValueError("p_total must be positive")
    channel, err = _try_common_basis(pair)
    if channel is None:
        return CertificateReport(Verdict.INCONCLUSIVE, details={
            "reason": "W1 and W2 do not share an eigenbasis",
            "commutator_norm": err.commutator_norm,
        })
    l1, l2 = channel.lam1, channel.lam2
    details: dict = {}
    if np.any(l2 <= 0) or np.any(l1 <= l2):
        details["reason"] = "requires W1 > W2 > 0 on every shared eigenmode"
        return CertificateReport(Verdict.INCONCLUSIVE, details=details)

    a = p_total / pair.m
    lambdas = l1 / (1.0 + a * l1) - l2 / (1.0 + a * l2)
    spread = float(np.max(lambdas) - np.min(lambdas))
    lam = float(np.mean(lambdas))
    details["common_lambda"] = lam
    details["lambda_spread"] = spread
    if spread > _CONSISTENCY_TOL * abs(lam):
        details["reason"] = "mode multipliers disagree; isotropic signaling is not certified"
        return CertificateReport(Verdict.INCONCLUSIVE, details=details)

    cov_h = HermitianMatrix(a * np.eye(pair.m), rank_tol=pair.rank_tol)
    capacity = max(secrecy_rate(pair, cov_h), 0.0)
    return CertificateReport(Verdict.SUFFICIENT_HOLDS, details=details,
                             certified_covariance=cov_h,
                             certified_capacity=capacity)


def construct_is_optimal_channel(m: int, p_total: float, b1: float, a1: float,
                                 b_rest, basis: np.ndarray | None = None,
                                 rank_tol: float = 1e-10) -> ChannelPair:
    """Build a channel for which isotropic signaling at power P_T is optimal.

    The inverse eigenvalues are anchored at (a1, b1); each further b_i must
    exceed lam*a^2 / (1 - lam*a) strictly, which makes the matching a_i
    positive and keeps W1 > W2.  The optimal covariance of the returned pair
    is (P_T / m) I by construction.
    """
    b_rest = np.asarray(b_rest, dtype=float)
    if m < 1:
        raise ValueError("m must be at least 1")
    if b_rest.shape != (m - 1,):
        raise ValueError(f"b_rest must have length m - 1 = {m - 1}")
    if not p_total > 0:
        raise ValueError("p_total must be positive")
    if not b1 > 0:
        raise ValueError(f"violated: b1 > 0 (got b1 = {b1!r})")
    if not 0 < a1 < b1:
        raise ValueError(f"violated: 0 < a1 < b1 (got a1 = {a1!r}, b1 = {b1!r})")
    a = p_total / m
    lam = 1.0 / (a1 + a) - 1.0 / (b1 + a)
    bound = lam * a * a / (1.0 - lam * a)
    bad = b_rest <= bound
    if np.any(bad):
        i = int(np.flatnonzero(bad)[0])
        raise ValueError(
            f"violated: b_{i + 2} > lam*a^2/(1 - lam*a) = {bound!r} "
            f"(got b_{i + 2} = {b_rest[i]!r})")
    a_rest = -a + 1.0 / (lam + 1.0 / (b_rest + a))
    a_all = np.concatenate(([a1], a_rest))
    b_all = np.concatenate(([b1], b_rest))
    d1 = np.diag(1.0 / a_all)
    d2 = np.diag(1.0 / b_all)
    if basis is None:
        w1, w2 = d1, d2
    else:
        basis = np.asarray(basis)
        w1 = basis @ d1 @ basis.conj().T
        w2 = basis @ d2 @ basis.conj().T
    return ChannelPair.from_gram(w1, w2, rank_tol=rank_tol)


def construct_wf_optimal_channel(lam1, alpha: float,
                                 basis: np.ndarray | None = None,
                                 rank_tol: float = 1e-10) -> ChannelPair:
    """Build a channel on which standard water-filling is wiretap-optimal,
    by setting lam2_i = lam1_i / (1 + alpha * lam1_i) for every mode."""
    l1 = np.asarray(lam1, dtype=float)
    if np.any(l1 < 0):
        raise ValueError("lam1 must be nonnegative")
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    l2 = l1 / (1.0 + alpha * l1)
    d1, d2 = np.diag(l1), np.diag(l2)
    if basis is None:
        w1, w2 = d1, d2
    else:
        basis = np.asarray(basis)
        w1 = basis @ d1 @ basis.conj().T
        w2 = basis @ d2 @ basis.conj().T
    return ChannelPair.from_gram(w1, w2, rank_tol=rank_tol)


class KktForm(Enum):
    ZF = "ZFForm"
    WF = "WFForm"


def _regularized(w: HermitianMatrix) -> np.ndarray:
    ev = w.eigenvalues()
    top = float(ev[0])
    if top <= 0:
        raise NotApplicableError("W is zero; singular beyond regularization")
    if ev[-1] > w.rank_tol * top:
        return w.entries
    return w.entries + (w.rank_tol * top) * np.eye(w.dim)


def _inv_winv_plus_r(w: np.ndarray, ra: np.ndarray, m: int) -> np.ndarray:
    """(W^{-1} + R)^{-1} through the stable Hermitian congruence form."""
    wh = HermitianMatrix(w).sqrt_psd().entries
    inner = np.eye(m) + sym(wh @ ra @ wh)
    return sym(wh @ np.linalg.solve(inner, wh))


def kkt_residual_general(pair: ChannelPair, r, lam: float, form: KktForm,
                         p_total: float) -> KktResidual:
    """KKT violation norms of (R, lambda) for the exact secrecy problem.

    ZFForm evaluates M = lam*W1*R - W1 + W2 + lam*I (valid for zero-forcing
    candidates, where W2 R = 0); WFForm evaluates
    M = lam*I - (W1^{-1} + R)^{-1} + (W2^{-1} + R)^{-1}, regularizing
    near-singular Gram matrices by rank_tol * lam_max * I.
    """
    ra = np.asarray(r.entries if isinstance(r, HermitianMatrix) else r)
    m = pair.m
    if form is KktForm.ZF:
        mat = sym(lam * (pair.w1.entries @ ra)) - pair.w1.entries \
            + pair.w2.entries + lam * np.eye(m)
    else:
        w1 = _regularized(pair.w1)
        w2 = _regularized(pair.w2)
        mat = lam * np.eye(m) - _inv_winv_plus_r(w1, ra, m) \
            + _inv_winv_plus_r(w2, ra, m)
    ev = np.linalg.eigvalsh(sym(mat))
    neg = float(np.sqrt(np.sum(np.minimum(ev, 0.0) ** 2)))
    slack = frob(mat @ ra)
    power = abs(lam * (float(np.trace(ra).real) - p_total))
    return KktResidual(neg, slack, power)
