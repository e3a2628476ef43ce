"""Omnidirectional eavesdroppers: uniform gain on a (possibly proper) subspace.

An omnidirectional eavesdropper has W2 = epsilon * U U^H for a semi-unitary U,
i.e. the same gain epsilon in every direction of its active subspace but
possibly deficient rank (fewer antennas than the transmitter).  When the range
of W1 is contained in that subspace the problem is exactly equivalent to the
full isotropic one, so the isotropic solver applies verbatim; outside
containment only the isotropic sandwich bounds are returned.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (ChannelPair, HermitianMatrix, NotApplicableError,
                   SolveConfig, SolveResult, SolveStatus, frob, sym)
from .isotropic import IsotropicProblem, capacity_bounds_isotropic, solve_isotropic

_CONTAINMENT_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class OmniClassification:
    """Detection result: is the positive spectrum of W2 uniform?

    ``epsilon`` is the common gain (mean of the positive eigenvalues) and
    ``active_basis`` the m x r2 semi-unitary basis of the active subspace,
    both meaningful only when ``is_omni`` is true.
    """

    is_omni: bool
    epsilon: float
    active_basis: np.ndarray
    r2: int


def classify_omni(w2: HermitianMatrix, delta: float = 1e-8) -> OmniClassification:
    """Classify W2 as omnidirectional when its positive eigenvalues agree
    within relative tolerance ``delta``.  A zero matrix has no active
    subspace and is not classified as omnidirectional."""
    dec = w2.eig()
    ev = dec.eigenvalues
    cut = w2.rank_tol * (float(np.max(np.abs(ev))) if ev.size else 0.0)
    pos = ev > cut
    r2 = int(np.count_nonzero(pos))
    basis = dec.eigenvectors[:, pos]
    if r2 == 0:
        return OmniClassification(False, 0.0, basis, 0)
    mean = float(np.mean(ev[pos]))
    uniform = float(np.max(ev[pos]) - np.min(ev[pos])) <= delta * mean
    return OmniClassification(uniform, mean if uniform else 0.0, basis, r2)


def range_containment_residual(w1: HermitianMatrix,
                               active_basis: np.ndarray) -> float:
    """||(I - U U^H) W1|| / ||W1||; zero when range(W1) lies in span(U)."""
    n1 = frob(w1.entries)
    if n1 == 0.0:
        return 0.0
    proj = active_basis @ active_basis.conj().T
    return frob(w1.entries - proj @ w1.entries) / n1


def solve_omni(pair: ChannelPair, p_total: float,
               cfg: SolveConfig | None = None,
               containment_tol: float = _CONTAINMENT_TOL) -> SolveResult:
    """Secrecy capacity against an omnidirectional eavesdropper.

    With range containment the capacity equals the isotropic one on the
    eigenvalues of W1, signaling on the eigenvectors of W1.  Without
    containment no exact formula is known; the isotropic sandwich bounds
    are attached and the achievable lower-bound covariance is returned
    with status BOUNDS_ONLY.
    """
    cls = classify_omni(pair.w2)
    if not cls.is_omni:
        raise NotApplicableError("W2 is not omnidirectional (non-uniform positive spectrum)")
    ev1, u1 = np.linalg.eigh(pair.w1.entries)
    gains = np.clip(ev1[::-1], 0.0, None)
    u1 = u1[:, ::-1]
    resid = range_containment_residual(pair.w1, cls.active_basis)

    if resid <= containment_tol:
        iso = solve_isotropic(IsotropicProblem(gains, cls.epsilon, p_total), cfg)
        cov = (u1 * iso.mode_powers) @ u1.conj().T
        return SolveResult(
            covariance=HermitianMatrix(sym(cov), rank_tol=pair.rank_tol),
            capacity_nats=iso.capacity_nats,
            lagrange_lambda=iso.lagrange_lambda,
            active_modes=iso.active_modes,
            power_used=iso.power_used,
            status=iso.status,
            mode_powers=iso.mode_powers,
        )

    bounds = capacity_bounds_isotropic(pair, p_total, cfg)
    # the lower bound is achievable: signaling designed against the worst
    # isotropic eavesdropper cannot do worse on the true channel
    worst = solve_isotropic(
        IsotropicProblem(gains, float(np.max(np.clip(pair.w2.eigenvalues(), 0.0, None))),
                         p_total), cfg)
    cov = (u1 * worst.mode_powers) @ u1.conj().T
    return SolveResult(
        covariance=HermitianMatrix(sym(cov), rank_tol=pair.rank_tol),
        capacity_nats=bounds.lower_nats,
        lagrange_lambda=worst.lagrange_lambda,
        active_modes=worst.active_modes,
        power_used=worst.power_used,
        status=SolveStatus.BOUNDS_ONLY,
        mode_powers=worst.mode_powers,
        bounds=bounds,
    )
