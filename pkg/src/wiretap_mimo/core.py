"""Core domain types, rate evaluation and Hermitian spectral utilities.

All rates and capacities are in nats (natural logarithm).  Matrices are
small and dense; every spectral operation goes through ``numpy.linalg.eigh``
after mandatory symmetrization.  Rank decisions (nullspaces, pseudo-inverses,
"singular" solver branches) use a relative eigenvalue cutoff
``rank_tol * max_i |lambda_i|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

import numpy as np

DEFAULT_RANK_TOL = 1e-10

# construction-time guard: worst admissible asymmetry relative to ||A||
_ASYMMETRY_TOL = 1e-8
# unitarity / reconstruction tolerance for spectral decompositions
_SPECTRAL_TOL = 1e-10


class ConvergenceError(RuntimeError):
    """A multiplier search failed to meet its power tolerance."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class NotApplicableError(ValueError):
    """An operation's mathematical precondition does not hold for this input."""


def sym(a: np.ndarray) -> np.ndarray:
    """Hermitian part (A + A^H) / 2."""
    return 0.5 * (a + a.conj().T)


def frob(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


def eigh_desc(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and matching eigenvector columns of a Hermitian array."""
    w, v = np.linalg.eigh(sym(a))
    return w[::-1].copy(), v[:, ::-1].copy()


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenvalues in decreasing order paired with orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.eigenvalues, dtype=float)
        v = np.asarray(self.eigenvectors)
        if np.any(np.diff(w) > 0):
            raise ValueError("eigenvalues must be sorted in decreasing order")
        gram = v.conj().T @ v
        if np.max(np.abs(gram - np.eye(v.shape[1]))) > _SPECTRAL_TOL:
            raise ValueError("eigenvectors are not orthonormal within 1e-10")
        w.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "eigenvalues", w)
        object.__setattr__(self, "eigenvectors", v)

    def reconstruct(self) -> np.ndarray:
        return (self.eigenvectors * self.eigenvalues) @ self.eigenvectors.conj().T


@dataclass(frozen=True, eq=False)
class HermitianMatrix:
    """A square Hermitian (or real symmetric) matrix with a rank-tolerance policy.

    Construction symmetrizes the input; entries whose asymmetry exceeds
    ``1e-8 * ||A||`` are rejected rather than silently averaged away.
    Eigenvalues with ``|lambda_i| <= rank_tol * max_j |lambda_j|`` count as
    exactly zero for all rank and nullspace queries.
    """

    entries: np.ndarray
    rank_tol: float = DEFAULT_RANK_TOL

    def __post_init__(self):
        a = np.asarray(self.entries)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        if self.rank_tol <= 0:
            raise ValueError("rank_tol must be positive")
        dtype = np.complex128 if np.iscomplexobj(a) else np.float64
        a = a.astype(dtype)
        asym = float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0
        if asym > _ASYMMETRY_TOL * frob(a):
            raise ValueError(
                f"matrix is not Hermitian: max asymmetry {asym:.3e} exceeds "
                f"{_ASYMMETRY_TOL:g} * ||A||"
            )
        a = sym(a)
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.array(self.entries, dtype=dtype)

    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    def eig(self) -> SpectralDecomposition:
        w, v = eigh_desc(self.entries)
        dec = SpectralDecomposition(w, v)
        err = frob(dec.reconstruct() - self.entries)
        if err > _SPECTRAL_TOL * max(frob(self.entries), 1e-300):
            raise ValueError("eigendecomposition failed to reconstruct the input")
        return dec

    def eigenvalues(self) -> np.ndarray:
        return self.eig().eigenvalues

    def _zero_cut(self, w: np.ndarray) -> float:
        top = float(np.max(np.abs(w))) if w.size else 0.0
        return self.rank_tol * top

    def rank(self) -> int:
        w = self.eigenvalues()
        return int(np.count_nonzero(np.abs(w) > self._zero_cut(w)))

    def null_basis(self) -> np.ndarray:
        """Orthonormal columns spanning the numerical nullspace."""
        dec = self.eig()
        keep = np.abs(dec.eigenvalues) <= self._zero_cut(dec.eigenvalues)
        return dec.eigenvectors[:, keep]

    def range_basis(self) -> np.ndarray:
        dec = self.eig()
        keep = np.abs(dec.eigenvalues) > self._zero_cut(dec.eigenvalues)
        return dec.eigenvectors[:, keep]

    def is_psd(self) -> bool:
        w = self.eigenvalues()
        return bool(w.size == 0 or w[-1] >= -self._zero_cut(w))

    def sqrt_psd(self) -> "HermitianMatrix":
        """Principal square root; tiny negative eigenvalues are clipped to zero."""
        dec = self.eig()
        w = np.sqrt(np.clip(dec.eigenvalues, 0.0, None))
        return HermitianMatrix((dec.eigenvectors * w) @ dec.eigenvectors.conj().T,
                               rank_tol=self.rank_tol)

    def pinv(self) -> "HermitianMatrix":
        """Moore-Penrose pseudo-inverse with the rank_tol eigenvalue cutoff."""
        dec = self.eig()
        w = dec.eigenvalues
        cut = self._zero_cut(w)
        inv = np.where(np.abs(w) > cut, 1.0 / np.where(np.abs(w) > cut, w, 1.0), 0.0)
        return HermitianMatrix((dec.eigenvectors * inv) @ dec.eigenvectors.conj().T,
                               rank_tol=self.rank_tol)


MatrixLike = Union[HermitianMatrix, np.ndarray]


def as_array(a: MatrixLike) -> np.ndarray:
    return a.entries if isinstance(a, HermitianMatrix) else np.asarray(a)


def as_hermitian(a: MatrixLike, rank_tol: float = DEFAULT_RANK_TOL) -> HermitianMatrix:
    if isinstance(a, HermitianMatrix):
        return a
    return HermitianMatrix(np.asarray(a), rank_tol=rank_tol)


@dataclass(frozen=True, eq=False)
class ChannelPair:
    """Gram matrices (W1, W2) of the legitimate and eavesdropper channels."""

    w1: HermitianMatrix
    w2: HermitianMatrix

    def __post_init__(self):
        if self.w1.dim != self.w2.dim:
            raise ValueError(
                f"W1 and W2 must have equal dimension, got {self.w1.dim} and {self.w2.dim}"
            )
        for name, w in (("W1", self.w1), ("W2", self.w2)):
            if not w.is_psd():
                raise ValueError(f"{name} is not positive semidefinite within rank_tol")

    @property
    def m(self) -> int:
        return self.w1.dim

    @property
    def rank_tol(self) -> float:
        return min(self.w1.rank_tol, self.w2.rank_tol)

    @classmethod
    def from_gram(cls, w1: MatrixLike, w2: MatrixLike,
                  rank_tol: float = DEFAULT_RANK_TOL) -> "ChannelPair":
        return cls(as_hermitian(w1, rank_tol), as_hermitian(w2, rank_tol))

    @classmethod
    def from_channels(cls, h1: np.ndarray, h2: np.ndarray,
                      rank_tol: float = DEFAULT_RANK_TOL) -> "ChannelPair":
        """Build the pair from raw channel matrices via W_k = H_k^H H_k."""
        h1 = np.asarray(h1)
        h2 = np.asarray(h2)
        if h1.ndim != 2 or h2.ndim != 2 or h1.shape[1] != h2.shape[1]:
            raise ValueError("H1 and H2 must be 2-D with the same number of columns")
        return cls(HermitianMatrix(h1.conj().T @ h1, rank_tol=rank_tol),
                   HermitianMatrix(h2.conj().T @ h2, rank_tol=rank_tol))


class SolveStatus(Enum):
    SOLVED = "Solved"
    BOUNDS_ONLY = "BoundsOnly"
    ZERO_RATE = "ZeroRate"


@dataclass(frozen=True, eq=False)
class CapacityBounds:
    """Lower / mid / upper capacity values (nats) with an analytic gap bound."""

    lower_nats: float
    mid_nats: float
    upper_nats: float
    gap_bound_nats: float
    provenance: tuple[str, str, str] = ("", "", "")

    def __post_init__(self):
        tol = 1e-9 * max(1.0, abs(self.upper_nats), abs(self.gap_bound_nats))
        chain = (self.lower_nats <= self.mid_nats + tol
                 and self.mid_nats <= self.upper_nats + tol
                 and self.upper_nats <= self.lower_nats + self.gap_bound_nats + tol)
        if not chain:
            raise ValueError(
                "bound chain violated: "
                f"lower={self.lower_nats!r} mid={self.mid_nats!r} "
                f"upper={self.upper_nats!r} gap={self.gap_bound_nats!r}"
            )


@dataclass(frozen=True, eq=False)
class SolveResult:
    """Optimal covariance, capacity and multiplier returned by the solvers.

    ``mode_powers`` holds the per-eigenmode transmit powers for solvers that
    work in an eigenbasis; ``bounds`` is populated when only capacity bounds
    (not the exact value) are available.
    """

    covariance: HermitianMatrix
    capacity_nats: float
    lagrange_lambda: float
    active_modes: int
    power_used: float
    status: SolveStatus
    mode_powers: Optional[np.ndarray] = None
    bounds: Optional[CapacityBounds] = None

    def __post_init__(self):
        if self.capacity_nats < 0:
            raise ValueError("capacity_nats must be nonnegative")
        if self.lagrange_lambda < 0:
            raise ValueError("lagrange_lambda must be nonnegative")
        if not self.covariance.is_psd():
            raise ValueError("covariance must be positive semidefinite")


@dataclass(frozen=True, eq=False)
class SolveConfig:
    """Numerical policy for the multiplier bisections."""

    power_tol: float = 1e-12
    max_iters: int = 200

    def __post_init__(self):
        if self.power_tol <= 0:
            raise ValueError("power_tol must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")


@dataclass(frozen=True)
class KktResidual:
    """Norms of the KKT violations of a candidate (R, lambda).

    dual_feasibility    ||negative part of M||
    complementary_slackness  ||M R||
    power_slackness     |lambda * (tr R - P_T)|
    """

    dual_feasibility: float
    complementary_slackness: float
    power_slackness: float

    def max(self) -> float:
        return max(self.dual_feasibility, self.complementary_slackness,
                   self.power_slackness)


def _coerce_psd(r: MatrixLike, m: int, rank_tol: float) -> np.ndarray:
    """Validate dimensions and positive semidefiniteness of a covariance input."""
    h = as_hermitian(r, rank_tol)
    if h.dim != m:
        raise ValueError(f"covariance dimension {h.dim} does not match channel dimension {m}")
    if not h.is_psd():
        raise ValueError("covariance is not positive semidefinite within rank_tol")
    return h.entries


def logdet_i_plus(w: MatrixLike, r: MatrixLike) -> float:
    """ln|I + W R| for PSD W and R, evaluated through a Hermitian eigenproblem."""
    wa = as_array(w)
    ra = as_array(r)
    rh = as_hermitian(ra).sqrt_psd().entries
    ev = np.linalg.eigvalsh(sym(rh @ wa @ rh))
    return float(np.sum(np.log1p(np.clip(ev, 0.0, None))))


def secrecy_rate(pair: ChannelPair, r: MatrixLike) -> float:
    """Signed secrecy rate ln|I + W1 R| - ln|I + W2 R| in nats.

    Negative values are returned as-is; callers interpret them as zero rate.
    """
    ra = _coerce_psd(r, pair.m, pair.rank_tol)
    return logdet_i_plus(pair.w1, ra) - logdet_i_plus(pair.w2, ra)


def weak_rate(pair: ChannelPair, r: MatrixLike) -> float:
    """Weak-eavesdropper rate ln|I + W1 R| - tr(W2 R) in nats (signed)."""
    ra = _coerce_psd(r, pair.m, pair.rank_tol)
    leak = float(np.trace(pair.w2.entries @ ra).real)
    return logdet_i_plus(pair.w1, ra) - leak


def positive_part(a: HermitianMatrix) -> HermitianMatrix:
    """Projection onto the positive eigenmodes: sum of lambda_i u_i u_i^H over lambda_i > 0."""
    dec = a.eig()
    w = dec.eigenvalues
    cut = a.rank_tol * (float(np.max(np.abs(w))) if w.size else 0.0)
    kept = np.where(w > cut, w, 0.0)
    return HermitianMatrix((dec.eigenvectors * kept) @ dec.eigenvectors.conj().T,
                           rank_tol=a.rank_tol)


def epsilon_from_pathloss(alpha: float, n2: float, m: float,
                          r_min: float, nu: float) -> float:
    """Worst-case eavesdropper gain alpha * n2 * m / r_min**nu from a minimum distance."""
    for name, val in (("alpha", alpha), ("n2", n2), ("m", m),
                      ("r_min", r_min), ("nu", nu)):
        if not val > 0:
            raise ValueError(f"{name} must be positive, got {val!r}")
    return float(alpha * n2 * m * r_min ** (-nu))


NATS_PER_BIT = math.log(2.0)


def nats_to_bits(x: float) -> float:
    return x / NATS_PER_BIT
