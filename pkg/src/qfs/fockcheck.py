"""Brute-force truncated Fock-space oracle.

The THz continuum is replaced by K discrete modes (Gauss-Legendre nodes over
the cat mode's support). States are truncated at D levels per mode; the
ladder operators act on D + 1 levels so that S|psi> carries no truncation
error of its own and ||S psi||^2 equals <psi|S^2|psi> for the truncated
state. States are dense vectors, operators sparse matrices. Nothing here reuses the analytic
moment formulas of :mod:`qfs.quantstat`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import sparse

from .gating import SamplingKernel
from .quantstat import CatState

__all__ = [
    "ModeBasis",
    "FockState",
    "OperatorMatrix",
    "DimensionError",
    "TruncationError",
    "BasisMismatch",
    "gauss_legendre_basis",
    "coherent_vector",
    "coherent_product",
    "discretize_cat",
    "build_signal_operator",
    "operator_from_coefficients",
    "number_operator",
    "oracle_moments",
]

DEFAULT_MAX_DIM = 20_000
DEFAULT_MAX_LEAKAGE = 1e-6


class DimensionError(ValueError):
    pass


class TruncationError(RuntimeError):
    pass


class BasisMismatch(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ModeBasis:
    mode_centers: np.ndarray
    mode_weights: np.ndarray
    cutoff: int
    max_dim: int = DEFAULT_MAX_DIM

    def __post_init__(self):
        centers = np.atleast_1d(np.asarray(self.mode_centers, dtype=float))
        weights = np.atleast_1d(np.asarray(self.mode_weights, dtype=float))
        if centers.size < 1 or centers.shape != weights.shape:
            raise ValueError("need K >= 1 modes with one weight each")
        if np.any(weights <= 0):
            raise ValueError("mode weights must be positive")
        if self.cutoff < 2:
            raise ValueError("cutoff must be at least 2")
        if self.cutoff ** centers.size > self.max_dim:
            raise DimensionError(
                f"Hilbert dimension {self.cutoff}**{centers.size} exceeds limit {self.max_dim}")
        object.__setattr__(self, "mode_centers", centers)
        object.__setattr__(self, "mode_weights", weights)

    @property
    def K(self) -> int:
        return self.mode_centers.size

    @property
    def dim(self) -> int:
        """Dimension of the truncated state space, D**K."""
        return self.cutoff ** self.K

    @property
    def padded_dim(self) -> int:
        """Dimension the operators act on, (D + 1)**K."""
        return (self.cutoff + 1) ** self.K

    def embed(self, vec) -> np.ndarray:
        """Map a D**K state vector into the padded (D + 1)**K space."""
        vec = np.asarray(vec, dtype=complex)
        if vec.shape != (self.dim,):
            raise BasisMismatch(f"expected a state of length {self.dim}")
        D = self.cutoff
        out = np.zeros((D + 1,) * self.K, complex)
        out[(slice(0, D),) * self.K] = vec.reshape((D,) * self.K)
        return out.ravel()

    @cached_property
    def annihilators(self) -> list[sparse.csr_matrix]:
        """Sparse real a_k for every mode, on the padded space."""
        D = self.cutoff + 1
        a = sparse.diags(np.sqrt(np.arange(1, D, dtype=float)), 1, format="csr")
        ops = []
        for k in range(self.K):
            op = sparse.kron(sparse.identity(D ** k), a, format="csr")
            ops.append(sparse.kron(op, sparse.identity(D ** (self.K - k - 1)), format="csr"))
        return ops


def gauss_legendre_basis(state: CatState, K: int, cutoff: int, n_widths: float = 4.0,
                         max_dim: int = DEFAULT_MAX_DIM) -> ModeBasis:
    """K Gauss-Legendre modes over the cat mode's support (clipped at W = 0)."""
    lo, hi = state.support(n_widths)
    x, w = leggauss(K)
    half = 0.5 * (hi - lo)
    return ModeBasis(lo + half * (x + 1.0), half * w, cutoff, max_dim)


@dataclass(frozen=True, eq=False)
class FockState:
    """State on ``basis``; ``amplitudes`` has length D**K."""

    basis: ModeBasis
    amplitudes: np.ndarray
    leakage: float = 0.0
    mode_norm_error: float = 0.0

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.basis.dim,):
            raise BasisMismatch(f"state length {amps.size} does not match basis dimension {self.basis.dim}")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def accepted(self) -> bool:
        return self.leakage <= DEFAULT_MAX_LEAKAGE


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    basis: ModeBasis
    entries: sparse.csr_matrix

    def toarray(self) -> np.ndarray:
        return self.entries.toarray()


def coherent_vector(alpha: complex, cutoff: int) -> tuple[np.ndarray, float]:
    """Truncated |alpha>, renormalised; returns (vector, lost norm)."""
    n = np.arange(cutoff)
    log_fact = np.array([math.lgamma(k + 1) for k in n])
    if alpha == 0:
        vec = np.zeros(cutoff, complex)
        vec[0] = 1.0
        return vec, 0.0
    mags = np.exp(-abs(alpha) ** 2 / 2 + n * math.log(abs(alpha)) - 0.5 * log_fact)
    vec = mags * np.exp(1j * n * np.angle(alpha))
    kept = float(np.sum(mags ** 2))
    return vec / math.sqrt(kept), max(0.0, 1.0 - kept)


def coherent_product(alphas, cutoff: int) -> tuple[np.ndarray, float]:
    """Tensor product of truncated coherent states; lost norm of the product."""
    vec = np.ones(1, complex)
    kept = 1.0
    for a in alphas:
        v, lost = coherent_vector(complex(a), cutoff)
        vec = np.kron(vec, v)
        kept *= 1.0 - lost
    return vec, 1.0 - kept


def discretize_cat(state: CatState, basis: ModeBasis, max_leakage: float = DEFAULT_MAX_LEAKAGE,
                   strict: bool = True) -> FockState:
    """Project the continuum even cat onto the mode basis.

    Mode amplitudes are alpha_k = alpha0 v_k with v_k proportional to
    u(W_k) sqrt(w_k), normalised so that sum |alpha_k|^2 = |alpha0|^2. The
    deviation of the unnormalised sum u_k^2 w_k from 1 is reported as
    ``mode_norm_error``; the norm lost by truncating the coherent components
    is reported as ``leakage`` and, with ``strict``, rejected above
    ``max_leakage``.
    """
    v = state.mode_fn(basis.mode_centers) * np.sqrt(basis.mode_weights)
    s = float(np.sum(v ** 2))
    if s <= 0:
        raise ValueError("mode basis does not overlap the cat mode")
    v = v / math.sqrt(s)
    alphas = state.alpha0 * v
    plus, leak = coherent_product(alphas, basis.cutoff)
    minus, _ = coherent_product(-alphas, basis.cutoff)
    if strict and leak > max_leakage:
        raise TruncationError(f"coherent truncation leakage {leak:.3e} exceeds {max_leakage:.1e}")
    psi = plus + minus
    psi = psi / np.linalg.norm(psi)
    return FockState(basis, psi, leak, s - 1.0)


def operator_from_coefficients(coeffs, basis: ModeBasis) -> OperatorMatrix:
    """sum_k c_k a_k + conj(c_k) a_k^dag."""
    coeffs = np.asarray(coeffs, dtype=complex)
    if coeffs.shape != (basis.K,):
        raise BasisMismatch("one coefficient per mode is required")
    S = sparse.csr_matrix((basis.padded_dim, basis.padded_dim), dtype=complex)
    for c, a in zip(coeffs, basis.annihilators):
        S = S + c * a + np.conj(c) * a.T
    return OperatorMatrix(basis, S.tocsr())


def build_signal_operator(kernel: SamplingKernel, basis: ModeBasis) -> OperatorMatrix:
    """Discretised S = sum_k g(W_k, tau) sqrt(w_k) a_k + h.c."""
    coeffs = kernel.at(basis.mode_centers) * np.sqrt(basis.mode_weights)
    return operator_from_coefficients(coeffs, basis)


def number_operator(basis: ModeBasis) -> OperatorMatrix:
    N = sum(a.T @ a for a in basis.annihilators)
    return OperatorMatrix(basis, sparse.csr_matrix(N, dtype=complex))


def oracle_moments(state: FockState, op: OperatorMatrix) -> tuple[float, float]:
    """(mean, variance) of ``op`` in ``state``."""
    if state.basis is not op.basis:
        raise BasisMismatch("state and operator are built on different bases")
    psi = state.basis.embed(state.amplitudes)
    s_psi = op.entries @ psi
    mean = np.vdot(psi, s_psi)
    second = np.vdot(s_psi, s_psi).real  # <psi|S^2|psi> for Hermitian S
    return float(mean.real), float(second - mean.real ** 2)
