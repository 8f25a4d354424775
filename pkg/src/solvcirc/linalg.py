"""Dense complex linear algebra and sampling primitives.

Everything here is plain numpy at double precision, sized for desk-scale
Hilbert spaces (dimensions up to ~2^17).  All functions are pure; random
sampling takes an explicit ``numpy.random.Generator``.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, PositivityError

# per-axis cap for kron results (entries per axis)
DEFAULT_DIM_CAP = 2 ** 18

PAULI = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def make_rng(seed: int | None) -> np.random.Generator:
    """Seeded PCG64 generator; identical seed gives an identical stream."""
    return np.random.default_rng(seed)


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def max_abs(m: np.ndarray) -> float:
    """Max-norm of an array (0.0 for empty input)."""
    return float(np.max(np.abs(m))) if np.asarray(m).size else 0.0


def unitarity_residual(u: np.ndarray) -> float:
    u = np.asarray(u)
    return max_abs(dagger(u) @ u - np.eye(u.shape[0]))


def hermiticity_residual(m: np.ndarray) -> float:
    return max_abs(m - dagger(m))


def require_finite(m: np.ndarray, name: str = "matrix") -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains non-finite entries")
    return m


def kron(*mats: np.ndarray, cap: int = DEFAULT_DIM_CAP) -> np.ndarray:
    """Kronecker product of one or more matrices, with a result-size cap."""
    if not mats:
        raise ValueError("kron needs at least one factor")
    rows = cols = 1
    for m in mats:
        r, c = np.asarray(m).shape
        rows *= r
        cols *= c
    if rows > cap or cols > cap:
        raise CapacityError(f"kron result {rows}x{cols} exceeds cap {cap} per axis")
    out = np.asarray(mats[0], dtype=complex)
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def partial_trace(rho: np.ndarray, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out all tensor factors except those in ``keep``.

    ``dims`` lists the factor dimensions of the square matrix ``rho`` in
    order; the kept factors appear in the result in their original order.
    The trace is preserved exactly.
    """
    rho = np.asarray(rho, dtype=complex)
    dims = list(dims)
    n = len(dims)
    d = int(np.prod(dims))
    if rho.shape != (d, d):
        raise ValueError(f"rho shape {rho.shape} does not match dims product {d}")
    keep = sorted(set(keep))
    if any(k < 0 or k >= n for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {n} factors")
    traced = [i for i in range(n) if i not in keep]
    t = rho.reshape(dims + dims)
    for i in reversed(traced):
        t = np.trace(t, axis1=i, axis2=i + t.ndim // 2)
    dk = int(np.prod([dims[i] for i in keep])) if keep else 1
    return t.reshape(dk, dk)


def reshuffle(u: np.ndarray, q: int) -> np.ndarray:
    """Spatial reshuffle of a two-site operator: (U^R)[(ab),(cd)] = U[(ac),(bd)].

    Reads the gate along the space direction; an involution on q^2 x q^2
    matrices.  SWAP is a fixed point.
    """
    u = np.asarray(u, dtype=complex)
    if u.shape != (q * q, q * q):
        raise ValueError(f"expected {q * q}x{q * q} matrix, got {u.shape}")
    return u.reshape(q, q, q, q).transpose(0, 2, 1, 3).reshape(q * q, q * q)


def expm_hermitian_generator(h: np.ndarray, atol: float = 1e-10) -> np.ndarray:
    """exp(-i h) for Hermitian h, via eigendecomposition."""
    h = require_finite(h, "generator")
    if hermiticity_residual(h) > atol:
        raise ValueError("generator is not Hermitian within tolerance")
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * w)) @ dagger(v)


def _density_eigvals(rho: np.ndarray, trace_atol: float = 1e-8) -> np.ndarray:
    rho = require_finite(rho, "rho")
    if hermiticity_residual(rho) > 1e-8:
        raise ValueError("rho is not Hermitian within tolerance")
    w = np.linalg.eigvalsh(rho)
    if w.min() < -1e-6:
        raise PositivityError(f"rho has eigenvalue {w.min():.3e} < -1e-6")
    if abs(w.sum() - 1.0) > trace_atol:
        raise ValueError(f"rho trace {w.sum():.6f} deviates from 1")
    return np.clip(w, 0.0, 1.0)


def von_neumann_entropy(rho: np.ndarray) -> float:
    """-Tr[rho ln rho] in nats; eigenvalues clamped to [0, 1], 0 ln 0 := 0."""
    w = _density_eigvals(rho)
    w = w[w > 0]
    return float(-(w * np.log(w)).sum())


def renyi_trace(rho: np.ndarray, n: int) -> float:
    """Tr[rho^n] for Hermitian rho via eigenvalues, n >= 2."""
    if n < 2:
        raise ValueError("renyi_trace requires n >= 2")
    rho = require_finite(rho, "rho")
    if hermiticity_residual(rho) > 1e-8:
        raise ValueError("rho is not Hermitian within tolerance")
    w = np.linalg.eigvalsh(rho)
    return float(np.sum(w ** n))


def haar_unitary(dim: int, rng: np.random.Generator, special: bool = False) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian with phase fix.

    With ``special=True`` the determinant is normalized to 1.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r).copy()
    ph /= np.abs(ph)
    u = q * ph
    if special:
        u = u * np.linalg.det(u) ** (-1.0 / dim)
    return u


def trace_distance(r1: np.ndarray, r2: np.ndarray) -> float:
    """(1/2)||r1 - r2||_1 via eigenvalues of the (Hermitian) difference."""
    r1 = np.asarray(r1)
    r2 = np.asarray(r2)
    if r1.shape != r2.shape:
        raise ValueError(f"shape mismatch {r1.shape} vs {r2.shape}")
    w = np.linalg.eigvalsh(r1 - r2)
    return 0.5 * float(np.abs(w).sum())
