"""Small dense complex linear algebra: tensor products, partial traces,
Hermitian eigensystems, Schmidt decompositions and entropies.

Matrices and vectors are plain ``numpy`` arrays of dtype ``complex128``.
Every function returns new arrays and never mutates its inputs.
"""

from __future__ import annotations

from typing import Literal

import numpy as np

from .errors import FactorizationError, InstanceTooLarge, InvalidState, NotHermitian

ENTRY_CAP = 2**20
HERMITIAN_TOL = 1e-10
NORM_TOL = 1e-10
CLIP_TOL = 1e-12
TIE_TOL = 1e-9


def as_matrix(a) -> np.ndarray:
    m = np.array(a, dtype=complex)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise InvalidState(f"expected a non-empty 2-d matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidState("matrix has non-finite entries")
    return m


def as_state(psi, tol: float = NORM_TOL) -> np.ndarray:
    """Validate a unit state vector and return it as a flat complex array."""
    v = np.array(psi, dtype=complex).reshape(-1)
    if v.size == 0 or not np.all(np.isfinite(v)):
        raise InvalidState("state vector is empty or has non-finite entries")
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > tol:
        raise InvalidState(f"state vector norm is {norm!r}, expected 1")
    return v


def normalize(v) -> np.ndarray:
    v = np.array(v, dtype=complex).reshape(-1)
    return v / np.linalg.norm(v)


def projector(psi) -> np.ndarray:
    v = np.asarray(psi, dtype=complex).reshape(-1)
    return np.outer(v, v.conj())


def as_density(rho, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate a density operator (Hermitian, unit trace, PSD up to ``tol``)."""
    m = as_matrix(rho)
    if m.shape[0] != m.shape[1]:
        raise InvalidState(f"density operator must be square, got {m.shape}")
    if hermitian_defect(m) > tol:
        raise InvalidState("density operator is not Hermitian")
    tr = np.trace(m).real
    if abs(tr - 1.0) > tol:
        raise InvalidState(f"density operator has trace {tr!r}")
    if np.linalg.eigvalsh(m).min() < -tol:
        raise InvalidState("density operator has a negative eigenvalue")
    return m


def hermitian_defect(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def tensor(a, b, cap: int = ENTRY_CAP) -> np.ndarray:
    """Kronecker product ``a ⊗ b``.

    Raises ``InstanceTooLarge`` when the result would hold more than ``cap`` entries.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.size * b.size > cap:
        raise InstanceTooLarge(
            f"instance too large: {a.shape} ⊗ {b.shape} exceeds {cap} entries"
        )
    return np.kron(a, b)


def tensor_all(factors, cap: int = ENTRY_CAP) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex) if np.ndim(factors[0]) == 2 else np.ones(1, dtype=complex)
    for f in factors:
        out = tensor(out, f, cap=cap)
    return out


def partial_trace(
    rho, dimA: int, dimB: int, keep: Literal["A", "B"] = "B"
) -> np.ndarray:
    """Reduced operator on the kept factor of ``H_A ⊗ H_B``."""
    m = as_matrix(rho)
    if m.shape != (dimA * dimB, dimA * dimB):
        raise FactorizationError(
            f"factorization error: operator of shape {m.shape} is not {dimA}x{dimB} bipartite"
        )
    t = m.reshape(dimA, dimB, dimA, dimB)
    if keep == "B":
        return np.einsum("ajak->jk", t)
    if keep == "A":
        return np.einsum("ibjb->ij", t)
    raise ValueError(f"keep must be 'A' or 'B', not {keep!r}")


def _tie_key(vec: np.ndarray) -> tuple:
    # phase-fix on the first non-negligible entry so the key is gauge invariant
    nz = np.flatnonzero(np.abs(vec) > 1e-6)
    if nz.size:
        vec = vec * np.exp(-1j * np.angle(vec[nz[0]]))
    r = np.round(vec, 9) + 0.0
    return tuple(np.column_stack([r.real, r.imag]).ravel())


def eig_hermitian(h, density: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and orthonormal eigenvectors (as columns).

    Ties within 1e-9 are ordered lexicographically on the rounded,
    phase-fixed eigenvector entries. With ``density=True`` eigenvalues that
    overshoot ``[0, 1]`` by less than 1e-12 are clipped; larger violations raise.
    """
    m = as_matrix(h)
    if m.shape[0] != m.shape[1] or hermitian_defect(m) > HERMITIAN_TOL:
        raise NotHermitian("not Hermitian")
    m = (m + m.conj().T) / 2
    w, v = np.linalg.eigh(m)
    order = list(range(len(w)))[::-1]
    # group near-equal eigenvalues, then sort each group by eigenvector key
    groups: list[list[int]] = []
    for i in order:
        if groups and abs(w[groups[-1][0]] - w[i]) <= TIE_TOL:
            groups[-1].append(i)
        else:
            groups.append([i])
    idx = [j for g in groups for j in sorted(g, key=lambda k: _tie_key(v[:, k]))]
    w = w[idx].copy()
    v = v[:, idx]
    if density:
        if w.min() < -CLIP_TOL or w.max() > 1 + CLIP_TOL:
            raise InvalidState(f"eigenvalues {w} outside [0, 1]")
        w = np.clip(w, 0.0, 1.0)
    return w, v


def schmidt(psi, dimA: int, dimB: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Schmidt decomposition ``psi = sum_a c_a |nu_a> ⊗ |mu_a>``.

    Returns ``(coeffs, basisA, basisB)`` with ``min(dimA, dimB)`` coefficients
    in descending order and the basis vectors as columns.
    """
    v = as_state(psi)
    if v.size != dimA * dimB:
        raise FactorizationError(
            f"factorization error: vector of length {v.size} is not {dimA}x{dimB}"
        )
    u, s, vh = np.linalg.svd(v.reshape(dimA, dimB), full_matrices=False)
    return s, u, vh.T


def _xlog2x(p: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    out = np.zeros_like(p)
    mask = p > 1e-300
    out[mask] = p[mask] * np.log2(p[mask])
    return out


def entropy(rho, alpha: float = 1) -> float:
    """Von Neumann (``alpha=1``) or Rényi-1/2 (``alpha=0.5``) entropy in bits."""
    lam, _ = eig_hermitian(rho, density=True)
    if alpha == 1:
        return float(-np.sum(_xlog2x(lam)))
    if alpha == 0.5:
        return float(2 * np.log2(np.sum(np.sqrt(lam))))
    raise ValueError("only alpha in {1, 1/2} is supported")


def binary_entropy(p: float) -> float:
    return float(-np.sum(_xlog2x(np.array([p, 1 - p]))))
