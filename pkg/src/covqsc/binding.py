"""Binding analysis: the exact bound on ``sum_x p~_x``, the maximally
entangled attack that reaches it, and a numerical adversary to check both.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import qalg
from .errors import InvalidStrategy
from .protocol import QscProtocol, purification

COMPLETENESS_TOL = 1e-9


@dataclass(frozen=True)
class AttackStrategy:
    """Alice's committed state on ``H_Ã ⊗ H_B`` and her reveal operations.

    ``reveal_ops[x]`` is the Kraus list ``[E_x1, ..., E_xm]`` acting on ``H_Ã``.
    """

    committed_state: np.ndarray
    ancilla_dim: int
    reveal_ops: dict[str, list[np.ndarray]]


@dataclass(frozen=True)
class BindingReport:
    eigenvalues: np.ndarray
    sum_bound: float
    a_bits: float
    renyi_a_bits: float
    attack_sum: float | None = None
    search_best_sum: float | None = None


def eigenvalue_multiset(p: QscProtocol) -> np.ndarray:
    """Spectrum of any ``rho_x``: k-fold products of the single-copy spectrum."""
    lam = p.single_copy_eigenvalues
    out = np.ones(1)
    for _ in range(p.copies):
        out = np.multiply.outer(out, lam).reshape(-1)
    return np.sort(out)[::-1]


def binding_bound(p: QscProtocol) -> BindingReport:
    """Exact upper bound ``(2^n / d) (sum_a sqrt(lam_a))^2`` on ``sum_x p~_x``."""
    lam = eigenvalue_multiset(p)
    root_sum = float(np.sum(np.sqrt(p.single_copy_eigenvalues))) ** p.copies
    sum_bound = 2.0**p.n / p.d * root_sum**2
    return BindingReport(
        eigenvalues=lam,
        sum_bound=sum_bound,
        a_bits=float(np.log2(sum_bound)),
        renyi_a_bits=renyi_bound(p),
    )


def renyi_bound(p: QscProtocol) -> float:
    """``n - [S(I/d) - S_1/2(rho_0)]`` in bits."""
    s_half = p.copies * qalg.entropy(p.orbit.states[0], alpha=0.5)
    s_avg = qalg.entropy(np.eye(p.d1) / p.d1) * p.copies
    return p.n - (s_avg - s_half)


def maximally_entangled(d: int) -> np.ndarray:
    return np.eye(d, dtype=complex).reshape(-1) / np.sqrt(d)


def padded_test_state(p: QscProtocol, x: str, ancilla_dim: int) -> np.ndarray:
    """Honest ``|psi_x>`` with its ancilla isometrically embedded in ``C^ancilla_dim``.

    Returned as an ``ancilla_dim x d`` amplitude matrix.
    """
    psi, dimA = purification(p, x)
    if dimA > ancilla_dim:
        raise InvalidStrategy(
            f"ancilla dimension {ancilla_dim} is smaller than the honest purification ({dimA})"
        )
    out = np.zeros((ancilla_dim, p.d), dtype=complex)
    out[:dimA] = psi.reshape(dimA, p.d)
    return out


def me_attack(p: QscProtocol) -> AttackStrategy:
    """Commit half of a maximally entangled pair; reveal with one unitary per ``x``.

    For each ``x`` the reveal unitary is ``sum_a |nu_a><mu_a^*|`` from the Schmidt
    bases of the padded honest state, which aligns Alice's half with it.
    """
    d = p.d
    ops = {}
    for x in p.strings:
        test = padded_test_state(p, x, d)
        _, nu, mu = qalg.schmidt(test.reshape(-1), d, d)
        ops[x] = [nu @ mu.T]
    return AttackStrategy(maximally_entangled(d), d, ops)


@dataclass(frozen=True)
class StrategyValue:
    per_x: dict[str, float]
    total: float


def check_strategy(p: QscProtocol, s: AttackStrategy) -> None:
    da = s.ancilla_dim
    psi = np.asarray(s.committed_state)
    if psi.size != da * p.d:
        raise InvalidStrategy(
            f"committed state has {psi.size} amplitudes, expected {da}x{p.d}"
        )
    if abs(np.linalg.norm(psi) - 1) > COMPLETENESS_TOL:
        raise InvalidStrategy("committed state is not normalized")
    if set(s.reveal_ops) != set(p.strings):
        raise InvalidStrategy("reveal operations must be given for every string x")
    for x, kraus in s.reveal_ops.items():
        total = sum(e.conj().T @ e for e in kraus)
        if np.shape(total) != (da, da):
            raise InvalidStrategy(f"reveal operators for {x} must be {da}x{da}")
        if np.abs(total - np.eye(da)).max() > COMPLETENESS_TOL:
            raise InvalidStrategy(f"reveal operation for {x} violates sum E^dag E = I")


def evaluate_strategy(p: QscProtocol, s: AttackStrategy) -> StrategyValue:
    """Success probability ``p~_x = sum_i |<psi_x|E_xi ⊗ I|Psi>|^2`` for every ``x``."""
    check_strategy(p, s)
    state = np.asarray(s.committed_state, dtype=complex).reshape(s.ancilla_dim, p.d)
    per_x = {}
    for x in p.strings:
        test = padded_test_state(p, x, s.ancilla_dim)
        per_x[x] = float(sum(abs(np.vdot(test, e @ state)) ** 2 for e in s.reveal_ops[x]))
    return StrategyValue(per_x, float(sum(per_x.values())))


def random_strategy(p: QscProtocol, rng: np.random.Generator, ancilla_dim: int | None = None,
                    outcomes: int | None = None) -> AttackStrategy:
    """A random valid strategy: Haar-ish committed state and random Kraus sets."""
    da = ancilla_dim or p.d
    v = rng.normal(size=da * p.d) + 1j * rng.normal(size=da * p.d)
    ops = {}
    for x in p.strings:
        m = outcomes or int(rng.integers(1, 4))
        g = rng.normal(size=(m * da, da)) + 1j * rng.normal(size=(m * da, da))
        iso, _ = np.linalg.qr(g)
        ops[x] = [iso[i * da:(i + 1) * da] for i in range(m)]
    return AttackStrategy(v / np.linalg.norm(v), da, ops)


def _best_unitary(k: np.ndarray) -> np.ndarray:
    # argmax over unitaries E of |Tr(E K)|
    u, _, vh = np.linalg.svd(k)
    return vh.conj().T @ u.conj().T


def _seesaw(tests: np.ndarray, state: np.ndarray, tol: float, max_iter: int) -> float:
    """Alternate optimal reveal unitaries and optimal committed state."""
    value = 0.0
    for _ in range(max_iter):
        unis = np.array([_best_unitary(state @ t.conj().T) for t in tests])
        # each term |<t_x| E_x ⊗ I |Psi>|^2 = <Psi| w_x><w_x |Psi> with w_x = E_x^dag t_x
        w = np.einsum("xji,xjb->xib", unis.conj(), tests).reshape(len(tests), -1)
        q = w.T @ w.conj()
        evals, evecs = np.linalg.eigh(q)
        new = float(evals[-1])
        state = evecs[:, -1].reshape(state.shape)
        if new - value <= tol * max(new, 1e-300):
            return max(new, value)
        value = new
    return value


def strategy_search(p: QscProtocol, restarts: int = 50, seed: int = 0,
                    tol: float = 1e-10, max_iter: int = 2000) -> float:
    """Numerical adversary for ``sum_x p~_x`` with a ``d``-dimensional ancilla.

    Each restart draws a random committed state and then alternates between
    the optimal per-``x`` reveal unitary (polar factor) and the optimal committed
    state (top eigenvector). Restarts use independent child seeds; the best
    value wins.
    """
    if p.d * p.d > 64 * 64:
        raise ValueError("strategy_search is limited to d <= 64")
    d = p.d
    tests = np.array([padded_test_state(p, x, d) for x in p.strings])
    best = -np.inf
    for child in np.random.SeedSequence(seed).spawn(restarts):
        rng = np.random.default_rng(child)
        v = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        val = _seesaw(tests, v / np.linalg.norm(v), tol, max_iter)
        best = max(best, val)
    return float(best)
