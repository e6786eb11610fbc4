"""Protocol verdicts: combine binding and concealing bounds and classify.

For pure commitment states a covariant protocol is either classical in
disguise (orthogonal orbit, ``a + b = n``) or strictly beats the classical
limit (``a + b < n``). Mixed-state protocols only get the margin.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .binding import binding_bound, evaluate_strategy, me_attack, strategy_search
from .concealing import DEFAULT_RESTARTS, concealing_bits
from .errors import ConsistencyError, InvalidState
from .protocol import QscProtocol

ORTHO_TOL = 1e-9
MARGIN_TOL = 1e-6

Classification = Literal["classical_equivalent", "nontrivial", "mixed_state_unclassified"]


@dataclass(frozen=True)
class ProtocolReport:
    n: int
    d: int
    group_order: int
    eigenvalues: tuple[float, ...]
    sum_bound: float
    a_bits: float
    renyi_a_bits: float
    attack_sum: float
    search_best_sum: float | None
    i_acc_bits: float
    b_bits: float
    concealing_method: str
    classification: Classification
    margin: float
    phi_star: tuple[complex, ...]


def orthogonality_check(states: Sequence[np.ndarray]) -> bool:
    """True iff the (pure) states are pairwise orthogonal within 1e-9."""
    vecs = []
    for rho in states:
        lam, v = np.linalg.eigh(np.asarray(rho, dtype=complex))
        if lam[:-1].sum() > ORTHO_TOL or abs(lam[-1] - 1) > ORTHO_TOL:
            raise InvalidState("orthogonality dichotomy applies to pure rho_x only")
        vecs.append(v[:, -1])
    for i in range(len(vecs)):
        for j in range(i + 1, len(vecs)):
            if abs(np.vdot(vecs[i], vecs[j])) ** 2 > ORTHO_TOL:
                return False
    return True


def classify(p: QscProtocol, mode: Literal["additivity", "direct"] = "additivity",
             restarts: int = DEFAULT_RESTARTS, seed: int = 0, search: bool = False,
             search_restarts: int = 50) -> ProtocolReport:
    """Full report for a covariant protocol.

    The margin uses the analytic binding exponent; the search result, when
    requested, is reported alongside but never feeds the verdict.
    """
    bind = binding_bound(p)
    attack = evaluate_strategy(p, me_attack(p)).total
    conceal = concealing_bits(p, mode=mode, restarts=restarts, seed=seed)
    best = strategy_search(p, restarts=search_restarts, seed=seed) if search else None
    margin = p.n - (bind.a_bits + conceal.b_bits)

    if not p.is_pure:
        label: Classification = "mixed_state_unclassified"
    elif orthogonality_check(p.orbit.states):
        label = "classical_equivalent"
        if abs(margin) > MARGIN_TOL:
            raise ConsistencyError(f"orthogonal orbit but margin {margin:.3g} != 0")
    else:
        label = "nontrivial"
        if margin <= 0:
            raise ConsistencyError(f"non-orthogonal pure orbit but margin {margin:.3g} <= 0")

    return ProtocolReport(
        n=p.n,
        d=p.d,
        group_order=p.rep.order**p.copies,
        eigenvalues=tuple(float(x) for x in bind.eigenvalues),
        sum_bound=bind.sum_bound,
        a_bits=bind.a_bits,
        renyi_a_bits=bind.renyi_a_bits,
        attack_sum=attack,
        search_best_sum=best,
        i_acc_bits=conceal.i_acc_bits,
        b_bits=conceal.b_bits,
        concealing_method=conceal.method,
        classification=label,
        margin=margin,
        phi_star=tuple(complex(z) for z in conceal.phi_star),
    )
