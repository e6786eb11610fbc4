"""Concealing analysis: accessible information of a covariant ensemble.

For an irreducible covariant family the optimal measurement may be taken
covariant, generated by a single seed vector ``phi``; its mutual information is

    I(phi) = log2 d + (d/|G|) sum_g q_g log2 q_g,   q_g = <phi| D(g) rho_0 D(g)^dag |phi>

and ``I_acc`` is the maximum over ``phi``. ``mutual_info_povm`` computes the
same number the long way and serves as the independent check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.optimize import minimize
from scipy.stats import qmc, norm

from . import qalg
from .errors import IncompletePovm, InstanceTooLarge, NotCovariant, QscError
from .grouprep import GROUP_CAP, OrbitTable, ProjectiveRep, orbit, tensor_power
from .protocol import QscProtocol

POVM_TOL = 1e-9
DIRECT_DIM_CAP = 16
DEFAULT_RESTARTS = 64
LN2 = np.log(2.0)


@dataclass(frozen=True)
class Povm:
    effects: np.ndarray

    def __post_init__(self):
        eff = np.array(self.effects, dtype=complex)
        for e in eff:
            if np.linalg.eigvalsh((e + e.conj().T) / 2).min() < -1e-10:
                raise QscError("POVM effect is not positive semidefinite")
        object.__setattr__(self, "effects", eff)

    def completeness_defect(self) -> float:
        d = self.effects.shape[1]
        return float(np.abs(self.effects.sum(axis=0) - np.eye(d)).max())


@dataclass(frozen=True)
class ConcealingReport:
    i_acc_bits: float
    phi_star: np.ndarray
    b_bits: float
    method: Literal["direct", "additivity"]


def _require_irreducible(rep: ProjectiveRep) -> None:
    if not rep.irreducible:
        raise NotCovariant(
            "representation is reducible; the covariant measurement does not resolve the identity"
        )


def _group_images(rep: ProjectiveRep, orb: OrbitTable) -> np.ndarray:
    """``rho_g = D(g) rho_0 D(g)^dag`` for every group element."""
    return orb.states[orb.action[:, 0]]


def _xlogx(q: np.ndarray) -> np.ndarray:
    out = np.zeros_like(q)
    m = q > 1e-300
    out[m] = q[m] * np.log2(q[m])
    return out


def _davies(images: np.ndarray, phi: np.ndarray) -> float:
    d = images.shape[1]
    q = np.einsum("i,gij,j->g", phi.conj(), images, phi).real
    return float(np.log2(d) + d / len(images) * _xlogx(np.clip(q, 0, None)).sum())


def davies_value(rep: ProjectiveRep, orb: OrbitTable, phi) -> float:
    """Mutual information (bits) of the covariant measurement seeded by ``phi``."""
    _require_irreducible(rep)
    phi = qalg.as_state(phi, tol=1e-9)
    return _davies(_group_images(rep, orb), phi)


def gauge_fix(phi: np.ndarray) -> np.ndarray:
    """Unit-normalize and make the first non-negligible amplitude real and non-negative."""
    phi = qalg.normalize(phi)
    nz = np.flatnonzero(np.abs(phi) > 1e-12)
    return phi * np.exp(-1j * np.angle(phi[nz[0]]))


def _objective(images: np.ndarray):
    """Negative Davies value and its gradient in the real coordinates of an unnormalized phi."""
    d = images.shape[1]
    weight = d / len(images)

    def f(x):
        v = x[:d] + 1j * x[d:]
        nv = np.vdot(v, v).real
        phi = v / np.sqrt(nv)
        rp = np.einsum("gij,j->gi", images, phi)
        q = np.einsum("i,gi->g", phi.conj(), rp).real
        q = np.clip(q, 0, None)
        val = np.log2(d) + weight * _xlogx(q).sum()
        logq = np.where(q > 1e-300, np.log2(np.maximum(q, 1e-300)), -1e3)
        # dF/dphi^* for normalized phi, then project out the radial part
        gphi = weight * np.einsum("g,gi->i", logq + 1 / LN2, rp)
        gphi = gphi - np.vdot(phi, gphi).real * phi
        gv = gphi / np.sqrt(nv)
        grad = 2 * np.concatenate([gv.real, gv.imag])
        return -val, -grad

    return f


def _starts(dim: int, restarts: int, seed: int) -> np.ndarray:
    sampler = qmc.Sobol(d=dim, scramble=True, seed=seed)
    u = sampler.random_base2(max(0, (restarts - 1).bit_length()))[:restarts]
    z = norm.ppf(np.clip(u, 1e-12, 1 - 1e-12))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def _maximize(images: np.ndarray, restarts: int, seed: int) -> tuple[float, np.ndarray]:
    d = images.shape[1]
    f = _objective(images)
    best_val, best_phi = -np.inf, None
    for x0 in _starts(2 * d, restarts, seed):
        res = minimize(f, x0, jac=True, method="BFGS", options={"gtol": 1e-12, "maxiter": 2000})
        phi = gauge_fix(res.x[:d] + 1j * res.x[d:])
        val = _davies(images, phi)
        if val > best_val + 1e-13:
            best_val, best_phi = val, phi
    return best_val, best_phi


def maximize_accessible_info(rep: ProjectiveRep, orb: OrbitTable,
                             restarts: int = DEFAULT_RESTARTS, seed: int = 0) -> ConcealingReport:
    """Accessible information of the orbit ensemble by multi-start ascent over ``phi``.

    Starts are scrambled Sobol points pushed onto the unit sphere of ``C^d``;
    the best result across starts wins, earlier starts on ties.
    """
    _require_irreducible(rep)
    if rep.d > DIRECT_DIM_CAP:
        raise InstanceTooLarge(f"direct maximization needs d <= {DIRECT_DIM_CAP}, got {rep.d}")
    val, phi = _maximize(_group_images(rep, orb), restarts, seed)
    val = min(val, float(np.log2(rep.d)))
    return ConcealingReport(val, phi, val, "direct")


def covariant_povm(rep: ProjectiveRep, phi) -> Povm:
    """Effects ``(d/|G|) D(g)|phi><phi|D(g)^dag`` for every ``g``."""
    phi = qalg.as_state(phi, tol=1e-9)
    vecs = rep.elements @ phi
    effects = rep.d / rep.order * np.einsum("gi,gj->gij", vecs, vecs.conj())
    povm = Povm(effects)
    defect = povm.completeness_defect()
    if defect > POVM_TOL:
        raise IncompletePovm(
            f"covariant effects sum to I only within {defect:.3g}; representation is not irreducible"
        )
    return povm


def mutual_info_povm(states, povm: Povm) -> float:
    """Classical mutual information (bits) between a uniform label and the outcome."""
    states = np.asarray(states, dtype=complex)
    px = 1.0 / len(states)
    joint = px * np.einsum("xij,yji->xy", states, povm.effects).real
    joint = np.clip(joint, 0, None)
    py = joint.sum(axis=0)
    mask = joint > 1e-300
    ratio = joint[mask] / (px * py[np.nonzero(mask)[1]])
    return float(np.sum(joint[mask] * np.log2(ratio)))


def concealing_bits(p: QscProtocol, mode: Literal["additivity", "direct"] = "additivity",
                    restarts: int = DEFAULT_RESTARTS, seed: int = 0) -> ConcealingReport:
    """Concealing bound ``b`` for the whole ``n``-bit protocol.

    ``additivity`` multiplies the single-copy value by the copy count;
    ``direct`` maximizes over the tensor-power group (slow, small ``k`` only).
    """
    if mode == "additivity":
        single = maximize_accessible_info(p.rep, p.orbit, restarts, seed)
        phi = qalg.tensor_all([single.phi_star] * p.copies)
        return ConcealingReport(
            single.i_acc_bits, phi, p.copies * single.i_acc_bits, "additivity"
        )
    if mode == "direct":
        if p.d > DIRECT_DIM_CAP or p.rep.order**p.copies > GROUP_CAP:
            raise InstanceTooLarge(
                f"direct mode needs d^k <= {DIRECT_DIM_CAP} and |G|^k <= {GROUP_CAP}"
            )
        rep_k = tensor_power(p.rep, p.copies)
        rho0 = qalg.tensor_all([p.orbit.states[0]] * p.copies)
        orb_k = orbit(rep_k, rho0)
        res = maximize_accessible_info(rep_k, orb_k, restarts, seed)
        return ConcealingReport(res.i_acc_bits, res.phi_star, res.i_acc_bits, "direct")
    raise ValueError(f"unknown mode {mode!r}")
