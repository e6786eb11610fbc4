"""Group covariant string-commitment protocols.

A protocol is a per-copy irreducible representation, the orbit of a
fiducial state under it, and a copy count ``k``. Strings of ``n = k * m``
bits are split into ``k`` blocks of ``m`` bits; each block selects one orbit
state and the commitment is their tensor product.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import qalg
from .errors import InvalidState, NotCovariant, OrbitSizeError
from .grouprep import TETRAHEDRAL_STATES, OrbitTable, ProjectiveRep, is_irreducible, orbit

RANK_TOL = 1e-9


def _purify(rho: np.ndarray) -> tuple[np.ndarray, int]:
    """Minimal purification ``sum_a sqrt(lam_a) |a>_A ⊗ |u_a>_B``; returns (psi, dimA)."""
    lam, vecs = qalg.eig_hermitian(rho, density=True)
    keep = lam > RANK_TOL
    lam, vecs = lam[keep], vecs[:, keep]
    r, d = len(lam), rho.shape[0]
    psi = np.zeros((r, d), dtype=complex)
    for a in range(r):
        psi[a] = np.sqrt(lam[a]) * vecs[:, a]
    psi = psi.reshape(-1)
    return psi / np.linalg.norm(psi), r


def bits_to_str(bits) -> str:
    return "".join(str(int(b)) for b in bits)


def parse_bits(x, n: int) -> str:
    s = x if isinstance(x, str) else bits_to_str(x)
    if len(s) != n or set(s) - {"0", "1"}:
        raise ValueError(f"expected a {n}-bit string, got {x!r}")
    return s


@dataclass(frozen=True)
class QscProtocol:
    rep: ProjectiveRep
    orbit: OrbitTable
    copies: int
    bits_per_copy: int
    label_map: dict[str, int]
    purifications: tuple[np.ndarray, ...] = field(repr=False)
    purification_dims: tuple[int, ...] = field(repr=False)

    @property
    def n(self) -> int:
        return self.copies * self.bits_per_copy

    @property
    def d1(self) -> int:
        """Per-copy dimension."""
        return self.rep.d

    @property
    def d(self) -> int:
        """Dimension of Bob's full system ``H_B``."""
        return self.rep.d**self.copies

    @property
    def prior(self) -> float:
        return 2.0 ** (-self.n)

    @cached_property
    def strings(self) -> list[str]:
        return [format(i, f"0{self.n}b") for i in range(2**self.n)] if self.n else [""]

    def blocks(self, x) -> list[int]:
        """Orbit-state index of each copy selected by ``x``."""
        s = parse_bits(x, self.n)
        m = self.bits_per_copy
        return [self.label_map[s[i * m:(i + 1) * m]] for i in range(self.copies)]

    @cached_property
    def single_copy_eigenvalues(self) -> np.ndarray:
        lam, _ = qalg.eig_hermitian(self.orbit.states[0], density=True)
        return lam

    @cached_property
    def is_pure(self) -> bool:
        return bool(self.single_copy_eigenvalues[1:].sum() <= RANK_TOL)


def build_protocol(rep: ProjectiveRep, fiducial, copies: int = 1) -> QscProtocol:
    """Assemble a covariant protocol from an irreducible rep and a fiducial state.

    ``fiducial`` is a state vector or a density matrix. Orbit states are
    labelled by bit strings in discovery order, the fiducial receiving 0...0.
    """
    if copies < 1:
        raise ValueError("copies must be >= 1")
    fid = np.asarray(fiducial, dtype=complex)
    rho0 = qalg.projector(qalg.as_state(fid)) if fid.ndim == 1 else qalg.as_density(fid)
    if rho0.shape[0] != rep.d:
        raise InvalidState(f"fiducial dimension {rho0.shape[0]} != rep dimension {rep.d}")
    if not is_irreducible(rep):
        raise NotCovariant(
            "not a group covariant protocol: representation is reducible "
            "(Schur twirl is not proportional to the identity)"
        )
    orb = orbit(rep, rho0)
    size = len(orb)
    m = size.bit_length() - 1
    if size < 2 or 2**m != size:
        raise OrbitSizeError(f"cannot label with bit strings: orbit size is {size}")
    labels = {format(i, f"0{m}b"): i for i in range(size)}
    if rep.name == "tetrahedral":
        _check_tetrahedral_labels(orb, labels)
    pur, dims = zip(*(_purify(s) for s in orb.states))
    return QscProtocol(
        rep=rep,
        orbit=orb,
        copies=copies,
        bits_per_copy=m,
        label_map=labels,
        purifications=tuple(pur),
        purification_dims=tuple(dims),
    )


def _check_tetrahedral_labels(orb: OrbitTable, labels: dict[str, int]) -> None:
    for i, (xy, idx) in enumerate(sorted(labels.items())):
        want = qalg.projector(TETRAHEDRAL_STATES[i])
        if np.abs(orb.states[idx] - want).max() > 1e-8:
            raise InvalidState(f"tetrahedral label {xy} does not match |xi;{xy}>")


def commitment_state(p: QscProtocol, x) -> np.ndarray:
    """Bob's state ``rho_x`` after an honest commit of ``x``."""
    return qalg.tensor_all([p.orbit.states[s] for s in p.blocks(x)])


def purification(p: QscProtocol, x) -> tuple[np.ndarray, int]:
    """Honest ``|psi_x>`` on ``H_A ⊗ H_B`` and its ancilla dimension.

    Per-copy purifications are tensored and regrouped so that all ancilla
    factors come first.
    """
    blocks = p.blocks(x)
    psis = [p.purifications[s].reshape(p.purification_dims[s], p.d1) for s in blocks]
    dimA = int(np.prod([p.purification_dims[s] for s in blocks]))
    t = psis[0]
    for nxt in psis[1:]:
        # (A..., B...) x (a, b) -> (A..., a, B..., b)
        t = np.einsum("ij,kl->ikjl", t, nxt).reshape(t.shape[0] * nxt.shape[0], -1)
    return t.reshape(-1), dimA


def honest_run(p: QscProtocol, x) -> float:
    """Probability that honest Bob accepts an honest commit-and-reveal of ``x``.

    Alice keeps the ancilla half of ``|psi_x>`` and sends Bob the rest; at reveal
    she hands over the ancilla and Bob projects the joint state onto ``|psi_x>``.
    """
    psi, _ = purification(p, x)
    joint = qalg.projector(psi)
    test = qalg.projector(psi)
    return float(np.trace(test @ joint).real)


@dataclass(frozen=True)
class LockcomSpec:
    """Random-unitary commitment: send ``U_i |x>`` for a secret uniform ``i``."""

    n: int
    unitaries: tuple[np.ndarray, ...]

    def __post_init__(self):
        us = tuple(qalg.as_matrix(u) for u in self.unitaries)
        if not us:
            raise ValueError("need R >= 1 unitaries")
        dim = 2**self.n
        for u in us:
            if u.shape != (dim, dim) or np.abs(u.conj().T @ u - np.eye(dim)).max() > 1e-10:
                raise InvalidState(f"LOCKCOM unitaries must be {dim}x{dim} unitary")
        object.__setattr__(self, "unitaries", us)


def from_lockcom(spec: LockcomSpec) -> dict[str, tuple[np.ndarray, int]]:
    """Purified commitment family ``|psi_x> = R^{-1/2} sum_i |i>_A ⊗ U_i|x>_B``.

    Returns ``{x: (psi_x, dimA)}``. With ``R = 1`` the ancilla is trivial.
    """
    R = len(spec.unitaries)
    dim = 2**spec.n
    out = {}
    for xi in range(dim):
        x = format(xi, f"0{spec.n}b")
        rows = np.array([u[:, xi] for u in spec.unitaries]) / np.sqrt(R)
        out[x] = (rows.reshape(-1), R)
    return out
