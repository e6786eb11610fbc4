"""Finite unitary groups modulo global phase.

Groups are closed from generators, deduplicated up to a phase, and checked
for irreducibility with the Schur twirl. Orbits of density operators under
conjugation supply the commitment-state families.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import qalg
from .errors import GroupTooLarge, InvalidState, QscError

DEDUP_TOL = 1e-8
GROUP_CAP = 10000
OMEGA = np.exp(2j * np.pi / 3)

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

# The four tetrahedral qubit states, labelled 00, 01, 10, 11.
TETRAHEDRAL_STATES = np.array(
    [
        [1, 0],
        [np.sqrt(1 / 3), np.sqrt(2 / 3)],
        [np.sqrt(1 / 3), np.sqrt(2 / 3) * OMEGA],
        [np.sqrt(1 / 3), np.sqrt(2 / 3) * OMEGA**2],
    ],
    dtype=complex,
)


def phase_canonical(m: np.ndarray) -> np.ndarray:
    """Rotate ``m`` so its first sizeable entry is real and positive."""
    flat = m.reshape(-1)
    big = np.flatnonzero(np.abs(flat) > 1e-4 * np.abs(flat).max())
    return m * np.exp(-1j * np.angle(flat[big[0]]))


def _key(m: np.ndarray) -> bytes:
    r = np.round(m, 7) + 0.0
    return r.tobytes()


class ProjectiveRep:
    """A finite group of ``d x d`` unitaries, each stored up to a global phase.

    ``elements[0]`` is the identity. ``mult_table[g, h]`` is the index of the
    element proportional to ``D(g) @ D(h)``.
    """

    def __init__(self, elements, mult_table=None, name: str = "", factors=None):
        self.elements = np.array(elements, dtype=complex)
        self.elements.setflags(write=False)
        self.name = name
        self._factors = factors
        if mult_table is not None:
            t = np.array(mult_table, dtype=np.int64)
            t.setflags(write=False)
            self.__dict__["mult_table"] = t

    @property
    def d(self) -> int:
        return self.elements.shape[1]

    @property
    def order(self) -> int:
        return self.elements.shape[0]

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<ProjectiveRep{label} order={self.order} d={self.d}>"

    @cached_property
    def _lookup(self) -> dict[bytes, int]:
        return {_key(phase_canonical(m)): i for i, m in enumerate(self.elements)}

    def index_of(self, m: np.ndarray) -> int | None:
        """Index of the element equal to ``m`` up to phase, or ``None``."""
        c = phase_canonical(np.asarray(m, dtype=complex))
        i = self._lookup.get(_key(c))
        if i is not None and np.max(np.abs(phase_canonical(self.elements[i]) - c)) <= DEDUP_TOL:
            return i
        # rounding-boundary fallback
        diffs = np.abs(
            np.array([phase_canonical(e) for e in self.elements]) - c
        ).reshape(self.order, -1).max(axis=1)
        j = int(np.argmin(diffs))
        return j if diffs[j] <= DEDUP_TOL else None

    @cached_property
    def mult_table(self) -> np.ndarray:
        if self._factors is not None:
            base, k = self._factors
            table = _product_table(base.mult_table, k)
        else:
            n = self.order
            table = np.empty((n, n), dtype=np.int64)
            for g in range(n):
                prods = self.elements[g] @ self.elements
                for h in range(n):
                    idx = self.index_of(prods[h])
                    if idx is None:
                        raise QscError(f"element set not closed: D({g})D({h}) is missing")
                    table[g, h] = idx
        table.setflags(write=False)
        return table

    @cached_property
    def inverse_table(self) -> np.ndarray:
        if self._factors is not None:
            base, k = self._factors
            digits = _digits(np.arange(self.order), base.order, k)
            inv = _undigits(base.inverse_table[digits], base.order)
        else:
            inv = np.array(
                [self.index_of(e.conj().T) for e in self.elements], dtype=np.int64
            )
        inv.setflags(write=False)
        return inv

    @cached_property
    def irreducible(self) -> bool:
        return is_irreducible(self)

    def twirl(self, m: np.ndarray) -> np.ndarray:
        """Group average ``(1/|G|) sum_g D(g) m D(g)^dagger``."""
        D = self.elements
        return np.einsum("gij,jk,glk->il", D, m, D.conj()) / self.order


def _digits(idx: np.ndarray, base: int, k: int) -> np.ndarray:
    out = np.empty(idx.shape + (k,), dtype=np.int64)
    rem = idx.copy()
    for pos in range(k - 1, -1, -1):
        out[..., pos] = rem % base
        rem //= base
    return out


def _undigits(digits: np.ndarray, base: int) -> np.ndarray:
    out = np.zeros(digits.shape[:-1], dtype=np.int64)
    for pos in range(digits.shape[-1]):
        out = out * base + digits[..., pos]
    return out


def _product_table(table: np.ndarray, k: int) -> np.ndarray:
    n = table.shape[0]
    idx = np.arange(n**k)
    dg = _digits(idx, n, k)
    prod = table[dg[:, None, :], dg[None, :, :]]
    return _undigits(prod, n)


def close_group(generators, cap: int = GROUP_CAP, name: str = "") -> ProjectiveRep:
    """Close a set of unitary generators into a finite group modulo phase.

    Elements are discovered breadth-first from the identity by left
    multiplication with the generators in the order given.
    """
    gens = [qalg.as_matrix(g) for g in generators]
    if not gens:
        raise ValueError("need at least one generator")
    d = gens[0].shape[0]
    for g in gens:
        if g.shape != (d, d):
            raise InvalidState("generators must all be square of the same dimension")
        if np.max(np.abs(g.conj().T @ g - np.eye(d))) > 1e-10:
            raise InvalidState("generator is not unitary")

    elements = [np.eye(d, dtype=complex)]
    seen = {_key(phase_canonical(elements[0])): 0}
    head = 0
    while head < len(elements):
        cur = elements[head]
        head += 1
        for s in gens:
            new = phase_canonical(s @ cur)
            k = _key(new)
            if k in seen:
                continue
            seen[k] = len(elements)
            elements.append(new)
            if len(elements) > cap:
                raise GroupTooLarge(
                    f"group too large or not finite: more than {cap} elements"
                )
    return ProjectiveRep(elements, name=name)


@dataclass(frozen=True)
class RepCheck:
    ok: bool
    max_defect: float


def is_projective_rep(rep: ProjectiveRep, tol: float = 1e-9) -> RepCheck:
    """Check ``D(g)D(h) = e^{i theta} D(gh)`` for every pair, reporting the worst defect."""
    D = rep.elements
    table = rep.mult_table
    worst = 0.0
    for g in range(rep.order):
        prods = D[g] @ D
        target = D[table[g]]
        overlap = np.einsum("hij,hij->h", target.conj(), prods)
        phase = np.exp(1j * np.angle(overlap))
        defect = np.abs(prods - phase[:, None, None] * target).max()
        worst = max(worst, float(defect))
    unitary = max(
        float(np.abs(e.conj().T @ e - np.eye(rep.d)).max()) for e in D
    )
    worst = max(worst, unitary)
    return RepCheck(ok=worst <= tol, max_defect=worst)


def is_irreducible(rep: ProjectiveRep, tol: float = 1e-9) -> bool:
    """Schur test: the twirl of every matrix unit ``E_ij`` must equal ``delta_ij I/d``."""
    D = rep.elements
    d = rep.d
    # twirled[i, j] = twirl(E_ij)
    twirled = np.einsum("gai,gbj->ijab", D, D.conj()) / rep.order
    expected = np.einsum("ij,ab->ijab", np.eye(d), np.eye(d)) / d
    return bool(np.abs(twirled - expected).max() <= tol)


@dataclass(frozen=True)
class OrbitTable:
    """Distinct images of a seed state and the group action on them.

    ``action[g, s]`` is the index of ``D(g) states[s] D(g)^dagger``.
    """

    states: np.ndarray
    action: np.ndarray
    transitive: bool
    stabilizer_order: int

    def __len__(self) -> int:
        return len(self.states)


def orbit(rep: ProjectiveRep, rho0) -> OrbitTable:
    rho0 = qalg.as_density(rho0)
    if rho0.shape[0] != rep.d:
        raise InvalidState(f"state dimension {rho0.shape[0]} does not match rep dimension {rep.d}")
    D = rep.elements
    images = np.einsum("gij,jk,glk->gil", D, rho0, D.conj())
    states: list[np.ndarray] = []
    lookup: dict[bytes, int] = {}

    def find(m):
        i = lookup.get(_key(m))
        if i is not None:
            return i
        for j, s in enumerate(states):
            if np.max(np.abs(s - m)) <= DEDUP_TOL:
                return j
        return None

    for img in images:
        if find(img) is None:
            lookup[_key(img)] = len(states)
            states.append(img)

    action = np.empty((rep.order, len(states)), dtype=np.int64)
    for s, st in enumerate(states):
        moved = np.einsum("gij,jk,glk->gil", D, st, D.conj())
        for g in range(rep.order):
            j = find(moved[g])
            if j is None:
                raise QscError("orbit not closed under the group action")
            action[g, s] = j
    states_arr = np.array(states)
    states_arr.setflags(write=False)
    action.setflags(write=False)
    return OrbitTable(
        states=states_arr,
        action=action,
        transitive=True,
        stabilizer_order=rep.order // len(states),
    )


def tensor_power(rep: ProjectiveRep, k: int, cap: int = GROUP_CAP) -> ProjectiveRep:
    """The direct-product group ``G^k`` acting by ``D(g_1) ⊗ ... ⊗ D(g_k)``.

    Elements are in lexicographic order of ``(g_1, ..., g_k)``.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        return rep
    if rep.order**k > cap:
        raise GroupTooLarge(
            f"|G|^k = {rep.order}^{k} exceeds {cap}; use the additivity path for concealing"
        )
    elements = []
    for combo in itertools.product(range(rep.order), repeat=k):
        elements.append(qalg.tensor_all([rep.elements[i] for i in combo]))
    name = f"{rep.name}^{k}" if rep.name else ""
    return ProjectiveRep(elements, name=name, factors=(rep, k))


def direct_sum(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros((a.shape[0] + b.shape[0],) * 2, dtype=complex)
    out[: a.shape[0], : a.shape[0]] = a
    out[a.shape[0]:, a.shape[0]:] = b
    return out


def tetrahedral_generators() -> list[np.ndarray]:
    a = np.diag([1, OMEGA])
    b = -1j * (np.sqrt(2 / 3) * PAULI_X + np.sqrt(1 / 3) * PAULI_Z)
    return [a, b]


BUILTINS = ("tetrahedral", "pauli2", "quaternion", "reducible_demo")


@dataclass(frozen=True)
class Builtin:
    rep: ProjectiveRep
    fiducial: np.ndarray | None
    bits_per_copy: int


def builtin_rep(name: str) -> Builtin:
    """Named fixture groups.

    ``quaternion`` shares the Pauli group with ``pauli2`` but carries no
    fiducial; callers supply one (typically a mixed state).
    """
    if name == "tetrahedral":
        rep = close_group(tetrahedral_generators(), name=name)
        fid = TETRAHEDRAL_STATES[0].copy()
        orb = orbit(rep, qalg.projector(fid))
        expected = np.array([qalg.projector(s) for s in TETRAHEDRAL_STATES])
        if len(orb) != 4 or np.abs(orb.states - expected).max() > 1e-8:
            raise QscError("tetrahedral builder does not reproduce the |xi;xy> states")
        return Builtin(rep, fid, 2)
    if name == "pauli2":
        rep = close_group([1j * PAULI_X, 1j * PAULI_Z], name=name)
        return Builtin(rep, np.array([1, 0], dtype=complex), 1)
    if name == "quaternion":
        rep = close_group([1j * PAULI_X, 1j * PAULI_Z], name=name)
        return Builtin(rep, None, 1)
    if name == "reducible_demo":
        gens = [direct_sum(g, g) for g in tetrahedral_generators()]
        rep = close_group(gens, name=name)
        return Builtin(rep, np.array([1, 0, 0, 0], dtype=complex), 2)
    raise KeyError(f"unknown builtin {name!r}; choose from {', '.join(BUILTINS)}")
