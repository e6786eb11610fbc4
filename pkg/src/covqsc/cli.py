"""Command-line front end.

    covqsc analyze SPEC [--search] [--direct-concealing] [--restarts N] [--seed S] [--format json|text] [-o OUT]
    covqsc attack SPEC [--format json|text] [-o OUT]
    covqsc list [--format json|text]
    covqsc canon SPEC [-o OUT]

Exit codes: 0 success, 1 unreadable or malformed input, 2 the protocol
violates a modelling precondition (reducible rep, orbit size not 2^m),
64 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Any

import numpy as np

from . import qalg
from .analysis import classify
from .binding import binding_bound, evaluate_strategy, me_attack
from .concealing import DEFAULT_RESTARTS
from .errors import PreconditionError, QscError
from .grouprep import BUILTINS, builtin_rep, close_group
from .protocol import build_protocol

EXIT_OK, EXIT_IO, EXIT_PRECONDITION, EXIT_USAGE = 0, 1, 2, 64
RESTARTS_ENV = "COVQSC_RESTARTS"


class SpecFileError(QscError):
    """The protocol-definition file is malformed."""


def fmt_real(x: float) -> float:
    """Round to 12 significant digits (the shortest repr then prints exactly that)."""
    return float(f"{float(x):.12g}") + 0.0


def _complex_array(data, what: str) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SpecFileError(f"{what}: entries must be [re, im] pairs of numbers") from exc
    if arr.ndim < 2 or arr.shape[-1] != 2:
        raise SpecFileError(f"{what}: entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def _encode_array(a: np.ndarray) -> list:
    a = np.asarray(a, dtype=complex)
    return np.stack([a.real, a.imag], axis=-1).tolist()


@dataclass(frozen=True)
class ProtocolSpecFile:
    """Parsed protocol-definition file.

    Exactly one of ``builtin`` / ``generators`` is set. ``fiducial`` is a
    vector or density matrix; it is required for custom groups and for the
    ``quaternion`` builtin, and optional otherwise.
    """

    builtin: str | None = None
    generators: tuple[np.ndarray, ...] | None = None
    fiducial: np.ndarray | None = None
    copies: int = 1
    seed: int | None = None
    restarts: int | None = None

    @classmethod
    def from_dict(cls, doc: dict[str, Any]) -> "ProtocolSpecFile":
        if not isinstance(doc, dict):
            raise SpecFileError("spec file must hold a JSON object")
        unknown = set(doc) - {"builtin", "custom", "fiducial", "copies", "seed", "restarts"}
        if unknown:
            raise SpecFileError(f"unknown keys: {sorted(unknown)}")
        if ("builtin" in doc) == ("custom" in doc):
            raise SpecFileError("exactly one of 'builtin' or 'custom' must be present")
        copies = doc.get("copies", 1)
        if not isinstance(copies, int) or isinstance(copies, bool) or copies < 1:
            raise SpecFileError("'copies' must be an integer >= 1")
        seed = doc.get("seed")
        if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool) or seed < 0):
            raise SpecFileError("'seed' must be an unsigned integer")
        restarts = doc.get("restarts")
        if restarts is not None and (not isinstance(restarts, int) or restarts < 1):
            raise SpecFileError("'restarts' must be a positive integer")

        builtin = generators = None
        fid_doc = doc.get("fiducial")
        if "builtin" in doc:
            builtin = doc["builtin"]
            if builtin not in BUILTINS:
                raise SpecFileError(f"unknown builtin {builtin!r}; choose from {', '.join(BUILTINS)}")
        else:
            custom = doc["custom"]
            if not isinstance(custom, dict) or "generators" not in custom or "fiducial" not in custom:
                raise SpecFileError("'custom' needs 'generators' and 'fiducial'")
            if fid_doc is not None:
                raise SpecFileError("give the fiducial inside 'custom' only")
            fid_doc = custom["fiducial"]
            gens = [_complex_array(g, "generator") for g in custom["generators"]]
            if not gens:
                raise SpecFileError("'generators' is empty")
            d = gens[0].shape[0]
            for g in gens:
                if g.ndim != 2 or g.shape != (d, d):
                    raise SpecFileError("generators must be square matrices of equal dimension")
            generators = tuple(gens)
        fiducial = None
        if fid_doc is not None:
            fiducial = _complex_array(fid_doc, "fiducial")
            if fiducial.ndim == 2 and fiducial.shape[0] != fiducial.shape[1]:
                raise SpecFileError("fiducial density matrix must be square")
            if fiducial.ndim > 2:
                raise SpecFileError("fiducial must be an amplitude list or a density matrix")
        if builtin == "quaternion" and fiducial is None:
            raise SpecFileError("the quaternion builtin needs an explicit 'fiducial'")
        return cls(builtin, generators, fiducial, copies, seed, restarts)

    def to_dict(self) -> dict[str, Any]:
        """Canonical document; ``from_dict(to_dict())`` reproduces this spec."""
        doc: dict[str, Any] = {}
        if self.builtin is not None:
            doc["builtin"] = self.builtin
            if self.fiducial is not None:
                doc["fiducial"] = _encode_array(self.fiducial)
        else:
            doc["custom"] = {
                "generators": [_encode_array(g) for g in self.generators],
                "fiducial": _encode_array(self.fiducial),
            }
        doc["copies"] = self.copies
        if self.seed is not None:
            doc["seed"] = self.seed
        if self.restarts is not None:
            doc["restarts"] = self.restarts
        return doc

    def __eq__(self, other):
        if not isinstance(other, ProtocolSpecFile):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def build(self):
        if self.builtin is not None:
            b = builtin_rep(self.builtin)
            fid = self.fiducial if self.fiducial is not None else b.fiducial
            rep = b.rep
        else:
            rep = close_group(self.generators)
            fid = self.fiducial
        return build_protocol(rep, fid, self.copies)


def load_spec(path: str) -> ProtocolSpecFile:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SpecFileError(f"{path}: not valid JSON ({exc})") from exc
    return ProtocolSpecFile.from_dict(doc)


def _default_restarts() -> int:
    raw = os.environ.get(RESTARTS_ENV)
    return int(raw) if raw else DEFAULT_RESTARTS


def analyze_record(spec: ProtocolSpecFile, *, search: bool = False, direct: bool = False,
                   restarts: int | None = None, seed: int | None = None) -> dict[str, Any]:
    seed = seed if seed is not None else (spec.seed if spec.seed is not None else 0)
    restarts = restarts or spec.restarts or _default_restarts()
    p = spec.build()
    rep = classify(p, mode="direct" if direct else "additivity",
                   restarts=restarts, seed=seed, search=search)
    rec: dict[str, Any] = {
        "n": rep.n,
        "d": rep.d,
        "group_order": rep.group_order,
        "eigenvalues": [fmt_real(x) for x in rep.eigenvalues],
        "sum_bound": fmt_real(rep.sum_bound),
        "a_bits": fmt_real(rep.a_bits),
        "renyi_a_bits": fmt_real(rep.renyi_a_bits),
        "attack_sum": fmt_real(rep.attack_sum),
    }
    if search:
        rec["search_best_sum"] = fmt_real(rep.search_best_sum)
    rec.update(
        i_acc_bits=fmt_real(rep.i_acc_bits),
        b_bits=fmt_real(rep.b_bits),
        concealing_method=rep.concealing_method,
        classification=rep.classification,
        margin=fmt_real(rep.margin),
        seed=seed,
    )
    return rec


def attack_record(spec: ProtocolSpecFile) -> dict[str, Any]:
    p = spec.build()
    strat = me_attack(p)
    value = evaluate_strategy(p, strat)
    reduced = qalg.partial_trace(qalg.projector(strat.committed_state), strat.ancilla_dim, p.d, keep="B")
    return {
        "n": p.n,
        "d": p.d,
        "p_tilde": {x: fmt_real(v) for x, v in value.per_x.items()},
        "sum": fmt_real(value.total),
        "bound": fmt_real(binding_bound(p).sum_bound),
        "reduced_state_distance": fmt_real(np.abs(reduced - np.eye(p.d) / p.d).max()),
    }


def list_records() -> list[dict[str, Any]]:
    out = []
    for name in BUILTINS:
        b = builtin_rep(name)
        out.append({
            "name": name,
            "group_order": b.rep.order,
            "d": b.rep.d,
            "bits_per_copy": b.bits_per_copy,
            "irreducible": bool(b.rep.irreducible),
        })
    return out


def render(rec: Any, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rec, indent=2) + "\n"
    lines = []
    rows = rec if isinstance(rec, list) else [rec]
    for i, row in enumerate(rows):
        if i:
            lines.append("")
        for k, v in row.items():
            if isinstance(v, dict):
                lines.append(f"{k}:")
                lines.extend(f"  {kk}: {vv!r}" for kk, vv in v.items())
            else:
                lines.append(f"{k}: {v}")
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="covqsc", description="Group covariant quantum string commitment analysis.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def common(p, with_out=True):
        p.add_argument("--format", choices=("json", "text"), default="json")
        if with_out:
            p.add_argument("-o", "--output", help="write the report here instead of stdout")

    a = sub.add_parser("analyze", help="bounds, attack and classification for a protocol")
    a.add_argument("spec")
    a.add_argument("--search", action="store_true", help="also run the numerical adversary")
    a.add_argument("--direct-concealing", action="store_true",
                   help="maximize over the tensor-power group instead of using additivity (slow)")
    a.add_argument("--restarts", type=int)
    a.add_argument("--seed", type=int)
    common(a)

    t = sub.add_parser("attack", help="trace of the maximally entangled attack")
    t.add_argument("spec")
    common(t)

    ls = sub.add_parser("list", help="list builtin representations")
    common(ls, with_out=False)

    c = sub.add_parser("canon", help="rewrite a spec file in canonical form")
    c.add_argument("spec")
    c.add_argument("-o", "--output")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "list":
            _emit(render(list_records(), args.format), None)
            return EXIT_OK
        spec = load_spec(args.spec)
        if args.command == "canon":
            _emit(json.dumps(spec.to_dict(), indent=2) + "\n", args.output)
            return EXIT_OK
        if args.command == "analyze":
            rec = analyze_record(spec, search=args.search, direct=args.direct_concealing,
                                 restarts=args.restarts, seed=args.seed)
        else:
            rec = attack_record(spec)
        _emit(render(rec, args.format), args.output)
    except PreconditionError as exc:
        print(f"covqsc: precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (OSError, QscError) as exc:
        print(f"covqsc: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
