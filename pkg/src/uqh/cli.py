"""Command-line front end: build, verify, decompose, phi, mtrace, quiver.

Module specs are short strings: ``S1``, ``P0``, ``V0``, ``V3``, ``V0.3+0.2j``,
``C-1``, ``sigma1``.  A trailing ``[k]`` applies the shift functor, a trailing
``^*`` takes the dual, and ``*`` between specs forms a tensor product.  A
path to a ``.json`` file loads a serialized module.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

import numpy as np

from . import decomp, mtrace, quiver, ribbon, verify
from .modules import (
    InvalidPair,
    Weight,
    dual,
    matrix_from_json,
    matrix_to_json,
    module_from_json,
    module_to_json,
    onedim_C,
    projective_P,
    shifted,
    sigma_power,
    simple_S,
    tensor_many,
    to_backend,
    typical_V,
)
from .scalar import InvalidParameter, MissingAssignment, UnsupportedExponent, make_field
from .structure import PreconditionViolation, endo_coeffs, nilpotent_x


class UsageError(ValueError):
    pass


_ATOM = re.compile(r"^(sigma|[SPVC])(.+?)(\[(-?\d+)\])?(\^\*)?$")


def _number(text):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return complex(text.replace("i", "j"))
    except ValueError:
        raise UsageError(f"cannot parse parameter {text!r}") from None


_SYMBOLS = ("α", "β", "γ", "δ")


def build_module(kind: str, params, r: int, backend: str = "exact", tol: float = 1e-9, symbol: str = "α"):
    ctx = make_field(r)
    if not params:
        raise UsageError(f"{kind} needs a parameter")
    p = _number(params[0])
    if kind == "V":
        if isinstance(p, complex):
            return typical_V(ctx, Weight.symbol(symbol), values={symbol: p}, tol=tol)
        return typical_V(ctx, p, backend=None if backend == "exact" else backend, tol=tol)
    if isinstance(p, complex):
        raise UsageError(f"{kind} needs an integer parameter")
    makers = {"S": simple_S, "P": projective_P, "C": onedim_C, "sigma": sigma_power}
    if kind not in makers:
        raise UsageError(f"unknown module kind {kind!r}")
    return makers[kind](ctx, p, backend)


def parse_module(text: str, r: int, backend: str = "exact", tol: float = 1e-9, generic=None):
    """``generic`` counts generic-weight factors so separate calls get distinct symbols."""
    generic = generic if generic is not None else [0]
    if text.endswith(".json"):
        with open(text) as fh:
            M = module_from_json(json.load(fh), tol=tol)
        if M.r != r:
            raise UsageError(f"{text} was built for r={M.r}, not r={r}")
        return M
    parts = [p for p in text.replace("⊗", "*").split("*") if p]
    if not parts:
        raise UsageError("empty module spec")
    mods = []
    for part in parts:
        m = _ATOM.match(part.strip())
        if not m:
            raise UsageError(f"cannot parse module spec {part!r}")
        kind, param, _, shift, star = m.groups()
        n = generic[0]
        M = build_module(kind, [param], r, backend, tol, _SYMBOLS[n % 4] + "'" * (n // 4))
        generic[0] += kind == "V" and not M.exact
        if shift:
            M = shifted(M, int(shift))
        if star:
            M = dual(M)
        mods.append(M)
    mods = _same_backend(mods, tol)
    return tensor_many(*mods) if len(mods) > 1 else mods[0]


def _same_backend(mods, tol):
    if len({M.backend.name for M in mods}) > 1:
        return [to_backend(M, "numeric", tol) for M in mods]
    return mods


def scalar_json(v):
    if hasattr(v, "coords"):
        out = {"coords": v.to_json()}
        q = v.rational()
        if q is not None:
            out["value"] = str(q)
        return out
    z = complex(v)
    return {"re": float(np.round(z.real, 12)) + 0.0, "im": float(np.round(z.imag, 12)) + 0.0}


def scalar_text(v) -> str:
    d = scalar_json(v)
    if "value" in d:
        return d["value"]
    if "coords" in d:
        return "[" + ", ".join(d["coords"]) + "]"
    return f"{d['re']:+.12g}{d['im']:+.12g}j"


def _emit(obj, as_json=True):
    if as_json:
        sys.stdout.write(json.dumps(obj, sort_keys=True, ensure_ascii=False) + "\n")
    else:
        sys.stdout.write(str(obj) + "\n")


# -- commands -------------------------------------------------------------------------------


def cmd_build(args):
    M = build_module(args.kind, args.params, args.r, args.backend, args.tol)
    _emit(module_to_json(M))
    return 0


def cmd_verify(args):
    names = list(verify.SUITES) if args.suite == "all" else [args.suite]
    rs = [args.r] if args.r is not None else list(range(2, 8))
    reports = verify.run_all(rs, args.seed, args.tol, names)
    failed = any(rep.overall == "fail" for rep in reports)
    if args.json:
        _emit([rep.to_json(args.timings) for rep in reports])
    else:
        for rep in reports:
            n_fail = len(rep.failed())
            _emit(f"{rep.suite} r={rep.r}: {rep.overall} ({len(rep.checks)} checks, {n_fail} failed)", False)
            for c in rep.failed():
                _emit(f"  FAIL {c.id} {c.detail}", False)
    return 1 if failed else 0


def cmd_decompose(args):
    M = parse_module(args.module, args.r, args.backend, args.tol)
    D = decomp.decompose(M, args.method)
    _emit({"labels": D.labels(), "terms": D.to_json()} if args.json else D.labels())
    return 0


def cmd_phi(args):
    generic = [0]
    V = parse_module(args.V, args.r, args.backend, args.tol, generic)
    W = parse_module(args.W, args.r, args.backend, args.tol, generic)
    V, W = _same_backend([V, W], args.tol)
    f = ribbon.open_hopf(V, W)
    B = W.backend
    if W.kind[:1] == ("P",) and W.kind[1] < W.r - 1:
        a, b = endo_coeffs(W, f)
        _emit({"a": scalar_json(a), "b": scalar_json(b)})
        return 0
    lam = f[0, 0]
    if B.equal(f, W.eye() * lam):
        _emit({"scalar": scalar_json(lam)})
    else:
        _emit({"matrix": matrix_to_json(B, f)})
    return 0


def _endo(M, spec: str, tol):
    if spec == "id":
        return M.eye()
    if spec == "x":
        return nilpotent_x(M)
    if spec == "twist":
        return ribbon.twist(M).matrix
    if spec.endswith(".json"):
        with open(spec) as fh:
            return matrix_from_json(M.backend, json.load(fh))
    raise UsageError(f"unknown endomorphism {spec!r}; use id, x, twist or a JSON matrix file")


def cmd_mtrace(args):
    M = parse_module(args.module, args.r, args.backend, args.tol)
    f = _endo(M, args.endo, args.tol)
    t = mtrace.mtrace(M, f)
    _emit({"value": scalar_json(t)} if args.json else scalar_text(t), args.json)
    return 0


def cmd_quiver(args):
    if args.parity not in (0, 1):
        raise UsageError("parity must be 0 or 1")
    z = _number(args.z)
    alg = quiver.end_sigma(args.r, args.parity)
    got = quiver.graded_trace(alg, z, args.super)
    out = {
        "r": args.r,
        "parity": args.parity,
        "super": args.super,
        "dim": alg.dim,
        "graded_dimension": str(alg.graded_dimension()),
        "trace": str(got),
        "trace_json": got.to_json(),
    }
    expected = quiver.graded_trace_expected(args.r, args.parity, z, args.super)
    if expected is not None:
        out["factorwise"] = str(expected)
    _emit(out)
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _parser():
    common = _Parser(add_help=False)
    common.add_argument("--backend", choices=["exact", "numeric"], default="exact")
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json", action="store_true")

    p = _Parser(prog="uqh", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", parents=[common], help="serialize a constructed module")
    b.add_argument("kind", choices=["S", "P", "V", "C", "sigma"])
    b.add_argument("params", nargs="+")
    b.add_argument("--r", type=int, required=True)
    b.set_defaults(fn=cmd_build)

    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("--suite", choices=[*verify.SUITES, "all"], default="all")
    v.add_argument("--r", type=int, default=None, help="defaults to 2..7 for --suite all")
    v.add_argument("--timings", action="store_true", help="include elapsed-ms in the report")
    v.set_defaults(fn=cmd_verify)

    d = sub.add_parser("decompose", parents=[common], help="indecomposable summands of a module")
    d.add_argument("module")
    d.add_argument("--r", type=int, required=True)
    d.add_argument("--method", choices=["fast", "slow"], default="fast")
    d.set_defaults(fn=cmd_decompose)

    h = sub.add_parser("phi", parents=[common], help="open Hopf link of V around W")
    h.add_argument("V")
    h.add_argument("W")
    h.add_argument("--r", type=int, required=True)
    h.set_defaults(fn=cmd_phi)

    m = sub.add_parser("mtrace", parents=[common], help="modified trace of an endomorphism")
    m.add_argument("module")
    m.add_argument("endo")
    m.add_argument("--r", type=int, required=True)
    m.set_defaults(fn=cmd_mtrace)

    q = sub.add_parser("quiver", parents=[common], help="graded trace of the endomorphism algebra")
    q.add_argument("--r", type=int, required=True)
    q.add_argument("--parity", type=int, required=True)
    q.add_argument("--z", default="1")
    q.add_argument("--super", action="store_true")
    q.set_defaults(fn=cmd_quiver)
    return p


_USER_ERRORS = (
    UsageError,
    InvalidParameter,
    InvalidPair,
    MissingAssignment,
    UnsupportedExponent,
    PreconditionViolation,
    decomp.NotInSubcategory,
    mtrace.NotInIdeal,
    OSError,
    ValueError,
    KeyError,
)


def main(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
    except UsageError as exc:
        _emit({"error": "UsageError", "message": str(exc)})
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    if getattr(args, "r", None) is not None and args.r < 2:
        _emit({"error": "InvalidParameter", "message": "r must be >= 2"})
        return 2
    try:
        return args.fn(args)
    except _USER_ERRORS as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)})
        return 2


if __name__ == "__main__":
    sys.exit(main())
