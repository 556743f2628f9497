"""Command-line front end: one verb per invocation, sorted-key JSON on stdout.

Exit codes: 0 success, 1 domain error, 2 invalid input.
"""
from __future__ import annotations

import argparse
import json
import sys

from .algebra.finite_ring import FiniteIdeal, FiniteRing, finite_ring_build
from .algebra.ideals import Ideal, groebner, ideal_op, radical_contains, same_radical
from .algebra.modules import parse_finite_module
from .algebra.poly import parse_ring
from .algebra.polymodule import parse_poly_module
from .errors import InvalidInput, TorsorError

EXIT_OK, EXIT_DOMAIN, EXIT_INVALID = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InvalidInput(message)


# ---------------------------------------------------------------- input parsing

def parse_any_ring(text: str):
    text = text.strip()
    if text.startswith(("Q[", "QQ[")) or "[" in text and "/" not in text:
        return parse_ring(text)
    return finite_ring_build(text)


def _split_gens(text: str) -> list[str]:
    return [g.strip() for g in text.split(",") if g.strip()]


def parse_ideal(ring, text: str):
    gens = _split_gens(text)
    if isinstance(ring, FiniteRing):
        return ring.ideal([ring.parse_element(g) for g in gens])
    return Ideal(ring, [ring.parse(g) for g in gens])


def parse_module(ring, text: str | None):
    text = text or "self"
    if isinstance(ring, FiniteRing):
        return parse_finite_module(ring, text)
    return parse_poly_module(ring, text)


def parse_stable_set(ring: FiniteRing, text: str):
    from .support import FiniteSpec, stable_set_from_labels
    spec = FiniteSpec(ring)
    t = text.strip()
    if t in ("", "none", "{}", "empty"):
        return spec.empty()
    if t == "all":
        return spec.full()
    if t.startswith("{") or t.startswith("["):
        try:
            obj = json.loads(t)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"bad stable-set JSON: {exc}") from None
        if isinstance(obj, dict):
            from .support import stable_set_from_json
            return stable_set_from_json(obj)
        return stable_set_from_labels(spec, obj)
    return stable_set_from_labels(spec, [p for p in t.split(";") if p.strip()] if ";" in t
                                  else _split_gens(t))


def _one_ring(args):
    if not args.ring:
        raise InvalidInput("--ring is required")
    return parse_any_ring(args.ring[0])


def _ideals(args, ring, need: int = 1):
    if len(args.ideal) < need:
        raise InvalidInput(f"at least {need} --ideal flag(s) required")
    return [parse_ideal(ring, t) for t in args.ideal]


# ---------------------------------------------------------------- output helpers

def _finite_ideal_json(I: FiniteIdeal) -> dict:
    R = I.ring
    return {"ring": R.name, "gens": [R.label(x) for x in I.canonical_gens],
            "elements": [R.label(x) for x in I.elements]}


def _submodule_json(sub) -> dict:
    from .algebra.polymodule import PolySubmodule
    if isinstance(sub, PolySubmodule):
        gens = sub.generators()
        return {"ambient": repr(sub.ambient), "generators": gens[0] if len(gens) == 1 else gens}
    M = sub.ambient
    cols = sub.basis if hasattr(sub, "basis") else sub.gens
    return {"ambient": M.name, "orders": [int(x) for x in M.orders],
            "generators": [[int(v) for v in c] for c in cols.T], "size": int(sub.size)}


# ---------------------------------------------------------------- verbs

def cmd_groebner(args) -> dict:
    ring = _one_ring(args)
    if isinstance(ring, FiniteRing):
        raise InvalidInput("groebner needs a polynomial ring")
    gens = [g for t in args.ideal for g in _split_gens(t)]
    I = groebner(Ideal(ring, gens))
    return {"ring": ring.spec, "basis": [str(g) for g in I.gb]}


def cmd_ideal(args) -> dict:
    ring = _one_ring(args)
    op = args.op
    if op in ("radical-contains", "same-radical", "contains"):
        I, J = _ideals(args, ring, 2)[:2]
        if isinstance(ring, FiniteRing):
            from .support import finite_radical_contains
            if op == "contains":
                val = J.issubset(I)
            elif op == "radical-contains":
                val = finite_radical_contains(I, J)
            else:
                val = finite_radical_contains(I, J) and finite_radical_contains(J, I)
        else:
            val = {"contains": lambda: I.contains(J), "radical-contains": lambda: radical_contains(I, J),
                   "same-radical": lambda: same_radical(I, J)}[op]()
        return {"op": op, "value": bool(val)}
    if op == "gb":
        I = _ideals(args, ring)[0]
        if isinstance(ring, FiniteRing):
            return _finite_ideal_json(I)
        return {"ring": ring.spec, "basis": [str(g) for g in I.gb]}
    I, J = _ideals(args, ring, 2)[:2]
    if isinstance(ring, FiniteRing):
        if op == "sum":
            K = I + J
        elif op == "product":
            K = I * J
        elif op == "intersection":
            K = FiniteIdeal.from_mask(ring, I.mask & J.mask)
        else:
            from .errors import UnsupportedBackend
            raise UnsupportedBackend(f"{op} is implemented for polynomial ideals only")
        return _finite_ideal_json(K)
    K = ideal_op(op, I, J)
    return {"ring": ring.spec, "gens": [str(g) for g in K.gb]}


def cmd_gamma(args) -> dict:
    from .torsion import gamma
    ring = _one_ring(args)
    ideals = _ideals(args, ring)
    M = parse_module(ring, args.module)
    sub = M
    for I in reversed(ideals):  # Γ_{I1} Γ_{I2} ... M
        sub = gamma(I, sub)
    out = _submodule_json(sub)
    out["steps"] = sub.chain.stable_index
    return out


def cmd_localcoh(args) -> dict:
    ring = _one_ring(args)
    if not args.ideal:
        raise InvalidInput("--ideal is required")
    M = parse_module(ring, args.module)
    if isinstance(ring, FiniteRing):
        from .homotopy.cech import cech_tensor
        ts = [ring.parse_element(g) for t in args.ideal for g in _split_gens(t)]
        C = cech_tensor(M, ts)
        degs = [args.degree] if args.degree is not None else list(range(len(ts) + 1))
        return {"H": [C.profile(i).to_json() for i in degs]}
    from .homotopy.graded import graded_json, graded_local_cohomology
    gens = [ring.parse(g) for t in args.ideal for g in _split_gens(t)]
    degs = [args.degree] if args.degree is not None else list(range(len(gens) + 1))
    return {"H": [graded_json(i, graded_local_cohomology(gens, M, i, args.window)) for i in degs]}


def cmd_sos(args) -> dict:
    from .support import base_of, base_to_sos, from_stable_set, SupportBase, spec_of
    ring = _one_ring(args)
    if args.stable_set:
        if not isinstance(ring, FiniteRing):
            raise InvalidInput("--stable-set needs a finite ring; use --ideal for polynomial rings")
        Z = parse_stable_set(ring, args.stable_set[0])
    else:
        I = _ideals(args, ring)[0]
        Z = base_to_sos(SupportBase(spec_of(ring), I)).stable_set
    base = base_of(Z)
    rep = base.ideal
    if isinstance(rep, FiniteIdeal):
        base_json = [ring.label(x) for x in rep.canonical_gens]
    else:
        base_json = [str(g) for g in rep.gens]
    return {"stable_set": Z.to_json(), "base_ideal": base_json,
            "system": repr(from_stable_set(Z)), "finitary": True}


def _pair_for(ring: FiniteRing, args, k: int = 0):
    from .idempotents import topology_to_idempotent
    return topology_to_idempotent(ring, parse_stable_set(ring, args.stable_set[k]))


def cmd_idem(args) -> dict:
    from .idempotents import (
        classify_idempotents, continuity_check, derived_context, fold_pair, hom_pairs, idempotent_report,
        idempotent_support, leq, parse_ring_map,
    )
    action = args.action
    if action == "continuity":
        if len(args.ring) != 2 or len(args.stable_set) != 2 or not args.map:
            raise InvalidInput("continuity needs --ring S --ring T --map IMAGES --stable-set Z_S --stable-set Z_T")
        S, T = (finite_ring_build(r) for r in args.ring)
        psi = parse_ring_map(S, T, args.map)
        rep = continuity_check(psi, parse_stable_set(S, args.stable_set[0]), parse_stable_set(T, args.stable_set[1]))
        rep["map"] = [T.label(int(x)) for x in psi.map]
        return rep
    ring = _one_ring(args)
    if not isinstance(ring, FiniteRing):
        raise InvalidInput("idempotent calculus needs a finite ring")
    ctx = derived_context(ring)
    if action == "classify":
        classes = classify_idempotents(ring)
        return {"ring": ring.name, "count": len(classes),
                "classes": [{"support": Z.to_json()["data"], "t": ring.label(p.info["t"]),
                             "homology": [pr.to_json() for pr in p.A.profiles()]}
                            for Z, p in classes]}
    if action == "check":
        if args.module:
            M = parse_finite_module(ring, args.module)
            A, alpha = fold_pair(ctx, M)
            rep = idempotent_report(ctx, A, alpha)
            rep["object"] = M.name
            return rep
        if not args.stable_set:
            raise InvalidInput("check needs --stable-set or --module")
        p = _pair_for(ring, args)
        rep = idempotent_report(ctx, p.A, p.alpha)
        rep["support"] = idempotent_support(ctx, p).to_json()["data"]
        return rep
    if action == "leq":
        if len(args.stable_set) != 2:
            raise InvalidInput("leq needs two --stable-set flags (B then A)")
        B, A = _pair_for(ring, args, 0), _pair_for(ring, args, 1)
        sB, sA = idempotent_support(ctx, B), idempotent_support(ctx, A)
        return {"leq": leq(ctx, B, A), "hom_pairs": len(hom_pairs(ctx, B, A)),
                "support_containment": sB <= sA}
    raise InvalidInput(f"unknown idem action {action!r}")


def cmd_suite(args) -> dict:
    from .suite import run_suite
    only = None
    if args.only:
        only = [int(x) for x in _split_gens(args.only)]
    return run_suite(only, echo=args.format == "text")


VERBS = {"groebner": cmd_groebner, "ideal": cmd_ideal, "gamma": cmd_gamma, "localcoh": cmd_localcoh,
         "sos": cmd_sos, "idem": cmd_idem, "suite": cmd_suite}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="torsor", description="Local cohomology and idempotent pairs over concrete rings.")
    common = _Parser(add_help=False)
    common.add_argument("--ring", action="append", default=[])
    common.add_argument("--ideal", action="append", default=[])
    common.add_argument("--module")
    common.add_argument("--window")
    common.add_argument("--degree", type=int)
    common.add_argument("--stable-set", action="append", default=[], dest="stable_set")
    common.add_argument("--map")
    common.add_argument("--format", choices=["json", "text"], default="json")
    sub = p.add_subparsers(dest="verb", parser_class=_Parser)
    for name in ("groebner", "gamma", "localcoh", "sos"):
        sub.add_parser(name, parents=[common])
    ip = sub.add_parser("ideal", parents=[common])
    ip.add_argument("op", choices=["sum", "product", "intersection", "quotient", "saturation",
                                   "contains", "radical-contains", "same-radical", "gb"])
    dp = sub.add_parser("idem", parents=[common])
    dp.add_argument("action", choices=["check", "classify", "leq", "continuity"])
    sp = sub.add_parser("suite", parents=[common])
    sp.add_argument("--only")
    return p


def emit(obj, fmt: str = "json", stream=None) -> None:
    stream = stream or sys.stdout
    if fmt == "text":
        stream.write(json.dumps(obj, sort_keys=True, indent=2, default=str) + "\n")
    else:
        stream.write(json.dumps(obj, sort_keys=True, default=str) + "\n")


def run(argv=None) -> tuple[int, dict]:
    try:
        args = build_parser().parse_args(argv)
        if not args.verb:
            raise InvalidInput("missing verb")
        result = VERBS[args.verb](args)
    except InvalidInput as exc:
        return EXIT_INVALID, {"error": exc.code, "message": str(exc)}
    except TorsorError as exc:
        return EXIT_DOMAIN, {"error": exc.code, "message": str(exc)}
    if args.verb == "suite" and not result.get("passed", False):
        return EXIT_DOMAIN, result
    return EXIT_OK, result


def main(argv=None) -> int:
    code, out = run(argv)
    fmt = "json"
    if argv is None:
        argv = sys.argv[1:]
    if "--format" in argv:
        i = argv.index("--format")
        if i + 1 < len(argv):
            fmt = argv[i + 1]
    if "error" in out:
        sys.stderr.write(f"torsor: {out['error']}: {out['message']}\n")
        fmt = "json"
    emit(out, fmt)
    return code


if __name__ == "__main__":
    sys.exit(main())
