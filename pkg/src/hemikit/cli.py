"""Command-line front end.  Every report is one JSON document on stdout.

Exit codes: 0 when the property holds (or the command succeeded), 1 when it
fails (the witness is in the report), 2 for usage errors or invalid input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

import numpy as np

from . import filters as fl
from . import partition
from .algebra import (
    FiniteAlgebra,
    Homomorphism,
    find_center,
    load,
    validate_homomorphism,
    with_center,
)
from .axioms import ClassId, axiom_set, dump_all
from .catalog import (
    EnumerationSpec,
    catalog,
    enumerate_algebras,
    search_counterexample,
    size_cap,
)
from .classes import check_class, is_member
from .errors import HemikitError, PreconditionFailed
from .terms import check_sentence, evaluate, parse, parse_sentence, to_text
from .twist import (
    alpha,
    check_C,
    check_CK,
    map_quotient,
    map_twist,
    quotient,
    rho,
    theta,
    theta_minus,
    twist,
    twist_representable,
)

OK, FAIL, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ----------------------------------------------------------------------
# input helpers


def load_algebra(ref: str) -> FiniteAlgebra:
    """A JSON file path, or a catalog key (a trailing ``.json`` is ignored)."""
    if os.path.exists(ref):
        return load(ref)
    key = os.path.basename(ref)
    return catalog(key).algebra


def _indices(text: str, alg: Optional[FiniteAlgebra] = None) -> list:
    out = []
    for item in _split_top(text):
        item = item.strip()
        if not item:
            continue
        out.append(_element(item, alg))
    return out


def _element(item: str, alg: Optional[FiniteAlgebra]) -> int:
    try:
        return int(item)
    except ValueError:
        if alg is None:
            raise UsageError(f"expected an element index, got {item!r}") from None
        try:
            return alg.index(item)
        except (KeyError, ValueError, HemikitError):
            raise UsageError(f"unknown element {item!r}") from None


def _assignment(text: str, alg: FiniteAlgebra) -> dict:
    env = {}
    for item in _split_top(text):
        if "=" not in item:
            raise UsageError(f"bad assignment {item!r}; expected name=value")
        name, value = item.split("=", 1)
        env[name.strip()] = _element(value.strip(), alg)
    return env


def _split_top(text):
    # names like "(a,0)" contain commas; split only at top level
    depth, cur, out = 0, "", []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    if cur.strip():
        out.append(cur)
    return out


def _named(alg, xs):
    return [alg.name(int(x)) for x in xs]


# ----------------------------------------------------------------------
# commands (each returns (exit code, report))


def cmd_validate(args):
    alg = load_algebra(args.file)
    return OK, {"valid": True, "size": alg.size, "algebra": alg.to_dict()}


def cmd_check(args):
    alg = load_algebra(args.file)
    rep = check_class(alg, args.cls)
    return (OK if rep.passed else FAIL), rep.to_dict(alg)


def cmd_classify(args):
    alg = load_algebra(args.file)
    out = {}
    for cls in ClassId:
        ax = axiom_set(cls)
        if ax.requires_neg and alg.neg is None:
            continue
        out[cls.value] = is_member(alg, cls)
    return OK, {"classes": out}


def cmd_center(args):
    alg = load_algebra(args.file)
    c = find_center(alg)
    out = {"center": c}
    if c is not None:
        out["name"] = alg.name(c)
    return (OK if c is not None else FAIL), out


def cmd_twist(args):
    k = twist(load_algebra(args.file))
    return OK, k.to_dict()


def cmd_theta(args):
    alg = load_algebra(args.file)
    labels = theta_minus(alg) if args.minus else theta(alg)
    return OK, {"blocks": list(labels),
                "classes": [_named(alg, b) for b in partition.blocks(labels)]}


def cmd_quotient(args):
    q = quotient(load_algebra(args.file))
    return OK, q.to_dict()


def cmd_embed(args):
    e = rho(load_algebra(args.file))
    return OK, e.to_dict()


def cmd_alpha(args):
    h = alpha(load_algebra(args.file))
    out = h.to_dict()
    out["isomorphism"] = h.injective and h.surjective
    return (OK if out["isomorphism"] else FAIL), out


def cmd_centered(args):
    alg = load_algebra(args.file)
    rep = check_C(alg) if args.condition == "C" else check_CK(alg)
    return (OK if rep.passed else FAIL), rep.to_dict(alg)


def cmd_represent(args):
    r = twist_representable(load_algebra(args.file))
    return (OK if r.representable else FAIL), r.to_dict()


def cmd_hom(args):
    src = load_algebra(args.source)
    tgt = load_algebra(args.target)
    h = Homomorphism(src, tgt, _indices(args.map))
    rep = validate_homomorphism(h)
    if not rep.passed or args.functor is None:
        return (OK if rep.passed else FAIL), rep.to_dict()
    image = map_twist(h) if args.functor == "K" else map_quotient(h)
    out = rep.to_dict()
    out["image"] = image.to_dict()
    return OK, out


def cmd_filters(args):
    alg = load_algebra(args.file)
    if args.members is not None:
        F = fl.classify_filter(alg, _indices(args.members, alg))
        out = F.to_dict()
        if args.kind is None:
            return OK, out
        return (OK if fl.parse_kind(args.kind) in F.kinds else FAIL), out
    if args.closure is not None:
        return OK, fl.generated_filter(alg, _indices(args.closure, alg)).to_dict()
    if args.from_congruence is not None:
        F = fl.filter_of_congruence(alg, _indices(args.from_congruence))
        return OK, F.to_dict()
    if args.kind is None:
        raise UsageError("filters needs --kind, --members, --closure or "
                         "--from-congruence")
    found = fl.enumerate_filters(alg, args.kind)
    return OK, {"kind": fl.parse_kind(args.kind), "count": len(found),
                "filters": [F.to_dict() for F in found]}


def cmd_congruences(args):
    alg = load_algebra(args.file)
    if args.from_filter is not None:
        c = fl.congruence_from_filter(alg, _indices(args.from_filter, alg))
        return OK, c.to_dict()
    cons = fl.enumerate_congruences(alg)
    return OK, {"count": len(cons), "congruences": [c.to_dict() for c in cons]}


def _verify(theorem, alg):
    """Returns (holds, details)."""
    if theorem == "con-iso":
        rep = fl.verify_correspondence(alg)
        return rep.passed, rep.to_dict()
    if theorem == "kalman":
        k = twist(alg)
        t = k.algebra
        c = find_center(t)
        out = {"khil-quasi": is_member(t, ClassId.KHIL_QUASI),
               "khil-eq": is_member(t, ClassId.KHIL_EQ),
               "center": None if c is None else t.name(c),
               "CK": check_CK(t).passed if c is not None else False}
        ok = (out["khil-quasi"] and out["khil-eq"] and out["CK"]
              and c == k.index((alg.bot, alg.bot)))
        return ok, out
    if theorem == "alpha":
        h = alpha(alg)
        return h.injective and h.surjective, h.to_dict()
    if theorem == "variety":
        e, q = is_member(alg, ClassId.KHIL_EQ), is_member(alg, ClassId.KHIL_QUASI)
        return e == q, {"khil-eq": e, "khil-quasi": q}
    if theorem == "theta-minus":
        a, b = theta(alg), theta_minus(alg)
        return a == b, {"theta": list(a), "theta_minus": list(b)}
    if theorem == "center-ck":
        alg = with_center(alg)
        emb = rho(alg)
        out = {"center": alg.center, "rho_injective": emb.injective,
               "rho_surjective": emb.surjective}
        ok = emb.injective
        if alg.center is not None:
            out["C"] = check_C(alg).passed
            out["CK"] = check_CK(alg).passed
            ok = ok and out["C"] == out["CK"] == emb.surjective
        return ok, out
    kinds = {"filter-coincidence-sn": (ClassId.SN, fl.N_IMPLICATIVE),
             "filter-coincidence-sna": (ClassId.SNA, fl.OPEN)}
    cls, kind = kinds[theorem]
    if not is_member(alg, cls):
        return True, {"applies": False, "class": cls.value}
    h = [F.members for F in fl.enumerate_filters(alg, fl.H_IMPLICATIVE)]
    other = [F.members for F in fl.enumerate_filters(alg, kind)]
    return h == other, {"applies": True, "h_implicative": h,
                        kind.lower(): other}


THEOREMS = ("con-iso", "kalman", "alpha", "variety", "theta-minus",
            "center-ck", "filter-coincidence-sn", "filter-coincidence-sna")


def cmd_verify(args):
    ok, out = _verify(args.theorem, load_algebra(args.file))
    out = {"theorem": args.theorem, "holds": ok, "details": out}
    return (OK if ok else FAIL), out


def cmd_eval(args):
    alg = load_algebra(args.file)
    if alg.neg is not None:
        alg = with_center(alg)
    if args.sentence is not None:
        s = parse_sentence(args.sentence)
        rep = check_sentence(s, alg)
        return (OK if rep.passed else FAIL), rep.to_dict(alg)
    if args.term is None:
        raise UsageError("eval needs --sentence or --term")
    t = parse(args.term)
    env = _assignment(args.assign or "", alg)
    v = evaluate(t, alg, env)
    return OK, {"term": to_text(t), "value": v, "name": alg.name(v)}


def cmd_parse(args):
    t = parse(args.term)
    return OK, {"text": to_text(t), "tree": _tree(t)}


def _tree(t):
    from .terms import Bin, Const, Neg, Var
    if isinstance(t, Var):
        return {"var": t.name}
    if isinstance(t, Const):
        return {"const": t.kind}
    if isinstance(t, Neg):
        return {"op": "neg", "arg": _tree(t.arg)}
    assert isinstance(t, Bin)
    return {"op": t.op, "left": _tree(t.left), "right": _tree(t.right)}


def cmd_axioms(args):
    if args.cls is None:
        return OK, {"text": dump_all()}
    ax = axiom_set(args.cls)
    return OK, {"class": ax.name.value, "parents": [p.value for p in ax.parents],
                "sentences": [{"name": s.name, "text": s.to_text()}
                              for s in ax.sentences]}


def cmd_enumerate(args):
    spec = EnumerationSpec(ClassId.parse(args.cls), args.size,
                               limit=args.limit, up_to_iso=args.up_to_iso)
    needs_neg = axiom_set(spec.cls).requires_neg
    cap, warning = size_cap(needs_neg)
    algs = enumerate_algebras(spec, cap=cap)
    out = {"class": spec.cls.value, "size": spec.size,
           "up_to_iso": spec.up_to_iso}
    if warning:
        out["warning"] = warning
    count = 0
    listed = []
    if args.emit:
        os.makedirs(args.emit, exist_ok=True)
    for alg in algs:
        if args.emit:
            path = os.path.join(args.emit, f"{count:06d}.json")
            with open(path, "w") as fh:
                json.dump(alg.to_dict(), fh, sort_keys=True)
        elif not args.count_only:
            listed.append(alg.to_dict())
        count += 1
    out["count"] = count
    if args.emit:
        out["emitted"] = args.emit
    elif not args.count_only:
        out["algebras"] = listed
    return OK, out


def cmd_search(args):
    found = search_counterexample(args.property, args.max_size,
                                      up_to_iso=not args.all_labelings)
    out = {"property": args.property, "max_size": args.max_size,
           "counterexample": None if found is None else found.to_dict()}
    return (OK if found is None else FAIL), out


def cmd_catalog(args):
    if args.key is None:
        return OK, {"entries": [{"key": e.key, "provenance": e.provenance,
                                 "size": e.algebra.size}
                                for e in catalog()]}
    return OK, catalog(args.key).to_dict()


# ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hemikit", description=__doc__.splitlines()[0])
    p.add_argument("--pretty", action="store_true", help="indent the JSON output")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, func, help_text, file=True):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS,
                        help="indent the JSON output")
        if file:
            sp.add_argument("file", help="algebra JSON file or catalog key")
        sp.set_defaults(func=func)
        return sp

    add("validate", cmd_validate, "load and validate an algebra")
    sp = add("check", cmd_check, "check membership in a class")
    sp.add_argument("--class", dest="cls", required=True)
    add("classify", cmd_classify, "membership in every applicable class")
    add("center", cmd_center, "fixed point of ~")
    add("twist", cmd_twist, "twist product K(A)")
    sp = add("theta", cmd_theta, "the relation x->y = 1 = y->x")
    sp.add_argument("--minus", action="store_true",
                    help="use the negative-element relation instead")
    add("quotient", cmd_quotient, "quotient by theta")
    add("embed", cmd_embed, "rho into the twist of the quotient")
    add("alpha", cmd_alpha, "alpha onto the quotient of the twist")
    sp = add("centered", cmd_centered, "conditions C and CK")
    sp.add_argument("--condition", choices=("C", "CK"), default="CK")
    add("represent", cmd_represent, "is the algebra a twist product?")
    sp = add("hom", cmd_hom, "check a map between algebras", file=False)
    sp.add_argument("source")
    sp.add_argument("target")
    sp.add_argument("--map", required=True, help="comma-separated images")
    sp.add_argument("--functor", choices=("K", "C"),
                    help="also report the image under the twist (K) or "
                         "quotient (C) construction")
    sp = add("filters", cmd_filters, "enumerate or classify filters")
    sp.add_argument("--kind")
    sp.add_argument("--members", help="classify this subset instead")
    sp.add_argument("--closure", help="least h-implicative filter containing it")
    sp.add_argument("--from-congruence", help="block labeling; report its top block")
    sp = add("congruences", cmd_congruences, "enumerate congruences")
    sp.add_argument("--from-filter", help="members of an h-implicative filter")
    sp = add("verify", cmd_verify, "check one theorem on this algebra")
    sp.add_argument("--theorem", required=True, choices=THEOREMS)
    sp = add("eval", cmd_eval, "evaluate a term or decide a sentence")
    sp.add_argument("--sentence")
    sp.add_argument("--term")
    sp.add_argument("--assign", help="x=i,y=j,... (indices or names)")
    sp = add("parse", cmd_parse, "parse a term", file=False)
    sp.add_argument("--term", required=True)
    sp = add("axioms", cmd_axioms, "print axiom sets", file=False)
    sp.add_argument("--class", dest="cls")
    sp = add("enumerate", cmd_enumerate, "all algebras of a class and size",
             file=False)
    sp.add_argument("--class", dest="cls", required=True)
    sp.add_argument("--size", type=int, required=True)
    sp.add_argument("--limit", type=int)
    sp.add_argument("--up-to-iso", action="store_true")
    sp.add_argument("--emit", metavar="DIR")
    sp.add_argument("--count-only", action="store_true")
    sp = add("search", cmd_search, "look for a counterexample", file=False)
    sp.add_argument("--property", required=True)
    sp.add_argument("--max-size", type=int, required=True)
    sp.add_argument("--all-labelings", action="store_true",
                    help="do not deduplicate up to isomorphism")
    sp = add("catalog", cmd_catalog, "named example algebras", file=False)
    sp.add_argument("key", nargs="?")
    return p


def _error(kind, message, **details):
    return {"error": {"type": kind, "message": message, **details}}


def run(argv: Optional[Sequence[str]] = None):
    """Returns ``(exit code, report dict, pretty flag)``."""
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    pretty = "--pretty" in argv
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("missing subcommand")
        code, out = args.func(args)
    except UsageError as e:
        return USAGE, _error("UsageError", str(e)), pretty
    except PreconditionFailed as e:
        return FAIL, {"error": e.to_dict()}, pretty
    except HemikitError as e:
        return USAGE, {"error": e.to_dict()}, pretty
    except (OSError, json.JSONDecodeError, ValueError) as e:
        return USAGE, _error(type(e).__name__, str(e)), pretty
    return code, out, pretty


def _default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    raise TypeError(f"not serializable: {type(obj).__name__}")


def render(out, pretty=False) -> str:
    return json.dumps(out, sort_keys=True, indent=2 if pretty else None,
                      default=_default)


def main(argv: Optional[Sequence[str]] = None) -> int:
    code, out, pretty = run(argv)
    sys.stdout.write(render(out, pretty) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
