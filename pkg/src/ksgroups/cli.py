"""Command-line entry point.

Every command prints a report: ``{"command", "inputs", "result", "lemma_refs"}``
with ``--json``, or a short human summary otherwise.  Exit codes: 0 success,
1 domain error (payload names the error), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Any, Sequence

from . import checks as checks_mod
from .corpus import corpus_specs, named_group, parse_named
from .endo import classify_normal_endo, enumerate_endomorphisms, fitting_decomposition, is_normal_endomorphism
from .errors import GroupError, OrderBudgetExceeded, PreconditionViolated
from .groups import (
    DEFAULT_ORDER_BUDGET,
    FiniteGroup,
    GroupHom,
    make_normal_subgroup,
)
from .io import digest, group_from_json, group_to_json, load_json, tower_from_json, tower_to_json
from .iso import find_isomorphism, fingerprint
from .krull_schmidt import cancel_factor, decompose, factor_group, indecomposability, split_with_factor
from .search import DEFAULT_SEARCH_BUDGET
from .tower import (
    FiberPowerSpec,
    ProfiniteTower,
    fiber_power,
    fin_images,
    same_fin,
    tower_decompose,
    validate_tower,
    verbal_quotient_tower,
    verify_image,
    w_bound,
)


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# input handling


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _load_group_arg(value: str, budget: int = DEFAULT_ORDER_BUDGET) -> tuple[FiniteGroup, dict]:
    """A group from a JSON file path, or from a named spec when no such file exists."""
    if os.path.exists(value):
        obj = load_json(value)
        G = group_from_json(obj, budget)
        return G, {"source": value, "order": G.order, "digest": digest(group_to_json(G))}
    if ":" in value or value in ("trivial", "quaternion"):
        return _named(value)
    raise UsageError(f"no such file: {value}")


def _named(spec: str) -> tuple[FiniteGroup, dict]:
    G = named_group(parse_named(spec))
    return G, {"source": f"named {spec}", "order": G.order, "digest": digest(group_to_json(G))}


def _groups(args: argparse.Namespace, count: int | None) -> list[tuple[FiniteGroup, dict]]:
    out = [_load_group_arg(p) for p in args.files] + [_named(s) for s in args.named or []]
    if count is not None and len(out) != count:
        raise UsageError(f"{args.command} needs exactly {count} group(s) (files or --named), got {len(out)}")
    return out


def _load_tower(path: str) -> tuple[ProfiniteTower, dict]:
    if not os.path.exists(path):
        raise UsageError(f"no such file: {path}")
    t = tower_from_json(load_json(path))
    return t, {"source": path, "depth": len(t), "digest": digest(tower_to_json(t))}


def _towers(args: argparse.Namespace, count: int) -> list[tuple[ProfiniteTower, dict]]:
    out = [_load_tower(p) for p in args.files]
    if args.verbal_of:
        if not args.exponents:
            raise UsageError("--verbal-of needs --exponents")
        G, _ = _named(args.verbal_of)
        t = verbal_quotient_tower(G, _int_list(args.exponents))
        out.append((t, {"source": f"verbal quotients of {args.verbal_of} by {args.exponents}",
                        "depth": len(t), "digest": digest(tower_to_json(t))}))
    if len(out) != count:
        raise UsageError(f"tower {args.action} needs exactly {count} tower(s), got {len(out)}")
    return out


# ---------------------------------------------------------------------------
# payload helpers


def _factor_json(F) -> dict:
    H = factor_group(F)[0]
    return {"order": F.order, "fingerprint": fingerprint(H).to_json(), "members": list(F.members)}


def _describe(G: FiniteGroup) -> str:
    fp = fingerprint(G)
    if G.order == 1:
        return "trivial"
    if fp.element_order_histogram[-1][0] == G.order:
        return f"C{G.order}"
    return f"order {G.order} {'abelian' if fp.abelian else 'non-abelian'}"


def _hom_from_vector(G: FiniteGroup, text: str) -> GroupHom:
    img = _int_list(text)
    if len(img) != G.order or any(not 0 <= x < G.order for x in img):
        raise PreconditionViolated(f"--endo needs {G.order} entries in 0..{G.order - 1}")
    return GroupHom(G, G, img)


def _classification_json(f: GroupHom) -> dict:
    c = classify_normal_endo(f)
    return {"kind": c.kind.value, "nilpotency_index": c.nilpotency_index, "fitting_exponent": c.fitting_exponent}


def _subgroup_arg(G: FiniteGroup, text: str | None, default: Sequence[int]):
    members = default if text is None else _int_list(text)
    return make_normal_subgroup(G, members)


def _fiber_spec(args: argparse.Namespace) -> tuple[FiberPowerSpec, dict]:
    (G, info), = _groups(args, 1)
    spec = FiberPowerSpec(
        G,
        _subgroup_arg(G, args.g0, range(G.order)),
        _subgroup_arg(G, args.m0, (0,)),
        args.power,
        _subgroup_arg(G, args.kernel, (0,)),
    )
    return spec, info


# ---------------------------------------------------------------------------
# commands; each returns (inputs, result, lemma_refs, human text, exit code)


def cmd_decompose(args):
    (G, info), = _groups(args, 1)
    if G.order > args.max_order:
        raise OrderBudgetExceeded(f"group order {G.order} exceeds --max-order {args.max_order}")
    d = decompose(G)
    rep = indecomposability(G)
    result = {"factors": [_factor_json(F) for F in d.factors], "indecomposable": rep.indecomposable,
              "trivial": rep.trivial}
    text = f"order {G.order}: " + (" x ".join(_describe(factor_group(F)[0]) for F in d.factors) or "trivial")
    if rep.indecomposable and not rep.trivial:
        text += " (indecomposable)"
    return [info], result, ["Krull-Schmidt existence"], text, 0


def cmd_iso(args):
    (G, a), (H, b) = _groups(args, 2)
    w = find_isomorphism(G, H, budget=args.budget)
    result = {"isomorphic": w is not None, "witness": None if w is None else w.image_of.tolist()}
    text = "isomorphic: " + " ".join(map(str, w.image_of.tolist())) if w is not None else "not isomorphic"
    return [a, b], result, ["isomorphism search"], text, 0


def cmd_fitting(args):
    (G, info), = _groups(args, 1)
    f = _hom_from_vector(G, args.endo)
    split = fitting_decomposition(f)
    result = {
        "normal": True,
        "exponent": split.exponent,
        "kernel_part": list(split.kernel_part.members),
        "image_part": list(split.image_part.members),
        "classification": _classification_json(f),
    }
    text = (f"exponent {split.exponent}: |ker f^n| = {split.kernel_part.order}, "
            f"|Im f^n| = {split.image_part.order}; {result['classification']['kind']}")
    return [info], result, ["Fitting's lemma", "automorphism-or-nilpotent dichotomy"], text, 0


def cmd_normal_endos(args):
    (G, info), = _groups(args, 1)
    all_endos = enumerate_endomorphisms(G, max_order=args.max_order)
    normal = [f for f in all_endos if is_normal_endomorphism(f)]
    items = [{"images": f.image_of.tolist(), **_classification_json(f)} for f in normal]
    kinds: dict[str, int] = {}
    for it in items:
        kinds[it["kind"]] = kinds.get(it["kind"], 0) + 1
    result = {"endomorphisms": len(all_endos), "normal": len(normal), "kinds": kinds, "normal_endomorphisms": items}
    text = f"{len(all_endos)} endomorphisms, {len(normal)} normal: " + \
        ", ".join(f"{k} {v}" for k, v in sorted(kinds.items()))
    return [info], result, ["normal endomorphisms", "Fitting's lemma"], text, 0


def cmd_cancel(args):
    X, a = _load_group_arg(args.x)
    Y, b = _load_group_arg(args.y)
    sx = split_with_factor(X, args.g_order)
    if sx is None:
        raise PreconditionViolated(f"X has no direct factor of order {args.g_order}")
    gx = factor_group(sx[0].factors[sx[1]])[0]
    sy = split_with_factor(Y, args.g_order, like=gx)
    if sy is None:
        raise PreconditionViolated(f"Y has no direct factor of order {args.g_order} isomorphic to X's")
    w = cancel_factor(X, sx[0], sx[1], Y, sy[0], sy[1], budget=args.budget)
    other = lambda d, i: [list(F.members) for k, F in enumerate(d.factors) if k != i]  # noqa: E731
    result = {
        "g_order": args.g_order,
        "g_part_x": list(sx[0].factors[sx[1]].members),
        "g_part_y": list(sy[0].factors[sy[1]].members),
        "complement_x": other(*sx),
        "complement_y": other(*sy),
        "complement_order": w.source.order,
        "witness": w.image_of.tolist(),
    }
    text = f"complements of order {w.source.order} are isomorphic: " + " ".join(map(str, w.image_of.tolist()))
    return [a, b], result, ["cancellation of finite direct factors", "Krull-Schmidt uniqueness"], text, 0


def cmd_tower(args):
    action = args.action
    if action == "validate":
        (t, info), = _towers(args, 1)
        rep = validate_tower(t)
        result = {"valid": rep.valid, "violations": list(rep.violations),
                  "orders": [L.order for L in t.levels]}
        text = "valid" if rep.valid else "invalid:\n  " + "\n  ".join(rep.violations)
        return [info], result, ["inverse systems"], text, 0
    if action == "decompose":
        (t, info), = _towers(args, 1)
        cd = tower_decompose(t, budget=args.budget)
        result: dict[str, Any] = {
            "levels": [{"level": k + 1, "factors": [{"order": F.order, "members": list(F.members)}
                                                    for F in d.factors]} for k, d in enumerate(cd.per_level)],
            "correspondence": [list(c) for c in cd.correspondence],
        }
        exps = _int_list(args.exponents) if args.exponents else list(range(2, 13))
        rows = w_bound(t, cd, exps)
        result["w_bound"] = [{"level": r.level + 1, "m": r.exponent, "escaping": r.escaping,
                              "bound": round(r.bound, 6), "ok": r.ok} for r in rows]
        text = "; ".join(f"level {k + 1}: " + " x ".join(str(F.order) for F in d.factors)
                         for k, d in enumerate(cd.per_level))
        text += f"\nescaping-factor bound holds on {sum(r.ok for r in rows)}/{len(rows)} rows"
        return [info], result, ["coherent decomposition of towers", "escaping-factor bound"], text, \
            0 if all(r.ok for r in rows) else 1
    if action == "fin":
        (t, info), = _towers(args, 1)
        fs = fin_images(t, args.max_order)
        result = {"max_order": args.max_order,
                  "classes": [{"order": R.order, "fingerprint": f.to_json()} for f, R in fs.classes]}
        text = f"{len(fs)} classes: " + ", ".join(_describe(R) for _, R in fs.classes)
        return [info], result, ["finite image sets"], text, 0
    if action == "same-fin":
        (t1, a), (t2, b) = _towers(args, 2)
        rep = same_fin(t1, t2, args.max_order)
        w = rep.witness
        result = {"equal": rep.equal, "only_in_first": [group_to_json(R) for R in rep.only_in_first],
                  "only_in_second": [group_to_json(R) for R in rep.only_in_second],
                  "witness": None if w is None else {"order": w.order, "fingerprint": fingerprint(w).to_json()}}
        text = "same finite images" if rep.equal else f"different; witness {_describe(w)}"
        return [a, b], result, ["finite image sets"], text, 0
    if action == "fiber-power":
        (t, tinfo), = _towers(args, 1)
        spec, ginfo = _fiber_spec(_with(args, files=[]))
        fp = fiber_power(spec)
        w = verify_image(t, fp.group, budget=args.budget)
        result = {"fiber_power_order": fp.group.order, "description": fp.description,
                  "found": w is not None, "level": None if w is None else w.level + 1,
                  "surjection": None if w is None else w.surjection.image_of.tolist()}
        text = (f"fiber power of order {fp.group.order} is an image of level {w.level + 1}" if w is not None
                else f"fiber power of order {fp.group.order} is not an image of any level")
        return [tinfo, ginfo], result, ["fiber powers and their images"], text, 0
    raise UsageError(f"unknown tower action {action}")


def _with(ns: argparse.Namespace, **kw) -> argparse.Namespace:
    d = vars(ns).copy()
    d.update(kw)
    return argparse.Namespace(**d)


def cmd_fiber_power(args):
    spec, info = _fiber_spec(args)
    fp = fiber_power(spec)
    result = {"order": fp.group.order, "description": fp.description,
              "expected_order": (spec.G.order // spec.N.order) * (spec.G0.order // spec.M0.order) ** spec.n,
              "group": group_to_json(fp.group)}
    if args.out:
        Path(args.out).write_text(json.dumps(group_to_json(fp.group), sort_keys=True))
    text = f"order {fp.group.order}: {fp.description}"
    return [info], result, ["fiber powers and their images"], text, 0


def cmd_corpus(args):
    specs = corpus_specs(args.max_order, products=not args.no_products)
    items = []
    for s in specs:
        G = named_group(s)
        item = {"name": str(s), "order": G.order, "abelian": bool(G.is_abelian),
                "digest": digest(group_to_json(G))}
        if args.dump:
            Path(args.dump).mkdir(parents=True, exist_ok=True)
            fname = str(s).replace(":", "_").replace("*", "x") + ".json"
            Path(args.dump, fname).write_text(json.dumps({**group_to_json(G), "label": str(s)}, sort_keys=True))
        items.append(item)
    text = "\n".join(f"{it['order']:4d}  {it['name']}" for it in items) + f"\n{len(items)} groups"
    return [], {"max_order": args.max_order, "groups": items}, ["named groups"], text, 0


def cmd_selftest(args):
    if args.list:
        rows = [{"name": c.name, "default_max_order": c.default_max_order, "lemma_ref": c.lemma_ref,
                 "description": c.description} for c in checks_mod.CHECKS.values()]
        text = "\n".join(f"{r['name']:28s} {r['description']}" for r in rows)
        return [], {"checks": rows}, [], text, 0
    names = [n.strip() for n in args.only.split(",")] if args.only else None
    for n in names or []:
        if n not in checks_mod.CHECKS:
            raise UsageError(f"unknown check {n!r}; see selftest --list")
    results = checks_mod.run_checks(names, args.max_order)
    ok = all(r.ok for r in results)
    payload = {"ok": ok, "checks": [r.to_json(timing=args.timing) for r in results],
               "total_checked": sum(r.checked for r in results)}
    lines = []
    for r in results:
        lines.append(f"{'PASS' if r.ok else 'FAIL'}  {r.name:28s} {r.checked:8d} checks  {r.seconds:7.2f}s")
        lines.extend(f"      {msg}" for msg in r.failures)
    lines.append(f"{'all passed' if ok else 'FAILURES'}: {payload['total_checked']} checks")
    refs = [checks_mod.CHECKS[r.name].lemma_ref for r in results]
    return [], payload, refs, "\n".join(lines), 0 if ok else 1


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable report")
    common.add_argument("--budget", type=int, default=DEFAULT_SEARCH_BUDGET,
                        help="node cap for isomorphism and surjection searches (default 10^7)")

    groups = argparse.ArgumentParser(add_help=False)
    groups.add_argument("files", nargs="*", help="group JSON files (cayley-v1 or perm-v1)")
    groups.add_argument("--named", action="append", metavar="SPEC", help="named group, e.g. cyclic:6 or cyclic:2*symmetric:3")

    fiber = argparse.ArgumentParser(add_help=False)
    fiber.add_argument("--g0", help="members of G0 (default: all of G)")
    fiber.add_argument("--m0", help="members of M0 (default: trivial)")
    fiber.add_argument("--kernel", help="members of N (default: trivial)")
    fiber.add_argument("--power", type=int, default=1, help="number of G/M0 coordinates n")

    p = argparse.ArgumentParser(prog="ksgroups", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("decompose", parents=[common, groups], help="split a group into indecomposables")
    s.add_argument("--max-order", type=int, default=64)
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("iso", parents=[common, groups], help="test two groups for isomorphism")
    s.set_defaults(func=cmd_iso)

    s = sub.add_parser("fitting", parents=[common, groups], help="Fitting split of a normal endomorphism")
    s.add_argument("--endo", required=True, help="comma-separated image vector")
    s.set_defaults(func=cmd_fitting)

    s = sub.add_parser("normal-endos", parents=[common, groups], help="list and classify normal endomorphisms")
    s.add_argument("--max-order", type=int, default=16)
    s.set_defaults(func=cmd_normal_endos)

    s = sub.add_parser("cancel", parents=[common], help="cancel a common direct factor")
    s.add_argument("--x", required=True, help="group file or named spec for X = G x A")
    s.add_argument("--y", required=True, help="group file or named spec for Y = G x B")
    s.add_argument("--g-order", type=int, required=True, help="order of the common factor G")
    s.set_defaults(func=cmd_cancel)

    s = sub.add_parser("tower", parents=[common, fiber], help="profinite tower operations")
    s.add_argument("action", choices=["validate", "decompose", "fin", "same-fin", "fiber-power"])
    s.add_argument("files", nargs="*", help="tower-v1 JSON files")
    s.add_argument("--verbal-of", metavar="SPEC", help="use the verbal quotient tower of a named group")
    s.add_argument("--exponents", help="comma-separated exponents (verbal tower, or bound rows for decompose)")
    s.add_argument("--max-order", type=int, default=16)
    s.add_argument("--named", action="append", metavar="SPEC", help="fiber-power: the base group G")
    s.set_defaults(func=cmd_tower)

    s = sub.add_parser("fiber-power", parents=[common, groups, fiber], help="build a fiber power group")
    s.add_argument("--out", help="write the resulting group as cayley-v1 JSON")
    s.set_defaults(func=cmd_fiber_power)

    s = sub.add_parser("corpus", parents=[common], help="list the named-group corpus")
    s.add_argument("--max-order", type=int, default=16)
    s.add_argument("--no-products", action="store_true")
    s.add_argument("--dump", metavar="DIR", help="also write every group as cayley-v1 JSON")
    s.set_defaults(func=cmd_corpus)

    s = sub.add_parser("selftest", parents=[common], help="run the invariant suite")
    s.add_argument("--only", help="comma-separated check names")
    s.add_argument("--max-order", type=int, default=None, help="cap on each check's default order")
    s.add_argument("--list", action="store_true", help="list checks and exit")
    s.add_argument("--timing", action="store_true", help="include timings in the JSON report")
    s.set_defaults(func=cmd_selftest)
    return p


def _emit(obj: Any) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def run_cli(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    command = args.command if args.command != "tower" else f"tower {args.action}"
    try:
        inputs, result, refs, text, code = args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"ksgroups: error: {exc}\n")
        return 2
    except GroupError as exc:
        if args.json:
            _emit({"command": command, "error": exc.name, "message": str(exc)})
        else:
            sys.stderr.write(f"{exc.name}: {exc}\n")
        return 1
    if args.json:
        _emit({"command": command, "inputs": inputs, "result": result, "lemma_refs": refs})
    else:
        sys.stdout.write(text + "\n")
    return code


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
