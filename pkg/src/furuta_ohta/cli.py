"""Command-line entry point: ``furuta-ohta {knot,invariant,scene,flow,selftest}``.

Every command prints one JSON result record::

    {"digest": ..., "operation": ..., "value": ..., "trace": [...], "timing": {...}}

``digest`` hashes the canonical form of the command's input, so identical
inputs give identical records apart from ``timing``. Exit codes: 0 success,
2 validation error, 3 unresolvable term, 1 failed self-test.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
import time
from pathlib import Path

from . import acceptance, csflow
from .catalog import builtin_catalog, lookup
from .errors import FOError, ValidationError
from .invariants import (
    casson,
    check_admissibility,
    d0_invariant,
    fraction_str,
    lambda_fo,
)
from .knots import (
    INFINITE,
    SeifertMatrix,
    alexander_polynomial,
    alexander_second_derivative_at_1,
    branched_cover_h1_order,
    tristram_levine_signature,
)
from .manifest import (
    ExpressionParser,
    FlowBatch,
    Manifest,
    Scene,
    expr_to_json,
    load_manifest,
    parse_flow_batch,
    parse_params,
    parse_scene,
    parse_triple,
)
from .manifolds import Product, TorusSurgery, ZeroSurgery, is_homology_sphere
from .pillowcase import (
    apply_gluing,
    random_closed_curve,
    signed_intersection_count,
    standard_planes,
    surgery_count_identity,
)


def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def record(operation: str, inputs, value, trace=(), elapsed: float = 0.0) -> dict:
    digest = hashlib.sha256(canonical({"operation": operation, "input": inputs}).encode()).hexdigest()
    return {"digest": digest, "operation": operation, "value": value, "trace": list(trace),
            "timing": {"elapsed_s": round(elapsed, 6)}}


def _manifest(args) -> Manifest | None:
    return load_manifest(args.manifest) if args.manifest else None


# -- knot -------------------------------------------------------------------------

def _knot_matrix(ref: str, manifest: Manifest | None) -> tuple[str, SeifertMatrix]:
    if ref.lstrip().startswith("["):
        try:
            rows = json.loads(ref)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"cannot parse Seifert matrix {ref!r}: {exc}") from exc
        return "inline", SeifertMatrix(rows)
    catalog = manifest.knots if manifest else builtin_catalog()
    return ref, lookup(catalog, ref).seifert


def cmd_knot(args) -> dict:
    manifest = _manifest(args)
    label, v = _knot_matrix(args.knot, manifest)
    what = args.what
    inputs = {"knot": label, "seifert": v.as_lists(), "what": what, "args": args.numbers}
    t0 = time.perf_counter()
    if what == "alexander":
        poly = alexander_polynomial(v)
        value = poly.format("t")
        trace = [{"formula": "alexander", "operand": "det(t^(1/2) V - t^(-1/2) V^T), Δ(1) = 1",
                  "value": value}]
    elif what == "ddelta":
        value = alexander_second_derivative_at_1(v)
        trace = [{"formula": "ddelta", "operand": f"Δ''(1) of {alexander_polynomial(v).format('t')}",
                  "value": str(value)}]
    elif what == "signature":
        if len(args.numbers) != 2:
            raise ValidationError("signature needs two integers: m n")
        m, n = args.numbers
        value = tristram_levine_signature(v, m, n)
        trace = [{"formula": "signature", "operand": f"(1-ω)V + (1-ω̄)V^T at ω = exp(2πi·{m}/{n})",
                  "value": str(value)}]
    elif what == "cover":
        if len(args.numbers) != 1:
            raise ValidationError("cover needs one integer: n")
        (n,) = args.numbers
        order = branched_cover_h1_order(v, n)
        value = "infinite" if order == INFINITE else order
        trace = [{"formula": "cover", "operand": f"|Res(Δ, 1 + t + ... + t^{n - 1})|", "value": str(value)}]
    else:  # pragma: no cover - argparse restricts choices
        raise ValidationError(f"unknown knot query {what!r}")
    return record(f"knot.{what}", inputs, value, trace, time.perf_counter() - t0)


# -- invariant ----------------------------------------------------------------------

def _expression(args, manifest: Manifest | None):
    if args.expr:
        try:
            node = json.loads(args.expr)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"--expr is not valid JSON: {exc}") from exc
        knots = manifest.knots if manifest else builtin_catalog()
        raw = manifest.source.get("manifolds", {}) if manifest else {}
        return "inline", ExpressionParser(knots, raw).any(node, "expr"), knots
    if not args.name:
        raise ValidationError("invariant needs a manifold name (with --manifest) or --expr")
    if manifest is None:
        raise ValidationError("a manifold name needs --manifest")
    return args.name, manifest.manifold(args.name), manifest.knots


def cmd_invariant(args) -> dict:
    manifest = _manifest(args)
    name, x, knots = _expression(args, manifest)
    inputs = {"name": name, "expr": expr_to_json(x, knots)}
    t0 = time.perf_counter()
    extra = {}
    if isinstance(x, Product) and isinstance(x.y, ZeroSurgery) or (
            isinstance(x, TorusSurgery) and x.p == 0):
        op, result = "d0", d0_invariant(x)
    elif is_homology_sphere(x):
        op, result = "casson", casson(x)
    elif isinstance(x, ZeroSurgery):
        op, result = "casson", casson(x)  # raises NotAHomologySphere
    else:
        extra["admissibility"] = check_admissibility(x).to_json()
        op, result = "lambda_fo", lambda_fo(x)
    rec = record(f"invariant.{op}", inputs, fraction_str(result.value),
                 [s.to_json() for s in result.trace], time.perf_counter() - t0)
    rec.update(extra)
    return rec


# -- scene ---------------------------------------------------------------------------

def _load_scene(args, manifest: Manifest | None):
    if args.random:
        planes = list(standard_planes().values())
        rng = random.Random(args.seed)
        curves = [random_closed_curve(rng, planes) for _ in range(args.random)]
        return f"random:{args.random}:{args.seed}", Scene(planes, curves)
    if args.scene_file:
        path = Path(args.scene_file)
        if manifest and args.scene_file in manifest.scenes:
            return args.scene_file, manifest.scenes[args.scene_file]
        try:
            node = json.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise ValidationError(f"cannot read scene {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ValidationError(f"scene {path} is not valid JSON: {exc}") from exc
        return str(path.name), parse_scene(node, path.name)
    raise ValidationError("scene needs a scene file, a manifest scene name or --random N")


def cmd_scene(args) -> dict:
    manifest = _manifest(args)
    name, scene = _load_scene(args, manifest)
    t0 = time.perf_counter()
    planes = scene.planes or list(standard_planes().values())
    curves = []
    for i, c in enumerate(scene.curves):
        counts = {p.label or f"plane{j}": signed_intersection_count(c, p) for j, p in enumerate(planes)}
        curves.append({"curve": i, "closed": c.closed, "counts": counts,
                       "identity": surgery_count_identity(c).to_json()})
    checks = []
    for chk in scene.checks:
        image = apply_gluing(scene.matrices[chk["matrix"]], scene.plane(chk["plane"]))
        target = scene.plane(chk["expect"])
        checks.append({"matrix": chk["matrix"], "plane": chk["plane"], "expect": chk["expect"],
                       "image": image.to_json(), "pass": image.coincides_with(target)})
    value = {"curves": curves, "checks": checks,
             "identity_holds": all(c["identity"]["holds"] for c in curves),
             "checks_pass": all(c["pass"] for c in checks)}
    inputs = {"scene": name, "planes": [p.to_json() for p in planes],
              "curves": [c.to_json() for c in scene.curves],
              "matrices": {k: [list(r) for r in m] for k, m in scene.matrices.items()},
              "checks": scene.checks}
    return record("scene", inputs, value, (), time.perf_counter() - t0)


# -- flow ----------------------------------------------------------------------------

def _flow_batch(args, manifest: Manifest | None) -> tuple[str, FlowBatch]:
    overrides = {k: v for k, v in {
        "step": args.step, "t_max": args.t_max, "truncation_radius": args.radius,
        "sign_convention": args.sign, "clock": args.clock, "sample_every": args.sample_every,
    }.items() if v is not None}
    if args.triple:
        batch = FlowBatch(parse_params({}), [parse_triple(list(args.triple), "--triple")])
        name = "inline"
    elif args.batch:
        if manifest and args.batch in manifest.flows:
            batch, name = manifest.flows[args.batch], args.batch
        else:
            path = Path(args.batch)
            try:
                node = json.loads(path.read_text(encoding="utf-8"))
            except OSError as exc:
                raise ValidationError(f"cannot read flow batch {path}: {exc}") from exc
            except json.JSONDecodeError as exc:
                raise ValidationError(f"flow batch {path} is not valid JSON: {exc}") from exc
            batch, name = parse_flow_batch(node, path.name), path.name
    else:
        raise ValidationError("flow needs --triple (nine numbers) or --batch FILE")
    if overrides:
        merged = {f: getattr(batch.params, f) for f in (
            "step", "t_max", "truncation_radius", "sign_convention", "clock", "sample_every")}
        merged.update(overrides)
        batch = FlowBatch(parse_params(merged), batch.initial)
    return name, batch


def cmd_flow(args) -> dict:
    manifest = _manifest(args)
    name, batch = _flow_batch(args, manifest)
    p = batch.params
    t0 = time.perf_counter()
    results = []
    for b0 in batch.initial:
        traj = csflow.flow(b0, p)
        item = traj.to_json(with_samples=args.samples)
        item["initial"] = b0.flat()
        item["stable_set_member"] = csflow.stable_set_membership(b0, 1e-9, p.sign_convention)
        results.append(item)
    params = {"step": p.step, "t_max": p.t_max, "truncation_radius": p.truncation_radius,
              "sign_convention": p.sign_convention, "clock": p.clock, "sample_every": p.sample_every}
    inputs = {"batch": name, "params": params, "initial": [b.flat() for b in batch.initial]}
    value = {"trajectories": results, "classifications": [r["classification"] for r in results]}
    return record("flow", inputs, value, (), time.perf_counter() - t0)


# -- selftest ------------------------------------------------------------------------

def cmd_selftest(args) -> dict:
    t0 = time.perf_counter()
    results = acceptance.run_all(args.seed)
    for r in results:
        print(r.line(), file=sys.stderr)
    rec = record("selftest", {"seed": args.seed},
                 {"all_passed": all(r.ok for r in results),
                  "backend": csflow.BACKEND,
                  "criteria": [r.to_json() for r in results]},
                 (), time.perf_counter() - t0)
    rec["timing"]["criteria"] = {str(r.number): round(r.elapsed_s, 6) for r in results}
    return rec


# -- driver --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--manifest", help="JSON manifest with knots, manifolds, scenes and flows")
    common.add_argument("--seed", type=int, default=acceptance.DEFAULT_SEED,
                        help="seed for randomized runs (default: %(default)s)")
    common.add_argument("--json", action="store_true", default=True, help="JSON output (default)")
    common.add_argument("--trace", action="store_true", help="also print the evaluation trace to stderr")

    parser = argparse.ArgumentParser(prog="furuta-ohta", description=__doc__.splitlines()[0],
                                     parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    k = sub.add_parser("knot", parents=[common], help="knot invariants from a Seifert matrix")
    k.add_argument("knot", help="catalog label or a JSON matrix such as '[[-1,1],[0,-1]]'")
    k.add_argument("what", choices=["alexander", "ddelta", "signature", "cover"])
    k.add_argument("numbers", nargs="*", type=int, help="m n for signature, n for cover")
    k.set_defaults(func=cmd_knot)

    inv = sub.add_parser("invariant", parents=[common], help="Casson / Furuta-Ohta / D0 evaluation")
    inv.add_argument("name", nargs="?", help="manifold name in the manifest")
    inv.add_argument("--expr", help="inline JSON expression instead of a manifest name")
    inv.set_defaults(func=cmd_invariant)

    sc = sub.add_parser("scene", parents=[common], help="pillowcase crossing counts")
    sc.add_argument("scene_file", nargs="?", help="scene JSON file or a manifest scene name")
    sc.add_argument("--random", type=int, default=0, metavar="N",
                    help="count N seeded random closed curves against the standard planes")
    sc.set_defaults(func=cmd_scene)

    fl = sub.add_parser("flow", parents=[common], help="integrate the Chern-Simons flow")
    fl.add_argument("--triple", nargs=9, metavar="X", help="initial triple as nine numbers")
    fl.add_argument("--batch", help="JSON batch file or a manifest flow name")
    fl.add_argument("--step", type=float)
    fl.add_argument("--t-max", dest="t_max", type=float)
    fl.add_argument("--radius", type=float, help="truncation radius")
    fl.add_argument("--sign", type=int, choices=[1, -1], help="sign convention")
    fl.add_argument("--clock", choices=["physical", "scaled"])
    fl.add_argument("--sample-every", dest="sample_every", type=int)
    fl.add_argument("--samples", action="store_true", help="include trajectory samples")
    fl.set_defaults(func=cmd_flow)

    st = sub.add_parser("selftest", parents=[common], help="run the acceptance checks")
    st.set_defaults(func=cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rec = args.func(args)
    except FOError as exc:
        err = {"error": type(exc).__name__, "message": str(exc), "exit_code": exc.exit_code}
        for attr in ("term", "location"):
            if hasattr(exc, attr):
                err[attr] = str(getattr(exc, attr))
        print(canonical(err))
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    if args.trace:
        for step in rec.get("trace", []):
            print(f"  {step['formula']}: {step['operand']} -> {step['value']}", file=sys.stderr)
    print(json.dumps(rec, sort_keys=True, ensure_ascii=False, indent=2))
    if args.command == "selftest" and not rec["value"]["all_passed"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
