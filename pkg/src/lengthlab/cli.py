"""Command-line front end.

Exit statuses: 0 every verdict holds, 1 a verdict fails (the report is still
written), 2 usage or validation error, 3 a resource cap was hit.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import axioms, chiswell, decomp, ggraph, rebuild
from .errors import LengthLabError, PreconditionError, ResourceError, UsageError, ValidationError
from .groups import word_ball
from .numeric import DEFAULT_TAU, format_scalar, parse_scalar
from .specs import load_graph, load_length

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


def _scalar(text):
    try:
        return parse_scalar(text)
    except ValidationError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _length(args, which="length"):
    spec = getattr(args, which)
    if spec is None:
        raise UsageError(f"--{which.replace('_', '-')} is required")
    l = load_length(spec, group=args.group)
    if args.mode == "approx":
        l = l.approx(args.tau)
    elif args.mode == "exact" and not l.exact:
        raise UsageError(f"{l.label} has no exact mode")
    return l


def _ball(args, l):
    """The test ball: explicit elements, an l-ball, or a word ball (default radius 8)."""
    if getattr(args, "elements", None):
        return l.model.sorted({l.model.element(w) for w in args.elements} | {l.model.identity})
    if args.l_radius is not None:
        return l.ball(args.l_radius)
    radius = 8 if args.radius is None else args.radius
    return word_ball(l.model, radius)


def _radius_label(args):
    if getattr(args, "elements", None):
        return "explicit"
    if args.l_radius is not None:
        return "l-ball " + format_scalar(args.l_radius)
    return "word-ball " + str(8 if args.radius is None else args.radius)


def _params(args) -> dict:
    skip = {"func", "out", "threads", "dot"}
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in skip or v is None:
            continue
        out[k] = format_scalar(v) if not isinstance(v, (str, int, bool, list)) else v
    return out


# -- commands --------------------------------------------------------------


def cmd_check_axioms(args):
    l = _length(args)
    ball = _ball(args, l)
    rep = axioms.check_A123(l, ball)
    radii = [max((l(g) for g in ball), key=axioms._num)]
    if args.K is not None:
        radii.insert(0, args.K)
    a4 = axioms.check_A4(l, radii)
    rep.verdicts["A4"] = axioms.Verdict("holds" if all(v is not None for v in a4.values()) else "not_checked",
                                        detail="ball sizes " + ", ".join(f"B_{k}={v}" for k, v in a4.items()))
    result = rep.to_dict(l.model)
    result["ball"] = _radius_label(args)
    return rep.holds, result


def cmd_estimate_delta(args):
    l = _length(args)
    ball = _ball(args, l)
    est = axioms.estimate_delta(l, ball, threads=args.threads)
    result = est.to_dict(l.model)
    result["ball"] = _radius_label(args)
    ok = True
    if args.claim is not None:
        ok = est.delta_hat <= args.claim
        result["claim"] = format_scalar(args.claim)
        result["within_claim"] = ok
    if l.spec.get("family") == "log":
        base = load_length(l.spec["base"]) if isinstance(l.spec.get("base"), dict) else None
        if base is not None:
            ineq = axioms.log_proof_inequalities(l, base, ball, tol=args.tau)
            result["log_inequalities"] = {
                "holds": ineq.holds,
                "pairs": ineq.pairs,
                "premise_pairs_1": ineq.first_checked,
                "violation": None if ineq.violation is None else [ineq.violation[0]] + [l.model.format(g) for g in ineq.violation[1:]],
            }
            ok = ok and ineq.holds
    return ok, result


def _require(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise UsageError(f"--{n} is required for {args.command}")


def cmd_check_a5(args):
    _require(args, "K", "eps")
    l = _length(args)
    consts = axioms.A5Constants.for_length(l, args.K, args.eps)
    rep = axioms.check_A5(l, consts, _ball(args, l))
    result = rep.to_dict(l.model)
    result["ball"] = _radius_label(args)
    return rep.holds, result


def cmd_min_eps(args):
    _require(args, "K")
    l = _length(args)
    res = axioms.minimal_eps(l, args.K, _ball(args, l))
    result = res.to_dict(l.model)
    result["K"] = format_scalar(args.K)
    result["ball"] = _radius_label(args)
    return True, result


def cmd_decompose(args):
    _require(args, "K", "eps")
    l = _length(args)
    m = l.model
    consts = axioms.A5Constants.for_length(l, args.K, args.eps)
    targets = [g for g in _ball(args, l) if g != m.identity]
    rows, ok = [], True
    for g in targets:
        try:
            d = decomp.greedy_decompose(l, consts, g)
        except PreconditionError as exc:
            ok = False
            rows.append({"g": m.format(g), "error": str(exc)})
            continue
        v = decomp.verify_decomposition(l, consts, d, g)
        ok = ok and v.ok
        rows.append({**d.to_dict(m), "verdict": v.to_dict()})
    return ok, {"constants": consts.to_dict(), "decompositions": rows, "ball": _radius_label(args)}


def cmd_rebuild_verify(args):
    _require(args, "K")
    l = _length(args)
    ball = _ball(args, l)
    eps = args.eps
    eps_source = "given"
    if eps is None:
        eps = axioms.minimal_eps(l, args.K, ball).eps
        eps_source = "min-eps"
    consts = axioms.A5Constants.for_length(l, args.K, eps)
    a5 = axioms.check_A5(l, consts, ball)
    qg = rebuild.build_weighted_cayley(l, consts.K)
    verdict = rebuild.verify_graphlike(l, consts, ball)
    result = {
        "constants": consts.to_dict(),
        "eps_source": eps_source,
        "a5_holds": a5.holds,
        "graph": qg.to_spec(),
        "bilipschitz": verdict.to_dict(l.model),
        "ball": _radius_label(args),
    }
    return verdict.holds and a5.holds, result


def cmd_fit_bilip(args):
    l1 = _length(args)
    l2 = _length(args, "length2")
    fit = rebuild.fit_bilipschitz(l1, l2, _ball(args, l1))
    result = fit.to_dict(l1.model)
    result["ball"] = _radius_label(args)
    return True, result


def cmd_chiswell_tree(args):
    l = _length(args)
    ball = _ball(args, l)
    tree = chiswell.build_tree(l, ball, grid=args.grid, threads=args.threads)
    verdict = chiswell.verify_tree(tree, l, ball, threads=args.threads, samples=args.samples)
    if args.dot:
        Path(args.dot).write_text(tree.to_dot())
    result = {"tree": tree.distance_table(), "verdict": verdict.to_dict(l.model), "grid": args.grid, "ball": _radius_label(args)}
    return verdict.ok, result


def cmd_geodesic_a5(args):
    qg = load_graph(args.graph)
    l = ggraph.based_length_function(qg)
    ball = _ball(args, l)
    rep = axioms.check_geodesic_A5(qg, ball)
    result = rep.to_dict(qg.model)
    result["ball"] = _radius_label(args)
    return rep.holds, result


def cmd_certify_not_cyclic(args):
    l = _length(args)
    cert = rebuild.certify_not_cyclic(l, args.M_max, args.n_max)
    return cert.total, cert.to_dict()


def cmd_export_dot(args):
    qg = load_graph(args.graph)
    radius = args.l_radius if args.l_radius is not None else parse_scalar(str(args.radius if args.radius is not None else 3))
    dev = ggraph.develop(qg, radius)
    text = dev.to_dot()
    if args.dot:
        Path(args.dot).write_text(text)
    return True, {"vertices": len(dev.vertices), "edges": len(dev.edges), "radius": format_scalar(radius), "dot": text}


COMMANDS = {
    "check-axioms": cmd_check_axioms,
    "estimate-delta": cmd_estimate_delta,
    "check-a5": cmd_check_a5,
    "min-eps": cmd_min_eps,
    "decompose": cmd_decompose,
    "rebuild-verify": cmd_rebuild_verify,
    "fit-bilip": cmd_fit_bilip,
    "chiswell-tree": cmd_chiswell_tree,
    "geodesic-a5": cmd_geodesic_a5,
    "certify-not-cyclic": cmd_certify_not_cyclic,
    "export-dot": cmd_export_dot,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lengthlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        p = sub.add_parser(name)
        p.set_defaults(func=fn)
        p.add_argument("--length", help="length spec (word, eps_deform:1/2, log, ggraph:<file>, <file>.json, ...)")
        p.add_argument("--group", help="group for word/log families (Z, F2, free:3, <file>)")
        p.add_argument("--radius", type=int, help="word-ball radius of the test ball (default 8)")
        p.add_argument("--l-radius", type=_scalar, help="use the length ball B_R as the test ball")
        p.add_argument("--elements", nargs="+", help="explicit test elements as words")
        p.add_argument("--K", type=_scalar)
        p.add_argument("--eps", type=_scalar)
        p.add_argument("--mode", choices=["auto", "exact", "approx"], default="auto")
        p.add_argument("--tau", type=float, default=DEFAULT_TAU)
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--cap", type=int, help="ball/development size cap (overrides LENGTHLAB_CAP)")
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        if name == "estimate-delta":
            p.add_argument("--claim", type=_scalar, help="fail unless delta_hat <= CLAIM")
        if name == "fit-bilip":
            p.add_argument("--length2", required=True)
        if name == "chiswell-tree":
            p.add_argument("--grid", choices=["integer", "breakpoints"], default="integer")
            p.add_argument("--samples", type=int, default=chiswell.SAMPLES, help="quadruples sampled for large trees")
        if name in ("chiswell-tree", "export-dot"):
            p.add_argument("--dot", help="also write a DOT file")
        if name in ("geodesic-a5", "export-dot"):
            p.add_argument("--graph", required=True, help="quotient-graph file or bundled fixture")
        if name == "certify-not-cyclic":
            p.add_argument("--M-max", dest="M_max", type=int, default=1024)
            p.add_argument("--n-max", dest="n_max", type=int, default=12)
    return parser


def render(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.cap is not None:
        os.environ["LENGTHLAB_CAP"] = str(args.cap)
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    report = {"command": args.command, "params": _params(args)}
    try:
        ok, result = args.func(args)
        report["verdict"] = "holds" if ok else "fails"
        report["result"] = result
        status = EXIT_OK if ok else EXIT_FAIL
    except ResourceError as exc:
        report.update(verdict="error", result={"error": str(exc), "kind": "resource", "cap": exc.cap})
        status = EXIT_RESOURCE
    except PreconditionError as exc:
        report.update(verdict="fails", result={"error": str(exc), "kind": "precondition"})
        status = EXIT_FAIL
    except LengthLabError as exc:
        report.update(verdict="error", result={"error": str(exc), "kind": type(exc).__name__})
        status = EXIT_USAGE
    text = render(report)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if status == EXIT_USAGE:
        print(f"lengthlab: {report['result']['error']}", file=sys.stderr)
    return status


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
