"""Command-line front end.

One subcommand family per criteria group:

    coarsekit space build|info      --space SPEC.json
    coarsekit analyze profile|asdim0|ends|split ...
    coarsekit detect m2|m32 ...
    coarsekit higson build|variation ...
    coarsekit roe identities|gns ...
    coarsekit verify REPORT.json

Reports are deterministic for a fixed config: fixed seeds, canonical
point orders, sorted JSON keys, no timestamps.  ``verify`` re-checks an
emitted CERTIFICATE with the standalone checkers and shares no code
with the searches.  COARSEKIT_THREADS caps the worker pool used for
scale sweeps.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import __version__, reports, verify
from .criteria import (NoWitnessAtScale, asdim0_profile, divergence_report,
                       ends_report, equal_annuli, find_pair_family_witness,
                       find_tower_witness, separation_profile, split_witness)
from .higson import build_separating_function, pointwise_max, variation_report
from .roe import (InvariantViolation, adjoint, cluster_rep, commutant_dimension,
                  expectation, kernel_check, multiply, tail_translation, vf,
                  window_tail_translation)
from .spaces import UsageError, Window, check_metric, ulf_profile
from .translations import compose, fixed_points, invert, random_translation
from .zoo import FinitePatternSpace, load_space, make_cluster_space


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("COARSEKIT_THREADS", "1")))
    except ValueError:
        return 1


def _sweep(fn, items):
    n = _threads()
    if n <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _emit(report: dict, out: str | None) -> None:
    text = reports.dump_report(report)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}") from None


def _parse_scales(text: str) -> list[int]:
    try:
        return [int(s) for s in text.split(",") if s]
    except ValueError:
        raise UsageError(f"scales must be comma-separated integers: {text!r}") from None


# ---------------------------------------------------------------------------
# point-set inputs for the higson commands

def _named_points(w: Window, rule: str) -> list:
    """Point-set rules: 'base' (the basepoint), 'powers:K' (points
    (K^n,) on a 1-d grid), or 'file:PATH' with {"points": [[...], ...]}."""
    if rule == "base":
        return [w.basepoint]
    if rule.startswith("powers:"):
        k = int(rule.split(":", 1)[1])
        if k < 2:
            raise UsageError("powers rule needs a base >= 2")
        pts = []
        v = k
        while (v,) in w:
            pts.append((v,))
            v *= k
        if not pts:
            raise UsageError("no powers fall inside this window")
        return pts
    if rule.startswith("file:"):
        path = rule.split(":", 1)[1]
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        return [reports.point_from_json(p) for p in data["points"]]
    raise UsageError(f"unknown point-set rule {rule!r}")


# ---------------------------------------------------------------------------
# subcommand handlers

def _cmd_space(args) -> int:
    w = load_space(args.space)
    metric = check_metric(w, args.samples, seed=args.seed)
    results = {
        "points": len(w),
        "horizon": w.horizon,
        "complete": w.complete,
        "metric_check": {"samples": metric.samples, "violations": len(metric.violations)},
        "ulf_profile": ulf_profile(w, min(args.rmax, w.horizon)),
    }
    if args.sub == "info":
        fp = w.fingerprint()
        sys.stdout.write(f"space {fp['kind']}: {len(w)} points, horizon {w.horizon}\n")
        for key, val in sorted(results["ulf_profile"].items()):
            sys.stdout.write(f"  max |N_{key}(x)| = {val}\n")
        sys.stdout.write(
            f"  metric check: {metric.samples} samples, {len(metric.violations)} violations\n")
        return 0 if metric.ok else 1
    report = reports.make_report("space build", w, {"samples": args.samples,
                                                    "seed": args.seed, "rmax": args.rmax},
                                 reports.PROFILE, results)
    _emit(report, args.out)
    return 0 if metric.ok else 1


def _cmd_analyze_profile(args) -> int:
    w = load_space(args.space)
    rs = _parse_scales(args.r)
    annuli = equal_annuli(w, args.annuli)
    profs = _sweep(lambda r: separation_profile(w, r), rs)
    trends = _sweep(lambda r: divergence_report(w, r, annuli), rs)
    results = {
        "profiles": [reports.encode_separation_profile(w, p) for p in profs],
        "trends": [reports.encode_trend(t) for t in trends],
    }
    report = reports.make_report("analyze profile", w,
                                 {"r": rs, "annuli": args.annuli},
                                 reports.PROFILE, results)
    _emit(report, args.out)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(reports.profile_csv(w, profs))
    return 0


def _cmd_analyze_asdim0(args) -> int:
    w = load_space(args.space)
    scales = _parse_scales(args.scales)
    decs = asdim0_profile(w, scales)
    results = {"per_scale": [reports.encode_components(w, decs[r]) for r in scales]}
    report = reports.make_report("analyze asdim0", w, {"scales": scales},
                                 reports.PROFILE, results)
    _emit(report, args.out)
    return 0


def _cmd_analyze_ends(args) -> int:
    w = load_space(args.space)
    rep = ends_report(w, args.r, args.rho)
    report = reports.make_report("analyze ends", w, {"r": args.r, "rho": args.rho},
                                 reports.PROFILE, reports.encode_ends(w, rep))
    _emit(report, args.out)
    return 0


def _cmd_analyze_split(args) -> int:
    w = load_space(args.space)
    wit = split_witness(w, args.r, args.rho)
    params = {"r": args.r, "rho": args.rho}
    if wit is None:
        report = reports.make_report(
            "analyze split", w, params, reports.NO_WITNESS_AT_SCALE,
            {"found": False,
             "detail": "fewer than two horizon-touching components"})
    else:
        problems = verify.check_split_witness(w, wit)
        if problems:
            raise InvariantViolation("; ".join(problems))
        report = reports.make_report(
            "analyze split", w, params, reports.CERTIFICATE,
            {"found": True, "side_sizes": [len(wit.side_a), len(wit.side_b)]},
            witness=reports.encode_split_witness(wit))
    _emit(report, args.out)
    return 0


def _cmd_detect_m2(args) -> int:
    w = load_space(args.space)
    res = find_tower_witness(w, args.levels, args.towers, args.s0, args.c,
                             budget=args.budget)
    params = {"levels": args.levels, "towers": args.towers,
              "s0": args.s0, "c": args.c, "budget": args.budget}
    if isinstance(res, NoWitnessAtScale):
        report = reports.make_report("detect m2", w, params,
                                     reports.NO_WITNESS_AT_SCALE,
                                     reports.encode_no_witness(res))
    else:
        problems = verify.check_tower_witness(w, res)
        if problems:
            raise InvariantViolation("; ".join(problems))
        report = reports.make_report("detect m2", w, params, reports.CERTIFICATE,
                                     {"towers": len(res.towers),
                                      "bounds": [list(b) for b in res.bounds]},
                                     witness=reports.encode_tower_witness(res))
    _emit(report, args.out)
    return 0


def _cmd_detect_m32(args) -> int:
    w = load_space(args.space)
    scales = _parse_scales(args.scales)
    res = find_pair_family_witness(w, scales, args.bound, args.pairs)
    params = {"scales": scales, "bound": args.bound, "pairs": args.pairs}
    if isinstance(res, NoWitnessAtScale):
        report = reports.make_report("detect m32", w, params,
                                     reports.NO_WITNESS_AT_SCALE,
                                     reports.encode_no_witness(res))
    else:
        problems = verify.check_pair_family(w, res)
        if problems:
            raise InvariantViolation("; ".join(problems))
        report = reports.make_report("detect m32", w, params, reports.CERTIFICATE,
                                     {"pairs_per_scale": args.pairs},
                                     witness=reports.encode_pair_family(res))
    _emit(report, args.out)
    return 0


def _cmd_higson(args) -> int:
    w = load_space(args.space)
    h = build_separating_function(w, _named_points(w, args.set_a),
                                  _named_points(w, args.set_b))
    eps = _parse_fraction(args.eps)
    var = variation_report(w, h, eps, args.r)
    results = {
        "construction": reports.encode_higson(w, h),
        "variation": reports.encode_variation(w, var),
    }
    if args.sub == "variation":
        results = {"variation": results["variation"]}
    report = reports.make_report(f"higson {args.sub}", w,
                                 {"set_a": args.set_a, "set_b": args.set_b,
                                  "eps": args.eps, "r": args.r},
                                 reports.PROFILE, results)
    _emit(report, args.out)
    return 0


def _cmd_roe_identities(args) -> int:
    w = load_space(args.space)
    rng = random.Random(args.seed)
    checks = {"isometry": 0, "composition": 0, "fixed_set": 0,
              "conjugated_fixed_set": 0, "propagation": 0}
    for _ in range(args.samples):
        f = random_translation(w, rng, args.disp)
        g = random_translation(w, rng, args.disp)
        vf_, vg_ = vf(w, f), vf(w, g)
        dom = {(x, x): Fraction(1) for x in f.mapping()}
        if multiply(adjoint(vf_), vf_).entries == dom:
            checks["isometry"] += 1
        if multiply(vf_, vg_).entries == vf(w, compose(w, f, g)).entries:
            checks["composition"] += 1
        if expectation(vf_).values == {x: Fraction(1) for x in fixed_points(f)}:
            checks["fixed_set"] += 1
        conj = compose(w, compose(w, invert(g), f), g)
        lhs = expectation(multiply(multiply(adjoint(vg_), vf_), vg_))
        if lhs.values == {x: Fraction(1) for x in fixed_points(conj)}:
            checks["conjugated_fixed_set"] += 1
        prod = multiply(vf_, vg_)
        if prod.propagation <= vf_.propagation + vg_.propagation:
            checks["propagation"] += 1
    ok = all(v == args.samples for v in checks.values())
    report = reports.make_report("roe identities", w,
                                 {"samples": args.samples, "seed": args.seed,
                                  "disp": args.disp},
                                 reports.PROFILE,
                                 {"passed": checks, "samples": args.samples, "ok": ok})
    _emit(report, args.out)
    return 0 if ok else 1


_PATTERNS = {
    "path3": [[0, 1, 2], [1, 0, 1], [2, 1, 0]],
    "pair": [[0, 1], [1, 0]],
}


def _load_pattern(text: str) -> FinitePatternSpace:
    if text in _PATTERNS:
        return FinitePatternSpace(_PATTERNS[text])
    with open(text, "r", encoding="utf-8") as fh:
        return FinitePatternSpace(json.load(fh)["distances"])


def _cmd_roe_gns(args) -> int:
    pattern = _load_pattern(args.pattern)
    k = pattern.size
    shift = tail_translation({q: q + 1 for q in range(k - 1)}, k)
    indicators = [{q: 1} for q in range(k)]
    rep = cluster_rep(pattern, [shift], indicators)
    cdim = commutant_dimension(rep)

    w = make_cluster_space(pattern, lambda n: args.gap * n, args.count)
    rng = random.Random(args.seed)
    agreements = 0
    for _ in range(args.samples):
        coeffs = []
        for q in range(k - 1):
            if rng.random() < 0.7:
                coeffs.append((Fraction(rng.randint(-3, 3)),
                               tail_translation({q: q + 1}, k)))
        if not coeffs:
            coeffs = [(Fraction(0), shift)]
        kernel_check(coeffs, pattern, w, args.stabilize)
        agreements += 1
    results = {"pattern_size": k, "commutant_dimension": cdim,
               "kernel_checks": agreements, "irreducible": cdim == 1}
    report = reports.make_report("roe gns", w,
                                 {"pattern": args.pattern, "count": args.count,
                                  "gap": args.gap, "stabilize": args.stabilize,
                                  "samples": args.samples, "seed": args.seed},
                                 reports.PROFILE, results)
    _emit(report, args.out)
    return 0


def _cmd_verify(args) -> int:
    with open(args.report, "r", encoding="utf-8") as fh:
        report = json.load(fh)
    tag = report.get("epistemics", {}).get("tag")
    if tag != reports.CERTIFICATE:
        sys.stdout.write(f"nothing to verify: report tag is {tag}\n")
        return 2
    spec = dict(report["space"])
    spec.pop("points", None)
    from .zoo import window_from_spec
    w = window_from_spec(spec)
    wit = reports.decode_witness(report["witness"])
    from .criteria import PairFamilyWitness, SplitWitness, TowerWitness
    if isinstance(wit, TowerWitness):
        problems = verify.check_tower_witness(w, wit)
    elif isinstance(wit, PairFamilyWitness):
        problems = verify.check_pair_family(w, wit)
    elif isinstance(wit, SplitWitness):
        problems = verify.check_split_witness(w, wit)
    else:  # pragma: no cover - decode_witness already rejects unknowns
        problems = ["unknown witness"]
    if problems:
        for p in problems:
            sys.stdout.write(f"FAIL: {p}\n")
        return 1
    sys.stdout.write("VERIFIED\n")
    return 0


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="coarsekit")
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="group", required=True)

    def add_space(p):
        p.add_argument("--space", required=True, help="space spec JSON path")
        p.add_argument("--out", help="write the JSON report here as well")

    p_space = sub.add_parser("space", help="build or inspect a window")
    ssub = p_space.add_subparsers(dest="sub", required=True)
    for name in ("build", "info"):
        p = ssub.add_parser(name)
        add_space(p)
        p.add_argument("--samples", type=int, default=1000)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--rmax", type=int, default=3)
        p.set_defaults(fn=_cmd_space)

    p_an = sub.add_parser("analyze", help="profiles, components, ends, splits")
    asub = p_an.add_subparsers(dest="sub", required=True)
    p = asub.add_parser("profile")
    add_space(p)
    p.add_argument("--r", required=True, help="comma-separated radii")
    p.add_argument("--annuli", type=int, default=4)
    p.add_argument("--csv", help="also write r,point,value rows here")
    p.set_defaults(fn=_cmd_analyze_profile)
    p = asub.add_parser("asdim0")
    add_space(p)
    p.add_argument("--scales", required=True)
    p.set_defaults(fn=_cmd_analyze_asdim0)
    p = asub.add_parser("ends")
    add_space(p)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--rho", type=int, required=True)
    p.set_defaults(fn=_cmd_analyze_ends)
    p = asub.add_parser("split")
    add_space(p)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--rho", type=int, required=True)
    p.set_defaults(fn=_cmd_analyze_split)

    p_det = sub.add_parser("detect", help="witness searches")
    dsub = p_det.add_subparsers(dest="sub", required=True)
    p = dsub.add_parser("m2")
    add_space(p)
    p.add_argument("--J", dest="levels", type=int, required=True)
    p.add_argument("--N", dest="towers", type=int, required=True)
    p.add_argument("--s0", type=int, default=2)
    p.add_argument("--c", type=int, default=4)
    p.add_argument("--budget", type=int, default=200_000)
    p.set_defaults(fn=_cmd_detect_m2)
    p = dsub.add_parser("m32")
    add_space(p)
    p.add_argument("--scales", required=True)
    p.add_argument("--B", dest="bound", type=int, required=True)
    p.add_argument("--N", dest="pairs", type=int, required=True)
    p.set_defaults(fn=_cmd_detect_m32)

    p_hig = sub.add_parser("higson", help="slowly varying functions")
    hsub = p_hig.add_subparsers(dest="sub", required=True)
    for name in ("build", "variation"):
        p = hsub.add_parser(name)
        add_space(p)
        p.add_argument("--set-a", required=True,
                       help="'powers:K', 'base', or 'file:PATH'")
        p.add_argument("--set-b", required=True)
        p.add_argument("--eps", default="1/2")
        p.add_argument("--r", type=int, default=5)
        p.set_defaults(fn=_cmd_higson)

    p_roe = sub.add_parser("roe", help="operator identities and the orbit model")
    rsub = p_roe.add_subparsers(dest="sub", required=True)
    p = rsub.add_parser("identities")
    add_space(p)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--disp", type=int, default=3)
    p.set_defaults(fn=_cmd_roe_identities)
    p = rsub.add_parser("gns")
    p.add_argument("--pattern", default="path3",
                   help="'path3', 'pair', or a JSON file with {'distances': ...}")
    p.add_argument("--count", type=int, default=6)
    p.add_argument("--gap", type=int, default=8)
    p.add_argument("--stabilize", type=int, default=2)
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the JSON report here as well")
    p.set_defaults(fn=_cmd_roe_gns)

    p_ver = sub.add_parser("verify", help="re-check an emitted certificate")
    p_ver.add_argument("report", help="report JSON path")
    p_ver.set_defaults(fn=_cmd_verify)
    return top


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as e:
        sys.stderr.write(f"error: {e}\n")
        return 2
    except InvariantViolation as e:
        sys.stderr.write(f"invariant violation: {e}\n")
        return 1
    except FileNotFoundError as e:
        sys.stderr.write(f"error: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
