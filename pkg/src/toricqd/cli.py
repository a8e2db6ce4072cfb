"""Command line front end: ``toricqd <command> --spec problem.json``."""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path
from typing import List, Optional, Tuple

from toricqd.cohomology import HLaurent
from toricqd.generators import (
    Hypothesis,
    hypothesis_ledger,
    lambda_sets,
    mirror_to_j,
    toric_i_function,
    verify_conjecture_two_routes,
)
from toricqd.operators import (
    OperatorError,
    apply,
    big_delta_operator,
    classical_limit,
    lift_operator,
)
from toricqd.problem import Problem, ProblemError, load_problem
from toricqd.series import MirrorRegimeError, NovikovSeries, SeriesError, dumps_canonical, gw_descendants, novikov_monomial
from toricqd.toric.fan import FanError, validate_fan
from toricqd.toric.variety import ToricError

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class Outcome:
    """Report under construction: canonical JSON payload plus text lines."""

    def __init__(self, command: str, problem: Problem):
        self.report = {"command": command, "problem": problem.name}
        self.lines: List[str] = [f"== {command}: {problem.name}"]
        self.failed = False
        self.hypotheses: List[Hypothesis] = []

    def say(self, text: str = "") -> None:
        self.lines.append(text)

    def ledger(self, hyps: List[Hypothesis]) -> None:
        self.hypotheses = hyps
        self.report["hypotheses"] = [h.as_dict() for h in hyps]
        self.say("hypothesis ledger:")
        for h in hyps:
            mark = "note" if not h.fatal else ("ok  " if h.holds else "FAIL")
            self.say(f"  [{mark}] {h.name}" + (f"  {h.detail}" if h.detail else ""))

    def strict_failure(self) -> bool:
        return any(h.fatal and not h.holds for h in self.hypotheses)


def _laurent(v: HLaurent) -> list:
    return [[e, [[list(m), str(x)] for m, x in c.sorted_terms()]] for e, c in v.items()]


def _classes(tv) -> dict:
    return {
        "anticanonical": list(tv.anticanonical()),
        "anticanonical_nef": tv.is_nef(tv.anticanonical()),
        "anticanonical_ample": tv.is_ample(tv.anticanonical()),
    }


def _guard(problem: Problem, series: NovikovSeries) -> None:
    g = problem.bounds.h_guard
    if g is None:
        return
    for key, v in series.items():
        if v.min_exponent() < -g:
            raise ProblemError(f"coefficient at {list(key)} reaches hbar^{v.min_exponent()}, beyond h_guard = {g}")


def _ledger_for(problem: Problem) -> List[Hypothesis]:
    return hypothesis_ledger(problem.bundle_spec, problem.euler, problem.base)


# -- structural commands -------------------------------------------------------------


def cmd_fan_check(problem: Problem, args) -> Outcome:
    out = Outcome("fan-check", problem)
    base = problem.base
    rep = validate_fan(base.fan)
    out.report["base"] = {
        "rays": base.nrays,
        "cones": len(base.fan.cones),
        "lattice_rank": base.lattice_rank,
        "picard_rank": base.picard_rank,
        "cohomology_dim": base.cohomology.dim,
        **rep.as_dict(),
    }
    out.say(f"base: {base.nrays} rays, {len(base.fan.cones)} cones, dim H* = {base.cohomology.dim}")
    out.say(f"  smooth={rep.smooth} complete={rep.complete} projective={rep.projective_hint}")
    for p in rep.problems:
        out.say(f"  problem: {p}")
    if problem.bundle is not None:
        total = problem.bundle.variety
        rep2 = validate_fan(total.fan, check_projective=False)
        out.report["bundle"] = {
            "rays": total.nrays,
            "cones": len(total.fan.cones),
            "cohomology_dim": total.cohomology.dim,
            "lift": [list(r) for r in problem.bundle.lift],
            **rep2.as_dict(),
        }
        out.say(f"bundle: {total.nrays} rays, {len(total.fan.cones)} cones, dim H* = {total.cohomology.dim}")
        out.say(f"  smooth={rep2.smooth} complete={rep2.complete}")
    out.ledger(_ledger_for(problem))
    return out


def _ring_report(ring) -> dict:
    return {
        "variables": list(ring.variables),
        "relations": [g.to_string() for g in ring.normalizer.basis],
        "basis": ring.basis_labels(),
        "graded_dimensions": ring.graded_dimensions(),
        "dim": ring.dim,
    }


def cmd_cohomology(problem: Problem, args) -> Outcome:
    out = Outcome("cohomology", problem)
    rings = [("base", problem.base.cohomology)]
    if problem.bundle is not None:
        rings.append(("bundle", problem.bundle.variety.cohomology))
        rings.append(("bundle_extension", problem.twist.ring))
    for label, ring in rings:
        rep = _ring_report(ring)
        out.report[label] = rep
        out.say(f"{label}: H* = Q[{', '.join(ring.variables)}] / ({', '.join(rep['relations'])})")
        out.say(f"  standard monomials ({rep['dim']}): {' '.join(rep['basis'])}")
        out.say(f"  graded dimensions: {rep['graded_dimensions']}")
    if problem.bundle is not None:
        same = problem.bundle.variety.cohomology.same_presentation(problem.twist.ring)
        out.report["presentations_agree"] = same
        out.say(f"fan and extension presentations agree: {same}")
        out.failed |= not same
    out.ledger(_ledger_for(problem))
    return out


def cmd_mori(problem: Problem, args) -> Outcome:
    out = Outcome("mori", problem)
    varieties = [("base", problem.base)]
    if problem.bundle is not None:
        varieties.append(("bundle", problem.bundle.variety))
    for label, tv in varieties:
        rep = {
            "names": list(tv.names),
            "nef_basis": [list(a) for a in tv.nef_basis],
            "divisor_classes": [list(c) for c in tv.divisor_classes],
            "wall_curves": [list(c) for c in tv.distinct_wall_curves()],
            "mori_generators": [list(c) for c in tv.mori.extremal_rays()],
            "ample": list(tv.ample),
            "nef_basis_nef": tv.nef_ok,
            **_classes(tv),
        }
        out.report[label] = rep
        out.say(f"{label}: nef basis {', '.join(tv.names)} nef={tv.nef_ok}")
        out.say(f"  wall curves: {rep['wall_curves']}")
        out.say(f"  Mori cone generators ({len(rep['mori_generators'])}): {rep['mori_generators']}")
        out.say(f"  -K = {rep['anticanonical']} nef={rep['anticanonical_nef']} ample={rep['anticanonical_ample']}")
    if problem.bundle is not None:
        b = problem.bundle
        expected = sorted(b.expected_wall_curves)
        actual = sorted(b.variety.distinct_wall_curves())
        out.report["wall_curves_match_lifts"] = expected == actual
        out.say(f"bundle wall curves = section lifts + fiber line: {expected == actual}")
        out.failed |= expected != actual
    out.ledger(_ledger_for(problem))
    return out


# -- series commands -----------------------------------------------------------------


def _series_target(problem: Problem, args) -> Tuple[object, object, List[str]]:
    if args.on == "bundle":
        if problem.bundle is None:
            raise ProblemError("--on bundle needs a bundle block")
        return problem.bundle.variety, problem.euler.pullback(), problem.bundle_qnames()
    return problem.base, problem.euler, problem.base_qnames()


def _bound(problem: Problem, args) -> int:
    return args.bound if args.bound is not None else problem.bounds.ample_degree


def _fiber_bound(problem: Problem, args) -> int:
    return args.fiber_bound if args.fiber_bound is not None else problem.bounds.fiber


def _i_series(problem: Problem, args) -> Tuple[NovikovSeries, List[str]]:
    tv, euler, qnames = _series_target(problem, args)
    I = toric_i_function(tv, euler, _bound(problem, args), workers=args.workers)
    return I, qnames


def _emit_series(out: Outcome, series: NovikovSeries, qnames: List[str]) -> None:
    out.report["series"] = series.canonical()
    for key, val in series.items():
        out.say(f"  {novikov_monomial(key, qnames)}: {val}")


def cmd_ifunction(problem: Problem, args) -> Outcome:
    out = Outcome("ifunction", problem)
    out.ledger(_ledger_for(problem))
    I, qnames = _i_series(problem, args)
    _guard(problem, I)
    out.say(f"I-function ({args.on}), ample degree <= {I.truncation}:")
    _emit_series(out, I, qnames)
    return out


def cmd_jfunction(problem: Problem, args) -> Outcome:
    out = Outcome("jfunction", problem)
    out.ledger(_ledger_for(problem))
    I, qnames = _i_series(problem, args)
    J = mirror_to_j(I, workers=args.workers)
    _guard(problem, J)
    out.report["mirror_trivial"] = J is I
    out.say(f"J-function ({args.on}), ample degree <= {J.truncation}; mirror map trivial: {J is I}")
    _emit_series(out, J, qnames)
    return out


def cmd_twist(problem: Problem, args) -> Outcome:
    out = Outcome("twist", problem)
    if problem.twist is None:
        raise ProblemError("twist needs a bundle block")
    keys = list(problem.twist_keys)
    for text in args.key or []:
        try:
            keys.append(tuple(int(x) for x in text.split(",")))
        except ValueError:
            raise ProblemError(f"--key {text!r} is not a comma-separated integer list") from None
    if not keys:
        raise ProblemError("no keys: give --key nu,d1,... or a 'twist' list in the spec")
    k = problem.base.picard_rank
    entries = []
    out.say(f"twisting factors over Q[{', '.join(problem.twist.ring.variables)}]:")
    for key in keys:
        if len(key) != k + 1:
            raise ProblemError(f"twist key {list(key)} needs {k + 1} entries [nu, d...]")
        nu, beta = key[0], key[1:]
        if nu < 0 or not problem.base.is_effective(beta):
            raise ProblemError(f"twist key {list(key)} is not effective")
        val = problem.twist.twist_factor(nu, beta)
        entries.append({"nu": nu, "beta": list(beta), "laurent": _laurent(val)})
        out.say(f"  T[nu={nu}, beta={list(beta)}] = {val}")
    out.report["twist"] = entries
    return out


def cmd_gw(problem: Problem, args) -> Outcome:
    out = Outcome("gw", problem)
    out.ledger(_ledger_for(problem))
    I, qnames = _i_series(problem, args)
    J = mirror_to_j(I, workers=args.workers)
    tv = problem.base if args.on == "base" else problem.bundle.variety
    classes = list(problem.gw_classes) if args.on == "base" else []
    if not classes:
        classes = [d for d in tv.enumerate_effective(J.reliable) if any(d)]
    table = []
    for beta in classes:
        desc = gw_descendants(J, beta)
        terms = [[[list(m), str(x)] for m, x in c.sorted_terms()] for c in desc]
        table.append({"beta": list(beta), "descendants": terms})
        out.say(f"beta = {list(beta)}:")
        for kk, c in enumerate(desc):
            out.say(f"  k={kk}: {c}")
    out.report["descendants"] = table
    return out


# -- headline checks -----------------------------------------------------------------


def _operator_checks(out: Outcome, problem: Problem, J_total: NovikovSeries, J_base: NovikovSeries, args) -> None:
    """Delta, lifted base operators and bundle operators against the bundle J."""
    twist = problem.twist
    qn = problem.bundle_qnames()
    variables = twist.ring.variables
    delta = big_delta_operator(twist)
    residue = apply(delta, J_total, args.workers)
    rel = classical_limit(delta, variables, qn)
    classical = rel.reduce(twist.ring)
    zero_key = (0,) * len(qn)
    classical_ok = zero_key not in classical.parts
    out.report["delta"] = {
        "operator": delta.canonical(),
        "annihilates": not residue.coeffs,
        "reliable": residue.reliable,
        "relation": rel.canonical(),
        "classical_part_vanishes": classical_ok,
    }
    out.say(f"Delta = {delta.to_string(variables, qn)}")
    out.say(f"  annihilates J on window <= {residue.reliable}: {not residue.coeffs}")
    out.say(f"  relation: {rel} = 0 (q-free part vanishes classically: {classical_ok})")
    out.failed |= bool(residue.coeffs) or not classical_ok

    lifts = []
    for name, op in sorted(problem.operators.items()):
        target = problem.operator_targets[name]
        if target == "base":
            try:
                lifted = lift_operator(op, twist, J_base, args.workers)
            except OperatorError as exc:
                lifts.append({"name": name, "error": str(exc)})
                out.say(f"operator {name}: {exc}")
                out.failed = True
                continue
            base_rel = classical_limit(op, problem.base.names, problem.base_qnames())
            res = apply(lifted.operator, J_total, args.workers)
            lifts.append(
                {
                    "name": name,
                    "base_relation": base_rel.canonical(),
                    "lifted": lifted.operator.canonical(),
                    "lifted_relation": lifted.relation.canonical(),
                    "annihilates": not res.coeffs,
                    "reliable": res.reliable,
                }
            )
            out.say(f"operator {name}: {op.to_string(problem.base.names, problem.base_qnames())}")
            out.say(f"  base relation: {base_rel} = 0")
            out.say(f"  lift: {lifted.operator.to_string(variables, qn)}")
            lifted.relation.qnames = tuple(qn)
            out.say(f"  lifted relation: {lifted.relation} = 0")
            out.say(f"  lift annihilates J on window <= {res.reliable}: {not res.coeffs}")
            out.failed |= bool(res.coeffs)
        else:
            res = apply(op, J_total, args.workers)
            rel = classical_limit(op, variables, qn)
            lifts.append({"name": name, "relation": rel.canonical(), "annihilates": not res.coeffs, "reliable": res.reliable})
            out.say(f"operator {name}: {op.to_string(variables, qn)}")
            out.say(f"  relation: {rel} = 0; annihilates J: {not res.coeffs}")
            out.failed |= bool(res.coeffs)
    out.report["operators"] = lifts


def cmd_verify_conjecture(problem: Problem, args) -> Outcome:
    out = Outcome("verify-conjecture", problem)
    if problem.bundle is None:
        raise ProblemError("verify-conjecture needs a bundle block")
    bound, fb = _bound(problem, args), _fiber_bound(problem, args)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rep = verify_conjecture_two_routes(
            problem.bundle_spec, problem.euler, bound, fb, args.workers, bundle=problem.bundle
        )
        lam = lambda_sets(problem.bundle, problem.euler, bound, problem.twist)
    out.ledger(rep.hypotheses)
    body = rep.as_dict()
    body.pop("hypotheses")
    out.report["routes"] = body
    out.report["lambda"] = lam.as_dict()
    out.say(f"two routes over {len(rep.keys_checked)} keys (degree <= {bound}, nu <= {fb}): {'PASS' if not rep.mismatches else 'FAIL'}")
    if rep.first_divergence:
        d = rep.first_divergence
        out.say(f"  first divergence at {d['key']}: A = {d['route_a']}  B = {d['route_b']}")
    out.say(f"  P1 support {body['P1_support']}, P2 support {body['P2_support']}, P1 = P2: {rep.p_equal}")
    out.say(f"Lambda1 = {lam.as_dict()['lambda1']}, Lambda2 = {lam.as_dict()['lambda2']}")
    out.say(f"  Lambda1 = {{(0,d) | d in Lambda2}}: {lam.structure_ok}; T_0d = 1 on Lambda2: {lam.twist_trivial_ok}")
    for w in lam.warnings:
        out.say(f"  warning: {w}")
    out.failed |= not rep.passed or lam.structure_ok is False or lam.twist_trivial_ok is False
    _operator_checks(out, problem, rep.route_a, rep.base_j, args)
    out.report["passed"] = not out.failed
    out.say("RESULT: " + ("PASS" if not out.failed else "FAIL"))
    return out


def cmd_relations(problem: Problem, args) -> Outcome:
    out = Outcome("relations", problem)
    if problem.bundle is None:
        raise ProblemError("relations needs a bundle block")
    out.ledger(_ledger_for(problem))
    bound, fb = _bound(problem, args), _fiber_bound(problem, args)
    total = problem.bundle.variety
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        I = toric_i_function(total, problem.euler.pullback(), bound, workers=args.workers)
        J = mirror_to_j(I, workers=args.workers).restrict(lambda key: key[-1] <= fb)
        J = J.transfer(problem.twist.ring)
        base_bound = max([problem.base.degree(key[:-1]) for key in J.keys()] + [0])
        J_base = mirror_to_j(toric_i_function(problem.base, problem.euler, base_bound, workers=args.workers))
    _operator_checks(out, problem, J, J_base, args)
    out.report["passed"] = not out.failed
    out.say("RESULT: " + ("PASS" if not out.failed else "FAIL"))
    return out


COMMANDS = {
    "fan-check": cmd_fan_check,
    "cohomology": cmd_cohomology,
    "mori": cmd_mori,
    "ifunction": cmd_ifunction,
    "jfunction": cmd_jfunction,
    "twist": cmd_twist,
    "gw": cmd_gw,
    "verify-conjecture": cmd_verify_conjecture,
    "relations": cmd_relations,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toricqd",
        description="Exact I/J-functions, twisting factors and quantum D-module relations for toric projective bundles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--spec", required=True, help="problem file (JSON)")
        p.add_argument("--bound", type=int, default=None, help="ample degree bound D (default: spec or 3)")
        p.add_argument("--fiber-bound", type=int, default=None, help="bound on nu (default: spec or 3)")
        p.add_argument("--strict", action="store_true", help="exit 1 when a hypothesis fails")
        p.add_argument("--json", metavar="OUT", help="write the canonical JSON report")
        p.add_argument("--golden", metavar="FILE", help="compare the canonical report with a golden file")
        p.add_argument("--workers", type=int, default=1, help="threads for per-key work")
        p.add_argument("--on", choices=("base", "bundle"), default="base", help="variety for series commands")
        if name == "twist":
            p.add_argument("--key", action="append", help="nu,d1,...,dk (repeatable)")
    return parser


def run(argv: Optional[List[str]] = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    for flag in ("bound", "fiber_bound"):
        v = getattr(args, flag)
        if v is not None and v < 0:
            print(f"error: --{flag.replace('_', '-')} must be >= 0", file=sys.stderr)
            return EXIT_INPUT
    try:
        problem = load_problem(args.spec)
        out = COMMANDS[args.command](problem, args)
    except (ProblemError, FanError, ToricError, OperatorError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (MirrorRegimeError, SeriesError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    print("\n".join(out.lines), file=stdout)
    payload = dumps_canonical(out.report)
    if args.json:
        Path(args.json).write_text(payload + "\n")
    status = EXIT_FAIL if out.failed else EXIT_OK
    if args.strict and out.strict_failure():
        print("strict: a hypothesis failed", file=stdout)
        status = EXIT_FAIL
    if args.golden:
        try:
            golden = Path(args.golden).read_text().strip()
        except OSError as exc:
            print(f"input error: cannot read golden file: {exc.strerror}", file=sys.stderr)
            return EXIT_INPUT
        if golden != payload:
            print("golden: MISMATCH", file=stdout)
            status = EXIT_FAIL
        else:
            print("golden: match", file=stdout)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
