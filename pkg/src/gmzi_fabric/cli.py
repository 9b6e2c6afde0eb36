"""Command-line front end.

Exit codes: 0 success, 1 domain failure (invalid phases, unroutable request,
capacity), 2 usage error. JSON goes to stdout; ``--format table`` prints text.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .fock import CapacityError, FockVector, GmziSpec, extract_signed_permutation, predict_output, simulate_gmzi
from .graph import build_mixed_graph, route_pair, sweep_matchings, validate
from .golden import enumerate_rows, regenerate, render
from .phases import InvalidPhaseConfig, PhaseConfig, compile_phi, is_type_consistent
from .planner import KINDS, PRESETS, SchemeError, SwitchScheme, audit, build_scheme, preset, resource_report
from .scheduler import (
    DisjointnessViolation,
    UnsatisfiableRoute,
    schedule_merge,
    schedule_msd_distribution,
    schedule_pairing,
    schedule_stabilizer_readout,
)


class DomainError(Exception):
    pass


def _ket(occ) -> str:
    return "|" + ",".join(str(int(x)) for x in occ) + "⟩"


def _amp(z: complex) -> str:
    re, im = z.real, z.imag
    if abs(im) < 1e-12:
        return f"{re:+.6g}"
    if abs(re) < 1e-12:
        return f"{im:+.6g}i"
    return f"{re:+.6g}{im:+.6g}i"


def _phi(text: str, n: int) -> PhaseConfig:
    try:
        phi = PhaseConfig.from_string(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if phi.n_ports != n:
        raise UsageError(f"--phi has {phi.n_ports} entries but --n is {n}")
    return phi


class UsageError(Exception):
    pass


# -- commands -------------------------------------------------------------------------


def cmd_compile(args) -> tuple[dict, str]:
    phi = _phi(args.phi, args.n)
    check = is_type_consistent(phi)
    if not check:
        doc = {"n": args.n, "phi": str(phi), "valid": False, "failed_level": check.failed_level}
        raise DomainError(doc)
    sp = compile_phi(phi)
    doc = {
        "n": args.n,
        "phi": str(phi),
        "valid": True,
        "sigma": sp.cycle_string(),
        "sign": sp.sign_symbol(),
        "sign_exponent": sp.sign_exponent,
    }
    return doc, f"{doc['phi']}  {doc['sigma']}  {doc['sign']}"


def cmd_enumerate(args) -> tuple[dict, str]:
    rows = enumerate_rows(args.n)
    text = "\n".join(f"{r['phi']}  {r['sigma']}  {r['sign']}" for r in rows)
    return {"n": args.n, "rows": rows}, text


def cmd_simulate(args) -> tuple[dict, str]:
    phi = _phi(args.phi, args.n)
    try:
        occ = [int(x) for x in args.input.split(",")]
    except ValueError as exc:
        raise UsageError(f"--input must be comma-separated integers: {exc}") from exc
    if len(occ) != args.n or min(occ) < 0:
        raise UsageError(f"--input needs {args.n} non-negative occupations")
    spec = GmziSpec.square(args.n)
    out = simulate_gmzi(spec, phi, FockVector.from_occupation(occ))
    terms = [f"{_amp(a)} {_ket(s)}" for s, a in out.support(1e-9)]
    doc = {"n": args.n, "phi": str(phi), "input": occ, "switch": False, "terms": terms}
    if is_type_consistent(phi):
        sp = extract_signed_permutation(spec, phi)
        if sp:
            pred = predict_output(sp, FockVector.from_occupation(occ))
            doc["switch"] = True
            doc["terms"] = [f"{'+' if a.real > 0 else '-'}1 {_ket(s)}" for s, a in pred.support(1e-9)]
    text = "\n".join(doc["terms"]) + ("" if doc["switch"] else "\n(not a switch configuration)")
    return doc, text


def cmd_plan(args) -> tuple[dict, str]:
    if args.preset:
        scheme = preset(args.preset)
    else:
        if not args.kind:
            raise UsageError("plan needs --kind or --preset")
        scheme = build_scheme(
            args.kind,
            args.modules,
            args.qubits,
            entanglement=args.entanglement,
            monolithic=not args.split,
            destinations=args.destinations,
        )
    report = resource_report(scheme)
    problems = audit(scheme).problems
    if problems:
        raise DomainError({"scheme": scheme.name, "audit": list(problems)})
    if args.out:
        Path(args.out).write_text(scheme.to_json() + "\n", encoding="utf-8")
    doc = {"scheme": scheme.name, "kind": scheme.kind, "report": report.as_dict()}
    if not args.out:
        doc["definition"] = scheme.to_dict()
    r = doc["report"]
    sizes = ", ".join(f"{s['count']}x {s['inputs']}->{s['outputs']}" for s in r["gmzi_sizes"])
    text = (
        f"scheme      {scheme.name}\n"
        f"gmzis       {r['gmzi_count']} ({sizes})\n"
        f"depth       {_range(r['active_depth'])}\n"
        f"couplers    {_range(r['couplers'])}\n"
        f"entanglers  {r['entangler_count']}"
    )
    return doc, text


def _range(v) -> str:
    return str(v) if isinstance(v, int) else f"{v['min']}-{v['max']}"


def _load_scheme(args) -> SwitchScheme:
    if args.preset:
        return preset(args.preset)
    if args.scheme:
        try:
            return SwitchScheme.from_json(Path(args.scheme).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read scheme file: {exc}") from exc
    raise UsageError("schedule needs --scheme FILE or --preset NAME")


def _pairs(items) -> list[tuple[str, str]]:
    out = []
    for item in items or []:
        parts = [p.strip() for p in item.split(",")]
        if len(parts) != 2:
            raise UsageError(f"--pair expects two modules like A,B, got {item!r}")
        out.append((parts[0], parts[1]))
    return out


def cmd_schedule(args) -> tuple[dict, str]:
    if args.msd:
        try:
            n, k = (int(x) for x in args.msd.split(","))
        except ValueError as exc:
            raise UsageError("--msd expects N,k") from exc
        assignment = None
        if args.assign:
            assignment = {}
            for item in args.assign.split(","):
                src, dst = item.split("->")
                blk, slot = dst.split(".")
                assignment[int(src) - 1] = (int(blk) - 1, int(slot) - 1)
        sch = schedule_msd_distribution(n, k, assignment)
    else:
        scheme = _load_scheme(args)
        if args.checks is not None:
            checks = [c for c in args.checks.split(",") if c]
            sch = schedule_stabilizer_readout(scheme, checks)
        elif args.merge:
            sch = schedule_merge(scheme, _pairs(args.pair), args.merge)
        else:
            sides = {}
            for item in args.entangler_side or []:
                key, _, side = item.partition("=")
                sides["-".join(sorted(key.split("-")))] = side
            sch = schedule_pairing(scheme, _pairs(args.pair), sides)
    doc = sch.as_dict()
    lines = [f"{s['gmzi']:<8} {s['phi']:<18} {s['sigma']} sign={'+-'[s['sign_exponent']]}" for s in doc["gmzis"] if not s["idle"]]
    return doc, "\n".join(lines) if lines else "(all GMZIs idle)"


def cmd_graph(args) -> tuple[dict, str]:
    graph = build_mixed_graph(args.n)
    report = validate(graph)
    doc = {"graph": graph.to_adjacency(), "validation": report.as_dict()}
    lines = [f"N={args.n} valid={report.ok}"]
    if args.route:
        a, b = (int(x) - 1 for x in args.route.split(","))
        plan = route_pair(graph, a, b)
        doc["route"] = plan.as_dict()
        lines.append(f"route {a + 1},{b + 1}: {plan.traversals} traversals via entangler {plan.entangler[0] + 1}-{plan.entangler[1] + 1}")
    if args.sweep:
        sweep = sweep_matchings(graph)
        doc["sweep"] = sweep.as_dict()
        lines.append(f"matchings {sweep.matchings}, depth histogram {sweep.as_dict()['depth_histogram']}, unschedulable {len(sweep.unschedulable)}")
    return doc, "\n".join(lines)


def cmd_regen(args) -> tuple[dict, str]:
    drift = regenerate(Path(args.dir), check=args.check)
    doc = {"dir": str(args.dir), "check": args.check, "drift": drift}
    if args.check and drift:
        raise DomainError(doc)
    return doc, "golden files up to date" if args.check else f"wrote golden files to {args.dir}"


# -- parser ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json")
    p = argparse.ArgumentParser(prog="gmzi-fabric", description="GMZI switch compiler, simulator and fabric planner")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compile", parents=[common], help="phase configuration -> signed permutation")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--phi", required=True)
    c.set_defaults(func=cmd_compile)

    e = sub.add_parser("enumerate", parents=[common], help="all valid configurations of an N-port GMZI")
    e.add_argument("--n", type=int, required=True)
    e.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("simulate", parents=[common], help="push a Fock state through a configured GMZI")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--phi", required=True)
    s.add_argument("--input", required=True)
    s.set_defaults(func=cmd_simulate)

    pl = sub.add_parser("plan", parents=[common], help="build a switching scheme and report resources")
    pl.add_argument("--kind", choices=KINDS)
    pl.add_argument("--preset", choices=PRESETS)
    pl.add_argument("--modules", type=int, default=4)
    pl.add_argument("--qubits", type=int, default=1)
    pl.add_argument("--entanglement", choices=("direct", "probabilistic"))
    mono = pl.add_mutually_exclusive_group()
    mono.add_argument("--monolithic", action="store_true", help="one Spanke network over all qubits (default)")
    mono.add_argument("--split", action="store_true", help="one Spanke network per qubit index")
    pl.add_argument("--destinations", type=int, default=1)
    pl.add_argument("--out", help="write the scheme definition here")
    pl.set_defaults(func=cmd_plan)

    sc = sub.add_parser("schedule", parents=[common], help="phase settings for a round of connections")
    sc.add_argument("--scheme")
    sc.add_argument("--preset", choices=PRESETS)
    sc.add_argument("--pair", action="append", help="modules to connect, e.g. A,B (repeatable)")
    sc.add_argument("--entangler-side", action="append", help="e.g. A-B=A (repeatable)")
    sc.add_argument("--merge", choices=("X", "Z"))
    sc.add_argument("--checks", help="comma-separated checks for a readout round")
    sc.add_argument("--msd", help="factory outputs and destination count, e.g. 4,4")
    sc.add_argument("--assign", help="e.g. 1->4.1,2->4.2 (output -> block.slot)")
    sc.set_defaults(func=cmd_schedule)

    g = sub.add_parser("graph", parents=[common], help="mixed-graph topology")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--route")
    g.add_argument("--sweep", action="store_true")
    g.set_defaults(func=cmd_graph)

    r = sub.add_parser("regen-golden", parents=[common], help="rebuild the golden reference files")
    r.add_argument("--dir", default="golden")
    r.add_argument("--check", action="store_true", help="compare instead of writing; exit 1 on drift")
    r.set_defaults(func=cmd_regen)
    return p


def _emit(doc, text: str | None, fmt: str, stream) -> None:
    if fmt == "table" and text is not None:
        stream.write(text + "\n")
    else:
        stream.write(render(doc))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        doc, text = args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"gmzi-fabric: error: {exc}\n")
        return 2
    except DomainError as exc:
        payload = exc.args[0]
        _emit({"error": payload}, None, "json", sys.stdout)
        return 1
    except (InvalidPhaseConfig, UnsatisfiableRoute, DisjointnessViolation, CapacityError, SchemeError) as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}}, None, "json", sys.stdout)
        return 1
    except ValueError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"gmzi-fabric: error: {exc}\n")
        return 2
    _emit(doc, text, args.format, sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
