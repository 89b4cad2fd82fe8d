"""Command-line interface: ``quotsurf <subcommand> ... [--format json|dot|text]``.

Exit status is 0 on success, 1 when a check or verdict comes out false and 2
on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .dualgraph import DualGraph, fundamental_cycle, verify_fiber
from .equivariant import GroupAction, PolyEndomorphism, certify, induced_boundary_map, jacobian
from .exactmath import hj_expand
from .pencil import (
    ContractionError,
    contract_to_hirzebruch,
    cusp_data,
    expected_special_member,
    layout_rows,
    resolve_pencil,
)
from .polynomial import ParseError
from .quotient import (
    CyclicQuotientType,
    ForkSpec,
    build_standard_completion,
    complete_fiber,
    freeness_defect,
    log_canonical_class,
    resolution_chain,
    validate_fork,
)

OK, FALSE, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class Output:
    """What a subcommand produced, in each supported format."""

    def __init__(self, data: dict, text: str, dot: str | None = None, status: int = OK):
        self.data = data
        self.text = text
        self.dot = dot
        self.status = status

    def render(self, fmt: str, command: str) -> str:
        if fmt == "json":
            return json.dumps(self.data, indent=2, sort_keys=True) + "\n"
        if fmt == "dot":
            if self.dot is None:
                raise UsageError(f"{command} has no dot output")
            return self.dot
        return self.text.rstrip("\n") + "\n"


def _load_json(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _graph_text(g: DualGraph) -> str:
    lines = [f"{n}: {g.weight(n)}{' [boundary]' if g.is_boundary(n) else ''}" for n in g]
    lines += [f"{a} -- {b}" for a, b in g.edges]
    return "\n".join(lines)


def _divisor_text(d) -> str:
    return " + ".join(n if c == 1 else f"{c}*{n}" for n, c in d.to_dict().items()) or "0"


def _cyclic(n: int, d: int) -> CyclicQuotientType:
    try:
        return CyclicQuotientType(n, d)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_hj(args) -> Output:
    t = _cyclic(args.n, args.d)
    chain = hj_expand(t.n, t.d)
    return Output(
        {"n": t.n, "d": t.d, "chain": chain},
        " ".join(map(str, chain)),
        resolution_chain(t).to_dot(f"hj_{t.n}_{t.d}"),
    )


def cmd_resolve(args) -> Output:
    t = _cyclic(args.n, args.d)
    g = resolution_chain(t)
    return Output(g.to_dict(), _graph_text(g), g.to_dot(f"resolution_{t.n}_{t.d}"))


def _fork_from(doc: dict) -> ForkSpec:
    try:
        return ForkSpec.from_dict(doc)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_fork(args) -> Output:
    spec = _fork_from(_load_json(args.file))
    rep = validate_fork(spec)
    text = "\n".join([
        f"negative definite: {rep.negative_definite}",
        f"arm determinants: {' '.join(map(str, rep.determinants))}",
        f"platonic: {rep.platonic}",
        f"classification: {rep.classification}",
    ])
    return Output(rep.to_dict(), text, spec.graph().to_dot("fork"), OK if rep.ok else FALSE)


def cmd_fundcycle(args) -> Output:
    doc = _load_json(args.file)
    try:
        g = DualGraph.from_dict(doc)
        z = fundamental_cycle(g)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return Output({"fundamental_cycle": z.to_dict()}, _divisor_text(z))


def _parse_chain(items: Sequence[str]) -> list[int]:
    try:
        return [int(tok) for item in items for tok in item.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"chain entries must be integers: {' '.join(items)}") from None


def cmd_complete_fiber(args) -> Output:
    chain = _parse_chain(args.chain)
    try:
        fc = complete_fiber(chain, attach_end=args.attach)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    data = {
        "T": chain,
        "R": fc.R,
        "multiplicity": fc.mF,
        "multiplicities": fc.multiplicities.to_dict(),
        "order": list(fc.order),
        "graph": fc.fiber_graph.to_dict(),
    }
    text = "\n".join([
        f"R: {' '.join(map(str, fc.R))}",
        f"m(F): {fc.mF}",
        "fiber: " + " + ".join(f"{fc.multiplicities[n]}*{n}" for n in fc.order),
    ])
    ok = verify_fiber(fc.fiber_graph, fc.multiplicities)
    return Output(data, text, fc.fiber_graph.to_dot("fiber", [list(fc.order)]), OK if ok else FALSE)


def cmd_completion(args) -> Output:
    if args.fork is not None:
        if args.n is not None or args.d is not None:
            raise UsageError("give either n d or --fork FILE, not both")
        model = _fork_from(_load_json(args.fork))
    else:
        if args.n is None or args.d is None:
            raise UsageError("completion needs n d or --fork FILE")
        model = _cyclic(args.n, args.d)
    try:
        sc = build_standard_completion(model)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    lc = log_canonical_class(sc)
    fd = freeness_defect(sc)
    data = {
        "completion": sc.to_dict(),
        "kind": sc.kind,
        "log_canonical": lc.to_dict(),
        "freeness_defect": fd.to_dict(),
    }
    text = "\n".join([
        f"kind: {sc.kind}",
        _graph_text(sc.graph),
        "fiber multiplicities: " + (" ".join(str(fb.multiplicity) for fb in sc.fibers) or "-"),
        f"D + K = {lc.formula}: {'verified' if lc.verified else 'FAILED at ' + str(lc.offending)}",
        f"freeness scalar: {fd.scalar}",
        f"L: {_divisor_text(fd.L)}",
    ])
    ok = lc.verified and fd.verified
    return Output(data, text, sc.graph.to_dot("completion"), OK if ok else FALSE)


def cmd_pencil(args) -> Output:
    if args.n < 1 or args.a < 1:
        raise UsageError("pencil needs n >= 1 and a >= 1")
    pr = resolve_pencil(args.n, args.a)
    cd = cusp_data(args.n, args.a)
    ok = pr.special_member == expected_special_member(args.n, args.a) and verify_fiber(pr.graph, pr.special_member)
    data = {
        "graph": pr.graph.to_dict(),
        "special_member": pr.special_member.to_dict(),
        "section": pr.section,
        "steps": len(pr.steps),
        "cusp": {"type": list(cd.type), "multiplicities": cd.mult_seq, "delta": cd.delta},
    }
    lines = [
        _graph_text(pr.graph),
        f"C0' = {_divisor_text(pr.special_member)}",
        f"blow-ups: {len(pr.steps)}",
        f"cusp type: ({cd.type[0]},{cd.type[1]}), delta {cd.delta}",
    ]
    if args.contract:
        try:
            c = contract_to_hirzebruch(pr)
        except ContractionError as exc:
            data["contraction"] = {"error": str(exc)}
            lines.append(f"contraction failed: {exc}")
            ok = False
        else:
            data["contraction"] = {
                "schedule": c.schedule,
                "n": c.final.n,
                "fiber": c.fiber_image,
                "section": c.section_image,
            }
            lines.append(f"contract: {' '.join(c.schedule)} -> F_{c.final.n}")
    return Output(data, "\n".join(lines), pr.graph.to_dot("pencil", layout_rows(pr)), OK if ok else FALSE)


def cmd_keller(args) -> Output:
    try:
        e = PolyEndomorphism.parse(args.f, args.g)
        act = GroupAction.parse(args.action)
    except (ParseError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    v = certify(e, act)
    data = {"map": [str(e.f), str(e.g)], "action": [act.n, act.d], "jacobian": str(jacobian(e))}
    data.update(v.to_dict())
    try:
        data["boundary_map"] = str(induced_boundary_map(e))
    except ValueError:
        data["boundary_map"] = None
    text = v.label if not v.detail else f"{v.label}\n{v.detail}"
    return Output(data, text, status=OK if v.certified else FALSE)


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("json", "dot", "text"), default="text")
    parser = argparse.ArgumentParser(prog="quotsurf", description="Quotient surface singularity calculator.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hj", parents=[fmt], help="Hirzebruch-Jung expansion of n/d")
    p.add_argument("n", type=int)
    p.add_argument("d", type=int)
    p.set_defaults(func=cmd_hj)

    p = sub.add_parser("resolve", parents=[fmt], help="resolution chain of the cyclic type (n,d)")
    p.add_argument("n", type=int)
    p.add_argument("d", type=int)
    p.set_defaults(func=cmd_resolve)

    p = sub.add_parser("fork", parents=[fmt], help="validate a fork given as JSON")
    p.add_argument("file")
    p.set_defaults(func=cmd_fork)

    p = sub.add_parser("fundcycle", parents=[fmt], help="fundamental cycle of a graph given as JSON")
    p.add_argument("file")
    p.set_defaults(func=cmd_fundcycle)

    p = sub.add_parser("complete-fiber", parents=[fmt], help="complete an arm to a degenerate fiber")
    p.add_argument("chain", nargs="+", help="entries >= 2, space or comma separated")
    p.add_argument("--attach", choices=("first", "last"), default="first")
    p.set_defaults(func=cmd_complete_fiber)

    p = sub.add_parser("completion", parents=[fmt], help="standard completion with divisor checks")
    p.add_argument("n", type=int, nargs="?")
    p.add_argument("d", type=int, nargs="?")
    p.add_argument("--fork", metavar="FILE")
    p.set_defaults(func=cmd_completion)

    p = sub.add_parser("pencil", parents=[fmt], help="resolve the pencil <C, a S1 + l0> on F_n")
    p.add_argument("n", type=int)
    p.add_argument("a", type=int)
    p.add_argument("--contract", action="store_true")
    p.set_defaults(func=cmd_pencil)

    p = sub.add_parser("keller", parents=[fmt], help="certify an equivariant Keller map")
    p.add_argument("f")
    p.add_argument("g")
    p.add_argument("--action", required=True, metavar="n,d")
    p.set_defaults(func=cmd_keller)
    return parser


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        out = args.func(args)
        stdout.write(out.render(args.format, args.command))
    except UsageError as exc:
        stderr.write(f"quotsurf {args.command}: error: {exc}\n")
        return USAGE
    return out.status


def main() -> None:
    sys.exit(run())
