"""Command line interface.

Instance files are JSON::

    {"n": 4, "blocks": [[1, 2], [3, 4]], "terms": [{"vars": [1, 3], "coef": "3/2"}]}

``--instance @NAME`` loads a built-in battery instance instead (e.g. ``@PATH3``).
Inequality files are JSON::

    {"coords": [{"vars": [1, 3]}], "a": ["-1"], "delta": "0", "space": "JH"}

with ``space`` one of JH (family coordinates), JHleq (coordinates avoiding
the transversal given under "D") or MP (coordinates named by
``{"blocks": [...]}``). Unlisted coordinates have coefficient 0.

Exit codes: 0 ok, 2 parse or validation error, 3 infeasible or guard
exceeded, 4 internal invariant violation (including a failed theorem check).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import battery
from .decompose import DEFAULT_DECOMPOSE_GUARD, Decomposition, check_precondition, verify_decomposition
from .errors import InternalInvariantViolation, LabelMismatch, MCPPError, ParseError, ValidationError
from .exactmath import DEFAULT_VERTEX_GUARD, PointSet, RVector, as_rational, enumerate_vertices
from .hypergraph import Hypergraph, is_alpha_acyclic, is_downward_closed
from .instance import MCPPInstance, MonomialFamily, close_family, induce_hypergraph
from .lifting import (
    LiftSelection,
    MPInequality,
    check_condition,
    compute_V0_V1,
    lift,
)
from .oracle import (
    DEFAULT_GUARD,
    enumerate_MCleq_vertices,
    enumerate_MP_vertices,
    enumerate_SH,
    mp_labels,
)
from .polytope import certify_inequality
from .relaxation import RelaxationSystem, build_affine_hull, build_MC_cap, build_MC_T
from .solver import METHODS, solve
from .theorems import CHECKS, check_solver_equivalence


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def load_instance(ref: str) -> MCPPInstance:
    if ref.startswith("@"):
        name = ref[1:]
        if name not in battery.SPECS:
            raise ParseError(f"unknown built-in instance {name!r}; choose from {sorted(battery.SPECS)}")
        return battery.instance(name)
    return MCPPInstance.from_dict(_read_json(ref), name=ref)


def _label(J) -> str:
    return "_".join(map(str, J))


def _terms(coefs: dict) -> str:
    return " ".join(f"{'-' if c < 0 else '+'} {abs(c)}*w_{_label(J)}" for J, c in coefs.items()) or "0"


def _parse_ints(text: str, what: str) -> tuple:
    try:
        return tuple(int(t) for t in text.replace(" ", "").split(",") if t)
    except ValueError:
        raise ParseError(f"{what} must be a comma separated list of integers") from None


def _emit(args, data: dict, text: str) -> None:
    if args.output == "json":
        print(json.dumps(data, indent=2))
    else:
        print(text)


def _points(ps: PointSet) -> list:
    return [[str(v) for v in p] for p in ps]


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(args) -> int:
    inst = load_instance(args.instance)
    bad = inst.violations()
    data = {"ok": not bad, "violations": [v.to_dict() for v in bad]}
    text = "ok" if not bad else "\n".join(f"{v.kind}: {v.message}" for v in bad)
    _emit(args, data, text)
    return 0 if not bad else 2


def cmd_hypergraph(args) -> int:
    inst = load_instance(args.instance).validate()
    H = induce_hypergraph(inst)
    ok, witness = is_alpha_acyclic(H)
    data = {
        **H.to_dict(),
        "rank": H.rank,
        "alpha_acyclic": ok,
        "downward_closed": is_downward_closed(H),
    }
    lines = [f"V = {list(H.vertices)}", f"E = {[list(e) for e in H.edges]}", f"alpha-acyclic: {ok}"]
    if ok:
        data["join_tree"] = witness.to_dict()
        lines.append("join tree: " + ", ".join(f"{list(a)}-{list(b)}" for a, b in witness.tree_edges))
    else:
        data["gyo_residual"] = witness.to_dict()
        lines.append(f"GYO residual: {[list(e) for e in witness.edges]}")
    lines.append(f"downward-closed: {data['downward_closed']}")
    _emit(args, data, "\n".join(lines))
    return 0


def _system_text(rs: RelaxationSystem) -> str:
    lines = ["# labels: " + " ".join("w_" + _label(J) for J in rs.labels)]
    for kind, tag, coefs, rhs in rs.rows():
        lines.append(f"[{tag}] {_terms(coefs)} {'=' if kind == 'eq' else '<='} {rhs}")
    counts = rs.counts()
    lines.append(
        f"# {len(rs.eq_tags)} equalities, {len(rs.ineq_tags)} inequalities: "
        + ", ".join(f"{k} {v}" for k, v in counts.items())
    )
    return "\n".join(lines)


def _system_json(rs: RelaxationSystem) -> dict:
    rows = [
        {
            "kind": kind,
            "tag": tag,
            "coefs": {_label(J): str(c) for J, c in coefs.items()},
            "rhs": str(rhs),
        }
        for kind, tag, coefs, rhs in rs.rows()
    ]
    return {
        "labels": [list(J) for J in rs.labels],
        "rows": rows,
        "equalities": len(rs.eq_tags),
        "inequalities": len(rs.ineq_tags),
        "counts": rs.counts(),
    }


def _default_D(fam: MonomialFamily) -> tuple:
    return tuple(b[-1] for b in fam.partition.blocks)


def cmd_hrep(args) -> int:
    fam = close_family(load_instance(args.instance))
    if args.system == "jointree":
        rs = build_MC_T(fam)
    elif args.system == "cap":
        rs = build_MC_cap(fam)
    else:
        D = _parse_ints(args.D, "--D") if args.D else _default_D(fam)
        hull = build_affine_hull(fam, D)
        rs = hull.symmetric if args.form == "symmetric" else hull.d_form
    _emit(args, _system_json(rs), _system_text(rs))
    return 0


def cmd_enumerate(args) -> int:
    fam = close_family(load_instance(args.instance))
    if args.set == "SH":
        ps = enumerate_SH(fam, args.guard)
    elif args.set == "MP":
        ps = enumerate_MP_vertices(fam.hypergraph, args.guard)
    elif args.set == "MCleq":
        D = _parse_ints(args.D, "--D") if args.D else _default_D(fam)
        ps = enumerate_MCleq_vertices(fam, D, args.guard)
    else:
        rs = build_MC_T(fam) if args.set == "jointree" else build_MC_cap(fam)
        ps = enumerate_vertices(rs.system, args.vertex_guard or DEFAULT_VERTEX_GUARD)
    data = {"labels": [list(l) for l in ps.labels], "points": _points(ps), "count": len(ps)}
    lines = [" ".join(_label(l) for l in ps.labels)]
    lines += [" ".join(str(v) for v in p) for p in ps]
    lines.append(f"# {len(ps)} points, affine dimension {ps.dim}")
    data["dimension"] = ps.dim
    _emit(args, data, "\n".join(lines))
    return 0


def parse_inequality(data: dict, fam: MonomialFamily):
    """Return (space, coefficient vector, delta, vertex set)."""
    if not isinstance(data, dict):
        raise ParseError("inequality must be a JSON object")
    unknown = set(data) - {"coords", "a", "delta", "space", "D"}
    if unknown:
        raise ParseError(f"unknown keys {sorted(unknown)}")
    space = data.get("space", "JH")
    coords, a = data.get("coords", []), data.get("a", [])
    if len(coords) != len(a):
        raise ParseError("'coords' and 'a' differ in length")
    try:
        delta = as_rational(data.get("delta", 0))
        a = [as_rational(c) for c in a]
    except (TypeError, ValueError, ZeroDivisionError):
        raise ParseError("coefficients must be integers or 'p/q' strings") from None
    if space in ("JH", "JHleq"):
        if space == "JH":
            labels, verts = fam.labels, None
        else:
            D = tuple(data.get("D") or _default_D(fam))
            labels = fam.leq(D)
            verts = enumerate_MCleq_vertices(fam, D)
        keys = []
        for c in coords:
            if not isinstance(c, dict) or set(c) != {"vars"}:
                raise ParseError(f"coordinate {c!r} must be {{'vars': [...]}}")
            keys.append(tuple(sorted(c["vars"])))
        if verts is None:
            verts = enumerate_SH(fam)
    elif space == "MP":
        labels = mp_labels(fam.hypergraph)
        keys = []
        for c in coords:
            if not isinstance(c, dict) or set(c) != {"blocks"}:
                raise ParseError(f"coordinate {c!r} must be {{'blocks': [...]}}")
            keys.append(tuple(sorted(c["blocks"])))
        verts = enumerate_MP_vertices(fam.hypergraph)
    else:
        raise ParseError(f"unknown space {space!r}")
    coefs: dict = {}
    known = set(labels)
    for k, c in zip(keys, a):
        if k not in known:
            raise LabelMismatch(f"coordinate {list(k)} does not exist in space {space}")
        coefs[k] = coefs.get(k, Fraction(0)) + c
    return space, RVector.from_mapping(labels, coefs), delta, verts


def cmd_certify(args) -> int:
    fam = close_family(load_instance(args.instance))
    space, a, delta, verts = parse_inequality(_read_json(args.ineq), fam)
    cert = certify_inequality(a, delta, verts)
    data = {"space": space, **cert.to_dict()}
    text = (
        f"{cert.status}\n# tight at {len(cert.tight_points)} of {len(verts)} points, "
        f"face dim {cert.face_dim}, polytope dim {cert.polytope_dim}"
    )
    _emit(args, data, text)
    return 0


def _parse_selection(text: str) -> LiftSelection:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError:
        raise ParseError("--selection must be JSON, e.g. [[1],[3]]") from None
    if not isinstance(raw, list) or not all(isinstance(s, list) for s in raw):
        raise ParseError("--selection must be a list of index lists")
    return LiftSelection(tuple(tuple(s) for s in raw))


def cmd_lift(args) -> int:
    fam = close_family(load_instance(args.instance))
    space, c, delta, mpverts = parse_inequality(_read_json(args.ineq), fam)
    if space != "MP":
        raise ValidationError("lift needs an inequality in space MP")
    ineq = MPInequality(c, delta)
    sel = _parse_selection(args.selection).validate(fam.partition)
    base = certify_inequality(c, delta, mpverts)
    cls = compute_V0_V1(ineq, mpverts)
    a, d = lift(ineq, sel, fam)
    cert = certify_inequality(a, d, enumerate_SH(fam))
    cond = check_condition(sel, cls, fam.partition)
    data = {
        "input_status": base.status,
        **cls.to_dict(),
        "lifted": {"coefs": {_label(J): str(v) for J, v in a.support().items()}, "delta": str(d)},
        "certificate": cert.to_dict(),
        "condition": cond,
        "agrees": (not base.is_facet) or cond == cert.is_facet,
    }
    terms = _terms(a.support())
    text = "\n".join(
        [
            f"input: {base.status}; V0 = {sorted(cls.V0)}, V1 = {sorted(cls.V1)}",
            f"lifted: {terms} <= {d}",
            f"certificate: {cert.status} (face dim {cert.face_dim}, polytope dim {cert.polytope_dim})",
            f"condition on V0/V1: {cond}",
        ]
    )
    _emit(args, data, text)
    return 0


def cmd_decompose(args) -> int:
    fam = close_family(load_instance(args.instance))
    H = fam.hypergraph
    parts = []
    for spec in (args.part1, args.part2):
        vs = _parse_ints(spec, "part")
        parts.append(Hypergraph(vs, tuple(e for e in H.edges if set(e) <= set(vs))))
    d = Decomposition(*parts)
    pre = check_precondition(d, H)
    rep = verify_decomposition(
        d, fam, args.vertex_guard or DEFAULT_DECOMPOSE_GUARD, require_precondition=False
    )
    data = {"shared": list(d.shared), **rep.to_dict()}
    text = (
        f"shared blocks {list(d.shared)}; precondition {'holds' if pre else 'fails'}\n"
        f"glued polytope {'equals' if rep.ok else 'differs from'} the hull"
        + (f" ({rep.reason})" if rep.reason else "")
    )
    _emit(args, data, text)
    return 0


def cmd_verify(args) -> int:
    wanted = set(_parse_ints(args.only, "--only")) if args.only else None
    results = []
    for k, check in enumerate(CHECKS, start=1):
        if wanted and k not in wanted:
            continue
        results.append(check(seed=args.seed) if check is check_solver_equivalence else check())
    data = {"passed": all(r.passed for r in results), "criteria": [r.to_dict() for r in results]}
    lines = []
    for r in results:
        lines.append(r.line())
        lines += [f"    failed: {f}" for f in r.failures]
    _emit(args, data, "\n".join(lines))
    return 0 if data["passed"] else InternalInvariantViolation.exit_code


def cmd_solve(args) -> int:
    inst = load_instance(args.instance)
    rep = solve(inst, args.method, args.guard)
    x = "".join(map(str, rep.argmax))
    text = f"optimum {rep.optimum} at x = {x} ({rep.method}, acyclic={rep.acyclic})"
    _emit(args, rep.to_dict(), text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mcpp", description="Exact toolkit for multiple choice polynomial programs.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("text", "json"), default="text")
    common.add_argument("--guard", type=int, default=DEFAULT_GUARD, help="point enumeration budget")
    common.add_argument(
        "--vertex-guard",
        type=int,
        default=None,
        help=f"max coordinates for vertex enumeration (default {DEFAULT_VERTEX_GUARD}, "
        f"{DEFAULT_DECOMPOSE_GUARD} for decompose-check)",
    )
    inst = argparse.ArgumentParser(add_help=False)
    inst.add_argument("--instance", required=True, help="instance JSON file or @NAME for a built-in")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common, inst], help="check an instance file")
    p.set_defaults(func=cmd_validate)
    p = sub.add_parser("hypergraph", parents=[common, inst], help="induced hypergraph and join tree")
    p.set_defaults(func=cmd_hypergraph)
    p = sub.add_parser("hrep", parents=[common, inst], help="emit a linear system")
    p.add_argument("--system", choices=("jointree", "cap", "affine"), default="jointree")
    p.add_argument("--form", choices=("D", "symmetric"), default="D", help="affine hull form")
    p.add_argument("--D", help="transversal for the affine hull, e.g. 2,4")
    p.set_defaults(func=cmd_hrep)
    p = sub.add_parser("enumerate", parents=[common, inst], help="list points or vertices")
    p.add_argument("--set", choices=("SH", "MP", "MCleq", "jointree", "cap"), default="SH")
    p.add_argument("--D", help="transversal for MCleq, e.g. 2,4")
    p.set_defaults(func=cmd_enumerate)
    p = sub.add_parser("certify", parents=[common, inst], help="classify an inequality")
    p.add_argument("--ineq", required=True)
    p.set_defaults(func=cmd_certify)
    p = sub.add_parser("lift", parents=[common, inst], help="lift a multilinear inequality")
    p.add_argument("--ineq", required=True)
    p.add_argument("--selection", required=True, help="JSON list of subsets, one per block")
    p.set_defaults(func=cmd_lift)
    p = sub.add_parser("decompose-check", parents=[common, inst], help="check a two-part decomposition")
    p.add_argument("--part1", required=True, help="block ids of the first part, e.g. 1,2")
    p.add_argument("--part2", required=True, help="block ids of the second part")
    p.set_defaults(func=cmd_decompose)
    p = sub.add_parser("verify-theorems", parents=[common], help="run the property suite on the battery")
    p.add_argument("--seed", type=int, default=0, help="seed for random objectives")
    p.add_argument("--only", help="comma separated criterion numbers")
    p.set_defaults(func=cmd_verify)
    p = sub.add_parser("solve", parents=[common, inst], help="solve an instance exactly")
    p.add_argument("--method", choices=METHODS, default="auto")
    p.set_defaults(func=cmd_solve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MCPPError as exc:
        print(f"error [{exc.kind}]: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
