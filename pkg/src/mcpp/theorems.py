"""Executable checks of the structural results on the instance battery.

Each ``check_*`` function returns a :class:`CheckResult`; ``run_all`` runs
the nine checks in order. The same functions back the ``verify-theorems``
command and the acceptance tests.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import battery
from .decompose import Decomposition, check_precondition, verify_decomposition
from .exactmath import LPModel, RVector
from .hypergraph import Hypergraph, all_join_trees, is_alpha_acyclic
from .instance import MCPPInstance, Monomial, MonomialFamily, Partition
from .lifting import (
    compute_V0_V1,
    facet_catalog,
    flip,
    tight_avoidance_check,
    lift,
    proj_leq,
    selections,
    unproj,
    verify_lift_theorem,
)
from .oracle import (
    enumerate_MCleq_vertices,
    enumerate_MP_vertices,
    enumerate_SH,
    enumerate_X,
    w_of,
)
from .polytope import certify_inequality, equal_polytopes, member
from .relaxation import build_affine_hull, build_MC_cap, build_MC_T, check_cap_equals_T, implies
from .solver import solve


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool = True
    details: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    elapsed: float = 0.0

    def expect(self, ok: bool, what: str) -> bool:
        if ok:
            self.details.append(what)
        else:
            self.passed = False
            self.failures.append(what)
        return ok

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"[{verdict}] {self.number}. {self.name} ({len(self.details)} checks, {self.elapsed:.1f}s)"

    def to_dict(self) -> dict:
        return {
            "number": self.number,
            "name": self.name,
            "passed": self.passed,
            "checks": len(self.details),
            "failures": self.failures,
            "elapsed": round(self.elapsed, 3),
        }


def _timed(number: int, name: str):
    def wrap(fn):
        def run(*args, **kwargs):
            res = CheckResult(number, name)
            t = time.perf_counter()
            fn(res, *args, **kwargs)
            res.elapsed = time.perf_counter() - t
            return res

        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run

    return wrap


@_timed(1, "join-tree system equals the MCPP polytope (alpha-acyclic battery)")
def check_jointree_exact(res: CheckResult) -> None:
    for name in battery.VERTEX_BATTERY:
        fam = battery.family(name)
        H = fam.hypergraph
        res.expect(is_alpha_acyclic(H)[0], f"{name} is alpha-acyclic")
        small = (
            H.rank <= 3
            and max(len(b) for b in fam.partition.blocks) <= 3
            and len(fam) <= 24
        )
        res.expect(small, f"{name} within size limits (|J^H| = {len(fam)})")
        cmp = equal_polytopes(build_MC_T(fam).system, enumerate_SH(fam))
        res.expect(cmp.equal, f"{name}: vertices of the join-tree system = multilinear set")


@_timed(2, "pairwise system is a strict relaxation on the triangle")
def check_triangle_gap(res: CheckResult) -> None:
    fam = battery.family("TRI")
    res.expect(not is_alpha_acyclic(fam.hypergraph)[0], "TRI is not alpha-acyclic")
    SH = enumerate_SH(fam)
    cap = build_MC_cap(fam).system
    cmp = equal_polytopes(cap, SH)
    res.expect(not cmp.equal, "pairwise system differs from the hull")
    outside = [v for v in cmp.vertices if v not in SH.as_set() and not member(v, SH)]
    res.expect(bool(outside), f"{len(outside)} vertices of the pairwise system lie outside the hull")
    fractional = [v for v in outside if any(x not in (0, 1) for x in v)]
    res.expect(bool(fractional), "an outside vertex is fractional")
    for v in outside[:1]:
        m = member(v, SH)
        a, delta = m.separator
        ok = all(a.dot(s) <= delta for s in SH) and a.dot(v) > delta
        res.expect(ok, "separating inequality returned and verified")
    inst = battery.disagreement_instance("TRI")
    lp = LPModel(cap).maximize(fam.objective(inst))
    brute = solve(inst, "brute")
    res.expect(lp.value == 3, f"LP value over the pairwise system is {lp.value}")
    res.expect(brute.optimum == 2, f"brute-force optimum is {brute.optimum}")
    half = {(i,): Fraction(1, 2) for i in range(1, 7)}
    for J in fam.labels:
        if len(J) == 2:
            half[J] = fam.objective(inst)[J] / 2
    p = RVector.from_mapping(fam.labels, half)
    res.expect(cap.satisfied_by(p), "half point satisfies the pairwise system")
    res.expect(fam.objective(inst).dot(p) == 3, "half point attains LP value 3")
    res.expect(not member(p, SH), "half point is outside the hull")


def random_instance(fam: MonomialFamily, rng: random.Random) -> MCPPInstance:
    """Random small rational coefficients on every family monomial (ties happen)."""
    terms = []
    for J in fam.labels:
        num = rng.randint(-6, 6)
        den = rng.choice((1, 1, 2, 3))
        terms.append(Monomial(J, Fraction(num, den)))
    return MCPPInstance(fam.partition, tuple(terms))


@_timed(3, "LP route equals brute force on random objectives")
def check_solver_equivalence(res: CheckResult, seed: int = 0, count: int = 100) -> None:
    rng = random.Random(seed)
    for name in battery.LP_BATTERY:
        fam = battery.family(name)
        bad = 0
        for _ in range(count):
            inst = random_instance(fam, rng)
            lp = solve(inst, "lp")
            brute = solve(inst, "brute")
            if lp.optimum != brute.optimum or lp.argmax != brute.argmax:
                bad += 1
        res.expect(bad == 0, f"{name}: {count} objectives, {bad} mismatches")


def two_join_trees(H: Hypergraph) -> list:
    trees = all_join_trees(H)
    return trees[:2]


@_timed(4, "pairwise rows are implied by the join-tree system; tree choice is irrelevant")
def check_cap_equals_T_all(res: CheckResult) -> None:
    for name in battery.LP_BATTERY:
        fam = battery.family(name)
        trees = two_join_trees(fam.hypergraph)
        for k, tree in enumerate(trees):
            rep = check_cap_equals_T(fam, tree)
            res.expect(rep.ok, f"{name} tree {k}: {rep.checked} pairwise rows have min = max = 0")
        if len(trees) == 2:
            a = build_MC_T(fam, trees[0]).system
            b = build_MC_T(fam, trees[1]).system
            res.expect(implies(a, b).ok and implies(b, a).ok, f"{name}: two join trees give the same polytope")


def transversals(fam: MonomialFamily) -> list[tuple]:
    blocks = fam.partition.blocks
    first = tuple(b[0] for b in blocks)
    last = tuple(b[-1] for b in blocks)
    mixed = tuple(b[k % len(b)] for k, b in enumerate(blocks))
    return list(dict.fromkeys((last, first, mixed)))


@_timed(5, "full-dimensional projection, its inverse and the affine hull")
def check_affine_hull(res: CheckResult) -> None:
    for name in battery.DOWNWARD_CLOSED_BATTERY:
        fam = battery.family(name)
        SH = enumerate_SH(fam)
        expected = math.prod(len(b) for b in fam.partition.blocks)
        for D in transversals(fam):
            tag = f"{name} D={list(D)}"
            leq = fam.leq(D)
            V = enumerate_MCleq_vertices(fam, D)
            res.expect(len(V) == expected, f"{tag}: {len(V)} companion vertices")
            res.expect(V.dim == len(leq), f"{tag}: companion polytope full-dimensional ({len(leq)})")
            projected = {proj_leq(w, D, fam).values for w in SH.vectors()}
            res.expect(projected == V.as_set(), f"{tag}: projection maps the multilinear set onto the companion vertices")
            round_trip = all(unproj(proj_leq(w, D, fam), D, fam) == w for w in SH.vectors())
            res.expect(round_trip, f"{tag}: unproj o proj = id on the multilinear set")
            back = all(proj_leq(unproj(v, D, fam), D, fam) == v for v in V.vectors())
            res.expect(back, f"{tag}: proj o unproj = id on the companion vertices")
            hull = build_affine_hull(fam, D)
            res.expect(hull.rank == len(fam) - len(leq), f"{tag}: hull equations have rank {hull.rank}")
            res.expect(all(hull.d_form.system.satisfied_by(w) for w in SH), f"{tag}: equations vanish on the multilinear set")
            res.expect(all(hull.symmetric.system.satisfied_by(w) for w in SH), f"{tag}: symmetric equations vanish on the multilinear set")
            res.expect(hull.coincide(), f"{tag}: both forms define the same affine subspace")
            res.expect(SH.dim == len(leq), f"{tag}: dim of the hull is |J_leq|")


LIFT_INSTANCES = {
    "EDGE22": (),
    "EDGE32": (),
    "EDGE33": (),
    "C4": ((1, 2, 3, 4),),
}


def catalog_for(name: str):
    fam = battery.family(name)
    mp = enumerate_MP_vertices(fam.hypergraph)
    return fam, mp, facet_catalog(fam.hypergraph, mp, LIFT_INSTANCES.get(name, ()))


@_timed(6, "lifted facets: condition on V0/V1 matches rank certification")
def check_lift_theorem(res: CheckResult) -> None:
    for name in LIFT_INSTANCES:
        fam, mp, catalog = catalog_for(name)
        SH = enumerate_SH(fam)
        total = bad = 0
        for ineq in catalog:
            rep = verify_lift_theorem(ineq, fam, mp, SH)
            total += len(rep.verdicts)
            bad += len(rep.disagreements)
        res.expect(bool(catalog), f"{name}: catalog has {len(catalog)} certified facets")
        res.expect(bad == 0, f"{name}: {total} selections, {bad} disagreements")
        if name == "C4":
            cycles = [i for i in catalog if i.name.startswith("cycle")]
            empty = [i for i in cycles if not (compute_V0_V1(i, mp).V0 or compute_V0_V1(i, mp).V1)]
            res.expect(bool(empty), f"C4: {len(empty)} cycle facets with V0 = V1 = empty")


@_timed(7, "gluing along a vertex, an edge or nothing")
def check_decomposition(res: CheckResult) -> None:
    cases = [
        ("PATH3 split at block 2", (2, 2, 2), [(1, 2), (2, 3)], ((1, 2), [(1, 2)]), ((2, 3), [(2, 3)])),
        ("disjoint union", (2, 2, 2, 2), [(1, 2), (3, 4)], ((1, 2), [(1, 2)]), ((3, 4), [(3, 4)])),
        (
            "shared edge",
            (2, 2, 2, 2),
            [(1, 2, 3), (1, 2, 4), (1, 2)],
            ((1, 2, 3), [(1, 2, 3), (1, 2)]),
            ((1, 2, 4), [(1, 2, 4), (1, 2)]),
        ),
        (
            "triangle glued to a pendant edge",
            (2, 2, 2, 2),
            [(1, 2), (2, 3), (1, 3), (3, 4)],
            ((1, 2, 3), [(1, 2), (2, 3), (1, 3)]),
            ((3, 4), [(3, 4)]),
        ),
    ]
    for title, sizes, edges, (v1, e1), (v2, e2) in cases:
        p = Partition.of_sizes(*sizes)
        fam = MonomialFamily(p, Hypergraph(p.ids, tuple(edges)))
        d = Decomposition(Hypergraph(v1, tuple(e1)), Hypergraph(v2, tuple(e2)))
        res.expect(check_precondition(d, fam.hypergraph), f"{title}: precondition holds")
        rep = verify_decomposition(d, fam)
        res.expect(rep.ok, f"{title}: glued polytope equals the hull ({rep.routes})")
    p = Partition.of_sizes(2, 2, 2)
    fam = MonomialFamily(p, Hypergraph(p.ids, ((1, 2), (2, 3), (1, 3))))
    d = Decomposition(Hypergraph((1, 2, 3), ((1, 2), (2, 3))), Hypergraph((1, 3), ((1, 3),)))
    res.expect(not check_precondition(d, fam.hypergraph), "triangle split: precondition fails")
    rep = verify_decomposition(d, fam, require_precondition=False)
    frac = rep.counterexample is not None and any(x not in (0, 1) for x in rep.counterexample)
    res.expect(not rep.ok and frac, "triangle split: glued polytope admits a fractional point")


@_timed(8, "tight vertices avoiding U project full-dimensionally")
def check_tight_avoidance(res: CheckResult) -> None:
    for name in ("EDGE32", "C4"):
        fam, mp, catalog = catalog_for(name)
        cases = bad = 0
        for ineq in catalog:
            for case in tight_avoidance_check(ineq, fam.hypergraph, mp):
                cases += 1
                bad += not case.ok
        res.expect(cases > 0 and bad == 0, f"{name}: {cases} (facet, U) cases, {bad} rank deficits")


def _subset_uniform(fam: MonomialFamily) -> bool:
    p = fam.partition
    for J in fam.labels:
        for i in J:
            for k in p.block(p.block_of(i)):
                swapped = tuple(sorted((set(J) - {i}) | {k}))
                if swapped not in fam.label_set or fam.edge_of(swapped) != fam.edge_of(J):
                    return False
    return True


@_timed(9, "invariants: uniformity, counts, bijectivity, edge sums, flips, rescaling")
def check_invariants(res: CheckResult) -> None:
    for name in battery.SPECS:
        fam = battery.family(name)
        p = fam.partition
        res.expect(_subset_uniform(fam), f"{name}: family is subset-uniform")
        counts = all(
            len(fam.group(e)) == math.prod(p.size(I) for I in e) for e in fam.hypergraph.groups()
        )
        res.expect(counts and len(fam) == fam.expected_size(), f"{name}: group sizes are block products")
        X = enumerate_X(p)
        W = {w_of(x, fam).values for x in X}
        res.expect(len(W) == len(X), f"{name}: x -> w is injective on {len(X)} points")
        pos = {J: k for k, J in enumerate(fam.labels)}
        sums = all(
            sum(w[pos[J]] for J in fam.group(e)) == 1 for w in W for e in fam.hypergraph.edges
        )
        res.expect(sums, f"{name}: every edge group sums to 1")
    for name in ("EDGE22", "EDGE32", "C4", "FULL3"):
        fam = battery.family(name)
        H = fam.hypergraph
        mp = enumerate_MP_vertices(H)
        catalog = facet_catalog(H, mp, LIFT_INSTANCES.get(name, ()))
        inv = moved = 0
        for ineq in catalog:
            cls = compute_V0_V1(ineq, mp)
            for v in H.vertices:
                f = flip(ineq, v, H)
                inv += flip(f, v, H).key() == ineq.key()
                after = compute_V0_V1(f, mp)
                if not certify_inequality(f.c, f.delta, mp).is_facet:
                    continue
                swap = (v in cls.V0) == (v in after.V1) and (v in cls.V1) == (v in after.V0)
                moved += swap
        n = len(catalog) * len(H.vertices)
        res.expect(inv == n, f"{name}: flip is an involution ({inv}/{n})")
        res.expect(moved == n, f"{name}: flips keep facets and swap the block between V0 and V1 ({moved}/{n})")
        SH = enumerate_SH(fam)
        same = total = 0
        for ineq in catalog[:6]:
            for sel in itertools.islice(selections(fam.partition), 6):
                a, delta = lift(ineq, sel, fam)
                base = certify_inequality(a, delta, SH)
                for s in (Fraction(3, 2), Fraction(7)):
                    c = certify_inequality(a.scaled(s), delta * s, SH)
                    total += 1
                    same += c.status == base.status and c.tight_points == base.tight_points
        res.expect(same == total, f"{name}: certificates invariant under positive rescaling ({same}/{total})")


CHECKS = (
    check_jointree_exact,
    check_triangle_gap,
    check_solver_equivalence,
    check_cap_equals_T_all,
    check_affine_hull,
    check_lift_theorem,
    check_decomposition,
    check_tight_avoidance,
    check_invariants,
)


def run_all(seed: int = 0) -> list[CheckResult]:
    out = []
    for check in CHECKS:
        if check is check_solver_equivalence:
            out.append(check(seed=seed))
        else:
            out.append(check())
    return out
