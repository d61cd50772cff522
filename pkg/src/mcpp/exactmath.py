"""Exact rational linear algebra and a pivoting LP solver.

Values are :class:`fractions.Fraction` throughout. Elimination and simplex
pivots run on integer rows with a per-row denominator, renormalized by their
gcd after every operation, so no rounding ever happens and integer growth
stays bounded on the small systems this package works with.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import GuardExceeded, LabelMismatch

DEFAULT_VERTEX_GUARD = 24


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings. Floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        return Fraction(int(value))
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"refusing inexact value {value!r}; use int, Fraction or 'p/q'")


def _check_labels(labels) -> tuple:
    labels = tuple(labels)
    if len(set(labels)) != len(labels):
        raise LabelMismatch("duplicate coordinate labels")
    return labels


@dataclass(frozen=True)
class RVector:
    """Rational vector with explicit coordinate labels."""

    labels: tuple
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "values", tuple(as_rational(v) for v in self.values))
        if len(self.labels) != len(self.values):
            raise LabelMismatch("label and value counts differ")

    @classmethod
    def from_mapping(cls, labels: Sequence, mapping: Mapping) -> RVector:
        labels = tuple(labels)
        unknown = set(mapping) - set(labels)
        if unknown:
            raise LabelMismatch(f"unknown coordinates: {sorted(unknown, key=repr)}")
        return cls(labels, tuple(mapping.get(label, 0) for label in labels))

    @classmethod
    def zeros(cls, labels: Sequence) -> RVector:
        return cls(tuple(labels), (0,) * len(labels))

    @cached_property
    def index(self) -> dict:
        return {label: k for k, label in enumerate(self.labels)}

    def __getitem__(self, label) -> Fraction:
        return self.values[self.index[label]]

    def __len__(self) -> int:
        return len(self.values)

    def dot(self, other) -> Fraction:
        if isinstance(other, RVector):
            if other.labels != self.labels:
                raise LabelMismatch("dot product over different coordinate labels")
            other = other.values
        return sum((a * b for a, b in zip(self.values, other) if a), Fraction(0))

    def support(self) -> dict:
        return {label: v for label, v in zip(self.labels, self.values) if v}

    def scaled(self, factor) -> RVector:
        factor = as_rational(factor)
        return RVector(self.labels, tuple(v * factor for v in self.values))

    def reindexed(self, labels: Sequence) -> RVector:
        """Same vector over a superset of labels, zero elsewhere."""
        return RVector.from_mapping(labels, self.support())


@dataclass(frozen=True)
class PointSet:
    """A finite list of labelled rational points (a V-representation)."""

    labels: tuple
    points: tuple

    def __post_init__(self):
        labels = _check_labels(self.labels)
        points = tuple(tuple(as_rational(v) for v in p) for p in self.points)
        if any(len(p) != len(labels) for p in points):
            raise LabelMismatch("point length does not match labels")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "points", points)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, point) -> bool:
        if isinstance(point, RVector):
            point = point.values
        return tuple(point) in self.as_set()

    @cached_property
    def dim(self) -> int:
        """Affine dimension of the hull, computed once per set."""
        return affine_rank(self.points)

    def as_set(self) -> frozenset:
        return self._set

    @cached_property
    def _set(self) -> frozenset:
        return frozenset(self.points)

    def vectors(self) -> list[RVector]:
        return [RVector(self.labels, p) for p in self.points]

    def project(self, labels: Sequence) -> PointSet:
        idx = [self.labels.index(label) for label in labels]
        seen: dict = {}
        for p in self.points:
            seen.setdefault(tuple(p[k] for k in idx), None)
        return PointSet(tuple(labels), tuple(seen))

    def canonical(self) -> PointSet:
        return PointSet(self.labels, tuple(sorted(set(self.points))))


Row = tuple  # (coefficients aligned to labels, rhs)


@dataclass(frozen=True)
class LinearSystem:
    """Equalities ``a.w = d`` and inequalities ``a.w <= d`` over labelled coordinates.

    Nonnegativity is stored as ordinary inequality rows ``-w_J <= 0``.
    """

    labels: tuple
    equalities: tuple = ()
    inequalities: tuple = ()

    def __post_init__(self):
        labels = _check_labels(self.labels)
        object.__setattr__(self, "labels", labels)
        for name in ("equalities", "inequalities"):
            rows = []
            for coefs, rhs in getattr(self, name):
                coefs = tuple(as_rational(c) for c in coefs)
                if len(coefs) != len(labels):
                    raise LabelMismatch("row length does not match labels")
                rows.append((coefs, as_rational(rhs)))
            object.__setattr__(self, name, tuple(rows))

    @classmethod
    def build(cls, labels, equalities=(), inequalities=()) -> LinearSystem:
        """Build from sparse rows ``(mapping label -> coef, rhs)``."""
        labels = tuple(labels)
        dense = lambda rows: tuple(  # noqa: E731
            (RVector.from_mapping(labels, m).values, rhs) for m, rhs in rows
        )
        return cls(labels, dense(equalities), dense(inequalities))

    @staticmethod
    def nonnegativity_rows(labels) -> list:
        return [({label: -1}, 0) for label in labels]

    def row_violations(self, point) -> list[tuple[str, int]]:
        if isinstance(point, RVector):
            if point.labels != self.labels:
                raise LabelMismatch("point labels differ from system labels")
            point = point.values
        bad = []
        for k, (coefs, rhs) in enumerate(self.equalities):
            if _dot(coefs, point) != rhs:
                bad.append(("eq", k))
        for k, (coefs, rhs) in enumerate(self.inequalities):
            if _dot(coefs, point) > rhs:
                bad.append(("ineq", k))
        return bad

    def satisfied_by(self, point) -> bool:
        return not self.row_violations(point)

    def tight_rank(self, point) -> int:
        """Rank of the rows holding with equality at ``point``."""
        rows = [c for c, _ in self.equalities]
        rows += [c for c, rhs in self.inequalities if _dot(c, point) == rhs]
        return rank(rows)

    def reindexed(self, labels: Sequence) -> LinearSystem:
        """Embed into a superset of coordinates (new coordinates get zero coefficients)."""
        labels = _check_labels(labels)
        pos = {label: k for k, label in enumerate(labels)}
        missing = [label for label in self.labels if label not in pos]
        if missing:
            raise LabelMismatch(f"target labels lack {missing[:3]}")
        idx = [pos[label] for label in self.labels]

        def move(rows):
            out = []
            for coefs, rhs in rows:
                row = [Fraction(0)] * len(labels)
                for k, c in zip(idx, coefs):
                    row[k] = c
                out.append((tuple(row), rhs))
            return tuple(out)

        return LinearSystem(labels, move(self.equalities), move(self.inequalities))

    def __and__(self, other: LinearSystem) -> LinearSystem:
        if other.labels != self.labels:
            raise LabelMismatch("cannot intersect systems over different labels")
        return LinearSystem(
            self.labels,
            _dedup(self.equalities + other.equalities),
            _dedup(self.inequalities + other.inequalities),
        )


def _dedup(rows):
    return tuple(dict.fromkeys(rows))


def _dot(coefs, point) -> Fraction:
    return sum((a * b for a, b in zip(coefs, point) if a), Fraction(0))


# ---------------------------------------------------------------------------
# dense exact linear algebra


def _int_row(row) -> list[int]:
    row = [as_rational(x) for x in row]
    if not row:
        return []
    den = math.lcm(*(x.denominator for x in row))
    return [x.numerator * (den // x.denominator) for x in row]


def _primitive(row: list[int]) -> list[int]:
    g = math.gcd(*row)
    if g > 1:
        return [x // g for x in row]
    return row


def _echelon(rows: list[list[int]]) -> list[list[int]]:
    """Fraction-free forward elimination; returns the nonzero echelon rows."""
    rows = [r for r in rows if any(r)]
    if not rows:
        return []
    ncols = len(rows[0])
    out = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        p = prow[c]
        for i in range(r + 1, len(rows)):
            a = rows[i][c]
            if a:
                rows[i] = _primitive([p * x - a * y for x, y in zip(rows[i], prow)])
        out.append(prow)
        r += 1
        if r == len(rows):
            break
    return out


def rank(matrix: Iterable[Sequence]) -> int:
    """Exact rank by fraction-free Gaussian elimination."""
    return len(_echelon([_int_row(row) for row in matrix]))


def affine_rank(points: Iterable[Sequence]) -> int:
    """Dimension of the affine hull; -1 for an empty set."""
    points = [tuple(as_rational(v) for v in p) for p in points]
    if not points:
        return -1
    p0 = points[0]
    return rank([tuple(a - b for a, b in zip(p, p0)) for p in points[1:]])


def rref(matrix: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals and its pivot columns."""
    rows = [[as_rational(x) for x in row] for row in matrix]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        rows[r] = [x / p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def nullspace(matrix: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of ``{x : M x = 0}``."""
    if ncols is None:
        ncols = len(matrix[0]) if matrix else 0
    reduced, pivots = rref(matrix)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, pc in zip(reduced, pivots):
            x[pc] = -row[f]
        basis.append(x)
    return basis


def solve(matrix: Sequence[Sequence], rhs: Sequence) -> list[Fraction] | None:
    """One solution of ``M x = b`` (free variables set to 0), or None if inconsistent."""
    if not matrix:
        return []
    ncols = len(matrix[0])
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    reduced, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, pc in zip(reduced, pivots):
        x[pc] = row[-1]
    return x


def same_affine_subspace(a: Sequence[Row], b: Sequence[Row]) -> bool:
    """True iff two consistent equality systems have the same solution set."""
    aug_a = [list(c) + [d] for c, d in a]
    aug_b = [list(c) + [d] for c, d in b]
    ra, rb = rank(aug_a), rank(aug_b)
    if ra != rank([c for c, _ in a]) or rb != rank([c for c, _ in b]):
        raise ValueError("inconsistent equality system")
    return ra == rb == rank(aug_a + aug_b)


# ---------------------------------------------------------------------------
# simplex on integer rows


def _normalize(row: list[int], den: int) -> tuple[list[int], int]:
    g = math.gcd(den, *row)
    if den < 0:
        g = -g
    if g != 1:
        row = [x // g for x in row]
        den //= g
    return row, den


class _Tableau:
    """Rows ``[T | rhs]`` stored as ints over a positive per-row denominator."""

    def __init__(self, rows, dens, basis, ncols):
        self.rows = rows
        self.dens = dens
        self.basis = basis
        self.ncols = ncols
        self.obj: list[int] | None = None
        self.obj_den = 1
        self.pivots = 0

    def copy(self) -> _Tableau:
        t = _Tableau([list(r) for r in self.rows], list(self.dens), list(self.basis), self.ncols)
        if self.obj is not None:
            t.obj, t.obj_den = list(self.obj), self.obj_den
        return t

    def pivot(self, r: int, j: int) -> None:
        prow, pden = _normalize(self.rows[r], self.rows[r][j])
        self.rows[r], self.dens[r] = prow, pden
        for k, row in enumerate(self.rows):
            if k != r:
                a = row[j]
                if a:
                    self.rows[k], self.dens[k] = _normalize(
                        [x * pden - a * y for x, y in zip(row, prow)], self.dens[k] * pden
                    )
        if self.obj is not None and self.obj[j]:
            a = self.obj[j]
            self.obj, self.obj_den = _normalize(
                [x * pden - a * y for x, y in zip(self.obj, prow)], self.obj_den * pden
            )
        self.basis[r] = j
        self.pivots += 1

    def set_objective(self, costs: Sequence[Fraction]) -> None:
        """Reduced-cost row for maximizing ``costs . x`` at the current basis."""
        red = [as_rational(c) for c in costs] + [Fraction(0)]
        for row, den, b in zip(self.rows, self.dens, self.basis):
            cb = costs[b]
            if cb:
                for k, x in enumerate(row):
                    if x:
                        red[k] -= cb * Fraction(x, den)
        # last entry holds -z
        den = math.lcm(*(x.denominator for x in red))
        self.obj = [x.numerator * (den // x.denominator) for x in red]
        self.obj_den = den

    def entering(self) -> int | None:
        obj = self.obj
        for j in range(self.ncols):
            if obj[j] > 0:
                return j
        return None

    def ratio_row(self, j: int) -> int | None:
        """Bland leaving row: minimum ratio, ties to the smallest basic label."""
        best = None
        for r, row in enumerate(self.rows):
            a = row[j]
            if a > 0:
                if best is None:
                    best = r
                    continue
                brow = self.rows[best]
                lhs, rhs = row[-1] * brow[j], brow[-1] * a
                if lhs < rhs or (lhs == rhs and self.basis[r] < self.basis[best]):
                    best = r
        return best

    def run(self, max_pivots: int = 100000) -> str:
        while True:
            j = self.entering()
            if j is None:
                return "optimal"
            r = self.ratio_row(j)
            if r is None:
                return "unbounded"
            self.pivot(r, j)
            if self.pivots > max_pivots:
                raise RuntimeError("simplex pivot limit exceeded")

    def solution(self) -> list[Fraction]:
        x = [Fraction(0)] * self.ncols
        for row, den, b in zip(self.rows, self.dens, self.basis):
            x[b] = Fraction(row[-1], den)
        return x

    def value(self) -> Fraction:
        return -Fraction(self.obj[-1], self.obj_den)


class _StandardForm:
    """``A x = b, x >= 0`` equivalent of a LinearSystem.

    Coordinates with a nonnegativity row become sign-constrained columns;
    the others are split into a positive and a negative part. Every other
    inequality row gets a slack column. Redundant equations are dropped and
    inconsistent ones flagged during presolve.
    """

    def __init__(self, system: LinearSystem):
        self.system = system
        labels = system.labels
        n = len(labels)
        nonneg = set()
        general = []
        for coefs, rhs in system.inequalities:
            nz = [k for k, c in enumerate(coefs) if c]
            if rhs == 0 and len(nz) == 1 and coefs[nz[0]] < 0:
                nonneg.add(nz[0])
            else:
                general.append((coefs, rhs))
        # columns: (coordinate index, sign) or ("slack", row)
        self.columns: list[tuple] = []
        for k in range(n):
            self.columns.append((k, 1))
            if k not in nonneg:
                self.columns.append((k, -1))
        nslack = len(general)
        for s in range(nslack):
            self.columns.append(("slack", s))
        ncols = len(self.columns)

        def expand(coefs):
            row = []
            for k, sign in self.columns[: ncols - nslack]:
                row.append(coefs[k] * sign)
            return row

        raw = []
        for coefs, rhs in system.equalities:
            raw.append(expand(coefs) + [Fraction(0)] * nslack + [rhs])
        for s, (coefs, rhs) in enumerate(general):
            slack = [Fraction(0)] * nslack
            slack[s] = Fraction(1)
            raw.append(expand(coefs) + slack + [rhs])
        self.ncols = ncols
        self.feasible = True
        self.rows = self._presolve([_int_row(r) for r in raw])

    def _presolve(self, rows: list[list[int]]) -> list[list[int]]:
        kept, echelon = [], []
        for row in rows:
            v = list(row)
            for pc, brow in echelon:
                a = v[pc]
                if a:
                    p = brow[pc]
                    v = _primitive([p * x - a * y for x, y in zip(v, brow)])
            pc = next((c for c in range(self.ncols) if v[c]), None)
            if pc is None:
                if v[-1]:
                    self.feasible = False
                continue
            echelon.append((pc, v))
            kept.append(row if row[-1] >= 0 else [-x for x in row])
        return kept

    def to_coordinates(self, x: Sequence[Fraction]) -> tuple[Fraction, ...]:
        w = [Fraction(0)] * len(self.system.labels)
        for (k, sign), v in zip(self.columns, x):
            if k != "slack" and v:
                w[k] += sign * v
        return tuple(w)

    def costs(self, objective: Sequence[Fraction]) -> list[Fraction]:
        return [
            Fraction(0) if k == "slack" else objective[k] * sign for k, sign in self.columns
        ]


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: Fraction | None
    optimizer: RVector | None
    pivots: int = 0
    unique: bool = False

    def __iter__(self):
        return iter((self.value, self.optimizer, self.status))


class LPModel:
    """A LinearSystem compiled once (presolve plus phase one) for repeated solves."""

    def __init__(self, system: LinearSystem):
        self.system = system
        self.form = _StandardForm(system)
        self.phase1_pivots = 0
        self._tableau = self._phase_one() if self.form.feasible else None

    @property
    def feasible(self) -> bool:
        return self._tableau is not None

    def _phase_one(self) -> _Tableau | None:
        form = self.form
        n, m = form.ncols, len(form.rows)
        rows = []
        for i, row in enumerate(form.rows):
            art = [0] * m
            art[i] = 1
            rows.append(row[:-1] + art + [row[-1]])
        t = _Tableau(rows, [1] * m, list(range(n, n + m)), n + m)
        t.set_objective([Fraction(0)] * n + [Fraction(-1)] * m)
        t.run()
        if t.value() < 0:
            self.phase1_pivots = t.pivots
            return None
        for r in range(m):
            if t.basis[r] >= n:
                j = next(c for c in range(n) if t.rows[r][c])
                t.pivot(r, j)
        self.phase1_pivots = t.pivots
        rows = [row[:n] + [row[-1]] for row in t.rows]
        return _Tableau(rows, t.dens, t.basis, n)

    def maximize(self, objective) -> LPResult:
        labels = self.system.labels
        if isinstance(objective, RVector):
            if objective.labels != labels:
                raise LabelMismatch("objective labels differ from system labels")
            objective = objective.values
        elif isinstance(objective, Mapping):
            objective = RVector.from_mapping(labels, objective).values
        objective = [as_rational(c) for c in objective]
        if self._tableau is None:
            return LPResult("infeasible", None, None, self.phase1_pivots)
        t = self._tableau.copy()
        t.set_objective(self.form.costs(objective))
        status = t.run()
        pivots = self.phase1_pivots + t.pivots
        if status == "unbounded":
            return LPResult("unbounded", None, None, pivots)
        w = self.form.to_coordinates(t.solution())
        basic = set(t.basis)
        unique = all(t.obj[j] < 0 for j in range(t.ncols) if j not in basic)
        return LPResult("optimal", _dot(objective, w), RVector(labels, w), pivots, unique)

    def minimize(self, objective) -> LPResult:
        if isinstance(objective, Mapping):
            objective = RVector.from_mapping(self.system.labels, objective).values
        elif isinstance(objective, RVector):
            objective = objective.values
        res = self.maximize([-as_rational(c) for c in objective])
        if res.status != "optimal":
            return res
        return LPResult(res.status, -res.value, res.optimizer, res.pivots, res.unique)

    def vertices(self, guard: int = DEFAULT_VERTEX_GUARD) -> PointSet:
        """All vertices, by breadth-first search over lexicographically feasible bases."""
        labels = self.system.labels
        if len(labels) > guard:
            raise GuardExceeded(
                f"vertex enumeration over {len(labels)} coordinates exceeds guard {guard}"
            )
        if self._tableau is None:
            return PointSet(labels, ())
        start = self._tableau.copy()
        b0 = list(start.basis)
        seen = {frozenset(start.basis)}
        found: dict = {}
        queue = deque([start])
        while queue:
            t = queue.popleft()
            found.setdefault(self.form.to_coordinates(t.solution()), None)
            basic = set(t.basis)
            for j in range(t.ncols):
                if j in basic:
                    continue
                r = _lex_ratio_row(t, j, b0)
                if r is None:
                    continue
                nxt = set(t.basis)
                nxt.discard(t.basis[r])
                nxt.add(j)
                key = frozenset(nxt)
                if key in seen:
                    continue
                seen.add(key)
                child = t.copy()
                child.pivot(r, j)
                queue.append(child)
        points = sorted(found)
        for p in points:
            if not self.system.satisfied_by(p):
                raise AssertionError("enumerated vertex violates the system")
        return PointSet(labels, tuple(points))


def _lex_ratio_row(t: _Tableau, j: int, b0: Sequence[int]) -> int | None:
    best = None
    for r, row in enumerate(t.rows):
        a = row[j]
        if a <= 0:
            continue
        if best is None:
            best = r
            continue
        brow = t.rows[best]
        ba = brow[j]
        for col in [-1, *b0]:
            lhs, rhs = row[col] * ba, brow[col] * a
            if lhs != rhs:
                if lhs < rhs:
                    best = r
                break
    return best


def lp_maximize(system: LinearSystem, objective) -> LPResult:
    return LPModel(system).maximize(objective)


def enumerate_vertices(system: LinearSystem, guard: int = DEFAULT_VERTEX_GUARD) -> PointSet:
    if len(system.labels) > guard:
        raise GuardExceeded(
            f"vertex enumeration over {len(system.labels)} coordinates exceeds guard {guard}"
        )
    return LPModel(system).vertices(guard)


Label = Hashable
