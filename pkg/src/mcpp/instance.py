"""MCPP instances: the block partition, monomial terms and the closed family.

Indices are 1-based ints. Blocks are identified by their 1-based position in
the partition, so block 1 is the first block listed. A monomial is a sorted
tuple of indices; the closed family groups its monomials by the set of
blocks they touch.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable

from .errors import (
    BlockConflict,
    LabelMismatch,
    ParseError,
    UnlinearizableMonomial,
    ValidationError,
)
from .exactmath import RVector, as_rational
from .hypergraph import Hypergraph


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str

    def to_dict(self) -> dict:
        return {"kind": self.kind, "message": self.message}


@dataclass(frozen=True)
class Partition:
    """Blocks of [n]. Construction does not validate; call :meth:`violations`."""

    blocks: tuple
    n: int | None = None

    def __post_init__(self):
        blocks = tuple(tuple(sorted(b)) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        if self.n is None:
            object.__setattr__(self, "n", max((max(b) for b in blocks if b), default=0))

    @classmethod
    def of_sizes(cls, *sizes: int) -> Partition:
        blocks, start = [], 1
        for s in sizes:
            blocks.append(tuple(range(start, start + s)))
            start += s
        return cls(tuple(blocks), start - 1)

    @property
    def ids(self) -> tuple:
        return tuple(range(1, len(self.blocks) + 1))

    def block(self, k: int) -> tuple:
        return self.blocks[k - 1]

    def size(self, k: int) -> int:
        return len(self.blocks[k - 1])

    @cached_property
    def _owner(self) -> dict:
        owner = {}
        for k, b in enumerate(self.blocks, start=1):
            for i in b:
                owner.setdefault(i, k)
        return owner

    def block_of(self, i: int) -> int:
        try:
            return self._owner[i]
        except KeyError:
            raise ValidationError(f"index {i} lies in no block") from None

    def violations(self) -> list[Violation]:
        out = []
        seen: dict = {}
        for k, b in enumerate(self.blocks, start=1):
            if len(b) < 2:
                out.append(Violation("singleton-block", f"block I{k} = {list(b)} has fewer than 2 indices"))
            for i in b:
                if i in seen and seen[i] != k:
                    out.append(
                        Violation("overlap-between-blocks", f"index {i} lies in blocks I{seen[i]} and I{k}")
                    )
                seen.setdefault(i, k)
        union = set(seen)
        if union != set(range(1, self.n + 1)):
            out.append(
                Violation(
                    "block-union-not-[n]",
                    f"blocks cover {sorted(union)} instead of 1..{self.n}",
                )
            )
        return out

    def to_list(self) -> list:
        return [list(b) for b in self.blocks]


def edge_of(J: Iterable[int], p: Partition) -> tuple:
    """Blocks touched by J, as a sorted tuple of block ids."""
    touched = []
    for i in J:
        touched.append(p.block_of(i))
    if len(set(touched)) != len(touched):
        raise BlockConflict(f"monomial {sorted(J)} hits a block twice")
    return tuple(sorted(touched))


@dataclass(frozen=True)
class Monomial:
    vars: tuple
    coef: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(sorted(self.vars)))
        object.__setattr__(self, "coef", as_rational(self.coef))

    def to_dict(self) -> dict:
        return {"vars": list(self.vars), "coef": str(self.coef)}


@dataclass(frozen=True)
class MCPPInstance:
    partition: Partition
    terms: tuple = ()
    offset: Fraction = Fraction(0)
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "offset", as_rational(self.offset))

    @property
    def n(self) -> int:
        return self.partition.n

    @classmethod
    def from_dict(cls, data: dict, simplify: bool = False, name: str = "") -> MCPPInstance:
        if not isinstance(data, dict):
            raise ParseError("instance must be a JSON object")
        unknown = set(data) - {"n", "blocks", "terms"}
        if unknown:
            raise ParseError(f"unknown keys {sorted(unknown)}")
        for key in ("n", "blocks"):
            if key not in data:
                raise ParseError(f"missing key '{key}'")
        n = data["n"]
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise ParseError("'n' must be a positive integer")
        try:
            blocks = tuple(tuple(_index(i) for i in b) for b in data["blocks"])
        except TypeError:
            raise ParseError("'blocks' must be a list of index lists") from None
        terms, offset = [], Fraction(0)
        for t in data.get("terms", []):
            if not isinstance(t, dict) or set(t) - {"vars", "coef"} or "vars" not in t:
                raise ParseError(f"bad term {t!r}; expected {{'vars': [...], 'coef': ...}}")
            vs = [_index(i) for i in t["vars"]]
            if len(set(vs)) != len(vs):
                raise ParseError(f"term {vs} repeats an index")
            coef = _coef(t.get("coef", 1))
            if not vs:
                offset += coef
            else:
                terms.append(Monomial(tuple(vs), coef))
        inst = cls(Partition(blocks, n), tuple(terms), offset, name)
        return inst.simplified() if simplify else inst

    def to_dict(self) -> dict:
        terms = [t.to_dict() for t in self.terms]
        if self.offset:
            terms.append({"vars": [], "coef": str(self.offset)})
        return {"n": self.n, "blocks": self.partition.to_list(), "terms": terms}

    def simplified(self) -> MCPPInstance:
        """Drop monomials hitting a block twice (they vanish on feasible points)
        and merge duplicate terms."""
        merged: dict = {}
        for t in self.terms:
            try:
                edge_of(t.vars, self.partition)
            except BlockConflict:
                continue
            merged[t.vars] = merged.get(t.vars, Fraction(0)) + t.coef
        terms = tuple(Monomial(v, c) for v, c in merged.items())
        return MCPPInstance(self.partition, terms, self.offset, self.name)

    def violations(self) -> list[Violation]:
        out = self.partition.violations()
        seen = set()
        for t in self.terms:
            if any(not 1 <= i <= self.n for i in t.vars):
                out.append(Violation("index-out-of-range", f"term {list(t.vars)} leaves 1..{self.n}"))
                continue
            blocks = [
                k for k, b in enumerate(self.partition.blocks, start=1) for i in t.vars if i in b
            ]
            if len(set(blocks)) != len(blocks):
                out.append(
                    Violation("monomial-hits-block-twice", f"term {list(t.vars)} hits a block twice")
                )
            if t.vars in seen:
                out.append(Violation("duplicate-term", f"term {list(t.vars)} appears twice"))
            seen.add(t.vars)
        return out

    def validate(self) -> MCPPInstance:
        bad = self.violations()
        if bad:
            raise ValidationError("; ".join(v.message for v in bad), kind=bad[0].kind)
        return self

    def value(self, x) -> Fraction:
        """f(x) for a 0-1 vector x over [n] (position i-1 holds x_i)."""
        total = self.offset
        for t in self.terms:
            if all(x[i - 1] for i in t.vars):
                total += t.coef
        return total


def _index(i) -> int:
    if not isinstance(i, int) or isinstance(i, bool):
        raise ParseError(f"index {i!r} is not an integer")
    return i


def _coef(c) -> Fraction:
    if isinstance(c, float):
        raise ParseError(f"coefficient {c!r} is a float; write it as an integer or 'p/q'")
    try:
        return as_rational(c)
    except (TypeError, ValueError, ZeroDivisionError):
        raise ParseError(f"bad coefficient {c!r}") from None


def induce_hypergraph(inst: MCPPInstance) -> Hypergraph:
    """V = block ids, E = the distinct block sets of multi-block terms."""
    p = inst.partition
    edges = set()
    for t in inst.terms:
        e = edge_of(t.vars, p)
        if len(e) > 1:
            edges.add(e)
    return Hypergraph(p.ids, tuple(edges))


@dataclass(frozen=True)
class MonomialFamily:
    """The closed family: all monomials picking one index from each block of
    some e in L(V) u E."""

    partition: Partition
    hypergraph: Hypergraph

    def __post_init__(self):
        if set(self.hypergraph.vertices) != set(self.partition.ids):
            raise ValidationError("hypergraph vertices must be exactly the block ids")

    @cached_property
    def groups(self) -> dict:
        out = {}
        for e in self.hypergraph.groups():
            out[e] = self.group(e)
        return out

    def group(self, e) -> tuple:
        """All J picking one index per block of e, in lexicographic order."""
        return tuple(itertools.product(*(self.partition.block(k) for k in sorted(e))))

    @cached_property
    def labels(self) -> tuple:
        return tuple(sorted(J for g in self.groups.values() for J in g))

    @cached_property
    def label_set(self) -> frozenset:
        return frozenset(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, J) -> bool:
        return tuple(sorted(J)) in self.label_set

    def edge_of(self, J) -> tuple:
        return edge_of(J, self.partition)

    def leq(self, D) -> tuple:
        """Labels avoiding the transversal D."""
        D = set(self.validate_transversal(D))
        return tuple(J for J in self.labels if not D & set(J))

    def validate_transversal(self, D) -> tuple:
        D = tuple(sorted(D))
        hits = [self.partition.block_of(i) for i in D]
        if sorted(hits) != list(self.partition.ids):
            raise ValidationError(
                f"{list(D)} does not pick exactly one index per block", kind="D-not-a-transversal"
            )
        return D

    def objective(self, inst: MCPPInstance) -> RVector:
        """Coefficient vector of inst over the family (zeros off the terms)."""
        coefs: dict = {}
        for t in inst.terms:
            if t.vars not in self.label_set:
                raise UnlinearizableMonomial(t.vars)
            coefs[t.vars] = coefs.get(t.vars, Fraction(0)) + t.coef
        return RVector.from_mapping(self.labels, coefs)

    def expected_size(self) -> int:
        return sum(math.prod(self.partition.size(k) for k in e) for e in self.hypergraph.groups())

    def coordinate(self, J) -> tuple:
        J = tuple(sorted(J))
        if J not in self.label_set:
            raise LabelMismatch(f"{list(J)} is not a coordinate of the family")
        return J


def close_family(inst: MCPPInstance, H: Hypergraph | None = None) -> MonomialFamily:
    """Closed family for inst, over its induced hypergraph or a given supergraph."""
    inst.validate()
    induced = induce_hypergraph(inst)
    if H is None:
        H = induced
    elif not induced.is_subhypergraph_of(H) or set(H.vertices) != set(induced.vertices):
        raise ValidationError("hypergraph must contain the induced hypergraph on the same vertices")
    return MonomialFamily(inst.partition, H)
