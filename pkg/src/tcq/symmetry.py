"""Vertex-permutation symmetry and exact quotient chains.

A group of vertex permutations acts on state vectors by coordinate
relabelling. When the state space is closed under the action, the orbits
partition it into fibers. If every fiber's members carry identical
per-fiber transition mass and increment mass, the partition is exactly
lumpable and the quotient chain reproduces the distortion rate.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .chain import (
    MarkovChain,
    SourceModel,
    StationaryDistribution,
    decimal_string,
    distortion_rate,
    stationary,
)
from .errors import GraphStructureError, NotInvariantError, NotLumpableError
from .statespace import StateSpace
from .viterbi import StateVector

Permutation = tuple[int, ...]


def identity(n: int) -> Permutation:
    return tuple(range(n))


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Permutation acting as p after q."""
    return tuple(p[q[i]] for i in range(len(p)))


def invert(p: Permutation) -> Permutation:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def _check_permutation(p: Permutation, n: int) -> None:
    if len(p) != n or sorted(p) != list(range(n)):
        raise GraphStructureError(f"{p} is not a permutation of 0..{n - 1}")


@dataclass(frozen=True)
class PermutationGroup:
    degree: int
    elements: tuple[Permutation, ...]

    @classmethod
    def from_generators(
        cls, generators: tuple[Permutation, ...], degree: int
    ) -> PermutationGroup:
        """Closure of the generators under composition (includes identity)."""
        for p in generators:
            _check_permutation(p, degree)
        e = identity(degree)
        seen = {e}
        queue = deque([e])
        while queue:
            p = queue.popleft()
            for g in generators:
                nxt = compose(g, p)
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        return cls(degree=degree, elements=tuple(sorted(seen)))

    def __len__(self) -> int:
        return len(self.elements)


def parse_permutations(text: str, degree: int) -> tuple[Permutation, ...]:
    """One permutation per line: the images of vertices 0..n-1 in order.

    Blank lines and '#' comments are skipped.
    """
    out: list[Permutation] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            p = tuple(int(tok) for tok in line.split())
        except ValueError:
            raise GraphStructureError(
                f"permutation line {lineno}: entries must be integers"
            ) from None
        if len(p) != degree or sorted(p) != list(range(degree)):
            raise GraphStructureError(
                f"permutation line {lineno}: not a permutation of 0..{degree - 1}"
            )
        out.append(p)
    return tuple(out)


def xor_translation_group(bits: int) -> PermutationGroup:
    """The 2^bits permutations v -> v XOR c of vertices 0..2^bits - 1."""
    n = 1 << bits
    elements = tuple(tuple(v ^ c for v in range(n)) for c in range(n))
    return PermutationGroup(degree=n, elements=elements)


def apply_to_state(p: Permutation, s: StateVector) -> StateVector:
    """Relabelled state: component v reads the score of vertex p(v)."""
    return tuple(s[p[v]] for v in range(len(s)))


@dataclass(frozen=True)
class FiberPartition:
    """Partition of the state indices, fibers ordered by smallest member."""

    fibers: tuple[tuple[int, ...], ...]
    fiber_of: tuple[int, ...]

    def __post_init__(self) -> None:
        seen = sorted(i for fiber in self.fibers for i in fiber)
        assert seen == list(range(len(self.fiber_of))), "not a partition"
        for fi, fiber in enumerate(self.fibers):
            assert all(self.fiber_of[i] == fi for i in fiber)

    def __len__(self) -> int:
        return len(self.fibers)


def fiber_representatives(ss: StateSpace, fp: FiberPartition) -> tuple[int, ...]:
    """Canonical representative per fiber: lexicographically least state vector."""
    return tuple(min(fiber, key=lambda i: ss.states[i]) for fiber in fp.fibers)


def induced_fibers(ss: StateSpace, group: PermutationGroup) -> FiberPartition:
    """Orbit partition of the state space under the group action.

    Raises NotInvariantError if some element maps a reachable state to a
    vector outside the space.
    """
    if group.degree != ss.graph.num_vertices:
        raise NotInvariantError(
            f"permutations act on {group.degree} points,"
            f" graph has {ss.graph.num_vertices} vertices"
        )
    n = len(ss)
    fiber_of = [-1] * n
    fibers: list[tuple[int, ...]] = []
    for i in range(n):
        if fiber_of[i] != -1:
            continue
        orbit: set[int] = set()
        for p in group.elements:
            image = apply_to_state(p, ss.states[i])
            j = ss.index.get(image)
            if j is None:
                raise NotInvariantError(
                    f"permutation {p} maps state {ss.states[i]} to {image},"
                    " which is outside the state space"
                )
            orbit.add(j)
        fi = len(fibers)
        fibers.append(tuple(sorted(orbit)))
        for j in orbit:
            assert fiber_of[j] == -1, "orbits are not disjoint"
            fiber_of[j] = fi
    return FiberPartition(fibers=tuple(fibers), fiber_of=tuple(fiber_of))


@dataclass(frozen=True)
class QuotientChain:
    statespace: StateSpace
    partition: FiberPartition
    chain: MarkovChain

    def __len__(self) -> int:
        return len(self.partition)


def quotient(ss: StateSpace, src: SourceModel, fp: FiberPartition) -> QuotientChain:
    """Quotient chain over the fibers, after an exact lumpability check.

    Every member of a fiber must put the same total mass on each target
    fiber and the same mass on incrementing arcs; any disagreement raises
    NotLumpableError naming the fiber and a witness pair.
    """
    if src.alphabet != ss.graph.alphabet:
        raise NotLumpableError(0, 0, 0, "source alphabet does not match the graph")

    def profile(i: int) -> tuple[dict[int, Fraction], Fraction]:
        mass: dict[int, Fraction] = {}
        absorb = Fraction(0)
        for xi, (ti, inc) in enumerate(ss.arcs[i]):
            p = src.probabilities[xi]
            if p == 0:
                continue
            tf = fp.fiber_of[ti]
            mass[tf] = mass.get(tf, Fraction(0)) + p
            if inc:
                absorb += p
        return mass, absorb

    rows: list[dict[int, Fraction]] = []
    absorb: list[Fraction] = []
    for fi, fiber in enumerate(fp.fibers):
        ref_mass, ref_absorb = profile(fiber[0])
        for member in fiber[1:]:
            mass, a = profile(member)
            if mass != ref_mass:
                raise NotLumpableError(
                    fi,
                    fiber[0],
                    member,
                    f"target-fiber masses differ: {ref_mass} vs {mass}",
                )
            if a != ref_absorb:
                raise NotLumpableError(
                    fi,
                    fiber[0],
                    member,
                    f"increment masses differ: {ref_absorb} vs {a}",
                )
        rows.append(ref_mass)
        absorb.append(ref_absorb)
    mc = MarkovChain(size=len(fp), rows=tuple(rows), absorb=tuple(absorb))
    return QuotientChain(statespace=ss, partition=fp, chain=mc)


@dataclass(frozen=True)
class QuotientReport:
    distortion: Fraction
    distortion_decimal: str
    fiber_count: int
    q: tuple[Fraction, ...]
    stationary: StationaryDistribution


def quotient_analyze(qc: QuotientChain) -> QuotientReport:
    sd = stationary(qc.chain)
    d = distortion_rate(qc.chain, sd)
    return QuotientReport(
        distortion=d,
        distortion_decimal=decimal_string(d),
        fiber_count=len(qc.partition),
        q=sd.q,
        stationary=sd,
    )
