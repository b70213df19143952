"""Hamming distortion, per-symbol best-path cost updates, and a full encoder.

The core object is the vector of minimum accumulated distortions into each
vertex. ``transition`` advances it by one source symbol; ``reduced_transition``
additionally subtracts the new minimum component, which keeps the vectors
bounded and returns the subtracted amount as the per-step distortion
increment (always 0 or 1 for Hamming distortion).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .errors import InstanceTooLargeError
from .graph import LabeledGraph

StateVector = tuple[int, ...]


class StepResult(NamedTuple):
    next_reduced: StateVector
    increment: int


@dataclass(frozen=True)
class EncodingResult:
    path: tuple[int, ...]  # edge indices, in graph edge order
    labels: tuple[str, ...]
    total_distortion: int


def hamming(a1: str, a2: str) -> int:
    """0 iff the symbols are equal, else 1."""
    return 0 if a1 == a2 else 1


def zero_state(g: LabeledGraph) -> StateVector:
    return (0,) * g.num_vertices


def transition(g: LabeledGraph, s: StateVector, x: str) -> StateVector:
    """One-symbol update: new cost into v = min over incoming (v', e) of
    s(v') + hamming(x, label(e)). Not reduced."""
    if len(s) != g.num_vertices:
        raise ValueError("state vector length does not match vertex count")
    if x not in g.symbol_index:
        raise ValueError(f"symbol {x!r} not in alphabet")
    out = []
    for v, pairs in enumerate(g.incoming):
        if not pairs:
            raise ValueError(
                f"vertex {g.vertices[v]!r} has no incoming edge; "
                "cost updates need one per vertex"
            )
        out.append(min(s[u] + (0 if lab == x else 1) for u, lab in pairs))
    return tuple(out)


def reduced_transition(g: LabeledGraph, s: StateVector, x: str) -> StepResult:
    """Advance a reduced state; the subtracted minimum is the increment."""
    if min(s) != 0:
        raise ValueError("state vector is not reduced (minimum component != 0)")
    t = transition(g, s, x)
    m = min(t)
    return StepResult(tuple(c - m for c in t), m)


def encode(g: LabeledGraph, xs: Sequence[str]) -> EncodingResult:
    """Minimum-Hamming-distortion path of length len(xs), any start vertex.

    Ties are broken deterministically: at every stage the lowest incoming
    edge index wins, and the final vertex is the lowest-index minimizer.
    """
    if not xs:
        raise ValueError("cannot encode an empty sequence")
    sym = g.symbol_index
    for x in xs:
        if x not in sym:
            raise ValueError(f"symbol {x!r} not in alphabet")

    n = g.num_vertices
    unreachable = len(xs) + 1  # exceeds any attainable total distortion
    cost = [0] * n
    back: list[list[int]] = []  # per step, per vertex: chosen edge index
    for x in xs:
        new_cost = [unreachable] * n
        choice = [-1] * n
        for v, pairs in enumerate(g.incoming_edges):
            best = unreachable
            best_edge = -1
            for u, ei in pairs:
                c = cost[u] + (0 if g.edges[ei].label == x else 1)
                if c < best:
                    best = c
                    best_edge = ei
            new_cost[v] = best
            choice[v] = best_edge
        cost = new_cost
        back.append(choice)

    final = min(range(n), key=cost.__getitem__)
    path_rev = []
    v = final
    vi = g.vertex_index
    for choice in reversed(back):
        ei = choice[v]
        path_rev.append(ei)
        v = vi[g.edges[ei].src]
    path = tuple(reversed(path_rev))
    labels = tuple(g.edges[ei].label for ei in path)
    return EncodingResult(path, labels, cost[final])


def count_paths(g: LabeledGraph, length: int) -> int:
    """Exact number of directed paths of the given length (any start)."""
    counts = [1] * g.num_vertices
    vi = g.vertex_index
    for _ in range(length):
        nxt = [0] * g.num_vertices
        for e in g.edges:
            nxt[vi[e.src]] += counts[vi[e.dst]]
        counts = nxt
    return sum(counts)


def brute_force_min(
    g: LabeledGraph, xs: Sequence[str], max_paths: int = 10**7
) -> int:
    """Minimum total distortion by explicit enumeration of every path.

    Independent of the dynamic-programming encoder; guarded by a cap on the
    number of paths to enumerate.
    """
    if not xs:
        raise ValueError("cannot encode an empty sequence")
    n_paths = count_paths(g, len(xs))
    if n_paths > max_paths:
        raise InstanceTooLargeError(
            f"{n_paths} paths of length {len(xs)} exceed the cap {max_paths}"
        )
    vi = g.vertex_index
    out = g.out_edges
    n = len(xs)
    best = n + 1
    # DFS over (vertex, depth, accumulated cost)
    for start in range(g.num_vertices):
        stack = [(start, 0, 0)]
        while stack:
            v, depth, acc = stack.pop()
            if depth == n:
                if acc < best:
                    best = acc
                continue
            if acc >= best:
                # a full traversal cannot beat `best`; costs only grow
                continue
            x = xs[depth]
            for ei in out[v]:
                e = g.edges[ei]
                stack.append((vi[e.dst], depth + 1, acc + (0 if e.label == x else 1)))
    return best
