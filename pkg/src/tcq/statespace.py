"""Enumeration of the reachable reduced state vectors and their arc table.

The space is the closure of the zero vector under the reduced transition,
over every alphabet symbol. It is finite: every component of every
reachable reduced vector is bounded by the graph's exact-path constant k.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

from . import viterbi
from .errors import ComponentBoundError, GraphStructureError, StateSpaceLimitError
from .graph import LabeledGraph, exact_path_constant, validate
from .viterbi import StateVector


@dataclass(frozen=True)
class StateSpace:
    graph: LabeledGraph
    k: int
    states: tuple[StateVector, ...]  # discovery order, zero vector first
    # arcs[state][symbol_index] = (successor state index, increment in {0,1})
    arcs: tuple[tuple[tuple[int, int], ...], ...]
    # BFS tree: parents[i] = (parent state index, symbol index); None for the root
    parents: tuple[tuple[int, int] | None, ...]

    @cached_property
    def index(self) -> dict[StateVector, int]:
        return {s: i for i, s in enumerate(self.states)}

    def __len__(self) -> int:
        return len(self.states)

    def witness(self, state_idx: int) -> list[str]:
        """A symbol sequence that drives the zero vector to this state."""
        out: list[str] = []
        i = state_idx
        while self.parents[i] is not None:
            parent, xi = self.parents[i]  # type: ignore[misc]
            out.append(self.graph.alphabet[xi])
            i = parent
        out.reverse()
        return out


class MembershipResult(NamedTuple):
    in_space: bool
    incremented: bool


def enumerate_states(g: LabeledGraph, max_states: int = 10**6) -> StateSpace:
    """Breadth-first closure from the zero vector under the reduced transition.

    Arc order is (state discovery order x alphabet order). Raises if the
    graph is not strongly connected and aperiodic, if the space exceeds
    ``max_states``, or if any component exceeds the exact-path constant
    (the latter signals a bug, not bad input).
    """
    report = validate(g)
    if not (report.strongly_connected and report.aperiodic):
        raise GraphStructureError(
            "state-space enumeration requires a strongly connected aperiodic graph"
            f" (strongly_connected={report.strongly_connected},"
            f" aperiodic={report.aperiodic})"
        )
    k = exact_path_constant(g)

    zero = viterbi.zero_state(g)
    states: list[StateVector] = [zero]
    index: dict[StateVector, int] = {zero: 0}
    arcs: list[tuple[tuple[int, int], ...]] = []
    parents: list[tuple[int, int] | None] = [None]

    queue: deque[int] = deque([0])
    while queue:
        si = queue.popleft()
        s = states[si]
        row: list[tuple[int, int]] = []
        for xi, x in enumerate(g.alphabet):
            nxt, inc = viterbi.reduced_transition(g, s, x)
            if max(nxt) > k:
                raise ComponentBoundError(
                    f"state {nxt} from ({s}, {x!r}) exceeds the bound k={k}"
                )
            ti = index.get(nxt)
            if ti is None:
                ti = len(states)
                if ti >= max_states:
                    raise StateSpaceLimitError(
                        f"more than {max_states} states; raise max_states to continue"
                    )
                index[nxt] = ti
                states.append(nxt)
                parents.append((si, xi))
                queue.append(ti)
            row.append((ti, inc))
        arcs.append(tuple(row))

    return StateSpace(
        graph=g,
        k=k,
        states=tuple(states),
        arcs=tuple(arcs),
        parents=tuple(parents),
    )


def check_component_bound(ss: StateSpace) -> bool:
    """True iff every component of every state is at most k."""
    return all(max(s) <= ss.k for s in ss.states)


def membership_increment(ss: StateSpace, s: StateVector, x: str) -> MembershipResult:
    """Whether the unreduced successor of (s, x) stays inside the space.

    It leaves the space exactly when the step increments: the unreduced
    successor has minimum component > 0 iff the arc's increment is 1.
    Both facts are recomputed and cross-asserted here.
    """
    si = ss.index.get(s)
    if si is None:
        raise KeyError(f"state {s} is not in the enumerated space")
    xi = ss.graph.symbol_index[x]
    _, inc = ss.arcs[si][xi]

    unreduced = viterbi.transition(ss.graph, s, x)
    m = min(unreduced)
    in_space = unreduced in ss.index
    assert (inc == 1) == (m > 0) == (not in_space), (
        "membership/increment equivalence violated"
    )
    return MembershipResult(in_space=in_space, incremented=inc == 1)


def format_statespace(ss: StateSpace) -> str:
    """Stable text dump: header, one state per line, then the arc table.

    Arc lines read ``<state-index> <symbol> <successor-index> <increment>``.
    """
    lines = [
        f"vertices: {ss.graph.num_vertices}",
        "alphabet: " + " ".join(ss.graph.alphabet),
        f"k: {ss.k}",
        f"states: {len(ss.states)}",
    ]
    lines.extend(" ".join(str(c) for c in s) for s in ss.states)
    lines.append("arcs:")
    for si, row in enumerate(ss.arcs):
        for xi, (ti, inc) in enumerate(row):
            lines.append(f"{si} {ss.graph.alphabet[xi]} {ti} {inc}")
    return "\n".join(lines) + "\n"
