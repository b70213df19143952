from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_code_graph, random_sequence
from tcq import (
    InstanceTooLargeError,
    brute_force_min,
    count_paths,
    debruijn8_demo,
    encode,
    hamming,
    reduced_transition,
    transition,
    zero_state,
)


def test_hamming():
    assert hamming("a", "a") == 0
    assert hamming("a", "b") == 1


def test_zero_state(g3):
    assert zero_state(g3) == (0, 0)


def test_transition_hand_values(g3):
    # from (0,0): reading b, the only zero-cost continuation enters v2
    assert transition(g3, (0, 0), "b") == (1, 0)
    assert transition(g3, (0, 0), "a") == (0, 0)
    # from (1,0): both components pay for another b
    assert transition(g3, (1, 0), "b") == (1, 1)


def test_transition_input_validation(g3):
    with pytest.raises(ValueError, match="length"):
        transition(g3, (0, 0, 0), "a")
    with pytest.raises(ValueError, match="not in alphabet"):
        transition(g3, (0, 0), "z")


def test_reduced_transition(g3):
    nxt, inc = reduced_transition(g3, (1, 0), "b")
    assert nxt == (0, 0) and inc == 1
    nxt, inc = reduced_transition(g3, (0, 0), "b")
    assert nxt == (1, 0) and inc == 0
    with pytest.raises(ValueError, match="not reduced"):
        reduced_transition(g3, (1, 1), "a")


@given(st.integers(0, 10**9))
def test_increment_is_zero_or_one(seed):
    rng = random.Random(seed)
    g = random_code_graph(rng)
    s = zero_state(g)
    for x in random_sequence(rng, g.alphabet, 40):
        s, inc = reduced_transition(g, s, x)
        assert inc in (0, 1)
        assert min(s) == 0


@given(st.integers(0, 10**9))
def test_reduction_commutes_with_running_minimum(seed):
    rng = random.Random(seed)
    g = random_code_graph(rng)
    xs = random_sequence(rng, g.alphabet, 30)
    unreduced = zero_state(g)
    reduced = zero_state(g)
    total_inc = 0
    for x in xs:
        unreduced = transition(g, unreduced, x)
        m = min(unreduced)
        reduced, inc = reduced_transition(g, reduced, x)
        total_inc += inc
        assert reduced == tuple(c - m for c in unreduced)
        assert total_inc == m  # the increments count the running minimum


def test_encode_hand_values(g3, debruijn8):
    r = encode(g3, ("b", "b"))
    assert r.total_distortion == 1
    assert r.labels == ("b", "a")
    assert r.path == (1, 2)
    assert encode(g3, ("a", "a", "a")).total_distortion == 0
    assert encode(g3, ("b", "a", "b")).total_distortion == 0
    for x in debruijn8.alphabet:
        assert encode(debruijn8, (x,)).total_distortion == 0


def test_encode_rejects_bad_input(g3):
    with pytest.raises(ValueError, match="empty"):
        encode(g3, ())
    with pytest.raises(ValueError, match="not in alphabet"):
        encode(g3, ("a", "z"))


def _check_self_consistent(g, xs, result):
    assert len(result.path) == len(xs)
    vi = g.vertex_index
    for prev, cur in zip(result.path, result.path[1:]):
        assert vi[g.edges[prev].dst] == vi[g.edges[cur].src]
    assert result.labels == tuple(g.edges[ei].label for ei in result.path)
    assert result.total_distortion == sum(
        hamming(x, lab) for x, lab in zip(xs, result.labels)
    )


@given(st.integers(0, 10**9))
def test_encode_self_consistency(seed):
    rng = random.Random(seed)
    g = random_code_graph(rng)
    xs = random_sequence(rng, g.alphabet, rng.randint(1, 12))
    _check_self_consistent(g, xs, encode(g, xs))


@settings(max_examples=60)
@given(st.integers(0, 10**9))
def test_encode_equals_brute_force_equals_increment_sum(seed):
    rng = random.Random(seed)
    g = random_code_graph(rng, max_vertices=4, max_symbols=3, max_out=2)
    xs = random_sequence(rng, g.alphabet, rng.randint(1, 8))
    expected = brute_force_min(g, xs)
    assert encode(g, xs).total_distortion == expected
    s = zero_state(g)
    total = 0
    for x in xs:
        s, inc = reduced_transition(g, s, x)
        total += inc
    assert total == expected


def test_count_paths(g3):
    assert count_paths(g3, 0) == 2  # one empty path per start vertex
    assert count_paths(g3, 1) == 4
    assert count_paths(g3, 2) == 8
    assert count_paths(debruijn8_demo(), 3) == 8 * 2**3


def test_brute_force_guard(g3):
    with pytest.raises(InstanceTooLargeError):
        brute_force_min(g3, ("a",) * 40)
    assert brute_force_min(g3, ("a",) * 10, max_paths=2**10 * 2) == 0


def test_brute_force_zero_on_realizable_labels():
    rng = random.Random(7)
    g = random_code_graph(rng)
    # read labels off an actual random walk; that path costs nothing
    v = 0
    labels = []
    for _ in range(8):
        ei = rng.choice(g.out_edges[v])
        labels.append(g.edges[ei].label)
        v = g.vertex_index[g.edges[ei].dst]
    assert brute_force_min(g, tuple(labels)) == 0
    assert encode(g, tuple(labels)).total_distortion == 0
