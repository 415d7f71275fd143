"""Network-layer channel behavior."""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from cachealign import (
    Demand,
    MessageQuad,
    rank,
    transmit,
    user_channel_matrix,
    vstack,
)


def random_quad(rng: np.random.Generator, k: int) -> MessageQuad:
    return MessageQuad(*(rng.integers(0, 2, size=k, dtype=np.uint8) for _ in range(4)))


def test_demand_has_exactly_four_values():
    assert [str(d) for d in Demand] == ["AA", "AB", "BA", "BB"]
    assert Demand.from_string("BA").w1 == "B"
    assert Demand.from_string("BA").w2 == "A"
    assert Demand.AB.requested(1) == "A"
    assert Demand.AB.requested(2) == "B"
    with pytest.raises(ValueError, match="unknown demand"):
        Demand.from_string("AX")


def test_zero_messages_give_zero_observations():
    zero = np.zeros(3, dtype=np.uint8)
    obs1, obs2 = transmit(MessageQuad(zero, zero, zero, zero))
    for obs in (obs1, obs2):
        assert not obs.stacked().any()


def test_xor_stream_cancels_shared_term():
    # With v2 = b1 ^ b3 and v4 = b3, user 1's XOR stream is b1 alone.
    rng = np.random.default_rng(11)
    b1, b3 = rng.integers(0, 2, size=(2, 6), dtype=np.uint8)
    quad = MessageQuad(rng.integers(0, 2, size=6), b1 ^ b3, rng.integers(0, 2, size=6), b3)
    obs1, _ = transmit(quad)
    assert np.array_equal(obs1.xor_sum, b1)


def test_xor_stream_strips_common_message():
    # v2 = b5 ^ s and v4 = b5 leave exactly s on user 1's XOR stream.
    rng = np.random.default_rng(12)
    b5, s = rng.integers(0, 2, size=(2, 4), dtype=np.uint8)
    quad = MessageQuad(rng.integers(0, 2, size=4), b5 ^ s, rng.integers(0, 2, size=4), b5)
    obs1, _ = transmit(quad)
    assert np.array_equal(obs1.xor_sum, s)


def test_observation_routing():
    quad = MessageQuad([1], [0], [1], [1])
    obs1, obs2 = transmit(quad)
    assert obs1.stacked().tolist() == [1, 1, 1]
    assert obs2.stacked().tolist() == [0, 1, 0]


def test_unequal_lengths_rejected():
    with pytest.raises(ValueError, match="lengths differ"):
        MessageQuad([1, 0], [1], [0], [1])


def test_transmit_is_linear():
    rng = np.random.default_rng(13)
    for _ in range(20):
        m1 = random_quad(rng, 5)
        m2 = random_quad(rng, 5)
        left = transmit(m1 ^ m2)
        right = tuple(a ^ b for a, b in zip(transmit(m1), transmit(m2)))
        for obs_sum, obs_parts in zip(left, right):
            assert np.array_equal(obs_sum.stacked(), obs_parts.stacked())


def test_channel_matrix_k1_rows():
    assert user_channel_matrix(1, 1).row_texts() == ["1000", "0010", "0101"]
    assert user_channel_matrix(2, 1).row_texts() == ["0100", "0001", "1010"]


def test_channel_matrix_agrees_with_transmit_exhaustively_at_k1():
    for bits in itertools.product((0, 1), repeat=4):
        quad = MessageQuad(*([b] for b in bits))
        observations = transmit(quad)
        stacked_in = np.array(bits, dtype=np.uint8)
        for user in (1, 2):
            out = user_channel_matrix(user, 1).apply(stacked_in)
            assert np.array_equal(out, observations[user - 1].stacked())


def test_channel_matrix_agrees_with_transmit_at_k2():
    rng = np.random.default_rng(17)
    for _ in range(100):
        quad = random_quad(rng, 2)
        stacked_in = np.concatenate([quad.v1, quad.v2, quad.v3, quad.v4])
        observations = transmit(quad)
        for user in (1, 2):
            out = user_channel_matrix(user, 2).apply(stacked_in)
            assert np.array_equal(out, observations[user - 1].stacked())


@pytest.mark.parametrize("k", [1, 2, 3])
def test_both_users_jointly_see_everything(k):
    # Each user alone observes 3 of the 4 degrees of information;
    # together they determine all messages.
    for user in (1, 2):
        assert rank(user_channel_matrix(user, k)) == 3 * k
    stacked = vstack([user_channel_matrix(1, k), user_channel_matrix(2, k)])
    assert stacked.shape == (6 * k, 4 * k)
    assert rank(stacked) == 4 * k


def test_bad_user_rejected():
    with pytest.raises(ValueError, match="user"):
        user_channel_matrix(3, 1)
