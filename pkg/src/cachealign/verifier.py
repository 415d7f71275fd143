"""Decodability certification and bit-level decoding for linear schemes.

A user decodes its requested file iff every row of that file's selector
lies in the row space of the matrix stacking the user's cache placement
on top of its three channel observation blocks.  Certification is exact
(zero-error linear recoverability); the witness is the decoder matrix
produced by elimination.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .gf2 import BitMatrix, mat_mul, solve_left, vstack
from .netchannel import Demand, MessageQuad, ReceiverObservation, transmit, user_channel_matrix
from .schemes import LinearScheme, file_selector

__all__ = [
    "CaseResult",
    "VerificationReport",
    "decodable",
    "decode_bits",
    "message_bits",
    "observation_matrix",
    "verify_all",
]


def observation_matrix(s: LinearScheme, d: Demand, user: int) -> BitMatrix:
    """Everything the user learns, as linear functionals of the 2n file bits.

    Rows: the receiver cache placement, then the three observation blocks
    (direct from transmitter 1, direct from transmitter 2, XOR).
    """
    quad = s.delivery[d]
    stacked_messages = vstack(
        [
            mat_mul(quad.d1, s.u1),
            mat_mul(quad.d2, s.u1),
            mat_mul(quad.d3, s.u2),
            mat_mul(quad.d4, s.u2),
        ]
    )
    channel = user_channel_matrix(user, s.message_rows)
    cache = s.z1 if user == 1 else s.z2
    return vstack([cache, mat_mul(channel, stacked_messages)])


def decodable(s: LinearScheme, d: Demand, user: int) -> BitMatrix | None:
    """Decoder matrix witnessing recoverability of the demanded file, else None."""
    target = file_selector(s.n, d.requested(user))
    return solve_left(observation_matrix(s, d, user), target)


@dataclass(frozen=True)
class CaseResult:
    demand: Demand
    user: int
    ok: bool

    def line(self) -> str:
        return f"CASE {self.demand} {self.user} {'PASS' if self.ok else 'FAIL'}"


@dataclass(frozen=True)
class VerificationReport:
    memory: Fraction
    load: Fraction
    cases: tuple[CaseResult, ...]

    @property
    def rho(self) -> Fraction:
        return 4 * self.load

    @property
    def passed(self) -> bool:
        return all(case.ok for case in self.cases)

    def render(self) -> str:
        lines = [f"scheme M={self.memory} c={self.load} rho={self.rho}"]
        lines.extend(case.line() for case in self.cases)
        lines.append(f"OVERALL {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def verify_all(s: LinearScheme) -> VerificationReport:
    """Check all 4 demands x 2 users; pure, order-independent per case."""
    cases = tuple(
        CaseResult(d, user, decodable(s, d, user) is not None)
        for d in Demand
        for user in (1, 2)
    )
    return VerificationReport(memory=s.memory, load=s.load, cases=cases)


def message_bits(s: LinearScheme, d: Demand, file_bits: np.ndarray) -> MessageQuad:
    """Realize the four transmitted messages for concrete file bits."""
    x = np.asarray(file_bits, dtype=np.uint8)
    if x.shape != (2 * s.n,):
        raise ValueError(f"file bits must have length {2 * s.n}, got shape {x.shape}")
    u1_bits = s.u1.apply(x)
    u2_bits = s.u2.apply(x)
    quad = s.delivery[d]
    return MessageQuad(
        quad.d1.apply(u1_bits),
        quad.d2.apply(u1_bits),
        quad.d3.apply(u2_bits),
        quad.d4.apply(u2_bits),
    )


def observed_bits(
    s: LinearScheme, user: int, obs: ReceiverObservation, file_bits: np.ndarray
) -> np.ndarray:
    """Stack the user's realized cache bits on top of a channel observation."""
    cache = s.z1 if user == 1 else s.z2
    return np.concatenate([cache.apply(file_bits), obs.stacked()])


def decode_bits(
    s: LinearScheme, d: Demand, user: int, file_bits: np.ndarray
) -> np.ndarray:
    """Simulate placement, delivery, and transmission, then apply the witness decoder.

    Raises ValueError when the scheme is not decodable for this case.
    """
    decoder = decodable(s, d, user)
    if decoder is None:
        raise ValueError(f"scheme is not decodable for demand {d}, user {user}")
    x = np.asarray(file_bits, dtype=np.uint8)
    observations = transmit(message_bits(s, d, x))
    return decoder.apply(observed_bits(s, user, observations[user - 1], x))
