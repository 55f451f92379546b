"""Labeled deterministic random streams.

Every source of randomness in the engine flows through an ``RngStream``
derived from a run seed plus a stream label.  Streams are bit-exact and
portable: the same (seed, label, index) triple yields the same sequence on
every platform and in every process, which is what makes whole runs
replayable from a single 64-bit seed.

The generator is SplitMix64: the finalizer mixes the derivation inputs
into an initial state, and each output advances the state by the golden
gamma before mixing.  Bounded sampling uses bitmask rejection rather than
modulo so there is no modulo bias and no need for 128-bit arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence, TypeVar

T = TypeVar("T")

_MASK64 = 0xFFFFFFFFFFFFFFFF
_GOLDEN_GAMMA = 0x9E3779B97F4A7C15


class StreamLabel(Enum):
    """Closed set of stream names, one per randomness-consuming system."""

    MAP_GEN = "MapGen"
    SHUFFLE = "Shuffle"
    REWARDS = "Rewards"
    EVENTS = "Events"
    ENEMY_AI = "EnemyAi"
    SHOP = "Shop"
    MISC = "Misc"


# FNV-1a 64-bit hashes of the label names above, frozen so the constants
# survive refactors and can be republished for cross-implementation parity.
LABEL_CONSTANTS: dict[StreamLabel, int] = {
    StreamLabel.MAP_GEN: 0x360C0A4CD8B6FF11,
    StreamLabel.SHUFFLE: 0xC3862D7652FBD40E,
    StreamLabel.REWARDS: 0xA478CF2BAFF0AE2B,
    StreamLabel.EVENTS: 0xC265A3E29E1206E4,
    StreamLabel.ENEMY_AI: 0x22DDB092F8EA6FB5,
    StreamLabel.SHOP: 0x716A5F24E3FE97E9,
    StreamLabel.MISC: 0x04E610AEA9079CC9,
}


def _mix64(z: int) -> int:
    """SplitMix64 finalizer: avalanche a 64-bit value."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


@dataclass
class RngStream:
    """One deterministic SplitMix64 stream.

    A stream is plain data: two streams with equal state emit equal
    sequences, and copying one never perturbs the other.  A single stream
    must be advanced by one logical owner at a time.
    """

    label: StreamLabel
    state: int
    draws: int = 0

    def clone(self) -> RngStream:
        return RngStream(self.label, self.state, self.draws)

    def next_u64(self) -> int:
        """Emit the next raw 64-bit value."""
        self.state = (self.state + _GOLDEN_GAMMA) & _MASK64
        self.draws += 1
        return _mix64(self.state)

    def next_below(self, n: int) -> int:
        """Unbiased integer in [0, n) via bitmask rejection.

        The mask is the smallest ``2**k - 1 >= n - 1``; draws at or above
        ``n`` are rejected and retried, each retry consuming another raw
        draw.
        """
        if n < 1:
            raise ValueError(f"next_below requires n >= 1, got {n}")
        mask = (1 << (n - 1).bit_length()) - 1
        while True:
            value = self.next_u64() & mask
            if value < n:
                return value

    def shuffle(self, items: Sequence[T]) -> list[T]:
        """Fisher-Yates permutation of ``items``; returns a new list.

        Consumes exactly ``len(items) - 1`` bounded draws for lists of two
        or more elements.
        """
        out = list(items)
        for i in range(len(out) - 1, 0, -1):
            j = self.next_below(i + 1)
            out[i], out[j] = out[j], out[i]
        return out


def derive_stream(seed: int, label: StreamLabel, index: int = 0) -> RngStream:
    """Derive the stream for (seed, label, index).

    The initial state is the SplitMix64 finalizer applied to
    ``seed XOR label_constant XOR (index * golden_gamma)``, all mod 2**64.
    """
    seed &= _MASK64
    mixed = seed ^ LABEL_CONSTANTS[label] ^ ((index * _GOLDEN_GAMMA) & _MASK64)
    return RngStream(label=label, state=_mix64(mixed))
