"""
Seeded streams: independent, replayable randomness per subsystem
================================================================
"""

from mazo.rng import StreamLabel, derive_stream

# one master seed fans out into one stream per subsystem
seed = 42
map_stream = derive_stream(seed, StreamLabel.MAP_GEN)
shuffle_stream = derive_stream(seed, StreamLabel.SHUFFLE)

print("raw 64-bit draws, MapGen :", [map_stream.next_u64() for _ in range(3)])
print("raw 64-bit draws, Shuffle:", [shuffle_stream.next_u64() for _ in range(3)])

# bounded draws are unbiased: rejection sampling, never modulo
dice = derive_stream(seed, StreamLabel.MISC)
print("d6 rolls:", [dice.next_below(6) + 1 for _ in range(10)])

# shuffling returns a new list and consumes len-1 bounded draws
deck_stream = derive_stream(seed, StreamLabel.SHUFFLE)
print("shuffled:", deck_stream.shuffle(["a", "b", "c", "d", "e"]))

# the same (seed, label) always replays the same sequence
again = derive_stream(seed, StreamLabel.SHUFFLE)
print("replayed:", again.shuffle(["a", "b", "c", "d", "e"]))

# different labels never correlate, so map generation cannot disturb
# deck shuffles even though both came from seed 42
print("labels differ:", derive_stream(seed, StreamLabel.MAP_GEN).next_u64()
      != derive_stream(seed, StreamLabel.REWARDS).next_u64())
