"""
Pairing frames: a signaling payload as QR-sized text
====================================================

Connection payloads travel out of band, shown as looping QR codes or
pasted text.  The codec splits them into checksummed frames that can be
scanned in any order, any number of times.
"""

import json

from mazo.pairing import Complete, Conflict, absorb, decode_frame, encode_payload, new_assembly

# something offer-shaped; real payloads are opaque bytes to the codec
offer = json.dumps({
    "kind": "offer",
    "session": "d41d8cd9",
    "candidates": ["192.0.2.17:40102", "198.51.100.4:51820"] * 20,
}).encode()

frames = encode_payload(offer, compress=False)
print(f"{len(offer)} payload bytes -> {len(frames)} frames")
for text in frames:
    print(" ", text[:72] + ("..." if len(text) > 72 else ""))

# the same payload compresses well, and the flag rides in every frame
squeezed = encode_payload(offer, compress=True)
print(f"compressed       -> {len(squeezed)} frame(s), flags "
      f"{squeezed[0].split(':')[3]!r}")

# a scanner sees frames out of order and more than once; assembly does
# not care
feed = frames * 2
feed.reverse()
state = new_assembly()
for text in feed:
    state, status = absorb(state, decode_frame(text))
print("reassembled intact:", isinstance(status, Complete) and status.payload == offer)

# progress reporting while frames are still missing
state = new_assembly()
state, status = absorb(state, decode_frame(frames[-1]))
print("after one frame, missing:", status.missing)

# one flipped chunk character cannot slip through: later honest reads of
# the same frame disagree, and the shared crc32 guards final assembly
head, _, chunk = frames[0].rpartition(":")
flipped = head + ":" + ("A" if chunk[0] != "A" else "B") + chunk[1:]
state = new_assembly()
state, first = absorb(state, decode_frame(flipped))
state, second = absorb(state, decode_frame(frames[0]))
print("tampered read:", type(second).__name__, "-", second.reason)
assert isinstance(second, Conflict)
