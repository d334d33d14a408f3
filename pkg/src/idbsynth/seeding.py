"""Deterministic seed derivation.

All randomness in the pipeline flows from one root seed. Parallel tasks
never share a stream: each derives a child seed with mix64, a splitmix64
finalizer, so outputs are independent of scheduling.

Documented mixing function (64-bit, wraparound arithmetic):

    z = parent + GOLDEN * (index + 1)
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    child = z ^ (z >> 31)
"""

_MASK64 = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15

# Fixed stream indices so independent pipeline stages never collide even
# when they share a task index.
STREAM_RECORDS = 0x01
STREAM_SPLIT = 0x02
STREAM_AUGMENT = 0x03
STREAM_NOISE = 0x04
STREAM_TEMPLATE_PICK = 0x05


def mix64(parent_seed: int, index: int) -> int:
    """Derive a child seed from a parent seed and a task index."""
    z = (parent_seed + _GOLDEN * (index + 1)) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def derive(parent_seed: int, *indices: int) -> int:
    """Chain mix64 across several indices (stream id, sample id, ...)."""
    seed = parent_seed & _MASK64
    for idx in indices:
        seed = mix64(seed, idx)
    return seed
