"""Portable deterministic random number generation.

Every random choice in the pipeline flows through this module so that runs
are bit-reproducible across platforms and Python versions.  The generator is
xoshiro256** (Blackman & Vigna) seeded via splitmix64, both implemented in
pure integer arithmetic modulo 2**64:

* ``splitmix64``: state advances by the golden-gamma constant
  0x9E3779B97F4A7C15; output mixes the state with two xor-shift-multiply
  rounds (0xBF58476D1CE4E5B9, 0x94D049BB133111EB) and a final ``z ^ (z >> 31)``.
* ``xoshiro256**``: four 64-bit words of state, initialized from four
  consecutive splitmix64 outputs; output is ``rotl(s1 * 5, 7) * 9``.

Bounded draws use plain modulo (``next_u64() % n``) and shuffles are
Fisher-Yates from the top index down; both are part of the documented,
frozen behaviour (golden tests pin the exact sequences).

Independent streams (e.g. one per language) are derived as
``splitmix64_mix(master_seed XOR fnv1a64(label))`` where the label is a
UTF-8 string naming the purpose and key, such as ``"split:yor"``.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1

_SPLITMIX_GAMMA = 0x9E3779B97F4A7C15
_SPLITMIX_MUL1 = 0xBF58476D1CE4E5B9
_SPLITMIX_MUL2 = 0x94D049BB133111EB

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def splitmix64_mix(x: int) -> int:
    """One splitmix64 output for state ``x`` (state advance + mix)."""
    x = (x + _SPLITMIX_GAMMA) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * _SPLITMIX_MUL1) & _MASK64
    z = ((z ^ (z >> 27)) * _SPLITMIX_MUL2) & _MASK64
    return z ^ (z >> 31)


def fnv1a64(data: bytes) -> int:
    """FNV-1a 64-bit hash."""
    h = _FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * _FNV_PRIME) & _MASK64
    return h


def derive_seed(master_seed: int, label: str) -> int:
    """Derive a stream seed from a master seed and a purpose label."""
    return splitmix64_mix((master_seed & _MASK64) ^ fnv1a64(label.encode("utf-8")))


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK64


class Xoshiro256StarStar:
    """xoshiro256** generator seeded from a 64-bit seed via splitmix64."""

    def __init__(self, seed: int):
        state = seed & _MASK64
        s = []
        for _ in range(4):
            state = (state + _SPLITMIX_GAMMA) & _MASK64
            z = state
            z = ((z ^ (z >> 30)) * _SPLITMIX_MUL1) & _MASK64
            z = ((z ^ (z >> 27)) * _SPLITMIX_MUL2) & _MASK64
            s.append(z ^ (z >> 31))
        if not any(s):
            s[0] = 1  # all-zero state is a fixed point
        self._s = s

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self._s
        result = (_rotl((s1 * 5) & _MASK64, 7) * 9) & _MASK64
        t = (s1 << 17) & _MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self._s = [s0, s1, s2, s3]
        return result

    def randbelow(self, n: int) -> int:
        """Uniform-ish integer in [0, n) as ``next_u64() % n`` (documented)."""
        if n <= 0:
            raise ValueError("n must be positive")
        return self.next_u64() % n

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle, highest index first."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]

    def permutation(self, n: int) -> list[int]:
        perm = list(range(n))
        self.shuffle(perm)
        return perm
