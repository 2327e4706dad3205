"""Reproducible random state built on the Philox counter-based generator.

A draw sequence is fully determined by a 64-bit ``seed`` and a 64-bit
``stream`` identifier, which together form the Philox key.  Substreams for
independent purposes (one per trial, per generated object, ...) are derived
by hashing tags into a fresh stream id, so parallel experiments can share a
seed without sharing draws.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass

import numpy as np

_U64 = 2**64


@dataclass(frozen=True)
class RngState:
    """Immutable (seed, stream) pair addressing one Philox draw sequence."""

    seed: int
    stream: int = 0

    def __post_init__(self):
        if not 0 <= int(self.seed) < _U64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if not 0 <= int(self.stream) < _U64:
            raise ValueError(f"stream must be a 64-bit unsigned integer, got {self.stream}")

    def generator(self) -> np.random.Generator:
        """Fresh NumPy generator; identical (seed, stream) gives identical draws."""
        return np.random.Generator(np.random.Philox(key=[int(self.seed), int(self.stream)]))

    def derive(self, *tags) -> "RngState":
        """Substream for a purpose, e.g. ``rng.derive("omega")`` or ``rng.derive("trial", 3)``.

        The new stream id is an 8-byte blake2b hash of the current stream and
        the tags (ints, floats, or strings), so the mapping is stable across
        platforms and Python versions.
        """
        h = hashlib.blake2b(digest_size=8)
        h.update(struct.pack("<Q", int(self.stream)))
        for tag in tags:
            if isinstance(tag, bool):
                raise TypeError("bool tags are ambiguous; use an int or str")
            if isinstance(tag, str):
                h.update(b"s")
                h.update(tag.encode("utf-8"))
            elif isinstance(tag, (int, np.integer)):
                h.update(b"i")
                h.update(struct.pack("<q", int(tag)))
            elif isinstance(tag, (float, np.floating)):
                h.update(b"f")
                h.update(struct.pack("<d", float(tag)))
            else:
                raise TypeError(f"cannot derive a substream from tag of type {type(tag)!r}")
        return RngState(self.seed, int.from_bytes(h.digest(), "little"))
