"""Deterministic derivation of independent RNG stream seeds.

Each run owns three streams: mobility, fading and scheme-random.
Mobility and fading seeds depend only on (base seed, run index) so the
same trajectories are replayed for every scheme at a given run index;
the scheme stream additionally hashes the scheme name.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np


def stream_seed(base: int, *labels: str) -> int:
    """Stable 64-bit seed derived from the base seed and string labels."""
    text = ":".join([str(base), *labels])
    digest = hashlib.sha256(text.encode()).digest()
    return int.from_bytes(digest[:8], "big")


@dataclass(frozen=True)
class RunSeeds:
    run_index: int
    mobility: int
    fading: int
    scheme: int

    def rngs(self):
        return (np.random.default_rng(self.mobility),
                np.random.default_rng(self.fading),
                np.random.default_rng(self.scheme))


def run_seeds(base: int, run_index: int, scheme: str) -> RunSeeds:
    return RunSeeds(
        run_index=run_index,
        mobility=stream_seed(base, "run", str(run_index), "mobility"),
        fading=stream_seed(base, "run", str(run_index), "fading"),
        scheme=stream_seed(base, "run", str(run_index), "scheme", scheme),
    )
