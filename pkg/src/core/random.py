"""
Seeded random streams split by fixed labels
"""
import zlib

import numpy as np


def module_rng(seed: int, label: str) -> np.random.Generator:
    """Independent generator for one labelled consumer of a run seed"""
    key = zlib.crc32(label.encode("utf-8"))
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=(key,))
    return np.random.default_rng(sequence)


def task_seeds(seed: int, label: str, count: int) -> list:
    """Integer seeds for `count` independent tasks under one label"""
    rng = module_rng(seed, label)
    return [int(s) for s in rng.integers(0, 2**63 - 1, size=count)]
