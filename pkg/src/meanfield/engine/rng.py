"""Reproducible random streams.

Each replication owns one generator whose seed is derived from
(base seed, replay, N, replication index) with ``numpy.random.SeedSequence``.
Draws within a replication are consumed in a fixed order (initial law, then
one vector of N normals per step), so every (replication, particle, step)
maps to the same number no matter how replications are scheduled.
"""

import numpy as np

from ..exceptions import ConfigurationError
from ..utils.constants import DEFAULT_RNG_ALGORITHM

_BIT_GENERATORS = {
    "philox": np.random.Philox,
    "pcg64": np.random.PCG64,
}


def replication_seed(base_seed: int, particle_count: int, replication: int, replay: int = 0) -> int:
    """
    Derive the 64-bit seed of one replication.

    Args:
        base_seed: Experiment base seed
        particle_count: N of the replication
        replication: Replication index j
        replay: Replay index (distinct base-seed reruns)

    Returns:
        int: Seed in [0, 2**64)
    """
    sequence = np.random.SeedSequence(
        entropy=int(base_seed), spawn_key=(int(replay), int(particle_count), int(replication))
    )
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def make_rng(seed: int, algorithm: str = DEFAULT_RNG_ALGORITHM) -> np.random.Generator:
    """
    Build a generator from a seed and a named bit generator.

    Args:
        seed: Stream seed
        algorithm: "philox" (counter-based) or "pcg64"

    Returns:
        numpy.random.Generator

    Raises:
        ConfigurationError: On unknown algorithm names
    """
    bit_generator = _BIT_GENERATORS.get(algorithm)
    if bit_generator is None:
        raise ConfigurationError(
            "rng_algorithm",
            f"unknown generator '{algorithm}', use one of {sorted(_BIT_GENERATORS)}",
        )
    return np.random.Generator(bit_generator(int(seed)))
