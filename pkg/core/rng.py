import numpy as np
from scipy.stats import unitary_group


def stream(seed: int, *index: int) -> np.random.Generator:
    """Seed-indexed PCG64 stream; identical across platforms for a fixed (seed, index)."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=tuple(index))))


def haar_vector(rng: np.random.Generator, d: int) -> np.ndarray:
    vec = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return vec / np.linalg.norm(vec)


def haar_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    if d == 1:
        return np.exp(2j * np.pi * rng.random()) * np.ones((1, 1), dtype=complex)
    return unitary_group.rvs(d, random_state=rng)
