"""
Flux aleatoires reproductibles.

Chaque flux est un generateur Philox (compteur) dont la cle est derivee de
(seed, purpose, *indices) via SeedSequence. Deux appels avec la meme cle
produisent exactement la meme suite, quel que soit l'ordre d'execution des
threads.
"""

import zlib

import numpy as np


# Identifiants stables des usages (ne jamais renumeroter)
PURPOSES = {
    "sample": 1,
    "moment": 2,
    "copy": 3,
    "sigma": 4,
    "nondegeneracy": 5,
    "baseline": 6,
    "experiment": 7,
    "independence": 8,
    "law": 9,
    "test": 10,
}


def purpose_code(purpose: str) -> int:
    """Code entier d'un usage; les usages inconnus sont hashes (crc32)."""
    code = PURPOSES.get(purpose)
    if code is None:
        code = zlib.crc32(purpose.encode("utf-8")) + 1000
    return code


def stream(seed: int, purpose: str, *indices: int) -> np.random.Generator:
    """Generateur Philox pour la cle (seed, purpose, *indices)."""
    if seed < 0:
        raise ValueError(f"seed doit etre >= 0 (recu {seed})")
    entropy = [int(seed), purpose_code(purpose), *(int(i) for i in indices)]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def derive_seed(seed: int, purpose: str, *indices: int) -> int:
    """Graine entiere 63 bits derivee de la cle (pour les sous-experiences)."""
    entropy = [int(seed), purpose_code(purpose), *(int(i) for i in indices)]
    state = np.random.SeedSequence(entropy).generate_state(2, dtype=np.uint32)
    return (int(state[0]) << 31) ^ int(state[1])
