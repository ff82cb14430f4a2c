import math

import numpy as np

from pqgames.gates import Move

MINUS = np.array([1, -1]) / math.sqrt(2)


def random_state_amps(rng, d):
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def random_unitary(rng, d):
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_move(rng, d):
    if rng.random() < 0.5:
        return Move.permutation(rng.permutation(d), label="rp")
    return Move.unitary(random_unitary(rng, d), label="ru")


def random_product_amps(rng, n):
    out = np.ones(1, dtype=complex)
    for _ in range(n):
        out = np.kron(out, random_state_amps(rng, 2))
    return out


def textbook_diffusion(n):
    """(2|u><u| - I) (x) I_2, built directly from the uniform vector."""
    N = 1 << n
    u = np.full(N, 1 / math.sqrt(N))
    return np.kron(2 * np.outer(u, u) - np.eye(N), np.eye(2))
