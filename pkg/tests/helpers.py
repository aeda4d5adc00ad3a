import numpy as np


def random_state(rng, dim, rank=None):
    rank = rank or dim
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def random_ket(rng, dim):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_unitary(rng, dim):
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_kraus(rng, dim, n):
    """Kraus set from a random isometry: rows of an (n*dim x dim) isometry."""
    g = rng.normal(size=(n * dim, dim)) + 1j * rng.normal(size=(n * dim, dim))
    q, _ = np.linalg.qr(g)
    return [q[k * dim : (k + 1) * dim] for k in range(n)]
