"""Monte Carlo check that Q is the Haar average of measurement entropy.

For a state with eigenvalues ``lambda`` measured in a Haar-random
orthonormal basis, the outcome probabilities are
``p_i = sum_j |U_ji|^2 lambda_j`` and

    <H(p)> = Q(lambda) + 1/2 + 1/3 + ... + 1/d.

Samples are drawn in fixed-size chunks, each from its own stream derived
from ``(seed, chunk index)``, so the estimate does not depend on how the
chunks are distributed over threads.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .direct import subentropy_direct
from .errors import DomainViolation
from .sympoly import as_prob_vector

CHUNK = 4096


@dataclass(frozen=True)
class HaarConfig:
    dim: int
    eigenvalues: tuple
    samples: int
    seed: int = 0

    def __post_init__(self):
        eig = as_prob_vector(self.eigenvalues)
        if self.dim < 2:
            raise DomainViolation("dim must be at least 2")
        if eig.size != self.dim:
            raise DomainViolation(f"expected {self.dim} eigenvalues, got {eig.size}")
        if abs(eig.sum() - 1.0) > 1e-12:
            raise DomainViolation("eigenvalues must sum to 1")
        if self.samples < 1:
            raise DomainViolation("samples must be >= 1")
        object.__setattr__(self, "eigenvalues", tuple(float(v) for v in eig))


@dataclass(frozen=True)
class HaarEstimate:
    mean_HM: float
    std_error: float
    implied_Q: float
    reference_Q: float
    z_score: float
    samples: int


def harmonic_tail(d):
    """``1/2 + 1/3 + ... + 1/d``."""
    return sum(1.0 / k for k in range(2, d + 1))


def _haar_batch(d, n, rng):
    """``n`` Haar unitaries: QR of complex Gaussians with the phases of diag(R) removed."""
    while True:
        z = (rng.standard_normal((n, d, d)) + 1j * rng.standard_normal((n, d, d))) / np.sqrt(2)
        q, r = np.linalg.qr(z)
        diag = np.diagonal(r, axis1=1, axis2=2)
        if np.all(np.abs(diag) > 1e-12):
            return q * (diag / np.abs(diag))[:, None, :]


def sample_haar_basis(d, rng):
    """One Haar-distributed ``d x d`` unitary; columns are the basis vectors."""
    if d < 2:
        raise DomainViolation("d must be at least 2")
    return _haar_batch(d, 1, rng)[0]


def _entropies(p):
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, -p * np.log(p), 0.0)
    return terms.sum(axis=-1)


def measurement_probabilities(eigs, U):
    """``p_i = sum_j |U_ji|^2 eigs_j`` for one unitary or a stack of them."""
    w = np.abs(U) ** 2
    return np.einsum("...ji,j->...i", w, np.asarray(eigs, dtype=float))


def measurement_entropy(eigs, U):
    """Shannon entropy of the outcomes of measuring ``diag(eigs)`` in basis ``U``."""
    eigs = as_prob_vector(eigs)
    return float(_entropies(measurement_probabilities(eigs, U))) + 0.0


def _chunk_entropies(cfg, index, size):
    eigs = np.array(cfg.eigenvalues)
    if np.all(eigs == eigs[0]):
        # the maximally mixed state looks the same in every basis
        return np.full(size, _entropies(eigs))
    ss = np.random.SeedSequence(cfg.seed, spawn_key=(index,))
    rng = np.random.Generator(np.random.PCG64(ss))
    U = _haar_batch(cfg.dim, size, rng)
    return _entropies(measurement_probabilities(eigs, U))


def estimate_Q(cfg, threads=1):
    """Monte Carlo estimate of Q from the average measurement entropy."""
    sizes = [CHUNK] * (cfg.samples // CHUNK)
    if cfg.samples % CHUNK:
        sizes.append(cfg.samples % CHUNK)
    jobs = list(enumerate(sizes))
    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda j: _chunk_entropies(cfg, *j), jobs))
    else:
        parts = [_chunk_entropies(cfg, *j) for j in jobs]
    h = np.concatenate(parts)
    n = h.size
    if np.all(h == h[0]):
        mean, se = float(h[0]), 0.0
    else:
        mean = float(np.mean(h))
        se = float(np.sqrt(np.var(h, ddof=1) / n)) if n > 1 else 0.0
    implied = mean - harmonic_tail(cfg.dim)
    ref = subentropy_direct(cfg.eigenvalues)
    diff = implied - ref
    if se > 0:
        z = diff / se
    else:
        z = 0.0 if abs(diff) <= 1e-12 else float(np.copysign(np.inf, diff))
    return HaarEstimate(mean, se, implied, ref, z, n)
