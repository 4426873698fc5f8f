"""Compiled sampling and mutation kernels.

Everything here is numba-compiled and shared between the public sampler
API and the run engines, so that a single code path produces the random
draws everywhere.  numba reproduces numpy's Generator algorithms bit for
bit, hence sequences are identical no matter which layer consumes the
generator.

Law codes: 0 = unit step, 1 = bilateral geometric, 2 = power law.
"""

import numpy as np
from numba import njit

LAW_UNIT = 0
LAW_GEOM = 1
LAW_POWER = 2

# Rejection-loop cap; hitting it means the sampler itself is broken.
MAX_REJECTIONS = 1_000_000

# Magnitudes at or above 2^62 are re-drawn (total mass ~1e-9 for beta > 1.5
# at the cap itself); keeps coordinate updates far from int64 overflow.
_MAGNITUDE_CAP = float(2**62)


@njit(cache=True, nogil=True, inline="always")
def sample_unit(rng):
    """Fair draw from {-1, +1}; one uniform consumed."""
    if rng.random() < 0.5:
        return np.int64(1)
    return np.int64(-1)


@njit(cache=True, nogil=True, inline="always")
def sample_geom(rng, q):
    """Bilateral geometric draw as a difference of two geometrics.

    G1, G2 are independent geometric on {0, 1, ...} with success
    probability q, drawn by inversion: G = floor(log(1-U) / log(1-q)).
    The convolution G1 - G2 has pmf q/(2-q) * (1-q)^|k|; two uniforms
    consumed, in the order G1 then G2.
    """
    ln1mq = np.log1p(-q)
    g1 = np.int64(np.log1p(-rng.random()) / ln1mq)
    g2 = np.int64(np.log1p(-rng.random()) / ln1mq)
    return g1 - g2


@njit(cache=True, nogil=True, inline="always")
def sample_power(rng, beta):
    """Symmetric power-law draw: rejection-sampled magnitude, fair sign.

    The magnitude follows P[X = k] = k^(-beta) / zeta(beta) on {1, 2, ...},
    generated by Devroye's rejection scheme: candidate X = floor(U^(-1/(beta-1)))
    with the accept test calibrated to the discrete pmf.  Uniform consumption
    per attempt is (U, V); one further uniform picks the sign after a
    candidate is accepted.
    """
    am1 = beta - 1.0
    b = 2.0**am1
    for _ in range(MAX_REJECTIONS):
        u = 1.0 - rng.random()
        v = rng.random()
        x = np.floor(u ** (-1.0 / am1))
        if x >= _MAGNITUDE_CAP or x < 1.0:
            continue
        t = (1.0 + 1.0 / x) ** am1
        if v * x * (t - 1.0) / (b - 1.0) <= t / b:
            mag = np.int64(x)
            if rng.random() < 0.5:
                return mag
            return -mag
    raise RuntimeError("power-law rejection sampler exceeded its iteration cap")


@njit(cache=True, nogil=True, inline="always")
def sample_law(rng, law_code, q, beta):
    if law_code == LAW_UNIT:
        return sample_unit(rng)
    if law_code == LAW_GEOM:
        return sample_geom(rng, q)
    return sample_power(rng, beta)


@njit(cache=True, nogil=True)
def sample_batch(rng, law_code, q, beta, out):
    for i in range(out.shape[0]):
        out[i] = sample_law(rng, law_code, q, beta)


@njit(cache=True, nogil=True, inline="always")
def mutate_into(rng, parent, out, n, gsemo, law_code, q, beta):
    """Write one offspring of ``parent`` into ``out``.

    Single-dimensional mode picks one index uniformly and adds one draw.
    Full-dimensional mode flips an independent 1/n coin per component, in
    index order, drawing a step immediately after each successful coin.
    """
    for i in range(n):
        out[i] = parent[i]
    if gsemo:
        inv_n = 1.0 / n
        for i in range(n):
            if rng.random() < inv_n:
                out[i] = out[i] + sample_law(rng, law_code, q, beta)
    else:
        i = rng.integers(0, n)
        out[i] = out[i] + sample_law(rng, law_code, q, beta)
