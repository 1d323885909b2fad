"""
Degree-based metrics: degree, density and the degree distribution.
"""

__all__ = [
    "degree_vector",
    "graph_density",
    "degree_histogram",
    "degree_distribution",
    "degree_skewness",
    "fit_powerlaw_exponent",
]

from typing import Optional

import jax.numpy as jnp
import numpy as np
import scipy.stats
from jax.scipy.special import zeta
from jaxtyping import ArrayLike
from scipy.optimize import minimize_scalar

from ..graph import Snapshot
from ..typing import IntVector


def degree_vector(snapshot: Snapshot) -> IntVector:
    """The number of incident edges of every node."""
    return snapshot.degree()


def graph_density(snapshot: Snapshot) -> Optional[float]:
    """The ratio of present edges to possible edges, `|E| / (n(n-1)/2)`.
    Absent with fewer than two nodes."""
    n = snapshot.n_nodes
    if n < 2:
        return None
    return snapshot.n_edges / (n * (n - 1) / 2)


def degree_histogram(degrees: ArrayLike) -> dict[int, int]:
    """Exact `{degree: node count}` histogram, omitting empty bins."""
    counts = np.bincount(np.asarray(degrees, dtype=np.int64).reshape(-1))
    return {int(k): int(c) for k, c in enumerate(counts) if c > 0}


def fit_powerlaw_exponent(
    degrees: ArrayLike, k_min: int = 2, min_samples: int = 50
) -> Optional[float]:
    """Discrete maximum-likelihood estimate of `gamma` in `P(k) ~ k^-gamma`
    over the degrees `k >= k_min`.

    The likelihood is normalised by the Hurwitz zeta function. The estimate
    is absent when fewer than `min_samples` degrees qualify or they take a
    single value.
    """
    k = np.asarray(degrees, dtype=float).reshape(-1)
    k = k[k >= k_min]
    if k.size < min_samples or np.unique(k).size < 2:
        return None
    n, log_sum = k.size, float(np.log(k).sum())

    def negative_log_likelihood(gamma: float) -> float:
        return gamma * log_sum + n * float(jnp.log(zeta(gamma, float(k_min))))

    result = minimize_scalar(
        negative_log_likelihood,
        bounds=(1.0 + 1e-6, 10.0),
        method="bounded",
        options={"xatol": 1e-8},
    )
    return float(result.x)


def degree_distribution(
    snapshot: Snapshot, k_min: int = 2, min_samples: int = 50
) -> tuple[dict[int, int], Optional[float]]:
    """The degree histogram and the power-law exponent estimate."""
    degrees = np.asarray(degree_vector(snapshot))
    return degree_histogram(degrees), fit_powerlaw_exponent(
        degrees, k_min, min_samples
    )


def degree_skewness(degrees: ArrayLike) -> Optional[float]:
    """Fisher-Pearson skewness of a degree sample. Absent for fewer than
    three samples or zero variance."""
    k = np.asarray(degrees, dtype=float).reshape(-1)
    if k.size < 3 or np.all(k == k[0]):
        return None
    return float(scipy.stats.skew(k, bias=True))
