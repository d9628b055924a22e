"""
Correlated uniform vectors through a Gaussian copula.

The objectives of a rho-MNK landscape share one correlation value ``rho``
between every pair. Each fitness-table row is an M-vector with uniform
marginals on [0, 1) whose pairwise Pearson correlation is ``rho``. We get it
by pushing a correlated Gaussian vector through the standard normal CDF.

For uniform marginals obtained that way, the Pearson correlation of the
uniforms relates to the Gaussian correlation ``r`` through

    rho = (6 / pi) * arcsin(r / 2)

so the Gaussian matrix is built with ``r = 2 sin(pi rho / 6)``.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .errors import NotPositiveSemidefinite, RhoOutOfRange

PSD_TOLERANCE = 1e-9

# largest double strictly below 1.0
_BELOW_ONE = np.nextafter(1.0, 0.0)


def validate_rho(m, rho):
    """Raise :class:`RhoOutOfRange` unless ``-1/(m-1) <= rho <= 1``."""
    if m < 2:
        raise ValueError(f"need at least two objectives, got m={m}")
    lower = -1.0 / (m - 1)
    if not (lower <= rho <= 1.0):
        raise RhoOutOfRange(m, rho)


@dataclass(frozen=True)
class CorrelationMatrix:
    """Equicorrelation matrix: unit diagonal, ``rho`` everywhere else."""

    m: int
    rho: float

    def __post_init__(self):
        validate_rho(self.m, self.rho)

    @property
    def matrix(self):
        c = np.full((self.m, self.m), float(self.rho))
        np.fill_diagonal(c, 1.0)
        return c


def adjust_for_copula(c):
    """Gaussian correlation matrix whose copula image has correlation ``c``.

    Parameters
    ----------
    c : CorrelationMatrix

    Returns
    -------
    np.ndarray
        ``(m, m)`` matrix with unit diagonal and ``2 sin(pi rho / 6)`` off it.

    Raises
    ------
    NotPositiveSemidefinite
        If the adjusted matrix has an eigenvalue below ``-1e-9``. This happens
        close to the lower admissible ``rho`` when ``m >= 3``.
    """
    target = c.matrix
    r = 2.0 * np.sin(np.pi * target / 6.0)
    # +-1 are fixed points of the map; keep them exact despite sin rounding
    r = np.where(np.abs(target) == 1.0, target, r)
    smallest = np.linalg.eigvalsh(r)[0]
    if smallest < -PSD_TOLERANCE:
        raise NotPositiveSemidefinite(
            f"copula matrix for m={c.m}, rho={c.rho} has eigenvalue {smallest:.3g}"
        )
    return r


def _semidefinite_factor(r):
    # eigen-factor B (B B^T = r), then LQ so the factor is lower-triangular
    w, v = np.linalg.eigh(r)
    w = np.where(w < 0.0, 0.0, w)
    b = v * np.sqrt(w)
    q, upper = np.linalg.qr(b.T)
    lower = upper.T
    signs = np.where(np.diag(lower) < 0.0, -1.0, 1.0)
    return lower * signs


@dataclass(frozen=True)
class CopulaSampler:
    """Draws M-vectors with uniform [0, 1) marginals and a fixed correlation.

    ``gaussian_factor`` is lower-triangular with ``factor @ factor.T`` equal
    to the copula-adjusted matrix. Immutable; share it freely, but give each
    consumer its own random stream.
    """

    gaussian_factor: np.ndarray

    @property
    def m(self):
        return self.gaussian_factor.shape[0]

    def draw(self, rng):
        """One vector of length ``m``."""
        return self.draw_many(rng, 1)[0]

    def draw_many(self, rng, count):
        """``(count, m)`` array; row ``j`` equals the ``j``-th of ``count`` calls to :meth:`draw`."""
        z = rng.standard_normal((count, self.m))
        # fixed-order accumulation instead of BLAS: bit-identical for any batch size
        x = np.zeros_like(z)
        for c in range(self.m):
            x += z[:, c, None] * self.gaussian_factor[:, c]
        u = ndtr(x)
        return np.minimum(u, _BELOW_ONE)


def build_sampler(c):
    """Factor the adjusted matrix of ``c`` into a :class:`CopulaSampler`.

    Plain Cholesky is used when the matrix is positive definite; the rank
    deficient cases (``rho = 1``, or ``rho = -1`` with two objectives) go
    through a clipped eigen-decomposition re-triangularised by QR.
    """
    r = adjust_for_copula(c)
    try:
        factor = np.linalg.cholesky(r)
    except np.linalg.LinAlgError:
        factor = _semidefinite_factor(r)
    factor.setflags(write=False)
    return CopulaSampler(factor)
