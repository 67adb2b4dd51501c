"""Masked line-singularity data: weighted segment on the x2 = 0 row, band-pass
filters on the coronas, and vertical strip masks.
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate

from .errors import ModelError, ScaleError
from .grid import Grid2D, check_size, dft_array, freqs, idft_array, points, values_of
from .meyer import meyer_W, meyer_phi_hat


@dataclass(frozen=True)
class LineModelSpec:
    rho: float = 0.35

    def __post_init__(self):
        if not 0 < self.rho < 0.5:
            raise ModelError(f"rho must lie in (0, 1/2), got {self.rho}")

    def weight(self, x):
        """C-infinity bump exp(1 - 1/(1 - (x/rho)^2)), w(0) = 1."""
        t = np.asarray(x, dtype=float) / self.rho
        inside = np.abs(t) < 1
        out = np.zeros_like(t)
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - t[inside] ** 2))
        return out

    def weight_hat(self, xi):
        return weight_hat(self, xi)


def _w_scalar(x, rho):
    t = x / rho
    if abs(t) >= 1:
        return 0.0
    return float(np.exp(1.0 - 1.0 / (1.0 - t * t)))


@lru_cache(maxsize=None)
def _what(rho, xi):
    # w is real and even: w^(xi) = 2 int_0^rho w(x) cos(2 pi x xi) dx
    if xi == 0:
        val, _ = integrate.quad(_w_scalar, 0.0, rho, args=(rho,), epsabs=1e-14, epsrel=1e-13, limit=200)
    else:
        val, _ = integrate.quad(_w_scalar, 0.0, rho, args=(rho,), weight="cos",
                                wvar=2 * np.pi * xi, epsabs=1e-14, epsrel=1e-13, limit=400)
    return 2.0 * val


def weight_hat(spec, xi):
    """Fourier transform of the weight, by adaptive quadrature (abs. error ~1e-13)."""
    xi = np.asarray(xi, dtype=float)
    flat = np.array([_what(spec.rho, abs(float(v))) for v in xi.ravel()])
    return flat.reshape(xi.shape).astype(complex)


def experiment_size(j):
    """Grid side for scale j: the smallest power of two holding corona C_j."""
    return 2 ** (2 * j)


def _corona_check(j, n):
    if j < 1:
        raise ScaleError(f"scale index must be >= 1, got {j}")
    if 2.0 ** (2 * j - 1) > n / 2:
        raise ScaleError(f"corona C_{j} exceeds grid n={n}")


def wavelet_tile(jj, n):
    """F~_jj(xi) = sum over orientations of |W^iota(xi / 2^jj)|."""
    f = freqs(n).astype(float) / 2.0 ** jj
    p = meyer_phi_hat(f)
    w = np.abs(meyer_W(f))
    return np.outer(p, w) + np.outer(w, p) + np.outer(w, w)


def bandpass_F(j, n):
    """F_j = F~_2j + F~_2j+1: real, non-negative, supported in C_j."""
    _corona_check(j, n)
    return wavelet_tile(2 * j, n) + wavelet_tile(2 * j + 1, n)


def line_spectrum(spec, j, n):
    n = check_size(n)
    _corona_check(j, n)
    wh = weight_hat(spec, freqs(n))
    return wh[:, None] * bandpass_F(j, n)


def filtered_line_image(spec, j, n=None):
    """wL_j sampled on the n x n torus grid (real)."""
    n = experiment_size(j) if n is None else n
    S = line_spectrum(spec, j, n)
    return Grid2D(idft_array(S).real.copy())


# --- strip masks ------------------------------------------------------------

@dataclass(frozen=True)
class MaskSpec:
    h: float
    n: int

    @property
    def columns(self):
        """Signed column offsets m (x1 = m/n) inside the mask.

        A column is masked when its cell [m - 1/2, m + 1/2]/n meets the strip
        |x1| <= h (so the strip is never under-masked); h = 0 gives one column.
        """
        c = int(np.ceil(self.h * self.n + 0.5)) - 1
        if 2 * c + 1 >= self.n:
            return np.arange(-(self.n // 2), self.n - self.n // 2)
        return np.arange(-c, c + 1)

    @property
    def indicator(self):
        m = np.zeros(self.n)
        m[self.columns % self.n] = 1.0
        return np.repeat(m[:, None], self.n, axis=1)

    @property
    def width(self):
        return self.columns.size / self.n


def strip_mask(h, n, spec=None):
    n = check_size(n)
    rho = (spec or LineModelSpec()).rho
    if h < 0 or h >= rho:
        raise ModelError(f"mask half-width must satisfy 0 <= h < rho={rho}, got {h}")
    return MaskSpec(float(h), n)


def apply_known(f, mask):
    v = values_of(f)
    return (1.0 - mask.indicator) * v


def apply_missing(f, mask):
    v = values_of(f)
    return mask.indicator * v


def dirichlet_kernel(mask):
    """Spectrum (in xi1) of the mask columns: (1/n) sum_m e^{-2 pi i m xi1/n}, closed form."""
    n, w = mask.n, mask.columns.size
    xi = freqs(n).astype(float)
    out = np.empty(n)
    z = xi == 0
    out[z] = w / n
    s = np.sin(np.pi * xi[~z] / n)
    # symmetric run of w columns (or the full torus when w == n)
    out[~z] = np.sin(np.pi * w * xi[~z] / n) / (n * s)
    return out


def mask_spectrum_check(h, n, seed=0, spec=None):
    """Max deviation between dft(M f) and the xi1-convolution of dft(f) with the
    mask's Dirichlet kernel, for a random band-limited test function."""
    mask = MaskSpec(float(h), check_size(n))
    rng = np.random.default_rng(seed)
    f = freqs(n)
    band = np.abs(f) <= n // 4
    S = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) * np.outer(band, band)
    g = idft_array(S)
    lhs = dft_array(mask.indicator * g)
    D = dirichlet_kernel(mask)
    # circulant in the centered layout: C[a, b] = D(xi_a - xi_b) (cyclic)
    h2 = n // 2
    diff = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
    diff = np.where(diff >= h2, diff - n, diff) + h2
    rhs = D[diff] @ S
    return float(np.max(np.abs(lhs - rhs)))


def h_law(kind, c, j):
    """Mask half-width at scale j: c 2^-2j, c 2^-j, or c."""
    if kind in ("2^-2j", "pow2j", "c*2^-2j"):
        return c * 2.0 ** (-2 * j)
    if kind in ("2^-j", "powj", "c*2^-j"):
        return c * 2.0 ** (-j)
    if kind in ("const", "c"):
        return float(c)
    raise ModelError(f"unknown h-law {kind!r}")
