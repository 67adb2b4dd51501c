"""2D Parseval Meyer wavelets on the torus.

Atoms: psi_(iota, j, k)^(xi) = 2^-j W^iota(xi / 2^j) exp(-2 pi i <k, xi / 2^j>), k in (Z/2^j)^2,
with W^v = phi(xi1) W(xi2), W^h = W(xi1) phi(xi2), W^d = W(xi1) W(xi2).
A coarse layer phi(xi1/2^J) phi(xi2/2^J) completes the system below scale J.
"""
import numpy as np

from .bands import BandFrame, make_band
from .errors import ArgumentError, ScaleError
from .grid import freqs

ORIENTATIONS = ("h", "v", "d")
PHASES = ("printed", "zero")


def nu_ramp(x):
    """Polynomial ramp: 0 below 0, 1 above 1, nu(x) + nu(1 - x) = 1."""
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    return x ** 4 * (35 - 84 * x + 70 * x ** 2 - 20 * x ** 3)


def meyer_phi_hat(xi):
    a = np.abs(np.asarray(xi, dtype=float))
    out = np.where(a <= 1 / 16, 1.0, 0.0)
    mid = (a > 1 / 16) & (a < 1 / 8)
    return np.where(mid, np.cos(0.5 * np.pi * nu_ramp(16 * a - 1)), out)


def meyer_W(xi, phase="printed"):
    """1D Meyer wavelet window on 1/16 <= |xi| <= 1/4.

    phase="printed" keeps the unimodular factors exp(-16 pi i xi / 3) on the
    lower half and exp(-8 pi i xi / 3) on the upper half; phase="zero" drops
    them (|W| is unchanged, the atoms become even and better localized).
    """
    if phase not in PHASES:
        raise ArgumentError(f"unknown phase convention {phase!r}")
    xi = np.asarray(xi, dtype=float)
    a = np.abs(xi)
    lo = (a >= 1 / 16) & (a <= 1 / 8)
    hi = (a > 1 / 8) & (a <= 1 / 4)
    mag = np.where(lo, np.sin(0.5 * np.pi * nu_ramp(16 * a - 1)), 0.0)
    mag = np.where(hi, np.cos(0.5 * np.pi * nu_ramp(8 * a - 1)), mag)
    if phase == "zero":
        return mag.astype(complex)
    ph = np.where(lo, np.exp(-16j * np.pi * xi / 3), np.exp(-8j * np.pi * xi / 3))
    return mag * ph


def wavelet_window(iota, xi1, xi2, phase="printed"):
    """W^iota evaluated at (xi1, xi2) (broadcasting)."""
    if iota == "v":
        return meyer_phi_hat(xi1) * meyer_W(xi2, phase)
    if iota == "h":
        return meyer_W(xi1, phase) * meyer_phi_hat(xi2)
    if iota == "d":
        return meyer_W(xi1, phase) * meyer_W(xi2, phase)
    raise ArgumentError(f"unknown orientation {iota!r}")


def band_fits(j, n):
    return 2.0 ** j / 4 <= n / 2


def _separable_band(key, n, a, b, modulus, clip):
    f = freqs(n)
    r = np.nonzero(a)[0]
    c = np.nonzero(b)[0]
    x1 = np.repeat(f[r], c.size)
    x2 = np.tile(f[c], r.size)
    win = np.outer(a[r], b[c]).ravel()
    band = make_band(key, n, x1, x2, win, (modulus, modulus), -1, kmap=np.eye(2, dtype=int))
    band.sep = (a, b)      # 1D unit windows; win == outer(a, b) / sqrt(m1 m2) on the support
    return band


class MeyerFrame(BandFrame):
    """Meyer wavelets at scales jmin..jmax plus the coarse layer at jmin.

    Covers |xi|_inf <= 2^jmax / 8 exactly.  With clip=True the top bands may
    extend past the grid Nyquist; they are cut at the grid and their lattice
    decimated, which keeps the system Parseval on the whole grid.
    """

    kind = "meyer"

    def __init__(self, n, jmin, jmax, coarse=True, phase="printed", clip=False):
        if jmax < jmin:
            raise ArgumentError(f"empty scale range [{jmin}, {jmax}]")
        if jmin < 0:
            raise ScaleError("scales must be non-negative")
        if not clip and not band_fits(jmax, n):
            raise ScaleError(f"scale {jmax} band exceeds grid n={n}")
        if phase not in PHASES:
            raise ArgumentError(f"unknown phase convention {phase!r}")
        self.jmin, self.jmax, self.phase, self.clip = jmin, jmax, phase, clip
        f = freqs(n).astype(float)
        bands = []
        if coarse:
            p = meyer_phi_hat(f / 2 ** jmin).astype(complex)
            bands.append(_separable_band(("coarse", jmin), n, p, p, 2 ** jmin, clip))
        for j in range(jmin, jmax + 1):
            p = meyer_phi_hat(f / 2 ** j).astype(complex)
            w = meyer_W(f / 2 ** j, phase)
            for iota, a, b in (("h", w, p), ("v", p, w), ("d", w, w)):
                bands.append(_separable_band((iota, j), n, a, b, 2 ** j, clip))
        self.coarse = coarse
        super().__init__(n, bands)

    @property
    def covered_radius(self):
        return 2.0 ** self.jmax / 8

    def covered(self):
        f = np.abs(freqs(self.n))
        return np.maximum.outer(f, f) <= self.covered_radius


def wavelet_atom_spectrum(iota, j, n, k=(0, 0), phase="printed"):
    """Sampled spectrum 2^-j W^iota(xi/2^j) exp(-2 pi i <k, xi/2^j>) on the centered grid."""
    if not band_fits(j, n):
        raise ScaleError(f"scale {j} band exceeds grid n={n}")
    f = freqs(n).astype(float)
    x1, x2 = np.meshgrid(f, f, indexing="ij")
    s = 2.0 ** j
    return (wavelet_window(iota, x1 / s, x2 / s, phase) / s
            * np.exp(-2j * np.pi * (k[0] * x1 + k[1] * x2) / s))


def wavelet_analysis(f, j_range, **kw):
    from .grid import values_of
    if len(j_range) == 0:
        raise ArgumentError("empty scale range")
    v = values_of(f)
    frame = MeyerFrame(v.shape[0], min(j_range), max(j_range), **kw)
    return frame.analysis(v)


def wavelet_synthesis(c, real=False):
    return c.frame.synthesis(c, real=real)
