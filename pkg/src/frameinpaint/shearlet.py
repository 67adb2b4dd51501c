"""Smooth cone-adapted Parseval shearlets on the torus.

Scale j lives on the corona C_j with radial window cW(4^-j xi), where
cW(xi) = sqrt(|Phi(xi/4)|^2 - |Phi(xi)|^2) and Phi = phi x phi (Meyer scaling).
Directional windows:

    h-cone  V(2^j xi2/xi1 - l),  lattice t = ((k1 - l k2)/4^j, k2/2^j)
    v-cone  V(2^j xi1/xi2 - l),  lattice t = (k1/2^j, (k2 - l k1)/4^j)

with |l| < 2^j, atoms  2^-3j/2 cW V exp(2 pi i <xi, t>).  The seam atoms
l = +-2^j glue the cones along the diagonals; they use the h-lattice at half
the phase (t/2), which doubles both moduli, so their amplitude is
1/sqrt(4 * 8^j) = 2^(-3j/2 - 1).
"""
import numpy as np

from .bands import BandFrame, make_band
from .errors import ArgumentError, ScaleError
from .grid import dft_array, freqs, idft_array, values_of
from .meyer import meyer_phi_hat, nu_ramp

CONES = ("h", "v", "seam")


def bump_V(xi):
    """V(xi) = cos(pi/2 nu(|xi|)) on [-1, 1]; sum_k |V(xi + k)|^2 = 1."""
    a = np.abs(np.asarray(xi, dtype=float))
    return np.where(a < 1, np.cos(0.5 * np.pi * nu_ramp(a)), 0.0)


def scaling_2d(xi1, xi2):
    return meyer_phi_hat(xi1) * meyer_phi_hat(xi2)


def corona_window(xi1, xi2):
    d = scaling_2d(xi1 / 4, xi2 / 4) ** 2 - scaling_2d(xi1, xi2) ** 2
    return np.sqrt(np.maximum(d, 0.0))


def corona_fits(j, n):
    return 2.0 ** (2 * j - 1) <= n / 2


def _ratio(num, den):
    out = np.full(num.shape, np.inf)
    nz = den != 0
    out[nz] = num[nz] / den[nz]
    return out


def _pick(u, order, lo, hi):
    """Indices (into the unsorted arrays) whose u lies strictly inside (lo, hi)."""
    us = u[order]
    a = np.searchsorted(us, lo, side="right")
    b = np.searchsorted(us, hi, side="left")
    return order[a:b]


class ShearletFrame(BandFrame):
    """Shearlets at scales jmin..jmax plus the coarse layer Phi(4^-jmin xi).

    Covers |xi|_inf <= 4^jmax / 4 exactly.  clip=True lets the top coronas run
    past the grid Nyquist (cut at the grid, lattice decimated).
    """

    kind = "shearlet"

    def __init__(self, n, jmin, jmax, coarse=True, clip=False, seam_phase="half"):
        if jmax < jmin:
            raise ArgumentError(f"empty scale range [{jmin}, {jmax}]")
        if jmin < 0:
            raise ScaleError("scales must be non-negative")
        if not clip and not corona_fits(jmax, n):
            raise ScaleError(f"corona C_{jmax} exceeds grid n={n}")
        if seam_phase not in ("half", "full"):
            raise ArgumentError(f"unknown seam phase {seam_phase!r}")
        self.jmin, self.jmax, self.clip, self.coarse = jmin, jmax, clip, coarse
        self.seam_phase = seam_phase
        f = freqs(n)
        x1, x2 = np.meshgrid(f, f, indexing="ij")
        x1, x2 = x1.ravel(), x2.ravel()
        bands = []
        if coarse:
            s = 4.0 ** jmin
            w = scaling_2d(x1 / s, x2 / s)
            nz = np.nonzero(w)[0]
            bands.append(make_band(("coarse", jmin), n, x1[nz], x2[nz], w[nz],
                                   (4 ** jmin, 4 ** jmin), -1, kmap=np.eye(2, dtype=int)))
        for j in range(jmin, jmax + 1):
            bands.extend(self._scale_bands(n, j, x1, x2))
        super().__init__(n, bands)

    def _scale_bands(self, n, j, x1, x2):
        s = 4.0 ** j
        w = corona_window(x1 / s, x2 / s)
        nz = np.nonzero(w)[0]
        a, b, w = x1[nz], x2[nz], w[nz]
        r = 2 ** j
        hcone = np.abs(b) <= np.abs(a)
        u = r * _ratio(b.astype(float), a.astype(float))    # finite on the h-cone
        v = r * _ratio(a.astype(float), b.astype(float))    # finite off the xi2 = 0 axis
        ou, ov = np.argsort(u, kind="stable"), np.argsort(v, kind="stable")
        out = []
        if j == 0:
            lat_h = lat_v = (1, 1)
        else:
            lat_h, lat_v = (4 ** j, 2 ** j), (2 ** j, 4 ** j)
        for l in range(-r + 1, r):
            for cone, uu, oo, lat, kmap in (
                    ("h", u, ou, lat_h, [[1, -l], [0, 1]]),
                    ("v", v, ov, lat_v, [[1, 0], [-l, 1]])):
                sel = _pick(uu, oo, l - 1, l + 1)
                val = w[sel] * bump_V(uu[sel] - l)
                keep = val > 0
                sel, val = sel[keep], val[keep]
                out.append(make_band((cone, j, l), n, a[sel], b[sel], val, lat, +1, kmap=kmap))
        for l in (-r, r):
            sh = _pick(u, ou, l - 1, l + 1)
            sh = sh[hcone[sh]]
            sv = _pick(v, ov, l - 1, l + 1)
            sv = sv[~hcone[sv]]
            sel = np.concatenate([sh, sv])
            val = w[sel] * np.concatenate([bump_V(u[sh] - l), bump_V(v[sv] - l)])
            keep = val > 0
            sel, val = sel[keep], val[keep]
            if j == 0:
                lat = (1, 1)
            elif self.seam_phase == "half":
                lat = (2 * 4 ** j, 2 ** (j + 1))
            else:
                lat = (4 ** j, 2 ** j)
            out.append(make_band(("seam", j, l), n, a[sel], b[sel], val, lat, +1,
                                 kmap=[[1, -l], [0, 1]]))
        return out

    @property
    def covered_radius(self):
        return 4.0 ** self.jmax / 4

    def covered(self):
        f = np.abs(freqs(self.n))
        return np.maximum.outer(f, f) <= self.covered_radius


def direction_window(cone, j, l, xi1, xi2):
    """The angular factor of band (cone, j, l) at arbitrary frequencies."""
    xi1 = np.asarray(xi1, dtype=float)
    xi2 = np.asarray(xi2, dtype=float)
    r = 2.0 ** j
    u = r * _ratio(xi2, xi1)
    v = r * _ratio(xi1, xi2)
    if cone == "h":
        return bump_V(u - l)
    if cone == "v":
        return bump_V(v - l)
    if cone == "seam":
        hc = np.abs(xi2) <= np.abs(xi1)
        return np.where(hc, bump_V(np.where(hc, u, 0) - l), bump_V(np.where(hc, 0, v) - l))
    raise ArgumentError(f"unknown cone {cone!r}")


def shearlet_atom_spectrum(cone, j, l, n, k=(0, 0), seam_phase="half"):
    """Atom spectrum straight from the matrix formulas (used as an oracle)."""
    if not corona_fits(j, n):
        raise ScaleError(f"corona C_{j} exceeds grid n={n}")
    f = freqs(n).astype(float)
    x1, x2 = np.meshgrid(f, f, indexing="ij")
    k1, k2 = k
    win = corona_window(x1 / 4.0 ** j, x2 / 4.0 ** j) * direction_window(cone, j, l, x1, x2)
    if cone == "v":
        # xi A^v S^v_-l = (2^-j xi1 - l 4^-j xi2, 4^-j xi2)
        e1, e2 = x1 / 2 ** j - l * x2 / 4 ** j, x2 / 4 ** j
    else:
        # xi A^h S^h_-l = (4^-j xi1, 2^-j xi2 - l 4^-j xi1)
        e1, e2 = x1 / 4 ** j, x2 / 2 ** j - l * x1 / 4 ** j
    ph = e1 * k1 + e2 * k2
    if cone == "seam" and j >= 1:
        amp = 2.0 ** (-1.5 * j - 1) if seam_phase == "half" else 2.0 ** (-1.5 * j)
        fac = 1.0 if seam_phase == "half" else 2.0
        return amp * win * np.exp(1j * np.pi * fac * ph)
    return 2.0 ** (-1.5 * j) * win * np.exp(2j * np.pi * ph)


def _cont_window(n, a, s, cone):
    if 1.0 / (2 * a * a) > n / 2 + 1e-12:
        raise ScaleError(f"scale a={a} corona exceeds grid n={n}")
    f = freqs(n).astype(float)
    x1, x2 = np.meshgrid(f, f, indexing="ij")
    w = corona_window(a * a * x1, a * a * x2)
    if cone == "v":
        # xi A_a^v S_s^v = (a xi1 + s a^2 xi2, a^2 xi2)
        d = bump_V(_ratio(a * x1 + s * a * a * x2, a * a * x2))
    elif cone == "h":
        # xi A_a^h S_s^h = (a^2 xi1, s a^2 xi1 + a xi2)
        d = bump_V(_ratio(a * x2 + s * a * a * x1, a * a * x1))
    else:
        raise ArgumentError(f"continuous coefficients need cone h or v, got {cone!r}")
    return a ** 1.5 * w * d


def continuous_shearlet_coeff(f, a, s, t, cone="v"):
    """<f, sigma_(a,s,t)> with sigma^ = a^3/2 cW(a^2 xi) V(xi A_a S_s) e^{2 pi i <xi, t>}."""
    v = values_of(f)
    n = v.shape[0]
    g = _cont_window(n, a, s, cone)
    fr = freqs(n).astype(float)
    x1, x2 = np.meshgrid(fr, fr, indexing="ij")
    ph = np.exp(-2j * np.pi * (x1 * t[0] + x2 * t[1]))
    return complex(np.sum(dft_array(v) * np.conj(g) * ph))


def continuous_shearlet_map(f, a, s, cone="v"):
    """Coefficients for every translation t = -x, x a grid point.

    Entry (m1, m2) is the coefficient of the atom centered at the point
    (m1/n, m2/n), i.e. t = -(m1/n, m2/n).
    """
    v = values_of(f)
    g = _cont_window(v.shape[0], a, s, cone)
    return idft_array(dft_array(v) * np.conj(g))
