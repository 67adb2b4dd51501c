"""Band-wise Parseval frames on the torus.

Every frame here is a union of *bands*.  A band is a frequency window g
(sampled at integer frequencies) together with a rectangular translation
lattice (p1/m1, p2/m2), p in Z/m1 x Z/m2.  Its atoms have spectra

    g(xi) * exp(sign * 2 pi i <xi, (p1/m1, p2/m2)>).

The amplitude 1/sqrt(m1 m2) is folded into g, so the frame is Parseval iff
sum over bands of m1 m2 |g|^2 == 1 on the covered frequencies, provided no
two support points of a band share a residue mod (m1, m2).  Analysis is then
exact: multiply, fold the support onto Z/m1 x Z/m2, one small FFT.
"""
from dataclasses import dataclass
import math

import numpy as np

from .errors import ScaleError, ShapeError
from .grid import check_size, dft_array, freqs, idft_array, values_of


@dataclass
class Band:
    key: tuple
    n: int
    idx: np.ndarray        # flat indices into the centered n x n spectrum
    win: np.ndarray        # atom spectrum of translate p = 0 on idx
    res: np.ndarray        # flat residue index r1 * m2 + r2
    moduli: tuple
    sign: int
    nominal: tuple         # lattice moduli before decimation
    kmap: np.ndarray = None  # integer matrix: p = kmap @ k mod m (nominal bands only)

    @property
    def size(self):
        return self.moduli[0] * self.moduli[1]

    @property
    def decimated(self):
        return tuple(self.moduli) != tuple(self.nominal)

    def xi(self):
        """Integer frequencies (xi1, xi2) of the support."""
        f = freqs(self.n)
        return f[self.idx // self.n], f[self.idx % self.n]

    def positions(self):
        """Translation vectors t(p) for every lattice point, shape (m1, m2, 2)."""
        m1, m2 = self.moduli
        p1, p2 = np.meshgrid(np.arange(m1) / m1, np.arange(m2) / m2, indexing="ij")
        return np.stack([p1, p2], axis=-1)

    def centers(self):
        """Nominal spatial centers of the atoms in [-1/2, 1/2)^2.

        A spectrum g * exp(sign 2 pi i <xi, t>) is g-check translated by -sign * t.
        """
        c = -self.sign * self.positions()
        return (c + 0.5) % 1.0 - 0.5

    def spectrum(self, p=(0, 0)):
        """Full centered spectrum of atom p."""
        m1, m2 = self.moduli
        x1, x2 = self.xi()
        ph = np.exp(self.sign * 2j * np.pi * (x1 * (p[0] / m1) + x2 * (p[1] / m2)))
        out = np.zeros(self.n * self.n, dtype=complex)
        out[self.idx] = self.win * ph
        return out.reshape(self.n, self.n)

    def k_to_p(self, k):
        if self.kmap is None:
            raise ScaleError(f"band {self.key} is decimated; paper indices unavailable")
        k = np.asarray(k)
        p = self.kmap @ k
        return int(p[0] % self.moduli[0]), int(p[1] % self.moduli[1])


def _injective(x1, x2, m1, m2):
    r = (x1 % m1) * m2 + (x2 % m2)
    return np.unique(r).size == r.size


def make_band(key, n, xi1, xi2, unit_win, nominal, sign, kmap=None, strict=True):
    """Assemble a band from its support points and unit-partition window.

    unit_win holds |window| normalized so that the squared windows of all bands
    sum to one; the lattice amplitude is applied here.  When the nominal lattice
    is finer than the grid resolves (a modulus above n), it is replaced by the
    coarsest power-of-two sub-lattice that is still alias free.
    """
    xi1 = np.asarray(xi1, dtype=np.int64)
    xi2 = np.asarray(xi2, dtype=np.int64)
    m1, m2 = nominal
    if max(m1, m2) > n:
        m1, m2 = min(m1, 2 * n), min(m2, 2 * n)
        changed = True
        while changed:
            changed = False
            for ax in ((0, 1) if m1 >= m2 else (1, 0)):
                t1, t2 = (m1 // 2, m2) if ax == 0 else (m1, m2 // 2)
                if min(t1, t2) >= 1 and _injective(xi1, xi2, t1, t2):
                    m1, m2 = t1, t2
                    changed = True
                    break
        kmap = None
    elif strict and not _injective(xi1, xi2, m1, m2):
        raise ScaleError(f"band {key}: support aliases on lattice {nominal}")
    h = n // 2
    idx = (xi1 + h) * n + (xi2 + h)
    res = (xi1 % m1) * m2 + (xi2 % m2)
    win = np.asarray(unit_win, dtype=complex) / math.sqrt(m1 * m2)
    return Band(key, n, idx, win, res, (int(m1), int(m2)), sign, tuple(nominal),
                None if kmap is None else np.asarray(kmap, dtype=np.int64))


class Coeffs:
    """Analysis coefficients: one (m1, m2) complex array per band."""

    def __init__(self, frame, arrays):
        if len(arrays) != len(frame.bands):
            raise ShapeError(f"expected {len(frame.bands)} bands, got {len(arrays)}")
        for b, a in zip(frame.bands, arrays):
            if a.shape != tuple(b.moduli):
                raise ShapeError(f"band {b.key}: shape {a.shape} != lattice {b.moduli}")
        self.frame = frame
        self.arrays = list(arrays)

    def __getitem__(self, key):
        return self.arrays[self.frame.index[key]]

    def __len__(self):
        return len(self.arrays)

    def keys(self):
        return [b.key for b in self.frame.bands]

    def items(self):
        return zip(self.keys(), self.arrays)

    @property
    def count(self):
        return sum(a.size for a in self.arrays)

    def energy(self):
        return float(sum(np.sum(np.abs(a) ** 2) for a in self.arrays))

    def l1(self):
        return float(sum(np.sum(np.abs(a)) for a in self.arrays))

    def flat(self):
        return np.concatenate([a.ravel() for a in self.arrays])

    def like(self, flat):
        out, pos = [], 0
        for b in self.frame.bands:
            out.append(np.asarray(flat[pos:pos + b.size]).reshape(b.moduli))
            pos += b.size
        return Coeffs(self.frame, out)

    def map(self, fn):
        return Coeffs(self.frame, [fn(a) for a in self.arrays])

    def masked(self, keep):
        """Zero every coefficient whose entry in `keep` (a Coeffs of bools) is False."""
        return Coeffs(self.frame, [np.where(k, a, 0) for a, k in zip(self.arrays, keep.arrays)])


class BandFrame:
    """A Parseval frame given as a list of bands on an n x n grid."""

    kind = "frame"

    def __init__(self, n, bands):
        self.n = check_size(n)
        self.bands = [b for b in bands if b.idx.size]
        self.index = {b.key: i for i, b in enumerate(self.bands)}
        for b in self.bands:
            b.cwin = np.conj(b.win)

    def band(self, key):
        return self.bands[self.index[key]]

    @property
    def count(self):
        return sum(b.size for b in self.bands)

    def partition(self):
        """sum over bands of m1 m2 |g|^2 on the centered grid (1 where covered)."""
        acc = np.zeros(self.n * self.n)
        for b in self.bands:
            acc[b.idx] += b.size * np.abs(b.win) ** 2
        return acc.reshape(self.n, self.n)

    # -- fast operators ----------------------------------------------------

    def _check(self, f):
        v = values_of(f)
        if v.shape != (self.n, self.n):
            raise ShapeError(f"grid {v.shape} does not match frame size {self.n}")
        return v

    def analyze_spectrum(self, S):
        S = np.asarray(S).ravel()
        out = []
        for b in self.bands:
            m1, m2 = b.moduli
            G = np.zeros(m1 * m2, dtype=complex)
            G[b.res] = S[b.idx] * b.cwin
            G = G.reshape(m1, m2)
            # c_p = sum_xi F(xi) exp(-sign 2 pi i <xi, p/m>)
            out.append(np.fft.fft2(G) if b.sign > 0 else np.fft.ifft2(G) * (m1 * m2))
        return Coeffs(self, out)

    def synthesize_spectrum(self, c):
        if isinstance(c, Coeffs):
            arrays = c.arrays
        else:
            arrays = list(c)
        if len(arrays) != len(self.bands):
            raise ShapeError(f"expected {len(self.bands)} bands, got {len(arrays)}")
        S = np.zeros(self.n * self.n, dtype=complex)
        for b, a in zip(self.bands, arrays):
            m1, m2 = b.moduli
            if a.shape != (m1, m2):
                raise ShapeError(f"band {b.key}: shape {a.shape} != lattice {b.moduli}")
            G = np.fft.ifft2(a) * (m1 * m2) if b.sign > 0 else np.fft.fft2(a)
            S[b.idx] += b.win * G.ravel()[b.res]
        return S.reshape(self.n, self.n)

    def analysis(self, f):
        return self.analyze_spectrum(dft_array(self._check(f)))

    def synthesis(self, c, real=False):
        g = idft_array(self.synthesize_spectrum(c))
        return g.real.copy() if real else g

    def zeros(self):
        return Coeffs(self, [np.zeros(b.moduli, dtype=complex) for b in self.bands])

    # -- single atoms --------------------------------------------------------

    def atom_spectrum(self, key, p=(0, 0)):
        return self.band(key).spectrum(p)

    def atom(self, key, p=(0, 0)):
        return idft_array(self.atom_spectrum(key, p))

    def unit(self, key, p=(0, 0)):
        """Coefficient set with a single 1 at (key, p)."""
        c = self.zeros()
        c[key][p] = 1.0
        return c
