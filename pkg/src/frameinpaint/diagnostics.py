"""Analysis quantities: cluster sets, clustered sparsity, cluster coherence,
concentration estimates, error bounds, masked mass, decay and phase-space
profiles.
"""
from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np
from scipy import integrate

from .bands import Coeffs
from .errors import ArgumentError
from .grid import dft_array, freqs, idft_array, values_of
from .meyer import meyer_phi_hat
from .shearlet import continuous_shearlet_map

_TOL = 1e-12


def _centered(t):
    return (t + 0.5) % 1.0 - 0.5


@dataclass(frozen=True)
class ClusterSet:
    """Index cluster around the line x2 = 0, in predicate form.

    kind "meyer": bands (iota, j') with j' in {2j, 2j+1}, all orientations,
    |k1| <= rho n' 2^j', |k2| <= n' with n' = 2^(eps j').
    kind "shearlet": band (v, j, 0) only, |k1| <= rho n 2^j, |k2| <= n with
    n = 2^(2 eps j).  Lattice coordinates k are read off the translation
    t = p/m (centered), so decimated bands are handled uniformly.
    """
    kind: str
    j: int
    eps: float = 0.125
    rho: float = 0.35

    def rules(self):
        """List of (band key, k1 bound in t-units, k2 bound in t-units)."""
        if self.kind == "meyer":
            out = []
            for jj in (2 * self.j, 2 * self.j + 1):
                nn = 2.0 ** (self.eps * jj)
                for iota in ("h", "v", "d"):
                    out.append(((iota, jj), self.rho * nn, nn / 2.0 ** jj))
            return out
        nn = 2.0 ** (2 * self.eps * self.j)
        return [(("v", self.j, 0), self.rho * nn, nn / 4.0 ** self.j)]

    def band_mask(self, band):
        """Boolean (m1, m2) membership array for one band (all False if not a cluster band)."""
        m1, m2 = band.moduli
        for key, b1, b2 in self.rules():
            if key == band.key:
                t1 = np.abs(_centered(np.arange(m1) / m1))
                t2 = np.abs(_centered(np.arange(m2) / m2))
                return np.outer(t1 <= b1 + _TOL, t2 <= b2 + _TOL)
        return np.zeros((m1, m2), dtype=bool)

    def mask(self, frame):
        if frame.kind != self.kind:
            raise ArgumentError(f"cluster for {self.kind} applied to a {frame.kind} frame")
        return Coeffs(frame, [self.band_mask(b) for b in frame.bands])

    def members(self, frame):
        """Explicit list of (band key, (p1, p2))."""
        out = []
        for b, m in zip(frame.bands, self.mask(frame).arrays):
            out.extend((b.key, (int(p), int(q))) for p, q in zip(*np.nonzero(m)))
        return out

    def size(self, frame):
        return int(sum(m.sum() for m in self.mask(frame).arrays))


def cluster_set(kind, j, eps=0.125, rho=0.35):
    if kind not in ("meyer", "shearlet"):
        raise ArgumentError(f"unknown frame kind {kind!r}")
    if eps <= 0:
        raise ArgumentError(f"eps must be positive, got {eps}")
    if kind == "shearlet" and eps >= 0.25:
        raise ArgumentError(f"shearlet clusters need eps < 1/4, got {eps}")
    if not 0 < rho < 0.5:
        raise ArgumentError(f"rho must lie in (0, 1/2), got {rho}")
    return ClusterSet(kind, int(j), float(eps), float(rho))


def _as_mask(cluster, frame):
    if isinstance(cluster, ClusterSet):
        return cluster.mask(frame)
    if isinstance(cluster, Coeffs):
        return cluster
    return Coeffs(frame, [np.asarray(m, dtype=bool) for m in cluster])


def clustered_sparsity_delta(coeffs, cluster):
    """l1 mass of the coefficients outside the cluster."""
    keep = _as_mask(cluster, coeffs.frame)
    return float(sum(np.sum(np.abs(a[~k])) for a, k in zip(coeffs.arrays, keep.arrays)))


# --- cluster coherence --------------------------------------------------------

def _xi2_support(band):
    return np.unique(band.xi()[1])


def _overlaps(frame, bands_in):
    """Probe bands whose xi2-support meets that of some cluster band.

    Masking acts along x1 only, so P_M phi_i keeps the xi2-support of phi_i;
    probes outside it have exactly zero inner product.
    """
    sup = np.unique(np.concatenate([_xi2_support(frame.bands[i]) for i in bands_in]))
    return [q for q, b in enumerate(frame.bands) if np.intersect1d(_xi2_support(b), sup).size]


def _analyze_subset(frame, S, which):
    S = S.ravel()
    out = {}
    for q in which:
        b = frame.bands[q]
        m1, m2 = b.moduli
        G = np.zeros(m1 * m2, dtype=complex)
        G[b.res] = S[b.idx] * b.cwin
        G = G.reshape(m1, m2)
        out[q] = np.fft.fft2(G) if b.sign > 0 else np.fft.ifft2(G) * (m1 * m2)
    return out


def cluster_coherence_bruteforce(cluster, mask, frame, prune=True):
    """max_q sum_{i in cluster} |<P_M phi_i, phi_q>| by one analysis per cluster atom."""
    keep = _as_mask(cluster, frame)
    bands_in = [i for i, k in enumerate(keep.arrays) if k.any()]
    if not bands_in:
        return 0.0
    which = _overlaps(frame, bands_in) if prune else list(range(len(frame.bands)))
    acc = {q: np.zeros(frame.bands[q].moduli) for q in which}
    M = mask.indicator
    for i in bands_in:
        band = frame.bands[i]
        for p in zip(*np.nonzero(keep.arrays[i])):
            g = M * idft_array(band.spectrum(p))
            for q, c in _analyze_subset(frame, dft_array(g), which).items():
                acc[q] += np.abs(c)
    return float(max(a.max() for a in acc.values()))


def _spatial_1d(a):
    """A[r] = sum_xi a(xi) exp(2 pi i xi r / n) for a sampled on centered frequencies."""
    n = a.size
    return np.fft.ifft(np.fft.ifftshift(a)) * n


def _fold_corr(bi, bq, M):
    """C[d] = sum_xi bi(xi) conj(bq(xi)) exp(-2 pi i xi d / M), d in Z/M."""
    n = bi.size
    prod = bi * np.conj(bq)
    nz = np.nonzero(prod)[0]
    G = np.zeros(M, dtype=complex)
    np.add.at(G, freqs(n)[nz] % M, prod[nz])
    return np.fft.fft(G)


def cluster_coherence_separable(cluster, mask, frame):
    """Exact cluster coherence for separable bands (Meyer frames).

    Atoms factor as alpha(x1 - t1) beta(x2 - t2), so each Gram entry is a
    product of a masked x1 correlation and an unmasked x2 correlation, and the
    cluster restricted to a band is a product set.  The column mass of a probe
    band is then a sum of outer products.
    """
    keep = _as_mask(cluster, frame)
    n = frame.n
    cols = mask.columns % n
    bands_in = [i for i, k in enumerate(keep.arrays) if k.any()]
    if not bands_in:
        return 0.0
    for b in frame.bands:
        if not hasattr(b, "sep") or b.sign != -1:
            raise ArgumentError("separable coherence needs a separable frame")
    spatial = {}

    def sp(q):
        if q not in spatial:
            a, b = frame.bands[q].sep
            spatial[q] = _spatial_1d(a)
        return spatial[q]

    best = 0.0
    for q in _overlaps(frame, bands_in):
        bq = frame.bands[q]
        mq1, mq2 = bq.moduli
        Aq = sp(q)
        rq = (cols[None, :] - (np.arange(mq1) * (n // mq1))[:, None]) % n
        Aq_mat = Aq[rq]                                    # (mq1, |cols|)
        total = np.zeros((mq1, mq2))
        for i in bands_in:
            bi = frame.bands[i]
            mi1, mi2 = bi.moduli
            k = keep.arrays[i]
            K1 = np.nonzero(k.any(axis=1))[0]
            K2 = np.nonzero(k.any(axis=0))[0]
            # x1 part: (1/n) sum_{c in cols} A_i(c - t1) conj A_q(c - s1)
            ri = (cols[None, :] - (K1 * (n // mi1))[:, None]) % n
            P1 = (sp(i)[ri] @ np.conj(Aq_mat).T) / n       # (|K1|, mq1)
            U = np.abs(P1).sum(axis=0) / math.sqrt(mi1 * mq1)
            # x2 part depends on t2 - s2 only
            Mx = max(mi2, mq2)
            C = _fold_corr(bi.sep[1], bq.sep[1], Mx)
            d = (K2[:, None] * (Mx // mi2) - (np.arange(mq2) * (Mx // mq2))[None, :]) % Mx
            V = np.abs(C[d]).sum(axis=0) / math.sqrt(mi2 * mq2)
            total += np.outer(U, V)
        best = max(best, float(total.max()))
    return best


def cluster_coherence(cluster, mask, frame, method="auto"):
    """mu_c(cluster, P_M Phi; Phi), exact; separable fast path for Meyer frames."""
    if method == "auto":
        method = "separable" if all(hasattr(b, "sep") for b in frame.bands) else "brute"
    if method == "separable":
        return cluster_coherence_separable(cluster, mask, frame)
    if method == "brute":
        return cluster_coherence_bruteforce(cluster, mask, frame)
    raise ArgumentError(f"unknown method {method!r}")


def concentration_estimate(cluster, mask, frame, n_probes=16, seed=0):
    """Randomized lower bound on the concentration of the cluster on the masked space.

    Probes are white noise restricted to the mask; zero probes are redrawn.
    """
    if n_probes < 1:
        raise ArgumentError("need at least one probe")
    keep = _as_mask(cluster, frame)
    rng = np.random.default_rng(seed)
    M = mask.indicator
    best = 0.0
    done = 0
    while done < n_probes:
        f = M * rng.standard_normal(M.shape)
        if not np.any(f):
            continue
        c = frame.analysis(f)
        tot = c.l1()
        if tot == 0:
            continue
        inside = sum(np.sum(np.abs(a[k])) for a, k in zip(c.arrays, keep.arrays))
        best = max(best, float(inside / tot))
        done += 1
    return best


@dataclass(frozen=True)
class BoundReport:
    delta: float
    mu_c: float
    kappa_hat: float
    eps_noise: float
    bound_l1: float
    bound_thresh: float

    @property
    def valid(self):
        return self.mu_c < 0.5


def error_bounds(delta, mu_c, eps_noise=0.0, frame_norm_c=1.0, masked_mass=0.0,
                 kappa_hat=float("nan")):
    """Right-hand sides of the l1 and thresholding error estimates."""
    if delta < 0 or mu_c < 0:
        raise ArgumentError("delta and mu_c must be non-negative")
    if mu_c >= 0.5:
        b1 = math.inf
    else:
        b1 = (2 * delta + (3 + 2 * mu_c) * eps_noise) / (1 - 2 * mu_c)
    b2 = frame_norm_c * (masked_mass + delta + eps_noise)
    return BoundReport(float(delta), float(mu_c), float(kappa_hat), float(eps_noise), b1, b2)


def frame_norm_constant(frame):
    """Largest atom norm in the frame."""
    return float(max(np.sqrt(np.sum(np.abs(b.win) ** 2)) for b in frame.bands))


def masked_cluster_mass(cluster, mask, x0, frame):
    keep = _as_mask(cluster, frame)
    c = frame.analysis(mask.indicator * values_of(x0))
    return float(sum(np.sum(np.abs(a[k])) for a, k in zip(c.arrays, keep.arrays)))


def line_cluster(frame, j, h, k0):
    """Atoms (iota, 2j) with k2 = 0 and |k1| <= 2^2j h - k0: the ones well inside the gap."""
    lim = 2.0 ** (2 * j) * h - k0
    arrays = []
    for b in frame.bands:
        m1, m2 = b.moduli
        out = np.zeros((m1, m2), dtype=bool)
        if len(b.key) == 2 and b.key[0] in ("h", "v", "d") and b.key[1] == 2 * j and lim >= 0:
            k1 = np.abs(_centered(np.arange(m1) / m1)) * 2.0 ** (2 * j)
            out[k1 <= lim + _TOL, 0] = True
        arrays.append(out)
    return Coeffs(frame, arrays)


@lru_cache(maxsize=None)
def scaling_k0(threshold=0.5):
    """Smallest integer K with |int_{|x|<K} phi| >= threshold |int phi| for the Meyer scaling function."""
    total = 1.0   # int phi = phi^(0)

    def mass(K):
        # int_{-K}^{K} phi = int phi^(xi) sin(2 pi K xi) / (pi xi) dxi
        f = lambda x: meyer_phi_hat(x) * (2 * K if x == 0 else math.sin(2 * math.pi * K * x) / (math.pi * x))
        v, _ = integrate.quad(f, -0.125, 0.125, points=[-1 / 16, 0, 1 / 16], limit=400)
        return v

    K = 1
    while abs(mass(K)) < threshold * total:
        K += 1
    return K


# --- profiles ------------------------------------------------------------------

def decay_profile(coeffs, key, axis="k2", offset=0):
    """max |coefficient| of one band along a lattice axis.

    axis "k1": profile over p1 at p2 = offset; "k2": over p2 at p1 = offset.
    Returned as (signed lattice index, value) sorted by index.
    """
    a = np.abs(coeffs[key])
    m1, m2 = a.shape
    if axis == "k1":
        v, m = a[:, offset % m2], m1
    elif axis == "k2":
        v, m = a[offset % m1, :], m2
    else:
        raise ArgumentError(f"axis must be k1 or k2 (use shear_profile for shears), got {axis!r}")
    k = np.arange(m)
    k = np.where(k >= m - m // 2, k - m, k)
    order = np.argsort(k)
    return k[order], v[order]


def shear_profile(coeffs, cone, j):
    """max |coefficient| of every shear band (cone, j, l), keyed by l."""
    out = {}
    for key, a in coeffs.items():
        if len(key) == 3 and key[0] == cone and key[1] == j:
            out[key[2]] = float(np.max(np.abs(a)))
    return dict(sorted(out.items()))


def envelope(v):
    """Running maximum from the far end (the monotone envelope of a tail)."""
    return np.maximum.accumulate(np.asarray(v)[::-1])[::-1]


def ridge_coefficients(f, a, s, k1, cone="v"):
    """Continuous shearlet coefficients of atoms centered at (a k1, 0) on the line x2 = 0.

    The portrait samples translations on the lattice x = (S A_a)^-1 k; on the
    row k2 = 0 this is x1 = a k1 for every shear.  Evaluated exactly (no
    rounding to pixels).
    """
    from .shearlet import _cont_window
    v = values_of(f)
    n = v.shape[0]
    row = (dft_array(v) * np.conj(_cont_window(n, a, s, cone))).sum(axis=1)   # sum over xi2
    x1 = a * np.asarray(k1, dtype=float)
    return np.exp(2j * np.pi * np.outer(x1, freqs(n))) @ row


def phase_space_portrait(f, a, grid_t=None, grid_s=None, cone="v"):
    """|continuous shearlet coefficient| over (shear s, lattice position k1) on the line x2 = 0.

    Rows follow grid_s, columns grid_t (integer k1, atom centered at x1 = a k1).
    Default grid_t covers the torus once, default grid_s is 31 shears in [-1.5, 1.5].
    """
    k = default_portrait_grid(a) if grid_t is None else np.asarray(grid_t)
    s = np.linspace(-1.5, 1.5, 31) if grid_s is None else np.asarray(grid_s, dtype=float)
    return np.abs(np.array([ridge_coefficients(f, a, ss, k, cone) for ss in s]))


def default_portrait_grid(a):
    half = int(np.floor(0.5 / a))
    return np.arange(-half, half + (0 if half * a >= 0.5 else 1))


def ridge_gap(masked, full, level=0.5):
    """Width, in samples, of the dip of |masked| / |full| around the middle sample.

    Both profiles are sampled on the same centered lattice (middle entry at
    position 0).  The gap is the run of samples below `level`, with its two
    ends refined by linear interpolation; 0 when the middle sample is above it.
    """
    r = np.abs(np.asarray(masked)) / np.maximum(np.abs(np.asarray(full)), 1e-300)
    n = r.size
    c = n // 2
    if r[c] >= level:
        return 0.0
    lo = c
    while lo > 0 and r[lo - 1] < level:
        lo -= 1
    hi = c
    while hi < n - 1 and r[hi + 1] < level:
        hi += 1
    left = lo - 1 + (r[lo - 1] - level) / (r[lo - 1] - r[lo]) if lo > 0 else 0.0
    right = hi + (r[hi] - level) / (r[hi] - r[hi + 1]) if hi < n - 1 else n - 1.0
    return float(right - left)
