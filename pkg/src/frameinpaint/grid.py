"""Periodic N x N grids on the unit torus, the DFT convention, and file formats.

Sample (m1, m2) sits at the point (m1/n, m2/n).  Spectra are stored centered:
entry (a, b) holds the integer frequency (a - n/2, b - n/2).  With

    S = fftshift(fft2(g)) / n^2,    ||g||^2 = (1/n^2) sum |g|^2 = sum |S|^2

so the discrete pair mimics the unitary continuum transform on the torus.
"""
from dataclasses import dataclass, field
import struct

import numpy as np

from .errors import FormatError, SizeError

MAGIC = b"G2D1"


def is_pow2(n):
    return isinstance(n, (int, np.integer)) and n > 0 and (n & (n - 1)) == 0


def check_size(n, minimum=16):
    if not is_pow2(n) or n < minimum:
        raise SizeError(f"grid side must be a power of two >= {minimum}, got {n}")
    return int(n)


@dataclass(frozen=True)
class Grid2D:
    values: np.ndarray
    n: int = field(init=False)

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise SizeError(f"expected a square array, got shape {v.shape}")
        check_size(v.shape[0])
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "n", v.shape[0])

    @property
    def is_complex(self):
        return np.iscomplexobj(self.values)

    def norm(self):
        return norm(self.values)


@dataclass(frozen=True)
class Spectrum2D:
    values: np.ndarray
    tag: object = None
    n: int = field(init=False)

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise SizeError(f"expected a square array, got shape {v.shape}")
        check_size(v.shape[0])
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "n", v.shape[0])

    def norm(self):
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2)))


def values_of(x):
    """Raw sample array of a Grid2D / Spectrum2D / ndarray."""
    return x.values if isinstance(x, (Grid2D, Spectrum2D)) else np.asarray(x)


def norm(g):
    v = values_of(g)
    return float(np.sqrt(np.sum(np.abs(v) ** 2)) / v.shape[0])


def freqs(n):
    """Centered integer frequencies -n/2 .. n/2-1."""
    return np.arange(-(n // 2), n - n // 2)


def freq_mesh(n):
    f = freqs(n).astype(float)
    return np.meshgrid(f, f, indexing="ij")


def points(n):
    """Sample coordinates in [-1/2, 1/2): index m maps to the point m/n mod 1."""
    m = np.arange(n)
    return np.where(m < n // 2, m, m - n) / n


def dft_array(g):
    v = np.asarray(g)
    n = v.shape[0]
    return np.fft.fftshift(np.fft.fft2(v)) / (n * n)


def idft_array(S):
    v = np.asarray(S)
    n = v.shape[0]
    return np.fft.ifft2(np.fft.ifftshift(v)) * (n * n)


def dft(g, tag=None):
    v = values_of(g)
    if v.ndim != 2 or v.shape[0] != v.shape[1]:
        raise SizeError(f"expected a square array, got shape {v.shape}")
    check_size(v.shape[0])
    return Spectrum2D(dft_array(v), tag=tag)


def idft(S, real=False):
    v = values_of(S)
    if v.ndim != 2 or v.shape[0] != v.shape[1]:
        raise SizeError(f"expected a square array, got shape {v.shape}")
    check_size(v.shape[0])
    g = idft_array(v)
    return Grid2D(g.real.copy() if real else g)


def hermitian_part(S):
    """Project a centered spectrum onto spectra of real grids."""
    S = np.asarray(S)
    n = S.shape[0]
    # index of -xi in the centered layout: (n - a) mod n
    idx = (-np.arange(n)) % n
    mirror = np.conj(S[np.ix_(idx, idx)])
    return 0.5 * (S + mirror)


# --- binary grid files ------------------------------------------------------

def write_grid(g, path):
    v = values_of(g)
    n = v.shape[0]
    check_size(n)
    cplx = np.iscomplexobj(v)
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<IB", n, 1 if cplx else 0))
        if cplx:
            out = np.empty((n, n, 2), dtype="<f8")
            out[..., 0] = v.real
            out[..., 1] = v.imag
        else:
            out = np.ascontiguousarray(v, dtype="<f8")
        fh.write(out.tobytes())


def parse_grid(buf, offset=0):
    """Parse one grid record from bytes; returns (array, next_offset)."""
    if len(buf) < offset + 9:
        raise FormatError("truncated header", len(buf))
    if buf[offset:offset + 4] != MAGIC:
        raise FormatError("bad magic", offset)
    n, flag = struct.unpack_from("<IB", buf, offset + 4)
    if flag not in (0, 1):
        raise FormatError(f"bad type flag {flag}", offset + 8)
    if not is_pow2(n):
        raise FormatError(f"bad side length {n}", offset + 4)
    start = offset + 9
    count = n * n * (2 if flag else 1)
    end = start + 8 * count
    if len(buf) < end:
        raise FormatError(f"truncated data: need {end} bytes, have {len(buf)}", len(buf))
    data = np.frombuffer(buf, dtype="<f8", count=count, offset=start)
    if flag:
        data = data.reshape(n, n, 2)
        arr = data[..., 0] + 1j * data[..., 1]
    else:
        arr = data.reshape(n, n).astype(float)
    return arr, end


def read_grid(path):
    with open(path, "rb") as fh:
        buf = fh.read()
    arr, end = parse_grid(buf)
    if end != len(buf):
        raise FormatError("trailing bytes after grid data", end)
    return Grid2D(arr)


# --- PGM --------------------------------------------------------------------

def to_bytes8(v, lo=None, hi=None):
    v = np.asarray(v, dtype=float)
    lo = float(v.min()) if lo is None else float(lo)
    hi = float(v.max()) if hi is None else float(hi)
    if hi <= lo:
        return np.full(v.shape, 128 if lo == hi else 0, dtype=np.uint8)
    t = np.clip((v - lo) / (hi - lo), 0.0, 1.0)
    return np.rint(255 * t).astype(np.uint8)


def export_pgm(g, path, range=None):
    """Binary P5 PGM; rows of the image are the first array axis."""
    v = values_of(g)
    if np.iscomplexobj(v):
        raise TypeError("PGM export needs a real-valued grid")
    lo, hi = (None, None) if range is None else range
    img = to_bytes8(v, lo, hi)
    h, w = img.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(img.tobytes())


def read_pgm(path):
    """Minimal P5 reader (maxval < 256); returns a float array in [0, 1]."""
    with open(path, "rb") as fh:
        buf = fh.read()
    tokens, pos = [], 0
    while len(tokens) < 4:
        while pos < len(buf) and buf[pos:pos + 1].isspace():
            pos += 1
        if pos < len(buf) and buf[pos:pos + 1] == b"#":
            while pos < len(buf) and buf[pos:pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(buf) and not buf[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise FormatError("truncated PGM header", pos)
        tokens.append(buf[start:pos])
    if tokens[0] != b"P5":
        raise FormatError("not a binary PGM", 0)
    w, h, maxval = (int(t) for t in tokens[1:])
    if maxval >= 256:
        raise FormatError("16-bit PGM not supported", pos)
    pos += 1
    if len(buf) < pos + w * h:
        raise FormatError("truncated PGM data", len(buf))
    img = np.frombuffer(buf, dtype=np.uint8, count=w * h, offset=pos).reshape(h, w)
    return img.astype(float) / maxval
