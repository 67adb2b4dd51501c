"""Image inpainting demo: vertical bars removed, refilled by iterative thresholding
with a wavelet and a shearlet frame, PSNR measured inside the bars."""
from dataclasses import dataclass, field
import math
from pathlib import Path

import numpy as np

from .errors import ArgumentError
from .grid import export_pgm, is_pow2, read_pgm
from .meyer import MeyerFrame
from .recovery import iterative_threshold_inpaint
from .shearlet import ShearletFrame


@dataclass
class DemoConfig:
    n_iter: int = 50
    decay: str = "exponential"
    beta_start: float = 1.0     # fractions of the largest analysis coefficient
    beta_end: float = 1e-3
    zoom: int = 64


@dataclass
class BarMask:
    """Columns |c - center| < half_width of an n x n image are missing."""
    n: int
    bars: list = field(default_factory=list)

    @property
    def columns(self):
        c = np.arange(self.n)
        hit = np.zeros(self.n, dtype=bool)
        for center, hw in self.bars:
            if hw < 0:
                raise ArgumentError(f"negative bar width {hw}")
            hit |= np.abs(c - center) < hw
        return np.nonzero(hit)[0]

    @property
    def indicator(self):
        m = np.zeros((self.n, self.n))
        m[:, self.columns] = 1.0
        return m


def demo_frames(n):
    """Frames covering the whole n x n grid."""
    jw = int(math.log2(n)) + 2                      # 2^jw / 8 >= n / 2
    js = math.ceil(math.log(2 * n, 4))              # 4^js / 4 >= n / 2
    return {"wavelet": MeyerFrame(n, 2, jw, clip=True),
            "shearlet": ShearletFrame(n, 1, js, clip=True)}


def psnr(x, ref, region, peak=1.0):
    """PSNR over region (boolean array); +inf when the region is empty or exact."""
    region = np.asarray(region, dtype=bool)
    if not region.any():
        return math.inf
    mse = float(np.mean((np.asarray(x)[region] - np.asarray(ref)[region]) ** 2))
    return math.inf if mse == 0 else 10 * math.log10(peak ** 2 / mse)


def inpaint_image(img, mask, frame, cfg):
    known = (1 - mask.indicator) * img
    if not mask.columns.size:
        return img.copy()
    top = float(np.max(np.abs(frame.analysis(known).flat())))
    return iterative_threshold_inpaint(known, mask, frame, cfg.beta_start * top, cfg.beta_end * top,
                                       cfg.n_iter, cfg.decay)


def run_demo(image, bars, cfg=None, out_dir=".", frames=None):
    """Mask the bars, inpaint with both frames, write PGMs, return [(name, psnr)]."""
    cfg = cfg or DemoConfig()
    img = read_pgm(image) if isinstance(image, (str, Path)) else np.asarray(image, dtype=float)
    n = img.shape[0]
    if img.shape != (n, n) or not is_pow2(n) or n < 16:
        raise ArgumentError(f"demo needs a square power-of-two image, got {img.shape}")
    for c, hw in bars:
        if not 0 <= c < n:
            raise ArgumentError(f"bar center {c} outside the image")
    mask = BarMask(n, list(bars))
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    region = mask.indicator > 0
    export_pgm(img, out / "original.pgm", (0, 1))
    export_pgm((1 - mask.indicator) * img, out / "masked.pgm", (0, 1))
    frames = frames or demo_frames(n)
    report = []
    z = min(cfg.zoom, n)
    c0 = int(bars[0][0]) if bars else n // 2
    lo = min(max(c0 - z // 2, 0), n - z)
    for name, frame in frames.items():
        x = inpaint_image(img, mask, frame, cfg)
        export_pgm(np.clip(x, 0, 1), out / f"{name}.pgm", (0, 1))
        export_pgm(np.clip(x[lo:lo + z, lo:lo + z], 0, 1), out / f"{name}_zoom.pgm", (0, 1))
        report.append((name, psnr(x, img, region)))
    export_pgm(img[lo:lo + z, lo:lo + z], out / "original_zoom.pgm", (0, 1))
    return report


# --- synthetic test images ------------------------------------------------------

def line_image(n, width=1.5):
    """Bright smooth straight line through the image at a shallow angle."""
    y, x = np.mgrid[0:n, 0:n].astype(float)
    d = (y - (0.5 * n + 0.15 * (x - 0.5 * n)))
    return 0.1 + 0.8 * np.exp(-0.5 * (d / width) ** 2)


def seismic_image(n, seed=0):
    """Layered reflectors with Ricker-wavelet profiles and gentle curvature."""
    rng = np.random.default_rng(seed)
    y, x = np.mgrid[0:n, 0:n].astype(float)
    img = np.zeros((n, n))
    for k in range(6):
        y0 = (k + 1) * n / 7
        amp = rng.uniform(0.4, 1.0) * rng.choice([-1, 1])
        curve = y0 + rng.uniform(-0.08, 0.08) * (x - n / 2) + rng.uniform(2, 6) * np.sin(
            2 * np.pi * x / n * rng.uniform(0.5, 1.5))
        t = (y - curve) / 2.0
        img += amp * (1 - 2 * t ** 2) * np.exp(-t ** 2)
    return 0.5 + 0.35 * img / np.max(np.abs(img))
