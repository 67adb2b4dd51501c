"""Scale sweeps over (frame, algorithm, j), one CSV row per cell."""
import csv
from dataclasses import astuple, dataclass, fields
from functools import lru_cache
import io
import math
from pathlib import Path
import time

import numpy as np

from .diagnostics import (cluster_coherence, cluster_set, clustered_sparsity_delta, error_bounds,
                          frame_norm_constant, masked_cluster_mass)
from .errors import FrameError, ParseError
from .meyer import MeyerFrame
from .model import LineModelSpec, apply_known, experiment_size, filtered_line_image, strip_mask
from .recovery import (cluster_threshold, iterative_threshold_inpaint, l1_inpaint,
                       one_step_threshold, relative_error)
from .shearlet import ShearletFrame


@dataclass
class SweepRecord:
    frame: str
    algorithm: str
    j: int
    h_j: float
    relative_error: float
    delta_j: float
    mu_c: float
    bound_l1: float
    bound_thresh: float
    converged: bool
    wall_time: float


COLUMNS = [f.name for f in fields(SweepRecord)]


@lru_cache(maxsize=2)
def experiment_frame(kind, j, phase="printed"):
    """Frame used at scale j on the n = 4^j grid: scales j-1..j+1 around the
    line's corona plus a coarse layer, cut at the grid Nyquist."""
    n = experiment_size(j)
    if kind == "meyer":
        return MeyerFrame(n, 2 * j - 1, 2 * j + 2, clip=True, phase=phase)
    if kind == "shearlet":
        return ShearletFrame(n, j - 1, j + 1, clip=True)
    raise FrameError(f"unknown frame kind {kind!r}")


@lru_cache(maxsize=64)
def _coherence(kind, j, h, eps, rho, phase):
    frame = experiment_frame(kind, j, phase)
    return cluster_coherence(cluster_set(kind, j, eps, rho), strip_mask(h, frame.n), frame)


@lru_cache(maxsize=8)
def _line(j, rho):
    return filtered_line_image(LineModelSpec(rho), j).values


def _noise(cfg, j, shape, scale):
    if cfg.noise <= 0:
        return np.zeros(shape), 0.0
    rng = np.random.default_rng([cfg.seed, j])
    e = rng.standard_normal(shape)
    e *= cfg.noise * scale / np.sqrt(np.mean(e ** 2))
    return e, float(np.sqrt(np.mean(e ** 2)))


def run_cell(cfg, kind, algorithm, j):
    """Run one sweep cell; returns (SweepRecord, seconds, work units)."""
    t0 = time.perf_counter()
    h = cfg.h(j)
    phase = cfg.meyer_phase
    frame = experiment_frame(kind, j, phase)
    x0 = _line(j, cfg.rho)
    mask = strip_mask(h, frame.n, LineModelSpec(cfg.rho))
    e, eps_noise = _noise(cfg, j, x0.shape, float(np.sqrt(np.mean(x0 ** 2))))
    x_tilde = apply_known(x0 + e, mask)
    cl = cluster_set(kind, j, cfg.eps, cfg.rho)
    keep = cl.mask(frame)
    delta = clustered_sparsity_delta(frame.analysis(x0), keep)
    mu = _coherence(kind, j, h, cfg.eps, cfg.rho, phase)
    mass = masked_cluster_mass(keep, mask, x0, frame)
    rep = error_bounds(delta, mu, eps_noise, frame_norm_constant(frame), mass)
    converged = True
    if algorithm == "one_step":
        beta = cluster_threshold(frame.analysis(x_tilde), keep)
        x = one_step_threshold(x_tilde, frame, beta=beta).x_star
        work = 3
    elif algorithm == "l1":
        scale = float(np.max(np.abs(x_tilde))) or 1.0
        sol = l1_inpaint(x_tilde, mask, frame, max_iter=cfg.l1.max_iter, tol=cfg.l1.tol,
                         noise_eps=eps_noise, step=cfg.l1.step * scale, trace=False)
        x, converged = sol.x_star, sol.converged
        work = 1 + 2 * sol.iterations
    elif algorithm == "iterative":
        top = float(np.max(np.abs(frame.analysis(x_tilde).flat())))
        o = cfg.iterative
        x = iterative_threshold_inpaint(x_tilde, mask, frame, o.beta_start * top, o.beta_end * top,
                                        o.n_iter, o.decay)
        work = 1 + 2 * o.n_iter
    else:
        raise FrameError(f"unknown algorithm {algorithm!r}")
    err = relative_error(x, x0)
    secs = max(time.perf_counter() - t0, 1e-9)
    wall = secs if cfg.timing == "wall" else float(work)
    return SweepRecord(kind, algorithm, j, h, err, delta, mu, rep.bound_l1, rep.bound_thresh,
                       converged, wall), secs, work


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isinf(v):
            return "inf"
        if math.isnan(v):
            return "nan"
        return format(v, ".10g")
    return str(v)


def records_to_csv(records):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in records:
        w.writerow([_fmt(v) for v in astuple(r)])
    return buf.getvalue()


def run_sweep(cfg, out_dir=None, log=None):
    """Run every (frame, algorithm, j) cell in config order and write sweep.csv.

    A failing cell is recorded with converged=false and NaN metrics; the sweep continues.
    Measured seconds always go to timings.csv next to the main table.
    """
    out = Path(out_dir or cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    records, timings = [], []
    for kind in cfg.frames:
        for j in cfg.j:
            for alg in cfg.algorithms:
                try:
                    rec, secs, _ = run_cell(cfg, kind, alg, j)
                except (FrameError, FloatingPointError, np.linalg.LinAlgError) as e:
                    nan = float("nan")
                    rec = SweepRecord(kind, alg, j, cfg.h(j), nan, nan, nan, nan, nan, False, nan)
                    secs = 0.0
                    if log:
                        log(f"cell {kind}/{alg}/j={j} failed: {e}")
                records.append(rec)
                timings.append((kind, alg, j, secs))
                if log:
                    log(f"{kind:8s} {alg:9s} j={j} err={rec.relative_error:.4g} "
                        f"mu_c={rec.mu_c:.4g} ({secs:.1f}s)")
    path = out / "sweep.csv"
    path.write_text(records_to_csv(records), encoding="utf-8")
    with open(out / "timings.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["frame", "algorithm", "j", "seconds"])
        for row in timings:
            w.writerow([row[0], row[1], row[2], f"{row[3]:.3f}"])
    return path, records


def read_sweep_csv(path):
    """Parse a sweep CSV into dict rows (j int, relative_error float)."""
    rows = []
    with open(path, encoding="utf-8", newline="") as fh:
        rd = csv.reader(fh)
        try:
            header = next(rd)
        except StopIteration:
            raise ParseError("empty CSV", line=1) from None
        for col in ("frame", "algorithm", "j", "relative_error"):
            if col not in header:
                raise ParseError(f"missing column {col!r}", line=1)
        for no, row in enumerate(rd, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise ParseError(f"expected {len(header)} fields, got {len(row)}", line=no)
            d = dict(zip(header, row))
            try:
                d["j"] = int(d["j"])
                d["relative_error"] = float(d["relative_error"])
            except ValueError as e:
                raise ParseError(str(e), line=no) from None
            rows.append(d)
    return rows
