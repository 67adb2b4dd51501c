"""Recovery from the known region: one-step hard thresholding, analysis-l1
inpainting (primal-dual), and the iterative thresholding scheme."""
from dataclasses import dataclass, field

import numpy as np

from .bands import Coeffs
from .errors import ArgumentError
from .grid import norm, values_of


@dataclass
class ThresholdOutcome:
    kept: Coeffs          # boolean masks per band
    x_star: np.ndarray
    beta: float

    @property
    def size(self):
        return int(sum(k.sum() for k in self.kept.arrays))


@dataclass
class L1Solution:
    x_star: np.ndarray
    iterations: int
    converged: bool
    primal_residual: float
    objective_trace: list = field(default_factory=list)
    change_trace: list = field(default_factory=list)


def quantile_threshold(coeffs, q=0.90):
    """q-quantile of the nonzero coefficient magnitudes (linear interpolation between order
    statistics, so the median of an even count is the midpoint and q -> 1 gives the max)."""
    if not 0 < q < 1:
        raise ArgumentError(f"quantile must lie in (0, 1), got {q}")
    mags = np.abs(coeffs.flat() if isinstance(coeffs, Coeffs) else np.asarray(coeffs).ravel())
    mags = mags[mags > 0]
    if mags.size == 0:
        return 0.0
    return float(np.quantile(mags, q, method="linear"))


def cluster_threshold(coeffs, keep):
    """Largest beta whose threshold set still contains the cluster: min |c_i| over i in keep."""
    vals = [np.abs(a[k]) for a, k in zip(coeffs.arrays, keep.arrays) if k.any()]
    if not vals:
        raise ArgumentError("empty cluster")
    return float(min(v.min() for v in vals))


def one_step_threshold(x_tilde, frame, beta=None, keep=None):
    """Keep coefficients with |<x~, phi_i>| >= beta (or an explicit index set) and synthesize once."""
    c = frame.analysis(values_of(x_tilde))
    if keep is None:
        if beta is None or beta < 0:
            raise ArgumentError(f"threshold must be >= 0, got {beta}")
        keep = c.map(lambda a: np.abs(a) >= beta)
    elif not isinstance(keep, Coeffs):
        keep = Coeffs(frame, list(keep))
    x = frame.synthesis(c.masked(keep)).real
    return ThresholdOutcome(keep, x, float(beta) if beta is not None else float("nan"))


def relative_error(x, x0):
    r = norm(x0)
    if r == 0:
        raise ArgumentError("reference has zero norm")
    return norm(values_of(x) - values_of(x0)) / r


def _clip_unit(y):
    a = np.abs(y)
    return np.where(a > 1, y / np.maximum(a, 1e-300), y)


def l1_inpaint(f_known, mask, frame, max_iter=500, tol=1e-6, noise_eps=0.0, trace=True,
               step=None):
    """min ||Phi* x||_1  subject to  P_K x = f_known.

    Primal-dual iteration with tau * sigma < 1 (||Phi*|| = 1 for a Parseval frame):
        x+   = Proj(x - tau Phi y)              known samples overwritten
        y    = clip(y + sigma Phi*(2 x+ - x))   onto the unit l_inf ball
    tau defaults to the data scale max |f_known| so both variables move at their
    natural size.  Stops when the relative change of x and of y both drop below
    tol.  noise_eps does not change the program (equality with the noisy data);
    it is only carried along for the error bounds.
    """
    fk = np.asarray(values_of(f_known), dtype=float)
    known = mask.indicator == 0
    x = np.where(known, fk, 0.0)
    tau = float(step) if step is not None else max(float(np.max(np.abs(fk))), 1e-12)
    sigma = 0.99 / tau
    a = frame.analysis(x).arrays                 # Phi* x
    y = [np.zeros_like(t) for t in a]
    obj, chg = [], []
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        xn = x - tau * frame.synthesis(y).real
        xn[known] = fk[known]
        an = frame.analysis(xn).arrays
        dy2 = y2 = 0.0
        for i in range(len(y)):
            yn = _clip_unit(y[i] + sigma * (2 * an[i] - a[i]))
            dy2 += float(np.sum(np.abs(yn - y[i]) ** 2))
            y2 += float(np.sum(np.abs(yn) ** 2))
            y[i] = yn
        d = max(norm(xn - x) / max(norm(xn), 1e-300), np.sqrt(dy2 / max(y2, 1e-300)))
        x, a = xn, an
        if trace:
            obj.append(float(sum(np.sum(np.abs(t)) for t in a)))
        chg.append(d)
        if d < tol:
            converged = True
            break
    res = norm(np.where(known, x - fk, 0.0)) / max(norm(np.where(known, fk, 0.0)), 1e-300)
    return L1Solution(x, it, converged, res, obj, chg)


def beta_schedule(beta_start, beta_end, n_iter, decay="exponential"):
    if beta_start < beta_end or beta_end < 0:
        raise ArgumentError("need beta_start >= beta_end >= 0")
    if n_iter <= 1:
        return np.array([beta_start] * max(n_iter, 0), dtype=float)
    t = np.arange(n_iter) / (n_iter - 1)
    if decay == "linear":
        return beta_start + (beta_end - beta_start) * t
    if decay == "exponential":
        if beta_start == 0:
            return np.zeros(n_iter)
        floor = beta_end if beta_end > 0 else beta_start * 1e-4
        out = beta_start * (floor / beta_start) ** t
        out[-1] = beta_end
        return out
    raise ArgumentError(f"unknown decay {decay!r}")


def iterative_threshold_inpaint(f_known, mask, frame, beta_start, beta_end, n_iter=50,
                                decay="exponential"):
    """x <- f_known + M (Phi S_beta Phi* x) with hard thresholding S_beta and a decreasing beta."""
    fk = np.asarray(values_of(f_known), dtype=float)
    M = mask.indicator
    x = (1 - M) * fk
    for beta in beta_schedule(beta_start, beta_end, n_iter, decay):
        c = frame.analysis(x)
        c = c.map(lambda a: np.where(np.abs(a) >= beta, a, 0))
        x = (1 - M) * fk + M * frame.synthesis(c).real
    return x
