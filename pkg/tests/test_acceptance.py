"""Acceptance criteria, one test per criterion.

Each test records PASS/FAIL with the measured numbers (printed in the terminal
summary) and then asserts, so an unmet criterion shows up as a failing test.
"""
import math
import time
from pathlib import Path

import numpy as np
import pytest

from conftest import bandlimited
from frameinpaint.demo import demo_frames
from frameinpaint.diagnostics import (cluster_coherence, cluster_set, clustered_sparsity_delta,
                                      concentration_estimate, default_portrait_grid,
                                      masked_cluster_mass, phase_space_portrait,
                                      ridge_coefficients, ridge_gap, shear_profile)
from frameinpaint.grid import freqs, idft_array, norm
from frameinpaint.meyer import MeyerFrame, meyer_phi_hat, wavelet_atom_spectrum
from frameinpaint.model import (LineModelSpec, apply_known, filtered_line_image,
                                mask_spectrum_check, strip_mask)
from frameinpaint.recovery import l1_inpaint
from frameinpaint.shearlet import ShearletFrame, scaling_2d, shearlet_atom_spectrum
from frameinpaint.config import SweepConfig, load_sweep_config
from frameinpaint.sweep import experiment_frame, run_cell, run_sweep

SPEC = LineModelSpec()
ROOT = Path(__file__).resolve().parents[1]
JS = (3, 4, 5)


def _slope(x, y):
    x, y = np.log(np.asarray(x, float)), np.log(np.asarray(y, float))
    if np.ptp(x) == 0:
        return float("nan")
    return float(np.polyfit(x, y, 1)[0])


def _fmt(v):
    return "[" + ", ".join(f"{t:.4g}" for t in v) + "]"


# --- shared sweep cells -----------------------------------------------------------

@pytest.fixture(scope="module")
def wavelet_regime():
    cfg = SweepConfig(frames=["meyer"], h_law="2^-2j", h_c=0.25)
    return {(a, j): run_cell(cfg, "meyer", a, j)[0] for a in ("one_step", "l1") for j in JS}


@pytest.fixture(scope="module")
def shearlet_regime():
    cfg = SweepConfig(h_law="2^-j", h_c=0.125)
    out = {}
    for j in JS:
        for a in ("one_step", "l1"):
            out[("shearlet", a, j)] = run_cell(cfg, "shearlet", a, j)[0]
        out[("meyer", "one_step", j)] = run_cell(cfg, "meyer", "one_step", j)[0]
    return out


# --- 1: tightness -------------------------------------------------------------------

def test_criterion_01_tightness(report):
    t0 = time.perf_counter()
    worst_norm = worst_rt = 0.0
    for n in (64, 256):
        rng = np.random.default_rng(n)
        frames = demo_frames(n)
        for _ in range(100):
            f = bandlimited(n, rng, frac=0.5)
            for fr in frames.values():
                c = fr.analysis(f)
                worst_norm = max(worst_norm, abs(math.sqrt(c.energy()) / norm(f) - 1))
                worst_rt = max(worst_rt, norm(fr.synthesis(c, real=True) - f) / norm(f))
    secs = time.perf_counter() - t0
    ok = worst_norm <= 1e-8 and worst_rt <= 1e-8 and secs < 60
    report(1, ok, f"max |ratio-1| {worst_norm:.2e}, max round trip {worst_rt:.2e}, {secs:.1f}s")
    assert ok


# --- 2: partition of unity ----------------------------------------------------------

def test_criterion_02_partition(report):
    n = 256
    errs = {}
    for name, fr in (("meyer", MeyerFrame(n, 2, 9)), ("shearlet", ShearletFrame(n, 0, 4))):
        errs[name] = float(np.max(np.abs(fr.partition()[fr.covered()] - 1)))
    for name, fr in demo_frames(n).items():
        errs[name + "-full"] = float(np.max(np.abs(fr.partition() - 1)))
    ok = max(errs.values()) <= 1e-10
    report(2, ok, ", ".join(f"{k} {v:.1e}" for k, v in errs.items()))
    assert ok


# --- 3: fast analysis vs brute force inner products --------------------------------

def _closed_form_window(frame, band):
    """(spectrum builder k -> centered spectrum) straight from the atom formulas."""
    n = frame.n
    key = band.key
    if key[0] == "coarse":
        J = key[1]
        f = freqs(n).astype(float)
        x1, x2 = np.meshgrid(f, f, indexing="ij")
        if isinstance(frame, MeyerFrame):
            s = 2.0 ** J
            w = meyer_phi_hat(x1 / s) * meyer_phi_hat(x2 / s) / s
        else:
            s = 4.0 ** J
            w = scaling_2d(x1 / s, x2 / s) / s
        return lambda k: w * np.exp(-2j * np.pi * (k[0] * x1 + k[1] * x2) / s)
    if isinstance(frame, MeyerFrame):
        return lambda k: wavelet_atom_spectrum(key[0], key[1], n, k, frame.phase)
    return lambda k: shearlet_atom_spectrum(key[0], key[1], key[2], n, k, frame.seam_phase)


def _brute_force_max_error(frame, f):
    fast = frame.analysis(f)
    worst = 0.0
    for b in frame.bands:
        build = _closed_form_window(frame, b)
        m1, m2 = b.moduli
        ks = [(k1, k2) for k1 in range(m1) for k2 in range(m2)]
        specs = np.array([build(k) for k in ks])
        atoms = np.stack([idft_array(s) for s in specs])
        direct = np.einsum("xy,kxy->k", f, np.conj(atoms)) / frame.n ** 2
        got = np.array([fast[b.key][b.k_to_p(k)] for k in ks])
        worst = max(worst, float(np.max(np.abs(got - direct))))
    return worst


def test_criterion_03_oracle(report):
    t0 = time.perf_counter()
    worst = {}
    for n in (32, 64):
        rng = np.random.default_rng(n)
        f = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        for name, fr in (("meyer", MeyerFrame(n, 2, 5)),
                         ("shearlet", ShearletFrame(n, 0, 2)),
                         ("shearlet-full-seam", ShearletFrame(n, 0, 2, seam_phase="full"))):
            worst[f"{name}@{n}"] = _brute_force_max_error(fr, f)
    secs = time.perf_counter() - t0
    ok = max(worst.values()) <= 1e-10 and secs < 120
    report(3, ok, ", ".join(f"{k} {v:.1e}" for k, v in worst.items()) + f", {secs:.1f}s")
    assert ok


# --- 4: mask spectrum identity ----------------------------------------------------

def test_criterion_04_mask_spectrum(report):
    res = [mask_spectrum_check(h, 256, seed=i) for i, h in enumerate((0.0, 0.01, 0.05, 0.12, 0.3))]
    ok = max(res) < 1e-10
    report(4, ok, f"max residual {max(res):.2e} over 5 widths at n=256")
    assert ok


# --- 5: norm growth -----------------------------------------------------------------

def test_criterion_05_norm_growth(report):
    nrm = {j: norm(filtered_line_image(SPEC, j)) for j in (3, 4, 5)}
    ratios = [nrm[4] / nrm[3], nrm[5] / nrm[4]]
    ok = all(1.7 <= r <= 2.3 for r in ratios)
    report(5, ok, f"ratios j=3->4, 4->5: {_fmt(ratios)}")
    assert ok


# --- 6, 7: positive regimes ---------------------------------------------------------

def _decreasing_below(errs, cap=0.25):
    return all(b < a for a, b in zip(errs, errs[1:])) and errs[-1] < cap


def test_criterion_06_wavelet_regime(report, wavelet_regime):
    one = [wavelet_regime[("one_step", j)].relative_error for j in JS]
    l1 = [wavelet_regime[("l1", j)].relative_error for j in JS]
    conv = [wavelet_regime[("l1", j)].converged for j in JS]
    ok = _decreasing_below(one) and _decreasing_below(l1)
    report(6, ok, f"meyer h=2^-2j/4: one_step {_fmt(one)}, l1 {_fmt(l1)} (converged {conv})")
    assert ok


def test_criterion_07_shearlet_regime(report, shearlet_regime):
    one = [shearlet_regime[("shearlet", "one_step", j)].relative_error for j in JS]
    l1 = [shearlet_regime[("shearlet", "l1", j)].relative_error for j in JS]
    ok = _decreasing_below(one) and _decreasing_below(l1)
    report(7, ok, f"shearlet h=2^-j/8: one_step {_fmt(one)}, l1 {_fmt(l1)}")
    assert ok


# --- 8: separation ------------------------------------------------------------------

def test_criterion_08_separation(report, shearlet_regime):
    wav = [shearlet_regime[("meyer", "one_step", j)].relative_error for j in JS]
    she = [shearlet_regime[("shearlet", "one_step", j)].relative_error for j in JS]
    ratio = wav[-1] / she[-1]
    flat = all(b >= 0.9 * a for a, b in zip(wav, wav[1:]))
    mass, scale = [], []
    for j in JS:
        fr = experiment_frame("meyer", j)
        h = 2.0 ** -j / 8
        mass.append(masked_cluster_mass(cluster_set("meyer", j), strip_mask(h, fr.n),
                                        filtered_line_image(SPEC, j).values, fr))
        scale.append(4.0 ** j * h)
    slope = _slope(scale, mass)
    ok = ratio >= 2 and flat and abs(slope - 1) <= 0.3
    report(8, ok, f"wavelet/shearlet at j=5 {ratio:.3g} (need >= 2), wavelet errors {_fmt(wav)} "
                  f"non-decreasing: {flat}, mass {_fmt(mass)} slope {slope:.3f}")
    assert ok


# --- 9: coherence machinery -----------------------------------------------------------

def _instances(rng, count):
    for _ in range(count):
        kind = str(rng.choice(["meyer", "shearlet"]))
        j = int(rng.integers(2, 4))
        yield kind, j, float(rng.uniform(0, 2.0 ** -j / 2)), float(rng.uniform(0.02, 0.24))


def test_criterion_09_coherence_machinery(report):
    rng = np.random.default_rng(2024)
    gaps = []
    for kind, j, h, eps in _instances(rng, 50):
        fr = experiment_frame(kind, j)
        cl = cluster_set(kind, j, eps)
        m = strip_mask(h, fr.n)
        mu = cluster_coherence(cl, m, fr)
        kap = concentration_estimate(cl, m, fr, 8, int(rng.integers(1 << 30)))
        gaps.append(kap - mu)
    kappa_ok = max(gaps) <= 1e-9

    tol = 1e-6
    rows = []
    while len(rows) < 20:
        j = int(rng.integers(2, 4))
        fr = experiment_frame("shearlet", j)
        h = float(rng.uniform(0, 2.0 ** -j / 4))
        eps = float(rng.uniform(0.05, 0.24))
        cl = cluster_set("shearlet", j, eps)
        m = strip_mask(h, fr.n)
        mu = cluster_coherence(cl, m, fr)
        if mu >= 0.4:
            continue
        x0 = filtered_line_image(SPEC, j).values
        delta = clustered_sparsity_delta(fr.analysis(x0), cl)
        sol = l1_inpaint(apply_known(x0, m), m, fr, max_iter=300, tol=tol,
                         step=1e-3 * float(np.abs(x0).max()), trace=False)
        rows.append((norm(sol.x_star - x0), 2 * delta / (1 - 2 * mu) + 10 * tol))
    bound_ok = all(e <= b for e, b in rows)
    tight = max(e / b for e, b in rows)
    ok = kappa_ok and bound_ok
    report(9, ok, f"max(kappa-mu) {max(gaps):.3g} over 50; l1 error/bound max {tight:.3g} over 20")
    assert ok


# --- 10: coherence trend ---------------------------------------------------------------

def test_criterion_10_coherence_trend(report, wavelet_regime):
    mu = [wavelet_regime[("one_step", j)].mu_c for j in JS]
    x = [math.sqrt(4.0 ** j * wavelet_regime[("one_step", j)].h_j) for j in JS]
    decreasing = all(b < a for a, b in zip(mu, mu[1:]))
    slope = _slope(x, mu)
    ok = decreasing and abs(slope - 1) <= 0.3
    report(10, ok, f"meyer mu_c {_fmt(mu)} vs (2^2j h)^1/2 {_fmt(x)}: slope {slope:.3g}")
    assert ok


# --- 11: decay and phase space --------------------------------------------------------

def test_criterion_11_decay_and_portrait(report):
    tops = {}
    for j in (3, 4):
        fr = experiment_frame("shearlet", j)
        c = fr.analysis(filtered_line_image(SPEC, j).values)
        key = max(((b.key, np.max(np.abs(a))) for b, a in zip(fr.bands, c.arrays)
                   if b.key[0] != "coarse"), key=lambda t: t[1])[0]
        prof = shear_profile(c, "v", j)
        tops[j] = (key, max(prof, key=prof.get))
    argmax_ok = all(tops[j] == (("v", j, 0), 0) for j in tops)

    a3 = 2.0 ** -3
    k = default_portrait_grid(a3)
    s = np.linspace(-1.5, 1.5, 31)
    P = phase_space_portrait(filtered_line_image(SPEC, 3).values, a3, k, s)
    on = np.abs(k * a3) < SPEC.rho / 2
    ridge_ok = bool(np.all(s[np.argmax(P[:, on], axis=0)] == 0))

    j = 5
    a = 2.0 ** -j
    x0 = filtered_line_image(SPEC, j).values
    k = default_portrait_grid(a)
    full = ridge_coefficients(x0, a, 0.0, k)
    gaps = {}
    for h in (0.1, 0.15):
        masked = ridge_coefficients(apply_known(x0, strip_mask(h, x0.shape[0])), a, 0.0, k)
        gaps[h] = (ridge_gap(masked, full), 2 * h / a)
    gap_ok = all(abs(g - w) <= 2 for g, w in gaps.values())
    ok = argmax_ok and ridge_ok and gap_ok
    report(11, ok, f"argmax {tops}, ridge at s=0: {ridge_ok}, gaps (measured, 2h/a) "
                   + ", ".join(f"h={h}: {g:.2f} vs {w:.1f}" for h, (g, w) in gaps.items()))
    assert ok


# --- 12: determinism --------------------------------------------------------------------

def test_criterion_12_determinism(report, tmp_path):
    cfg = load_sweep_config(ROOT / "configs" / "quick.cfg")
    a, _ = run_sweep(cfg, tmp_path / "a")
    experiment_frame.cache_clear()
    b, _ = run_sweep(cfg, tmp_path / "b")
    same = a.read_bytes() == b.read_bytes()
    report(12, same, f"two runs of configs/quick.cfg: {'identical' if same else 'differ'} "
                     f"({len(a.read_bytes())} bytes)")
    assert same
