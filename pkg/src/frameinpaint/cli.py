"""Command line entry point: `frameinpaint VERB [options]`."""
import argparse
import math
from pathlib import Path
import sys

import numpy as np

from .config import DemoConfigKeys, load_sweep_config, read_config
from .errors import ConfigError, FormatError, FrameError, ParseError

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3


def _say(msg):
    print(msg, flush=True)


def _frames(n):
    from .meyer import MeyerFrame
    from .shearlet import ShearletFrame
    jw = int(math.log2(n)) + 2
    js = math.ceil(math.log(2 * n, 4))
    return {"meyer": MeyerFrame(n, 2, jw, clip=True), "shearlet": ShearletFrame(n, 1, js, clip=True)}


def cmd_tiling_check(a):
    worst = 0.0
    for name, fr in _frames(a.n).items():
        p = fr.partition()
        err = float(np.max(np.abs(p - 1)))
        worst = max(worst, err)
        _say(f"{name:8s} n={a.n} bands={len(fr.bands)} max|sum - 1| = {err:.3e}")
    return EXIT_OK if worst <= 1e-10 else EXIT_FAIL


def cmd_parseval_check(a):
    rng = np.random.default_rng(a.seed)
    worst = 0.0
    for name, fr in _frames(a.n).items():
        e1 = e2 = 0.0
        for _ in range(a.trials):
            f = rng.standard_normal((a.n, a.n))
            c = fr.analysis(f)
            nf = np.sqrt(np.sum(f ** 2))
            e1 = max(e1, abs(np.sqrt(c.energy() * a.n * a.n) / nf - 1))
            e2 = max(e2, np.sqrt(np.sum(np.abs(fr.synthesis(c) - f) ** 2)) / nf)
        worst = max(worst, e1, e2)
        _say(f"{name:8s} n={a.n} trials={a.trials} norm ratio err {e1:.2e}  round trip {e2:.2e}")
    return EXIT_OK if worst <= 1e-8 else EXIT_FAIL


def cmd_sweep(a):
    over = {}
    if a.seed is not None:
        over["sweep.seed"] = a.seed
    cfg = load_sweep_config(a.config, over)
    out = a.out or cfg.out
    from .sweep import run_sweep
    path, _ = run_sweep(cfg, out, log=_say)
    _say(f"wrote {path}")
    return EXIT_OK


def cmd_plot(a):
    from .plot import plot_sweep
    out = a.svg or str(Path(a.out or ".") / "sweep.svg")
    plot_sweep(a.csv, out)
    _say(f"wrote {out}")
    return EXIT_OK


def _demo_cfg(path):
    from .demo import DemoConfig
    cfg = DemoConfig()
    if not path:
        return cfg
    raw = read_config(path)
    for key, attr in DemoConfigKeys.items():
        if key in raw:
            val, no = raw[key]
            try:
                setattr(cfg, attr, type(getattr(cfg, attr))(val))
            except ValueError as e:
                raise ConfigError(str(e), key=key, line=no) from None
    return cfg


def cmd_demo(a):
    from .demo import line_image, run_demo, seismic_image
    from .grid import export_pgm
    cfg = _demo_cfg(a.config)
    out = Path(a.out or "demo_out")
    bars = []
    for b in a.bar or []:
        try:
            c, w = b.split(":")
            bars.append((float(c), float(w)))
        except ValueError:
            raise ConfigError(f"bar must be CENTER:HALF_WIDTH, got {b!r}", key="--bar") from None
    if a.image:
        image = a.image
    else:
        img = seismic_image(a.n, a.seed or 0) if a.synthetic == "seismic" else line_image(a.n)
        out.mkdir(parents=True, exist_ok=True)
        export_pgm(img, out / "input.pgm", (0, 1))
        image = img
        if not bars:
            n = a.n
            bars = ([(n / 4, 3), (n / 2, 4), (3 * n / 4, 2)] if a.synthetic == "seismic"
                    else [(n / 2, 4)])
    report = run_demo(image, bars, cfg, out)
    for name, p in report:
        _say(f"{name:8s} PSNR (masked region) = {p:.2f} dB")
    return EXIT_OK


def cmd_coherence(a):
    from .diagnostics import (cluster_coherence, cluster_set, clustered_sparsity_delta,
                              concentration_estimate)
    from .model import filtered_line_image, h_law, strip_mask
    from .sweep import experiment_frame
    fr = experiment_frame(a.frame, a.j)
    h = h_law(a.h_law, a.h_c, a.j)
    mask = strip_mask(h, fr.n)
    cl = cluster_set(a.frame, a.j, a.eps)
    mu = cluster_coherence(cl, mask, fr)
    kap = concentration_estimate(cl, mask, fr, a.probes, a.seed or 0)
    delta = clustered_sparsity_delta(fr.analysis(filtered_line_image(_spec(), a.j).values), cl)
    _say(f"frame={a.frame} j={a.j} n={fr.n} h={h:.6g} |cluster|={cl.size(fr)}")
    _say(f"mu_c = {mu:.6g}   kappa_hat = {kap:.6g}   delta = {delta:.6g}")
    return EXIT_OK


def _spec():
    from .model import LineModelSpec
    return LineModelSpec()


def cmd_portrait(a):
    from .diagnostics import phase_space_portrait
    from .grid import export_pgm
    from .model import apply_known, experiment_size, filtered_line_image, strip_mask
    n = experiment_size(a.j)
    x0 = filtered_line_image(_spec(), a.j).values
    if a.h > 0:
        x0 = apply_known(x0, strip_mask(a.h, n))
    scale = a.a if a.a else 2.0 ** -a.j
    img = phase_space_portrait(x0, scale, grid_s=np.linspace(-1.5, 1.5, a.shears))
    out = Path(a.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"portrait_j{a.j}.pgm"
    export_pgm(img / max(img.max(), 1e-300), path, (0, 1))
    _say(f"wrote {path}")
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="frameinpaint", description="Frame-based inpainting experiments.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value config file")
    common.add_argument("--out", help="output directory")
    common.add_argument("--seed", type=int, default=None)
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("tiling-check", parents=[common], help="frequency partition of unity")
    s.add_argument("--n", type=int, default=256)
    s.set_defaults(fn=cmd_tiling_check)

    s = sub.add_parser("parseval-check", parents=[common], help="norm preservation and round trip")
    s.add_argument("--n", type=int, default=64)
    s.add_argument("--trials", type=int, default=10)
    s.set_defaults(fn=cmd_parseval_check)

    s = sub.add_parser("sweep", parents=[common], help="run a scale sweep and write sweep.csv")
    s.set_defaults(fn=cmd_sweep)

    s = sub.add_parser("plot", parents=[common], help="SVG plot of a sweep CSV")
    s.add_argument("csv")
    s.add_argument("--svg", help="output file (default OUT/sweep.svg)")
    s.set_defaults(fn=cmd_plot)

    s = sub.add_parser("demo", parents=[common], help="bar inpainting demo on a PGM image")
    s.add_argument("--image", help="P5 PGM input (square, power-of-two side)")
    s.add_argument("--bar", action="append", help="CENTER:HALF_WIDTH in pixels (repeatable)")
    s.add_argument("--synthetic", choices=("line", "seismic"), default="seismic")
    s.add_argument("--n", type=int, default=256)
    s.set_defaults(fn=cmd_demo)

    s = sub.add_parser("coherence", parents=[common], help="cluster coherence and concentration")
    s.add_argument("--frame", choices=("meyer", "shearlet"), default="shearlet")
    s.add_argument("--j", type=int, default=3)
    s.add_argument("--h-law", default="2^-j")
    s.add_argument("--h-c", type=float, default=0.125)
    s.add_argument("--eps", type=float, default=0.125)
    s.add_argument("--probes", type=int, default=16)
    s.set_defaults(fn=cmd_coherence)

    s = sub.add_parser("portrait", parents=[common], help="phase-space portrait PGM")
    s.add_argument("--j", type=int, default=3)
    s.add_argument("--h", type=float, default=0.0)
    s.add_argument("--a", type=float, default=None, help="continuous scale (default 2^-j)")
    s.add_argument("--shears", type=int, default=31)
    s.set_defaults(fn=cmd_portrait)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, FormatError, ParseError) as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    except FrameError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
