import math
import re

import numpy as np
import pytest

from frameinpaint.cli import main
from frameinpaint.config import load_sweep_config, parse_config_text, sweep_config
from frameinpaint.demo import BarMask, psnr, run_demo, seismic_image, line_image
from frameinpaint.errors import ArgumentError, ConfigError, ParseError
from frameinpaint.grid import export_pgm, read_pgm
from frameinpaint.plot import plot_sweep, render_svg
from frameinpaint.sweep import COLUMNS, read_sweep_csv, records_to_csv, run_sweep

SMALL = """# tiny sweep
sweep.frames = meyer, shearlet
sweep.algorithms = one_step, l1, iterative
sweep.j = 2..3
sweep.h_law = 2^-j
sweep.h_c = 0.125
l1.max_iter = 40
iterative.n_iter = 10
"""


# --- config ---------------------------------------------------------------------

def test_parse_config_text():
    raw = parse_config_text("a.b = 1\n\n# c\nx.y=two # tail\n")
    assert raw == {"a.b": ("1", 1), "x.y": ("two", 4)}


@pytest.mark.parametrize("text,key,line", [
    ("sweep.j = 3\nnot a pair\n", None, 2),
    ("sweep.j = 3\nsweep.j = 4\n", "sweep.j", 2),
    ("sweep.frames = meyer\nsweep.bogus = 1\n", "sweep.bogus", 2),
    ("sweep.frames =\n", "sweep.frames", 1),
    ("sweep.frames = wavelets\n", "sweep.frames", 1),
    ("sweep.j = three\n", "sweep.j", 1),
    ("sweep.h_law = const\nsweep.h_c = 0.4\n", "sweep.h_c", 2),
    ("sweep.eps = 0.3\n", "sweep.eps", 1),
    ("l1.max_iter = ten\n", "l1.max_iter", 1),
    ("iterative.decay = cubic\n", "iterative.decay", 1),
])
def test_config_errors_name_key_and_line(text, key, line):
    with pytest.raises(ConfigError) as e:
        sweep_config(parse_config_text(text))
    assert e.value.line == line
    if key:
        assert e.value.key == key and key in str(e.value)


def test_config_defaults_and_overrides(tmp_path):
    p = tmp_path / "c.cfg"
    p.write_text(SMALL)
    cfg = load_sweep_config(p, {"sweep.seed": 7})
    assert cfg.frames == ["meyer", "shearlet"] and cfg.j == [2, 3]
    assert cfg.seed == 7 and cfg.l1.max_iter == 40 and cfg.iterative.n_iter == 10
    assert cfg.h(3) == 0.125 / 8
    assert load_sweep_config().algorithms == ["one_step", "l1"]


# --- sweep ----------------------------------------------------------------------

@pytest.fixture(scope="module")
def small_sweep(tmp_path_factory):
    d = tmp_path_factory.mktemp("sweep")
    p = d / "c.cfg"
    p.write_text(SMALL)
    cfg = load_sweep_config(p)
    path, recs = run_sweep(cfg, d / "a")
    return cfg, d, path, recs


def test_sweep_csv_layout(small_sweep):
    cfg, d, path, recs = small_sweep
    lines = path.read_text().splitlines()
    assert lines[0].split(",") == COLUMNS
    assert len(lines) == 1 + 2 * 2 * 3
    rows = read_sweep_csv(path)
    assert {(r["frame"], r["algorithm"], r["j"]) for r in rows} == {
        (f, a, j) for f in ("meyer", "shearlet") for a in ("one_step", "l1", "iterative") for j in (2, 3)}
    assert all(0 <= r["relative_error"] < 1 for r in rows)
    assert (d / "a" / "timings.csv").exists()


def test_sweep_is_byte_identical(small_sweep):
    cfg, d, path, recs = small_sweep
    path2, _ = run_sweep(cfg, d / "b")
    assert path.read_bytes() == path2.read_bytes()


def test_sweep_work_units(small_sweep):
    cfg, d, path, recs = small_sweep
    one = [r for r in recs if r.algorithm == "one_step"]
    it = [r for r in recs if r.algorithm == "iterative"]
    assert all(r.wall_time == 3 for r in one)
    assert all(r.wall_time == 1 + 2 * cfg.iterative.n_iter for r in it)


def test_records_format_specials():
    from frameinpaint.sweep import SweepRecord
    r = SweepRecord("meyer", "l1", 3, 0.1, float("nan"), 1.0, 0.7, math.inf, 2.0, False, 5.0)
    assert records_to_csv([r]).splitlines()[1] == "meyer,l1,3,0.1,nan,1,0.7,inf,2,false,5"


def test_read_sweep_csv_errors(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text(",".join(COLUMNS) + "\nmeyer,l1,3\n")
    with pytest.raises(ParseError) as e:
        read_sweep_csv(p)
    assert e.value.line == 2
    p.write_text(",".join(COLUMNS) + "\n" + "meyer,l1,x,0.1,0.5,1,1,1,1,true,3\n")
    with pytest.raises(ParseError, match="line 2"):
        read_sweep_csv(p)
    p.write_text("")
    with pytest.raises(ParseError):
        read_sweep_csv(p)


# --- plot -----------------------------------------------------------------------

def test_plot_series_and_ticks(small_sweep, tmp_path):
    cfg, d, path, recs = small_sweep
    out = tmp_path / "s.svg"
    plot_sweep(path, out)
    svg = out.read_text()
    assert svg.startswith("<svg") or svg.startswith("<?xml")
    assert svg.count('<polyline class="series"') == 6
    ticks = [float(v) for v in re.findall(r'class="ylabel"[^>]*data-value="([^"]+)"', svg)]
    assert ticks and all(math.log2(t) == round(math.log2(t)) for t in ticks)


def test_plot_single_row(tmp_path):
    rows = [{"frame": "meyer", "algorithm": "l1", "j": 3, "relative_error": 0.1}]
    svg = render_svg(rows)
    assert svg.count('<polyline class="series"') == 1
    assert svg.rstrip().endswith("</svg>")


# --- demo -----------------------------------------------------------------------

def test_bar_mask_convention():
    m = BarMask(16, [(8, 2)])
    assert m.columns.tolist() == [7, 8, 9]
    assert BarMask(16, [(8, 0)]).columns.size == 0
    with pytest.raises(ArgumentError):
        BarMask(16, [(8, -1)]).columns


def test_psnr_sentinels():
    x = np.zeros((4, 4))
    assert psnr(x, x, np.ones((4, 4), bool)) == math.inf
    assert psnr(x, x + 1, np.zeros((4, 4), bool)) == math.inf
    assert psnr(x, x + 0.1, np.ones((4, 4), bool)) == pytest.approx(20.0)


def test_demo_zero_width_bar_is_identity(tmp_path):
    img = line_image(32)
    rep = run_demo(img, [(16, 0)], out_dir=tmp_path)
    assert [p for _, p in rep] == [math.inf, math.inf]
    assert np.allclose(read_pgm(tmp_path / "shearlet.pgm"), read_pgm(tmp_path / "original.pgm"))


def test_demo_rejects_bad_input(tmp_path):
    with pytest.raises(ArgumentError):
        run_demo(np.zeros((24, 24)), [(3, 1)], out_dir=tmp_path)
    with pytest.raises(ArgumentError):
        run_demo(np.zeros((32, 32)), [(40, 1)], out_dir=tmp_path)


def test_demo_shearlet_beats_wavelet_on_line(tmp_path):
    rep = dict(run_demo(line_image(64), [(32, 3)], out_dir=tmp_path))
    assert rep["shearlet"] >= rep["wavelet"]
    for name in ("original", "masked", "wavelet", "shearlet", "wavelet_zoom", "original_zoom"):
        assert (tmp_path / f"{name}.pgm").exists()


def test_demo_seismic_three_bars(tmp_path):
    n = 128
    p = tmp_path / "in.pgm"
    export_pgm(seismic_image(n), p, (0, 1))
    rep = run_demo(p, [(n / 4, 3), (n / 2, 4), (3 * n / 4, 2)], out_dir=tmp_path / "o")
    assert [name for name, _ in rep] == ["wavelet", "shearlet"]
    d = dict(rep)
    assert d["shearlet"] > d["wavelet"]


# --- CLI ------------------------------------------------------------------------

def test_cli_checks_pass(capsys):
    assert main(["tiling-check", "--n", "64"]) == 0
    assert main(["parseval-check", "--n", "32", "--trials", "2"]) == 0
    assert "max|sum - 1|" in capsys.readouterr().out


def test_cli_config_error_exit_code(tmp_path, capsys):
    p = tmp_path / "bad.cfg"
    p.write_text("sweep.frames = meyer\nsweep.nope = 1\n")
    assert main(["sweep", "--config", str(p)]) == 2
    err = capsys.readouterr().err
    assert "sweep.nope" in err and "line 2" in err


def test_cli_io_error_exit_code(tmp_path):
    assert main(["sweep", "--config", str(tmp_path / "missing.cfg")]) == 3
    bad = tmp_path / "bad.csv"
    bad.write_text("frame,algorithm\n")
    assert main(["plot", str(bad), "--svg", str(tmp_path / "x.svg")]) == 3


def test_cli_sweep_and_plot(tmp_path):
    p = tmp_path / "c.cfg"
    p.write_text("sweep.frames = shearlet\nsweep.algorithms = one_step\nsweep.j = 2\n")
    assert main(["sweep", "--config", str(p), "--out", str(tmp_path / "r")]) == 0
    csv_path = tmp_path / "r" / "sweep.csv"
    assert main(["plot", str(csv_path), "--out", str(tmp_path / "r")]) == 0
    assert (tmp_path / "r" / "sweep.svg").exists()


def test_cli_coherence_and_portrait(tmp_path, capsys):
    assert main(["coherence", "--frame", "shearlet", "--j", "2", "--probes", "2"]) == 0
    assert "mu_c" in capsys.readouterr().out
    assert main(["portrait", "--j", "2", "--h", "0.1", "--shears", "5", "--out", str(tmp_path)]) == 0
    assert read_pgm(tmp_path / "portrait_j2.pgm").shape[0] == 5


def test_cli_demo(tmp_path, capsys):
    assert main(["demo", "--synthetic", "line", "--n", "32", "--out", str(tmp_path)]) == 0
    assert "PSNR" in capsys.readouterr().out
    assert main(["demo", "--synthetic", "line", "--n", "32", "--bar", "oops",
                 "--out", str(tmp_path)]) == 2
