import csv
import io
import json
import math

import numpy as np
import pytest

from pairboost import DomainError, SweepSpec, gamma, parse_axis, pairsim
from pairboost.cli import CONFIG_ENV, build_parser, main, resolve_settings
from pairboost.svg import RAMP, heatmap_svg, ramp_color
from pairboost.sweep import SWEEP_COLUMNS, format_csv, sweep_rows


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestReport:
    def test_identity_boost(self, capsys):
        code, out, _ = run(
            capsys, "report", "--phi", "0.7853981633974483", "--theta", "0", "--beta", "0",
            "--beta-v", "0.6", "--alpha", "0.5", "--format", "json",
        )
        assert code == 0
        d = json.loads(out)
        assert d["e4_lab"] == pytest.approx(1.0, abs=1e-12)
        assert d["e4_boosted"] == pytest.approx(1.0, abs=1e-12)
        assert d["cos_omega"] == 1.0
        assert d["coherence_minus"] == d["coherence_plus"] == 0.0
        assert d["invariant_value"] == pytest.approx(1.0, abs=1e-12)

    def test_phi_zero(self, capsys):
        code, out, _ = run(capsys, "report", "--phi", "0", "--beta", "0.5", "--beta-v", "0.6", "--alpha", "1", "--format", "json")
        d = json.loads(out)
        assert code == 0
        assert d["e4_lab"] == d["e8"] == d["invariant_value"] == 0.0

    @pytest.mark.parametrize("phi", ["0.1", "0.9", "1.5"])
    def test_invariant_field(self, capsys, phi):
        _, out, _ = run(capsys, "report", "--phi", phi, "--beta", "0.9", "--beta-v", "0.3", "--alpha", "2.5", "--format", "json")
        assert json.loads(out)["invariant_value"] == pytest.approx(math.sin(2 * float(phi)), abs=1e-10)

    def test_text_lists_deviations(self, capsys):
        code, out, _ = run(capsys, "report", "--phi", "0.4", "--beta", "0.8", "--beta-v", "0.6", "--alpha", "1")
        assert code == 0
        assert "max_deviation" in out and "entropy_other" in out

    def test_bad_flag_exit_1(self, capsys):
        code, _, err = run(capsys, "report", "--nope")
        assert code == 1 and "unrecognized" in err

    def test_missing_value_exit_1(self, capsys):
        code, _, err = run(capsys, "report", "--phi", "0.3")
        assert code == 1 and "--beta" in err

    def test_out_of_domain_exit_1(self, capsys):
        code, _, _ = run(capsys, "report", "--phi", "0.3", "--beta", "1.2", "--beta-v", "0.6", "--alpha", "1")
        assert code == 1

    def test_numerical_failure_exit_2(self, capsys, monkeypatch):
        monkeypatch.setattr(pairsim, "REPORT_TOL", -1.0)
        code, out, err = run(capsys, "report", "--phi", "0.3", "--beta", "0.5", "--beta-v", "0.6", "--alpha", "1")
        assert code == 2
        assert "e8" in out and "deviations" in err

    def test_no_subcommand(self, capsys):
        assert run(capsys)[0] == 1


class TestSweep:
    def test_perpendicular_grid(self, capsys):
        code, out, _ = run(
            capsys, "sweep", "--axis", "beta:0:0.99:100", "--axis", "beta_v:0.01:0.99:100",
            "--alpha", str(math.pi / 2), "--phi", "0.5",
        )
        assert code == 0
        rows = rows_of(out)
        assert len(rows) == 10000
        assert list(rows[0]) == list(SWEEP_COLUMNS)
        worst = max(
            abs(float(r["cos_omega"]) - (gamma(float(r["beta"])) + gamma(float(r["beta_v"])))
                / (1 + gamma(float(r["beta"])) * gamma(float(r["beta_v"]))))
            for r in rows
        )
        assert worst <= 1e-9

    def test_ultrarelativistic_corner(self, capsys):
        code, out, _ = run(
            capsys, "sweep", "--axis", "beta:0.5:0.999999:2", "--beta-v", "0.999999",
            "--alpha", str(math.pi / 4), "--phi", "0.5",
        )
        assert code == 0
        last = rows_of(out)[-1]
        assert float(last["cos_omega"]) == pytest.approx(math.cos(math.pi / 4), abs=1e-3)

    def test_one_point_axis_exit_1(self, capsys):
        code, _, err = run(capsys, "sweep", "--axis", "beta:0:0.5:1", "--beta-v", "0.5", "--alpha", "1", "--phi", "0.5")
        assert code == 1 and "2 points" in err

    def test_three_axes_exit_1(self, capsys):
        args = ["sweep", "--axis", "beta:0:0.5:2", "--axis", "alpha:0:1:2", "--axis", "phi:0:1:2", "--beta-v", "0.5"]
        assert run(capsys, *args)[0] == 1

    def test_beta_v_axis_must_be_positive(self):
        with pytest.raises(DomainError):
            SweepSpec((parse_axis("beta-v:0:0.5:3"),), {"beta": 0.3, "alpha": 1, "phi": 0.5})

    @pytest.mark.parametrize("text", ["beta:0:1", "beta:a:1:3", "gamma:0:1:3"])
    def test_bad_axis(self, text):
        with pytest.raises(DomainError):
            SweepSpec((parse_axis(text),), {})

    def test_byte_stable_across_runs_and_workers(self):
        spec = SweepSpec(
            (parse_axis("beta:0.1:0.9:4"), parse_axis("alpha:0.2:2.9:3")),
            {"beta_v": 0.7, "phi": 0.6, "theta": 0.2, "mass": 1.0},
        )
        a = format_csv(sweep_rows(spec), SWEEP_COLUMNS)
        b = format_csv(sweep_rows(spec), SWEEP_COLUMNS)
        c = format_csv(sweep_rows(spec, workers=2), SWEEP_COLUMNS)
        assert a == b == c

    def test_csv_round_trips(self):
        spec = SweepSpec((parse_axis("phi:0:1.5:3"),), {"beta": 0.3, "beta_v": 0.4, "alpha": 0.7})
        rows = sweep_rows(spec)
        back = rows_of(format_csv(rows, SWEEP_COLUMNS))
        for r, b in zip(rows, back):
            assert all(float(b[k]) == r[k] for k in SWEEP_COLUMNS)

    def test_json_format(self, capsys):
        code, out, _ = run(capsys, "sweep", "--axis", "phi:0:1:2", "--beta", "0.3", "--beta-v", "0.4", "--alpha", "1", "--format", "json")
        assert code == 0 and len(json.loads(out)) == 2


class TestConfig:
    def _write(self, tmp_path, data, name="cfg.json"):
        p = tmp_path / name
        p.write_text(json.dumps(data))
        return str(p)

    def test_precedence(self, tmp_path):
        path = self._write(tmp_path, {"phi": 0.2, "beta": 0.3, "beta-v": 0.4, "alpha": 0.5, "report": {"beta": 0.6}})
        args = build_parser().parse_args(["--config", path, "report", "--alpha", "0.9"])
        s = resolve_settings(args, environ={})
        assert (s["phi"], s["beta"], s["beta_v"], s["alpha"], s["mass"]) == (0.2, 0.6, 0.4, 0.9, 1.0)

    def test_env_variable(self, tmp_path):
        path = self._write(tmp_path, {"grid": 7})
        args = build_parser().parse_args(["fig2", "--alpha", "1"])
        assert resolve_settings(args, environ={CONFIG_ENV: path})["grid"] == 7
        args = build_parser().parse_args(["fig2", "--alpha", "1", "--grid", "5"])
        assert resolve_settings(args, environ={CONFIG_ENV: path})["grid"] == 5

    def test_flag_config_beats_env(self, tmp_path):
        env_path = self._write(tmp_path, {"grid": 7}, "env.json")
        flag_path = self._write(tmp_path, {"grid": 9}, "flag.json")
        args = build_parser().parse_args(["fig2", "--config", flag_path, "--alpha", "1"])
        assert resolve_settings(args, environ={CONFIG_ENV: env_path})["grid"] == 9

    def test_every_flag_has_config_key(self, tmp_path):
        data = {"phi": 0.3, "theta": 0.1, "beta": 0.5, "beta_v": 0.6, "alpha": 1.0, "mass": 2.0,
                "format": "json", "angle": "extended", "certify": True}
        args = build_parser().parse_args(["report", "--config", self._write(tmp_path, data)])
        s = resolve_settings(args, environ={})
        assert all(s[k] == v for k, v in data.items())
        sweep = {"axis": "beta:0:0.5:3", "workers": 2, "format": "json"}
        args = build_parser().parse_args(["sweep", "--config", self._write(tmp_path, sweep, "s.json")])
        s = resolve_settings(args, environ={})
        assert s["axis"] == ["beta:0:0.5:3"] and s["workers"] == 2
        f2 = {"svg": "x.svg", "out": "y.csv", "grid": 3}
        args = build_parser().parse_args(["fig2", "--config", self._write(tmp_path, f2, "f.json")])
        s = resolve_settings(args, environ={})
        assert (s["svg"], s["out"], s["grid"]) == ("x.svg", "y.csv", 3)

    def test_config_drives_report(self, tmp_path, capsys):
        path = self._write(tmp_path, {"phi": 0.5, "beta": 0.8, "beta_v": 0.6, "alpha": 1.0, "format": "json"})
        code, out, _ = run(capsys, "--config", path, "report")
        assert code == 0 and json.loads(out)["phi"] == 0.5

    @pytest.mark.parametrize("content", ["{not json", "[1, 2]", '{"bogus": 1}', '{"report": 3}'])
    def test_bad_config_exit_1(self, tmp_path, capsys, content):
        p = tmp_path / "bad.json"
        p.write_text(content)
        assert run(capsys, "--config", str(p), "report")[0] == 1

    def test_missing_config_exit_1(self, capsys, tmp_path):
        assert run(capsys, "--config", str(tmp_path / "none.json"), "report")[0] == 1


class TestFig2:
    def test_outputs(self, tmp_path, capsys):
        out, svg = tmp_path / "f.csv", tmp_path / "f.svg"
        code, _, _ = run(capsys, "fig2", "--alpha", str(math.pi / 4), "--grid", "15", "--out", str(out), "--svg", str(svg))
        assert code == 0
        rows = rows_of(out.read_text())
        assert len(rows) == 225
        grid = np.array([float(r["cos_omega"]) for r in rows]).reshape(15, 15)
        assert np.all(grid[0] == 1.0)
        assert np.all(np.diff(grid, axis=0) <= 0) and np.all(np.diff(grid, axis=1) <= 0)
        text = svg.read_text()
        assert text.startswith("<svg") and "beta_v" in text and "beta (boost speed)" in text
        assert "alpha = 0.785398" in text

    def test_unwritable_path_exit_1(self, capsys):
        assert run(capsys, "fig2", "--alpha", "1", "--grid", "3", "--svg", "/nonexistent/dir/f.svg")[0] == 1

    def test_grid_too_small_exit_1(self, capsys):
        assert run(capsys, "fig2", "--alpha", "1", "--grid", "1")[0] == 1


class TestSvg:
    def test_ramp_monotone_luminance(self):
        def lum(hexcolor):
            r, g, b = (int(hexcolor[i : i + 2], 16) for i in (1, 3, 5))
            return 0.2126 * r + 0.7152 * g + 0.0722 * b

        values = [lum(ramp_color(t)) for t in np.linspace(0, 1, 101)]
        assert all(b >= a for a, b in zip(values, values[1:]))
        assert ramp_color(-1) == ramp_color(0) and ramp_color(2) == ramp_color(1)
        assert ramp_color(0) == "#{:02x}{:02x}{:02x}".format(*RAMP[0][1])

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            heatmap_svg(np.zeros((2, 3)), [0, 1], [0, 1], xlabel="x", ylabel="y", title="t")

    def test_escapes_labels(self):
        svg = heatmap_svg(np.eye(2), [0, 1], [0, 1], xlabel="a<b", ylabel="y", title="t")
        assert "a&lt;b" in svg


def test_selftest_quick(capsys):
    code, out, _ = run(capsys, "selftest", "--quick")
    assert code == 0
    assert "bipartition counts 8/28/56/35" in out
    assert "invariant at random points" in out
    assert "FAIL" not in out
