import csv
import json
import os

import numpy as np
import pytest

from biharm2d import driver
from biharm2d.cli import cli_main
from biharm2d.driver import ConfigError, RunConfig
from biharm2d.geometry import winding_number


class TestRunConfig:
    def test_defaults_validate(self):
        RunConfig().validate()

    def test_bad_geometry(self):
        with pytest.raises(ConfigError):
            RunConfig(a=-1.0).validate()
        with pytest.raises(ConfigError):
            RunConfig(h=0.4).validate()   # rounded corners would overlap
        with pytest.raises(ConfigError):
            RunConfig(panels=4).validate()

    def test_from_file(self, tmp_path):
        p = tmp_path / "cfg.json"
        p.write_text(json.dumps({"h": 0.1, "panels": 32, "seed": 7}))
        cfg = RunConfig.from_file(str(p))
        assert (cfg.h, cfg.panels, cfg.seed) == (0.1, 32, 7)

    def test_unknown_keys_rejected(self, tmp_path):
        p = tmp_path / "cfg.json"
        p.write_text(json.dumps({"panells": 32}))
        with pytest.raises(ConfigError):
            RunConfig.from_file(str(p))

    def test_missing_file(self):
        with pytest.raises(ConfigError):
            RunConfig.from_file("/nonexistent/cfg.json")


class TestInstances:
    def test_simply_connected_placement(self):
        cfg = RunConfig()
        inst = driver.simply_connected_instance(cfg)
        dom = driver.simply_connected_domain(cfg, 16)
        assert len(inst.sources) == 4 and len(inst.targets) == 4
        # sources hug the outside, targets the quarter points, all
        # within the +-0.05 perturbation boxes
        base_s = np.array([[1.2, 0.25], [0.5, 0.7], [-0.2, 0.25], [0.5, -0.2]])
        base_t = np.array([[0.25, 0.125], [0.25, 0.375],
                           [0.75, 0.125], [0.75, 0.375]])
        assert np.max(np.abs(inst.sources - base_s)) <= 0.05
        assert np.max(np.abs(inst.targets - base_t)) <= 0.05
        assert np.all((inst.strengths >= 0) & (inst.strengths < 1))
        assert not np.any(dom.contains(inst.sources))
        assert np.all(dom.contains(inst.targets))

    def test_multiply_connected_placement(self):
        inst = driver.multiply_connected_instance(driver.DEFAULT_SEED)
        dom = driver.multiply_connected_domain(48, 4)
        assert len(inst.sources) == 10 and len(inst.targets) == 12
        for k, s in enumerate(inst.sources):
            assert winding_number(s, dom.holes[k]) != 0
        assert np.all(dom.contains(inst.targets))

    def test_deterministic(self):
        a = driver.simply_connected_instance(RunConfig())
        b = driver.simply_connected_instance(RunConfig())
        assert np.array_equal(a.sources, b.sources)
        assert np.array_equal(a.strengths, b.strengths)
        assert np.array_equal(a.targets, b.targets)
        c = driver.simply_connected_instance(RunConfig(seed=99))
        assert not np.array_equal(a.sources, c.sources)

    def test_manufactured_evaluators(self):
        inst = driver.simply_connected_instance(RunConfig())
        p = np.array([[0.4, 0.2]])
        h = 1e-6
        fd = np.array([
            (inst.w(p + [h, 0]) - inst.w(p - [h, 0]))[0],
            (inst.w(p + [0, h]) - inst.w(p - [0, h]))[0]]) / (2 * h)
        assert np.allclose(inst.grad(p)[0], fd, atol=1e-7)


class TestWriters:
    def test_convergence_csv_schema(self, tmp_path):
        rows = [(16, 256, 513, 1.5e-4), (24, 384, 769, 2.5e-8)]
        path = str(tmp_path / "convergence.csv")
        driver.write_convergence_csv(rows, path, RunConfig())
        with open(path, newline="") as fh:
            got = list(csv.reader(fh))
        assert got[0] == ["n_panels", "n_d", "system_size", "eps"]
        assert [int(v) for v in got[1][:3]] == [16, 256, 513]
        assert float(got[2][3]) == 2.5e-8
        sidecar = json.loads(open(path + ".json").read())
        assert sidecar["config"]["seed"] == driver.DEFAULT_SEED

    def test_condition_csv_schema(self, tmp_path):
        rows = [(0.2, 22.0, 9.6e3), (0.1, 25.0, 1.1e5)]
        path = str(tmp_path / "condition.csv")
        driver.write_condition_csv(rows, path, RunConfig())
        with open(path, newline="") as fh:
            got = list(csv.reader(fh))
        assert got[0] == ["h", "kappa_ours", "kappa_farkas"]
        assert float(got[1][1]) == 22.0


class TestCli:
    def test_solve_summary(self, capsys, tmp_path):
        rc = cli_main(["solve", "--panels", "16",
                       "--out", str(tmp_path)])
        assert rc == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["n_d"] == 16 * 16
        assert summary["system_size"] == 2 * 16 * 16 + 1
        assert summary["eps"] < 1e-4

    def test_eval_grid_deterministic(self, capsys, tmp_path):
        outs = []
        for sub in ("a", "b"):
            d = tmp_path / sub
            rc = cli_main(["eval-grid", "--panels", "16", "--grid", "12,7",
                           "--out", str(d)])
            assert rc == 0
            capsys.readouterr()
            outs.append((d / "grid.csv").read_bytes())
        assert outs[0] == outs[1]
        with open(tmp_path / "a" / "grid.csv", newline="") as fh:
            got = list(csv.reader(fh))
        assert got[0] == ["x", "y", "inside", "w", "w_ref", "abs_err"]
        assert len(got) == 1 + 12 * 7

    def test_config_file_roundtrip(self, capsys, tmp_path):
        p = tmp_path / "cfg.json"
        p.write_text(json.dumps({"panels": 16, "grid_nx": 8, "grid_ny": 5}))
        rc = cli_main(["eval-grid", "--config", str(p),
                       "--out", str(tmp_path)])
        assert rc == 0
        capsys.readouterr()
        sidecar = json.loads((tmp_path / "grid.csv.json").read_text())
        assert sidecar["config"]["grid_nx"] == 8

    def test_missing_config_exits_2(self, capsys):
        assert cli_main(["solve", "--config", "/no/such/file.json"]) == 2
        capsys.readouterr()

    def test_bad_grid_argument_exits_2(self, capsys):
        assert cli_main(["eval-grid", "--grid", "12x7"]) == 2
        capsys.readouterr()

    def test_bad_panels_exits_2(self, capsys, tmp_path):
        assert cli_main(["solve", "--panels", "2",
                         "--out", str(tmp_path)]) == 2
        capsys.readouterr()
