"""
End-to-end tests of the hartree-lab command line.

Validates:
- Exit codes for pass, bad config and kind mismatch
- Output layout and seed recording
- Deterministic tables for a fixed seed
- emit-plotdata statuses
- Shipped Yukawa scattering run against its Coulomb contrast
"""
import json
from pathlib import Path

import pandas as pd
import pytest

from run_experiment import main

LP_CHECK = """\
kind: lp-check
seed: 11
lp_check:
  grid: {n: 16, L: 8.0}
"""

SIMULATE = """\
kind: simulate
seed: 5
tolerances:
  energy_drift: 1.0e-2
simulate:
  simulation:
    grid: {n: 16, L: 16.0}
    initial: {amplitude: 0.5}
    dt: 0.04
    horizon: 1.0
    stride: 5
"""


@pytest.fixture
def lp_config(tmp_path) -> str:
    path = tmp_path / 'lp.yaml'
    path.write_text(LP_CHECK, encoding='utf-8')
    return str(path)


class TestRun:
    def test_lp_check_passes(self, tmp_path, lp_config):
        out = tmp_path / 'lp'
        assert main(['lp-check', lp_config, '--output', str(out)]) == 0
        summary = json.loads((out / 'summary.json').read_text())
        manifest = json.loads((out / 'manifest.json').read_text())
        assert summary['passed'] is True
        assert manifest['seed'] == 11
        assert manifest['tool'] == 'hartree-lab'
        assert manifest['config']['lp_check']['grid'] == {'n': 16, 'L': 8.0}
        assert (out / 'identities.csv').exists()

    def test_same_seed_same_tables(self, tmp_path, lp_config):
        first, second = tmp_path / 'a', tmp_path / 'b'
        assert main(['lp-check', lp_config, '--output', str(first)]) == 0
        assert main(['lp-check', lp_config, '--output', str(second), '--jobs', '2']) == 0
        for name in ('bands.csv', 'identities.csv'):
            assert (first / name).read_bytes() == (second / name).read_bytes()

    def test_malformed_config_writes_nothing(self, tmp_path):
        path = tmp_path / 'broken.yaml'
        path.write_text("kind: lp-check\nlp_check: {grid: [16\n", encoding='utf-8')
        out = tmp_path / 'never'
        assert main(['lp-check', str(path), '--output', str(out)]) == 2
        assert not out.exists()

    def test_kind_mismatch(self, tmp_path, lp_config):
        assert main(['simulate', lp_config, '--output', str(tmp_path / 'x')]) == 2
        assert not (tmp_path / 'x').exists()

    def test_bad_jobs(self, tmp_path, lp_config):
        assert main(['lp-check', lp_config, '--output', str(tmp_path / 'x'), '--jobs', '0']) == 2

    def test_unknown_subcommand(self):
        assert main(['relax', 'run.yaml']) == 2

    def test_failed_check_exits_one(self, tmp_path):
        path = tmp_path / 'strict.yaml'
        path.write_text(LP_CHECK + "tolerances:\n  identity: 0.0\n", encoding='utf-8')
        out = tmp_path / 'strict'
        assert main(['lp-check', str(path), '--output', str(out)]) == 1
        summary = json.loads((out / 'summary.json').read_text())
        assert summary['passed'] is False
        assert summary['tolerance_overrides'] == {'identity': 0.0}


class TestEmitPlotdata:
    def test_empty_directory(self, tmp_path):
        empty = tmp_path / 'empty'
        empty.mkdir()
        assert main(['emit-plotdata', str(empty)]) == 0
        assert not (empty / 'plotdata').exists()

    def test_directory_without_manifest(self, tmp_path):
        stray = tmp_path / 'stray'
        stray.mkdir()
        (stray / 'notes.txt').write_text('x', encoding='utf-8')
        assert main(['emit-plotdata', str(stray)]) == 2

    def test_run_without_plots(self, tmp_path, lp_config):
        out = tmp_path / 'lp'
        assert main(['lp-check', lp_config, '--output', str(out)]) == 0
        assert main(['emit-plotdata', str(out)]) == 0
        assert not (out / 'plotdata').exists()

    def test_simulation_series(self, tmp_path):
        config = tmp_path / 'sim.yaml'
        config.write_text(SIMULATE, encoding='utf-8')
        out = tmp_path / 'sim'
        assert main(['simulate', str(config), '--output', str(out)]) == 0
        assert main(['emit-plotdata', str(out)]) == 0
        long = pd.read_csv(out / 'plotdata' / 'trajectory.csv')
        assert list(long.columns) == ['series', 'x', 'y']
        assert set(long['series']) == {'mass', 'energy', 'hs1'}
        assert len(long) == 3 * 6

    def test_missing_table(self, tmp_path):
        config = tmp_path / 'sim.yaml'
        config.write_text(SIMULATE, encoding='utf-8')
        out = tmp_path / 'sim'
        assert main(['simulate', str(config), '--output', str(out)]) == 0
        (out / 'trajectory.csv').unlink()
        assert main(['emit-plotdata', str(out)]) == 2


@pytest.mark.slow
class TestShippedScatter:
    def test_yukawa_scatters_faster_than_coulomb(self, tmp_path):
        config = Path(__file__).resolve().parent.parent / 'configs' / 'experiments' / 'yukawa-small.yaml'
        out = tmp_path / 'scatter'
        assert main(['scatter', str(config), '--output', str(out)]) == 0
        summary = json.loads((out / 'summary.json').read_text())
        report = summary['report']
        assert report['scattering']['verdict'] == 'scattering-consistent'
        checks = {check['name']: check for check in summary['checks']}
        assert checks['decay_ratio_below_contrast']['passed'] is True
        assert report['scattering']['residual_ratios'][-1] < report['contrast']['residual_ratios'][-1]
