"""Smoke tests for the python module and the CLI.

The CMake test target puts the built extension directory on PYTHONPATH and
exports TWOWEIGHT_CLI with the path of the command-line binary.
"""

import json
import os
import subprocess
import sys

import pytest

tw = pytest.importorskip("_twoweight")


def test_poisson_and_mass():
    mu = tw.DiscreteMeasure([0.5], [1.0])
    box = tw.Interval(0.0, 1.0)
    assert tw.mass(mu, box) == 1.0
    assert abs(tw.poisson(box, mu) - 1.0) < 1e-12
    assert abs(tw.poisson(tw.Interval(0.0, 1.0), tw.DiscreteMeasure([1.5], [1.0])) - 0.25) < 1e-12
    assert tw.energy(box, mu) == 0.0


def test_operator_norm_single_pair():
    sigma = tw.DiscreteMeasure([0.0], [1.0])
    omega = tw.DiscreteMeasure([2.0], [1.0])
    t = tw.Truncation(1e-9)
    assert abs(tw.operator_norm(sigma, omega, t) - 0.5) < 1e-8


def test_characteristics_dict():
    sigma = tw.DiscreteMeasure([0.25, 0.75], [1.0, 1.0])
    rep = json.loads(tw.characteristics_json(sigma, sigma, 8, False))
    assert rep["a2_offset"]["value"] == pytest.approx(8.0)
    assert rep["testing_fwd"]["value"] <= rep["testing_fwd"]["value"] + 1e-9


def test_instance_round_trip_and_suite():
    inst = tw.generate_instance_json(3, "common-atoms", 16, 8)
    report = json.loads(tw.run_instance_json(inst, -1.0))
    assert report["forms"]["residuals"]["grand"] < 1e-10
    ok, suite = tw.run_suite_json("identities", [1, 2], "")
    assert ok
    assert json.loads(suite)["pass"] is True


def test_cli_determinism():
    cli = os.environ.get("TWOWEIGHT_CLI")
    if not cli or not os.path.exists(cli):
        pytest.skip("CLI path not provided")
    cmd = [cli, "verify", "--suite", "identities", "--seeds", "1..5",
           "--baseline-dir", ""]
    a = subprocess.run(cmd, capture_output=True)
    b = subprocess.run(cmd, capture_output=True)
    assert a.returncode == 0 and b.returncode == 0
    assert a.stdout == b.stdout
    assert len(a.stdout) > 100
    sys.stdout.write("cli bytes: %d\n" % len(a.stdout))
