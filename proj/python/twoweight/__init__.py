"""Two-weight Hilbert transform toolkit.

Thin re-export of the compiled module plus JSON-decoding helpers.
"""

import json as _json

from ._twoweight import (  # noqa: F401
    DiscreteMeasure,
    Interval,
    Truncation,
    bilinear,
    characteristics_json,
    energy,
    generate_instance_json,
    hilbert_apply,
    mass,
    operator_norm,
    poisson,
    run_instance_json,
    run_suite_json,
    tail_weight,
    truncation_gap,
)


def characteristics(sigma, omega, depth=10, local_tails=False):
    """Weight characteristics of a measure pair, as a dict."""
    return _json.loads(characteristics_json(sigma, omega, depth, local_tails))


def generate_instance(seed, profile="uniform", atoms=24, depth=10):
    return _json.loads(generate_instance_json(seed, profile, atoms, depth))


def run_instance(instance, gamma=-1.0):
    if not isinstance(instance, str):
        instance = _json.dumps(instance)
    return _json.loads(run_instance_json(instance, gamma))


def run_suite(name, seeds, baseline_dir=""):
    ok, report = run_suite_json(name, list(seeds), baseline_dir)
    return ok, _json.loads(report)
