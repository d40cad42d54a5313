"""Station identifier similarity classification (C++ core)."""

import json as _json

from ._stationmatch import *  # noqa: F401,F403
from ._stationmatch import run_experiment as _run_experiment


def run_experiment(gt, classifiers=(), **kwargs):
    """Runs the evaluation protocol and returns the report as a dict."""
    return _json.loads(_run_experiment(gt, list(classifiers), **kwargs))
