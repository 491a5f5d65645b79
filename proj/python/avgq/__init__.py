"""Average-case query complexity of boolean functions."""

import json

from ._avgq import *  # noqa: F401,F403
from ._avgq import _run_experiment


def run_experiment(name, seed=0, **params):
    """Run a named experiment and return its report as a dict."""
    return json.loads(_run_experiment(name, {k: str(v) for k, v in params.items()}, seed))
