"""Distributional multi-objective bandit learning under the ESR criterion."""

import json

from ._core import *  # noqa: F401,F403
from ._core import analyze_json as _analyze_json


def analyze(env):
    """Exact dominance analysis of an environment (preset name or spec) as a dict."""
    if isinstance(env, str):
        env = resolve_environment(env)  # noqa: F405
    return json.loads(_analyze_json(env))


__version__ = "0.1.0"
