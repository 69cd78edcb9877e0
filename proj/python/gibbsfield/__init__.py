"""Python access to the gibbsfield core: models, conditional kernels and diagnostics.

Exact values cross the boundary as ``"num/den"`` strings and come back as
:class:`fractions.Fraction`; floating values come back as ``float``.
"""

from __future__ import annotations

import json
from fractions import Fraction

from ._gfl import GflError, Model, run_cli
from . import _gfl

__all__ = [
    "GflError",
    "Model",
    "conditional",
    "diagnose",
    "example2_conditional",
    "probability",
    "reconstruct",
    "run_cli",
]


def _number(text: str) -> Fraction | float:
    if any(c in text for c in ".eEn"):
        return float(text)
    return Fraction(text)


def probability(model: Model, config: str) -> Fraction | float:
    return _number(model.probability(config))


def conditional(model: Model, volume: str, condition: str = "") -> dict[str, Fraction | float]:
    return {k: _number(v) for k, v in _gfl.conditional(model, volume, condition)}


def reconstruct(model: Model, volume: str, condition: str = "") -> dict[str, Fraction | float]:
    return {k: _number(v) for k, v in _gfl.reconstruct(model, volume, condition)}


def diagnose(model: Model, site: str = "", filtration: str = "geometric", family: str = "standard:4",
             tol: float = 1e-12, seed: int = 24301) -> dict:
    return json.loads(_gfl.diagnose_json(model, site, filtration, family, tol, seed))


def example2_conditional(ones: int, sites: int, tau: str = "1") -> Fraction | float:
    return _number(_gfl.example2_conditional(ones, sites, tau))
