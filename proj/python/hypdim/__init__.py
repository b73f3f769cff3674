"""Pressure, expansion rate and box-dimension bounds for piecewise-affine hyperbolic models.

Models come from the builders (``horseshoe``, ``doubling``, ``cantor``, ``cat_map``, ``golden_map``),
from a CLI-style spec string, or from a JSON model definition. The analysis functions return plain
dicts with the same fields as the ``hypdim-cli`` JSON output.
"""

import json

from ._core import (
    HypdimError,
    Model,
    __version__,
    cantor,
    cat_map,
    doubling,
    golden_map,
    horseshoe,
    horseshoe_for_target_dimension,
    model_from_json,
    model_from_spec,
    power,
    run_cli,
)
from . import _core

__all__ = [
    "HypdimError",
    "Model",
    "__version__",
    "bound",
    "cantor",
    "cat_map",
    "dimension",
    "doubling",
    "expansion_rate",
    "golden_map",
    "horseshoe",
    "horseshoe_for_target_dimension",
    "model_from_json",
    "model_from_spec",
    "power",
    "pressure",
    "run_cli",
]


def _model(model):
    return model_from_spec(model) if isinstance(model, str) else model


def pressure(model, potential=None, method="spectral", k_max=12, epsilon=None, grid=0, k_min=1, threads=1):
    """Topological pressure by ``spectral``, ``partition`` or ``volume`` growth.

    ``potential`` is ``"phi_u"``, ``"phi_s"``, ``"phi"``, ``"zero"``, a list with one value per symbol,
    or None for the geometric default. The volume method always uses the geometric potential;
    its ``epsilon`` defaults to half the smallest gap between branches (0.1 without a gap).
    """
    return json.loads(_core._pressure(_model(model), potential, method, k_max, epsilon, grid, k_min, threads))


def expansion_rate(model, k_max=8, inverse=False):
    return json.loads(_core._expansion_rate(_model(model), k_max, inverse))


def bound(model, potential=None, check_srb=False, s_k_max=8):
    """The bound n + P/s with its attractor classification; ``check_srb`` adds the equivalence checks."""
    return json.loads(_core._bound(_model(model), potential, check_srb, s_k_max))


def dimension(model, set="invariant", scales=(2.0, 1, 10), epsilon=0.05, depth=10, grid=2048, threads=1):
    """Box dimension of the invariant set cover or of a sampled local stable set.

    ``scales`` is ``(base, m_lo, m_hi)`` for the schedule base^-m_lo .. base^-m_hi.
    """
    base, m_lo, m_hi = scales
    return json.loads(_core._dimension(_model(model), set, base, m_lo, m_hi, epsilon, depth, grid, threads))
