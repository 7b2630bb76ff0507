"""Weighted Morrey spaces, Muckenhoupt weights and embedding decisions, numerically."""

from .core import (
    INF,
    Ball,
    Box,
    Cube,
    DivergenceError,
    EmbeddingVerdict,
    PreconditionError,
    QuadratureConfig,
    SpaceSpec,
    SupConditionReport,
    ToleranceError,
    Weight,
    holder_conjugate,
    weight_pow,
    weight_product,
)
from .functions import (
    AbsPower,
    BlackBox,
    Dilate,
    IndicatorPower,
    Product,
    Scale,
    Sum,
    TestFunction,
    indicator,
    spike,
    zero,
)
from .integrate import weight_measure, weighted_p_integral

__version__ = "0.1.0"
