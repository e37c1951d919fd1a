"""Window-scale classification of subsets of balleans with checkable certificates."""
__version__ = "0.1.0"

from .space import (  # noqa: E402
    FiniteMetric,
    FreeGroup,
    GraphMetric,
    IntegerGrid,
    RationalGrid,
    Window,
    ZdGroup,
)
from .verdict import Answer, Certificate, Verdict  # noqa: E402

__all__ = [
    "Answer",
    "Certificate",
    "FiniteMetric",
    "FreeGroup",
    "GraphMetric",
    "IntegerGrid",
    "RationalGrid",
    "Verdict",
    "Window",
    "ZdGroup",
]
