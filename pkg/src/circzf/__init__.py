"""Zero forcing numbers and maximum nullity of circulant graphs."""

from .graphs import (
    CirculantSpec,
    Graph,
    SpecParseError,
    build_circulant,
    canonical_form,
    decompose,
    parse_graph,
    parse_spec,
    torus_product,
)
from .forcing import (
    BudgetExhausted,
    FillState,
    ForcingCertificate,
    InternalInconsistency,
    SearchCeilingExceeded,
    closure,
    is_forcing_set,
    zf_circulant,
    zf_exact,
    zf_lower_bounds,
)
from .exactla import ExactMatrix, QuadScalar, nullity, rank
from .families import Prediction, VerificationReport, predict, sweep, verify

__version__ = "0.1.0"

__all__ = [
    "CirculantSpec",
    "Graph",
    "SpecParseError",
    "build_circulant",
    "canonical_form",
    "decompose",
    "parse_graph",
    "parse_spec",
    "torus_product",
    "BudgetExhausted",
    "FillState",
    "ForcingCertificate",
    "InternalInconsistency",
    "SearchCeilingExceeded",
    "closure",
    "is_forcing_set",
    "zf_circulant",
    "zf_exact",
    "zf_lower_bounds",
    "ExactMatrix",
    "QuadScalar",
    "nullity",
    "rank",
    "Prediction",
    "VerificationReport",
    "predict",
    "sweep",
    "verify",
]
