"""
SternbergKit

Weight sequences of ultradifferentiable classes, truncated multivariate power
series with weighted majorants, and formal linearization of local maps with
small-divisor bookkeeping.
"""

__version__ = "1.0.0"

from .exceptions import (
    DominationError,
    EscalationBudgetError,
    HorizonError,
    ImplicationChainError,
    ResonanceError,
    SchemaError,
    SternbergKitError,
    ValidationError,
    VerificationError,
    WeightAssumptionError,
)
from .kit import SternbergKit
from .linear import LinearPart
from .multiindex import MultiIndex
from .truncated import TruncatedSeries, compose
from .types import (
    # Enums
    AnalyticTag,
    ClassTag,
    DominationPolicy,
    ExampleKind,
    FixtureKind,
    GeneratorKind,
    Property,
    RegularityTag,
    # Documents
    EigenvalueFixture,
    GeneratorSpec,
    OmegaDocument,
    SeriesDocument,
    WeightDocument,
    # Reports
    AccumulationLedger,
    AnalyticTypeReport,
    BorelReport,
    CountingReport,
    DominationCertificate,
    FlowReport,
    MainLemmaReport,
    PropertyReport,
    RegularityReport,
    ResonanceReport,
    SiegelBoundReport,
)
from .weight import Weight

__all__ = [
    "SternbergKit",
    "Weight",
    "MultiIndex",
    "TruncatedSeries",
    "LinearPart",
    "compose",
    # Errors
    "SternbergKitError",
    "ValidationError",
    "SchemaError",
    "HorizonError",
    "WeightAssumptionError",
    "ResonanceError",
    "ImplicationChainError",
    "VerificationError",
    "DominationError",
    "EscalationBudgetError",
    # Enums
    "AnalyticTag",
    "ClassTag",
    "DominationPolicy",
    "ExampleKind",
    "FixtureKind",
    "GeneratorKind",
    "Property",
    "RegularityTag",
    # Documents
    "EigenvalueFixture",
    "GeneratorSpec",
    "OmegaDocument",
    "SeriesDocument",
    "WeightDocument",
    # Reports
    "AccumulationLedger",
    "AnalyticTypeReport",
    "BorelReport",
    "CountingReport",
    "DominationCertificate",
    "FlowReport",
    "MainLemmaReport",
    "PropertyReport",
    "RegularityReport",
    "ResonanceReport",
    "SiegelBoundReport",
]
