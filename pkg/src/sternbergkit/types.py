"""Type definitions for SternbergKit"""

from enum import Enum
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

Number = Union[str, int, float]


class Property(str, Enum):
    """Weight predicates"""
    LOG_CONVEX = "log_convex"
    BLOCK_CONVEX = "block_convex"
    STRONGLY_SUBMULT = "strongly_submult"
    STRICT_FDB = "strict_fdb"
    FDB = "fdb"
    ASM = "asm"
    ALMOST_INCREASING = "almost_increasing"
    DIFF_STABLE = "diff_stable"
    STRONGLY_NONANALYTIC = "strongly_nonanalytic"
    ANALYTIC_TYPE = "analytic_type"


LAMBDA_PROPERTIES = (
    Property.STRONGLY_SUBMULT,
    Property.STRICT_FDB,
    Property.FDB,
    Property.ASM,
    Property.ALMOST_INCREASING,
)

IMPLICATION_CHAIN = (
    Property.LOG_CONVEX,
    Property.BLOCK_CONVEX,
    Property.STRONGLY_SUBMULT,
    Property.STRICT_FDB,
    Property.FDB,
)


class GeneratorKind(str, Enum):
    """Closed-form weight generators"""
    CONSTANT = "constant"
    GEVREY = "gevrey"
    LOGPOW = "logpow"
    CUSTOM_TABLE = "custom-table"


class ExampleKind(str, Enum):
    """Separating example weights"""
    ASM_NOT_FDB = "asm-not-fdb"
    FDB_NOT_LOG = "fdb-not-log"
    FDB_NOT_ASM = "fdb-not-asm"
    ASM_NOT_DIFF = "asm-not-diff"


class AnalyticTag(str, Enum):
    """Position of E^m relative to the analytic class"""
    SUB_ANALYTIC = "sub-analytic"
    CONTAINS_ANALYTIC = "contains-analytic"
    BEYOND_ANALYTIC = "beyond-analytic"


class DominationPolicy(str, Enum):
    """How a dominating weight is chosen"""
    MINIMAL = "minimal"
    GEVREY = "gevrey"
    CONSTANT = "constant"


class ClassTag(str, Enum):
    """Regularity loss recorded in a domination certificate"""
    NO_LOSS = "no_loss"
    GEVREY_LOSS = "gevrey_loss"
    GENERAL = "general"


class RegularityTag(str, Enum):
    """Class of the linearizing map"""
    CONVERGENT = "convergent"
    SAME_CLASS = "same_class"
    GEVREY = "gevrey"
    GENERAL = "general"


class FixtureKind(str, Enum):
    """Fixture corpus selections"""
    WEIGHTS = "weights"
    POINCARE = "poincare"
    DIOPHANTINE = "diophantine"
    BRUNO = "bruno"
    LIOUVILLE = "liouville"
    GEVREY_DIVISORS = "gevrey-divisors"
    ARBITRARY = "arbitrary"
    RANDOM = "random"
    ALL = "all"


class Command(str, Enum):
    """CLI subcommands"""
    CLASSIFY_WEIGHT = "classify-weight"
    REGULARIZE = "regularize"
    STAR = "star"
    LINEARIZE = "linearize"
    OMEGA = "omega"
    DOMINATE = "dominate"
    FIXTURES = "fixtures"
    COMPOSE_CHECK = "compose-check"
    FLOW_CHECK = "flow-check"


# ----- Wire documents -----

class GeneratorSpec(BaseModel):
    """Closed-form generator tag of a weight"""
    model_config = ConfigDict(frozen=True)

    kind: GeneratorKind
    params: Dict[str, str] = Field(default_factory=dict)


class WeightDocument(BaseModel):
    """Weight JSON document"""
    generator: Optional[GeneratorSpec] = None
    values: List[Number]
    horizon: int = Field(..., ge=2)

    @model_validator(mode="after")
    def check_horizon(self) -> "WeightDocument":
        if len(self.values) != self.horizon:
            raise ValueError(f"horizon {self.horizon} does not match {len(self.values)} values")
        return self


class SeriesTerm(BaseModel):
    """One stored coefficient vector"""
    k: List[int]
    v: List[Union[Number, List[Number]]]


class SeriesDocument(BaseModel):
    """Truncated series JSON document"""
    dim_in: int = Field(..., ge=1)
    dim_out: int = Field(..., ge=1)
    order: int = Field(..., ge=1)
    coeffs: List[SeriesTerm] = Field(default_factory=list)
    exact: bool = True
    has_constant: bool = False

    @model_validator(mode="after")
    def check_shapes(self) -> "SeriesDocument":
        for term in self.coeffs:
            if len(term.k) != self.dim_in:
                raise ValueError(f"index {term.k} does not have dimension {self.dim_in}")
            if len(term.v) != self.dim_out:
                raise ValueError(f"value at {term.k} does not have {self.dim_out} components")
        return self


class EigenvalueFixture(BaseModel):
    """Eigenvalue fixture JSON document"""
    eigenvalues: List[Union[Number, List[Number]]] = Field(..., min_length=1)
    exact: bool = True


class OmegaDocument(BaseModel):
    """Tabulated nonresonance function, as written by the omega command"""
    omega_squared: Dict[str, Number]
    exact: bool = True
    source: str = "eigenvalues"


# ----- Reports -----

class Report(BaseModel):
    """Base for report models carrying exact or mpmath scalars"""
    model_config = ConfigDict(arbitrary_types_allowed=True)


class Witness(Report):
    """Counterexample to a defining inequality lhs <= rhs"""
    indices: List[int]
    lhs: Any
    rhs: Any
    lam: Optional[Any] = None


class PropertyReport(Report):
    """Outcome of one weight predicate"""
    property: Property
    holds_to_horizon: bool
    witness: Optional[Witness] = None
    constant: Optional[Any] = None
    horizon: int
    lam: Optional[Any] = None
    notes: List[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_witness(self) -> "PropertyReport":
        if not self.holds_to_horizon and self.witness is None:
            raise ValueError(f"failed {self.property.value} report needs a witness")
        return self


class InequalityReport(Report):
    """A named inequality checked over every index tuple up to the horizon"""
    name: str
    holds: bool
    checked: int
    witness: Optional[Witness] = None


class ShiftDualityReport(Report):
    """FDB of a weight against ASM of its left shift"""
    fdb: PropertyReport
    asm_of_shift: PropertyReport
    agree: bool


class AnalyticTypeReport(Report):
    """Horizon-limited estimates of liminf m_n^(1/n) and liminf M_n^(1/n)"""
    alpha_est: Any
    big_a_est: Any
    tag: AnalyticTag
    equals_analytic: bool
    big_a_bounded: bool
    horizon: int
    horizon_limited: bool = True


class CharacteristicReport(Report):
    """Coefficients s_n of the characteristic function"""
    coefficients: List[Any]
    lower_bounds: List[Any]
    terms: int


class ClosureReport(Report):
    """Closure properties of E^m read off the predicates"""
    holomorphically_closed: bool
    composition_closed: bool
    inverse_closed: bool
    derivation_closed: bool
    reports: List[PropertyReport]


class CompositionHypothesisReport(Report):
    """w_r m_(k_1)...m_(k_r) <= lam^k m_k for all tuples up to the order"""
    holds: bool
    lam: Any
    order: int
    witness: Optional[Witness] = None


class MainLemmaReport(Report):
    """Coefficientwise comparison of the two sides of the majorant inequality"""
    precondition: CompositionHypothesisReport
    holds: bool
    order: int
    first_violation: Optional[List[int]] = None
    component: Optional[int] = None
    lhs: Optional[Any] = None
    rhs: Optional[Any] = None
    equal_indices: int = 0
    strict_indices: int = 0


class SeminormBoundReport(Report):
    """Three seminorms of the composition estimate"""
    precondition: CompositionHypothesisReport
    lhs: Any
    rho: Any
    rhs: Any
    holds: bool


class FlowReport(Report):
    """Flow coefficients against the majorant flow"""
    holds: bool
    exact_equality: bool
    order: int
    first_violation: Optional[List[int]] = None
    lhs: Optional[Any] = None
    rhs: Optional[Any] = None
    time_weight_strict_fdb: bool = True
    space_weight_strict_fdb: bool = True


class ResonanceWitness(Report):
    """lam^k = lam_i with i 1-based"""
    k: List[int]
    i: int


class ResonanceReport(Report):
    """Nonresonance test with the squared tables E_k^2 and Omega(q)^2.

    Squared moduli keep the tables exact for Gaussian-rational eigenvalues.
    Synthetic tables (no eigenvalues) carry an empty ``e_squared``.
    """
    resonant: bool
    witness: Optional[ResonanceWitness] = None
    numerically_resonant: bool = False
    max_degree: int = Field(..., ge=2)
    e_squared: Dict[Any, Any] = Field(default_factory=dict)
    omega_squared: Dict[int, Any] = Field(default_factory=dict)
    exact: bool = True
    source: str = "eigenvalues"

    @model_validator(mode="after")
    def check_monotone(self) -> "ResonanceReport":
        qs = sorted(self.omega_squared)
        for a, b in zip(qs, qs[1:]):
            if self.omega_squared[b] < self.omega_squared[a]:
                raise ValueError(f"Omega decreases between q={a} and q={b}")
        return self

    @classmethod
    def from_omega(
        cls, omega_squared: Dict[int, Any], exact: bool = True, source: str = "table"
    ) -> "ResonanceReport":
        """Wrap a tabulated Omega(q)^2, q = 2..Q, without eigenvalues"""
        if not omega_squared or min(omega_squared) != 2:
            raise ValueError("an Omega table must start at q = 2")
        return cls(
            resonant=False,
            max_degree=max(omega_squared),
            omega_squared=dict(omega_squared),
            exact=exact,
            source=source,
        )

    @property
    def usable(self) -> bool:
        return not self.resonant and not self.numerically_resonant


class DecompositionTree(Report):
    """Recorded argmax decomposition of Delta_k and its flattened E-factors"""
    k: Any
    parts: List[Any]
    factors: List[Any]


class AccumulationLedger(Report):
    """sigma_n, Delta_k^2 with decomposition trees, and factor counts N_n(k)"""
    order: int
    sigma: List[int]
    delta_squared: Dict[Any, Any]
    trees: Dict[Any, DecompositionTree]
    counting: Dict[Any, int] = Field(default_factory=dict)
    e_squared: Dict[Any, Any] = Field(default_factory=dict)
    omega_squared: Dict[int, Any] = Field(default_factory=dict)
    eta_squared: Any
    exact: bool = True


class CountingReport(Report):
    """Counting Lemma for one (n, k)"""
    n: int
    k: List[int]
    count: int
    bound: Any
    holds: bool
    pairs_checked: int = 0
    separation_violations: int = 0
    counted: List[List[int]] = Field(default_factory=list)


class SiegelBoundReport(Report):
    """|phi_k| / m_|k| against sigma_|k| Delta_k for the rescaled map"""
    holds: bool
    order: int
    scale: Any
    beta: Any
    lam: Any
    checked: int
    first_violation: Optional[List[int]] = None
    literal_holds: bool = True
    literal_violations: int = 0
    first_literal_violation: Optional[List[int]] = None


class BorelReport(Report):
    """sup_k (1/|k|) log(|phi_k| / (m_k w_k)) over the table"""
    exponent: Any
    argmax: Optional[List[int]] = None
    finite: bool = True


class DominationCertificate(Report):
    """Dominating weight with the table on which it is certified"""
    weight: Any
    a: Any
    bruno_partial_sums: List[Any]
    policy: DominationPolicy
    class_tag: ClassTag
    gevrey_delta: Optional[Any] = None
    fitted_delta: Optional[Any] = None
    table_horizon: int
    certified_up_to: int


class RegularityReport(Report):
    """Final class of the linearizing map"""
    tag: RegularityTag
    label: str
    escalations: int
    weight: Any
    gevrey_s: Optional[Any] = None
    log_convex: Optional[PropertyReport] = None
    strongly_nonanalytic: Optional[PropertyReport] = None


class RunConfig(BaseModel):
    """Resolved command-line configuration"""
    command: Command
    input_paths: List[str] = Field(default_factory=list)
    output_path: Optional[str] = None
    horizon: Optional[int] = Field(None, ge=2)
    order: int = Field(10, ge=1)
    max_degree: Optional[int] = Field(None, ge=2)
    policy: DominationPolicy = DominationPolicy.MINIMAL
    delta: Optional[str] = None
    lam: Optional[str] = None
    kind: Optional[str] = None
    precision: int = Field(128, ge=128)
    seed: int = 0
    strict: bool = False
    debug: bool = False
