use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot parse polynomial `{0}`")]
    PolynomialSyntax(String),
    #[error("polynomial must have degree at least 1")]
    ZeroDegree,
    #[error("polynomial is not monic (leading coefficient {0})")]
    NotMonic(String),
    #[error("polynomial is reducible: factor {0}")]
    Reducible(String),
    #[error("irreducibility of a degree {0} polynomial cannot be checked; pass assume-irreducible")]
    IrreducibilityUnverified(usize),
    #[error("no real root above 1")]
    NoRealRootAboveOne,
    #[error("not a Pisot number: {0}")]
    NotPisot(String),
    #[error("operands belong to different fields")]
    MixedBases,
    #[error("division by zero")]
    DivisionByZero,
    #[error("value is outside [0, 1)")]
    OutOfUnitInterval,
    #[error("orbit of 1 exceeded the budget of {0} points")]
    OrbitBudgetExceeded(usize),
    #[error("word {0} is not admissible")]
    Inadmissible(String),
    #[error("digit {digit} exceeds the alphabet bound {bound}")]
    DigitOutOfRange { digit: u32, bound: u32 },
    #[error("interval is empty")]
    EmptyInterval,
    #[error("interval is not contained in [0, 1)")]
    IntervalOutOfRange,
    #[error("word is empty")]
    EmptyWord,
    #[error("enumeration of {size} words exceeds the limit {limit}")]
    EnumerationBudgetExceeded { size: String, limit: u64 },
    #[error("need {need} digits, have {have}")]
    InsufficientDigits { have: usize, need: usize },
    #[error("step {0}: no candidate accepted")]
    NoCandidateAccepted(u64),
    #[error("step {step}: candidate budget exhausted after {examined} candidates")]
    CandidateBudgetExceeded { step: u64, examined: u64 },
    #[error("step {0}: feasibility ledger violated")]
    FeasibilityViolated(u64),
    #[error("run budget exhausted after {steps} steps")]
    BudgetExhausted { steps: u64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}
