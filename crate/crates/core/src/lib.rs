//! Exact computational algebra for finite matrix groups over truncated rings.
//!
//! The crate builds groups such as `SL_2(F_p[t]/(t^k))` and `SL_2(Z/p^k)`,
//! computes their irreducible character degree multisets by several
//! independent routes (Burnside-Dixon class-algebra eigenvectors, Frobenius
//! word counts inverted through a Vandermonde system, and the Kirillov orbit
//! method for unipotent groups over fields), and compares the resulting
//! representation zeta functions. All arithmetic is exact: finite ring
//! elements are canonical digit vectors, large values are big integers or
//! big rationals, and no floating point is used anywhere.
//!
//! Module map:
//! - [`rings`]: finite fields, truncated polynomial rings, Galois rings, and
//!   a Witt-vector oracle derived from scratch over exact rationals.
//! - [`matrix`]: digit-level matrix arithmetic over any [`rings::RingDesc`].
//! - [`groups`]: group enumeration and conjugacy structure.
//! - [`chartab`]: degree multisets from class-algebra data.
//! - [`kirillov`]: orbit-method degrees and exact character values.
//! - [`zetatool`]: zeta evaluation, semi-polynomials, sign-change bounds,
//!   and the finite-evaluation equivalence check.

use std::fmt;

pub mod rings;
pub mod matrix;
pub mod groups;
pub mod chartab;
pub mod kirillov;
pub mod zetatool;

pub use rand_chacha;

/// Crate-wide error type. Variants marked as budget errors represent
/// resource limits rather than mathematical failures; everything else
/// signals either bad input or an internal inconsistency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A parameter that must be prime is not.
    NotPrime(u64),
    /// Structurally invalid parameter (zero length, oversized digit, ...).
    BadParameter(String),
    /// Two elements belong to different ring descriptors.
    DescriptorMismatch,
    /// Inversion of zero or of a non-unit.
    DivisionByNonUnit,
    /// A derived Witt structure polynomial has a non-integer coefficient.
    /// This can only happen through an implementation bug.
    NonIntegralWittCoefficient { p: u64, k: usize },
    /// Operation requires the prime field F_p as base.
    NotPrimeField,
    /// Predicted group order exceeds the element budget.
    ElementBudget { predicted: u64, budget: u64 },
    /// A sweep would exceed the group-operation budget.
    OpsBudget { needed: u64, budget: u64 },
    /// More conjugacy classes than the configured cap.
    ClassBudget { classes: u64, budget: u64 },
    /// More candidate degrees than the configured cap.
    CandidateBudget { candidates: u64, budget: u64 },
    /// A sum set grew past the configured cap.
    SigmaBudget { size: u64, budget: u64 },
    /// Scheme/ring combination the enumerator does not support.
    UnsupportedScheme(String),
    /// The supplied element list is not closed under product or inverse.
    ClosureViolation(String),
    /// Element does not belong to the group.
    UnknownElement,
    /// Eigenspace refinement exhausted all class sums without fully
    /// splitting; impossible for genuine conjugacy data.
    SplitIncomplete,
    /// Degree extraction produced a value that cannot be a character degree.
    DegreeRecovery(String),
    /// Matrix exp/log requires characteristic zero or > n.
    CharacteristicTooSmall { p: u64, n: usize },
    /// Input to matrix_log is not unipotent.
    NotUnipotent,
    /// Input to matrix_exp is not nilpotent.
    NotNilpotent,
    /// A coadjoint orbit size is not a perfect square.
    NonSquareOrbitSize(u64),
}

impl Error {
    /// True for resource-limit errors (as opposed to mathematical failures).
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::ElementBudget { .. }
                | Error::OpsBudget { .. }
                | Error::ClassBudget { .. }
                | Error::CandidateBudget { .. }
                | Error::SigmaBudget { .. }
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(n) => write!(f, "{n} is not prime"),
            Error::BadParameter(s) => write!(f, "bad parameter: {s}"),
            Error::DescriptorMismatch => write!(f, "ring descriptor mismatch"),
            Error::DivisionByNonUnit => write!(f, "inversion of a non-unit"),
            Error::NonIntegralWittCoefficient { p, k } => {
                write!(f, "non-integral Witt polynomial coefficient at p={p}, level {k}")
            }
            Error::NotPrimeField => write!(f, "operation requires a prime base field"),
            Error::ElementBudget { predicted, budget } => {
                write!(f, "predicted group order {predicted} exceeds element budget {budget}")
            }
            Error::OpsBudget { needed, budget } => {
                write!(f, "sweep needs {needed} group operations, budget is {budget}")
            }
            Error::ClassBudget { classes, budget } => {
                write!(f, "{classes} conjugacy classes exceed cap {budget}")
            }
            Error::CandidateBudget { candidates, budget } => {
                write!(f, "{candidates} candidate degrees exceed cap {budget}")
            }
            Error::SigmaBudget { size, budget } => {
                write!(f, "sum set reached {size} entries, cap is {budget}")
            }
            Error::UnsupportedScheme(s) => write!(f, "unsupported scheme/ring pair: {s}"),
            Error::ClosureViolation(s) => write!(f, "element list is not a group: {s}"),
            Error::UnknownElement => write!(f, "element is not in the group"),
            Error::SplitIncomplete => {
                write!(f, "class sums failed to split the class space into lines")
            }
            Error::DegreeRecovery(s) => write!(f, "degree recovery failed: {s}"),
            Error::CharacteristicTooSmall { p, n } => {
                write!(f, "characteristic {p} too small for matrix size {n}")
            }
            Error::NotUnipotent => write!(f, "matrix is not unipotent"),
            Error::NotNilpotent => write!(f, "matrix is not nilpotent"),
            Error::NonSquareOrbitSize(s) => write!(f, "orbit size {s} is not a perfect square"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;

/// Resource limits for enumeration and class-algebra work. Defaults are
/// sized so the full verification suite stays at desk scale.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budgets {
    /// Largest group order that may be enumerated.
    pub max_elements: u64,
    /// Largest number of group multiplications a conjugacy sweep may use.
    pub max_group_ops: u64,
    /// Cap on the number of conjugacy classes.
    pub max_classes: u64,
    /// Cap on the candidate-degree list used by the zeta inversion.
    pub max_candidate_degrees: u64,
    /// Cap on the size of a sum set.
    pub max_sigma_size: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            max_elements: 5_000_000,
            max_group_ops: 5_000_000_000,
            max_classes: 4096,
            max_candidate_degrees: 512,
            max_sigma_size: 1_000_000,
        }
    }
}

/// Largest integer r with r^2 <= n.
pub(crate) fn isqrt_u64(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u64;
    // Float gives a seed only; correct it exactly.
    while r > 0 && r.checked_mul(r).map_or(true, |s| s > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).map_or(false, |s| s <= n) {
        r += 1;
    }
    r
}
