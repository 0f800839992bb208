use thiserror::Error;

use crate::ring::ValidationReport;

/// Tables that are not even well-formed operation tables.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("carrier is empty")]
    EmptyCarrier,
    #[error("multiplier set is empty")]
    EmptyMultiplierSet,
    #[error("{table} table has {rows} rows, expected {n}")]
    RowCount {
        table: &'static str,
        rows: usize,
        n: usize,
    },
    #[error("{table} row {row} has {len} entries, expected {n}")]
    RowLength {
        table: &'static str,
        row: usize,
        len: usize,
        n: usize,
    },
    #[error("entry ({a},{b}) references {value}, outside carrier of size {n}")]
    OutOfRange {
        a: usize,
        b: usize,
        value: usize,
        n: usize,
    },
    #[error("hyperproduct {a}∘{b} is empty")]
    EmptyProduct { a: usize, b: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HyperringError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("hyperring laws violated: {}", describe(.0))]
    Axioms(ValidationReport),
}

fn describe(report: &ValidationReport) -> String {
    report
        .violations
        .iter()
        .map(|v| format!("{} at {:?}", v.axiom, v.witness))
        .collect::<Vec<_>>()
        .join("; ")
}

/// Misuse of an operation: bad arguments rather than bad algebra.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UsageError {
    #[error("hyperproduct of an empty sequence")]
    EmptyProduct,
    #[error("{0} is not an element of the carrier")]
    NotInCarrier(i64),
    #[error("expected a proper hyperideal, got the whole carrier")]
    NotProper,
    #[error("{0} is not a hyperideal")]
    NotHyperideal(String),
    #[error("need u > v ≥ 1, got u={u}, v={v}")]
    BadParams { u: usize, v: usize },
    #[error("empty generator list")]
    EmptyGenerators,
    #[error("generator must be positive, got {0}")]
    BadGenerator(i64),
    #[error("window must be at least 2, got {0}")]
    BadWindow(i64),
    #[error("multiplier set needs at least two distinct nonzero integers")]
    BadMultipliers,
}

/// Failure to build a derived hyperring.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstructionError {
    #[error(transparent)]
    Usage(#[from] UsageError),
    #[error("matrix hyperring would have {size} elements, cap is {cap}")]
    TooLarge { size: u128, cap: usize },
    #[error("hyperproduct on classes depends on representatives: {0}")]
    NotWellDefined(String),
    #[error("relation is not transitive: {0}")]
    NotTransitive(String),
    #[error("sum of classes is not single-valued: {0}")]
    MultiValuedSum(String),
    #[error("{0} is not a multiplicatively closed subset containing an identity")]
    NotMultiplicativelyClosed(String),
    #[error("ring has no identity")]
    NoIdentity,
    #[error("constructed tables violate the hyperring laws: {0}")]
    Invalid(Box<HyperringError>),
}
