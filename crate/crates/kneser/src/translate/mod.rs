//! Propositional translations: the coloring statement as a formula and as
//! DIMACS CNF, the antipodal-map statement likewise, the descent-step gadget
//! formulas in both proof-system flavors, divide-and-conquer counting
//! formulas, a small internal SAT search, and symbol-count reporting.

pub mod cnf;
pub mod formula;
pub mod gadgets;
pub mod kneser_enc;
pub mod sat;
pub mod sizes;
pub mod threshold;
pub mod tucker_enc;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::coloring::ColoringError;
use crate::combinat::CoreError;
use crate::tucker::TuckerError;

pub use cnf::Cnf;
pub use formula::{Arena, Assignment, Atom, Definitions, FormulaId};
pub use gadgets::{
    discard_color_formula, discard_node_formula, pprime_formula, renum_formulas,
    star_class_formula, star_formula, Round,
};
pub use kneser_enc::{
    assignment_from_coloring, decode_coloring, kneser_cnf, kneser_cnf_with, kneser_formula,
    kneser_formula_size, kneser_formula_size_with, kneser_formula_with, kneser_var_id,
};
pub use sat::{solve, SatOutcome};
pub use sizes::{fit_exponent, size_report, SizeReport, SizeRow};
pub use threshold::{threshold_formula, ThresholdMode};
pub use tucker_enc::{assignment_from_map, label_list, tucker_cnf, tucker_formula, tucker_var_id};

/// Which proof-system simulation a gadget family targets: the
/// extended-Frege round discards one class per step and composes p' by
/// index shifting; the Frege round discards a batch per step through
/// explicit renumbering formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Ef,
    Frege,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::Ef => write!(f, "ef"),
            Variant::Frege => write!(f, "frege"),
        }
    }
}

impl FromStr for Variant {
    type Err = TranslateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ef" => Ok(Variant::Ef),
            "frege" => Ok(Variant::Frege),
            _ => Err(TranslateError::UnknownVariant(s.to_string())),
        }
    }
}

#[derive(Debug, Error)]
pub enum TranslateError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Tucker(#[from] TuckerError),
    #[error("threshold {t} out of range for {len} inputs")]
    BadThreshold { t: u64, len: u64 },
    #[error("evaluation reached atom {0} which is neither assigned nor defined")]
    UnassignedAtom(String),
    #[error("clause {index} is empty")]
    EmptyClause { index: usize },
    #[error("clause {index} holds literal {lit} outside the variable range")]
    LiteralOutOfRange { index: usize, lit: i32 },
    #[error("name table covers {got} variables, instance has {expected}")]
    NameTableSize { expected: u32, got: usize },
    #[error("instance needs more than u32::MAX variables")]
    TooManyVariables,
    #[error("model covers {got} variables, instance has {expected}")]
    ModelLength { expected: u64, got: u64 },
    #[error("model assigns no color to the vertex of rank {rank}")]
    UncoloredVertex { rank: u64 },
    #[error("instance (n={n}, k={k}, m={m}) cannot host a descent round: needs {need}")]
    RoundParams { n: u32, k: u32, m: u32, need: &'static str },
    #[error("{what} {value} out of range (max {max})")]
    BadIndex { what: &'static str, value: u32, max: u32 },
    #[error("p' family not materialized; call build_pprime first")]
    PPrimeNotBuilt,
    #[error("size exceeds u128 range")]
    SizeOverflow,
    #[error("exponent fit needs at least two distinct instance sizes")]
    FitUnderdetermined,
    #[error("unknown variant {0:?}; expected \"ef\" or \"frege\"")]
    UnknownVariant(String),
}
