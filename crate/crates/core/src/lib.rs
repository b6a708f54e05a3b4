#![no_std]
//! Exact evaluation engine for inhomogeneous quantum groups: tensor data
//! and its validator, the free Hopf algebra on `Λ`, `p`, the dual
//! functionals, and the quantum Lie algebra built from them.

extern crate alloc;

pub mod forms;
pub mod functionals;
pub mod instance;
pub mod lie;
pub mod report;
pub mod scalar;
pub mod tensor;
pub mod words;

pub use forms::FormIndex;
pub use functionals::{
    fold_composites, Atom, EvaluationTables, FunctionalExpr, PairingOutcome, PreMap, Primitive, TablesError,
};
pub use instance::{derive_ztilde, InstanceError, QGroupInstance};
pub use lie::{build_sigma, QuantumLie, Route, SigmaTensor, StructureConstants};
pub use report::{CheckEntry, CheckReport, Status};
pub use scalar::{Approx, Exact, Rational, Scalar};
pub use tensor::{contract, operator_compose, Matrix, Tensor, TensorError};
pub use words::{Element, FreeHopf, Gen, Letter, TensorElement, Word};
