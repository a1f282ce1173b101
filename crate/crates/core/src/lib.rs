//! Exact consistency analysis for systems of ★-Sylvester equations
//! `A_i X - X★ B_i = C_i`.

pub mod cli;
pub mod error;
pub mod exactmat;
pub mod field;
mod linmap;
pub mod model;
mod modular;
pub mod oracle;
pub mod roth;
mod text;
pub mod vecsolve;

pub use error::{Error, Result};
pub use exactmat::{AffineSolution, ExactMatrix, Rref, StarMode};
pub use field::{ArithOp, FieldTag, PrimeModulus, Scalar};
pub use model::{
    gen_consistent, gen_perturbed, Equation, GenParams, ParseOptions, SolutionSet,
    StarSylvesterSystem,
};
pub use vecsolve::{AssembledOperator, CoordMap, Verdict};
