//! Direct consistency decision by vectorizing the whole system into one
//! exact linear solve.
//!
//! The unknown `X` (n×m) is coordinatized column-major: entry `(j, k)` is
//! coordinate `k·n + j`. Row blocks follow the equations, each block being
//! `vec(A_i X - X★ B_i)` column-major. Under `(ℚ(i), H)` the map is only
//! ℚ-linear and the whole system is realified over ℚ (see [`CoordMap`]).

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmat::{AffineSolution, ExactMatrix};
use crate::field::Scalar;
use crate::linmap::{assemble as assemble_columns, Coordinates};
use crate::model::{SolutionSet, StarSylvesterSystem};

/// How solve coordinates map to entries of `X`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CoordMap {
    /// Coordinate `k·n + j` is `X[j][k]`.
    Direct { n: usize, m: usize },
    /// Coordinates `2t`, `2t+1` are the real and imaginary parts of entry `t`
    /// of the direct numbering.
    Realified { n: usize, m: usize },
}

/// Coefficient matrix and right-hand side of the vectorized system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssembledOperator {
    pub matrix: ExactMatrix,
    pub rhs: Vec<Scalar>,
    pub coord_map: CoordMap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Consistent(SolutionSet),
    Inconsistent { rank: usize, augmented_rank: usize },
}

impl Verdict {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Verdict::Consistent(_))
    }

    pub fn solution_set(&self) -> Option<&SolutionSet> {
        match self {
            Verdict::Consistent(s) => Some(s),
            Verdict::Inconsistent { .. } => None,
        }
    }
}

fn coordinates(sys: &StarSylvesterSystem) -> Coordinates {
    Coordinates::new(sys.tag(), sys.mode().is_semilinear(), sys.n() * sys.m())
}

impl CoordMap {
    fn of(sys: &StarSylvesterSystem) -> Self {
        let (n, m) = (sys.n(), sys.m());
        if sys.mode().is_semilinear() {
            CoordMap::Realified { n, m }
        } else {
            CoordMap::Direct { n, m }
        }
    }
}

/// Coordinates of `X` in the operator's numbering.
pub fn coords_of(sys: &StarSylvesterSystem, x: &ExactMatrix) -> Vec<Scalar> {
    coordinates(sys).flatten(&x.vec_col_major())
}

/// `X` from solve coordinates.
pub fn matrix_from_coords(sys: &StarSylvesterSystem, coords: &[Scalar]) -> ExactMatrix {
    let values = coordinates(sys).unflatten(coords);
    ExactMatrix::from_vec_col_major(sys.tag(), sys.n(), sys.m(), &values)
}

fn stacked(blocks: &[ExactMatrix]) -> Vec<Scalar> {
    blocks.iter().flat_map(ExactMatrix::vec_col_major).collect()
}

/// Build the coefficient matrix from the images of the coordinate basis
/// matrices `E_jk` (and `i·E_jk` when realified).
pub fn assemble(sys: &StarSylvesterSystem) -> AssembledOperator {
    let coords = coordinates(sys);
    let (n, m, tag) = (sys.n(), sys.m(), sys.tag());
    let out_len = sys.ell() * m * m;
    let matrix = assemble_columns(coords, out_len, |entry, coeff| {
        let mut e = ExactMatrix::zeros(tag, n, m);
        e.set(entry % n, entry / n, coeff.clone());
        stacked(&sys.apply(&e).expect("basis matrix has the unknown's shape"))
    });
    let rhs_values: Vec<Scalar> = sys
        .equations()
        .iter()
        .flat_map(|eq| eq.c.vec_col_major())
        .collect();
    AssembledOperator {
        matrix,
        rhs: coords.flatten(&rhs_values),
        coord_map: CoordMap::of(sys),
    }
}

/// Decide consistency and return the full solution set.
pub fn solve(sys: &StarSylvesterSystem) -> Verdict {
    let op = assemble(sys);
    match op
        .matrix
        .solve_affine(&op.rhs)
        .expect("rhs length matches operator")
    {
        AffineSolution::Inconsistent {
            rank,
            augmented_rank,
        } => Verdict::Inconsistent {
            rank,
            augmented_rank,
        },
        AffineSolution::Consistent {
            particular,
            nullspace,
        } => {
            let homogeneous_basis: Vec<ExactMatrix> = nullspace
                .iter()
                .map(|v| matrix_from_coords(sys, v))
                .collect();
            Verdict::Consistent(SolutionSet {
                particular: matrix_from_coords(sys, &particular),
                dim: homogeneous_basis.len(),
                homogeneous_basis,
            })
        }
    }
}

/// Number of solutions of a consistent system over GF(p): `p^dim`.
pub fn solution_count_gf(sys: &StarSylvesterSystem, solutions: &SolutionSet) -> Result<BigUint> {
    let p = sys.tag().modulus().ok_or(Error::NotPrimeField)?;
    Ok(BigUint::from(p.get()).pow(solutions.dim as u32))
}
