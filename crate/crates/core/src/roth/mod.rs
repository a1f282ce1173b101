//! Roth-type congruence characterization of consistency.
//!
//! A system `A_i X - X★ B_i = C_i` is consistent exactly when one invertible
//! `S` satisfies `S M_i S★ = N_i` for every `i`, where
//!
//! ```text
//! M_i = [ C_i  -A_i ]      N_i = [ 0    -A_i ]
//!       [ B_i   0   ]            [ B_i   0   ]
//! ```
//!
//! This module builds such an `S` from a solution, verifies candidate
//! witnesses, and mechanizes the converse: the pair spaces `D` and `D₀`
//! ([`pairspace`]), the projection `φ(U, W) = [W₁₁; W₂₁]`, extraction of a
//! solution from a pair with `φ(U, W) = [I; 0]`, and the dimension and
//! inclusion claims linking `D` to `D₀` ([`claims`]).

pub mod claims;
pub mod pairspace;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmat::ExactMatrix;
use crate::model::StarSylvesterSystem;

pub use claims::{check_claims, ClaimReport};
pub use pairspace::{extract_solution, pair_space, PairSpaceBasis, PairSpaceKind, PairVector};

/// `M_i = [[C_i, -A_i], [B_i, 0]]` (zero-based `index`).
pub fn block_m(sys: &StarSylvesterSystem, index: usize) -> Result<ExactMatrix> {
    let eq = sys.equation(index)?;
    let zero = ExactMatrix::zeros(sys.tag(), sys.n(), sys.n());
    ExactMatrix::block_compose([[&eq.c, &-&eq.a], [&eq.b, &zero]])
}

/// `N_i = [[0, -A_i], [B_i, 0]]` (zero-based `index`).
pub fn block_n(sys: &StarSylvesterSystem, index: usize) -> Result<ExactMatrix> {
    let eq = sys.equation(index)?;
    let top = ExactMatrix::zeros(sys.tag(), sys.m(), sys.m());
    let zero = ExactMatrix::zeros(sys.tag(), sys.n(), sys.n());
    ExactMatrix::block_compose([[&top, &-&eq.a], [&eq.b, &zero]])
}

/// A candidate `S` with the outcome of every check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CongruenceWitness {
    pub s: ExactMatrix,
    pub invertible: bool,
    pub per_equation_ok: Vec<bool>,
}

impl CongruenceWitness {
    pub fn accepted(&self) -> bool {
        self.invertible && self.per_equation_ok.iter().all(|&ok| ok)
    }
}

/// Check `S M_i S★ = N_i` for all `i`, and invertibility of `S`.
pub fn verify_congruence(sys: &StarSylvesterSystem, s: &ExactMatrix) -> Result<CongruenceWitness> {
    let size = sys.m() + sys.n();
    if s.shape() != (size, size) || s.tag() != sys.tag() {
        return Err(Error::ShapeMismatch(format!(
            "S must be {size}x{size} over {}, got {}x{} over {}",
            sys.tag(),
            s.rows(),
            s.cols(),
            s.tag()
        )));
    }
    let invertible = s.inverse()?.is_some();
    let s_star = sys.star(s);
    let per_equation_ok = (0..sys.ell())
        .map(|i| Ok(&(s * &block_m(sys, i)?) * &s_star == block_n(sys, i)?))
        .collect::<Result<Vec<bool>>>()?;
    Ok(CongruenceWitness {
        s: s.clone(),
        invertible,
        per_equation_ok,
    })
}

/// `S = [[I_m, X★], [0, I_n]]` for a solution `X`.
pub fn witness_matrix(sys: &StarSylvesterSystem, x: &ExactMatrix) -> ExactMatrix {
    let tag = sys.tag();
    let (m, n) = (sys.m(), sys.n());
    ExactMatrix::block_compose([
        [&ExactMatrix::identity(tag, m), &sys.star(x)],
        [
            &ExactMatrix::zeros(tag, n, m),
            &ExactMatrix::identity(tag, n),
        ],
    ])
    .expect("conformal witness blocks")
}

/// Build and verify the witness of a solution.
pub fn witness_from_solution(
    sys: &StarSylvesterSystem,
    x: &ExactMatrix,
) -> Result<CongruenceWitness> {
    if !sys.is_solution(x)? {
        return Err(Error::NotASolution);
    }
    verify_congruence(sys, &witness_matrix(sys, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmat::StarMode;
    use crate::field::{FieldTag, Scalar};
    use crate::model::{gen_consistent, GenParams, ParseOptions};

    const FIXTURE: &str = "field Q\nstar T\ndims 1 1 1\nA 1\n3\nB 1\n1\nC 1\n4\n";

    fn q(rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_i64_rows(FieldTag::Rationals, rows)
    }

    #[test]
    fn fixture_blocks() {
        let sys = StarSylvesterSystem::parse(FIXTURE, ParseOptions::default()).unwrap();
        assert_eq!(block_m(&sys, 0).unwrap(), q(&[&[4, -3], &[1, 0]]));
        assert_eq!(block_n(&sys, 0).unwrap(), q(&[&[0, -3], &[1, 0]]));
        assert_eq!(
            block_m(&sys.homogeneous(), 0).unwrap(),
            block_n(&sys, 0).unwrap()
        );
        assert!(matches!(
            block_m(&sys, 1),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn fixture_witness_by_hand() {
        let sys = StarSylvesterSystem::parse(FIXTURE, ParseOptions::default()).unwrap();
        let w = witness_from_solution(&sys, &q(&[&[2]])).unwrap();
        let s = q(&[&[1, 2], &[0, 1]]);
        assert_eq!(w.s, s);
        assert!(w.accepted());
        let sm = &s * &block_m(&sys, 0).unwrap();
        assert_eq!(sm, q(&[&[6, -3], &[1, 0]]));
        assert_eq!(&sm * &s.transpose(), q(&[&[0, -3], &[1, 0]]));
        assert_eq!(
            witness_from_solution(&sys, &q(&[&[1]])),
            Err(Error::NotASolution)
        );
    }

    #[test]
    fn identity_is_not_a_witness_when_c_is_nonzero() {
        let sys = StarSylvesterSystem::parse(FIXTURE, ParseOptions::default()).unwrap();
        let w = verify_congruence(&sys, &ExactMatrix::identity(FieldTag::Rationals, 2)).unwrap();
        assert!(w.invertible);
        assert_eq!(w.per_equation_ok, vec![false]);
        let w0 = verify_congruence(
            &sys.homogeneous(),
            &ExactMatrix::identity(FieldTag::Rationals, 2),
        )
        .unwrap();
        assert!(w0.accepted());
        assert!(matches!(
            verify_congruence(&sys, &ExactMatrix::identity(FieldTag::Rationals, 3)),
            Err(Error::ShapeMismatch(_))
        ));
        let singular =
            verify_congruence(&sys, &ExactMatrix::zeros(FieldTag::Rationals, 2, 2)).unwrap();
        assert!(!singular.invertible && !singular.accepted());
    }

    #[test]
    fn random_candidates_fail_and_agree_with_direct_multiplication() {
        use rand::{RngExt, SeedableRng};
        let sys = StarSylvesterSystem::parse(FIXTURE, ParseOptions::default()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let s = ExactMatrix::from_fn(FieldTag::Rationals, 2, 2, |_, _| {
                Scalar::from_i64(FieldTag::Rationals, rng.random_range(-5..=5))
            });
            let w = verify_congruence(&sys, &s).unwrap();
            // Direct 2x2 expansion of S·M·Sᵀ with M = [[4, -3], [1, 0]].
            let e = |r: usize, c: usize| s.get(r, c).clone();
            let m = [[4i64, -3], [1, 0]];
            let mut ok = true;
            for r in 0..2 {
                for c in 0..2 {
                    let mut acc = Scalar::zero(FieldTag::Rationals);
                    for (k, row) in m.iter().enumerate() {
                        for (l, &v) in row.iter().enumerate() {
                            acc = acc
                                + &(&e(r, k) * &Scalar::from_i64(FieldTag::Rationals, v))
                                    * &e(c, l);
                        }
                    }
                    let n = [[0i64, -3], [1, 0]][r][c];
                    ok &= acc == Scalar::from_i64(FieldTag::Rationals, n);
                }
            }
            assert_eq!(w.per_equation_ok[0], ok, "S = {s}");
        }
    }

    #[test]
    fn planted_witness_shape() {
        for (tag, mode) in [
            (FieldTag::Rationals, StarMode::Transpose),
            (FieldTag::GaussianRationals, StarMode::ConjugateTranspose),
            (FieldTag::prime(3).unwrap(), StarMode::Transpose),
        ] {
            let (sys, x) = gen_consistent(&GenParams::new(tag, mode, 2, 3, 2, 9)).unwrap();
            let w = witness_from_solution(&sys, &x).unwrap();
            assert!(w.accepted());
            let inv = ExactMatrix::block_compose([
                [&ExactMatrix::identity(tag, 2), &-&sys.star(&x)],
                [
                    &ExactMatrix::zeros(tag, 3, 2),
                    &ExactMatrix::identity(tag, 3),
                ],
            ])
            .unwrap();
            assert_eq!(w.s.inverse().unwrap(), Some(inv));
        }
        let (sys, _) = gen_consistent(&GenParams::new(
            FieldTag::Rationals,
            StarMode::Transpose,
            2,
            2,
            1,
            3,
        ))
        .unwrap();
        let hom = sys.homogeneous();
        let w =
            witness_from_solution(&hom, &ExactMatrix::zeros(FieldTag::Rationals, 2, 2)).unwrap();
        assert_eq!(w.s, ExactMatrix::identity(FieldTag::Rationals, 4));
    }
}
