//! Dimension and inclusion claims relating `D`, `D₀` and the projection `φ`.
//!
//! `φ̂` and `φ₀` are `φ` restricted to `D` and `D₀`. Checked:
//!
//! - (i) `dim D = dim D₀`, when a congruence witness `S` is supplied; the
//!   twist `(U, W) ↦ (U S★, W S⁻¹)` must map `D` into `D₀` and back.
//! - (ii) `Ker φ̂ = Ker φ₀` as subspaces.
//! - (iii) the truncation `(Ũ, W̃)` of every pair in `D` lies in `D₀`, and
//!   `Im φ̂ ⊆ Im φ₀`.
//! - (iv) `(-I, I) ∈ D₀` with `φ(-I, I) = [I; 0]`.
//!
//! Rank-nullity `dim Ker + dim Im = dim` is checked for both restrictions
//! with kernel and image computed independently.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmat::ExactMatrix;
use crate::field::Scalar;
use crate::model::StarSylvesterSystem;

use super::pairspace::{
    constraint_matrix, contains, coords_of_pair, phi_rows, PairSpaceKind, PairVector,
};
use super::verify_congruence;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimReport {
    pub dim_d: usize,
    pub dim_d0: usize,
    pub dim_ker_phi_d: usize,
    pub dim_im_phi_d: usize,
    pub dim_ker_phi_d0: usize,
    pub dim_im_phi_d0: usize,
    pub rank_nullity_ok: bool,
    /// Only decided when a witness was supplied.
    pub claim_i: Option<bool>,
    pub claim_ii: bool,
    pub claim_iii: bool,
    pub claim_iv: bool,
    /// `[I; 0] ∈ Im φ̂`, i.e. the system is consistent.
    pub target_in_image_d: bool,
    pub twist_ok: Option<bool>,
    /// Dimensions are over ℚ.
    pub realified: bool,
}

impl ClaimReport {
    /// Every decided claim holds.
    pub fn all_hold(&self) -> bool {
        self.rank_nullity_ok
            && self.claim_ii
            && self.claim_iii
            && self.claim_iv
            && self.claim_i.unwrap_or(true)
            && self.twist_ok.unwrap_or(true)
    }
}

/// Restriction data for one space.
struct Restricted {
    constraints: ExactMatrix,
    basis: Vec<Vec<Scalar>>,
    ker: Vec<Vec<Scalar>>,
    image: ExactMatrix,
}

fn columns(tag: crate::field::FieldTag, rows: usize, cols: &[Vec<Scalar>]) -> ExactMatrix {
    ExactMatrix::from_fn(tag, rows, cols.len(), |r, c| cols[c][r].clone())
}

fn restrict(
    sys: &StarSylvesterSystem,
    kind: PairSpaceKind,
    phi: &ExactMatrix,
) -> Result<Restricted> {
    let constraints = constraint_matrix(sys, kind)?;
    let basis = constraints.nullspace();
    let ker = constraints.vstack(phi).nullspace();
    let images: Vec<Vec<Scalar>> = basis.iter().map(|v| phi.mul_vec(v)).collect();
    let image = columns(phi.tag(), phi.rows(), &images);
    Ok(Restricted {
        constraints,
        basis,
        ker,
        image,
    })
}

fn annihilates(constraints: &ExactMatrix, v: &[Scalar]) -> bool {
    constraints.mul_vec(v).iter().all(Scalar::is_zero)
}

/// `span(a) ⊆ span(b)` for column matrices of equal height.
fn column_span_contained(a: &ExactMatrix, b: &ExactMatrix) -> bool {
    b.rank() == b.hstack(a).rank()
}

/// Evaluate every claim. A supplied `s` must be a valid congruence witness.
pub fn check_claims(sys: &StarSylvesterSystem, s: Option<&ExactMatrix>) -> Result<ClaimReport> {
    let witness = match s {
        Some(s) => {
            let w = verify_congruence(sys, s)?;
            if !w.accepted() {
                return Err(Error::InvalidWitness);
            }
            Some(s)
        }
        None => None,
    };

    let phi = phi_rows(sys);
    let d = restrict(sys, PairSpaceKind::D, &phi)?;
    let d0 = restrict(sys, PairSpaceKind::D0, &phi)?;
    let dim_im_d = d.image.rank();
    let dim_im_d0 = d0.image.rank();

    let rank_nullity_ok =
        d.ker.len() + dim_im_d == d.basis.len() && d0.ker.len() + dim_im_d0 == d0.basis.len();

    let claim_ii = d.ker.len() == d0.ker.len()
        && d.ker.iter().all(|v| annihilates(&d0.constraints, v))
        && d0.ker.iter().all(|v| annihilates(&d.constraints, v));

    let truncation_in_d0 = d.basis.iter().all(|v| {
        let pair = super::pairspace::pair_from_coords(sys, v);
        contains(sys, PairSpaceKind::D0, &pair.truncated()).unwrap_or(false)
    });
    let claim_iii = truncation_in_d0 && column_span_contained(&d.image, &d0.image);

    let tag = sys.tag();
    let size = sys.m() + sys.n();
    let target = ExactMatrix::from_fn(tag, size, sys.m(), |r, c| {
        Scalar::from_i64(tag, (r == c) as i64)
    });
    let minus_id = PairVector::minus_identity_identity(sys);
    let claim_iv = contains(sys, PairSpaceKind::D0, &minus_id)? && minus_id.project_phi() == target;

    let pair_target = PairVector::new(
        ExactMatrix::zeros(tag, size, size),
        widen(&target, size),
        sys.m(),
    );
    let target_phi =
        ExactMatrix::column_vector(phi.tag(), phi.mul_vec(&coords_of_pair(sys, &pair_target)));
    let target_in_image_d = column_span_contained(&target_phi, &d.image);

    let (claim_i, twist_ok) = match witness {
        Some(s) => {
            let twist = twist_holds(sys, s, &d.basis, &d0.basis)?;
            (Some(d.basis.len() == d0.basis.len()), Some(twist))
        }
        None => (None, None),
    };

    Ok(ClaimReport {
        dim_d: d.basis.len(),
        dim_d0: d0.basis.len(),
        dim_ker_phi_d: d.ker.len(),
        dim_im_phi_d: dim_im_d,
        dim_ker_phi_d0: d0.ker.len(),
        dim_im_phi_d0: dim_im_d0,
        rank_nullity_ok,
        claim_i,
        claim_ii,
        claim_iii,
        claim_iv,
        target_in_image_d,
        twist_ok,
        realified: sys.mode().is_semilinear(),
    })
}

/// `size×size` matrix whose first columns are `left` and the rest zero.
fn widen(left: &ExactMatrix, size: usize) -> ExactMatrix {
    let tag = left.tag();
    ExactMatrix::from_fn(tag, size, size, |r, c| {
        if c < left.cols() {
            left.get(r, c).clone()
        } else {
            Scalar::zero(tag)
        }
    })
}

/// `(U, W) ↦ (U S★, W S⁻¹)` maps `D` into `D₀`, and the inverse map
/// `(U, W) ↦ (U (S★)⁻¹, W S)` maps `D₀` into `D`.
fn twist_holds(
    sys: &StarSylvesterSystem,
    s: &ExactMatrix,
    d_basis: &[Vec<Scalar>],
    d0_basis: &[Vec<Scalar>],
) -> Result<bool> {
    let s_inv = s.inverse()?.ok_or(Error::InvalidWitness)?;
    let s_star = sys.star(s);
    let s_star_inv = sys.star(&s_inv);
    for v in d_basis {
        let p = super::pairspace::pair_from_coords(sys, v);
        let q = PairVector::new(&p.u * &s_star, &p.w * &s_inv, sys.m());
        if !contains(sys, PairSpaceKind::D0, &q)? {
            return Ok(false);
        }
    }
    for v in d0_basis {
        let p = super::pairspace::pair_from_coords(sys, v);
        let q = PairVector::new(&p.u * &s_star_inv, &p.w * s, sys.m());
        if !contains(sys, PairSpaceKind::D, &q)? {
            return Ok(false);
        }
    }
    Ok(true)
}
