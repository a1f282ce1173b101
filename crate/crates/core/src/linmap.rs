//! Coefficient matrices of linear maps, assembled column by column from the
//! images of coordinate basis elements.
//!
//! When the map is only ℚ-linear (anything involving `X ↦ Xᴴ`), coordinates
//! and outputs are realified: coordinate `t` becomes the pair `(2t, 2t+1)`
//! for the real and imaginary coefficient, and each output entry `z` becomes
//! the rows `(Re z, Im z)`.

use crate::exactmat::ExactMatrix;
use crate::field::{FieldTag, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Coordinates {
    /// Field the map is defined over.
    pub tag: FieldTag,
    pub realified: bool,
    /// Number of entries of the unknown over `tag`.
    pub count: usize,
}

impl Coordinates {
    pub fn new(tag: FieldTag, realified: bool, count: usize) -> Self {
        debug_assert!(!realified || tag == FieldTag::GaussianRationals);
        Coordinates {
            tag,
            realified,
            count,
        }
    }

    /// Field the coefficient matrix lives over.
    pub fn solve_tag(&self) -> FieldTag {
        if self.realified {
            FieldTag::Rationals
        } else {
            self.tag
        }
    }

    pub fn len(&self) -> usize {
        if self.realified {
            2 * self.count
        } else {
            self.count
        }
    }

    /// Entry index and coefficient for solve-field coordinate `col`.
    pub fn basis_element(&self, col: usize) -> (usize, Scalar) {
        if self.realified {
            let coeff = if col.is_multiple_of(2) {
                Scalar::one(self.tag)
            } else {
                Scalar::i()
            };
            (col / 2, coeff)
        } else {
            (col, Scalar::one(self.tag))
        }
    }

    /// Values over `tag` to solve-field coordinates.
    pub fn flatten(&self, values: &[Scalar]) -> Vec<Scalar> {
        if !self.realified {
            return values.to_vec();
        }
        values
            .iter()
            .flat_map(|z| [z.real_part(), z.imag_part()])
            .collect()
    }

    /// Inverse of [`Coordinates::flatten`].
    pub fn unflatten(&self, coords: &[Scalar]) -> Vec<Scalar> {
        if !self.realified {
            return coords.to_vec();
        }
        coords
            .chunks(2)
            .map(|pair| {
                let re = Scalar::from_ratio(self.tag, rational(&pair[0])).expect("embed");
                let im = Scalar::from_ratio(self.tag, rational(&pair[1])).expect("embed");
                &re + &(&im * &Scalar::i())
            })
            .collect()
    }
}

fn rational(s: &Scalar) -> num_rational::BigRational {
    match s {
        Scalar::Rational(r) => r.clone(),
        other => panic!("expected a rational coordinate, got {other}"),
    }
}

/// Coefficient matrix of a map whose image of `coeff · e_entry` is
/// `image(entry, coeff)`, a vector over `coords.tag` of length `out_len`.
pub(crate) fn assemble(
    coords: Coordinates,
    out_len: usize,
    mut image: impl FnMut(usize, &Scalar) -> Vec<Scalar>,
) -> ExactMatrix {
    let columns: Vec<Vec<Scalar>> = (0..coords.len())
        .map(|col| {
            let (entry, coeff) = coords.basis_element(col);
            let img = image(entry, &coeff);
            debug_assert_eq!(img.len(), out_len);
            coords.flatten(&img)
        })
        .collect();
    let rows = if coords.realified {
        2 * out_len
    } else {
        out_len
    };
    ExactMatrix::from_fn(coords.solve_tag(), rows, columns.len(), |r, c| {
        columns[c][r].clone()
    })
}
