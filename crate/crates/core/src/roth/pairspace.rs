//! Spaces of matrix pairs `(U, W)`, both `(m+n)×(m+n)`, cut out by
//!
//! ```text
//! Γ_i:  N_i U + W M_i = 0
//! Δ_i:  U★ N_i + M_i W★ = 0
//! ```
//!
//! `D` intersects `Γ_i ∩ Δ_i` over all equations; `D₀` is the same with every
//! `C_i = 0`. Constraints are assembled from the full matrix equations; the
//! equivalent eight block equations are available through
//! [`block_residuals`] as an independent evaluation route.
//!
//! Pair coordinates: `vec(U)` then `vec(W)`, both column-major. Under
//! `(ℚ(i), H)` the constraints are only ℚ-linear and everything is realified
//! over ℚ, so dimensions are ℚ-dimensions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmat::{AffineSolution, ExactMatrix};
use crate::field::Scalar;
use crate::linmap::{assemble, Coordinates};
use crate::model::StarSylvesterSystem;

use super::{block_m, block_n};

/// A pair `(U, W)` with the block split `(m, n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairVector {
    pub u: ExactMatrix,
    pub w: ExactMatrix,
    #[serde(skip)]
    m: usize,
}

impl PairVector {
    pub fn new(u: ExactMatrix, w: ExactMatrix, m: usize) -> Self {
        assert!(
            u.is_square() && u.shape() == w.shape() && m <= u.rows(),
            "pair shapes"
        );
        PairVector { u, w, m }
    }

    /// `(-I, I)`.
    pub fn minus_identity_identity(sys: &StarSylvesterSystem) -> Self {
        let id = ExactMatrix::identity(sys.tag(), sys.m() + sys.n());
        PairVector::new(-&id, id, sys.m())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `[[U₁₁, U₁₂], [U₂₁, U₂₂]]` with `U₁₁` of size m×m.
    pub fn u_blocks(&self) -> [[ExactMatrix; 2]; 2] {
        self.u
            .block_extract(self.m, self.m)
            .expect("split inside matrix")
    }

    pub fn w_blocks(&self) -> [[ExactMatrix; 2]; 2] {
        self.w
            .block_extract(self.m, self.m)
            .expect("split inside matrix")
    }

    /// `φ(U, W) = [W₁₁; W₂₁]`, of size (m+n)×m.
    pub fn project_phi(&self) -> ExactMatrix {
        self.w.submatrix(0, self.w.rows(), 0, self.m)
    }

    /// `(Ũ, W̃)`: keep the right block column of `U` and the left block column of `W`.
    pub fn truncated(&self) -> Self {
        let s = self.u.rows();
        let tag = self.u.tag();
        let u = ExactMatrix::from_fn(tag, s, s, |r, c| {
            if c >= self.m {
                self.u.get(r, c).clone()
            } else {
                Scalar::zero(tag)
            }
        });
        let w = ExactMatrix::from_fn(tag, s, s, |r, c| {
            if c < self.m {
                self.w.get(r, c).clone()
            } else {
                Scalar::zero(tag)
            }
        });
        PairVector::new(u, w, self.m)
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.w.is_zero()
    }
}

/// Which pair space to compute. Equation indices are zero-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PairSpaceKind {
    D,
    D0,
    Gamma(usize),
    Delta(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairSpaceBasis {
    pub kind: PairSpaceKind,
    pub basis: Vec<PairVector>,
    pub dim: usize,
    /// Dimensions are over ℚ after realification.
    pub realified: bool,
}

/// Which constraints of which equation to impose.
#[derive(Clone, Copy, Debug)]
struct Selection {
    gamma: bool,
    delta: bool,
    homogeneous: bool,
    only: Option<usize>,
}

impl Selection {
    fn of(kind: PairSpaceKind) -> Self {
        match kind {
            PairSpaceKind::D => Selection {
                gamma: true,
                delta: true,
                homogeneous: false,
                only: None,
            },
            PairSpaceKind::D0 => Selection {
                gamma: true,
                delta: true,
                homogeneous: true,
                only: None,
            },
            PairSpaceKind::Gamma(i) => Selection {
                gamma: true,
                delta: false,
                homogeneous: false,
                only: Some(i),
            },
            PairSpaceKind::Delta(i) => Selection {
                gamma: false,
                delta: true,
                homogeneous: false,
                only: Some(i),
            },
        }
    }
}

/// `(M_i, N_i)` per selected equation.
struct Blocks {
    pairs: Vec<(ExactMatrix, ExactMatrix)>,
    sel: Selection,
}

impl Blocks {
    fn new(sys: &StarSylvesterSystem, sel: Selection) -> Result<Self> {
        let indices: Vec<usize> = match sel.only {
            Some(i) => {
                sys.equation(i)?;
                vec![i]
            }
            None => (0..sys.ell()).collect(),
        };
        let pairs = indices
            .into_iter()
            .map(|i| {
                let nb = block_n(sys, i)?;
                let mb = if sel.homogeneous {
                    nb.clone()
                } else {
                    block_m(sys, i)?
                };
                Ok((mb, nb))
            })
            .collect::<Result<_>>()?;
        Ok(Blocks { pairs, sel })
    }

    fn output_len(&self, size: usize) -> usize {
        let per = (self.sel.gamma as usize + self.sel.delta as usize) * size * size;
        per * self.pairs.len()
    }

    /// Stacked `vec` of every selected constraint left-hand side.
    fn evaluate(&self, sys: &StarSylvesterSystem, u: &ExactMatrix, w: &ExactMatrix) -> Vec<Scalar> {
        let mut out = Vec::new();
        let (us, ws) = if self.sel.delta {
            (Some(sys.star(u)), Some(sys.star(w)))
        } else {
            (None, None)
        };
        for (mb, nb) in &self.pairs {
            if self.sel.gamma {
                out.extend((&(nb * u) + &(w * mb)).vec_col_major());
            }
            if let (Some(us), Some(ws)) = (&us, &ws) {
                out.extend((&(us * nb) + &(mb * ws)).vec_col_major());
            }
        }
        out
    }
}

fn pair_coordinates(sys: &StarSylvesterSystem) -> Coordinates {
    let s = sys.m() + sys.n();
    Coordinates::new(sys.tag(), sys.mode().is_semilinear(), 2 * s * s)
}

fn unit_pair(
    sys: &StarSylvesterSystem,
    entry: usize,
    coeff: &Scalar,
) -> (ExactMatrix, ExactMatrix) {
    let s = sys.m() + sys.n();
    let mut u = ExactMatrix::zeros(sys.tag(), s, s);
    let mut w = ExactMatrix::zeros(sys.tag(), s, s);
    let local = entry % (s * s);
    let target = if entry < s * s { &mut u } else { &mut w };
    target.set(local % s, local / s, coeff.clone());
    (u, w)
}

/// Pair from solve-field coordinates.
pub(crate) fn pair_from_coords(sys: &StarSylvesterSystem, coords: &[Scalar]) -> PairVector {
    let s = sys.m() + sys.n();
    let values = pair_coordinates(sys).unflatten(coords);
    let u = ExactMatrix::from_vec_col_major(sys.tag(), s, s, &values[..s * s]);
    let w = ExactMatrix::from_vec_col_major(sys.tag(), s, s, &values[s * s..]);
    PairVector::new(u, w, sys.m())
}

pub(crate) fn coords_of_pair(sys: &StarSylvesterSystem, pair: &PairVector) -> Vec<Scalar> {
    let mut values = pair.u.vec_col_major();
    values.extend(pair.w.vec_col_major());
    pair_coordinates(sys).flatten(&values)
}

/// Constraint matrix over the solve field.
pub(crate) fn constraint_matrix(
    sys: &StarSylvesterSystem,
    kind: PairSpaceKind,
) -> Result<ExactMatrix> {
    let blocks = Blocks::new(sys, Selection::of(kind))?;
    let coords = pair_coordinates(sys);
    let s = sys.m() + sys.n();
    Ok(assemble(coords, blocks.output_len(s), |entry, coeff| {
        let (u, w) = unit_pair(sys, entry, coeff);
        blocks.evaluate(sys, &u, &w)
    }))
}

/// Rows selecting the coordinates of `φ(U, W)` in column-major order.
pub(crate) fn phi_rows(sys: &StarSylvesterSystem) -> ExactMatrix {
    let coords = pair_coordinates(sys);
    let s = sys.m() + sys.n();
    let phi_len = s * sys.m();
    let per = if coords.realified { 2 } else { 1 };
    let tag = coords.solve_tag();
    // W is stored after U; φ is the first m columns of W, i.e. a contiguous
    // run of vec(W).
    let offset = per * s * s;
    ExactMatrix::from_fn(tag, per * phi_len, coords.len(), |r, c| {
        Scalar::from_i64(tag, (c == offset + r) as i64)
    })
}

/// Membership test by direct evaluation of the matrix constraints.
pub fn contains(sys: &StarSylvesterSystem, kind: PairSpaceKind, pair: &PairVector) -> Result<bool> {
    let blocks = Blocks::new(sys, Selection::of(kind))?;
    Ok(blocks
        .evaluate(sys, &pair.u, &pair.w)
        .iter()
        .all(Scalar::is_zero))
}

/// Basis of the requested pair space (nullspace of its constraints).
pub fn pair_space(sys: &StarSylvesterSystem, kind: PairSpaceKind) -> Result<PairSpaceBasis> {
    let constraints = constraint_matrix(sys, kind)?;
    let basis: Vec<PairVector> = constraints
        .nullspace()
        .iter()
        .map(|v| pair_from_coords(sys, v))
        .collect();
    Ok(PairSpaceBasis {
        kind,
        dim: basis.len(),
        basis,
        realified: sys.mode().is_semilinear(),
    })
}

/// The eight block equations of equation `index` evaluated on a pair;
/// with `homogeneous`, `C_i` is taken as zero. Order: the four `Γ` blocks
///
/// ```text
/// A U₂₁ - W₁₂ B - W₁₁ C,   B U₁₁ + W₂₂ B + W₂₁ C,   A U₂₂ + W₁₁ A,   B U₁₂ - W₂₁ A
/// ```
///
/// then the four `Δ` blocks
///
/// ```text
/// A W₁₂★ - U₂₁★ B - C W₁₁★,   U₁₁★ A + A W₂₂★ - C W₂₁★,   U₂₂★ B + B W₁₁★,   U₁₂★ A - B W₂₁★
/// ```
pub fn block_residuals(
    sys: &StarSylvesterSystem,
    index: usize,
    pair: &PairVector,
    homogeneous: bool,
) -> Result<[ExactMatrix; 8]> {
    let eq = sys.equation(index)?;
    let (a, b) = (&eq.a, &eq.b);
    let c = if homogeneous {
        ExactMatrix::zeros(sys.tag(), sys.m(), sys.m())
    } else {
        eq.c.clone()
    };
    let [[u11, u12], [u21, u22]] = pair.u_blocks();
    let [[w11, w12], [w21, w22]] = pair.w_blocks();
    let st = |x: &ExactMatrix| sys.star(x);
    Ok([
        &(&(a * &u21) - &(&w12 * b)) - &(&w11 * &c),
        &(&(b * &u11) + &(&w22 * b)) + &(&w21 * &c),
        &(a * &u22) + &(&w11 * a),
        &(b * &u12) - &(&w21 * a),
        &(&(a * &st(&w12)) - &(&st(&u21) * b)) - &(&c * &st(&w11)),
        &(&(&st(&u11) * a) + &(a * &st(&w22))) - &(&c * &st(&w21)),
        &(&st(&u22) * b) + &(b * &st(&w11)),
        &(&st(&u12) * a) - &(b * &st(&w21)),
    ])
}

/// Membership in `D` (or `D₀`) through the block equations.
pub fn satisfies_block_equations(
    sys: &StarSylvesterSystem,
    pair: &PairVector,
    homogeneous: bool,
) -> Result<bool> {
    for i in 0..sys.ell() {
        if !block_residuals(sys, i, pair, homogeneous)?
            .iter()
            .all(ExactMatrix::is_zero)
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The pair found by [`extract_solution`] and the solution built from it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Extraction {
    pub pair: PairVector,
    pub x: ExactMatrix,
}

/// Find `(U, W) ∈ D` with `W₁₁ = I`, `W₂₁ = 0` and return it with
/// `X = ½(U₂₁ + W₁₂★)`. `None` exactly when no such pair exists.
pub fn extract_pair(sys: &StarSylvesterSystem) -> Result<Option<Extraction>> {
    if sys.tag().is_char2() {
        return Err(Error::Char2Unsupported);
    }
    let constraints = constraint_matrix(sys, PairSpaceKind::D)?;
    let selector = phi_rows(sys);
    let system = constraints.vstack(&selector);
    let s = sys.m() + sys.n();
    let target = ExactMatrix::from_fn(sys.tag(), s, sys.m(), |r, c| {
        Scalar::from_i64(sys.tag(), (r == c) as i64)
    });
    let mut rhs = vec![Scalar::zero(system.tag()); constraints.rows()];
    rhs.extend(pair_coordinates(sys).flatten(&target.vec_col_major()));
    let particular = match system.solve_affine(&rhs)? {
        AffineSolution::Inconsistent { .. } => return Ok(None),
        AffineSolution::Consistent { particular, .. } => particular,
    };
    let pair = pair_from_coords(sys, &particular);
    let [[_, _], [u21, _]] = pair.u_blocks();
    let [[_, w12], [_, _]] = pair.w_blocks();
    let half = Scalar::from_i64(sys.tag(), 2).inv()?;
    let x = (&u21 + &sys.star(&w12)).scale(&half);
    Ok(Some(Extraction { pair, x }))
}

/// Solution of the system extracted from the pair space, without consulting
/// any other solver.
pub fn extract_solution(sys: &StarSylvesterSystem) -> Result<Option<ExactMatrix>> {
    Ok(extract_pair(sys)?.map(|e| e.x))
}
