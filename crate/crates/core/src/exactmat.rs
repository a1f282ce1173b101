//! Dense exact matrices and the elimination kernels built on them.
//!
//! Kernels run Gauss-Jordan elimination over the matrix field, except that
//! larger rational matrices are reduced modulo primes and lifted. Zero
//! entries are skipped in both the elimination and the products, which
//! matters because the operators assembled elsewhere in the crate are very
//! sparse.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldTag, Scalar};
use crate::text::{parse_count, read_matrix_body, LineReader};

const MULTIMODULAR_MIN_ENTRIES: usize = 400;

/// The two readings of `★`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum StarMode {
    /// `Mᵀ`
    #[serde(rename = "T")]
    Transpose,
    /// `Mᴴ`, only over ℚ(i).
    #[serde(rename = "H")]
    ConjugateTranspose,
}

impl StarMode {
    /// Conjugate transpose over a field with trivial involution would silently
    /// alias the transpose, so it is rejected.
    pub fn validate(self, tag: FieldTag) -> Result<()> {
        match self {
            StarMode::ConjugateTranspose if !tag.has_conjugation() => {
                Err(Error::InvalidStarMode(tag.to_string()))
            }
            _ => Ok(()),
        }
    }

    /// Whether the map `X ↦ X★` is semilinear rather than linear.
    pub fn is_semilinear(self) -> bool {
        self == StarMode::ConjugateTranspose
    }
}

impl fmt::Display for StarMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StarMode::Transpose => "T",
            StarMode::ConjugateTranspose => "H",
        })
    }
}

/// Dense row-major matrix over a single field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    tag: FieldTag,
    data: Vec<Scalar>,
}

/// Result of [`ExactMatrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: ExactMatrix,
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
}

/// Outcome of [`ExactMatrix::solve_affine`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AffineSolution {
    Consistent {
        particular: Vec<Scalar>,
        nullspace: Vec<Vec<Scalar>>,
    },
    /// `augmented_rank == rank + 1` always holds.
    Inconsistent { rank: usize, augmented_rank: usize },
}

impl AffineSolution {
    pub fn is_consistent(&self) -> bool {
        matches!(self, AffineSolution::Consistent { .. })
    }
}

impl ExactMatrix {
    /// Panics if `data.len() != rows * cols` or an entry is from another field.
    pub fn from_data(tag: FieldTag, rows: usize, cols: usize, data: Vec<Scalar>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        debug_assert!(data.iter().all(|s| s.tag() == tag), "matrix entry field");
        ExactMatrix {
            rows,
            cols,
            tag,
            data,
        }
    }

    pub fn zeros(tag: FieldTag, rows: usize, cols: usize) -> Self {
        Self::from_data(tag, rows, cols, vec![Scalar::zero(tag); rows * cols])
    }

    pub fn identity(tag: FieldTag, n: usize) -> Self {
        Self::from_fn(tag, n, n, |r, c| Scalar::from_i64(tag, (r == c) as i64))
    }

    pub fn from_fn(
        tag: FieldTag,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self::from_data(tag, rows, cols, data)
    }

    /// Checked construction from nested rows.
    pub fn from_rows(tag: FieldTag, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::ShapeMismatch(format!(
                    "ragged rows: expected {c} entries, got {}",
                    row.len()
                )));
            }
            for s in row {
                if s.tag() != tag {
                    return Err(Error::FieldMismatch {
                        left: tag.to_string(),
                        right: s.tag().to_string(),
                    });
                }
                data.push(s);
            }
        }
        Ok(Self::from_data(tag, r, c, data))
    }

    /// Small integer matrices, mostly for tests and fixtures.
    pub fn from_i64_rows(tag: FieldTag, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_fn(tag, rows.len(), cols, |r, c| {
            Scalar::from_i64(tag, rows[r][c])
        })
    }

    pub fn column_vector(tag: FieldTag, v: Vec<Scalar>) -> Self {
        let n = v.len();
        Self::from_data(tag, n, 1, v)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn tag(&self) -> FieldTag {
        self.tag
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r}, {c}) out of bounds"
        );
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r}, {c}) out of bounds"
        );
        assert_eq!(v.tag(), self.tag, "matrix entry field");
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.tag, self.cols, self.rows, |r, c| {
            self.get(c, r).clone()
        })
    }

    pub fn conj(&self) -> Self {
        Self::from_data(
            self.tag,
            self.rows,
            self.cols,
            self.data.iter().map(Scalar::conj).collect(),
        )
    }

    /// `M★`: transpose, conjugated entrywise for [`StarMode::ConjugateTranspose`].
    pub fn star(&self, mode: StarMode) -> Result<Self> {
        mode.validate(self.tag)?;
        Ok(match mode {
            StarMode::Transpose => self.transpose(),
            StarMode::ConjugateTranspose => {
                Self::from_fn(self.tag, self.cols, self.rows, |r, c| self.get(c, r).conj())
            }
        })
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Self::from_data(
            self.tag,
            self.rows,
            self.cols,
            self.data.iter().map(|x| x * s).collect(),
        )
    }

    /// Entries stacked column by column.
    pub fn vec_col_major(&self) -> Vec<Scalar> {
        (0..self.cols)
            .flat_map(|c| (0..self.rows).map(move |r| (r, c)))
            .map(|(r, c)| self.get(r, c).clone())
            .collect()
    }

    pub fn from_vec_col_major(tag: FieldTag, rows: usize, cols: usize, v: &[Scalar]) -> Self {
        assert_eq!(v.len(), rows * cols, "vector length");
        Self::from_fn(tag, rows, cols, |r, c| v[c * rows + r].clone())
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|r| {
                let mut acc = Scalar::zero(self.tag);
                for (a, x) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc + a * x;
                    }
                }
                acc
            })
            .collect()
    }

    fn to_row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    fn from_row_vecs(tag: FieldTag, cols: usize, rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        Self::from_data(tag, r, cols, rows.into_iter().flatten().collect())
    }

    /// Reduced row echelon form with its rank and pivot columns.
    pub fn rref(&self) -> Rref {
        if let Some(done) = self.rref_multimodular() {
            return done;
        }
        self.rref_plain()
    }

    fn rref_plain(&self) -> Rref {
        let mut rows = self.to_row_vecs();
        let pivot_cols = gauss_jordan(&mut rows, self.cols);
        Rref {
            reduced: Self::from_row_vecs(self.tag, self.cols, rows),
            rank: pivot_cols.len(),
            pivot_cols,
        }
    }

    /// Rational matrices past a small size go through CRT lifting, where
    /// plain elimination suffers from coefficient growth.
    fn rref_multimodular(&self) -> Option<Rref> {
        if self.tag != FieldTag::Rationals || self.rows * self.cols < MULTIMODULAR_MIN_ENTRIES {
            return None;
        }
        let data: Vec<_> = self
            .data
            .iter()
            .map(|s| match s {
                Scalar::Rational(r) => r.clone(),
                _ => unreachable!("rational matrix"),
            })
            .collect();
        let (nonzero, pivot_cols) = crate::modular::rref_rational(self.rows, self.cols, &data)?;
        let mut rows: Vec<Vec<Scalar>> = nonzero
            .into_iter()
            .map(|row| row.into_iter().map(Scalar::Rational).collect())
            .collect();
        rows.resize(self.rows, vec![Scalar::zero(self.tag); self.cols]);
        Some(Rref {
            reduced: Self::from_row_vecs(self.tag, self.cols, rows),
            rank: pivot_cols.len(),
            pivot_cols,
        })
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Kernel basis from the free columns of the RREF.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let rref = self.rref();
        free_column_basis(&rref.reduced, &rref.pivot_cols, self.cols)
    }

    /// Solve `M·x = b`. Inconsistency is a value, not an error.
    pub fn solve_affine(&self, b: &[Scalar]) -> Result<AffineSolution> {
        if b.len() != self.rows {
            return Err(Error::ShapeMismatch(format!(
                "right-hand side has length {}, matrix has {} rows",
                b.len(),
                self.rows
            )));
        }
        let n = self.cols;
        let augmented = self.hstack(&Self::column_vector(self.tag, b.to_vec()));
        let Rref {
            reduced,
            pivot_cols: pivots,
            ..
        } = augmented.rref();
        if pivots.last() == Some(&n) {
            return Ok(AffineSolution::Inconsistent {
                rank: pivots.len() - 1,
                augmented_rank: pivots.len(),
            });
        }
        let mut particular = vec![Scalar::zero(self.tag); n];
        for (k, &pc) in pivots.iter().enumerate() {
            particular[pc] = reduced.get(k, n).clone();
        }
        let nullspace = free_column_basis(&reduced, &pivots, n);
        Ok(AffineSolution::Consistent {
            particular,
            nullspace,
        })
    }

    /// `None` when singular.
    pub fn inverse(&self) -> Result<Option<Self>> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let Rref {
            reduced,
            pivot_cols,
            ..
        } = self.hstack(&Self::identity(self.tag, n)).rref();
        if pivot_cols.iter().filter(|&&p| p < n).count() < n {
            return Ok(None);
        }
        Ok(Some(reduced.submatrix(0, n, n, 2 * n)))
    }

    /// `[[tl, tr], [bl, br]]`.
    pub fn block_compose(blocks: [[&ExactMatrix; 2]; 2]) -> Result<Self> {
        let [[tl, tr], [bl, br]] = blocks;
        let tag = tl.tag;
        if [tr, bl, br].iter().any(|b| b.tag != tag) {
            return Err(Error::NonConformalBlocks(
                "blocks over different fields".into(),
            ));
        }
        if tl.rows != tr.rows || bl.rows != br.rows || tl.cols != bl.cols || tr.cols != br.cols {
            return Err(Error::NonConformalBlocks(format!(
                "{}x{} {}x{} / {}x{} {}x{}",
                tl.rows, tl.cols, tr.rows, tr.cols, bl.rows, bl.cols, br.rows, br.cols
            )));
        }
        let (top, left) = (tl.rows, tl.cols);
        Ok(Self::from_fn(tag, top + bl.rows, left + tr.cols, |r, c| {
            match (r < top, c < left) {
                (true, true) => tl.get(r, c),
                (true, false) => tr.get(r, c - left),
                (false, true) => bl.get(r - top, c),
                (false, false) => br.get(r - top, c - left),
            }
            .clone()
        }))
    }

    /// Split at `row_split`, `col_split` into `[[tl, tr], [bl, br]]`.
    pub fn block_extract(
        &self,
        row_split: usize,
        col_split: usize,
    ) -> Result<[[ExactMatrix; 2]; 2]> {
        if row_split > self.rows || col_split > self.cols {
            return Err(Error::NonConformalBlocks(format!(
                "split ({row_split}, {col_split}) outside {}x{}",
                self.rows, self.cols
            )));
        }
        Ok([
            [
                self.submatrix(0, row_split, 0, col_split),
                self.submatrix(0, row_split, col_split, self.cols),
            ],
            [
                self.submatrix(row_split, self.rows, 0, col_split),
                self.submatrix(row_split, self.rows, col_split, self.cols),
            ],
        ])
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        Self::from_fn(self.tag, r1 - r0, c1 - c0, |r, c| {
            self.get(r0 + r, c0 + c).clone()
        })
    }

    pub fn vstack(&self, other: &ExactMatrix) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column count");
        assert_eq!(self.tag, other.tag, "vstack field");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Self::from_data(self.tag, self.rows + other.rows, self.cols, data)
    }

    pub fn hstack(&self, other: &ExactMatrix) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row count");
        assert_eq!(self.tag, other.tag, "hstack field");
        Self::from_fn(self.tag, self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                other.get(r, c - self.cols).clone()
            }
        })
    }

    /// Checked product.
    pub fn try_mul(&self, rhs: &ExactMatrix) -> Result<Self> {
        if self.cols != rhs.rows || self.tag != rhs.tag {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} ({}) by {}x{} ({})",
                self.rows, self.cols, self.tag, rhs.rows, rhs.cols, rhs.tag
            )));
        }
        let mut out = vec![Scalar::zero(self.tag); self.rows * rhs.cols];
        for r in 0..self.rows {
            for (k, a) in self.row(r).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (c, b) in rhs.row(k).iter().enumerate() {
                    if !b.is_zero() {
                        let slot = &mut out[r * rhs.cols + c];
                        *slot = &*slot + &(a * b);
                    }
                }
            }
        }
        Ok(Self::from_data(self.tag, self.rows, rhs.cols, out))
    }

    fn zip_with(&self, rhs: &ExactMatrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Self {
        assert_eq!(self.shape(), rhs.shape(), "elementwise shape");
        assert_eq!(self.tag, rhs.tag, "elementwise field");
        Self::from_data(
            self.tag,
            self.rows,
            self.cols,
            self.data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        )
    }

    /// Text form: `matrix <rows> <cols>` followed by the rows.
    pub fn to_text(&self) -> String {
        let mut out = format!("matrix {} {}\n", self.rows, self.cols);
        self.write_rows(&mut out);
        out
    }

    pub(crate) fn write_rows(&self, out: &mut String) {
        if self.cols == 0 {
            return;
        }
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
    }

    /// Parse the text form, reading literals in field `tag`.
    pub fn parse_text(text: &str, tag: FieldTag) -> Result<Self> {
        let mut reader = LineReader::new(text);
        let header = reader.expect_line("`matrix <rows> <cols>`")?;
        let toks = &header.tokens;
        if toks[0].text != "matrix" || toks.len() != 3 {
            return Err(Error::syntax(
                header.number,
                toks[0].column,
                "expected `matrix <rows> <cols>`",
            ));
        }
        let rows = parse_count(&header, &toks[1])?;
        let cols = parse_count(&header, &toks[2])?;
        let m = read_matrix_body(&mut reader, rows, cols, tag)?;
        if let Some(extra) = reader.next_line() {
            return Err(Error::syntax(
                extra.number,
                extra.tokens[0].column,
                "trailing content after matrix",
            ));
        }
        Ok(m)
    }
}

/// In-place Gauss-Jordan on the first `cols` columns; returns pivot columns.
fn gauss_jordan(rows: &mut [Vec<Scalar>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..cols {
        if next == rows.len() {
            break;
        }
        let Some(found) = (next..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(next, found);
        let inv = rows[next][col].inv().expect("nonzero pivot");
        let support: Vec<usize> = (col..rows[next].len())
            .filter(|&c| !rows[next][c].is_zero())
            .collect();
        if !inv.is_one() {
            for &c in &support {
                rows[next][c] = &rows[next][c] * &inv;
            }
        }
        let (before, rest) = rows.split_at_mut(next);
        let (pivot_row, after) = rest.split_first_mut().expect("pivot row");
        for row in before.iter_mut().chain(after.iter_mut()) {
            if row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for &c in &support {
                row[c] = &row[c] - &(&factor * &pivot_row[c]);
            }
        }
        pivots.push(col);
        next += 1;
    }
    pivots
}

fn free_column_basis(reduced: &ExactMatrix, pivots: &[usize], n: usize) -> Vec<Vec<Scalar>> {
    let tag = reduced.tag();
    let mut is_pivot = vec![false; n];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Scalar::zero(tag); n];
            v[f] = Scalar::one(tag);
            for (k, &pc) in pivots.iter().enumerate() {
                v[pc] = -reduced.get(k, f);
            }
            v
        })
        .collect()
}

impl Mul<&ExactMatrix> for &ExactMatrix {
    type Output = ExactMatrix;
    /// Panics on a shape or field mismatch; see [`ExactMatrix::try_mul`].
    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.try_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Add<&ExactMatrix> for &ExactMatrix {
    type Output = ExactMatrix;
    fn add(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub<&ExactMatrix> for &ExactMatrix {
    type Output = ExactMatrix;
    fn sub(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &ExactMatrix {
    type Output = ExactMatrix;
    fn neg(self) -> ExactMatrix {
        ExactMatrix::from_data(
            self.tag,
            self.rows,
            self.cols,
            self.data.iter().map(|x| -x).collect(),
        )
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Serialized as a list of rows of scalar literals.
impl Serialize for ExactMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for r in 0..self.rows {
            seq.serialize_element(self.row(r))?;
        }
        seq.end()
    }
}
