//! Systems of ★-Sylvester equations, the `.ssys` text format, residuals and
//! seeded instance generators.
//!
//! A system over a field 𝔽 is a list of triples `(A_i, B_i, C_i)` with
//! `A_i: m×n`, `B_i: n×m`, `C_i: m×m`; an unknown `X` is `n×m`.
//!
//! `.ssys` grammar (line oriented, `#` starts a comment):
//!
//! ```text
//! field Q | QI | GF <p>
//! star T | H
//! dims <m> <n> <ell>
//! A 1
//! <m rows of n scalars>
//! B 1
//! <n rows of m scalars>
//! C 1
//! <m rows of m scalars>
//! ...
//! ```
//!
//! Matrices with zero columns have no row lines.
//!
//! Generators draw from ChaCha8 seeded with `seed_from_u64(seed)`. Entries are
//! produced in row-major order, `A_1, B_1, A_2, B_2, ...` and then `X`; a
//! rational entry is `num/den` with `num` uniform in `[-bound, bound]` and
//! `den` uniform in `[1, bound]`, a Gaussian entry is two such rationals (real
//! part first), and a GF(p) entry is uniform in `[0, p)`. Perturbations use
//! stream 1 of the same generator.

use std::collections::BTreeMap;

use num_rational::BigRational;
use rand::RngExt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmat::{ExactMatrix, StarMode};
use crate::field::{FieldTag, Scalar};
use crate::text::{parse_count, Line, LineReader};

/// One equation `A X - X★ B = C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub a: ExactMatrix,
    pub b: ExactMatrix,
    pub c: ExactMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarSylvesterSystem {
    tag: FieldTag,
    mode: StarMode,
    m: usize,
    n: usize,
    equations: Vec<Equation>,
}

/// A particular solution plus a basis of the homogeneous solutions.
///
/// Under `(ℚ(i), H)` the basis spans the solutions over ℚ, so `dim` is a
/// ℚ-dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolutionSet {
    pub particular: ExactMatrix,
    pub homogeneous_basis: Vec<ExactMatrix>,
    pub dim: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Admit `field GF 2`.
    pub allow_char2: bool,
}

impl StarSylvesterSystem {
    pub fn new(
        tag: FieldTag,
        mode: StarMode,
        m: usize,
        n: usize,
        equations: Vec<Equation>,
    ) -> Result<Self> {
        mode.validate(tag)?;
        if equations.is_empty() {
            return Err(Error::ShapeMismatch(
                "a system needs at least one equation".into(),
            ));
        }
        for (k, eq) in equations.iter().enumerate() {
            for (name, mat, shape) in [
                ("A", &eq.a, (m, n)),
                ("B", &eq.b, (n, m)),
                ("C", &eq.c, (m, m)),
            ] {
                if mat.tag() != tag {
                    return Err(Error::FieldMismatch {
                        left: tag.to_string(),
                        right: mat.tag().to_string(),
                    });
                }
                if mat.shape() != shape {
                    return Err(Error::ShapeMismatch(format!(
                        "{name} {} is {}x{}, expected {}x{}",
                        k + 1,
                        mat.rows(),
                        mat.cols(),
                        shape.0,
                        shape.1
                    )));
                }
            }
        }
        Ok(StarSylvesterSystem {
            tag,
            mode,
            m,
            n,
            equations,
        })
    }

    pub fn tag(&self) -> FieldTag {
        self.tag
    }

    pub fn mode(&self) -> StarMode {
        self.mode
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ell(&self) -> usize {
        self.equations.len()
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    /// Zero-based equation lookup.
    pub fn equation(&self, index: usize) -> Result<&Equation> {
        self.equations.get(index).ok_or(Error::IndexOutOfRange {
            index,
            ell: self.ell(),
        })
    }

    /// The same system with every `C_i` replaced by zero.
    pub fn homogeneous(&self) -> Self {
        let mut out = self.clone();
        for eq in &mut out.equations {
            eq.c = ExactMatrix::zeros(self.tag, self.m, self.m);
        }
        out
    }

    pub fn with_equations(&self, equations: Vec<Equation>) -> Result<Self> {
        Self::new(self.tag, self.mode, self.m, self.n, equations)
    }

    /// `M★` in this system's star mode.
    pub fn star(&self, mat: &ExactMatrix) -> ExactMatrix {
        mat.star(self.mode)
            .expect("star mode validated at construction")
    }

    fn check_unknown(&self, x: &ExactMatrix) -> Result<()> {
        if x.tag() != self.tag || x.shape() != (self.n, self.m) {
            return Err(Error::ShapeMismatch(format!(
                "X must be {}x{} over {}, got {}x{} over {}",
                self.n,
                self.m,
                self.tag,
                x.rows(),
                x.cols(),
                x.tag()
            )));
        }
        Ok(())
    }

    /// `A_i X - X★ B_i` for every equation.
    pub fn apply(&self, x: &ExactMatrix) -> Result<Vec<ExactMatrix>> {
        self.check_unknown(x)?;
        let xs = self.star(x);
        Ok(self
            .equations
            .iter()
            .map(|eq| &(&eq.a * x) - &(&xs * &eq.b))
            .collect())
    }

    /// `R_i = A_i X - X★ B_i - C_i`.
    pub fn residual(&self, x: &ExactMatrix) -> Result<Vec<ExactMatrix>> {
        Ok(self
            .apply(x)?
            .iter()
            .zip(&self.equations)
            .map(|(lhs, eq)| lhs - &eq.c)
            .collect())
    }

    pub fn is_solution(&self, x: &ExactMatrix) -> Result<bool> {
        Ok(self.residual(x)?.iter().all(ExactMatrix::is_zero))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "field {}\nstar {}\ndims {} {} {}\n",
            self.tag,
            self.mode,
            self.m,
            self.n,
            self.ell()
        );
        for (k, eq) in self.equations.iter().enumerate() {
            for (name, mat) in [("A", &eq.a), ("B", &eq.b), ("C", &eq.c)] {
                out.push_str(&format!("{name} {}\n", k + 1));
                mat.write_rows(&mut out);
            }
        }
        out
    }

    pub fn parse(text: &str, opts: ParseOptions) -> Result<Self> {
        Parser::new(text, opts).run()
    }
}

/// Parse `Q`, `QI` or `GF <p>` (the words after `field`).
pub fn parse_field_words(words: &[&str], allow_char2: bool) -> Result<FieldTag> {
    match words {
        ["Q"] => Ok(FieldTag::Rationals),
        ["QI"] => Ok(FieldTag::GaussianRationals),
        ["GF", p] => {
            let p: u64 = p
                .parse()
                .map_err(|_| Error::syntax(0, 0, format!("invalid modulus `{p}`")))?;
            if p == 2 {
                return if allow_char2 {
                    Ok(FieldTag::gf2_probe())
                } else {
                    Err(Error::Char2Rejected)
                };
            }
            FieldTag::prime(p)
        }
        _ => Err(Error::syntax(
            0,
            0,
            format!("unknown field `{}`", words.join(" ")),
        )),
    }
}

pub fn parse_star_word(word: &str) -> Result<StarMode> {
    match word {
        "T" => Ok(StarMode::Transpose),
        "H" => Ok(StarMode::ConjugateTranspose),
        other => Err(Error::syntax(0, 0, format!("unknown star mode `{other}`"))),
    }
}

struct Parser<'a> {
    reader: LineReader<'a>,
    opts: ParseOptions,
    pending: Option<Line<'a>>,
}

fn is_section_header(line: &Line<'_>) -> bool {
    matches!(line.tokens[0].text, "A" | "B" | "C") && line.tokens.len() == 2
}

fn at_line(line: &Line<'_>, col: usize, e: Error) -> Error {
    match e {
        Error::Syntax { message, .. } => Error::syntax(line.number, col, message),
        other => other,
    }
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, opts: ParseOptions) -> Self {
        Parser {
            reader: LineReader::new(text),
            opts,
            pending: None,
        }
    }

    fn next(&mut self) -> Option<Line<'a>> {
        self.pending.take().or_else(|| self.reader.next_line())
    }

    fn run(mut self) -> Result<StarSylvesterSystem> {
        let mut tag = None;
        let mut mode = None;
        let mut dims = None;
        while tag.is_none() || mode.is_none() || dims.is_none() {
            let line = self
                .next()
                .ok_or_else(|| Error::syntax(1, 1, "missing `field`, `star` or `dims` header"))?;
            let words: Vec<&str> = line.tokens.iter().map(|t| t.text).collect();
            let arg_col = line
                .tokens
                .get(1)
                .map_or(line.tokens[0].column, |t| t.column);
            match words[0] {
                "field" if tag.is_none() => {
                    tag = Some(
                        parse_field_words(&words[1..], self.opts.allow_char2)
                            .map_err(|e| at_line(&line, arg_col, e))?,
                    );
                }
                "star" if mode.is_none() && words.len() == 2 => {
                    mode = Some(parse_star_word(words[1]).map_err(|e| at_line(&line, arg_col, e))?);
                }
                "dims" if dims.is_none() && words.len() == 4 => {
                    let m = parse_count(&line, &line.tokens[1])?;
                    let n = parse_count(&line, &line.tokens[2])?;
                    let ell = parse_count(&line, &line.tokens[3])?;
                    if ell == 0 {
                        return Err(Error::syntax(
                            line.number,
                            line.tokens[3].column,
                            "ell must be at least 1",
                        ));
                    }
                    dims = Some((m, n, ell));
                }
                other => {
                    return Err(Error::syntax(
                        line.number,
                        line.tokens[0].column,
                        format!("unexpected `{other}` in header (expected field, star, dims)"),
                    ))
                }
            }
        }
        let (tag, mode, (m, n, ell)) = (tag.unwrap(), mode.unwrap(), dims.unwrap());
        mode.validate(tag)?;

        let mut sections: BTreeMap<(usize, char), ExactMatrix> = BTreeMap::new();
        while let Some(line) = self.next() {
            if !is_section_header(&line) {
                return Err(Error::syntax(
                    line.number,
                    line.tokens[0].column,
                    format!(
                        "expected a section header like `A 1`, got `{}`",
                        line.tokens[0].text
                    ),
                ));
            }
            let name = line.tokens[0].text.chars().next().unwrap();
            let idx = parse_count(&line, &line.tokens[1])?;
            if idx == 0 || idx > ell {
                return Err(Error::syntax(
                    line.number,
                    line.tokens[1].column,
                    format!("equation index {idx} outside 1..={ell}"),
                ));
            }
            if sections.contains_key(&(idx, name)) {
                return Err(Error::syntax(
                    line.number,
                    line.tokens[0].column,
                    format!("duplicate section `{name} {idx}`"),
                ));
            }
            let shape = match name {
                'A' => (m, n),
                'B' => (n, m),
                _ => (m, m),
            };
            let mat = self.section_body(&line, shape, tag)?;
            sections.insert((idx, name), mat);
        }

        let mut equations = Vec::with_capacity(ell);
        for idx in 1..=ell {
            let mut take = |name: char| {
                sections
                    .remove(&(idx, name))
                    .ok_or_else(|| Error::ShapeMismatch(format!("missing section `{name} {idx}`")))
            };
            let (a, b, c) = (take('A')?, take('B')?, take('C')?);
            equations.push(Equation { a, b, c });
        }
        StarSylvesterSystem::new(tag, mode, m, n, equations)
    }

    fn section_body(
        &mut self,
        header: &Line<'a>,
        (rows, cols): (usize, usize),
        tag: FieldTag,
    ) -> Result<ExactMatrix> {
        let label = format!("{} {}", header.tokens[0].text, header.tokens[1].text);
        let mut body = Vec::new();
        while let Some(line) = self.next() {
            if is_section_header(&line) {
                self.pending = Some(line);
                break;
            }
            body.push(line);
        }
        let found_rows = if cols == 0 { rows } else { body.len() };
        if found_rows != rows || (cols == 0 && !body.is_empty()) {
            return Err(Error::ShapeMismatch(format!(
                "section `{label}` (line {}) has {} rows, expected {rows}x{cols}",
                header.number,
                body.len()
            )));
        }
        let mut data = Vec::with_capacity(rows * cols);
        for line in &body {
            if line.tokens.len() != cols {
                return Err(Error::ShapeMismatch(format!(
                    "section `{label}`, line {}: {} entries, expected {cols}",
                    line.number,
                    line.tokens.len()
                )));
            }
            for tok in &line.tokens {
                data.push(
                    Scalar::parse(tok.text, tag)
                        .map_err(|msg| Error::syntax(line.number, tok.column, msg))?,
                );
            }
        }
        Ok(ExactMatrix::from_data(tag, rows, cols, data))
    }
}

/// Parameters for [`gen_consistent`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub tag: FieldTag,
    pub mode: StarMode,
    pub m: usize,
    pub n: usize,
    pub ell: usize,
    pub seed: u64,
    /// Bound on numerators and denominators of rational entries.
    pub entry_bound: u32,
}

impl GenParams {
    pub const DEFAULT_ENTRY_BOUND: u32 = 9;

    pub fn new(tag: FieldTag, mode: StarMode, m: usize, n: usize, ell: usize, seed: u64) -> Self {
        GenParams {
            tag,
            mode,
            m,
            n,
            ell,
            seed,
            entry_bound: Self::DEFAULT_ENTRY_BOUND,
        }
    }
}

fn random_ratio(rng: &mut ChaCha8Rng, bound: i64) -> BigRational {
    let num = rng.random_range(-bound..=bound);
    let den = rng.random_range(1..=bound);
    BigRational::new(num.into(), den.into())
}

fn random_scalar(rng: &mut ChaCha8Rng, tag: FieldTag, bound: u32) -> Scalar {
    let bound = i64::from(bound.max(1));
    match tag {
        FieldTag::Rationals => Scalar::Rational(random_ratio(rng, bound)),
        FieldTag::GaussianRationals => {
            let re = random_ratio(rng, bound);
            let im = random_ratio(rng, bound);
            Scalar::gaussian(re, im)
        }
        FieldTag::Prime(p) => Scalar::modular(p, rng.random_range(0..p.get())),
    }
}

fn random_matrix(
    rng: &mut ChaCha8Rng,
    tag: FieldTag,
    rows: usize,
    cols: usize,
    bound: u32,
) -> ExactMatrix {
    ExactMatrix::from_fn(tag, rows, cols, |_, _| random_scalar(rng, tag, bound))
}

/// A random system with a planted solution: `C_i := A_i X - X★ B_i`.
pub fn gen_consistent(params: &GenParams) -> Result<(StarSylvesterSystem, ExactMatrix)> {
    let GenParams {
        tag,
        mode,
        m,
        n,
        ell,
        seed,
        entry_bound,
    } = *params;
    mode.validate(tag)?;
    if ell == 0 {
        return Err(Error::ShapeMismatch("ell must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ab: Vec<(ExactMatrix, ExactMatrix)> = (0..ell)
        .map(|_| {
            let a = random_matrix(&mut rng, tag, m, n, entry_bound);
            let b = random_matrix(&mut rng, tag, n, m, entry_bound);
            (a, b)
        })
        .collect();
    let x = random_matrix(&mut rng, tag, n, m, entry_bound);
    let xs = x.star(mode)?;
    let equations = ab
        .into_iter()
        .map(|(a, b)| {
            let c = &(&a * &x) - &(&xs * &b);
            Equation { a, b, c }
        })
        .collect();
    Ok((StarSylvesterSystem::new(tag, mode, m, n, equations)?, x))
}

/// Adds a random nonzero matrix to `C_1`. Makes no claim about the
/// consistency of the result. A system with `m = 0` is returned unchanged.
pub fn gen_perturbed(
    sys: &StarSylvesterSystem,
    seed: u64,
    entry_bound: u32,
) -> StarSylvesterSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let m = sys.m();
    if m == 0 {
        return sys.clone();
    }
    let mut delta = random_matrix(&mut rng, sys.tag(), m, m, entry_bound);
    if delta.is_zero() {
        let (r, c) = (rng.random_range(0..m), rng.random_range(0..m));
        delta.set(r, c, Scalar::one(sys.tag()));
    }
    let mut out = sys.clone();
    out.equations[0].c = &out.equations[0].c + &delta;
    out
}
