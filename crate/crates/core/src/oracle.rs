//! Brute-force referees over small prime fields.
//!
//! [`brute_force_consistency`] enumerates every candidate `X`. [`probe_char2`]
//! samples systems over GF(2), where the congruence characterization is not
//! claimed, and decides both sides exhaustively: solvability by enumerating
//! `X`, and the congruence condition by enumerating every invertible `S`.
//! The probe reports what it finds and asserts nothing.

use std::fmt::Write as _;

use num_bigint::BigUint;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmat::{ExactMatrix, StarMode};
use crate::field::{FieldTag, Scalar};
use crate::model::{gen_consistent, gen_perturbed, GenParams, StarSylvesterSystem};
use crate::roth::verify_congruence;

/// Default limit on the number of candidates `p^(n·m)`.
pub const DEFAULT_CAP: u64 = 6561;

/// Largest `m + n` the probe accepts: `2^(4·4)` candidates for `S`.
pub const PROBE_MAX_TOTAL_DIM: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BruteForceVerdict {
    pub consistent: bool,
    pub solutions: u64,
}

fn search_size(p: u64, exponent: usize, cap: u64) -> Result<u64> {
    let size = BigUint::from(p).pow(exponent as u32);
    match u64::try_from(&size) {
        Ok(s) if s <= cap => Ok(s),
        _ => Err(Error::SearchSpaceTooLarge {
            size: size.to_string(),
            cap,
        }),
    }
}

/// Calls `visit` on every matrix over GF(p) of the given shape, in
/// lexicographic order of the column-major entries.
fn for_each_matrix(
    tag: FieldTag,
    p: u64,
    rows: usize,
    cols: usize,
    mut visit: impl FnMut(&ExactMatrix),
) {
    let len = rows * cols;
    let mut digits = vec![0u64; len];
    loop {
        let values: Vec<Scalar> = digits
            .iter()
            .map(|&d| Scalar::from_i64(tag, d as i64))
            .collect();
        visit(&ExactMatrix::from_vec_col_major(tag, rows, cols, &values));
        let Some(k) = (0..len).rev().find(|&k| digits[k] + 1 < p) else {
            return;
        };
        digits[k] += 1;
        digits[k + 1..].iter_mut().for_each(|d| *d = 0);
    }
}

/// Count the solutions of a system over GF(p) by trying every `X`.
pub fn brute_force_consistency(sys: &StarSylvesterSystem, cap: u64) -> Result<BruteForceVerdict> {
    let p = sys.tag().modulus().ok_or(Error::NotPrimeField)?.get();
    search_size(p, sys.n() * sys.m(), cap)?;
    let mut solutions = 0u64;
    for_each_matrix(sys.tag(), p, sys.n(), sys.m(), |x| {
        if sys.is_solution(x).expect("shape by construction") {
            solutions += 1;
        }
    });
    Ok(BruteForceVerdict {
        consistent: solutions > 0,
        solutions,
    })
}

/// Every invertible `S` accepted by the congruence check, over GF(p).
fn congruence_witnesses(sys: &StarSylvesterSystem, p: u64, cap: u64) -> Result<Vec<ExactMatrix>> {
    let size = sys.m() + sys.n();
    search_size(p, size * size, cap)?;
    let mut found = Vec::new();
    for_each_matrix(sys.tag(), p, size, size, |s| {
        if verify_congruence(sys, s)
            .expect("shape by construction")
            .accepted()
        {
            found.push(s.clone());
        }
    });
    Ok(found)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProbeParams {
    /// Must be set; GF(2) is outside the supported fields otherwise.
    pub enabled: bool,
    pub max_total_dim: usize,
    pub seed: u64,
    pub sample_count: usize,
}

impl ProbeParams {
    pub fn new(enabled: bool, seed: u64, sample_count: usize) -> Self {
        ProbeParams {
            enabled,
            max_total_dim: 3,
            seed,
            sample_count,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeInstance {
    #[serde(skip)]
    pub system: StarSylvesterSystem,
    pub m: usize,
    pub n: usize,
    pub ell: usize,
    /// The system has a solution.
    pub a_holds: bool,
    /// Some invertible `S` satisfies every congruence.
    pub b_holds: bool,
    pub solutions: u64,
    pub witnesses: usize,
}

impl ProbeInstance {
    pub fn disagrees(&self) -> bool {
        self.a_holds != self.b_holds
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub seed: u64,
    pub instances: Vec<ProbeInstance>,
}

impl ProbeReport {
    pub fn a_without_b(&self) -> usize {
        self.instances
            .iter()
            .filter(|i| i.a_holds && !i.b_holds)
            .count()
    }

    pub fn b_without_a(&self) -> usize {
        self.instances
            .iter()
            .filter(|i| i.b_holds && !i.a_holds)
            .count()
    }

    /// One line per instance, then totals.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, inst) in self.instances.iter().enumerate() {
            let _ = writeln!(
                out,
                "instance {k} m={} n={} ell={} a_holds={} b_holds={} solutions={} witnesses={}",
                inst.m,
                inst.n,
                inst.ell,
                inst.a_holds,
                inst.b_holds,
                inst.solutions,
                inst.witnesses
            );
        }
        let _ = writeln!(
            out,
            "total {} a_without_b {} b_without_a {}",
            self.instances.len(),
            self.a_without_b(),
            self.b_without_a()
        );
        out
    }

    /// `(file name, system text)` for each instance where the two sides differ.
    pub fn anomaly_files(&self) -> Vec<(String, String)> {
        self.instances
            .iter()
            .enumerate()
            .filter(|(_, inst)| inst.disagrees())
            .map(|(k, inst)| {
                let kind = if inst.a_holds { "a_not_b" } else { "b_not_a" };
                (
                    format!("probe-{}-{k}-{kind}.ssys", self.seed),
                    inst.system.to_text(),
                )
            })
            .collect()
    }
}

/// Decide both sides of the characterization on sampled GF(2) systems.
/// Half of the samples are planted consistent systems, half are perturbed.
pub fn probe_char2(params: &ProbeParams) -> Result<ProbeReport> {
    if !params.enabled {
        return Err(Error::ProbeDisabled);
    }
    if !(2..=PROBE_MAX_TOTAL_DIM).contains(&params.max_total_dim) {
        return Err(Error::SearchSpaceTooLarge {
            size: format!("m+n={}", params.max_total_dim),
            cap: PROBE_MAX_TOTAL_DIM as u64,
        });
    }
    let tag = FieldTag::gf2_probe();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut instances = Vec::with_capacity(params.sample_count);
    for k in 0..params.sample_count {
        let total = rng.random_range(2..=params.max_total_dim);
        let m = rng.random_range(1..total);
        let n = total - m;
        let ell = rng.random_range(1..=2);
        let sub_seed: u64 = rng.random();
        let (planted, _) = gen_consistent(&GenParams::new(
            tag,
            StarMode::Transpose,
            m,
            n,
            ell,
            sub_seed,
        ))?;
        let system = if k % 2 == 0 {
            planted
        } else {
            gen_perturbed(&planted, sub_seed, 1)
        };
        let verdict = brute_force_consistency(&system, u64::MAX)?;
        let witnesses = congruence_witnesses(&system, 2, u64::MAX)?.len();
        instances.push(ProbeInstance {
            m,
            n,
            ell,
            a_holds: verdict.consistent,
            b_holds: witnesses > 0,
            solutions: verdict.solutions,
            witnesses,
            system,
        });
    }
    Ok(ProbeReport {
        seed: params.seed,
        instances,
    })
}
