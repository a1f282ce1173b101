//! Multi-modular reduced row echelon form over ℚ.
//!
//! Rows are cleared of denominators, reduced modulo word-sized primes, and
//! the RREF entries are lifted by CRT and rational reconstruction. A lifted
//! candidate `R` with pivots `P` is accepted only after an exact check:
//!
//! - the columns `P` of `A` are independent modulo a prime, hence over ℚ;
//! - every kernel vector read off `R` is annihilated by `A` over ℤ.
//!
//! Together these give `rank A = |P|` and `ker A = ker R`, so `R` is the RREF.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::field::is_prime;

/// Give up and let the caller fall back to plain elimination.
const MAX_PRIMES: usize = 2048;

fn primes_upto(count: usize) -> Vec<u64> {
    static PRIMES: OnceLock<Mutex<Vec<u64>>> = OnceLock::new();
    let cell = PRIMES.get_or_init(|| Mutex::new(Vec::new()));
    let mut primes = cell.lock().expect("prime cache");
    let mut candidate = primes.last().map_or((1u64 << 62) - 1, |&p| p - 2);
    while primes.len() < count {
        if is_prime(candidate) {
            primes.push(candidate);
        }
        candidate -= 2;
    }
    primes[..count].to_vec()
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat; p is prime and a is nonzero.
    let (mut base, mut exp, mut acc) = (a, p - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn reduce(v: &BigInt, p: u64) -> u64 {
    v.mod_floor(&BigInt::from(p))
        .to_u64()
        .expect("residue fits")
}

/// RREF modulo `p`: pivots and, per pivot row, the values at `free` columns.
fn rref_mod(rows: &[Vec<(usize, BigInt)>], cols: usize, p: u64) -> (Vec<usize>, Vec<Vec<u64>>) {
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|row| {
            let mut dense = vec![0u64; cols];
            for (c, v) in row {
                dense[*c] = reduce(v, p);
            }
            dense
        })
        .collect();
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..cols {
        if next == m.len() {
            break;
        }
        let Some(found) = (next..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(next, found);
        let inv = inv_mod(m[next][col], p);
        let support: Vec<usize> = (col..cols).filter(|&c| m[next][c] != 0).collect();
        for &c in &support {
            m[next][c] = mul_mod(m[next][c], inv, p);
        }
        let pivot_row = std::mem::take(&mut m[next]);
        for (r, row) in m.iter_mut().enumerate() {
            if r == next || row[col] == 0 {
                continue;
            }
            let factor = p - row[col];
            for &c in &support {
                row[c] =
                    ((row[c] as u128 + factor as u128 * pivot_row[c] as u128) % p as u128) as u64;
            }
        }
        m[next] = pivot_row;
        pivots.push(col);
        next += 1;
    }
    m.truncate(pivots.len());
    (pivots, m)
}

/// `k`-th pivot list comparison: more pivots, then earlier pivots, is better.
fn better(candidate: &[usize], best: &[usize]) -> bool {
    candidate.len() > best.len() || (candidate.len() == best.len() && candidate < best)
}

fn rational_reconstruct(a: &BigInt, modulus: &BigInt) -> Option<BigRational> {
    let bound = (modulus / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (modulus.clone(), a.clone());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

struct Lift {
    pivots: Vec<usize>,
    free: Vec<usize>,
    modulus: BigInt,
    /// Residues of `R[k][free[j]]`.
    values: Vec<Vec<BigInt>>,
    primes_used: usize,
}

impl Lift {
    fn start(pivots: Vec<usize>, cols: usize, reduced: &[Vec<u64>], p: u64) -> Self {
        let free: Vec<usize> = (0..cols)
            .filter(|c| pivots.binary_search(c).is_err())
            .collect();
        let values = reduced
            .iter()
            .map(|row| free.iter().map(|&c| BigInt::from(row[c])).collect())
            .collect();
        Lift {
            pivots,
            free,
            modulus: BigInt::from(p),
            values,
            primes_used: 1,
        }
    }

    fn absorb(&mut self, reduced: &[Vec<u64>], p: u64) {
        let m_mod = reduce(&self.modulus, p);
        let m_inv = inv_mod(m_mod, p);
        for (row, vals) in reduced.iter().zip(self.values.iter_mut()) {
            for (&c, x) in self.free.iter().zip(vals.iter_mut()) {
                let diff = (row[c] + p - reduce(x, p)) % p;
                let k = mul_mod(diff, m_inv, p);
                if k != 0 {
                    *x += &self.modulus * BigInt::from(k);
                }
            }
        }
        self.modulus *= BigInt::from(p);
        self.primes_used += 1;
    }

    fn reconstruct(&self) -> Option<Vec<Vec<BigRational>>> {
        self.values
            .iter()
            .map(|vals| {
                vals.iter()
                    .map(|v| rational_reconstruct(v, &self.modulus))
                    .collect()
            })
            .collect()
    }
}

/// Every kernel vector of the candidate is annihilated by the integer rows.
fn kernel_verified(
    rows: &[Vec<(usize, BigInt)>],
    lift: &Lift,
    entries: &[Vec<BigRational>],
) -> bool {
    let cols_total = lift.pivots.len() + lift.free.len();
    let mut position = vec![None; cols_total];
    for (k, &pc) in lift.pivots.iter().enumerate() {
        position[pc] = Some(k);
    }
    for (j, &f) in lift.free.iter().enumerate() {
        // Kernel vector: 1 at f, -R[k][f] at pivot k, scaled to integers.
        let den = entries
            .iter()
            .fold(BigInt::one(), |acc, row| acc.lcm(row[j].denom()));
        let mut vector = vec![BigInt::zero(); cols_total];
        vector[f] = den.clone();
        for (k, &pc) in lift.pivots.iter().enumerate() {
            let e = &entries[k][j];
            vector[pc] = -(e.numer() * (&den / e.denom()));
        }
        for row in rows {
            let dot: BigInt = row.iter().map(|(c, v)| v * &vector[*c]).sum();
            if !dot.is_zero() {
                return false;
            }
        }
    }
    true
}

/// RREF of a `rows × cols` rational matrix given row-major. Returns the
/// nonzero rows (one per pivot) and the pivot columns, or `None` if the
/// prime budget ran out.
pub(crate) fn rref_rational(
    rows: usize,
    cols: usize,
    data: &[BigRational],
) -> Option<(Vec<Vec<BigRational>>, Vec<usize>)> {
    let int_rows: Vec<Vec<(usize, BigInt)>> = (0..rows)
        .map(|r| {
            let row = &data[r * cols..(r + 1) * cols];
            let den = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            row.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(c, v)| (c, v.numer() * (&den / v.denom())))
                .collect::<Vec<_>>()
        })
        .filter(|row: &Vec<_>| !row.is_empty())
        .collect();
    if int_rows.is_empty() {
        return Some((Vec::new(), Vec::new()));
    }

    let mut lift: Option<Lift> = None;
    let mut next_check = 1;
    let mut primes = Vec::new();
    for idx in 0..MAX_PRIMES {
        if idx == primes.len() {
            primes = primes_upto((2 * primes.len()).clamp(32, MAX_PRIMES));
        }
        let p = primes[idx];
        let (pivots, reduced) = rref_mod(&int_rows, cols, p);
        match &mut lift {
            Some(l) if l.pivots == pivots => l.absorb(&reduced, p),
            Some(l) if !better(&pivots, &l.pivots) => continue,
            _ => {
                lift = Some(Lift::start(pivots, cols, &reduced, p));
                next_check = 1;
            }
        }
        let l = lift.as_ref().expect("lift started");
        if l.primes_used < next_check {
            continue;
        }
        next_check = l.primes_used + l.primes_used.div_ceil(2);
        let Some(entries) = l.reconstruct() else {
            continue;
        };
        if kernel_verified(&int_rows, l, &entries) {
            let reduced = entries
                .into_iter()
                .enumerate()
                .map(|(k, vals)| {
                    let mut row = vec![BigRational::zero(); cols];
                    row[l.pivots[k]] = BigRational::one();
                    for (&c, v) in l.free.iter().zip(vals) {
                        row[c] = v;
                    }
                    row
                })
                .collect();
            return Some((reduced, l.pivots.clone()));
        }
    }
    None
}
