//! Independent integer oracles: Smith form over Z with big integers, and
//! coinvariants computed in the group-ring basis of Z[(Z/p^m)^r].

#![allow(dead_code, clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn int_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// Diagonal entries (not normalised to a divisor chain) of a Smith-equivalent
/// form of `a`, zeros included, `min(rows, cols)` of them.
pub fn int_diagonal(a: &IntMatrix, cols: usize) -> Vec<BigInt> {
    let mut a = a.clone();
    let rows = a.len();
    let k = rows.min(cols);
    let mut diag = Vec::with_capacity(k);
    for t in 0..k {
        loop {
            let mut best: Option<(BigInt, usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero() && best.as_ref().is_none_or(|b| a[i][j].abs() < b.0) {
                        best = Some((a[i][j].abs(), i, j));
                    }
                }
            }
            let Some((_, bi, bj)) = best else {
                diag.push(BigInt::zero());
                break;
            };
            a.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            let pivot = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..rows {
                let q = a[i][t].div_floor(&pivot);
                if !q.is_zero() {
                    for j in t..cols {
                        let v = &q * &a[t][j];
                        a[i][j] -= v;
                    }
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = a[t][j].div_floor(&pivot);
                if !q.is_zero() {
                    for row in a.iter_mut() {
                        let v = &q * &row[t];
                        row[j] -= v;
                    }
                }
                clean &= a[t][j].is_zero();
            }
            if clean {
                diag.push(pivot);
                break;
            }
        }
    }
    diag
}

pub fn valuation(x: &BigInt, p: u64) -> u32 {
    let p = BigInt::from(p);
    let mut x = x.clone();
    let mut v = 0;
    while (&x % &p).is_zero() {
        x /= &p;
        v += 1;
    }
    v
}

/// p-primary structure of `Z^rows / (column span of a)`: sorted torsion
/// exponents and free rank.
pub fn cokernel_oracle(a: &IntMatrix, cols: usize, p: u64) -> (Vec<u32>, usize) {
    let rows = a.len();
    let diag = int_diagonal(a, cols);
    let nonzero: Vec<&BigInt> = diag.iter().filter(|d| !d.is_zero()).collect();
    let mut exps: Vec<u32> = nonzero.iter().map(|d| valuation(d, p)).filter(|&v| v > 0).collect();
    exps.sort_unstable();
    (exps, rows - nonzero.len())
}

pub fn e_of(exps: &[u32]) -> u64 {
    exps.iter().map(|&x| x as u64).sum()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let (n, k) = (a.len(), b.len());
    let m = b.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| (0..m).map(|j| (0..k).map(|t| &a[i][t] * &b[t][j]).sum()).collect())
        .collect()
}

pub fn mat_pow(a: &IntMatrix, mut e: u64) -> IntMatrix {
    let n = a.len();
    let mut result: IntMatrix = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut base = a.clone();
    while e > 0 {
        if e & 1 == 1 {
            result = mat_mul(&result, &base);
        }
        base = mat_mul(&base, &base);
        e >>= 1;
    }
    result
}

/// A polynomial in `T_1..T_r` as `(coefficient, exponents)` terms.
pub type Terms = Vec<(i64, Vec<u32>)>;

fn binomial(n: u32, k: u32) -> BigInt {
    let mut c = BigInt::one();
    for i in 0..k {
        c = c * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    c
}

/// Group ring `Z[(Z/p^m)^r]`, element `τ^a` at index `Σ a_i p^{m i}`.
pub struct GroupRing {
    pub p: u64,
    pub r: usize,
    pub m: u32,
    pub side: usize,
}

impl GroupRing {
    pub fn new(p: u64, r: usize, m: u32) -> Self {
        GroupRing { p, r, m, side: p.pow(m) as usize }
    }

    pub fn dim(&self) -> usize {
        self.side.pow(self.r as u32)
    }

    fn digits(&self, mut idx: usize) -> Vec<usize> {
        (0..self.r)
            .map(|_| {
                let d = idx % self.side;
                idx /= self.side;
                d
            })
            .collect()
    }

    fn index(&self, digits: &[usize]) -> usize {
        digits.iter().rev().fold(0, |acc, &d| acc * self.side + d % self.side)
    }

    pub fn mul(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.dim()];
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            let di = self.digits(i);
            for (j, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                let dj = self.digits(j);
                let sum: Vec<usize> = di.iter().zip(&dj).map(|(u, v)| u + v).collect();
                out[self.index(&sum)] += a * b;
            }
        }
        out
    }

    /// `(τ_i - 1)^k`.
    fn t_power(&self, i: usize, k: u32) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.dim()];
        for j in 0..=k {
            let mut digits = vec![0; self.r];
            digits[i] = j as usize;
            let sign = if (k - j).is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
            out[self.index(&digits)] += sign * binomial(k, j);
        }
        out
    }

    pub fn element(&self, f: &Terms) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.dim()];
        for (c, exps) in f {
            let mut term = vec![BigInt::zero(); self.dim()];
            term[0] = BigInt::from(*c);
            for (i, &k) in exps.iter().enumerate() {
                term = self.mul(&term, &self.t_power(i, k));
            }
            for (o, t) in out.iter_mut().zip(term) {
                *o += t;
            }
        }
        out
    }

    /// Columns are `f * τ^a` over the basis.
    pub fn multiplication_columns(&self, f: &Terms) -> Vec<Vec<BigInt>> {
        let fe = self.element(f);
        (0..self.dim())
            .map(|a| {
                let mut basis = vec![BigInt::zero(); self.dim()];
                basis[a] = BigInt::one();
                self.mul(&fe, &basis)
            })
            .collect()
    }
}

/// `(Λ_r / (f_1, ..., f_k))_{H_m}` as `(torsion exponents, free rank)`.
pub fn cyclic_coinvariants_oracle(relations: &[Terms], p: u64, r: usize, m: u32) -> (Vec<u32>, usize) {
    let ring = GroupRing::new(p, r, m);
    let columns: Vec<Vec<BigInt>> = relations.iter().flat_map(|f| ring.multiplication_columns(f)).collect();
    let d = ring.dim();
    let a: IntMatrix = (0..d).map(|i| columns.iter().map(|c| c[i].clone()).collect()).collect();
    cokernel_oracle(&a, columns.len(), p)
}

/// `M_{Γ_n}` for `M = Z_p^k ⊕ ⊕ Z/p^{a_i}` with `γ` an integer matrix.
pub fn gamma_coinvariants_oracle(k: usize, torsion: &[u32], gamma: &[Vec<i64>], p: u64, n: u32) -> (Vec<u32>, usize) {
    let g = int_matrix(gamma);
    let dim = k + torsion.len();
    let mut a = mat_pow(&g, p.pow(n));
    for (i, row) in a.iter_mut().enumerate() {
        row[i] -= 1;
        for (t, &ai) in torsion.iter().enumerate() {
            row.push(if i == k + t { BigInt::from(p).pow(ai) } else { BigInt::zero() });
        }
    }
    cokernel_oracle(&a, dim + torsion.len(), p)
}

/// Parses `n,m,e,rank,certified` rows.
pub fn read_tower_csv(text: &str) -> Vec<(u32, u32, u64, usize, bool)> {
    text.lines()
        .skip(1)
        .filter(|l| !l.is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (
                f[0].parse().unwrap(),
                f[1].parse().unwrap(),
                f[2].parse().unwrap(),
                f[3].parse().unwrap(),
                f[4].parse().unwrap(),
            )
        })
        .collect()
}

pub const GOLDEN_TOWER: &str = include_str!("../golden/tower_free_lambda1_p3.csv");
