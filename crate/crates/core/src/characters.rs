//! Irreducible characters of S_d and the normalized sums built from them.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::partition::{partitions_of, Partition};
use crate::scalar::{big, factorial, int, Rational};

/// Full table `χ_λ(Δ)` for one degree; rows and columns in reverse-lex order.
#[derive(Debug)]
pub struct CharacterTable {
    d: usize,
    shapes: Vec<Partition>,
    index: HashMap<Partition, usize>,
    values: Vec<Vec<i64>>,
}

impl CharacterTable {
    pub fn degree(&self) -> usize {
        self.d
    }

    /// Rows (irreducibles) and columns (classes) share this list.
    pub fn partitions(&self) -> &[Partition] {
        &self.shapes
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn value(&self, lambda: &Partition, delta: &Partition) -> Result<i64> {
        let (i, j) = match (self.index_of(lambda), self.index_of(delta)) {
            (Some(i), Some(j)) => (i, j),
            _ => {
                return Err(Error::WeightMismatch {
                    expected: self.d,
                    found: if self.index_of(lambda).is_none() {
                        lambda.weight()
                    } else {
                        delta.weight()
                    },
                })
            }
        };
        Ok(self.values[i][j])
    }

    /// `values[λ index][Δ index]`.
    pub fn rows(&self) -> &[Vec<i64>] {
        &self.values
    }

    pub fn dim(&self, row: usize) -> i64 {
        self.values[row][self.shapes.len() - 1]
    }

    /// Fresh table, bypassing the cache behind [`character_table`].
    pub fn build(d: usize) -> Self {
        let shapes = partitions_of(d);
        let index = shapes.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let values = shapes
            .par_iter()
            .map(|lambda| {
                let mut memo = HashMap::new();
                shapes
                    .iter()
                    .map(|delta| murnaghan_nakayama(&beta_set(lambda), delta.parts(), &mut memo))
                    .collect()
            })
            .collect();
        CharacterTable {
            d,
            shapes,
            index,
            values,
        }
    }
}

static TABLES: OnceLock<RwLock<HashMap<usize, Arc<CharacterTable>>>> = OnceLock::new();

pub fn character_table(d: usize) -> Arc<CharacterTable> {
    let lock = TABLES.get_or_init(Default::default);
    if let Some(t) = lock.read().expect("table cache poisoned").get(&d) {
        return t.clone();
    }
    let table = Arc::new(CharacterTable::build(d));
    lock.write()
        .expect("table cache poisoned")
        .entry(d)
        .or_insert(table)
        .clone()
}

/// First-column hook lengths `λ_i + (ℓ - 1 - i)`, decreasing.
fn beta_set(lambda: &Partition) -> Vec<usize> {
    let l = lambda.length();
    lambda
        .parts()
        .iter()
        .enumerate()
        .map(|(i, &p)| p + l - 1 - i)
        .collect()
}

fn from_beta(beta: &[usize]) -> Vec<usize> {
    let l = beta.len();
    let mut parts: Vec<usize> = beta.iter().enumerate().map(|(i, &b)| b - (l - 1 - i)).collect();
    parts.retain(|&p| p > 0);
    parts
}

/// Removes rim hooks of the sizes in `cycles`, front to back.
fn murnaghan_nakayama(
    beta: &[usize],
    cycles: &[usize],
    memo: &mut HashMap<(Vec<usize>, Vec<usize>), i64>,
) -> i64 {
    let Some((&k, rest)) = cycles.split_first() else {
        return 1;
    };
    let shape = from_beta(beta);
    let key = (shape, cycles.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let members: BTreeSet<usize> = beta.iter().copied().collect();
    let mut total = 0i64;
    for (pos, &b) in beta.iter().enumerate() {
        if b < k || members.contains(&(b - k)) {
            continue;
        }
        let target = b - k;
        // beads strictly between target and b: the hook height
        let between = beta.iter().filter(|&&x| x > target && x < b).count();
        let mut next: Vec<usize> = beta.to_vec();
        next[pos] = target;
        next.sort_unstable_by(|x, y| y.cmp(x));
        let next = normalize_beta(&next);
        let sign = if between % 2 == 0 { 1 } else { -1 };
        total += sign * murnaghan_nakayama(&next, rest, memo);
    }
    memo.insert(key, total);
    total
}

/// Drops trailing zero beads so the set matches the shorter partition.
fn normalize_beta(beta: &[usize]) -> Vec<usize> {
    let mut b = beta.to_vec();
    while b.last() == Some(&0) {
        b.pop();
        for x in b.iter_mut() {
            *x -= 1;
        }
    }
    b
}

pub fn character(lambda: &Partition, delta: &Partition) -> Result<i64> {
    if lambda.weight() != delta.weight() {
        return Err(Error::WeightMismatch {
            expected: lambda.weight(),
            found: delta.weight(),
        });
    }
    character_table(lambda.weight()).value(lambda, delta)
}

/// `χ_λ(1^d)`.
pub fn dim(lambda: &Partition) -> i64 {
    character(lambda, &Partition::column(lambda.weight())).expect("same weight")
}

/// `d! / Π hooks`, an independent route to the dimension.
pub fn hook_length_dim(lambda: &Partition) -> BigInt {
    let prod = lambda
        .hook_lengths()
        .into_iter()
        .fold(BigInt::one(), |acc, h| acc * BigInt::from(h));
    factorial(lambda.weight()) / prod
}

/// `φ_λ(Δ) = |C_Δ| χ_λ(Δ) / dim λ`.
pub fn phi(lambda: &Partition, delta: &Partition) -> Result<Rational> {
    let chi = character(lambda, delta)?;
    Ok(big(&delta.cycle_class_size()) * int(chi) / int(dim(lambda)))
}

/// Sum of `φ_λ(Δ)` over classes with `ℓ(Δ) = |λ| - k`, for `0 <= k < |λ|` (and `k = 0` at `λ = ∅`).
pub fn phi_k(lambda: &Partition, k: usize) -> Result<Rational> {
    let d = lambda.weight();
    if k > 0 && k >= d {
        return Err(Error::out_of_range("k", format!("k={k} for |λ|={d}")));
    }
    Ok(phi_k_ext(lambda, k))
}

/// [`phi_k`] extended by zero for `k >= |λ|`.
pub fn phi_k_ext(lambda: &Partition, k: usize) -> Rational {
    let d = lambda.weight();
    if k == 0 {
        return Rational::one();
    }
    if k >= d {
        return Rational::zero();
    }
    partitions_of(d)
        .iter()
        .filter(|delta| delta.length() == d - k)
        .map(|delta| phi(lambda, delta).expect("same weight"))
        .sum()
}

/// `Σ_l c(c-1)…(c-l+1) Σ_{μ ⊢ k, ℓ(μ)=l} Π φ_{μ_i}(λ) / |Aut μ|`; `k = 0` gives 1.
pub fn tilde_phi(lambda: &Partition, k: usize, c: &Rational) -> Rational {
    if k == 0 {
        return Rational::one();
    }
    let phis: Vec<Rational> = (0..=k).map(|j| phi_k_ext(lambda, j)).collect();
    let mut total = Rational::zero();
    for mu in partitions_of(k) {
        let l = mu.length();
        let mut falling = Rational::one();
        for i in 0..l {
            falling *= c - int(i as i64);
        }
        if falling.is_zero() {
            continue;
        }
        let prod = mu.parts().iter().fold(Rational::one(), |acc, &m| acc * &phis[m]);
        total += falling * prod / big(&mu.aut_order());
    }
    total
}

/// `Σ_λ χ_λ(Δ)`, the number of square roots of a permutation of type `Δ`.
pub fn chi_sum(delta: &Partition) -> i64 {
    let table = character_table(delta.weight());
    let j = table.index_of(delta).expect("own weight");
    table.rows().iter().map(|row| row[j]).sum()
}

/// Closed form for `φ_λ((d))`: nonzero only on hooks.
pub fn char_on_full_cycle(lambda: &Partition) -> Rational {
    let d = lambda.weight();
    if d == 0 || lambda.rank() != 1 {
        return Rational::zero();
    }
    let sign = if lambda.length() % 2 == 1 { 1 } else { -1 };
    int(sign) * big(&factorial(d)) / int(dim(lambda)) / int(d as i64)
}

/// Compares `Π(1 - q^{d_i}) / (1 - q)` against characters of the hooks `(d-r, 1^r)`.
pub fn zagier_hook_check(delta: &Partition) -> Result<bool> {
    let d = delta.weight();
    if d > 9 {
        return Err(Error::guard(format!("hook check limited to d <= 9, got {d}")));
    }
    if d == 0 {
        return Ok(true);
    }
    // numerator polynomial Π (1 - q^{d_i}), dense coefficients
    let mut poly = vec![1i64];
    for &part in delta.parts() {
        let mut next = vec![0i64; poly.len() + part];
        for (i, &c) in poly.iter().enumerate() {
            next[i] += c;
            next[i + part] -= c;
        }
        poly = next;
    }
    // divide by (1 - q): partial sums
    let mut quotient = Vec::with_capacity(poly.len());
    let mut acc = 0i64;
    for &c in &poly[..poly.len() - 1] {
        acc += c;
        quotient.push(acc);
    }
    for r in 0..d {
        let coeff = quotient.get(r).copied().unwrap_or(0);
        // coefficient of (-q)^r
        let signed = if r % 2 == 0 { coeff } else { -coeff };
        if signed != character(&Partition::hook(d, r)?, delta)? {
            return Ok(false);
        }
    }
    Ok(quotient.iter().skip(d).all(|&c| c == 0))
}

/// `Σ_Δ |C_Δ| χ_λ χ_μ = d! δ_{λμ}`.
pub fn row_orthogonality_holds(d: usize) -> bool {
    let t = character_table(d);
    let sizes: Vec<BigInt> = t.partitions().iter().map(Partition::cycle_class_size).collect();
    let n = t.partitions().len();
    let fact = factorial(d);
    (0..n).all(|a| {
        (0..n).all(|b| {
            let s: BigInt = (0..n)
                .map(|j| &sizes[j] * BigInt::from(t.rows()[a][j] * t.rows()[b][j]))
                .sum();
            if a == b {
                s == fact
            } else {
                s.is_zero()
            }
        })
    })
}

/// `Σ_λ χ_λ(Δ) χ_λ(Δ') = z_Δ δ_{ΔΔ'}`.
pub fn column_orthogonality_holds(d: usize) -> bool {
    let t = character_table(d);
    let n = t.partitions().len();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let s: i64 = t.rows().iter().map(|row| row[i] * row[j]).sum();
            if i == j {
                BigInt::from(s) == t.partitions()[i].z()
            } else {
                s == 0
            }
        })
    })
}
