//! Brute-force Hurwitz numbers: count solutions of the surface-group relation in S_d.
//!
//! Uses no character theory. Relation words are folded left to right as
//! distributions over S_d; the last branch-point factor is never enumerated,
//! only tested for class membership of the inverse of the partial product.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::{common_weight, Partition};
use crate::scalar::{factorial, Rational};

pub const MAX_DEGREE: usize = 6;
pub const MAX_GENERATORS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SurfacePresentation {
    Orientable { handles: usize },
    Nonorientable { crosscaps: usize },
}

impl SurfacePresentation {
    pub fn orientable(handles: usize) -> Self {
        SurfacePresentation::Orientable { handles }
    }

    pub fn nonorientable(crosscaps: usize) -> Result<Self> {
        if crosscaps == 0 {
            return Err(Error::out_of_range("crosscaps", "need at least one"));
        }
        Ok(SurfacePresentation::Nonorientable { crosscaps })
    }

    pub fn euler(&self) -> i64 {
        match *self {
            SurfacePresentation::Orientable { handles } => 2 - 2 * handles as i64,
            SurfacePresentation::Nonorientable { crosscaps } => 2 - crosscaps as i64,
        }
    }

    /// Generators besides the branch-point ones.
    pub fn generator_count(&self) -> usize {
        match *self {
            SurfacePresentation::Orientable { handles } => 2 * handles,
            SurfacePresentation::Nonorientable { crosscaps } => crosscaps,
        }
    }

    /// Both presentations available for a given characteristic.
    pub fn for_euler(euler: i64) -> Vec<SurfacePresentation> {
        let mut out = Vec::new();
        if euler <= 2 && (2 - euler) % 2 == 0 {
            out.push(SurfacePresentation::orientable(((2 - euler) / 2) as usize));
        }
        if euler <= 1 {
            out.push(SurfacePresentation::Nonorientable {
                crosscaps: (2 - euler) as usize,
            });
        }
        out
    }
}

impl fmt::Display for SurfacePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SurfacePresentation::Orientable { handles } => write!(f, "genus:{handles}"),
            SurfacePresentation::Nonorientable { crosscaps } => write!(f, "crosscaps:{crosscaps}"),
        }
    }
}

impl FromStr for SurfacePresentation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let num = |t: &str| {
            t.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad surface count {t:?}")))
        };
        match s.trim() {
            "sphere" => Ok(Self::orientable(0)),
            "torus" => Ok(Self::orientable(1)),
            "rp2" => Self::nonorientable(1),
            "klein" => Self::nonorientable(2),
            other => match other.split_once(':') {
                Some(("genus", g)) => Ok(Self::orientable(num(g)?)),
                Some(("crosscaps", q)) => Self::nonorientable(num(q)?),
                _ => Err(Error::Parse(format!("unknown surface {other:?}"))),
            },
        }
    }
}

/// Multiplication table of S_d with elements as image arrays.
pub struct SymmetricGroup {
    d: usize,
    elements: Vec<Vec<u8>>,
    product: Vec<u32>,
    inverse: Vec<usize>,
    cycle_types: Vec<Partition>,
    identity: usize,
}

impl SymmetricGroup {
    fn build(d: usize) -> Self {
        let elements = all_permutations(d);
        let index: HashMap<&[u8], usize> =
            elements.iter().enumerate().map(|(i, e)| (e.as_slice(), i)).collect();
        let n = elements.len();
        let product: Vec<u32> = (0..n * n)
            .into_par_iter()
            .map(|ij| {
                let (a, b) = (&elements[ij / n], &elements[ij % n]);
                // (ab)(x) = a(b(x))
                let c: Vec<u8> = b.iter().map(|&x| a[x as usize]).collect();
                index[c.as_slice()] as u32
            })
            .collect();
        let inverse = elements
            .iter()
            .map(|e| {
                let mut inv = vec![0u8; d];
                for (i, &x) in e.iter().enumerate() {
                    inv[x as usize] = i as u8;
                }
                index[inv.as_slice()]
            })
            .collect();
        let cycle_types = elements.iter().map(|e| cycle_type(e)).collect();
        let identity = index[(0..d as u8).collect::<Vec<_>>().as_slice()];
        SymmetricGroup {
            d,
            elements,
            product,
            inverse,
            cycle_types,
            identity,
        }
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, i: usize) -> &[u8] {
        &self.elements[i]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.product[a * self.order() + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn cycle_type_of(&self, a: usize) -> &Partition {
        &self.cycle_types[a]
    }

    fn class_indicator(&self, delta: &Partition) -> Vec<u128> {
        self.cycle_types.iter().map(|c| u128::from(c == delta)).collect()
    }

    fn commutators(&self) -> Vec<u128> {
        let mut out = vec![0u128; self.order()];
        for a in 0..self.order() {
            for b in 0..self.order() {
                let c = self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)));
                out[c] += 1;
            }
        }
        out
    }

    fn squares(&self) -> Vec<u128> {
        let mut out = vec![0u128; self.order()];
        for a in 0..self.order() {
            out[self.mul(a, a)] += 1;
        }
        out
    }

    /// `(f * g)(z) = Σ_{xy = z} f(x) g(y)`.
    fn convolve(&self, f: &[u128], g: &[u128]) -> Vec<u128> {
        let n = self.order();
        let support: Vec<usize> = (0..n).filter(|&y| g[y] != 0).collect();
        (0..n)
            .into_par_iter()
            .filter(|&x| f[x] != 0)
            .fold(
                || vec![0u128; n],
                |mut acc, x| {
                    for &y in &support {
                        acc[self.mul(x, y)] += f[x] * g[y];
                    }
                    acc
                },
            )
            .reduce(
                || vec![0u128; n],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(u, v)| *u += v);
                    a
                },
            )
    }
}

static GROUPS: OnceLock<RwLock<HashMap<usize, Arc<SymmetricGroup>>>> = OnceLock::new();

pub fn symmetric_group(d: usize) -> Arc<SymmetricGroup> {
    let lock = GROUPS.get_or_init(Default::default);
    if let Some(g) = lock.read().expect("group cache poisoned").get(&d) {
        return g.clone();
    }
    let g = Arc::new(SymmetricGroup::build(d));
    lock.write()
        .expect("group cache poisoned")
        .entry(d)
        .or_insert(g)
        .clone()
}

fn all_permutations(d: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut current: Vec<u8> = Vec::with_capacity(d);
    let mut used = vec![false; d];
    fn rec(d: usize, current: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<Vec<u8>>) {
        if current.len() == d {
            out.push(current.clone());
            return;
        }
        for x in 0..d {
            if !used[x] {
                used[x] = true;
                current.push(x as u8);
                rec(d, current, used, out);
                current.pop();
                used[x] = false;
            }
        }
    }
    rec(d, &mut current, &mut used, &mut out);
    out
}

/// Cycle type by direct decomposition.
pub fn cycle_type(perm: &[u8]) -> Partition {
    let mut seen = vec![false; perm.len()];
    let mut parts = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x] as usize;
            len += 1;
        }
        parts.push(len);
    }
    Partition::from_unsorted(parts)
}

fn check_guards(pres: &SurfacePresentation, d: usize, profiles: &[Partition]) -> Result<()> {
    if d == 0 {
        return Err(Error::out_of_range("degree", "must be at least 1"));
    }
    if d > MAX_DEGREE {
        return Err(Error::guard(format!("oracle limited to d <= {MAX_DEGREE}, got {d}")));
    }
    let gens = pres.generator_count() + profiles.len();
    if gens > MAX_GENERATORS {
        return Err(Error::guard(format!(
            "oracle limited to {MAX_GENERATORS} generators, got {gens}"
        )));
    }
    common_weight(d, profiles)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleOutcome {
    pub count: BigInt,
    pub value: Rational,
}

enum FirstBranch {
    Class,
    Fixed,
}

fn fold_word(pres: &SurfacePresentation, d: usize, profiles: &[Partition], first: FirstBranch) -> BigInt {
    let group = symmetric_group(d);
    let mut dist = vec![0u128; group.order()];
    dist[group.identity()] = 1;
    match *pres {
        SurfacePresentation::Orientable { handles } if handles > 0 => {
            let c = group.commutators();
            for _ in 0..handles {
                dist = group.convolve(&dist, &c);
            }
        }
        SurfacePresentation::Nonorientable { crosscaps } => {
            let s = group.squares();
            for _ in 0..crosscaps {
                dist = group.convolve(&dist, &s);
            }
        }
        _ => {}
    }
    let Some((last, middle)) = profiles.split_last() else {
        return BigInt::from(dist[group.identity()]);
    };
    let mut class_factor = BigInt::from(1);
    for (i, delta) in middle.iter().enumerate() {
        let factor = match (&first, i) {
            (FirstBranch::Fixed, 0) => {
                class_factor = delta.cycle_class_size();
                let rep = (0..group.order())
                    .find(|&g| group.cycle_type_of(g) == delta)
                    .expect("class is nonempty");
                let mut v = vec![0u128; group.order()];
                v[rep] = 1;
                v
            }
            _ => group.class_indicator(delta),
        };
        dist = group.convolve(&dist, &factor);
    }
    if let (FirstBranch::Fixed, true) = (&first, middle.is_empty()) {
        // only one branch point: fix it and test the relation directly
        class_factor = last.cycle_class_size();
        let rep = (0..group.order())
            .find(|&g| group.cycle_type_of(g) == last)
            .expect("class is nonempty");
        return BigInt::from(dist[group.inv(rep)]) * class_factor;
    }
    let total: u128 = (0..group.order())
        .filter(|&g| group.cycle_type_of(group.inv(g)) == last)
        .map(|g| dist[g])
        .sum();
    BigInt::from(total) * class_factor
}

/// Number of tuples solving the relation.
pub fn oracle_count(pres: &SurfacePresentation, d: usize, profiles: &[Partition]) -> Result<BigInt> {
    check_guards(pres, d, profiles)?;
    Ok(fold_word(pres, d, profiles, FirstBranch::Class))
}

/// Same count with the first branch-point permutation pinned to one class
/// representative, times the class size.
pub fn oracle_count_fixed_first(pres: &SurfacePresentation, d: usize, profiles: &[Partition]) -> Result<BigInt> {
    check_guards(pres, d, profiles)?;
    Ok(fold_word(pres, d, profiles, FirstBranch::Fixed))
}

pub fn oracle_hurwitz(pres: &SurfacePresentation, d: usize, profiles: &[Partition]) -> Result<OracleOutcome> {
    let count = oracle_count(pres, d, profiles)?;
    let value = Rational::new(count.clone(), factorial(d));
    Ok(OracleOutcome { count, value })
}

/// Plain nested enumeration of every tuple except the last branch point.
/// Exponential; meant for cross-checking the folded count on small inputs.
pub fn oracle_count_naive(pres: &SurfacePresentation, d: usize, profiles: &[Partition]) -> Result<BigInt> {
    check_guards(pres, d, profiles)?;
    let group = symmetric_group(d);
    let n = group.order();
    let free = pres.generator_count() + profiles.len().saturating_sub(1);
    let tuples = (n as f64).powi(free as i32);
    if tuples > 2e7 {
        return Err(Error::guard(format!("naive enumeration of {tuples:.0} tuples")));
    }
    let classes: Vec<Vec<usize>> = profiles
        .iter()
        .map(|delta| (0..n).filter(|&g| group.cycle_type_of(g) == delta).collect())
        .collect();
    let mut slots: Vec<Vec<usize>> = vec![(0..n).collect(); pres.generator_count()];
    if let Some((_, middle)) = classes.split_last() {
        slots.extend(middle.iter().cloned());
    }
    let mut count = 0u128;
    let mut choice = vec![0usize; slots.len()];
    loop {
        let mut acc = group.identity();
        let picked: Vec<usize> = choice.iter().zip(&slots).map(|(&i, s)| s[i]).collect();
        let mut k = 0;
        match *pres {
            SurfacePresentation::Orientable { handles } => {
                for _ in 0..handles {
                    let (a, b) = (picked[k], picked[k + 1]);
                    let comm = group.mul(group.mul(a, b), group.mul(group.inv(a), group.inv(b)));
                    acc = group.mul(acc, comm);
                    k += 2;
                }
            }
            SurfacePresentation::Nonorientable { crosscaps } => {
                for _ in 0..crosscaps {
                    acc = group.mul(acc, group.mul(picked[k], picked[k]));
                    k += 1;
                }
            }
        }
        for &x in &picked[k..] {
            acc = group.mul(acc, x);
        }
        let ok = match profiles.last() {
            Some(last) => group.cycle_type_of(group.inv(acc)) == last,
            None => acc == group.identity(),
        };
        count += u128::from(ok);
        // odometer
        let mut pos = 0;
        loop {
            if pos == choice.len() {
                return Ok(BigInt::from(count));
            }
            choice[pos] += 1;
            if choice[pos] < slots[pos].len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

/// Orientable and non-orientable presentations of the same even `E <= 0` agree.
pub fn presentation_independence_check(euler: i64, d: usize, profiles: &[Partition]) -> Result<bool> {
    if euler > 0 || euler % 2 != 0 {
        return Err(Error::out_of_range("euler", format!("need even E <= 0, got {euler}")));
    }
    let orientable = SurfacePresentation::orientable(((2 - euler) / 2) as usize);
    let nonorientable = SurfacePresentation::nonorientable((2 - euler) as usize)?;
    Ok(oracle_count(&orientable, d, profiles)? == oracle_count(&nonorientable, d, profiles)?)
}

/// Number of `R` in S_d with `R² = g` for a fixed `g` of cycle type `delta`.
pub fn square_root_count(delta: &Partition) -> Result<u64> {
    let d = delta.weight();
    if d > 8 {
        return Err(Error::guard(format!("square-root count limited to d <= 8, got {d}")));
    }
    let mut target: Vec<u8> = Vec::with_capacity(d);
    let mut start = 0u8;
    for &len in delta.parts() {
        for i in 0..len as u8 {
            target.push(start + (i + 1) % len as u8);
        }
        start += len as u8;
    }
    let count = all_permutations(d)
        .into_par_iter()
        .filter(|r| r.iter().map(|&x| r[x as usize]).eq(target.iter().copied()))
        .count();
    Ok(count as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::partitions_of;
    use crate::scalar::{int, rat};

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn examples() {
        let rp2 = SurfacePresentation::nonorientable(1).unwrap();
        let r = oracle_hurwitz(&rp2, 3, &[]).unwrap();
        assert_eq!(r.count, BigInt::from(4));
        assert_eq!(r.value, rat(2, 3));
        let sphere = SurfacePresentation::orientable(0);
        assert_eq!(oracle_hurwitz(&sphere, 2, &[p("2"), p("2")]).unwrap().value, rat(1, 2));
        assert_eq!(oracle_hurwitz(&sphere, 1, &[p("1")]).unwrap().value, int(1));
        assert_eq!(oracle_hurwitz(&sphere, 1, &[]).unwrap().value, int(1));
    }

    #[test]
    fn parsing() {
        assert_eq!("rp2".parse::<SurfacePresentation>().unwrap().euler(), 1);
        assert_eq!("klein".parse::<SurfacePresentation>().unwrap().euler(), 0);
        assert_eq!("torus".parse::<SurfacePresentation>().unwrap().euler(), 0);
        assert_eq!("genus:3".parse::<SurfacePresentation>().unwrap().euler(), -4);
        assert_eq!("crosscaps:3".parse::<SurfacePresentation>().unwrap().euler(), -1);
        assert!("crosscaps:0".parse::<SurfacePresentation>().is_err());
        assert!("cube".parse::<SurfacePresentation>().is_err());
        assert_eq!(SurfacePresentation::for_euler(0).len(), 2);
        assert_eq!(SurfacePresentation::for_euler(1).len(), 1);
        assert_eq!(SurfacePresentation::for_euler(2).len(), 1);
    }

    #[test]
    fn guards() {
        let rp2 = SurfacePresentation::nonorientable(1).unwrap();
        let seven = vec![p("7"); 4];
        assert!(oracle_hurwitz(&rp2, 7, &seven).unwrap_err().is_guard());
        let many = vec![p("2,1"); 8];
        assert!(oracle_hurwitz(&rp2, 3, &many).unwrap_err().is_guard());
        assert!(matches!(
            oracle_hurwitz(&rp2, 3, &[p("2")]),
            Err(Error::WeightMismatch { .. })
        ));
    }

    #[test]
    fn presentation_independence_examples() {
        assert!(presentation_independence_check(0, 2, &[]).unwrap());
        let torus = SurfacePresentation::orientable(1);
        // Σ_λ 1 over the two partitions of 2, times 2!
        assert_eq!(oracle_count(&torus, 2, &[]).unwrap(), BigInt::from(4));
        assert!(presentation_independence_check(0, 3, &[p("3")]).unwrap());
        assert!(presentation_independence_check(-2, 2, &[]).unwrap());
        assert!(presentation_independence_check(1, 2, &[]).is_err());
    }

    #[test]
    fn folded_matches_naive() {
        let cases: Vec<(SurfacePresentation, usize, Vec<Partition>)> = vec![
            (SurfacePresentation::orientable(0), 4, vec![p("2,1,1"), p("3,1"), p("2,2")]),
            (SurfacePresentation::orientable(1), 3, vec![p("3")]),
            (SurfacePresentation::nonorientable(1).unwrap(), 4, vec![p("2,1,1"), p("3,1")]),
            (SurfacePresentation::nonorientable(2).unwrap(), 3, vec![p("2,1")]),
            (SurfacePresentation::nonorientable(3).unwrap(), 3, vec![]),
            (SurfacePresentation::orientable(2), 3, vec![]),
        ];
        for (pres, d, profiles) in cases {
            assert_eq!(
                oracle_count(&pres, d, &profiles).unwrap(),
                oracle_count_naive(&pres, d, &profiles).unwrap(),
                "{pres} d={d}"
            );
        }
    }

    #[test]
    fn conjugation_invariance() {
        for pres in [
            SurfacePresentation::orientable(0),
            SurfacePresentation::orientable(1),
            SurfacePresentation::nonorientable(1).unwrap(),
        ] {
            for d in 1..=4 {
                for a in partitions_of(d) {
                    for b in partitions_of(d) {
                        let profiles = [a.clone(), b.clone()];
                        assert_eq!(
                            oracle_count(&pres, d, &profiles).unwrap(),
                            oracle_count_fixed_first(&pres, d, &profiles).unwrap()
                        );
                    }
                    assert_eq!(
                        oracle_count(&pres, d, std::slice::from_ref(&a)).unwrap(),
                        oracle_count_fixed_first(&pres, d, std::slice::from_ref(&a)).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn cycle_types_and_square_roots() {
        assert_eq!(cycle_type(&[1, 2, 0, 4, 3]), p("3,2"));
        assert_eq!(cycle_type(&[]), Partition::empty());
        assert_eq!(square_root_count(&p("1,1,1")).unwrap(), 4);
        assert_eq!(square_root_count(&p("2,1")).unwrap(), 0);
        assert_eq!(square_root_count(&p("2,2")).unwrap(), 2);
        assert_eq!(square_root_count(&p("3")).unwrap(), 1);
    }
}
