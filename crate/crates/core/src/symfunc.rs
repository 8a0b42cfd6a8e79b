//! Schur functions as polynomials in power sums, alphabets and their specializations.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::error::{Error, Result};
use crate::partition::{partitions_of, Partition};
use crate::scalar::{self as sc, format_rational, int, Rational};

/// Finite linear combination of power-sum monomials `p_Δ` with exact coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseSymPoly {
    terms: BTreeMap<Partition, Rational>,
}

impl SparseSymPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Partition::empty(), Rational::one())
    }

    pub fn monomial(delta: Partition, coeff: Rational) -> Self {
        let mut out = Self::zero();
        out.add_term(delta, coeff);
        out
    }

    /// `p_m`.
    pub fn power_sum(m: usize) -> Self {
        Self::monomial(Partition::row(m), Rational::one())
    }

    pub fn terms(&self) -> &BTreeMap<Partition, Rational> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, delta: &Partition) -> Rational {
        self.terms.get(delta).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, delta: Partition, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(delta);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), v * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_truncated(other, usize::MAX)
    }

    /// Product keeping only monomials of weight `<= max_weight`.
    pub fn mul_truncated(&self, other: &Self, max_weight: usize) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if a.weight() + b.weight() <= max_weight {
                    out.add_term(a.union(b), x * y);
                }
            }
        }
        out
    }

    pub fn truncate(&self, max_weight: usize) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.weight() <= max_weight)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// `∂/∂p_m`.
    pub fn derivative(&self, m: usize) -> Self {
        let mut out = Self::zero();
        for (k, v) in &self.terms {
            let mult = k.multiplicity(m);
            if mult > 0 {
                let rest = k.remove_part(m).expect("part present");
                out.add_term(rest, v * int(mult as i64));
            }
        }
        out
    }

    pub fn max_weight(&self) -> usize {
        self.terms.keys().map(Partition::weight).max().unwrap_or(0)
    }

    /// Substitutes alphabet values for the power sums.
    pub fn eval<S: sc::Scalar>(&self, x: &PowerAlphabet<S>) -> Result<S> {
        let mut acc = S::zero();
        for (delta, c) in &self.terms {
            if let Some(&top) = delta.parts().first() {
                if top > x.m_max() {
                    return Err(Error::InsufficientTruncation {
                        m_max: x.m_max(),
                        needed: top,
                    });
                }
            }
            let mut term = S::from_rational(c);
            for &m in delta.parts() {
                term = term * x.p(m).clone();
            }
            acc = acc + term;
        }
        Ok(acc)
    }
}

impl Serialize for SparseSymPoly {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        let mut map = s.serialize_map(Some(self.terms.len()))?;
        for (k, v) in &self.terms {
            map.serialize_entry(&k.to_string(), &format_rational(v))?;
        }
        map.end()
    }
}

type Cache<K, V> = OnceLock<RwLock<HashMap<K, Arc<V>>>>;

fn cached<K, V>(cache: &'static Cache<K, V>, key: &K, build: impl FnOnce() -> V) -> Arc<V>
where
    K: std::hash::Hash + Eq + Clone,
{
    let lock = cache.get_or_init(Default::default);
    if let Some(v) = lock.read().expect("cache poisoned").get(key) {
        return v.clone();
    }
    let value = Arc::new(build());
    lock.write()
        .expect("cache poisoned")
        .entry(key.clone())
        .or_insert(value)
        .clone()
}

static H_CACHE: Cache<usize, SparseSymPoly> = OnceLock::new();
static SCHUR_CACHE: Cache<Partition, SparseSymPoly> = OnceLock::new();

/// `h_k`: coefficient of `z^k` in `exp(Σ p_m z^m / m)`, zero for negative `k`.
///
/// Built by the Newton recursion `k h_k = Σ_{m=1}^{k} p_m h_{k-m}`.
pub fn complete_homogeneous(k: i64) -> Arc<SparseSymPoly> {
    if k < 0 {
        return Arc::new(SparseSymPoly::zero());
    }
    let k = k as usize;
    cached(&H_CACHE, &k, || {
        if k == 0 {
            return SparseSymPoly::one();
        }
        let mut acc = SparseSymPoly::zero();
        for m in 1..=k {
            let lower = complete_homogeneous((k - m) as i64);
            acc = acc.add(&SparseSymPoly::power_sum(m).mul(&lower));
        }
        acc.scale(&Rational::new(1.into(), (k as i64).into()))
    })
}

/// Jacobi–Trudi determinant `det[h_{λ_i - i + j}]`.
pub fn schur_poly(lambda: &Partition) -> Arc<SparseSymPoly> {
    cached(&SCHUR_CACHE, lambda, || jacobi_trudi(lambda))
}

fn jacobi_trudi(lambda: &Partition) -> SparseSymPoly {
    let l = lambda.length();
    if l == 0 {
        return SparseSymPoly::one();
    }
    // Laplace expansion along rows, memoized on the set of used columns.
    let mut memo: HashMap<u32, SparseSymPoly> = HashMap::new();
    minor(lambda, l, 0, &mut memo)
}

fn minor(lambda: &Partition, l: usize, used: u32, memo: &mut HashMap<u32, SparseSymPoly>) -> SparseSymPoly {
    let row = used.count_ones() as usize;
    if row == l {
        return SparseSymPoly::one();
    }
    if let Some(v) = memo.get(&used) {
        return v.clone();
    }
    let mut acc = SparseSymPoly::zero();
    let mut free_before = 0usize;
    for col in 0..l {
        if used & (1 << col) != 0 {
            continue;
        }
        let idx = lambda.part(row) as i64 - row as i64 + col as i64;
        if idx >= 0 {
            let entry = complete_homogeneous(idx);
            let rest = minor(lambda, l, used | (1 << col), memo);
            if !rest.is_zero() {
                let term = entry.mul(&rest);
                acc = if free_before.is_multiple_of(2) { acc.add(&term) } else { acc.sub(&term) };
            }
        }
        free_before += 1;
    }
    memo.insert(used, acc.clone());
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlphabetKind {
    Explicit,
    PInfinity,
    POfA,
    POfQt,
    /// Trace alphabet of an `size × size` matrix.
    MatrixTraces { size: usize },
}

/// Values of `p_1 … p_{m_max}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerAlphabet<S> {
    values: Vec<S>,
    kind: AlphabetKind,
}

impl<S: sc::Scalar> PowerAlphabet<S> {
    /// `values[m - 1] = p_m`.
    pub fn explicit(values: Vec<S>) -> Self {
        PowerAlphabet {
            values,
            kind: AlphabetKind::Explicit,
        }
    }

    pub fn p_infinity(m_max: usize) -> Self {
        let values = (1..=m_max)
            .map(|m| if m == 1 { S::one() } else { S::zero() })
            .collect();
        PowerAlphabet {
            values,
            kind: AlphabetKind::PInfinity,
        }
    }

    /// `p_m = a` for every `m`; at `a = N` this is the alphabet of the identity matrix.
    pub fn p_of_a(a: S, m_max: usize) -> Self {
        PowerAlphabet {
            values: vec![a; m_max],
            kind: AlphabetKind::POfA,
        }
    }

    /// `p_m = (1 - q^m) / (1 - t^m)`.
    pub fn p_of_qt(q: &S, t: &S, m_max: usize) -> Result<Self> {
        let mut values = Vec::with_capacity(m_max);
        for m in 1..=m_max as i64 {
            let num = S::one() - q.powi(m).expect("nonnegative power");
            let den = S::one() - t.powi(m).expect("nonnegative power");
            let v = num
                .checked_div(&den)
                .ok_or_else(|| Error::DivisionByZero(format!("1 - t^{m} vanishes")))?;
            values.push(v);
        }
        Ok(PowerAlphabet {
            values,
            kind: AlphabetKind::POfQt,
        })
    }

    /// Traces of powers of a square matrix given by rows.
    pub fn matrix_traces(rows: &[Vec<S>], m_max: usize) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Parse("matrix must be square".into()));
        }
        let mut values = Vec::with_capacity(m_max);
        let mut power: Vec<Vec<S>> = rows.to_vec();
        for m in 1..=m_max {
            if m > 1 {
                power = (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                (0..n).fold(S::zero(), |acc, k| {
                                    acc + power[i][k].clone() * rows[k][j].clone()
                                })
                            })
                            .collect()
                    })
                    .collect();
            }
            values.push((0..n).fold(S::zero(), |acc, i| acc + power[i][i].clone()));
        }
        Ok(PowerAlphabet {
            values,
            kind: AlphabetKind::MatrixTraces { size: n },
        })
    }

    pub fn m_max(&self) -> usize {
        self.values.len()
    }

    pub fn kind(&self) -> AlphabetKind {
        self.kind
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    /// `p_m`, 1-based.
    pub fn p(&self, m: usize) -> &S {
        &self.values[m - 1]
    }

    /// `p_m ↦ -p_m`, reported as explicit.
    pub fn negated(&self) -> Self {
        PowerAlphabet {
            values: self.values.iter().map(|v| -v.clone()).collect(),
            kind: AlphabetKind::Explicit,
        }
    }
}

impl PowerAlphabet<Complex64> {
    /// Trace alphabet of a complex matrix; only matrix products, no eigensolver.
    pub fn from_matrix(m: &DMatrix<Complex64>, m_max: usize) -> Self {
        assert!(m.is_square(), "trace alphabet needs a square matrix");
        let mut values = Vec::with_capacity(m_max);
        let mut power = m.clone();
        for k in 1..=m_max {
            if k > 1 {
                power = &power * m;
            }
            values.push(power.trace());
        }
        PowerAlphabet {
            values,
            kind: AlphabetKind::MatrixTraces { size: m.nrows() },
        }
    }
}

pub fn eval_schur<S: sc::Scalar>(lambda: &Partition, x: &PowerAlphabet<S>) -> Result<S> {
    if x.m_max() < lambda.weight() {
        return Err(Error::InsufficientTruncation {
            m_max: x.m_max(),
            needed: lambda.weight(),
        });
    }
    if let AlphabetKind::MatrixTraces { size } = x.kind() {
        if lambda.length() > size {
            return Ok(S::zero());
        }
    }
    schur_poly(lambda).eval(x)
}

/// `(a)_λ = Π (a + j - i)` over cells.
pub fn pochhammer_lambda<S: sc::Scalar>(a: &S, lambda: &Partition) -> S {
    lambda
        .contents()
        .fold(S::one(), |acc, c| acc * (a.clone() + S::from_i64(c)))
}

/// `(q;t)_λ = Π (1 - q t^{j-i})` over cells.
pub fn qt_pochhammer_lambda<S: sc::Scalar>(q: &S, t: &S, lambda: &Partition) -> Result<S> {
    let mut acc = S::one();
    for c in lambda.contents() {
        let tc = t
            .powi(c)
            .ok_or_else(|| Error::DivisionByZero(format!("t^{c} with t = 0")))?;
        acc = acc * (S::one() - q.clone() * tc);
    }
    Ok(acc)
}

/// `r_λ(n) = Π r(n + j - i)` over cells.
pub fn content_product<S, F>(r: F, n: &S, lambda: &Partition) -> Result<S>
where
    S: sc::Scalar,
    F: Fn(&S) -> Result<S>,
{
    let mut acc = S::one();
    for c in lambda.contents() {
        acc = acc * r(&(n.clone() + S::from_i64(c)))?;
    }
    Ok(acc)
}

/// `s_λ(p) = (-1)^{|λ|} s_{λ'}(-p)`.
pub fn conjugation_identity_check<S: sc::Scalar>(lambda: &Partition, x: &PowerAlphabet<S>) -> Result<bool> {
    let lhs = eval_schur(lambda, x)?;
    let rhs = eval_schur(&lambda.conjugate(), &x.negated())?;
    let rhs = if lambda.weight().is_multiple_of(2) { rhs } else { -rhs };
    Ok(lhs == rhs)
}

/// Degree-by-degree comparison of `exp(Σ p_m p*_m / m)` with `Σ_λ s_λ(p) s_λ(p*)`.
pub fn cauchy_littlewood_check(d_max: usize) -> Result<bool> {
    if d_max > 8 {
        return Err(Error::guard(format!("Cauchy–Littlewood check limited to d_max <= 8, got {d_max}")));
    }
    for d in 0..=d_max {
        // h_d with p_m replaced by p_m p*_m is the degree-d part of the exponential.
        let mut lhs: BTreeMap<(Partition, Partition), Rational> = BTreeMap::new();
        for (delta, c) in complete_homogeneous(d as i64).terms() {
            lhs.insert((delta.clone(), delta.clone()), c.clone());
        }
        let mut rhs: BTreeMap<(Partition, Partition), Rational> = BTreeMap::new();
        for lambda in partitions_of(d) {
            let s = schur_poly(&lambda);
            for (a, x) in s.terms() {
                for (b, y) in s.terms() {
                    *rhs.entry((a.clone(), b.clone())).or_insert_with(Rational::zero) += x * y;
                }
            }
        }
        rhs.retain(|_, v| !v.is_zero());
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{factorial, rat};
    use proptest::prelude::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn poly(terms: &[(&str, Rational)]) -> SparseSymPoly {
        let mut out = SparseSymPoly::zero();
        for (k, v) in terms {
            out.add_term(p(k), v.clone());
        }
        out
    }

    #[test]
    fn complete_homogeneous_examples() {
        assert_eq!(*complete_homogeneous(0), SparseSymPoly::one());
        assert_eq!(*complete_homogeneous(1), poly(&[("1", int(1))]));
        assert_eq!(
            *complete_homogeneous(3),
            poly(&[("1,1,1", rat(1, 6)), ("2,1", rat(1, 2)), ("3", rat(1, 3))])
        );
        assert!(complete_homogeneous(-2).is_zero());
        // coefficients are 1/z_Δ
        for k in 0..=8 {
            let h = complete_homogeneous(k as i64);
            for delta in partitions_of(k) {
                assert_eq!(h.coefficient(&delta), Rational::new(1.into(), delta.z()));
            }
        }
    }

    #[test]
    fn schur_examples() {
        assert_eq!(*schur_poly(&p("1")), poly(&[("1", int(1))]));
        assert_eq!(*schur_poly(&p("2,1")), poly(&[("1,1,1", rat(1, 3)), ("3", rat(-1, 3))]));
        assert_eq!(*schur_poly(&p("2")), poly(&[("1,1", rat(1, 2)), ("2", rat(1, 2))]));
        assert_eq!(*schur_poly(&Partition::empty()), SparseSymPoly::one());
    }

    fn hook_dim(l: &Partition) -> Rational {
        let prod: usize = l.hook_lengths().iter().product();
        Rational::new(factorial(l.weight()), prod.into())
    }

    #[test]
    fn leading_coefficient_is_dimension_over_factorial() {
        for d in 0..=8 {
            for l in partitions_of(d) {
                let expected = hook_dim(&l) / crate::scalar::big(&factorial(d));
                assert_eq!(schur_poly(&l).coefficient(&Partition::column(d)), expected);
                let pinf = PowerAlphabet::<Rational>::p_infinity(d);
                assert_eq!(eval_schur(&l, &pinf).unwrap(), expected);
            }
        }
    }

    #[test]
    fn eval_examples() {
        let x = PowerAlphabet::<Rational>::p_infinity(1);
        assert_eq!(eval_schur(&p("1"), &x).unwrap(), int(1));
        let x = PowerAlphabet::p_of_a(int(3), 3);
        assert_eq!(eval_schur(&p("2,1"), &x).unwrap(), int(8));
        let m = PowerAlphabet::matrix_traces(&[vec![int(2)]], 2).unwrap();
        assert_eq!(eval_schur(&p("1,1"), &m).unwrap(), int(0));
        assert_eq!(eval_schur(&p("2"), &m).unwrap(), int(4));
        let short = PowerAlphabet::p_of_a(int(3), 2);
        assert!(matches!(
            eval_schur(&p("2,1"), &short),
            Err(Error::InsufficientTruncation { .. })
        ));
    }

    #[test]
    fn identity_matrix_matches_p_of_n() {
        for n in 1..=5usize {
            let rows: Vec<Vec<Rational>> = (0..n)
                .map(|i| (0..n).map(|j| if i == j { int(1) } else { int(0) }).collect())
                .collect();
            let traces = PowerAlphabet::matrix_traces(&rows, 5).unwrap();
            let pn = PowerAlphabet::p_of_a(int(n as i64), 5);
            for d in 0..=5 {
                for l in partitions_of(d) {
                    assert_eq!(eval_schur(&l, &traces).unwrap(), eval_schur(&l, &pn).unwrap());
                }
            }
        }
    }

    #[test]
    fn pochhammer_examples() {
        let a = rat(7, 5);
        assert_eq!(pochhammer_lambda(&a, &p("1")), a);
        assert_eq!(pochhammer_lambda(&int(3), &p("2")), int(12));
        assert_eq!(pochhammer_lambda(&int(3), &p("1,1")), int(6));
        assert_eq!(qt_pochhammer_lambda(&int(0), &rat(1, 3), &p("3,2")).unwrap(), int(1));
        assert_eq!(qt_pochhammer_lambda(&rat(2, 7), &rat(1, 3), &p("1")).unwrap(), rat(5, 7));
        assert_eq!(qt_pochhammer_lambda(&rat(1, 2), &rat(1, 3), &p("2")).unwrap(), rat(5, 12));
        assert!(qt_pochhammer_lambda(&rat(1, 2), &int(0), &p("1,1")).is_err());
    }

    #[test]
    fn pochhammer_row_form() {
        let a = rat(-5, 3);
        for d in 0..=8 {
            for l in partitions_of(d) {
                let mut rows = int(1);
                for (i, &li) in l.parts().iter().enumerate() {
                    for j in 0..li {
                        rows *= a.clone() - int(i as i64) + int(j as i64);
                    }
                }
                assert_eq!(pochhammer_lambda(&a, &l), rows);
            }
        }
    }

    #[test]
    fn content_product_examples() {
        let one = |_: &Rational| Ok(int(1));
        assert_eq!(content_product(one, &int(4), &p("3,1")).unwrap(), int(1));
        let id = |x: &Rational| Ok(x.clone());
        let l = p("3,2");
        assert_eq!(content_product(id, &int(5), &l).unwrap(), pochhammer_lambda(&int(5), &l));
        let sq = |x: &Rational| Ok(x * x);
        assert_eq!(content_product(sq, &int(3), &p("2")).unwrap(), int(144));
    }

    #[test]
    fn conjugation_identity_examples() {
        let x = PowerAlphabet::explicit(vec![rat(3, 2), rat(-1, 5), rat(2, 7), int(4)]);
        assert!(conjugation_identity_check(&p("1"), &x).unwrap());
        assert!(conjugation_identity_check(&p("2,1"), &x).unwrap());
        assert!(conjugation_identity_check(&p("3,1"), &PowerAlphabet::p_of_a(int(2), 4)).unwrap());
    }

    #[test]
    fn cauchy_littlewood() {
        assert!(cauchy_littlewood_check(1).unwrap());
        assert!(cauchy_littlewood_check(2).unwrap());
        assert!(cauchy_littlewood_check(6).unwrap());
        assert!(cauchy_littlewood_check(9).is_err());
    }

    #[test]
    fn derivative_and_truncation() {
        let f = poly(&[("2,1,1", int(3)), ("3", int(1))]);
        assert_eq!(f.derivative(1), poly(&[("2,1", int(6))]));
        assert_eq!(f.derivative(3), SparseSymPoly::one());
        assert_eq!(f.truncate(3), poly(&[("3", int(1))]));
        let g = poly(&[("1", int(1))]);
        assert_eq!(g.mul_truncated(&f, 4), poly(&[("3,1", int(1))]));
    }

    #[test]
    fn json_shape() {
        let s = serde_json::to_string(&*schur_poly(&p("2,1"))).unwrap();
        assert_eq!(s, r#"{"1,1,1":"1/3","3":"-1/3"}"#);
    }

    proptest! {
        #[test]
        fn prop_conjugation_identity(vals in proptest::collection::vec((-9i64..9, 1i64..6), 5), idx in 0usize..18) {
            let x = PowerAlphabet::explicit(vals.iter().map(|&(n, d)| rat(n, d)).collect());
            let all: Vec<Partition> = (1..=5).flat_map(partitions_of).collect();
            let l = &all[idx % all.len()];
            prop_assert!(conjugation_identity_check(l, &x).unwrap());
        }
    }
}
