//! Closed forms and structural transforms: block and exponential
//! collections, translation / scaling / reflection, the reversibility index
//! and the `(0, 1, 2^m)` period-bound experiment.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::{Gf2Poly, Word};
use crate::recursion::PositionCollection;
use crate::spectrum::{
    char_poly, compute_spectrum, default_period_bound, has_exact_period, spectrum_poly, Method,
    Spectrum, SpectrumJson, AUTO_POLY_MAX_DELTA, DEFAULT_ORACLE_CAP,
};

/// Largest `h` accepted for block collections (polynomial method beyond the oracle).
pub const MAX_BLOCK_H: u64 = AUTO_POLY_MAX_DELTA as u64;
/// Largest `n` for the divisor-restricted exponential check.
pub const MAX_EXP_N: u32 = 14;
/// Largest `n` for which the exponential report also runs a full polynomial scan.
pub const MAX_EXP_SCAN_N: u32 = 10;
/// Largest exponent in the period-bound experiment.
pub const MAX_CONJECTURE_M: u32 = 6;

fn over_cap(name: &'static str, value: u64, cap: u64) -> Error {
    Error::OverCap { name, value, cap }
}

/// `(a, a+1, …, a+h)`.
pub fn block_collection(a: usize, h: usize) -> Result<PositionCollection> {
    PositionCollection::new((a..=a + h).collect())
}

/// `(1, 2, 4, …, 2ⁿ)`.
pub fn exponential_collection(n: u32) -> Result<PositionCollection> {
    if n == 0 || n > 40 {
        return Err(Error::InvalidParameter(format!(
            "exponential collection needs 1 <= n <= 40, got {n}"
        )));
    }
    PositionCollection::new((0..=n).map(|i| 1usize << i).collect())
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Exact periods of `(0, 1, …, h)` in closed form: the divisors of `h+1`,
/// without 1 when `h+1` is odd and without 2 when `h+1 ≡ 2 (mod 4)`.
///
/// The characteristic polynomial is `(x^{h+1} + 1)/(x + 1)`, so the
/// period-`t` solution space is `gcd(t, h+1) − 1` dimensional for odd `h+1`.
/// For even `h+1 = 2^e·u` the factor `x + 1` survives with multiplicity
/// `2^e − 1`; period 2 is then new exactly when that multiplicity is 1.
pub fn block_spectrum(h: u64) -> Result<BTreeSet<u64>> {
    if h == 0 {
        return Err(Error::InvalidParameter(
            "block extent h must be >= 1".into(),
        ));
    }
    let len = h + 1;
    Ok(divisors(len)
        .into_iter()
        .filter(|&d| !(d == 1 && len % 2 == 1))
        .filter(|&d| !(d == 2 && len % 4 == 2))
        .collect())
}

/// `Some(z + 1)` when `2^y + 2^z` is a power of two, which happens only for `y = z`.
pub fn pow2_sum_exponent(y: u32, z: u32) -> Option<u32> {
    (y == z).then_some(z + 1)
}

/// The parameters `(k, η)` of the closed word: `k` is the least `z` with
/// `2^z − 1 ≥ 2ⁿ − m`, and `η = m − (2ⁿ − 2^k)`.
pub fn exp_word_params(n: u32, m: u64) -> Result<(u32, u64)> {
    if !(2..=30).contains(&n) {
        return Err(Error::InvalidParameter(format!(
            "closed word needs 2 <= n <= 30, got {n}"
        )));
    }
    let g = (1u64 << n) - 1;
    if m == 0 || m > g {
        return Err(Error::InvalidParameter(format!(
            "closed word needs 1 <= m <= {g}, got {m}"
        )));
    }
    let k = (0..=n)
        .find(|&z| (1u64 << z) > (1u64 << n) - m)
        .expect("z = n qualifies");
    Ok((k, m - ((1u64 << n) - (1u64 << k))))
}

/// Number of units in [`exp_closed_word`]: `3 + k(n − k + 1)`.
pub fn exp_word_unit_count(n: u32, m: u64) -> Result<u64> {
    let (k, _) = exp_word_params(n, m)?;
    Ok(3 + u64::from(k) * u64::from(n - k + 1))
}

/// Iterating `ℰₙ` for `2^{n+1} − 1` steps from `K_{m,2ⁿ−1}`, assembled in
/// closed form:
///
/// `K_{m,2ⁿ−1} · K_{η,η} · ∏_{j=k}^{n} [ ∏_{i=0}^{k−2} K_{1,2^i} · K_{1, 2^j − 2^{k−1} + 1 − m[j=n]} ] · K_{m,2ⁿ−1}`
pub fn exp_closed_word(n: u32, m: u64) -> Result<Word> {
    let (k, eta) = exp_word_params(n, m)?;
    let g = (1usize << n) - 1;
    let m = m as usize;
    let kw = |a: usize, b: usize| Word::constituent(a, b).expect("in range");
    let mut w = kw(m, g);
    w.append(&kw(eta as usize, eta as usize));
    for j in k..=n {
        for i in 0..k.saturating_sub(1) {
            w.append(&kw(1, 1 << i));
        }
        let tail = (1usize << j) - (1usize << (k - 1)) + 1 - if j == n { m } else { 0 };
        w.append(&kw(1, tail));
    }
    w.append(&kw(m, g));
    debug_assert_eq!(w.len(), 3 * (1 << n) - 2);
    Ok(w)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpBoundReport {
    pub n: u32,
    /// `2^{n+1} − 1`.
    pub modulus: u64,
    /// Whether `p(x)` divides `x^{modulus} + 1`.
    pub divides: bool,
    /// Exact periods among the divisors of `modulus`, descending.
    pub spectrum: Vec<u64>,
}

/// Checks that `p_{ℰₙ}` divides `x^{2^{n+1}−1} + 1`, then extracts the exact
/// periods among the divisors of `2^{n+1} − 1`.
pub fn exp_bound_check(n: u32) -> Result<ExpBoundReport> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "exponential check needs n >= 2, got {n}"
        )));
    }
    if n > MAX_EXP_N {
        return Err(over_cap("n", n.into(), MAX_EXP_N.into()));
    }
    let c = exponential_collection(n)?;
    let p = char_poly(&c)?;
    let modulus = (1u64 << (n + 1)) - 1;
    let divides = Gf2Poly::monomial(1).powmod(modulus, p.poly()).is_one();
    let mut dims = HashMap::new();
    let mut dim = |t: u64| *dims.entry(t).or_insert_with(|| p.solution_dim(t));
    let divs = divisors(modulus);
    // populate the memo so the exact-period test can borrow it immutably
    for &t in &divs {
        dim(t);
    }
    let mut spectrum: Vec<u64> = divs
        .iter()
        .copied()
        .filter(|&t| has_exact_period(t, &prime_factors(t), |u| dims[&u]))
        .collect();
    spectrum.reverse();
    Ok(ExpBoundReport {
        n,
        modulus,
        divides,
        spectrum,
    })
}

/// `C + a`.
pub fn translate(c: &PositionCollection, a: i64) -> Result<PositionCollection> {
    let first = c.first() as i64;
    if first + a < 0 {
        return Err(Error::InvalidParameter(format!(
            "translation by {a} moves position {first} below zero"
        )));
    }
    PositionCollection::new(
        c.positions()
            .iter()
            .map(|&x| (x as i64 + a) as usize)
            .collect(),
    )
}

/// `aC`.
pub fn scale(c: &PositionCollection, a: u64) -> Result<PositionCollection> {
    if a == 0 {
        return Err(Error::InvalidParameter("scale factor must be >= 1".into()));
    }
    PositionCollection::new(c.positions().iter().map(|&x| x * a as usize).collect())
}

/// Largest divisor of `n` all of whose primes divide `m`.
pub fn eta(n: u64, m: u64) -> u64 {
    assert!(n >= 1 && m >= 1, "eta needs positive arguments");
    let mut rest = n;
    loop {
        let g = gcd(rest, m);
        if g == 1 {
            return n / rest;
        }
        while rest.is_multiple_of(g) {
            rest /= g;
        }
        // primes of m left in rest may have a smaller shared power; repeat
    }
}

/// Kernel of `aC` predicted from the kernel of `C`.
pub fn predicted_scaled_kernel(kernel: &BTreeSet<u64>, a: u64) -> BTreeSet<u64> {
    kernel.iter().map(|&b| b * eta(a, b)).collect()
}

/// `(x₁+x_r − x_r, …, x₁+x_r − x₁)`.
pub fn reflect(c: &PositionCollection) -> PositionCollection {
    let a = c.first() + c.last();
    PositionCollection::new(c.positions().iter().rev().map(|&x| a - x).collect())
        .expect("reflection keeps positions increasing")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kappa {
    /// Infinitely many coprime periods.
    Zero,
    /// `1 / d`.
    OneOver(u64),
}

impl fmt::Display for Kappa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kappa::Zero => write!(f, "0"),
            Kappa::OneOver(1) => write!(f, "1"),
            Kappa::OneOver(d) => write!(f, "1/{d}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReversibilityIndex {
    pub kappa: Kappa,
    /// A maximum pairwise-coprime set of kernel elements; empty when κ is 0 or 1.
    pub witness: Vec<u64>,
}

/// Largest pairwise-coprime subset, ties broken toward the lexicographically
/// smallest ascending list.
pub fn max_coprime_subset(items: &BTreeSet<u64>) -> Vec<u64> {
    fn go(items: &[u64], i: usize, cur: &mut Vec<u64>, best: &mut Vec<u64>) {
        if cur.len() + (items.len() - i) <= best.len() {
            return;
        }
        if i == items.len() {
            *best = cur.clone();
            return;
        }
        if cur.iter().all(|&c| gcd(c, items[i]) == 1) {
            cur.push(items[i]);
            go(items, i + 1, cur, best);
            cur.pop();
        }
        go(items, i + 1, cur, best);
    }
    let items: Vec<u64> = items.iter().copied().collect();
    let mut best = Vec::new();
    go(&items, 0, &mut Vec::new(), &mut best);
    best
}

/// Index from a kernel already known to belong to an odd collection with `r ≥ 3`.
pub fn index_from_kernel(kernel: &BTreeSet<u64>) -> ReversibilityIndex {
    let witness = max_coprime_subset(kernel);
    ReversibilityIndex {
        kappa: Kappa::OneOver(1 + witness.len() as u64),
        witness,
    }
}

pub fn reversibility_index(c: &PositionCollection) -> Result<ReversibilityIndex> {
    if c.len() == 1 {
        return Ok(ReversibilityIndex {
            kappa: Kappa::OneOver(1),
            witness: Vec::new(),
        });
    }
    if c.len().is_multiple_of(2) {
        return Ok(ReversibilityIndex {
            kappa: Kappa::Zero,
            witness: Vec::new(),
        });
    }
    let s = compute_spectrum(c, Method::Auto, None, DEFAULT_ORACLE_CAP)?;
    Ok(index_from_kernel(s.kernel()))
}

/// Closed-form prediction next to an independent computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyJson {
    #[serde(flatten)]
    pub spectrum: SpectrumJson,
    pub family: &'static str,
    pub predicted: Vec<u64>,
    pub computed: Vec<u64>,
    #[serde(rename = "match")]
    pub matches: bool,
}

fn family_json(
    c: &PositionCollection,
    s: &Spectrum,
    family: &'static str,
    predicted: Vec<u64>,
) -> FamilyJson {
    let computed = s.periods_desc();
    FamilyJson {
        spectrum: s.to_json(c),
        family,
        matches: predicted == computed,
        predicted,
        computed,
    }
}

/// Closed form for `(0, …, h)` against the brute-force or polynomial spectrum.
pub fn block_report(h: u64) -> Result<FamilyJson> {
    if h > MAX_BLOCK_H {
        return Err(over_cap("h", h, MAX_BLOCK_H));
    }
    let predicted: Vec<u64> = block_spectrum(h)?.into_iter().rev().collect();
    let c = block_collection(0, h as usize)?;
    let s = compute_spectrum(&c, Method::Auto, None, DEFAULT_ORACLE_CAP)?;
    Ok(family_json(&c, &s, "block", predicted))
}

/// Divisor-restricted spectrum of `ℰₙ` against a full polynomial scan up to `2^{n+1} − 1`.
pub fn exp_report(n: u32) -> Result<(ExpBoundReport, FamilyJson)> {
    if n > MAX_EXP_SCAN_N {
        return Err(over_cap("n", n.into(), MAX_EXP_SCAN_N.into()));
    }
    let report = exp_bound_check(n)?;
    let c = exponential_collection(n)?;
    let s = spectrum_poly(&c, report.modulus)?;
    let json = family_json(&c, &s, "exponential", report.spectrum.clone());
    Ok((report, json))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConjectureStatus {
    #[serde(rename = "CONSISTENT")]
    Consistent,
    #[serde(rename = "COUNTEREXAMPLE")]
    Counterexample,
}

impl fmt::Display for ConjectureStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConjectureStatus::Consistent => "CONSISTENT",
            ConjectureStatus::Counterexample => "COUNTEREXAMPLE",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureRow {
    pub m: u32,
    pub collection: Vec<usize>,
    pub delta: usize,
    /// `(2^m)² − 1`.
    pub bound: u64,
    pub max_period: u64,
    pub exact_periods: Vec<u64>,
    pub complete_up_to: u64,
    pub complete: bool,
    pub status: ConjectureStatus,
}

/// For `m = 1..=m_max`, compares the longest exact period of `(0, 1, 2^m)`
/// with `(2^m)² − 1`. Spans beyond the polynomial default search up to twice
/// the bound and are labelled incomplete.
pub fn conjecture_experiment(m_max: u32) -> Result<Vec<ConjectureRow>> {
    if m_max == 0 {
        return Err(Error::InvalidParameter("m_max must be >= 1".into()));
    }
    if m_max > MAX_CONJECTURE_M {
        return Err(over_cap("m_max", m_max.into(), MAX_CONJECTURE_M.into()));
    }
    (1..=m_max)
        .into_par_iter()
        .map(|m| {
            let d = 1usize << m;
            let c = PositionCollection::new(vec![0, 1, d])?;
            let bound = (d as u64) * (d as u64) - 1;
            let t_max = match default_period_bound(d) {
                Ok(_) => None,
                Err(_) => Some(2 * bound),
            };
            let s = compute_spectrum(&c, Method::Auto, t_max, DEFAULT_ORACLE_CAP)?;
            let max_period = s.exact_periods().last().copied().unwrap_or(0);
            Ok(ConjectureRow {
                m,
                collection: c.positions().to_vec(),
                delta: d,
                bound,
                max_period,
                exact_periods: s.periods_desc(),
                complete_up_to: s.complete_up_to(),
                complete: s.is_complete(),
                status: if max_period > bound {
                    ConjectureStatus::Counterexample
                } else {
                    ConjectureStatus::Consistent
                },
            })
        })
        .collect()
}
