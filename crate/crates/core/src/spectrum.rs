//! Exact period spectra of the recurrence, their divisibility kernels, and
//! reversibility verdicts on cylinders.
//!
//! Two independent routes compute a spectrum:
//!
//! * [`spectrum_bruteforce`] decomposes all `2^δ` windows into cycles of the
//!   companion map.
//! * [`spectrum_poly`] works with the characteristic polynomial `p(x)`.
//!   Solutions with period dividing `t` form a space of dimension
//!   `d(t) = deg gcd(p, x^t + 1)`, and the spaces for the divisors of `t`
//!   intersect along the divisor lattice, so Möbius inversion over the
//!   squarefree divisors counts solutions whose minimal period is exactly
//!   `t`. No factoring of `p` is needed. Repeated factors of `x^t + 1` for
//!   even `t` are handled because only gcd degrees enter the count.
//!
//! A cylinder of size `n` is irreversible exactly when some kernel element
//! divides `n`.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::{poly_gcd, Gf2Poly};
use crate::recursion::{CompanionMap, PositionCollection, ShiftCollection};

/// Default span cap for the brute-force oracle (32768 windows).
pub const DEFAULT_ORACLE_CAP: usize = 15;
/// Absolute span cap for the brute-force oracle, whatever the caller asks.
pub const HARD_ORACLE_CAP: usize = 30;
/// Spans up to this use `t_max = 2^δ − 1` when no bound is given.
pub const AUTO_POLY_MAX_DELTA: usize = 20;
/// Largest period bound the polynomial method accepts.
pub const MAX_PERIOD_BOUND: u64 = 1 << 26;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spectrum {
    delta: usize,
    exact_periods: BTreeSet<u64>,
    kernel: BTreeSet<u64>,
    complete_up_to: u64,
}

fn full_bound(delta: usize) -> u64 {
    if delta >= 64 {
        u64::MAX
    } else {
        (1u64 << delta) - 1
    }
}

impl Spectrum {
    fn new(delta: usize, exact_periods: BTreeSet<u64>, complete_up_to: u64) -> Self {
        let bound = full_bound(delta);
        assert!(
            exact_periods.iter().all(|&p| p <= bound),
            "period exceeds 2^δ − 1 for δ = {delta}: {exact_periods:?}"
        );
        let kernel = kernel(&exact_periods);
        Self {
            delta,
            exact_periods,
            kernel,
            complete_up_to,
        }
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn exact_periods(&self) -> &BTreeSet<u64> {
        &self.exact_periods
    }

    pub fn kernel(&self) -> &BTreeSet<u64> {
        &self.kernel
    }

    /// Every exact period is at most this bound or was not searched for.
    pub fn complete_up_to(&self) -> u64 {
        self.complete_up_to
    }

    /// True when the search covered the whole range `1..=2^δ − 1`.
    pub fn is_complete(&self) -> bool {
        self.complete_up_to >= full_bound(self.delta)
    }

    pub fn periods_desc(&self) -> Vec<u64> {
        self.exact_periods.iter().rev().copied().collect()
    }

    pub fn kernel_desc(&self) -> Vec<u64> {
        self.kernel.iter().rev().copied().collect()
    }

    /// Whether some kernel element divides `n`, i.e. `n` is irreversible.
    pub fn kernel_divides(&self, n: u64) -> bool {
        self.kernel.iter().any(|&k| n.is_multiple_of(k))
    }

    pub fn to_json(&self, c: &PositionCollection) -> SpectrumJson {
        SpectrumJson {
            collection: c.positions().to_vec(),
            delta: self.delta,
            exact_periods: self.periods_desc(),
            kernel: self.kernel_desc(),
            complete_up_to: self.complete_up_to,
        }
    }
}

/// Interchange form; sets are sorted descending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumJson {
    pub collection: Vec<usize>,
    pub delta: usize,
    pub exact_periods: Vec<u64>,
    pub kernel: Vec<u64>,
    pub complete_up_to: u64,
}

/// Divisibility-minimal elements of `s`.
pub fn kernel(s: &BTreeSet<u64>) -> BTreeSet<u64> {
    s.iter()
        .copied()
        .filter(|&y| !s.iter().any(|&x| x != y && y % x == 0))
        .collect()
}

/// Characteristic polynomial `x^δ + Σ_{l<r} x^{δ−s_l} + 1` of the recurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPoly(Gf2Poly);

impl CharPoly {
    pub fn poly(&self) -> &Gf2Poly {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.degree().expect("nonzero")
    }

    /// `deg gcd(p, x^t + 1)`: dimension of the solutions whose period divides `t`.
    pub fn solution_dim(&self, t: u64) -> u32 {
        let p = &self.0;
        let xt = Gf2Poly::monomial(1).powmod(t, p);
        let g = poly_gcd(p, &xt.add(&Gf2Poly::one())).expect("p is nonzero");
        g.degree().expect("gcd of nonzero p") as u32
    }
}

pub fn char_poly(c: &PositionCollection) -> Result<CharPoly> {
    let sc = c.derive();
    if sc.is_empty() {
        return Err(Error::SingleUnit);
    }
    Ok(char_poly_of_shifts(&sc))
}

fn char_poly_of_shifts(sc: &ShiftCollection) -> CharPoly {
    let d = sc.delta();
    let p = Gf2Poly::from_exponents(std::iter::once(d).chain(sc.shifts().iter().map(|s| d - s)));
    CharPoly(p)
}

/// Brute force with the default cap.
pub fn spectrum_bruteforce(c: &PositionCollection) -> Result<Spectrum> {
    spectrum_bruteforce_with_cap(c, DEFAULT_ORACLE_CAP)
}

pub fn spectrum_bruteforce_with_cap(c: &PositionCollection, cap: usize) -> Result<Spectrum> {
    let sc = c.derive();
    if sc.is_empty() {
        return Ok(Spectrum::new(0, BTreeSet::new(), 0));
    }
    let d = sc.delta();
    let cap = cap.min(HARD_ORACLE_CAP);
    if d > cap {
        return Err(Error::OverOracleCap { delta: d, cap });
    }
    let map = CompanionMap::new(&sc)?;
    let states = 1u64 << d;
    let mut visited = vec![0u64; (states as usize).div_ceil(64)];
    let mut periods = BTreeSet::new();
    for start in 1..states {
        if (visited[(start / 64) as usize] >> (start % 64)) & 1 == 1 {
            continue;
        }
        let mut w = start;
        let mut len = 0u64;
        loop {
            visited[(w / 64) as usize] |= 1 << (w % 64);
            w = map.step(w);
            len += 1;
            if w == start {
                break;
            }
            // a tail would mean the map is not a permutation
            assert!(len < states, "orbit of {start:#b} is not a pure cycle");
        }
        periods.insert(len);
    }
    Ok(Spectrum::new(d, periods, full_bound(d)))
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let db = 63 - b.leading_zeros();
        while a != 0 && 63 - a.leading_zeros() >= db {
            a ^= b << (63 - a.leading_zeros() - db);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

/// `d(t)` for `t = 0..=t_max` (index 0 unused).
fn solution_dims(p: &CharPoly, t_max: u64) -> Vec<u32> {
    let d = p.degree();
    let mut dims = vec![0u32; t_max as usize + 1];
    if d < 64 {
        let pw = p.poly().words()[0];
        let top = 1u64 << d;
        let mut r = 1u64;
        for dim in dims.iter_mut().skip(1) {
            r <<= 1;
            if r & top != 0 {
                r ^= pw;
            }
            let g = gcd_u64(pw, r ^ 1);
            *dim = 63 - g.leading_zeros();
        }
    } else {
        let one = Gf2Poly::one();
        let mut r = one.clone();
        for dim in dims.iter_mut().skip(1) {
            r = r.shl(1);
            if r.degree() == Some(d) {
                r = r.add(p.poly());
            }
            let g = poly_gcd(p.poly(), &r.add(&one)).expect("p is nonzero");
            *dim = g.degree().expect("nonzero gcd") as u32;
        }
    }
    dims
}

fn distinct_primes(mut t: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= t {
        if t.is_multiple_of(q) {
            out.push(q);
            while t.is_multiple_of(q) {
                t /= q;
            }
        }
        q += 1;
    }
    if t > 1 {
        out.push(t);
    }
    out
}

/// Whether some nonzero solution has minimal period exactly `t`, given
/// `dim(t') = deg gcd(p, x^{t'} + 1)` on the divisors of `t`.
///
/// Counts `Σ_{Q ⊆ primes(t)} (−1)^{|Q|} 2^{dim(t/∏Q)}`, minus the zero
/// solution when `t = 1`.
pub(crate) fn has_exact_period(t: u64, primes: &[u64], dim: impl Fn(u64) -> u32) -> bool {
    let top = dim(t);
    if top == 0 {
        return false;
    }
    if primes.iter().any(|&q| dim(t / q) == top) {
        return false;
    }
    let mut terms = Vec::with_capacity(1 << primes.len());
    for mask in 0u32..1 << primes.len() {
        let prod: u64 = primes
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, q)| q)
            .product();
        terms.push((mask.count_ones() % 2 == 1, dim(t / prod)));
    }
    let zero = u32::from(t == 1);
    if top < 120 {
        let count: i128 = terms
            .iter()
            .map(|&(neg, e)| if neg { -(1i128 << e) } else { 1i128 << e })
            .sum();
        count - i128::from(zero) > 0
    } else {
        let count: BigInt = terms
            .iter()
            .map(|&(neg, e)| {
                let v = BigInt::from(1) << e;
                if neg {
                    -v
                } else {
                    v
                }
            })
            .sum();
        count - BigInt::from(zero) > BigInt::from(0)
    }
}

/// Exact periods up to `t_max` from gcd degrees of the characteristic
/// polynomial. Complete when `t_max ≥ 2^δ − 1`.
pub fn spectrum_poly(c: &PositionCollection, t_max: u64) -> Result<Spectrum> {
    if t_max == 0 {
        return Err(Error::InvalidParameter("t_max must be >= 1".into()));
    }
    if t_max > MAX_PERIOD_BOUND {
        return Err(Error::OverCap {
            name: "t_max",
            value: t_max,
            cap: MAX_PERIOD_BOUND,
        });
    }
    let sc = c.derive();
    if sc.is_empty() {
        return Ok(Spectrum::new(0, BTreeSet::new(), t_max));
    }
    let p = char_poly_of_shifts(&sc);
    let d = sc.delta();
    let t_max = t_max.min(full_bound(d));
    let dims = solution_dims(&p, t_max);
    let periods: BTreeSet<u64> = (1..=t_max)
        .filter(|&t| dims[t as usize] > 0)
        .filter(|&t| has_exact_period(t, &distinct_primes(t), |u| dims[u as usize]))
        .collect();
    Ok(Spectrum::new(d, periods, t_max))
}

/// `2^δ − 1` when the span allows a default polynomial bound.
pub fn default_period_bound(delta: usize) -> Result<u64> {
    if delta <= AUTO_POLY_MAX_DELTA {
        Ok(full_bound(delta).max(1))
    } else {
        Err(Error::NeedsPeriodBound { delta })
    }
}

type Cache = RwLock<HashMap<ShiftCollection, Arc<Spectrum>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Brute-force spectrum memoised per shift collection (the spectrum is
/// translation invariant).
pub fn cached_bruteforce(c: &PositionCollection) -> Result<Arc<Spectrum>> {
    let key = c.derive();
    if let Some(s) = cache().read().expect("cache poisoned").get(&key) {
        return Ok(Arc::clone(s));
    }
    let s = Arc::new(spectrum_bruteforce(c)?);
    let mut w = cache().write().expect("cache poisoned");
    Ok(Arc::clone(w.entry(key).or_insert(s)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Brute force within the cap, polynomial beyond.
    Auto,
    Brute,
    Poly,
    /// Both methods; disagreement is an error.
    Both,
}

/// Spectrum by the requested method. `t_max` bounds the polynomial search;
/// without it, spans up to [`AUTO_POLY_MAX_DELTA`] search completely.
pub fn compute_spectrum(
    c: &PositionCollection,
    method: Method,
    t_max: Option<u64>,
    cap: usize,
) -> Result<Spectrum> {
    let d = c.span();
    let poly = || match t_max {
        Some(t) => spectrum_poly(c, t),
        None => spectrum_poly(c, default_period_bound(d)?),
    };
    match method {
        Method::Brute => spectrum_bruteforce_with_cap(c, cap),
        Method::Poly => poly(),
        Method::Auto if d <= cap.min(HARD_ORACLE_CAP) => {
            if cap == DEFAULT_ORACLE_CAP {
                Ok((*cached_bruteforce(c)?).clone())
            } else {
                spectrum_bruteforce_with_cap(c, cap)
            }
        }
        Method::Auto => poly(),
        Method::Both => {
            let brute = spectrum_bruteforce_with_cap(c, cap)?;
            let poly = spectrum_poly(c, full_bound(d).max(1))?;
            if brute.exact_periods != poly.exact_periods {
                return Err(Error::MethodMismatch {
                    brute: brute.periods_desc(),
                    poly: poly.periods_desc(),
                });
            }
            Ok(brute)
        }
    }
}

/// Spectrum good enough to decide every cylinder size up to `n_max`.
fn spectrum_for_sizes(c: &PositionCollection, n_max: u64) -> Result<Arc<Spectrum>> {
    if c.span() <= DEFAULT_ORACLE_CAP {
        cached_bruteforce(c)
    } else {
        // kernel elements dividing some n <= n_max are themselves <= n_max
        spectrum_poly(c, n_max).map(Arc::new)
    }
}

fn check_fits(c: &PositionCollection, n: u64) -> Result<()> {
    if n <= c.last() as u64 {
        Err(Error::CylinderTooSmall { n, last: c.last() })
    } else {
        Ok(())
    }
}

/// Reversibility of `V[x₁,…,x_r; n]` from the spectrum kernel.
pub fn is_reversible(c: &PositionCollection, n: u64) -> Result<bool> {
    check_fits(c, n)?;
    if c.len() == 1 {
        return Ok(true);
    }
    if c.len().is_multiple_of(2) {
        return Ok(false);
    }
    Ok(!spectrum_for_sizes(c, n)?.kernel_divides(n))
}

/// Verdicts for every size in `n_lo..=n_hi` from a single spectrum.
pub fn reversible_sizes(c: &PositionCollection, n_lo: u64, n_hi: u64) -> Result<Vec<(u64, bool)>> {
    check_fits(c, n_lo)?;
    if n_hi < n_lo {
        return Err(Error::InvalidParameter(format!(
            "empty size range {n_lo}..={n_hi}"
        )));
    }
    let verdict: Box<dyn Fn(u64) -> bool> = if c.len() == 1 {
        Box::new(|_| true)
    } else if c.len().is_multiple_of(2) {
        Box::new(|_| false)
    } else {
        let s = spectrum_for_sizes(c, n_hi)?;
        Box::new(move |n| !s.kernel_divides(n))
    };
    Ok((n_lo..=n_hi).map(|n| (n, verdict(n))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pc(p: &[usize]) -> PositionCollection {
        PositionCollection::new(p.to_vec()).unwrap()
    }

    fn set(v: &[u64]) -> BTreeSet<u64> {
        v.iter().copied().collect()
    }

    #[test]
    fn bruteforce_examples() {
        assert_eq!(
            spectrum_bruteforce(&pc(&[1, 2, 3]))
                .unwrap()
                .exact_periods(),
            &set(&[3])
        );
        // printed as 365 in the published table; 465 = lcm(15, 31) is what
        // every seed of x^9 + x^7 + 1 produces
        assert_eq!(
            spectrum_bruteforce(&pc(&[1, 3, 10]))
                .unwrap()
                .exact_periods(),
            &set(&[465, 31, 15])
        );
        assert_eq!(
            spectrum_bruteforce(&pc(&[1, 8, 16]))
                .unwrap()
                .exact_periods(),
            &set(&[32767])
        );
        assert_eq!(
            spectrum_bruteforce(&pc(&[0, 1, 16])),
            Err(Error::OverOracleCap { delta: 16, cap: 15 })
        );
    }

    #[test]
    fn poly_examples() {
        assert_eq!(
            spectrum_poly(&pc(&[1, 2, 4]), 7).unwrap().exact_periods(),
            &set(&[7])
        );
        let s = spectrum_poly(&pc(&[1, 3, 11]), 1023).unwrap();
        assert_eq!(s.exact_periods(), &set(&[42, 14, 21, 7, 6, 3]));
        assert!(s.is_complete());
        assert_eq!(
            spectrum_poly(&pc(&[0, 1]), 50).unwrap().exact_periods(),
            &set(&[1])
        );
        let partial = spectrum_poly(&pc(&[1, 3, 11]), 10).unwrap();
        assert_eq!(partial.exact_periods(), &set(&[7, 6, 3]));
        assert!(!partial.is_complete());
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel(&set(&[42, 21, 14, 7, 3])), set(&[7, 3]));
        assert_eq!(kernel(&set(&[6, 3])), set(&[3]));
        assert_eq!(kernel(&set(&[511, 73, 7])), set(&[73, 7]));
        let k = kernel(&set(&[12, 4, 6, 9]));
        assert_eq!(kernel(&k), k);
    }

    #[test]
    fn char_poly_examples() {
        assert_eq!(
            format!("{:?}", char_poly(&pc(&[0, 1, 2])).unwrap().poly()),
            "x^2 + x + 1"
        );
        assert_eq!(
            format!("{:?}", char_poly(&pc(&[1, 2, 4])).unwrap().poly()),
            "x^3 + x^2 + 1"
        );
        assert_eq!(
            format!("{:?}", char_poly(&pc(&[0, 1])).unwrap().poly()),
            "x + 1"
        );
        assert_eq!(char_poly(&pc(&[3])), Err(Error::SingleUnit));
    }

    #[test]
    fn reversibility_examples() {
        let c = pc(&[1, 2, 3]);
        assert!(is_reversible(&c, 5).unwrap());
        assert!(!is_reversible(&c, 6).unwrap());
        for n in 5..40 {
            assert!(is_reversible(&pc(&[4]), n).unwrap());
            assert!(!is_reversible(&pc(&[0, 3]), n).unwrap());
        }
        assert!(is_reversible(&c, 3).is_err());
    }

    #[test]
    fn size_sweeps() {
        let sizes = reversible_sizes(&pc(&[0, 1, 4]), 6, 20).unwrap();
        let bad: Vec<u64> = sizes.iter().filter(|s| !s.1).map(|s| s.0).collect();
        assert_eq!(bad, vec![15]);
        assert!(reversible_sizes(&pc(&[0]), 1, 30)
            .unwrap()
            .iter()
            .all(|s| s.1));
        let bad: Vec<u64> = reversible_sizes(&pc(&[1, 2, 4]), 5, 21)
            .unwrap()
            .into_iter()
            .filter(|s| !s.1)
            .map(|s| s.0)
            .collect();
        assert_eq!(bad, vec![7, 14, 21]);
        assert!(reversible_sizes(&pc(&[1, 2, 4]), 9, 8).is_err());
    }

    #[test]
    fn both_methods_agree_through_dispatch() {
        let c = pc(&[2, 4, 6, 7, 9]);
        let s = compute_spectrum(&c, Method::Both, None, DEFAULT_ORACLE_CAP).unwrap();
        assert_eq!(s.periods_desc(), vec![105, 15, 7]);
        let far = pc(&[0, 1, 25]);
        assert_eq!(
            compute_spectrum(&far, Method::Auto, None, DEFAULT_ORACLE_CAP),
            Err(Error::NeedsPeriodBound { delta: 25 })
        );
        let s = compute_spectrum(&far, Method::Auto, Some(100), DEFAULT_ORACLE_CAP).unwrap();
        assert_eq!(s.complete_up_to(), 100);
    }

    #[test]
    fn u64_gcd_matches_generic() {
        for a in 1u64..200 {
            for b in 1u64..60 {
                let g = gcd_u64(a, b);
                let gp =
                    poly_gcd(&Gf2Poly::from_words(vec![a]), &Gf2Poly::from_words(vec![b])).unwrap();
                assert_eq!(Gf2Poly::from_words(vec![g]), gp);
            }
        }
    }

    #[test]
    fn json_schema_order() {
        let c = pc(&[1, 3, 5]);
        let s = spectrum_bruteforce(&c).unwrap();
        let j = serde_json::to_string(&s.to_json(&c)).unwrap();
        assert_eq!(
            j,
            r#"{"collection":[1,3,5],"delta":4,"exact_periods":[6,3],"kernel":[3],"complete_up_to":15}"#
        );
    }
}
