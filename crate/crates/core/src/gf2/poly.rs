//! Dense polynomials over GF(2), packed 64 coefficients per word.
//!
//! Bit `i` of the packed vector is the coefficient of `x^i`. The packed
//! vector never carries trailing zero words, so equality is structural.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const W: usize = 64;

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Gf2Poly {
    words: Vec<u64>,
}

/// Carry-less 64x64 -> 128 bit product, returned as (low, high).
#[inline]
fn clmul64(a: u64, b: u64) -> (u64, u64) {
    let (mut lo, mut hi) = (0u64, 0u64);
    let mut b = b;
    while b != 0 {
        let i = b.trailing_zeros();
        lo ^= a << i;
        if i > 0 {
            hi ^= a >> (64 - i);
        }
        b &= b - 1;
    }
    (lo, hi)
}

/// Spreads the 32 low bits of `x` to the even bit positions.
#[inline]
fn spread32(x: u64) -> u64 {
    let mut x = x & 0xffff_ffff;
    x = (x | (x << 16)) & 0x0000_ffff_0000_ffff;
    x = (x | (x << 8)) & 0x00ff_00ff_00ff_00ff;
    x = (x | (x << 4)) & 0x0f0f_0f0f_0f0f_0f0f;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    x = (x | (x << 1)) & 0x5555_5555_5555_5555;
    x
}

/// `dst ^= src << shift`, growing `dst` as needed.
fn xor_shifted(dst: &mut Vec<u64>, src: &[u64], shift: usize) {
    if src.is_empty() {
        return;
    }
    let (ws, bs) = (shift / W, shift % W);
    let need = ws + src.len() + usize::from(bs != 0);
    if dst.len() < need {
        dst.resize(need, 0);
    }
    if bs == 0 {
        for (d, s) in dst[ws..].iter_mut().zip(src) {
            *d ^= s;
        }
    } else {
        for (i, &s) in src.iter().enumerate() {
            dst[ws + i] ^= s << bs;
            dst[ws + i + 1] ^= s >> (W - bs);
        }
    }
}

fn trim(words: &mut Vec<u64>) {
    while words.last() == Some(&0) {
        words.pop();
    }
}

fn degree_of(words: &[u64]) -> Option<usize> {
    let last = *words.last()?;
    debug_assert!(last != 0);
    Some((words.len() - 1) * W + (63 - last.leading_zeros() as usize))
}

impl Gf2Poly {
    pub fn zero() -> Self {
        Self { words: Vec::new() }
    }

    pub fn one() -> Self {
        Self { words: vec![1] }
    }

    /// The monomial `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut p = Self::zero();
        p.toggle(k);
        p
    }

    /// `x^n + 1`, the cylinder modulus.
    pub fn cyclic_modulus(n: usize) -> Self {
        let mut p = Self::monomial(n);
        p.toggle(0);
        p
    }

    /// Sum of monomials; repeated exponents cancel.
    pub fn from_exponents<I: IntoIterator<Item = usize>>(exps: I) -> Self {
        let mut p = Self::zero();
        for e in exps {
            p.toggle(e);
        }
        p
    }

    pub fn from_words(mut words: Vec<u64>) -> Self {
        trim(&mut words);
        Self { words }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Degree, or `None` for the zero polynomial (degree −∞).
    pub fn degree(&self) -> Option<usize> {
        degree_of(&self.words)
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words == [1]
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words
            .get(i / W)
            .is_some_and(|w| (w >> (i % W)) & 1 == 1)
    }

    pub fn toggle(&mut self, i: usize) {
        if self.words.len() <= i / W {
            self.words.resize(i / W + 1, 0);
        }
        self.words[i / W] ^= 1 << (i % W);
        trim(&mut self.words);
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Exponents of the nonzero coefficients, ascending.
    pub fn exponents(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.weight());
        for (wi, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                out.push(wi * W + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = long.words.clone();
        for (d, s) in words.iter_mut().zip(&short.words) {
            *d ^= s;
        }
        Self::from_words(words)
    }

    pub fn shl(&self, k: usize) -> Self {
        let mut words = Vec::new();
        xor_shifted(&mut words, &self.words, k);
        Self::from_words(words)
    }

    /// Drops the `k` lowest coefficients (quotient by `x^k`).
    pub fn shr(&self, k: usize) -> Self {
        let (ws, bs) = (k / W, k % W);
        if ws >= self.words.len() {
            return Self::zero();
        }
        let src = &self.words[ws..];
        let words = if bs == 0 {
            src.to_vec()
        } else {
            (0..src.len())
                .map(|i| {
                    let hi = src.get(i + 1).map_or(0, |&h| h << (W - bs));
                    (src[i] >> bs) | hi
                })
                .collect()
        };
        Self::from_words(words)
    }

    /// Remainder modulo `x^k`.
    pub fn truncate(&self, k: usize) -> Self {
        let mut words: Vec<u64> = self.words.iter().take(k.div_ceil(W)).copied().collect();
        if !k.is_multiple_of(W) {
            if let Some(last) = words.get_mut(k / W) {
                *last &= (1u64 << (k % W)) - 1;
            }
        }
        Self::from_words(words)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if std::ptr::eq(self, other) {
            return self.square();
        }
        let mut out = vec![0u64; self.words.len() + other.words.len()];
        for (i, &a) in self.words.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.words.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let (lo, hi) = clmul64(a, b);
                out[i + j] ^= lo;
                out[i + j + 1] ^= hi;
            }
        }
        Self::from_words(out)
    }

    /// Squaring is linear over GF(2): coefficients just spread out.
    pub fn square(&self) -> Self {
        let mut out = Vec::with_capacity(self.words.len() * 2);
        for &w in &self.words {
            out.push(spread32(w));
            out.push(spread32(w >> 32));
        }
        Self::from_words(out)
    }

    /// Quotient and remainder. Panics on a zero divisor.
    pub fn divrem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let mut rem = self.words.clone();
        let mut quo: Vec<u64> = Vec::new();
        while let Some(dr) = degree_of(&rem) {
            if dr < dd {
                break;
            }
            let shift = dr - dd;
            xor_shifted(&mut rem, &divisor.words, shift);
            if quo.len() <= shift / W {
                quo.resize(shift / W + 1, 0);
            }
            quo[shift / W] ^= 1 << (shift % W);
            trim(&mut rem);
        }
        (Self::from_words(quo), Self::from_words(rem))
    }

    pub fn rem(&self, modulus: &Self) -> Self {
        let dd = modulus.degree().expect("reduction by the zero polynomial");
        let mut rem = self.words.clone();
        while let Some(dr) = degree_of(&rem) {
            if dr < dd {
                break;
            }
            xor_shifted(&mut rem, &modulus.words, dr - dd);
            trim(&mut rem);
        }
        Self::from_words(rem)
    }

    /// `self^e mod modulus` by square-and-multiply.
    pub fn powmod(&self, e: u64, modulus: &Self) -> Self {
        poly_powmod(self, e, modulus)
    }

    /// Reduction modulo `x^n + 1` by folding the high part down.
    pub fn fold_cyclic(&self, n: usize) -> Self {
        assert!(n > 0, "cylinder size must be positive");
        let mut p = self.clone();
        while p.degree().is_some_and(|d| d >= n) {
            p = p.truncate(n).add(&p.shr(n));
        }
        p
    }
}

/// Monic gcd over GF(2)[x]. Fails only when both inputs are zero.
pub fn poly_gcd(p: &Gf2Poly, q: &Gf2Poly) -> Result<Gf2Poly> {
    if p.is_zero() && q.is_zero() {
        return Err(Error::ZeroGcd);
    }
    let (mut a, mut b) = (p.clone(), q.clone());
    while !b.is_zero() {
        let r = a.rem(&b);
        a = b;
        b = r;
    }
    Ok(a)
}

/// `base^e mod modulus`; the modulus must have degree at least 1.
pub fn poly_powmod(base: &Gf2Poly, e: u64, modulus: &Gf2Poly) -> Gf2Poly {
    assert!(
        modulus.degree().is_some_and(|d| d >= 1),
        "modulus must have degree >= 1"
    );
    let mut result = Gf2Poly::one();
    if e == 0 {
        return result;
    }
    let base = base.rem(modulus);
    for bit in (0..64 - e.leading_zeros()).rev() {
        result = result.square().rem(modulus);
        if (e >> bit) & 1 == 1 {
            result = result.mul(&base).rem(modulus);
        }
    }
    result
}

/// Inverse of `p` in GF(2)[x]/(x^n + 1), or `None` when `gcd(p, x^n+1) != 1`.
pub fn poly_inverse_mod(p: &Gf2Poly, n: usize) -> Result<Option<Gf2Poly>> {
    if n == 0 {
        return Err(Error::InvalidParameter("cylinder size must be >= 1".into()));
    }
    let modulus = Gf2Poly::cyclic_modulus(n);
    let p = p.rem(&modulus);
    // extended Euclid, tracking only the cofactor of p
    let (mut r0, mut r1) = (modulus.clone(), p);
    let (mut t0, mut t1) = (Gf2Poly::zero(), Gf2Poly::one());
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1);
        let t2 = t0.add(&q.mul(&t1));
        r0 = std::mem::replace(&mut r1, r);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if r0.is_one() {
        Ok(Some(t0.rem(&modulus)))
    } else {
        Ok(None)
    }
}

impl fmt::Display for Gf2Poly {
    /// Coefficient string, index = exponent; the zero polynomial prints as "0".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.degree() {
            None => f.write_str("0"),
            Some(d) => (0..=d).try_for_each(|i| f.write_str(if self.coeff(i) { "1" } else { "0" })),
        }
    }
}

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .exponents()
            .into_iter()
            .rev()
            .map(|e| match e {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{e}"),
            })
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

impl FromStr for Gf2Poly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut p = Gf2Poly::zero();
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => p.toggle(i),
                _ => return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}"))),
            }
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(exps: &[usize]) -> Gf2Poly {
        Gf2Poly::from_exponents(exps.iter().copied())
    }

    // Bitwise long division, independent of the word-level kernel.
    fn naive_divides(d: &[bool], n: &[bool]) -> bool {
        let mut r = n.to_vec();
        let dd = d.iter().rposition(|&b| b).unwrap();
        while let Some(dr) = r.iter().rposition(|&b| b) {
            if dr < dd {
                break;
            }
            for (i, &b) in d.iter().enumerate().take(dd + 1) {
                if b {
                    r[dr - dd + i] ^= true;
                }
            }
        }
        r.iter().all(|&b| !b)
    }

    #[test]
    fn zero_degree_is_sentinel() {
        assert_eq!(Gf2Poly::zero().degree(), None);
        assert_eq!(Gf2Poly::one().degree(), Some(0));
        assert_eq!(Gf2Poly::monomial(130).degree(), Some(130));
    }

    #[test]
    fn gcd_examples() {
        let x2_1 = p(&[0, 2]);
        let x_1 = p(&[0, 1]);
        assert_eq!(poly_gcd(&x2_1, &Gf2Poly::one()).unwrap(), Gf2Poly::one());
        assert_eq!(poly_gcd(&x2_1, &x_1).unwrap(), x_1);
        let trinomial = p(&[0, 1, 3]);
        let x7_1 = p(&[0, 7]);
        // x^3+x+1 divides x^7+1, checked by plain long division
        let mut d = vec![false; 8];
        d[0] = true;
        d[1] = true;
        d[3] = true;
        let mut n = vec![false; 8];
        n[0] = true;
        n[7] = true;
        assert!(naive_divides(&d, &n));
        assert_eq!(poly_gcd(&trinomial, &x7_1).unwrap(), trinomial);
        assert_eq!(
            poly_gcd(&Gf2Poly::zero(), &Gf2Poly::zero()),
            Err(Error::ZeroGcd)
        );
        assert_eq!(poly_gcd(&Gf2Poly::zero(), &x_1).unwrap(), x_1);
    }

    #[test]
    fn powmod_examples() {
        let x = Gf2Poly::monomial(1);
        assert_eq!(x.powmod(0, &p(&[0, 1, 2])), Gf2Poly::one());
        assert_eq!(x.powmod(3, &p(&[0, 1, 2])), Gf2Poly::one());
        assert_eq!(x.powmod(7, &p(&[0, 1, 3])), Gf2Poly::one());
        assert_eq!(x.powmod(5, &p(&[0, 1, 3])), p(&[0, 1, 2]));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(
            poly_inverse_mod(&Gf2Poly::one(), 7).unwrap(),
            Some(Gf2Poly::one())
        );
        assert_eq!(
            poly_inverse_mod(&Gf2Poly::monomial(1), 5).unwrap(),
            Some(Gf2Poly::monomial(4))
        );
        assert_eq!(poly_inverse_mod(&p(&[0, 1]), 4).unwrap(), None);
        assert!(poly_inverse_mod(&Gf2Poly::one(), 0).is_err());
    }

    #[test]
    fn multiword_division_roundtrip() {
        let a = p(&[0, 5, 64, 70, 127, 128, 200]);
        let b = p(&[1, 63, 65, 99]);
        let prod = a.mul(&b);
        let (q, r) = prod.divrem(&b);
        assert_eq!(q, a);
        assert!(r.is_zero());
        assert_eq!(a.square(), a.mul(&a.clone()));
    }

    #[test]
    fn shifts_and_truncation() {
        let a = p(&[0, 3, 64, 129]);
        assert_eq!(a.shl(70).shr(70), a);
        assert_eq!(a.truncate(64), p(&[0, 3]));
        assert_eq!(a.shr(3), p(&[0, 61, 126]));
        assert_eq!(p(&[2, 5]).fold_cyclic(4), p(&[1, 2]));
    }

    #[test]
    fn text_form() {
        let q: Gf2Poly = "1101".parse().unwrap();
        assert_eq!(q, p(&[0, 1, 3]));
        assert_eq!(q.to_string(), "1101");
        assert_eq!(format!("{q:?}"), "x^3 + x + 1");
        assert!("10a".parse::<Gf2Poly>().is_err());
        assert_eq!("000".parse::<Gf2Poly>().unwrap(), Gf2Poly::zero());
    }
}
