use std::fmt;
use std::str::FromStr;

use super::poly::Gf2Poly;
use crate::error::{Error, Result};

/// A 0/1 vector of fixed length `n` living on a cylinder of size `n`.
///
/// Text form is a 01-word with position 0 leftmost. Storage is the
/// polynomial `Σ V(j) x^j`, so cyclic operations reduce modulo `x^n + 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitString {
    len: usize,
    poly: Gf2Poly,
}

impl BitString {
    pub fn zeros(len: usize) -> Self {
        assert!(len > 0, "cylinder size must be positive");
        Self {
            len,
            poly: Gf2Poly::zero(),
        }
    }

    pub fn ones(len: usize) -> Self {
        Self::from_positions(len, 0..len).expect("positions in range")
    }

    /// `δ_j`: a single unit at position `j`. `unit(n, 0)` is the identity of ⊠.
    pub fn unit(len: usize, j: usize) -> Self {
        Self::from_positions(len, [j % len]).expect("position reduced")
    }

    pub fn from_positions<I: IntoIterator<Item = usize>>(len: usize, positions: I) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidParameter(
                "cylinder size must be positive".into(),
            ));
        }
        let mut s = Self::zeros(len);
        for p in positions {
            if p >= len {
                return Err(Error::CylinderTooSmall {
                    n: len as u64,
                    last: p,
                });
            }
            s.poly.toggle(p);
        }
        Ok(s)
    }

    /// Reduces `p` modulo `x^len + 1` and reads it as a cylinder vector.
    pub fn from_poly(len: usize, p: &Gf2Poly) -> Self {
        assert!(len > 0, "cylinder size must be positive");
        Self {
            len,
            poly: p.fold_cyclic(len),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false; a cylinder has at least one cell.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, j: usize) -> bool {
        assert!(
            j < self.len,
            "index {j} out of range for length {}",
            self.len
        );
        self.poly.coeff(j)
    }

    pub fn set(&mut self, j: usize, bit: bool) {
        if self.get(j) != bit {
            self.poly.toggle(j);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn weight(&self) -> usize {
        self.poly.weight()
    }

    pub fn positions(&self) -> Vec<usize> {
        self.poly.exponents()
    }

    pub fn as_poly(&self) -> &Gf2Poly {
        &self.poly
    }

    pub fn into_poly(self) -> Gf2Poly {
        self.poly
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        Ok(Self {
            len: self.len,
            poly: self.poly.add(&other.poly),
        })
    }

    /// Cyclic convolution `[V ⊠ W](j) = Σ_s V(s) W(j − s mod n)`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        Ok(Self {
            len: self.len,
            poly: self.poly.mul(&other.poly).fold_cyclic(self.len),
        })
    }

    /// `σ^j`: `result(i) = V((i − j) mod n)`; negative `j` rotates left.
    pub fn cyclic_shift(&self, j: i64) -> Self {
        let k = j.rem_euclid(self.len as i64) as usize;
        Self {
            len: self.len,
            poly: self.poly.shl(k).fold_cyclic(self.len),
        }
    }

    fn check_len(&self, other: &Self) -> Result<()> {
        if self.len == other.len {
            Ok(())
        } else {
            Err(Error::SizeMismatch {
                left: self.len,
                right: other.len,
            })
        }
    }
}

/// Free-function form of [`BitString::convolve`].
pub fn convolve(v: &BitString, w: &BitString) -> Result<BitString> {
    v.convolve(w)
}

/// Free-function form of [`BitString::cyclic_shift`].
pub fn cyclic_shift(v: &BitString, j: i64) -> BitString {
    v.cyclic_shift(j)
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        (0..self.len).try_for_each(|j| f.write_str(if self.poly.coeff(j) { "1" } else { "0" }))
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty bit string".into()));
        }
        let mut positions = Vec::new();
        let mut len = 0;
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => positions.push(i),
                _ => return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}"))),
            }
            len = i + 1;
        }
        Self::from_positions(len, positions)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    // Direct evaluation of the convolution sum, no polynomial arithmetic.
    fn convolve_direct(v: &BitString, w: &BitString) -> BitString {
        let n = v.len();
        let mut out = BitString::zeros(n);
        for j in 0..n {
            let mut acc = false;
            for s in 0..n {
                acc ^= v.get(s) && w.get((j + n - s) % n);
            }
            out.set(j, acc);
        }
        out
    }

    #[test]
    fn convolve_examples() {
        assert_eq!(bs("100").convolve(&bs("011")).unwrap(), bs("011"));
        assert_eq!(bs("110").convolve(&bs("110")).unwrap(), bs("101"));
        assert_eq!(bs("000").convolve(&bs("101")).unwrap(), bs("000"));
        assert_eq!(
            bs("10").convolve(&bs("101")),
            Err(Error::SizeMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn shift_examples() {
        assert_eq!(bs("100").cyclic_shift(1), bs("010"));
        assert_eq!(bs("11001").cyclic_shift(2), bs("01110"));
        assert_eq!(bs("11001").cyclic_shift(-3), bs("01110"));
        assert_eq!(bs("10110").cyclic_shift(5), bs("10110"));
    }

    #[test]
    fn text_roundtrip_and_errors() {
        assert_eq!(bs("0010").to_string(), "0010");
        assert_eq!(bs("0010").positions(), vec![2]);
        assert!("".parse::<BitString>().is_err());
        assert!("01x".parse::<BitString>().is_err());
        assert!(BitString::from_positions(3, [3]).is_err());
    }

    fn arb_pair(max: usize) -> impl Strategy<Value = (BitString, BitString, BitString)> {
        (1..=max).prop_flat_map(|n| {
            let one = proptest::collection::vec(any::<bool>(), n);
            (one.clone(), one.clone(), one).prop_map(move |(a, b, c)| {
                let mk = |v: Vec<bool>| {
                    BitString::from_positions(n, v.iter().enumerate().filter(|x| *x.1).map(|x| x.0))
                        .unwrap()
                };
                (mk(a), mk(b), mk(c))
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn convolution_is_a_commutative_ring_product((a, b, c) in arb_pair(32)) {
            prop_assert_eq!(a.convolve(&b).unwrap(), convolve_direct(&a, &b));
            prop_assert_eq!(a.convolve(&b).unwrap(), b.convolve(&a).unwrap());
            prop_assert_eq!(
                a.convolve(&b).unwrap().convolve(&c).unwrap(),
                a.convolve(&b.convolve(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(
                a.convolve(&b.add(&c).unwrap()).unwrap(),
                a.convolve(&b).unwrap().add(&a.convolve(&c).unwrap()).unwrap()
            );
        }

        #[test]
        fn shifts_compose((a, _, _) in arb_pair(40), i in -100i64..100, j in -100i64..100) {
            prop_assert_eq!(a.cyclic_shift(i).cyclic_shift(j), a.cyclic_shift(i + j));
            prop_assert_eq!(a.cyclic_shift(a.len() as i64), a.clone());
            let n = a.len();
            let s = a.cyclic_shift(i);
            for k in 0..n {
                prop_assert_eq!(s.get(k), a.get(((k as i64 - i).rem_euclid(n as i64)) as usize));
            }
        }

        #[test]
        fn poly_roundtrip((a, _, _) in arb_pair(70)) {
            let p = a.as_poly().clone();
            prop_assert_eq!(BitString::from_poly(a.len(), &p), a);
        }
    }
}
