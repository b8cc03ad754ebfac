//! The linear recurrence `T(i) = Σ_{l≥2} T(i − s_l)` driven by the shifts of
//! a position collection, the operator `C[m]{W}` that extends a word by `m`
//! recurrence steps, and orbit tracking of `δ`-wide windows.
//!
//! The window map (companion map) is invertible because the oldest tap
//! `s_r = δ` always contributes. Every orbit is therefore a pure cycle:
//! the pre-period of any seed is empty, which sharpens the generic
//! "pre-period + period ≤ 2^δ − 1" bound.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf2::{BitString, Word};

/// Largest span for which single orbits are tracked with packed windows.
pub const MAX_ORBIT_DELTA: usize = 24;

/// Sorted unit positions `x₁ < … < x_r` of a rule.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PositionCollection {
    positions: Vec<usize>,
}

impl PositionCollection {
    pub fn new(positions: Vec<usize>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::EmptyCollection);
        }
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NotIncreasing(positions));
        }
        Ok(Self { positions })
    }

    /// Unit positions of a rule string.
    pub fn from_rule(rule: &BitString) -> Result<Self> {
        Self::new(rule.positions())
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    /// Number of units `r`.
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> usize {
        self.positions[0]
    }

    pub fn last(&self) -> usize {
        *self.positions.last().expect("non-empty")
    }

    /// `δ = x_r − x₁`.
    pub fn span(&self) -> usize {
        self.last() - self.first()
    }

    pub fn derive(&self) -> ShiftCollection {
        derive(self)
    }

    /// `V[x₁,…,x_r; n]`: the rule zero-extended to a cylinder of size `n`.
    pub fn rule(&self, n: usize) -> Result<BitString> {
        if n <= self.last() {
            return Err(Error::CylinderTooSmall {
                n: n as u64,
                last: self.last(),
            });
        }
        BitString::from_positions(n, self.positions.iter().copied())
    }
}

impl fmt::Display for PositionCollection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.positions.iter().map(|p| p.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl fmt::Debug for PositionCollection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for PositionCollection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        let positions = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad position {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(positions)
    }
}

/// Shifts `s_l = x_l − x₁` for `l ≥ 2`; the recurrence only sees these.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ShiftCollection {
    shifts: Vec<usize>,
}

impl ShiftCollection {
    pub fn shifts(&self) -> &[usize] {
        &self.shifts
    }

    /// Largest shift, 0 for a single-unit collection.
    pub fn delta(&self) -> usize {
        self.shifts.last().copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.shifts.is_empty()
    }
}

pub fn derive(c: &PositionCollection) -> ShiftCollection {
    let x1 = c.first();
    ShiftCollection {
        shifts: c.positions[1..].iter().map(|x| x - x1).collect(),
    }
}

/// A constituent word `K_{m,g}` with its single unit at 1-based position `m`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Constituent {
    pub m: usize,
    pub g: usize,
}

impl Constituent {
    pub fn new(m: usize, g: usize) -> Result<Self> {
        Word::constituent(m, g)?;
        Ok(Self { m, g })
    }

    pub fn word(&self) -> Word {
        Word::constituent(self.m, self.g).expect("validated in new")
    }
}

/// Outcome of iterating the recurrence from one seed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrbitResult {
    pub preperiod_len: usize,
    pub period_len: usize,
    pub period_word: Word,
}

fn require_shifts(c: &PositionCollection) -> Result<ShiftCollection> {
    let sc = c.derive();
    if sc.is_empty() {
        Err(Error::SingleUnit)
    } else {
        Ok(sc)
    }
}

fn recurrence_bit(t: &[bool], i: usize, shifts: &[usize]) -> bool {
    shifts.iter().fold(false, |acc, &s| acc ^ t[i - s])
}

/// `C[m]{W}`: extends `W` (length `g ≥ δ`) by `m` recurrence steps.
pub fn apply_operator(c: &PositionCollection, m: usize, w: &Word) -> Result<Word> {
    let sc = require_shifts(c)?;
    if w.len() < sc.delta() {
        return Err(Error::WordTooShort {
            len: w.len(),
            delta: sc.delta(),
        });
    }
    let mut t = w.bits().to_vec();
    t.reserve(m);
    for i in w.len()..w.len() + m {
        let b = recurrence_bit(&t, i, sc.shifts());
        t.push(b);
    }
    Ok(Word::from(t))
}

/// Checks `C[m]{W + V} = C[m]{W} + C[m]{V}` by evaluating both sides.
pub fn operator_linearity_check(
    c: &PositionCollection,
    m: usize,
    w: &Word,
    v: &Word,
) -> Result<bool> {
    let lhs = apply_operator(c, m, &w.xor(v)?)?;
    let rhs = apply_operator(c, m, w)?.xor(&apply_operator(c, m, v)?)?;
    Ok(lhs == rhs)
}

/// Slides a `δ`-window one step forward.
pub fn companion_step(c: &PositionCollection, state: &Word) -> Result<Word> {
    let sc = require_shifts(c)?;
    let d = sc.delta();
    if state.len() != d {
        return Err(Error::SeedLength {
            len: state.len(),
            delta: d,
        });
    }
    let next = recurrence_bit(state.bits(), d, sc.shifts());
    let mut out = state.slice(1, d);
    out.push(next);
    Ok(out)
}

/// Inverse of [`companion_step`]: recovers the window one step back.
pub fn companion_step_back(c: &PositionCollection, state: &Word) -> Result<Word> {
    let sc = require_shifts(c)?;
    let d = sc.delta();
    if state.len() != d {
        return Err(Error::SeedLength {
            len: state.len(),
            delta: d,
        });
    }
    // state = T(t+1..t+δ); T(t+δ) = T(t) + Σ_{s<δ} T(t+δ−s)
    let mut oldest = state.get(d - 1);
    for &s in &sc.shifts()[..sc.shifts().len() - 1] {
        oldest ^= state.get(d - s - 1);
    }
    let mut out = Word::from(vec![oldest]);
    out.append(&state.slice(0, d - 1));
    Ok(out)
}

/// Packed companion map on `δ ≤ 63` bit windows; bit `j` holds `T(t + j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompanionMap {
    delta: u32,
    taps: u64,
}

impl CompanionMap {
    pub fn new(shifts: &ShiftCollection) -> Result<Self> {
        let d = shifts.delta();
        if shifts.is_empty() {
            return Err(Error::SingleUnit);
        }
        if d > 63 {
            return Err(Error::OverCap {
                name: "span",
                value: d as u64,
                cap: 63,
            });
        }
        let taps = shifts.shifts().iter().fold(0u64, |m, &s| m | 1 << (d - s));
        Ok(Self {
            delta: d as u32,
            taps,
        })
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }

    #[inline]
    pub fn step(&self, w: u64) -> u64 {
        let b = u64::from((w & self.taps).count_ones() & 1);
        (w >> 1) | (b << (self.delta - 1))
    }

    #[inline]
    pub fn step_back(&self, w: u64) -> u64 {
        let full = if self.delta == 64 {
            u64::MAX
        } else {
            (1u64 << self.delta) - 1
        };
        let newest = (w >> (self.delta - 1)) & 1;
        let upper = (w << 1) & full;
        let b0 = newest ^ u64::from((upper & self.taps & !1).count_ones() & 1);
        upper | b0
    }
}

fn pack(w: &Word) -> u64 {
    w.bits()
        .iter()
        .enumerate()
        .fold(0, |acc, (i, &b)| acc | (u64::from(b) << i))
}

/// Iterates the recurrence from seed `omega` (length `δ`) until a window
/// repeats. Returns the pre-period, the window cycle length and the
/// periodic tail word.
pub fn orbit_of_seed(c: &PositionCollection, omega: &Word) -> Result<OrbitResult> {
    let sc = require_shifts(c)?;
    let d = sc.delta();
    if omega.len() != d {
        return Err(Error::SeedLength {
            len: omega.len(),
            delta: d,
        });
    }
    if d > MAX_ORBIT_DELTA {
        return Err(Error::OverCap {
            name: "span",
            value: d as u64,
            cap: MAX_ORBIT_DELTA as u64,
        });
    }
    let map = CompanionMap::new(&sc)?;
    let mut seen: HashMap<u64, usize> = HashMap::new();
    let mut symbols = Vec::new();
    let mut w = pack(omega);
    let (preperiod_len, period_len) = loop {
        if let Some(&first) = seen.get(&w) {
            break (first, symbols.len() - first);
        }
        seen.insert(w, symbols.len());
        symbols.push(w & 1 == 1);
        w = map.step(w);
    };
    let period_word = Word::from(symbols[preperiod_len..].to_vec());
    // windows determine the sequence, so the window cycle is the symbol period
    assert_eq!(
        period_word.minimal_cyclic_period(),
        period_len,
        "window cycle length differs from symbol period"
    );
    Ok(OrbitResult {
        preperiod_len,
        period_len,
        period_word,
    })
}
