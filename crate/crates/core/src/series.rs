//! Truncated noncommutative formal power series with exact rational coefficients.
//!
//! A [`Series`] carries a degree cap `N`: it stores coefficients of words of
//! length `<= N` only, and the result of every binary operation is capped at
//! the smaller of the two input caps. Products are exact up to that cap since
//! no word of length `<= N` in a shuffle or concatenation depends on a longer
//! input word.

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::word::{Alphabet, Word};

/// Exact rational coefficient, always in lowest terms with a positive denominator.
pub type Coefficient = BigRational;

/// Parses an optionally signed integer or `p/q`.
pub fn parse_coefficient(text: &str) -> Result<Coefficient> {
    let bad = || Error::InvalidCoefficient(text.to_string());
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let parse_int = |s: &str| -> Result<BigInt> {
        let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let v: BigInt = digits.parse().map_err(|_| bad())?;
        Ok(if s.starts_with('-') { -v } else { v })
    };
    let n = parse_int(num)?;
    let d = match den {
        Some(d) => parse_int(d)?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Renders `p/q`, or a bare integer when `q = 1`.
pub fn format_coefficient(c: &Coefficient) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub(crate) fn int(v: i64) -> Coefficient {
    BigRational::from_integer(BigInt::from(v))
}

/// All interleavings of `u` and `v` with their multiplicities.
pub fn shuffle_words(u: &Word, v: &Word) -> Vec<(Word, u64)> {
    if u.is_empty() {
        return vec![(v.clone(), 1)];
    }
    if v.is_empty() {
        return vec![(u.clone(), 1)];
    }
    let (a, b) = (u.letters(), v.letters());
    // counts[i][j]: shuffles of a[i..] and b[j..]
    let mut table: Vec<Vec<HashMap<Vec<u8>, u64>>> =
        vec![vec![HashMap::new(); b.len() + 1]; a.len() + 1];
    for i in (0..=a.len()).rev() {
        for j in (0..=b.len()).rev() {
            let mut cell: HashMap<Vec<u8>, u64> = HashMap::new();
            if i == a.len() {
                cell.insert(b[j..].to_vec(), 1);
            } else if j == b.len() {
                cell.insert(a[i..].to_vec(), 1);
            } else {
                for (tail, n) in &table[i + 1][j] {
                    let mut w = Vec::with_capacity(tail.len() + 1);
                    w.push(a[i]);
                    w.extend_from_slice(tail);
                    *cell.entry(w).or_insert(0) += n;
                }
                for (tail, n) in &table[i][j + 1] {
                    let mut w = Vec::with_capacity(tail.len() + 1);
                    w.push(b[j]);
                    w.extend_from_slice(tail);
                    *cell.entry(w).or_insert(0) += n;
                }
            }
            table[i][j] = cell;
        }
    }
    let mut out: Vec<(Word, u64)> = std::mem::take(&mut table[0][0])
        .into_iter()
        .map(|(w, n)| (Word::new(w), n))
        .collect();
    out.sort();
    out
}

/// A truncated formal power series over an alphabet.
#[derive(Debug, Clone)]
pub struct Series {
    alphabet: Alphabet,
    cap: usize,
    terms: BTreeMap<Word, Coefficient>,
}

impl PartialEq for Series {
    /// Support-map equality; the caps are not compared.
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet && self.terms == other.terms
    }
}

impl Eq for Series {}

impl Series {
    pub fn zero(alphabet: Alphabet, cap: usize) -> Self {
        Series {
            alphabet,
            cap,
            terms: BTreeMap::new(),
        }
    }

    /// The unit `1∅`.
    pub fn one(alphabet: Alphabet, cap: usize) -> Self {
        Self::constant(alphabet, cap, Coefficient::one())
    }

    pub fn constant(alphabet: Alphabet, cap: usize, value: Coefficient) -> Self {
        let mut s = Self::zero(alphabet, cap);
        s.insert_add(Word::empty(), value);
        s
    }

    pub fn letter(alphabet: Alphabet, cap: usize, index: usize) -> Result<Self> {
        alphabet.check_letter(index)?;
        Self::from_terms(
            alphabet,
            cap,
            [(Word::letter(index as u8), Coefficient::one())],
        )
    }

    pub fn monomial(
        alphabet: Alphabet,
        cap: usize,
        word: Word,
        coeff: Coefficient,
    ) -> Result<Self> {
        Self::from_terms(alphabet, cap, [(word, coeff)])
    }

    /// Builds a series from `(word, coefficient)` pairs. Repeated words are
    /// summed; words longer than `cap` are dropped.
    pub fn from_terms(
        alphabet: Alphabet,
        cap: usize,
        terms: impl IntoIterator<Item = (Word, Coefficient)>,
    ) -> Result<Self> {
        let mut s = Self::zero(alphabet, cap);
        for (w, c) in terms {
            alphabet.check_word(&w)?;
            s.insert_add(w, c);
        }
        Ok(s)
    }

    /// Accumulates `c` onto the coefficient of `w`, respecting cap and the
    /// no-stored-zeros invariant. Letters are assumed valid.
    pub(crate) fn insert_add(&mut self, w: Word, c: Coefficient) {
        if w.len() > self.cap || c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// `⟨c, η⟩`.
    pub fn coefficient(&self, word: &Word) -> Coefficient {
        self.terms
            .get(word)
            .cloned()
            .unwrap_or_else(Coefficient::zero)
    }

    pub fn constant_term(&self) -> Coefficient {
        self.coefficient(&Word::empty())
    }

    /// Nonzero terms in canonical word order.
    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Coefficient)> {
        self.terms.iter()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Length of the longest supported word.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    /// Letters that appear anywhere in the support.
    pub fn letters_used(&self) -> Vec<u8> {
        let mut v: Vec<u8> = self
            .terms
            .keys()
            .flat_map(|w| w.letters().iter().copied())
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn truncate(&self, cap: usize) -> Series {
        Series {
            alphabet: self.alphabet,
            cap: cap.min(self.cap),
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() <= cap)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Same support, different cap. Raising the cap does not invent terms.
    pub fn with_cap(&self, cap: usize) -> Series {
        let mut s = self.truncate(cap);
        s.cap = cap;
        s
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        self.alphabet.ensure_same(&other.alphabet)?;
        let mut out = self.truncate(self.cap.min(other.cap));
        for (w, c) in &other.terms {
            out.insert_add(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Series {
        self.scale(&-Coefficient::one())
    }

    pub fn scale(&self, a: &Coefficient) -> Series {
        let mut out = Series::zero(self.alphabet, self.cap);
        if a.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(w, c)| (w.clone(), c * a)).collect();
        out
    }

    /// Concatenation (Cauchy) product: `⟨cd, η⟩ = Σ_{η=uv} ⟨c,u⟩⟨d,v⟩`.
    pub fn concat(&self, other: &Series) -> Result<Series> {
        self.alphabet.ensure_same(&other.alphabet)?;
        let cap = self.cap.min(other.cap);
        let mut out = Series::zero(self.alphabet, cap);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                if u.len() + v.len() <= cap {
                    out.insert_add(u.concat(v), a * b);
                }
            }
        }
        Ok(out)
    }

    /// Shuffle product, the bilinear extension of the word shuffle.
    pub fn shuffle(&self, other: &Series) -> Result<Series> {
        self.alphabet.ensure_same(&other.alphabet)?;
        let cap = self.cap.min(other.cap);
        let mut out = Series::zero(self.alphabet, cap);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                if u.len() + v.len() > cap {
                    continue;
                }
                let ab = a * b;
                for (w, n) in shuffle_words(u, v) {
                    out.insert_add(w, &ab * int(n as i64));
                }
            }
        }
        Ok(out)
    }

    /// `x_i^{-1}(c)`: keeps words starting with `x_i`, with that letter removed.
    pub fn left_shift_letter(&self, index: usize) -> Result<Series> {
        self.alphabet.check_letter(index)?;
        let mut out = Series::zero(self.alphabet, self.cap);
        for (w, c) in &self.terms {
            if w.first() == Some(index as u8) {
                out.insert_add(w.tail(), c.clone());
            }
        }
        Ok(out)
    }

    /// `p^{-1}(c) = Σ ⟨p,η⟩ η^{-1}(c)` for a polynomial `p`. A word shift
    /// `(x_i η)^{-1} = η^{-1} x_i^{-1}` strips `x_i η` as a prefix.
    pub fn left_shift_poly(&self, p: &Series) -> Result<Series> {
        self.alphabet.ensure_same(&p.alphabet)?;
        let mut out = Series::zero(self.alphabet, self.cap);
        for (prefix, a) in &p.terms {
            for (w, c) in &self.terms {
                if let Some(rest) = w.strip_prefix(prefix) {
                    out.insert_add(rest, a * c);
                }
            }
        }
        Ok(out)
    }

    /// `⟨c, d⟩ = Σ_η ⟨c,η⟩⟨d,η⟩` over the shared support.
    pub fn scalar_product(&self, other: &Series) -> Result<Coefficient> {
        self.alphabet.ensure_same(&other.alphabet)?;
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        Ok(small
            .terms
            .iter()
            .filter_map(|(w, a)| large.terms.get(w).map(|b| a * b))
            .fold(Coefficient::zero(), |acc, x| acc + x))
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let (sign, mag) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if i == 0 {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if w.is_empty() {
                f.write_str(&format_coefficient(&mag))?;
            } else if mag.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "{} {w}", format_coefficient(&mag))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::parse_word;

    fn ab(m: usize) -> Alphabet {
        Alphabet::new(m).unwrap()
    }

    fn poly(m: usize, cap: usize, terms: &[(&str, i64)]) -> Series {
        let a = ab(m);
        Series::from_terms(
            a,
            cap,
            terms
                .iter()
                .map(|(w, c)| (parse_word(w, a).unwrap(), int(*c))),
        )
        .unwrap()
    }

    #[test]
    fn coefficient_parsing() {
        assert_eq!(
            parse_coefficient("3/2").unwrap(),
            BigRational::new(3.into(), 2.into())
        );
        assert_eq!(parse_coefficient("-4").unwrap(), int(-4));
        assert_eq!(
            parse_coefficient("+6/4").unwrap(),
            BigRational::new(3.into(), 2.into())
        );
        assert_eq!(parse_coefficient(" 7 ").unwrap(), int(7));
        for bad in ["", "1/0", "x", "1.5", "--1", "1/"] {
            assert!(parse_coefficient(bad).is_err(), "{bad}");
        }
        assert_eq!(
            format_coefficient(&BigRational::new((-6).into(), 4.into())),
            "-3/2"
        );
        assert_eq!(format_coefficient(&int(5)), "5");
    }

    #[test]
    fn shuffle_examples() {
        let x1 = poly(1, 4, &[("x1", 1)]);
        assert_eq!(x1.shuffle(&x1).unwrap(), poly(1, 4, &[("x1 x1", 2)]));
        let one = Series::one(ab(1), 4);
        let eta = poly(1, 4, &[("x0 x1 x1", 1)]);
        assert_eq!(one.shuffle(&eta).unwrap(), eta);
        let x0 = poly(1, 4, &[("x0", 1)]);
        assert_eq!(
            x0.shuffle(&x1).unwrap(),
            poly(1, 4, &[("x0 x1", 1), ("x1 x0", 1)])
        );
    }

    #[test]
    fn shuffle_word_counts_are_binomial() {
        let u = Word::new([0, 1, 0]);
        let v = Word::new([1, 1]);
        let total: u64 = shuffle_words(&u, &v).iter().map(|(_, n)| n).sum();
        assert_eq!(total, 10);
    }

    #[test]
    fn concat_examples() {
        let x0 = poly(1, 3, &[("x0", 1)]);
        let x1 = poly(1, 3, &[("x1", 1)]);
        assert_eq!(x0.concat(&x1).unwrap(), poly(1, 3, &[("x0 x1", 1)]));
        let c = poly(1, 3, &[("", 2), ("x1 x0", -3)]);
        assert_eq!(Series::one(ab(1), 3).concat(&c).unwrap(), c);
        let s = x0.add(&x1).unwrap();
        assert_eq!(
            s.concat(&s).unwrap(),
            poly(
                1,
                3,
                &[("x0 x0", 1), ("x0 x1", 1), ("x1 x0", 1), ("x1 x1", 1)]
            )
        );
    }

    #[test]
    fn concat_truncates_at_smaller_cap() {
        let a = poly(1, 2, &[("x0", 1)]);
        let b = poly(1, 5, &[("x1 x1", 1)]);
        let p = a.concat(&b).unwrap();
        assert!(p.is_zero());
        assert_eq!(p.cap(), 2);
    }

    #[test]
    fn left_shifts() {
        let c = poly(1, 4, &[("x1 x0", 1)]);
        assert_eq!(c.left_shift_letter(1).unwrap(), poly(1, 4, &[("x0", 1)]));
        let c = poly(1, 4, &[("x0 x1", 1)]);
        assert!(c.left_shift_letter(1).unwrap().is_zero());
        let c = poly(1, 4, &[("x1 x1", 1)]);
        let s = c.left_shift_letter(1).unwrap();
        assert_eq!(s.constant_term(), int(0));
        assert_eq!(s.coefficient(&Word::letter(1)), int(1));
        assert!(c.left_shift_letter(2).is_err());
    }

    #[test]
    fn polynomial_shifts() {
        let c = poly(1, 4, &[("x0 x1 x0", 1)]);
        let p = poly(1, 4, &[("x0 x1", 1)]);
        assert_eq!(c.left_shift_poly(&p).unwrap(), poly(1, 4, &[("x0", 1)]));
        let c = poly(1, 4, &[("x0 x1", 5), ("x1", 2)]);
        assert_eq!(c.left_shift_poly(&Series::one(ab(1), 4)).unwrap(), c);
        let bracket = poly(1, 4, &[("x0 x1", 1), ("x1 x0", -1)]);
        let c = poly(1, 4, &[("x0 x1", 1)]);
        assert_eq!(c.left_shift_poly(&bracket).unwrap(), Series::one(ab(1), 4));
    }

    #[test]
    fn scalar_products() {
        let x1 = poly(1, 3, &[("x1", 1)]);
        assert_eq!(x1.scalar_product(&x1).unwrap(), int(1));
        let c = poly(1, 3, &[("", 7), ("x0", 2)]);
        assert_eq!(c.scalar_product(&Series::one(ab(1), 3)).unwrap(), int(7));
        let a = poly(1, 3, &[("x0 x1", 1), ("x1", 2)]);
        let b = poly(1, 3, &[("x0 x1", 1)]);
        assert_eq!(a.scalar_product(&b).unwrap(), int(1));
    }

    #[test]
    fn linear_plumbing() {
        let x1 = poly(1, 3, &[("x1", 1)]);
        assert_eq!(x1.add(&x1).unwrap(), poly(1, 3, &[("x1", 2)]));
        let c = poly(1, 3, &[("", 1), ("x0", 1), ("x0 x0", 1)]);
        assert_eq!(c.truncate(1), poly(1, 3, &[("", 1), ("x0", 1)]));
        assert!(x1.sub(&x1).unwrap().is_zero());
        assert!(x1.scale(&int(0)).is_zero());
    }

    #[test]
    fn mismatched_alphabets_are_rejected() {
        let a = Series::one(ab(1), 2);
        let b = Series::one(ab(2), 2);
        assert!(matches!(a.add(&b), Err(Error::AlphabetMismatch { .. })));
        assert!(a.shuffle(&b).is_err());
        assert!(a.concat(&b).is_err());
        assert!(a.scalar_product(&b).is_err());
    }

    #[test]
    fn display() {
        let c = poly(1, 3, &[("", -1), ("x0 x1", 3), ("x1", -2)]);
        assert_eq!(c.to_string(), "-1 - 2 x1 + 3 x0 x1");
        assert_eq!(Series::zero(ab(1), 2).to_string(), "0");
    }
}
