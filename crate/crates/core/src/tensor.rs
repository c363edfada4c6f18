//! Functions on the n-fold product group: finite sums of tensor products
//! `c_1 ⊗ ⋯ ⊗ c_n`, evaluated as `⟨c_1,z_1⟩⋯⟨c_n,z_n⟩`.
//!
//! A [`TensorFunctional`] is stored expanded over word tuples
//! `(w_1, …, w_n)`, which is a basis of the tensor power of the polynomial
//! space. Construction therefore already merges equal slot tuples and drops
//! zero terms, so [`TensorFunctional::normalize`] is idempotent by
//! construction. Products of evaluations in the same slot are folded into
//! one series by shuffling; this is only meaningful at group-like arguments.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lie::GroupElement;
use crate::series::{format_coefficient, int, shuffle_words, Coefficient, Series};
use crate::word::{Alphabet, Word};

/// One tensor product `scalar · c_1 ⊗ ⋯ ⊗ c_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorTerm {
    pub slots: Vec<Series>,
    pub scalar: Coefficient,
}

impl TensorTerm {
    pub fn new(slots: Vec<Series>, scalar: Coefficient) -> Self {
        TensorTerm { slots, scalar }
    }
}

#[derive(Debug, Clone)]
pub struct TensorFunctional {
    alphabet: Alphabet,
    n: usize,
    cap: usize,
    terms: BTreeMap<Vec<Word>, Coefficient>,
}

impl PartialEq for TensorFunctional {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet && self.n == other.n && self.terms == other.terms
    }
}

impl Eq for TensorFunctional {}

impl TensorFunctional {
    pub fn zero(alphabet: Alphabet, n: usize, cap: usize) -> Self {
        TensorFunctional {
            alphabet,
            n,
            cap,
            terms: BTreeMap::new(),
        }
    }

    /// The constant function `1 ⊗ ⋯ ⊗ 1`.
    pub fn unit(alphabet: Alphabet, n: usize, cap: usize) -> Self {
        Self::constant(alphabet, n, cap, Coefficient::one())
    }

    pub fn constant(alphabet: Alphabet, n: usize, cap: usize, value: Coefficient) -> Self {
        let mut f = Self::zero(alphabet, n, cap);
        f.insert_add(vec![Word::empty(); n], value);
        f
    }

    /// Expands a list of tensor terms. Every slot must share the alphabet;
    /// the functional's cap is the smallest slot cap.
    pub fn from_terms(alphabet: Alphabet, n: usize, terms: Vec<TensorTerm>) -> Result<Self> {
        let mut cap = usize::MAX;
        for t in &terms {
            if t.slots.len() != n {
                return Err(Error::SlotMismatch {
                    left: n,
                    right: t.slots.len(),
                });
            }
            for s in &t.slots {
                alphabet.ensure_same(&s.alphabet())?;
                cap = cap.min(s.cap());
            }
        }
        let mut out = Self::zero(alphabet, n, if terms.is_empty() { 0 } else { cap });
        for t in terms {
            if t.scalar.is_zero() {
                continue;
            }
            let mut partial: Vec<(Vec<Word>, Coefficient)> = vec![(Vec::new(), t.scalar.clone())];
            for slot in &t.slots {
                let mut next = Vec::with_capacity(partial.len() * slot.support_len());
                for (words, c) in &partial {
                    for (w, a) in slot.iter() {
                        let mut ws = words.clone();
                        ws.push(w.clone());
                        next.push((ws, c * a));
                    }
                }
                partial = next;
            }
            for (words, c) in partial {
                out.insert_add(words, c);
            }
        }
        Ok(out)
    }

    /// `1 ⊗ ⋯ ⊗ c ⊗ ⋯ ⊗ 1` with `c` in slot `j` (1-based).
    pub fn embed(c: &Series, j: usize, n: usize) -> Result<Self> {
        if j == 0 || j > n {
            return Err(Error::SlotOutOfRange { index: j, n });
        }
        let mut out = Self::zero(c.alphabet(), n, c.cap());
        for (w, a) in c.iter() {
            let mut words = vec![Word::empty(); n];
            words[j - 1] = w.clone();
            out.insert_add(words, a.clone());
        }
        Ok(out)
    }

    /// A single monomial term `coeff · w_1 ⊗ ⋯ ⊗ w_n`.
    pub fn monomial(
        alphabet: Alphabet,
        cap: usize,
        words: Vec<Word>,
        coeff: Coefficient,
    ) -> Result<Self> {
        for w in &words {
            alphabet.check_word(w)?;
        }
        let mut out = Self::zero(alphabet, words.len(), cap);
        out.insert_add(words, coeff);
        Ok(out)
    }

    pub(crate) fn insert_add(&mut self, words: Vec<Word>, c: Coefficient) {
        if c.is_zero() || words.iter().any(|w| w.len() > self.cap) {
            return;
        }
        match self.terms.entry(words) {
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

    pub(crate) fn raw_terms(&self) -> &BTreeMap<Vec<Word>, Coefficient> {
        &self.terms
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of monomial terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order, one per distinct word tuple; each slot is a
    /// single-word series with coefficient one.
    pub fn terms(&self) -> Vec<TensorTerm> {
        self.terms
            .iter()
            .map(|(ws, c)| TensorTerm {
                slots: ws
                    .iter()
                    .map(|w| {
                        Series::from_terms(
                            self.alphabet,
                            self.cap,
                            [(w.clone(), Coefficient::one())],
                        )
                        .expect("stored words are valid")
                    })
                    .collect(),
                scalar: c.clone(),
            })
            .collect()
    }

    /// Monomial view: `(word tuple, coefficient)` pairs.
    pub fn monomials(&self) -> impl Iterator<Item = (&[Word], &Coefficient)> {
        self.terms.iter().map(|(w, c)| (w.as_slice(), c))
    }

    /// Merges equal slot tuples and removes zero terms.
    pub fn normalize(&self) -> Self {
        self.clone()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        self.alphabet.ensure_same(&other.alphabet)?;
        if self.n != other.n {
            return Err(Error::SlotMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.cap = self.cap.min(other.cap);
        out.terms
            .retain(|ws, _| ws.iter().all(|w| w.len() <= out.cap));
        for (ws, c) in &other.terms {
            out.insert_add(ws.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, a: &Coefficient) -> Self {
        let mut out = Self::zero(self.alphabet, self.n, self.cap);
        for (ws, c) in &self.terms {
            out.insert_add(ws.clone(), c * a);
        }
        out
    }

    /// Slotwise shuffle product, bilinear over terms.
    pub fn shuffle(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let cap = self.cap.min(other.cap);
        let mut out = Self::zero(self.alphabet, self.n, cap);
        for (a_words, a) in &self.terms {
            for (b_words, b) in &other.terms {
                if a_words
                    .iter()
                    .zip(b_words)
                    .any(|(u, v)| u.len() + v.len() > cap)
                {
                    continue;
                }
                let slot_products: Vec<Vec<(Word, u64)>> = a_words
                    .iter()
                    .zip(b_words)
                    .map(|(u, v)| shuffle_words(u, v))
                    .collect();
                expand_product(&slot_products, a * b, &mut out);
            }
        }
        Ok(out)
    }

    /// Drops monomials whose total word length across slots exceeds `max`.
    pub fn truncate_total_degree(&self, max: usize) -> Self {
        let mut out = self.clone();
        out.terms
            .retain(|ws, _| ws.iter().map(Word::len).sum::<usize>() <= max);
        out
    }

    /// Value at the identity `(1, …, 1)`: the coefficient of `∅ ⊗ ⋯ ⊗ ∅`.
    pub fn evaluate_identity(&self) -> Coefficient {
        self.terms
            .get(&vec![Word::empty(); self.n])
            .cloned()
            .unwrap_or_else(Coefficient::zero)
    }

    /// `Σ scalar · Π_l ⟨c_l, z_l⟩` at a tuple of group elements.
    pub fn evaluate_grouplike(&self, z: &[GroupElement]) -> Result<Coefficient> {
        if z.len() != self.n {
            return Err(Error::SlotMismatch {
                left: self.n,
                right: z.len(),
            });
        }
        for zl in z {
            self.alphabet.ensure_same(&zl.series().alphabet())?;
        }
        let mut total = Coefficient::zero();
        for (ws, c) in &self.terms {
            let mut prod = c.clone();
            for (w, zl) in ws.iter().zip(z) {
                prod *= zl.series().coefficient(w);
                if prod.is_zero() {
                    break;
                }
            }
            total += prod;
        }
        Ok(total)
    }
}

/// Adds `scale · Π_l (slot product)` into `out`, expanding the Cartesian product.
pub(crate) fn expand_product(
    slots: &[Vec<(Word, u64)>],
    scale: Coefficient,
    out: &mut TensorFunctional,
) {
    let mut partial: Vec<(Vec<Word>, u64)> = vec![(Vec::with_capacity(slots.len()), 1)];
    for options in slots {
        if options.len() == 1 {
            let (w, k) = &options[0];
            for (ws, n) in partial.iter_mut() {
                ws.push(w.clone());
                *n *= k;
            }
            continue;
        }
        let mut next = Vec::with_capacity(partial.len() * options.len());
        for (ws, n) in &partial {
            for (w, k) in options {
                let mut v = ws.clone();
                v.push(w.clone());
                next.push((v, n * k));
            }
        }
        partial = next;
    }
    for (ws, n) in partial {
        let c = if n == 1 {
            scale.clone()
        } else {
            &scale * int(n as i64)
        };
        out.insert_add(ws, c);
    }
}

impl fmt::Display for TensorFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(ws, c)| {
                let slots: Vec<String> = ws.iter().map(|w| w.to_string()).collect();
                format!("{}·({})", format_coefficient(c), slots.join(" ⊗ "))
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}
