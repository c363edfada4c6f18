//! State-dependent formal vector fields on the n-fold product group, the
//! formal Lie derivative they induce on tensor functionals, and coefficient
//! extraction from a formal representation `(μ, z_0, ĉ)`.
//!
//! For a field whose slot `j` is `Σ_i q_i · f_i(z) · z_j`, the Lie derivative
//! of a monomial `T_1 ⊗ ⋯ ⊗ T_n` is
//!
//! ```text
//! Σ_j Σ_i Σ_{F ∈ f_i}  (T_1 ⧢ F_1) ⊗ ⋯ ⊗ ((q_i^{-1} T_j) ⧢ F_j) ⊗ ⋯ ⊗ (T_n ⧢ F_n)
//! ```
//!
//! The shift acts on `T_j` before it is shuffled with `F_j`: the state
//! dependent multiplier `f_i(z)` is a scalar at each `z` and factors out of
//! `⟨T_j, q_i z_j⟩`.
//!
//! When the initial state is the identity, only the `∅ ⊗ ⋯ ⊗ ∅` coefficient
//! survives the final evaluation. Each remaining derivative lowers the total
//! word length by at least one and shuffling only raises it, so after each
//! step any monomial whose total length exceeds the number of remaining
//! steps is discarded.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lie::{is_primitive_ree, GroupElement};
use crate::series::{shuffle_words, Coefficient, Series};
use crate::tensor::{expand_product, TensorFunctional};
use crate::word::{Alphabet, Word};

/// One summand `q · f(z)` of a slot of a state field: `q` is a Lie
/// polynomial, `f` a tensor functional.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldTerm {
    shift: Series,
    coeff: TensorFunctional,
}

impl FieldTerm {
    pub fn new(shift: Series, coeff: TensorFunctional) -> Result<Self> {
        shift.alphabet().ensure_same(&coeff.alphabet())?;
        let degree = shift.degree().unwrap_or(0);
        if shift.is_zero() || !shift.constant_term().is_zero() || !is_primitive_ree(&shift, degree)
        {
            return Err(Error::NotLie(shift.to_string()));
        }
        Ok(FieldTerm { shift, coeff })
    }

    /// `x_i · f(z)`.
    pub fn letter(alphabet: Alphabet, index: usize, coeff: TensorFunctional) -> Result<Self> {
        let shift = Series::letter(alphabet, 1, index)?;
        Self::new(shift, coeff)
    }

    pub fn shift(&self) -> &Series {
        &self.shift
    }

    pub fn coeff(&self) -> &TensorFunctional {
        &self.coeff
    }
}

/// `V(z) = (V_1(z) z_1, …, V_n(z) z_n)` with each `V_j(z)` a list of
/// [`FieldTerm`]s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateField {
    n: usize,
    slots: Vec<Vec<FieldTerm>>,
}

impl StateField {
    pub fn new(slots: Vec<Vec<FieldTerm>>) -> Result<Self> {
        let n = slots.len();
        for term in slots.iter().flatten() {
            if term.coeff.n() != n {
                return Err(Error::SlotMismatch {
                    left: n,
                    right: term.coeff.n(),
                });
            }
        }
        Ok(StateField { n, slots })
    }

    pub fn zero(n: usize) -> Self {
        StateField {
            n,
            slots: vec![Vec::new(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn slot(&self, j: usize) -> &[FieldTerm] {
        &self.slots[j]
    }
}

/// Formal Lie derivative of `c_hat` along `field`, keeping only monomials of
/// total degree `<= budget`. Pass `usize::MAX` to disable pruning.
pub fn lie_derivative(
    field: &StateField,
    c_hat: &TensorFunctional,
    budget: usize,
) -> Result<TensorFunctional> {
    if field.n != c_hat.n() {
        return Err(Error::SlotMismatch {
            left: field.n,
            right: c_hat.n(),
        });
    }
    let n = c_hat.n();
    let mut out = TensorFunctional::zero(c_hat.alphabet(), n, c_hat.cap());
    for (words, a) in c_hat.raw_terms() {
        let base: usize = words.iter().map(Word::len).sum();
        for j in 0..n {
            for term in &field.slots[j] {
                term.shift.alphabet().ensure_same(&c_hat.alphabet())?;
                let shifted: Vec<(Word, &Coefficient)> = term
                    .shift
                    .iter()
                    .filter_map(|(p, pc)| words[j].strip_prefix(p).map(|r| (r, pc)))
                    .collect();
                if shifted.is_empty() {
                    continue;
                }
                for (f_words, fc) in term.coeff.raw_terms() {
                    let f_deg: usize = f_words.iter().map(Word::len).sum();
                    for (rest, pc) in &shifted {
                        let total = base - words[j].len() + rest.len() + f_deg;
                        if total > budget {
                            continue;
                        }
                        let slots: Vec<Vec<(Word, u64)>> = (0..n)
                            .map(|l| {
                                let left = if l == j { rest } else { &words[l] };
                                shuffle_words(left, &f_words[l])
                            })
                            .collect();
                        expand_product(&slots, a * *pc * fc, &mut out);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// A formal representation `(μ, z_0, ĉ)`: one state field per letter, an
/// initial state, and output functionals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalRepresentation {
    alphabet: Alphabet,
    n: usize,
    mu: Vec<StateField>,
    initial: Vec<GroupElement>,
    outputs: Vec<TensorFunctional>,
}

impl FormalRepresentation {
    /// Builds a representation with initial state `1_n`.
    pub fn new(
        alphabet: Alphabet,
        mu: Vec<StateField>,
        outputs: Vec<TensorFunctional>,
    ) -> Result<Self> {
        if mu.len() != alphabet.size() {
            return Err(Error::Invalid(format!(
                "need one state field per letter: {} letters, {} fields",
                alphabet.size(),
                mu.len()
            )));
        }
        let n = mu
            .first()
            .map(StateField::n)
            .ok_or_else(|| Error::Invalid("empty letter map".into()))?;
        if n == 0 {
            return Err(Error::Invalid("dimension must be at least 1".into()));
        }
        for f in &mu {
            if f.n() != n {
                return Err(Error::SlotMismatch {
                    left: n,
                    right: f.n(),
                });
            }
            for t in f.slots.iter().flatten() {
                alphabet.ensure_same(&t.shift.alphabet())?;
            }
        }
        for c in &outputs {
            alphabet.ensure_same(&c.alphabet())?;
            if c.n() != n {
                return Err(Error::SlotMismatch {
                    left: n,
                    right: c.n(),
                });
            }
        }
        let cap = outputs.iter().map(TensorFunctional::cap).min().unwrap_or(0);
        Ok(FormalRepresentation {
            alphabet,
            n,
            mu,
            initial: vec![GroupElement::identity(alphabet, cap); n],
            outputs,
        })
    }

    /// The one-dimensional representation `μ(x_i) = x_i`, `ĉ = c`, whose
    /// generating series is `c` itself.
    pub fn trivial(c: &Series) -> Result<Self> {
        let alphabet = c.alphabet();
        let unit = TensorFunctional::unit(alphabet, 1, c.cap());
        let mu = (0..alphabet.size())
            .map(|i| StateField::new(vec![vec![FieldTerm::letter(alphabet, i, unit.clone())?]]))
            .collect::<Result<Vec<_>>>()?;
        Self::new(alphabet, mu, vec![TensorFunctional::embed(c, 1, 1)?])
    }

    /// Replaces the initial state. A non-identity start disables degree pruning.
    pub fn with_initial(mut self, initial: Vec<GroupElement>) -> Result<Self> {
        if initial.len() != self.n {
            return Err(Error::SlotMismatch {
                left: self.n,
                right: initial.len(),
            });
        }
        for z in &initial {
            self.alphabet.ensure_same(&z.series().alphabet())?;
        }
        self.initial = initial;
        Ok(self)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self, letter: usize) -> &StateField {
        &self.mu[letter]
    }

    pub fn outputs(&self) -> &[TensorFunctional] {
        &self.outputs
    }

    pub fn output_count(&self) -> usize {
        self.outputs.len()
    }

    pub fn initial(&self) -> &[GroupElement] {
        &self.initial
    }

    fn starts_at_identity(&self) -> bool {
        self.initial.iter().all(GroupElement::is_identity)
    }

    /// 1-based output lookup.
    fn output(&self, k: usize) -> Result<&TensorFunctional> {
        if k == 0 || k > self.outputs.len() {
            return Err(Error::OutputOutOfRange {
                index: k,
                count: self.outputs.len(),
            });
        }
        Ok(&self.outputs[k - 1])
    }

    fn evaluate(&self, f: &TensorFunctional) -> Result<Coefficient> {
        if self.starts_at_identity() {
            Ok(f.evaluate_identity())
        } else {
            f.evaluate_grouplike(&self.initial)
        }
    }

    fn budget(&self, remaining: usize) -> usize {
        if self.starts_at_identity() {
            remaining
        } else {
            usize::MAX
        }
    }

    /// `⟨d_k, η⟩`. The first letter of `η` selects the innermost derivative.
    pub fn coefficient(&self, k: usize, word: &Word) -> Result<Coefficient> {
        self.coefficient_with(k, word, |remaining| self.budget(remaining))
    }

    /// As [`coefficient`](Self::coefficient) with a caller-chosen pruning
    /// bound per step, given the number of letters still to process.
    pub fn coefficient_with(
        &self,
        k: usize,
        word: &Word,
        budget: impl Fn(usize) -> usize,
    ) -> Result<Coefficient> {
        self.alphabet.check_word(word)?;
        let mut d = self.output(k)?.truncate_total_degree(budget(word.len()));
        for (pos, &letter) in word.letters().iter().enumerate() {
            let remaining = word.len() - pos - 1;
            d = lie_derivative(&self.mu[letter as usize], &d, budget(remaining))?;
            if d.is_zero() {
                return Ok(Coefficient::zero());
            }
        }
        self.evaluate(&d)
    }

    /// The generating series of output `k` up to word length `max_len`.
    pub fn generating_series(&self, k: usize, max_len: usize) -> Result<Series> {
        let start = self.output(k)?.truncate_total_degree(self.budget(max_len));
        let mut out = Series::zero(self.alphabet, max_len);
        out.insert_add(Word::empty(), self.evaluate(&start)?);
        let mut stack = vec![(Word::empty(), start)];
        while let Some((prefix, d)) = stack.pop() {
            if prefix.len() == max_len {
                continue;
            }
            let remaining = max_len - prefix.len() - 1;
            for letter in 0..self.alphabet.size() {
                let next = lie_derivative(&self.mu[letter], &d, self.budget(remaining))?;
                if next.is_zero() {
                    continue;
                }
                let word = prefix.push_back(letter as u8);
                out.insert_add(word.clone(), self.evaluate(&next)?);
                stack.push((word, next));
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::int;
    use crate::word::parse_word;

    fn ab() -> Alphabet {
        Alphabet::new(1).unwrap()
    }

    fn s(terms: &[(&str, i64)], cap: usize) -> Series {
        Series::from_terms(
            ab(),
            cap,
            terms
                .iter()
                .map(|(w, c)| (parse_word(w, ab()).unwrap(), int(*c))),
        )
        .unwrap()
    }

    fn w(text: &str) -> Word {
        parse_word(text, ab()).unwrap()
    }

    #[test]
    fn field_terms_must_be_lie() {
        let unit = TensorFunctional::unit(ab(), 1, 3);
        assert!(FieldTerm::new(s(&[("x0 x1", 1)], 3), unit.clone()).is_err());
        assert!(FieldTerm::new(s(&[("", 1)], 3), unit.clone()).is_err());
        assert!(FieldTerm::new(s(&[("x0 x1", 1), ("x1 x0", -1)], 3), unit).is_ok());
    }

    #[test]
    fn trivial_representation_reproduces_series() {
        let c = s(&[("", 2), ("x0", -1), ("x1 x0", 3), ("x0 x1 x1", 5)], 3);
        let rep = FormalRepresentation::trivial(&c).unwrap();
        for word in ab().words(3) {
            assert_eq!(
                rep.coefficient(1, &word).unwrap(),
                c.coefficient(&word),
                "{word}"
            );
        }
        assert_eq!(rep.generating_series(1, 3).unwrap(), c);
        assert!(rep.coefficient(2, &Word::empty()).is_err());
    }

    #[test]
    fn zero_coefficients_kill_the_derivative() {
        let zero = TensorFunctional::zero(ab(), 1, 3);
        let field = StateField::new(vec![vec![FieldTerm::letter(ab(), 1, zero).unwrap()]]).unwrap();
        let c = TensorFunctional::embed(&s(&[("x1", 1), ("x1 x1", 2)], 3), 1, 1).unwrap();
        assert!(lie_derivative(&field, &c, 3).unwrap().is_zero());
    }

    #[test]
    fn bracket_shift() {
        let unit = TensorFunctional::unit(ab(), 1, 3);
        let br = s(&[("x0 x1", 1), ("x1 x0", -1)], 3);
        let field = StateField::new(vec![vec![FieldTerm::new(br, unit).unwrap()]]).unwrap();
        let c = TensorFunctional::embed(&s(&[("x0 x1 x0", 1), ("x1 x0", 4)], 3), 1, 1).unwrap();
        let d = lie_derivative(&field, &c, 3).unwrap();
        let expected = TensorFunctional::embed(&s(&[("x0", 1), ("", -4)], 3), 1, 1).unwrap();
        assert_eq!(d, expected);
    }

    #[test]
    fn slot_mismatch() {
        let field = StateField::zero(2);
        let c = TensorFunctional::unit(ab(), 1, 2);
        assert!(lie_derivative(&field, &c, 2).is_err());
    }

    #[test]
    fn non_identity_initial_state() {
        // trivial rep started at z0: coefficient(η) = ⟨η^{-1} c, z0⟩ = Σ_v ⟨c, ηv⟩⟨z0, v⟩
        let c = s(&[("x1", 1), ("x1 x0", 2), ("x0 x0", 3)], 3);
        let z0 = crate::lie::exp_truncated(&s(&[("x0", 1)], 3), 3).unwrap();
        let rep = FormalRepresentation::trivial(&c)
            .unwrap()
            .with_initial(vec![z0.clone()])
            .unwrap();
        let got = rep.coefficient(1, &w("x1")).unwrap();
        let expected = c
            .left_shift_letter(1)
            .unwrap()
            .scalar_product(z0.series())
            .unwrap();
        assert_eq!(got, expected);
        assert_eq!(got, int(3));
    }
}
