//! Lie polynomials, truncated exponentials and logarithms, and the
//! primitive / group-like tests used to validate them.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::series::{format_coefficient, int, shuffle_words, Coefficient, Series};
use crate::word::{Alphabet, Word};

/// `[p, q] = pq - qp`.
pub fn bracket(p: &Series, q: &Series) -> Result<Series> {
    p.concat(q)?.sub(&q.concat(p)?)
}

/// `Σ_{n<=N} p^n / n!`, capped at `min(cap p, N)`.
pub fn exp_truncated(p: &Series, n: usize) -> Result<GroupElement> {
    if !p.constant_term().is_zero() {
        return Err(Error::ConstantTerm {
            expected: "0".into(),
            found: format_coefficient(&p.constant_term()),
        });
    }
    let cap = p.cap().min(n);
    let p = p.with_cap(cap);
    let mut term = Series::one(p.alphabet(), cap);
    let mut sum = term.clone();
    for k in 1..=cap {
        term = term
            .concat(&p)?
            .scale(&Coefficient::new(1.into(), (k as i64).into()));
        if term.is_zero() {
            break;
        }
        sum = sum.add(&term)?;
    }
    Ok(GroupElement(sum))
}

/// `Σ_{n=1..N} (-1)^{n+1} (z - 1)^n / n`, the inverse of [`exp_truncated`].
pub fn log_truncated(z: &Series, n: usize) -> Result<Series> {
    if !z.constant_term().is_one() {
        return Err(Error::ConstantTerm {
            expected: "1".into(),
            found: format_coefficient(&z.constant_term()),
        });
    }
    let cap = z.cap().min(n);
    let y = z.with_cap(cap).sub(&Series::one(z.alphabet(), cap))?;
    let mut power = Series::one(z.alphabet(), cap);
    let mut sum = Series::zero(z.alphabet(), cap);
    for k in 1..=cap {
        power = power.concat(&y)?;
        if power.is_zero() {
            break;
        }
        let sign = if k % 2 == 1 { 1 } else { -1 };
        sum = sum.add(&power.scale(&Coefficient::new(sign.into(), (k as i64).into())))?;
    }
    Ok(sum)
}

/// Pairs of nonempty words `(η, ν)` with `|η| + |ν| <= n`, `η <= ν`.
fn word_pairs(alphabet: Alphabet, n: usize) -> Vec<(Word, Word)> {
    let words: Vec<Word> = alphabet
        .words(n.saturating_sub(1))
        .into_iter()
        .filter(|w| !w.is_empty())
        .collect();
    let mut pairs = Vec::new();
    for (i, a) in words.iter().enumerate() {
        for b in &words[i..] {
            if a.len() + b.len() <= n {
                pairs.push((a.clone(), b.clone()));
            }
        }
    }
    pairs
}

/// `⟨η ⧢ ν, s⟩`.
fn shuffle_pairing(s: &Series, eta: &Word, nu: &Word) -> Coefficient {
    shuffle_words(eta, nu)
        .into_iter()
        .map(|(w, k)| s.coefficient(&w) * int(k as i64))
        .fold(Coefficient::zero(), |a, b| a + b)
}

/// Ree's criterion up to degree `n`: `⟨η ⧢ ν, p⟩ = 0` for all nonempty
/// `η, ν` with `|η| + |ν| <= n`.
pub fn is_primitive_ree(p: &Series, n: usize) -> bool {
    p.constant_term().is_zero()
        && word_pairs(p.alphabet(), n)
            .iter()
            .all(|(a, b)| shuffle_pairing(p, a, b).is_zero())
}

/// `⟨z,∅⟩ = 1` and `⟨η ⧢ ν, z⟩ = ⟨η,z⟩⟨ν,z⟩` for nonempty `|η| + |ν| <= n`.
pub fn is_group_like(z: &Series, n: usize) -> bool {
    z.constant_term().is_one()
        && word_pairs(z.alphabet(), n)
            .iter()
            .all(|(a, b)| shuffle_pairing(z, a, b) == z.coefficient(a) * z.coefficient(b))
}

/// Float variant of [`is_group_like`] for simulated states, given as a
/// coefficient lookup.
pub fn is_group_like_f64(
    alphabet: Alphabet,
    n: usize,
    tol: f64,
    coeff: impl Fn(&Word) -> f64,
) -> bool {
    (coeff(&Word::empty()) - 1.0).abs() <= tol
        && word_pairs(alphabet, n).iter().all(|(a, b)| {
            let lhs: f64 = shuffle_words(a, b)
                .iter()
                .map(|(w, k)| coeff(w) * *k as f64)
                .sum();
            (lhs - coeff(a) * coeff(b)).abs() <= tol
        })
}

/// An element of the truncated formal group: a group-like series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElement(Series);

impl GroupElement {
    pub fn new(z: Series) -> Result<Self> {
        if is_group_like(&z, z.cap()) {
            Ok(GroupElement(z))
        } else {
            Err(Error::NotGroupLike(z.to_string()))
        }
    }

    pub fn identity(alphabet: Alphabet, cap: usize) -> Self {
        GroupElement(Series::one(alphabet, cap))
    }

    pub fn is_identity(&self) -> bool {
        self.0.support_len() == 1 && self.0.constant_term().is_one()
    }

    pub fn series(&self) -> &Series {
        &self.0
    }

    pub fn into_series(self) -> Series {
        self.0
    }

    /// Concatenation product; group-like inputs give a group-like result.
    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement> {
        Ok(GroupElement(self.0.concat(&other.0)?))
    }
}

/// A Lie series, checked with Ree's criterion at its cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieElement(Series);

impl LieElement {
    pub fn new(p: Series) -> Result<Self> {
        let n = p.degree().unwrap_or(0).min(p.cap());
        if is_primitive_ree(&p, n) {
            Ok(LieElement(p))
        } else {
            Err(Error::NotLie(p.to_string()))
        }
    }

    pub fn series(&self) -> &Series {
        &self.0
    }

    pub fn exp(&self, n: usize) -> Result<GroupElement> {
        exp_truncated(&self.0, n)
    }
}

/// Chen series of the constant input `u_i = α_i` (with `α_0 = 1`) at time
/// `t`: the coefficient of `x_{i1}⋯x_{ik}` is `α_{i1}⋯α_{ik} t^k / k!`.
pub fn chen_series_constant(
    alphabet: Alphabet,
    alpha: &[Coefficient],
    t: &Coefficient,
    n: usize,
) -> Result<GroupElement> {
    if alpha.len() != alphabet.size() {
        return Err(Error::Invalid(format!(
            "expected {} input values, got {}",
            alphabet.size(),
            alpha.len()
        )));
    }
    if !alpha[0].is_one() {
        return Err(Error::ConstantTerm {
            expected: "1".into(),
            found: format_coefficient(&alpha[0]),
        });
    }
    let mut z = Series::zero(alphabet, n);
    let mut t_pow_over_fact = Coefficient::one();
    let mut layer = vec![(Word::empty(), Coefficient::one())];
    z.insert_add(Word::empty(), Coefficient::one());
    for k in 1..=n {
        t_pow_over_fact = t_pow_over_fact * t / int(k as i64);
        let mut next = Vec::with_capacity(layer.len() * alpha.len());
        for (w, prod) in &layer {
            for (i, a) in alpha.iter().enumerate() {
                let p = prod * a;
                if p.is_zero() {
                    continue;
                }
                let word = w.push_back(i as u8);
                z.insert_add(word.clone(), &p * &t_pow_over_fact);
                next.push((word, p));
            }
        }
        layer = next;
    }
    Ok(GroupElement(z))
}

/// Float Chen series of a constant input; `alpha[0]` is the drift and must be 1.
pub fn chen_series_constant_f64(alpha: &[f64], t: f64, n: usize) -> Vec<(Word, f64)> {
    let mut out = vec![(Word::empty(), 1.0)];
    let mut layer = vec![(Word::empty(), 1.0)];
    let mut scale = 1.0;
    for k in 1..=n {
        scale *= t / k as f64;
        let mut next = Vec::with_capacity(layer.len() * alpha.len());
        for (w, prod) in &layer {
            for (i, a) in alpha.iter().enumerate() {
                let word = w.push_back(i as u8);
                out.push((word.clone(), prod * a * scale));
                next.push((word, prod * a));
            }
        }
        layer = next;
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}
