//! The composition product `c ∘ d = Σ ⟨c,η̃⟩ ψ_d(η̃)(1)`, computed directly
//! from its definition. It serves as an independent check on cascade
//! representations.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::series::Series;
use crate::word::{Alphabet, Word};

/// `ψ_d(x̃_i)(e) = x_0 (d_i ⧢ e)`, with `d_0 = 1`.
fn psi_letter(letter: u8, inner: &[Series], e: &Series) -> Result<Series> {
    let shuffled = if letter == 0 {
        e.clone()
    } else {
        inner[letter as usize - 1].shuffle(e)?
    };
    let mut out = Series::zero(e.alphabet(), e.cap());
    for (w, c) in shuffled.iter() {
        out.insert_add(w.push_front(0), c.clone());
    }
    Ok(out)
}

/// Generating series of the cascade `F_c ∘ F_d` up to word length `max_len`.
/// `outer` lives on `x̃_0..x̃_m̃`; `inner` holds the `m̃` series driving
/// `x̃_1..x̃_m̃`, all over one alphabet `X`.
pub fn compose(outer: &Series, inner: &[Series], max_len: usize) -> Result<Series> {
    let m_tilde = outer.alphabet().m();
    if inner.len() != m_tilde {
        return Err(Error::Invalid(format!(
            "outer series has {m_tilde} input letters but {} inner series were given",
            inner.len()
        )));
    }
    let alphabet: Alphabet = inner[0].alphabet();
    for d in inner {
        alphabet.ensure_same(&d.alphabet())?;
    }
    let cap = inner.iter().map(Series::cap).fold(max_len, usize::min);
    let inner: Vec<Series> = inner.iter().map(|d| d.truncate(cap)).collect();

    // ψ_d(suffix)(1), keyed by suffix of η̃
    let mut memo: HashMap<Word, Series> = HashMap::new();
    memo.insert(Word::empty(), Series::one(alphabet, cap));
    let mut out = Series::zero(alphabet, cap);
    for (word, coeff) in outer.iter() {
        if word.len() > cap {
            continue;
        }
        let letters = word.letters();
        for start in (0..letters.len()).rev() {
            let suffix = Word::new(letters[start..].iter().copied());
            if memo.contains_key(&suffix) {
                continue;
            }
            let tail = memo[&suffix.tail()].clone();
            memo.insert(suffix, psi_letter(letters[start], &inner, &tail)?);
        }
        let image = &memo[word];
        for (w, c) in image.iter() {
            out.insert_add(w.clone(), c * coeff);
        }
    }
    Ok(out)
}

/// Convenience form for a single inner series.
pub fn compose_single(outer: &Series, inner: &Series, max_len: usize) -> Result<Series> {
    compose(outer, std::slice::from_ref(inner), max_len)
}

/// `ψ_d(η̃)(1)` for a single word, exposed for structural checks.
pub fn psi_word(word: &Word, inner: &[Series], max_len: usize) -> Result<Series> {
    let alphabet = inner
        .first()
        .map(Series::alphabet)
        .ok_or_else(|| Error::Invalid("no inner series".into()))?;
    let mut e = Series::one(alphabet, max_len);
    for &l in word.letters().iter().rev() {
        if l as usize > inner.len() {
            return Err(Error::LetterOutOfRange {
                index: l as usize,
                m: inner.len(),
            });
        }
        e = psi_letter(l, inner, &e)?;
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::int;
    use crate::word::parse_word;
    use num_traits::One;

    fn is_unit(s: &Series) -> bool {
        s.support_len() == 1 && s.constant_term().is_one()
    }

    fn s(terms: &[(&str, i64)], cap: usize) -> Series {
        let a = Alphabet::new(1).unwrap();
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
    fn composition_of_squares() {
        let c = s(&[("x1 x1", 1)], 4);
        let d = s(&[("x1", 1)], 4);
        assert_eq!(
            compose_single(&c, &d, 4).unwrap(),
            s(&[("x0 x1 x0 x1", 1), ("x0 x0 x1 x1", 2)], 4)
        );
    }

    #[test]
    fn unit_and_drift() {
        let d = s(&[("x1", 3), ("", 1)], 4);
        let one = Series::one(Alphabet::new(1).unwrap(), 4);
        assert!(is_unit(&compose_single(&one, &d, 4).unwrap()));
        let x0 = s(&[("x0", 1)], 4);
        assert_eq!(compose_single(&x0, &d, 4).unwrap(), x0);
    }

    #[test]
    fn dimension_mismatch() {
        let c = s(&[("x1", 1)], 3);
        assert!(compose(&c, &[], 3).is_err());
    }

    #[test]
    fn psi_structure() {
        let d = s(&[("x1", 1), ("x0 x1", 2)], 5);
        let w = parse_word("x1 x0 x1", Alphabet::new(1).unwrap()).unwrap();
        let image = psi_word(&w, std::slice::from_ref(&d), 5).unwrap();
        assert!(image
            .iter()
            .all(|(v, _)| v.len() >= 3 && v.first() == Some(0)));
    }
}
