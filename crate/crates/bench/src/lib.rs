//! Fixtures shared by the benchmarks.

use fliessnet::network::factorial_geometric;
use fliessnet::{
    parse_coefficient, parse_word, Alphabet, NetworkKind, NetworkSpec, Series, WeightMatrix,
};

fn series(alphabet: Alphabet, cap: usize, terms: &[(&str, &str)]) -> Series {
    Series::from_terms(
        alphabet,
        cap,
        terms.iter().map(|(w, c)| {
            (
                parse_word(w, alphabet).unwrap(),
                parse_coefficient(c).unwrap(),
            )
        }),
    )
    .unwrap()
}

/// Dense polynomial over `x0, x1` with every word up to `degree`.
pub fn dense_polynomial(degree: usize, cap: usize) -> Series {
    let x = Alphabet::new(1).unwrap();
    let terms = x.words(degree).into_iter().enumerate().map(|(i, w)| {
        (
            w,
            parse_coefficient(&format!("{}/{}", i % 7 + 1, i % 3 + 1)).unwrap(),
        )
    });
    Series::from_terms(x, cap, terms).unwrap()
}

/// Unity multiplicative loop around `Σ k! x1^k`.
pub fn factorial_loop(degree: usize) -> NetworkSpec {
    let x = Alphabet::new(1).unwrap();
    let c = factorial_geometric(x, 1, degree).unwrap();
    NetworkSpec::new(
        NetworkKind::Multiplicative,
        vec![c],
        WeightMatrix::from_integers(&[&[1]]).unwrap(),
        degree,
    )
    .unwrap()
}

/// Two nodes coupled through the off-diagonal weights.
pub fn two_node_additive(degree: usize) -> NetworkSpec {
    let x = Alphabet::new(2).unwrap();
    let c1 = series(
        x,
        degree,
        &[("", "1"), ("x1", "2"), ("x0 x1", "-1/2"), ("x1 x1", "3")],
    );
    let c2 = series(
        x,
        degree,
        &[("", "-1"), ("x2", "1"), ("x2 x0", "1/3"), ("x2 x2", "1")],
    );
    NetworkSpec::new(
        NetworkKind::Additive,
        vec![c1, c2],
        WeightMatrix::from_integers(&[&[0, 1], &[1, 0]]).unwrap(),
        degree,
    )
    .unwrap()
}
