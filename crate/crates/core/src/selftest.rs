//! End-to-end checks run by the `acceptance` test target and by the
//! `selftest` CLI command.
//!
//! Every check compares the engine against something computed another way:
//! closed-form coefficient formulas written out by hand, the composition
//! product, a univariate derivative recursion, or the numeric integrator.
//! Random inputs come from a fixed-seed generator so runs are reproducible.

use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::compose::compose_single;
use crate::lie::{bracket, exp_truncated, is_group_like, is_primitive_ree, GroupElement};
use crate::network::{build_cascade, NetworkKind, NetworkSpec, WeightMatrix};
use crate::representation::{lie_derivative, FieldTerm, FormalRepresentation, StateField};
use crate::series::{int, Coefficient, Series};
use crate::sim::{verify_order, ConstantInput};
use crate::tensor::TensorFunctional;
use crate::word::{parse_word, Alphabet, Word};

/// One acceptance criterion.
pub struct Check {
    pub id: u32,
    pub name: &'static str,
    pub time_limit: Duration,
    run: fn() -> Result<String, String>,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl Check {
    pub fn run(&self) -> Outcome {
        let start = Instant::now();
        let result = (self.run)();
        let elapsed = start.elapsed();
        let (passed, detail) = match result {
            Ok(d) if elapsed <= self.time_limit => (true, d),
            Ok(d) => (
                false,
                format!("{d}; exceeded time limit {:?}", self.time_limit),
            ),
            Err(e) => (false, e),
        };
        Outcome {
            id: self.id,
            name: self.name,
            passed,
            detail,
            elapsed,
        }
    }
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}] {:>2} {} ({:.2?}): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed,
            self.detail
        )
    }
}

pub fn checks() -> Vec<Check> {
    let secs = Duration::from_secs;
    vec![
        Check {
            id: 1,
            name: "composition of x1^2 with x1",
            time_limit: secs(1),
            run: composition_example,
        },
        Check {
            id: 2,
            name: "Lie-derivative chain on the cascade",
            time_limit: secs(1),
            run: lie_chain_example,
        },
        Check {
            id: 3,
            name: "additive single-node feedback",
            time_limit: secs(5),
            run: additive_single_node,
        },
        Check {
            id: 4,
            name: "additive two- and three-node networks",
            time_limit: secs(5),
            run: additive_multi_node,
        },
        Check {
            id: 5,
            name: "multiplicative single-node loop",
            time_limit: secs(10),
            run: multiplicative_loop,
        },
        Check {
            id: 6,
            name: "trivial representation",
            time_limit: secs(5),
            run: trivial_representation,
        },
        Check {
            id: 7,
            name: "algebraic property suite",
            time_limit: secs(60),
            run: property_suite,
        },
        Check {
            id: 8,
            name: "numeric truncation order",
            time_limit: secs(30),
            run: numeric_order,
        },
    ]
}

pub fn run_all() -> Vec<Outcome> {
    checks().iter().map(Check::run).collect()
}

// ---------------------------------------------------------------------------
// helpers

fn ab(m: usize) -> Alphabet {
    Alphabet::new(m).expect("m >= 1")
}

fn w(text: &str, alphabet: Alphabet) -> Word {
    parse_word(text, alphabet).expect("valid word")
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_rational(rng: &mut ChaCha8Rng) -> Coefficient {
    let n: i64 = rng.gen_range(-6..=6);
    let d: i64 = rng.gen_range(1..=4);
    Coefficient::new(n.into(), d.into())
}

/// Random polynomial over `letters` with words of length `<= degree`.
pub fn random_polynomial(
    rng: &mut ChaCha8Rng,
    alphabet: Alphabet,
    letters: &[u8],
    degree: usize,
    cap: usize,
) -> Series {
    let words = alphabet
        .words(degree)
        .into_iter()
        .filter(|w| w.uses_only(letters));
    let mut terms: Vec<(Word, Coefficient)> = Vec::new();
    for w in words {
        if rng.gen_bool(0.7) {
            terms.push((w, random_rational(rng)));
        }
    }
    Series::from_terms(alphabet, cap, terms).expect("letters are valid")
}

/// Random combination of nested brackets of letters, degree `<= degree`.
pub fn random_lie_polynomial(
    rng: &mut ChaCha8Rng,
    alphabet: Alphabet,
    degree: usize,
    cap: usize,
) -> Series {
    let mut total = Series::zero(alphabet, cap);
    for _ in 0..3 {
        let len = rng.gen_range(1..=degree.max(1));
        let mut b = Series::letter(alphabet, cap, rng.gen_range(0..alphabet.size())).unwrap();
        for _ in 1..len {
            let l = Series::letter(alphabet, cap, rng.gen_range(0..alphabet.size())).unwrap();
            b = if rng.gen_bool(0.5) {
                bracket(&l, &b)
            } else {
                bracket(&b, &l)
            }
            .unwrap();
        }
        total = total.add(&b.scale(&random_rational(rng))).unwrap();
    }
    total
}

fn expect_eq(what: &str, got: &Coefficient, want: &Coefficient) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: engine gave {got}, expected {want}"))
    }
}

fn single_node(kind: NetworkKind, c: Series, weight: i64) -> NetworkSpec {
    let cap = c.cap();
    NetworkSpec::new(
        kind,
        vec![c],
        WeightMatrix::from_integers(&[&[weight]]).unwrap(),
        cap,
    )
    .expect("valid single node")
}

fn off_diagonal_ones(m: usize) -> WeightMatrix {
    WeightMatrix::new(
        (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| if i == j { int(0) } else { int(1) })
                    .collect()
            })
            .collect(),
    )
    .unwrap()
}

// ---------------------------------------------------------------------------
// 1

fn composition_example() -> Result<String, String> {
    let x = ab(1);
    let outer = Series::monomial(x, 4, w("x1 x1", x), int(1)).unwrap();
    let inner = Series::letter(x, 4, 1).unwrap();
    let expected = Series::from_terms(
        x,
        4,
        [(w("x0 x1 x0 x1", x), int(1)), (w("x0 x0 x1 x1", x), int(2))],
    )
    .unwrap();
    let composed = compose_single(&outer, &inner, 4).map_err(|e| e.to_string())?;
    if composed != expected {
        return Err(format!("compose gave {composed}"));
    }
    let engine = build_cascade(&outer, &inner)
        .and_then(|r| r.generating_series(1, 4))
        .map_err(|e| e.to_string())?;
    if engine != expected {
        return Err(format!("cascade representation gave {engine}"));
    }
    Ok(format!("c∘d = {expected} by both routes"))
}

// ---------------------------------------------------------------------------
// 2

fn lie_chain_example() -> Result<String, String> {
    let x = ab(1);
    let outer = Series::monomial(x, 4, w("x1 x1", x), int(1)).unwrap();
    let inner = Series::letter(x, 4, 1).unwrap();
    let rep = build_cascade(&outer, &inner).map_err(|e| e.to_string())?;
    let mono = |words: [&str; 2], c: i64| {
        TensorFunctional::monomial(x, 4, words.iter().map(|t| w(t, x)).collect(), int(c)).unwrap()
    };
    let expected = [
        mono(["x1", "x1"], 1),
        mono(["x1 x1", ""], 2),
        mono(["x1", ""], 2),
    ];
    let mut d = rep.outputs()[0].clone();
    for (step, (letter, want)) in [0usize, 0, 1].iter().zip(&expected).enumerate() {
        d = lie_derivative(rep.field(*letter), &d, 3 - step).map_err(|e| e.to_string())?;
        if d.normalize() != *want {
            return Err(format!("step {}: got {d}, expected {want}", step + 1));
        }
    }
    let value = rep
        .coefficient(1, &w("x0 x0 x1 x1", x))
        .map_err(|e| e.to_string())?;
    expect_eq("⟨c∘d, x0 x0 x1 x1⟩", &value, &int(2))?;
    Ok("x1⊗x1 → 2x1²⊗1 → 2x1⊗1 → 2".into())
}

// ---------------------------------------------------------------------------
// 3

fn additive_single_node() -> Result<String, String> {
    let x = ab(1);
    let mut r = rng(3);
    for trial in 0..20 {
        let c = random_polynomial(&mut r, x, &[0, 1], 3, 3);
        let rep = single_node(NetworkKind::Additive, c.clone(), 1)
            .build()
            .map_err(|e| e.to_string())?;
        let k = |t: &str| c.coefficient(&w(t, x));
        let (e, c0, c1, c00, c01, c10, c11) = (
            k(""),
            k("x0"),
            k("x1"),
            k("x0 x0"),
            k("x0 x1"),
            k("x1 x0"),
            k("x1 x1"),
        );
        let closed = [
            ("", e.clone()),
            ("x1", c1.clone()),
            ("x0", &c0 + &c1 * &e),
            ("x1 x1", c11.clone()),
            ("x0 x1", &c01 + &c1 * &c1 + &c11 * &e),
            ("x1 x0", &c10 + &c11 * &e),
            (
                "x0 x0",
                &c00 + &c1 * &c0 + &c10 * &e + &c01 * &e + &c1 * &c1 * &e + &c11 * &e * &e,
            ),
        ];
        for (word, want) in closed {
            let got = rep.coefficient(1, &w(word, x)).map_err(|e| e.to_string())?;
            expect_eq(&format!("trial {trial}, c = {c}, ⟨d,{word}⟩"), &got, &want)?;
        }
    }
    Ok("7 closed forms × 20 random c".into())
}

// ---------------------------------------------------------------------------
// 4

fn additive_multi_node() -> Result<String, String> {
    let mut r = rng(4);
    let mut checked = 0;
    for m in [2usize, 3] {
        let x = ab(m);
        for _ in 0..5 {
            let series: Vec<Series> = (1..=m)
                .map(|i| random_polynomial(&mut r, x, &[0, i as u8], 2, 2))
                .collect();
            let spec = NetworkSpec::new(
                NetworkKind::Additive,
                series.clone(),
                off_diagonal_ones(m),
                2,
            )
            .map_err(|e| e.to_string())?;
            let rep = spec.build().map_err(|e| e.to_string())?;
            // every output, by symmetry of the all-ones off-diagonal weights
            for k in 1..=m {
                let own = |suffix: &[u8]| {
                    Word::new(suffix.iter().map(|&l| if l == 1 { k as u8 } else { l }))
                };
                let ck = |suffix: &[u8]| series[k - 1].coefficient(&own(suffix));
                let others: Coefficient = (1..=m)
                    .filter(|&j| j != k)
                    .map(|j| series[j - 1].constant_term())
                    .fold(Coefficient::zero(), |a, b| a + b);
                let mut closed: Vec<(Word, Coefficient)> = vec![
                    (Word::empty(), ck(&[])),
                    (own(&[1]), ck(&[1])),
                    (own(&[0]), ck(&[0]) + ck(&[1]) * &others),
                    (own(&[1, 1]), ck(&[1, 1])),
                    (own(&[1, 0]), ck(&[1, 0]) + ck(&[1, 1]) * &others),
                    (own(&[0, 1]), ck(&[0, 1]) + ck(&[1, 1]) * &others),
                ];
                for j in (1..=m).filter(|&j| j != k) {
                    closed.push((Word::new([j as u8]), int(0)));
                    closed.push((Word::new([k as u8, j as u8]), int(0)));
                    if m == 2 {
                        closed.push((Word::new([j as u8, k as u8]), int(0)));
                        closed.push((Word::new([j as u8, j as u8]), int(0)));
                    }
                }
                for (word, want) in closed {
                    let got = rep.coefficient(k, &word).map_err(|e| e.to_string())?;
                    expect_eq(&format!("m = {m}, ⟨d_{k},{word}⟩"), &got, &want)?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} closed-form coefficients"))
}

// ---------------------------------------------------------------------------
// 5

/// `⟨d, x1^k⟩` of the unity multiplicative loop, from the derivative
/// recursion `g_0 = φ`, `g_{k+1} = g_k' φ` with `φ(t) = Σ ⟨c,x1^a⟩ t^a/a!`.
/// Words in `x1` alone behave like exponential generating functions under
/// shuffle, so `⟨d, x1^k⟩ = g_k(0)`.
pub fn multiplicative_power_oracle(c_powers: &[Coefficient], k: usize) -> Coefficient {
    // polynomials in t stored by coefficient of t^a/a! (EGF form):
    // derivative shifts, product is the binomial convolution
    let len = c_powers.len();
    let product = |f: &[Coefficient], g: &[Coefficient]| -> Vec<Coefficient> {
        let mut out = vec![Coefficient::zero(); len];
        for n in 0..len {
            let mut binom = Coefficient::one();
            for a in 0..=n {
                out[n] += &binom * &f[a] * &g[n - a];
                binom = binom * int((n - a) as i64) / int((a + 1) as i64);
            }
        }
        out
    };
    let mut g = c_powers.to_vec();
    for _ in 0..k {
        let mut shifted: Vec<Coefficient> = g[1..].to_vec();
        shifted.push(Coefficient::zero());
        g = product(&shifted, c_powers);
    }
    g[0].clone()
}

fn multiplicative_loop() -> Result<String, String> {
    let x = ab(1);
    let c = crate::network::factorial_geometric(x, 1, 6).map_err(|e| e.to_string())?;
    let rep = single_node(NetworkKind::Multiplicative, c.clone(), 1)
        .build()
        .map_err(|e| e.to_string())?;
    let d = rep.generating_series(1, 6).map_err(|e| e.to_string())?;
    let power = |k: usize| Word::new(std::iter::repeat_n(1u8, k));
    for (k, want) in [1, 1, 3, 15].into_iter().enumerate() {
        expect_eq(
            &format!("⟨d, x1^{k}⟩"),
            &d.coefficient(&power(k)),
            &int(want),
        )?;
    }
    let d4 = d.coefficient(&power(4));
    let p: Vec<Coefficient> = (0..=6).map(|k| c.coefficient(&power(k))).collect();
    let hand = &p[4] * &p[0] * &p[0] * &p[0] * &p[0]
        + int(7) * &p[3] * &p[1] * &p[0] * &p[0] * &p[0]
        + int(4) * &p[2] * &p[2] * &p[0] * &p[0] * &p[0]
        + int(11) * &p[2] * &p[1] * &p[1] * &p[0] * &p[0]
        + &p[1] * &p[1] * &p[1] * &p[1] * &p[0];
    expect_eq("⟨d, x1^4⟩ vs hand expansion", &d4, &hand)?;
    for k in 0..=6 {
        let want = multiplicative_power_oracle(&p, k);
        expect_eq(
            &format!("⟨d, x1^{k}⟩ vs recursion"),
            &d.coefficient(&power(k)),
            &want,
        )?;
    }
    if let Some((word, _)) = d.iter().find(|(w, _)| w.letters().contains(&0)) {
        return Err(format!("unexpected drift coefficient at {word}"));
    }

    // general closed forms for random c
    let mut r = rng(5);
    for trial in 0..20 {
        let c = random_polynomial(&mut r, x, &[0, 1], 3, 3);
        let rep = single_node(NetworkKind::Multiplicative, c.clone(), 1)
            .build()
            .map_err(|e| e.to_string())?;
        let k = |t: &str| c.coefficient(&w(t, x));
        let (e, c0, c1, c00, c01, c10, c11, c111) = (
            k(""),
            k("x0"),
            k("x1"),
            k("x0 x0"),
            k("x0 x1"),
            k("x1 x0"),
            k("x1 x1"),
            k("x1 x1 x1"),
        );
        let closed = [
            ("", e.clone()),
            ("x1", &c1 * &e),
            ("x0", c0.clone()),
            ("x1 x1", &c11 * &e * &e + &c1 * &c1 * &e),
            ("x0 x1", &c01 * &e),
            ("x1 x0", &c10 * &e + &c1 * &c0),
            (
                "x1 x1 x1",
                &c111 * &e * &e * &e + int(4) * &c11 * &c1 * &e * &e + &c1 * &c1 * &c1 * &e,
            ),
            ("x0 x0", c00.clone()),
        ];
        for (word, want) in closed {
            let got = rep.coefficient(1, &w(word, x)).map_err(|e| e.to_string())?;
            expect_eq(&format!("trial {trial}, c = {c}, ⟨d,{word}⟩"), &got, &want)?;
        }
    }
    Ok(format!(
        "d = 1 + x1 + 3x1² + 15x1³ + {d4}x1⁴ + …; general closed forms hold for 20 random c"
    ))
}

// ---------------------------------------------------------------------------
// 6

fn trivial_representation() -> Result<String, String> {
    let mut r = rng(6);
    for m in [1usize, 2] {
        let x = ab(m);
        let letters: Vec<u8> = (0..=m as u8).collect();
        for _ in 0..5 {
            let c = random_polynomial(&mut r, x, &letters, 4, 4);
            let rep = FormalRepresentation::trivial(&c).map_err(|e| e.to_string())?;
            for word in x.words(4) {
                let got = rep.coefficient(1, &word).map_err(|e| e.to_string())?;
                expect_eq(&format!("⟨c,{word}⟩"), &got, &c.coefficient(&word))?;
            }
        }
    }
    Ok("all words up to length 4, m ∈ {1,2}".into())
}

// ---------------------------------------------------------------------------
// 7

fn property_suite() -> Result<String, String> {
    let mut r = rng(7);
    let x = ab(1);
    let x2 = ab(2);
    let err = |e: crate::Error| e.to_string();

    for _ in 0..20 {
        let a = random_polynomial(&mut r, x2, &[0, 1, 2], 2, 5);
        let b = random_polynomial(&mut r, x2, &[0, 1, 2], 2, 5);
        let c = random_polynomial(&mut r, x2, &[0, 1, 2], 1, 5);
        if a.shuffle(&b).map_err(err)? != b.shuffle(&a).map_err(err)? {
            return Err(format!("shuffle not commutative on {a}, {b}"));
        }
        let left = a.shuffle(&b).and_then(|ab| ab.shuffle(&c)).map_err(err)?;
        let right = b.shuffle(&c).and_then(|bc| a.shuffle(&bc)).map_err(err)?;
        if left != right {
            return Err(format!("shuffle not associative on {a}, {b}, {c}"));
        }
        for i in 0..=2 {
            let lhs = a
                .shuffle(&b)
                .and_then(|p| p.left_shift_letter(i))
                .map_err(err)?;
            let rhs = a
                .left_shift_letter(i)
                .and_then(|s| s.shuffle(&b))
                .and_then(|s| s.add(&a.shuffle(&b.left_shift_letter(i)?)?))
                .map_err(err)?;
            if lhs != rhs {
                return Err(format!("x{i}^-1 is not a shuffle derivation on {a}, {b}"));
            }
        }
    }

    for _ in 0..20 {
        let p = random_lie_polynomial(&mut r, x2, 4, 5);
        if !is_primitive_ree(&p, 5) {
            return Err(format!(
                "random bracket combination {p} fails Ree's criterion"
            ));
        }
        let g = exp_truncated(&p, 5).map_err(err)?;
        if !is_group_like(g.series(), 5) {
            return Err(format!("exp({p}) is not group-like"));
        }
        let q = random_lie_polynomial(&mut r, x2, 3, 5);
        let h = exp_truncated(&q, 5).map_err(err)?;
        if !is_group_like(g.mul(&h).map_err(err)?.series(), 5) {
            return Err("product of exponentials is not group-like".into());
        }
    }

    // derivation law of the Lie derivative with constant coefficients
    for _ in 0..10 {
        let cap = 5;
        let fields: Vec<Vec<FieldTerm>> = (0..2)
            .map(|_| {
                (0..2)
                    .map(|_| {
                        let shift = random_lie_polynomial(&mut r, x, 2, cap);
                        let coeff = TensorFunctional::constant(x, 2, cap, random_rational(&mut r));
                        FieldTerm::new(shift, coeff)
                    })
                    .filter_map(Result::ok)
                    .collect()
            })
            .collect();
        let field = StateField::new(fields).map_err(err)?;
        let functional = |r: &mut ChaCha8Rng| {
            let slots = vec![
                random_polynomial(r, x, &[0, 1], 2, cap),
                random_polynomial(r, x, &[0, 1], 2, cap),
            ];
            TensorFunctional::from_terms(x, 2, vec![crate::TensorTerm::new(slots, int(1))])
        };
        let c_hat = functional(&mut r).map_err(err)?;
        let d_hat = functional(&mut r).map_err(err)?;
        let z: Vec<GroupElement> = (0..2)
            .map(|_| exp_truncated(&random_lie_polynomial(&mut r, x, 3, cap), cap))
            .collect::<crate::Result<_>>()
            .map_err(err)?;
        let at = |f: &TensorFunctional| f.evaluate_grouplike(&z).map_err(err);
        let full = usize::MAX;
        let lhs =
            at(&lie_derivative(&field, &c_hat.shuffle(&d_hat).map_err(err)?, full).map_err(err)?)?;
        let rhs = at(&lie_derivative(&field, &c_hat, full).map_err(err)?)? * at(&d_hat)?
            + at(&c_hat)? * at(&lie_derivative(&field, &d_hat, full).map_err(err)?)?;
        expect_eq("Lie derivative Leibniz rule", &lhs, &rhs)?;
        let product = at(&c_hat.shuffle(&d_hat).map_err(err)?)?;
        expect_eq("character property", &product, &(at(&c_hat)? * at(&d_hat)?))?;
    }

    // pruning never changes a coefficient
    for _ in 0..3 {
        let series: Vec<Series> = (1..=2)
            .map(|i| random_polynomial(&mut r, x2, &[0, i as u8], 3, 4))
            .collect();
        let weights = WeightMatrix::new(
            (0..2)
                .map(|_| (0..2).map(|_| random_rational(&mut r)).collect())
                .collect(),
        )
        .map_err(err)?;
        for kind in [NetworkKind::Additive, NetworkKind::Multiplicative] {
            let rep = NetworkSpec::new(kind, series.clone(), weights.clone(), 4)
                .and_then(|s| s.build())
                .map_err(err)?;
            for word in x2.words(3) {
                let pruned = rep.coefficient(1, &word).map_err(err)?;
                let loose = rep.coefficient_with(1, &word, |_| 4).map_err(err)?;
                expect_eq(&format!("{kind} pruning at {word}"), &pruned, &loose)?;
            }
        }
    }

    // composition product against the cascade representation
    for trial in 0..20 {
        let n = 3 + trial % 3;
        let c = random_polynomial(&mut r, x, &[0, 1], n.min(4), n);
        let d = random_polynomial(&mut r, x, &[0, 1], 2, n);
        let composed = compose_single(&c, &d, n).map_err(err)?;
        let engine = build_cascade(&c, &d)
            .and_then(|rep| rep.generating_series(1, n))
            .map_err(err)?;
        if composed != engine {
            return Err(format!("compose and cascade differ for c = {c}, d = {d}"));
        }
    }
    Ok("shuffle, shifts, Ree, group-likeness, Leibniz, pruning, compose ≡ cascade".into())
}

// ---------------------------------------------------------------------------
// 8

fn numeric_order() -> Result<String, String> {
    let x = ab(1);
    let c = Series::from_terms(
        x,
        4,
        [
            (w("x1", x), int(1)),
            (w("x1 x1", x), Coefficient::new(1.into(), 2.into())),
        ],
    )
    .unwrap();
    let spec = single_node(NetworkKind::Additive, c, 1);
    let input = ConstantInput::new(vec![0.1], 0.5, 2000).map_err(|e| e.to_string())?;
    let table = verify_order(&spec, &input, &[2, 3, 4]).map_err(|e| e.to_string())?;
    let err = |n: usize| {
        table
            .iter()
            .find(|(k, _)| *k == n)
            .map(|(_, e)| *e)
            .unwrap()
    };
    let shrinks = err(4) < err(2) / 4.0;
    if !shrinks {
        return Err(format!(
            "error(4) = {:.3e} is not below error(2)/4 = {:.3e}",
            err(4),
            err(2) / 4.0
        ));
    }
    let half = verify_order(
        &spec,
        &input.with_horizon(0.25).map_err(|e| e.to_string())?,
        &[3],
    )
    .map_err(|e| e.to_string())?[0]
        .1;
    let exponent = (err(3) / half).log2();
    if !(3.5..=4.5).contains(&exponent) {
        return Err(format!("halving T scaled error(3) by 2^{exponent:.3}"));
    }
    Ok(format!(
        "error(2) = {:.3e}, error(4) = {:.3e}, halving exponent for N = 3: {exponent:.3}",
        err(2),
        err(4)
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_oracle_matches_double_factorials() {
        let p: Vec<Coefficient> = (0..=6)
            .map(|k| int((1..=k as i64).product::<i64>().max(1)))
            .collect();
        let got: Vec<Coefficient> = (0..=5)
            .map(|k| multiplicative_power_oracle(&p, k))
            .collect();
        let want: Vec<Coefficient> = [1, 1, 3, 15, 105, 945].into_iter().map(int).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn random_lie_polynomials_are_lie() {
        let mut r = rng(1);
        for _ in 0..5 {
            let p = random_lie_polynomial(&mut r, ab(1), 3, 4);
            assert!(is_primitive_ree(&p, 4));
        }
    }
}
