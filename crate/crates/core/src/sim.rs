//! Floating-point harness: Chen–Fliess evaluation for constant inputs and
//! fixed-step integration of a network's truncated formal state equations.
//!
//! Node `j` carries a truncated group-valued state `z_j` with
//! `ż_j = (x_0 + x_{ℓ(j)} u_j) z_j`, `z_j(0) = 1`, where `ℓ(j)` is the
//! node's input letter and `y_j = ⟨c_j, z_j⟩`. The coefficient of a word
//! `x_i w` evolves as `u_i ⟨z_j, w⟩`, so the truncated system is closed.

use std::collections::HashMap;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::network::{NetworkKind, NetworkSpec};
use crate::series::{Coefficient, Series};
use crate::word::Word;

/// Constant external inputs `v_1..v_m` held on `[0, horizon]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantInput {
    pub values: Vec<f64>,
    pub horizon: f64,
    pub steps: usize,
}

pub const DEFAULT_STEPS: usize = 1000;

impl ConstantInput {
    pub fn new(values: Vec<f64>, horizon: f64, steps: usize) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::Invalid(format!(
                "horizon must be positive, got {horizon}"
            )));
        }
        if steps == 0 {
            return Err(Error::Invalid("step count must be at least 1".into()));
        }
        Ok(ConstantInput {
            values,
            horizon,
            steps,
        })
    }

    /// Input on letter `i`, with the drift `u_0 = 1`.
    pub fn letter_value(&self, i: usize) -> f64 {
        if i == 0 {
            1.0
        } else {
            self.values.get(i - 1).copied().unwrap_or(0.0)
        }
    }

    pub fn with_horizon(&self, horizon: f64) -> Result<Self> {
        Self::new(self.values.clone(), horizon, self.steps)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub times: Vec<f64>,
    /// One trajectory per network output, sampled at `times`.
    pub outputs: Vec<Vec<f64>>,
    /// Final truncated state of every node, in canonical word order.
    pub states: Vec<Vec<(Word, f64)>>,
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// `E_η[u](t)` for constant inputs: `u_{i1}⋯u_{ik} t^k / k!`.
pub fn iterated_integral_const(word: &Word, input: &ConstantInput, t: f64) -> f64 {
    let prod: f64 = word
        .letters()
        .iter()
        .map(|&l| input.letter_value(l as usize))
        .product();
    prod * t.powi(word.len() as i32) / factorial(word.len())
}

pub(crate) fn to_f64(c: &Coefficient) -> f64 {
    c.to_f64().unwrap_or(f64::NAN)
}

/// `Σ_{|η|<=N} ⟨c,η⟩ E_η[u](t)`.
pub fn fliess_eval(c: &Series, input: &ConstantInput, t: f64, max_len: usize) -> f64 {
    c.iter()
        .filter(|(w, _)| w.len() <= max_len)
        .map(|(w, a)| to_f64(a) * iterated_integral_const(w, input, t))
        .sum()
}

/// Series coefficients collapsed to a polynomial in `t`:
/// entry `k` is `Σ_{|η|=k} ⟨c,η⟩ u_η / k!`.
fn time_polynomial(c: &Series, input: &ConstantInput, max_len: usize) -> Vec<f64> {
    let mut poly = vec![0.0; max_len + 1];
    for (w, a) in c.iter().filter(|(w, _)| w.len() <= max_len) {
        poly[w.len()] += iterated_integral_const(w, input, 1.0) * to_f64(a);
    }
    poly
}

fn eval_poly(poly: &[f64], t: f64) -> f64 {
    poly.iter().rev().fold(0.0, |acc, &a| acc * t + a)
}

struct Layout {
    words: Vec<Word>,
    /// `(first letter, index of tail)` for every nonempty word.
    links: Vec<Option<(usize, usize)>>,
}

impl Layout {
    fn new(spec: &NetworkSpec, max_len: usize) -> Self {
        let words = spec.alphabet().words(max_len);
        let index: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let links = words
            .iter()
            .map(|w| w.first().map(|l| (l as usize, index[&w.tail()])))
            .collect();
        Layout { words, links }
    }

    fn dense(&self, c: &Series) -> Vec<f64> {
        self.words
            .iter()
            .map(|w| to_f64(&c.coefficient(w)))
            .collect()
    }
}

struct Dynamics<'a> {
    spec: &'a NetworkSpec,
    layout: &'a Layout,
    coeffs: Vec<Vec<f64>>,
    input: &'a ConstantInput,
}

impl Dynamics<'_> {
    fn outputs_of(&self, state: &[Vec<f64>]) -> Vec<f64> {
        self.coeffs
            .iter()
            .zip(state)
            .map(|(c, z)| c.iter().zip(z).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Per-node input `u_j`.
    fn inputs(&self, y: &[f64]) -> Vec<f64> {
        let m = self.spec.m;
        let w = |i: usize, j: usize| to_f64(self.spec.weights.entry(i, j));
        match self.spec.kind {
            NetworkKind::Additive => (0..m)
                .map(|i| {
                    self.input.letter_value(i + 1) + (0..m).map(|j| w(i, j) * y[j]).sum::<f64>()
                })
                .collect(),
            NetworkKind::Multiplicative => (0..m)
                .map(|i| {
                    self.input.letter_value(i + 1) * (0..m).map(|j| w(i, j) * y[j]).product::<f64>()
                })
                .collect(),
            // node 1 is the outer system driven by the inner output
            NetworkKind::Cascade => vec![y[1], self.input.letter_value(1)],
        }
    }

    fn derivative(&self, state: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let y = self.outputs_of(state);
        let u = self.inputs(&y);
        state
            .iter()
            .enumerate()
            .map(|(j, z)| {
                let own = self.spec.input_letter(j + 1);
                self.layout
                    .links
                    .iter()
                    .map(|link| match *link {
                        Some((0, tail)) => z[tail],
                        Some((l, tail)) if l == own => u[j] * z[tail],
                        _ => 0.0,
                    })
                    .collect()
            })
            .collect()
    }

    fn network_outputs(&self, state: &[Vec<f64>]) -> Vec<f64> {
        let y = self.outputs_of(state);
        match self.spec.kind {
            NetworkKind::Cascade => vec![y[0]],
            _ => y,
        }
    }
}

fn axpy(base: &[Vec<f64>], k: &[Vec<f64>], h: f64) -> Vec<Vec<f64>> {
    base.iter()
        .zip(k)
        .map(|(b, d)| b.iter().zip(d).map(|(x, y)| x + h * y).collect())
        .collect()
}

/// Integrates the network's truncated state equations with the classical
/// fourth-order Runge–Kutta method.
pub fn simulate_network(
    spec: &NetworkSpec,
    input: &ConstantInput,
    max_len: usize,
) -> Result<SimResult> {
    if max_len == 0 {
        return Err(Error::Invalid(
            "truncation degree must be at least 1".into(),
        ));
    }
    if input.steps == 0 {
        return Err(Error::Invalid("step count must be at least 1".into()));
    }
    if input.values.len() != spec.input_count() {
        return Err(Error::Invalid(format!(
            "expected {} input values, got {}",
            spec.input_count(),
            input.values.len()
        )));
    }
    let layout = Layout::new(spec, max_len);
    let dynamics = Dynamics {
        spec,
        layout: &layout,
        coeffs: spec.nodes.iter().map(|n| layout.dense(&n.series)).collect(),
        input,
    };
    let mut state: Vec<Vec<f64>> = (0..spec.m)
        .map(|_| {
            let mut z = vec![0.0; layout.words.len()];
            z[0] = 1.0;
            z
        })
        .collect();

    let h = input.horizon / input.steps as f64;
    let mut times = Vec::with_capacity(input.steps + 1);
    let first = dynamics.network_outputs(&state);
    let mut outputs: Vec<Vec<f64>> = first.iter().map(|&y| vec![y]).collect();
    times.push(0.0);
    for step in 1..=input.steps {
        let k1 = dynamics.derivative(&state);
        let k2 = dynamics.derivative(&axpy(&state, &k1, h / 2.0));
        let k3 = dynamics.derivative(&axpy(&state, &k2, h / 2.0));
        let k4 = dynamics.derivative(&axpy(&state, &k3, h));
        for (j, z) in state.iter_mut().enumerate() {
            for (i, zi) in z.iter_mut().enumerate() {
                *zi += h / 6.0 * (k1[j][i] + 2.0 * k2[j][i] + 2.0 * k3[j][i] + k4[j][i]);
            }
        }
        let y = dynamics.network_outputs(&state);
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invalid(format!(
                "simulation diverged at t = {}",
                step as f64 * h
            )));
        }
        for (traj, v) in outputs.iter_mut().zip(y) {
            traj.push(v);
        }
        times.push(step as f64 * h);
    }
    let states = state
        .into_iter()
        .map(|z| layout.words.iter().cloned().zip(z).collect())
        .collect();
    Ok(SimResult {
        times,
        outputs,
        states,
    })
}

/// Output trajectories predicted by the generating series truncated at `max_len`.
pub fn predict(
    series: &[Series],
    input: &ConstantInput,
    times: &[f64],
    max_len: usize,
) -> Vec<Vec<f64>> {
    series
        .iter()
        .map(|d| {
            let poly = time_polynomial(d, input, max_len);
            times.iter().map(|&t| eval_poly(&poly, t)).collect()
        })
        .collect()
}

/// Largest deviation between two sets of trajectories.
pub fn max_deviation(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| x.iter().zip(y).map(|(p, q)| (p - q).abs()))
        .fold(0.0, f64::max)
}

/// For each `N`, the largest deviation on `[0, T]` between the simulated
/// network and the Chen–Fliess series of its generating series truncated at
/// `N`. The simulation runs at the largest requested degree, which is exact
/// for polynomial node series of at most that degree.
pub fn verify_order(
    spec: &NetworkSpec,
    input: &ConstantInput,
    degrees: &[usize],
) -> Result<Vec<(usize, f64)>> {
    let top = degrees
        .iter()
        .copied()
        .max()
        .unwrap_or(0)
        .max(spec.degree)
        .max(1);
    let spec = NetworkSpec::new(
        spec.kind,
        spec.nodes.iter().map(|n| n.series.clone()).collect(),
        spec.weights.clone(),
        top,
    )?;
    let sim = simulate_network(&spec, input, top)?;
    let rep = spec.build()?;
    let mut table = Vec::with_capacity(degrees.len());
    for &n in degrees {
        let series = (1..=rep.output_count())
            .map(|k| rep.generating_series(k, n))
            .collect::<Result<Vec<_>>>()?;
        let predicted = predict(&series, input, &sim.times, n);
        table.push((n, max_deviation(&predicted, &sim.outputs)));
    }
    Ok(table)
}
