//! Network specifications and the builders that turn them into formal
//! representations.
//!
//! Node `i` (1-based) is a single-input single-output series over
//! `{x0, xi}`; the network lives on `{x0, …, xm}`. Weights enter as
//! `u_i = v_i + Σ_j M_ij y_j` (additive) or `u_i = v_i Π_j M_ij y_j`
//! (multiplicative). The multiplicative product runs over every `j`, so a
//! single zero in row `i` switches off the product input of node `i`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::representation::{FieldTerm, FormalRepresentation, StateField};
use crate::series::{parse_coefficient, Coefficient, Series};
use crate::tensor::{TensorFunctional, TensorTerm};
use crate::word::{parse_word, Alphabet, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NetworkKind {
    Additive,
    Multiplicative,
    /// Two nodes in series: the inner node's output drives the outer node.
    Cascade,
}

impl std::fmt::Display for NetworkKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            NetworkKind::Additive => "additive",
            NetworkKind::Multiplicative => "multiplicative",
            NetworkKind::Cascade => "cascade",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeSpec {
    /// 1-based node index; for a cascade, 1 is the outer and 2 the inner node.
    pub index: usize,
    pub series: Series,
}

/// Square weighting matrix `M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightMatrix {
    rows: Vec<Vec<Coefficient>>,
}

impl WeightMatrix {
    pub fn new(rows: Vec<Vec<Coefficient>>) -> Result<Self> {
        let m = rows.len();
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != m) {
            return Err(Error::spec(
                format!("M[{i}]"),
                format!("expected {m} entries, found {}", r.len()),
            ));
        }
        Ok(WeightMatrix { rows })
    }

    pub fn zeros(m: usize) -> Self {
        WeightMatrix {
            rows: vec![vec![Coefficient::zero(); m]; m],
        }
    }

    pub fn from_integers(rows: &[&[i64]]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&v| BigRational::from_integer(v.into()))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// 0-based entry `M[row][col]`.
    pub fn entry(&self, row: usize, col: usize) -> &Coefficient {
        &self.rows[row][col]
    }

    pub fn row_product(&self, row: usize) -> Coefficient {
        self.rows[row].iter().fold(Coefficient::one(), |a, b| a * b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkSpec {
    pub m: usize,
    pub kind: NetworkKind,
    pub degree: usize,
    pub nodes: Vec<NodeSpec>,
    pub weights: WeightMatrix,
}

impl NetworkSpec {
    /// Validates node alphabets and dimensions, and truncates every node
    /// series at `degree`.
    pub fn new(
        kind: NetworkKind,
        series: Vec<Series>,
        weights: WeightMatrix,
        degree: usize,
    ) -> Result<Self> {
        let m = series.len();
        if m == 0 {
            return Err(Error::spec("nodes", "at least one node is required"));
        }
        if kind == NetworkKind::Cascade && m != 2 {
            return Err(Error::spec(
                "nodes",
                format!("cascade needs exactly 2 nodes (outer, inner), found {m}"),
            ));
        }
        if kind != NetworkKind::Cascade && weights.dim() != m {
            return Err(Error::spec(
                "M",
                format!(
                    "expected a {m}x{m} matrix, found dimension {}",
                    weights.dim()
                ),
            ));
        }
        let alphabet = node_alphabet(kind, m)?;
        let mut nodes = Vec::with_capacity(m);
        for (k, s) in series.into_iter().enumerate() {
            let index = k + 1;
            let path = format!("nodes[{k}].series");
            alphabet
                .ensure_same(&s.alphabet())
                .map_err(|e| Error::spec(&path, e.to_string()))?;
            let own = if kind == NetworkKind::Cascade {
                1
            } else {
                index as u8
            };
            if let Some(bad) = s.letters_used().into_iter().find(|&l| l != 0 && l != own) {
                return Err(Error::spec(
                    path,
                    format!("node {index} uses foreign letter x{bad}"),
                ));
            }
            nodes.push(NodeSpec {
                index,
                series: s.with_cap(degree),
            });
        }
        let weights = if kind == NetworkKind::Cascade {
            WeightMatrix::zeros(2)
        } else {
            weights
        };
        Ok(NetworkSpec {
            m,
            kind,
            degree,
            nodes,
            weights,
        })
    }

    /// The alphabet the network's generating series live on.
    pub fn alphabet(&self) -> Alphabet {
        node_alphabet(self.kind, self.m).expect("validated on construction")
    }

    pub fn series(&self, index: usize) -> &Series {
        &self.nodes[index - 1].series
    }

    /// Letter driven by node `index`'s input.
    pub fn input_letter(&self, index: usize) -> usize {
        match self.kind {
            NetworkKind::Cascade => 1,
            _ => index,
        }
    }

    /// Number of external input channels.
    pub fn input_count(&self) -> usize {
        match self.kind {
            NetworkKind::Cascade => 1,
            _ => self.m,
        }
    }

    pub fn build(&self) -> Result<FormalRepresentation> {
        match self.kind {
            NetworkKind::Additive => build_additive(self),
            NetworkKind::Multiplicative => build_multiplicative(self),
            NetworkKind::Cascade => build_cascade(self.series(1), self.series(2)),
        }
    }
}

fn node_alphabet(kind: NetworkKind, m: usize) -> Result<Alphabet> {
    match kind {
        NetworkKind::Cascade => Alphabet::new(1),
        _ => Alphabet::new(m),
    }
}

fn require_kind(spec: &NetworkSpec, kind: NetworkKind) -> Result<()> {
    if spec.kind != kind {
        return Err(Error::Invalid(format!(
            "expected a {kind} network, got {}",
            spec.kind
        )));
    }
    Ok(())
}

/// `V_0` slot `i` is `x_0 + Σ_j M_ij x_i ⟨c_j, z_j⟩`; `V_i = x_i z_i e_i`.
pub fn build_additive(spec: &NetworkSpec) -> Result<FormalRepresentation> {
    require_kind(spec, NetworkKind::Additive)?;
    let m = spec.m;
    let alphabet = spec.alphabet();
    let cap = spec.degree;
    let unit = TensorFunctional::unit(alphabet, m, cap);
    let embedded: Vec<TensorFunctional> = (1..=m)
        .map(|j| TensorFunctional::embed(spec.series(j), j, m))
        .collect::<Result<_>>()?;

    let mut drift = Vec::with_capacity(m);
    for i in 1..=m {
        let mut slot = vec![FieldTerm::letter(alphabet, 0, unit.clone())?];
        for j in 1..=m {
            let w = spec.weights.entry(i - 1, j - 1);
            if !w.is_zero() {
                slot.push(FieldTerm::letter(alphabet, i, embedded[j - 1].scale(w))?);
            }
        }
        drift.push(slot);
    }
    let mut mu = vec![StateField::new(drift)?];
    for i in 1..=m {
        let mut slots = vec![Vec::new(); m];
        slots[i - 1].push(FieldTerm::letter(alphabet, i, unit.clone())?);
        mu.push(StateField::new(slots)?);
    }
    FormalRepresentation::new(alphabet, mu, embedded)
}

/// `V_0 = (x_0 z_1, …, x_0 z_m)`; `V_i = x_i Π_j M_ij ⟨c_j, z_j⟩ z_i e_i`.
pub fn build_multiplicative(spec: &NetworkSpec) -> Result<FormalRepresentation> {
    require_kind(spec, NetworkKind::Multiplicative)?;
    let m = spec.m;
    let alphabet = spec.alphabet();
    let cap = spec.degree;
    let unit = TensorFunctional::unit(alphabet, m, cap);
    let all_outputs: Vec<Series> = (1..=m).map(|j| spec.series(j).clone()).collect();

    let drift = (0..m)
        .map(|_| Ok(vec![FieldTerm::letter(alphabet, 0, unit.clone())?]))
        .collect::<Result<Vec<_>>>()?;
    let mut mu = vec![StateField::new(drift)?];
    for i in 1..=m {
        let product = TensorFunctional::from_terms(
            alphabet,
            m,
            vec![TensorTerm::new(
                all_outputs.clone(),
                spec.weights.row_product(i - 1),
            )],
        )?;
        let mut slots = vec![Vec::new(); m];
        slots[i - 1].push(FieldTerm::letter(alphabet, i, product)?);
        mu.push(StateField::new(slots)?);
    }
    let outputs = (1..=m)
        .map(|k| TensorFunctional::embed(spec.series(k), k, m))
        .collect::<Result<_>>()?;
    FormalRepresentation::new(alphabet, mu, outputs)
}

/// Two-dimensional representation of `F_outer ∘ F_inner` on `{x0, x1}`:
/// `V_0 = (x_0 z_1, (x_0 + x_1 ⟨inner, z_1⟩) z_2)`, `V_1 = (x_1 z_1, 0)`,
/// output `1 ⊗ outer`.
pub fn build_cascade(outer: &Series, inner: &Series) -> Result<FormalRepresentation> {
    let alphabet = Alphabet::new(1)?;
    alphabet.ensure_same(&outer.alphabet())?;
    alphabet.ensure_same(&inner.alphabet())?;
    let cap = outer.cap().min(inner.cap());
    let unit = TensorFunctional::unit(alphabet, 2, cap);
    let drift = StateField::new(vec![
        vec![FieldTerm::letter(alphabet, 0, unit.clone())?],
        vec![
            FieldTerm::letter(alphabet, 0, unit.clone())?,
            FieldTerm::letter(alphabet, 1, TensorFunctional::embed(inner, 1, 2)?)?,
        ],
    ])?;
    let input = StateField::new(vec![vec![FieldTerm::letter(alphabet, 1, unit)?], vec![]])?;
    FormalRepresentation::new(
        alphabet,
        vec![drift, input],
        vec![TensorFunctional::embed(outer, 2, 2)?],
    )
}

/// `Σ_{k<=N} k! x_letter^k`.
pub fn factorial_geometric(alphabet: Alphabet, letter: usize, max_len: usize) -> Result<Series> {
    alphabet.check_letter(letter)?;
    let mut fact = BigInt::one();
    let mut terms = Vec::with_capacity(max_len + 1);
    for k in 0..=max_len {
        if k > 0 {
            fact *= k;
        }
        terms.push((
            Word::new(std::iter::repeat_n(letter as u8, k)),
            BigRational::from_integer(fact.clone()),
        ));
    }
    Series::from_terms(alphabet, max_len, terms)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkDocument {
    m: usize,
    kind: NetworkKind,
    degree: usize,
    #[serde(rename = "M", default)]
    weights: Option<Vec<Vec<String>>>,
    nodes: Vec<NodeDocument>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDocument {
    series: SeriesDocument,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SeriesDocument {
    #[serde(default)]
    builtin: Option<String>,
    #[serde(default)]
    letter: Option<usize>,
    #[serde(default)]
    terms: Option<Vec<TermDocument>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TermDocument {
    word: String,
    coeff: String,
}

fn parse_series_document(
    doc: &SeriesDocument,
    alphabet: Alphabet,
    degree: usize,
    path: &str,
) -> Result<Series> {
    let explicit = |terms: &Option<Vec<TermDocument>>| -> Result<Series> {
        let terms = terms
            .as_ref()
            .ok_or_else(|| Error::spec(path, "missing `terms`"))?;
        let mut parsed = Vec::with_capacity(terms.len());
        for (t, term) in terms.iter().enumerate() {
            let word = parse_word(&term.word, alphabet)
                .map_err(|e| Error::spec(format!("{path}.terms[{t}].word"), e.to_string()))?;
            let coeff = parse_coefficient(&term.coeff)
                .map_err(|e| Error::spec(format!("{path}.terms[{t}].coeff"), e.to_string()))?;
            parsed.push((word, coeff));
        }
        Series::from_terms(alphabet, degree, parsed)
    };
    match doc.builtin.as_deref() {
        None | Some("polynomial") => {
            if doc.letter.is_some() {
                return Err(Error::spec(
                    path,
                    "`letter` only applies to builtin generators",
                ));
            }
            explicit(&doc.terms)
        }
        Some("factorial_geometric") => {
            if doc.terms.is_some() {
                return Err(Error::spec(
                    path,
                    "`terms` is not allowed with factorial_geometric",
                ));
            }
            let letter = doc
                .letter
                .ok_or_else(|| Error::spec(path, "factorial_geometric needs `letter`"))?;
            factorial_geometric(alphabet, letter, degree)
                .map_err(|e| Error::spec(format!("{path}.letter"), e.to_string()))
        }
        Some(other) => Err(Error::spec(
            format!("{path}.builtin"),
            format!("unknown builtin `{other}`"),
        )),
    }
}

/// Parses and validates a JSON network document.
pub fn parse_network_spec(document: &str) -> Result<NetworkSpec> {
    let de = &mut serde_json::Deserializer::from_str(document);
    let doc: NetworkDocument = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::spec(
            if path == "." {
                "document".to_string()
            } else {
                path
            },
            e.inner().to_string(),
        )
    })?;
    if doc.nodes.len() != doc.m {
        return Err(Error::spec(
            "nodes",
            format!("m = {} but {} nodes were given", doc.m, doc.nodes.len()),
        ));
    }
    let alphabet = node_alphabet(doc.kind, doc.m).map_err(|e| Error::spec("m", e.to_string()))?;
    let series = doc
        .nodes
        .iter()
        .enumerate()
        .map(|(k, node)| {
            parse_series_document(
                &node.series,
                alphabet,
                doc.degree,
                &format!("nodes[{k}].series"),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let weights = match (doc.kind, &doc.weights) {
        (NetworkKind::Cascade, _) => WeightMatrix::zeros(2),
        (_, None) => return Err(Error::spec("M", "missing weighting matrix")),
        (_, Some(rows)) => {
            if rows.len() != doc.m {
                return Err(Error::spec(
                    "M",
                    format!("expected {} rows, found {}", doc.m, rows.len()),
                ));
            }
            let mut parsed = Vec::with_capacity(rows.len());
            for (i, row) in rows.iter().enumerate() {
                if row.len() != doc.m {
                    return Err(Error::spec(
                        format!("M[{i}]"),
                        format!("expected {} entries, found {}", doc.m, row.len()),
                    ));
                }
                parsed.push(
                    row.iter()
                        .enumerate()
                        .map(|(j, v)| {
                            parse_coefficient(v)
                                .map_err(|e| Error::spec(format!("M[{i}][{j}]"), e.to_string()))
                        })
                        .collect::<Result<Vec<_>>>()?,
                );
            }
            WeightMatrix::new(parsed)?
        }
    };
    NetworkSpec::new(doc.kind, series, weights, doc.degree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::int;

    const SINGLE: &str = r#"{
        "m": 1, "kind": "additive", "degree": 3, "M": [["1"]],
        "nodes": [ { "series": { "terms": [ {"word": "x1", "coeff": "1"}, {"word": "", "coeff": "1/2"} ] } } ]
    }"#;

    #[test]
    fn minimal_document() {
        let spec = parse_network_spec(SINGLE).unwrap();
        assert_eq!(spec.m, 1);
        assert_eq!(spec.kind, NetworkKind::Additive);
        assert_eq!(
            spec.series(1).constant_term(),
            Coefficient::new(1.into(), 2.into())
        );
    }

    #[test]
    fn foreign_letters_are_rejected() {
        let doc = r#"{ "m": 2, "kind": "additive", "degree": 2, "M": [["0","1"],["1","0"]],
            "nodes": [ { "series": { "terms": [ {"word": "x2", "coeff": "1"} ] } },
                       { "series": { "terms": [ {"word": "x2", "coeff": "1"} ] } } ] }"#;
        let err = parse_network_spec(doc).unwrap_err().to_string();
        assert!(err.contains("node 1 uses foreign letter"), "{err}");
        assert!(err.starts_with("nodes[0].series"), "{err}");
    }

    #[test]
    fn factorial_builtin() {
        let doc = r#"{ "m": 1, "kind": "multiplicative", "degree": 3, "M": [["1"]],
            "nodes": [ { "series": { "builtin": "factorial_geometric", "letter": 1 } } ] }"#;
        let spec = parse_network_spec(doc).unwrap();
        let a = Alphabet::new(1).unwrap();
        let expected = Series::from_terms(
            a,
            3,
            [
                (Word::empty(), int(1)),
                (Word::new([1]), int(1)),
                (Word::new([1, 1]), int(2)),
                (Word::new([1, 1, 1]), int(6)),
            ],
        )
        .unwrap();
        assert_eq!(spec.series(1), &expected);
    }

    #[test]
    fn schema_errors_carry_paths() {
        let doc = r#"{ "m": 1, "kind": "additive", "degree": 2, "M": [["1"]],
            "nodes": [ { "series": { "terms": [ {"word": "x1", "coeff": 3} ] } } ] }"#;
        let err = parse_network_spec(doc).unwrap_err().to_string();
        assert!(err.contains("nodes[0].series.terms[0].coeff"), "{err}");

        let doc = r#"{ "m": 1, "kind": "sideways", "degree": 2, "M": [["1"]], "nodes": [] }"#;
        assert!(parse_network_spec(doc)
            .unwrap_err()
            .to_string()
            .starts_with("kind"));

        let doc = r#"{ "m": 2, "kind": "additive", "degree": 2, "M": [["1","0"]],
            "nodes": [ { "series": { "terms": [] } }, { "series": { "terms": [] } } ] }"#;
        assert!(parse_network_spec(doc)
            .unwrap_err()
            .to_string()
            .starts_with("M"));

        let doc = r#"{ "m": 1, "kind": "additive", "degree": 2, "M": [["1/0"]],
            "nodes": [ { "series": { "terms": [] } } ] }"#;
        assert!(parse_network_spec(doc)
            .unwrap_err()
            .to_string()
            .starts_with("M[0][0]"));

        let doc = r#"{ "m": 1, "kind": "additive", "degree": 2,
            "nodes": [ { "series": { "terms": [] } } ] }"#;
        assert!(parse_network_spec(doc).is_err());

        let doc = r#"{ "m": 1, "kind": "additive", "degree": 2, "M": [["1"]],
            "nodes": [ { "series": { "terms": [ {"word": "x7", "coeff": "1"} ] } } ] }"#;
        let err = parse_network_spec(doc).unwrap_err().to_string();
        assert!(
            err.contains("nodes[0].series.terms[0].word") && err.contains("x7"),
            "{err}"
        );
    }

    #[test]
    fn cascade_needs_two_nodes() {
        let doc = r#"{ "m": 1, "kind": "cascade", "degree": 2,
            "nodes": [ { "series": { "terms": [] } } ] }"#;
        assert!(parse_network_spec(doc).is_err());
        let doc = r#"{ "m": 2, "kind": "cascade", "degree": 4,
            "nodes": [ { "series": { "terms": [ {"word": "x1 x1", "coeff": "1"} ] } },
                       { "series": { "terms": [ {"word": "x1", "coeff": "1"} ] } } ] }"#;
        let spec = parse_network_spec(doc).unwrap();
        assert_eq!(spec.alphabet().m(), 1);
        assert_eq!(spec.input_count(), 1);
    }

    #[test]
    fn multiplicative_zero_row_kills_input_letter() {
        let a = Alphabet::new(2).unwrap();
        let c1 =
            Series::from_terms(a, 3, [(Word::empty(), int(1)), (Word::new([1]), int(2))]).unwrap();
        let c2 =
            Series::from_terms(a, 3, [(Word::empty(), int(3)), (Word::new([2]), int(1))]).unwrap();
        let m = WeightMatrix::from_integers(&[&[1, 0], &[1, 1]]).unwrap();
        let spec = NetworkSpec::new(NetworkKind::Multiplicative, vec![c1, c2], m, 3).unwrap();
        let d1 = spec.build().unwrap().generating_series(1, 3).unwrap();
        assert!(d1.iter().all(|(w, _)| !w.letters().contains(&1)), "{d1}");
    }
}
