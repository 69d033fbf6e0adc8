//! JSON spec files for E-structures and A∞ algebras.
//!
//! Scalars are exact strings (`"p/q"`, `"p/q+r/s*i"`). Serialization is deterministic: keys in a
//! fixed order, table entries sorted, two-space indentation and a trailing newline, so
//! `to_string(parse(f)) == f` for every file this module writes.

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::connection::{EStructure, Extension, GradingData, Polarization};
use crate::error::{Error, Result};
use crate::hochschild::{AInftyAlgebra, EulerGrading, Mono, Pairing, RingElem, TableCochain, Vector};
use crate::matrix::Matrix;
use crate::scalar::{Field, Scalar};
use crate::series::MatrixSeries;

/// Only connections `d/du + u⁻²A(u)` are handled.
pub const POLE_ORDER: u32 = 2;

fn two() -> u32 {
    POLE_ORDER
}

fn one() -> i8 {
    1
}

fn even() -> String {
    "even".into()
}

fn is_one(x: &i8) -> bool {
    *x == 1
}

fn is_zero_u32(x: &u32) -> bool {
    *x == 0
}

fn is_zero_i32(x: &i32) -> bool {
    *x == 0
}

fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        let message = e.to_string();
        let message = match message.rfind(" at line ") {
            Some(k) => message[..k].to_string(),
            None => message,
        };
        Error::parse(format!("line {}, column {}", e.line(), e.column()), message)
    })
}

fn render<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("spec values serialize");
    s.push('\n');
    s
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPolarization {
    matrix: Matrix,
    #[serde(default)]
    extension: Extension,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConnection {
    rank: usize,
    order: usize,
    field: Field,
    #[serde(default = "two")]
    pole_order: u32,
    /// `A_0, A_1, …, A_N`: the coefficients of `u⁻², u⁻¹, u⁰, …`.
    coefficients: Vec<Matrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pairing: Option<RawPolarization>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    grading: Option<Matrix>,
}

/// Parse a connection spec.
pub fn parse_connection(text: &str) -> Result<EStructure> {
    let raw: RawConnection = parse_json(text)?;
    if raw.pole_order != POLE_ORDER {
        return Err(Error::PoleOrder(format!(
            "pole order {} requested, only {POLE_ORDER} is supported",
            raw.pole_order
        )));
    }
    if raw.rank == 0 {
        return Err(Error::parse("rank", "rank must be positive"));
    }
    if raw.coefficients.len() != raw.order + 1 {
        return Err(Error::parse(
            "coefficients",
            format!(
                "order {} needs {} coefficient matrices, found {}",
                raw.order,
                raw.order + 1,
                raw.coefficients.len()
            ),
        ));
    }
    let square = |m: &Matrix| m.rows() == raw.rank && m.cols() == raw.rank;
    if let Some(k) = raw.coefficients.iter().position(|m| !square(m)) {
        return Err(Error::parse(
            format!("coefficients[{k}]"),
            format!("expected a {0}×{0} matrix", raw.rank),
        ));
    }
    let mut e = EStructure::new(raw.field, MatrixSeries::new(raw.coefficients)?)?;
    if let Some(p) = raw.pairing {
        if !square(&p.matrix) {
            return Err(Error::parse("pairing.matrix", "pairing size differs from rank"));
        }
        e = e.with_polarization(Polarization::new(p.matrix, p.extension))?;
    }
    if let Some(mu) = raw.grading {
        if !square(&mu) {
            return Err(Error::parse("grading", "grading size differs from rank"));
        }
        e = e.with_grading(GradingData { mu })?;
    }
    Ok(e)
}

fn raw_connection(e: &EStructure) -> RawConnection {
    RawConnection {
        rank: e.rank(),
        order: e.order(),
        field: e.field(),
        pole_order: POLE_ORDER,
        coefficients: e.series().coeffs().to_vec(),
        pairing: e.polarization().map(|p| RawPolarization {
            matrix: p.matrix.clone(),
            extension: p.extension,
        }),
        grading: e.grading().map(|g| g.mu.clone()),
    }
}

/// Canonical text of a connection spec.
pub fn connection_to_string(e: &EStructure) -> String {
    render(&raw_connection(e))
}

/// Spec-file form of an E-structure, for embedding in reports.
pub struct ConnectionSpec<'a>(pub &'a EStructure);

impl Serialize for ConnectionSpec<'_> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        raw_connection(self.0).serialize(serializer)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCoeff {
    coeff: Scalar,
    #[serde(default, skip_serializing_if = "is_zero_u32")]
    t: u32,
    #[serde(default, skip_serializing_if = "is_zero_i32")]
    e: i32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    basis: String,
    coeff: Scalar,
    #[serde(default, skip_serializing_if = "is_zero_u32")]
    t: u32,
    #[serde(default, skip_serializing_if = "is_zero_i32")]
    e: i32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    inputs: Vec<String>,
    value: Vec<RawTerm>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPairingEntry {
    left: String,
    right: String,
    value: Vec<RawCoeff>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPairing {
    dimension: i64,
    entries: Vec<RawPairingEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEuler {
    gr: Vec<RawEntry>,
    t_weight: Scalar,
    e_weight: Scalar,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlgebra {
    name: String,
    basis: Vec<String>,
    degrees: Vec<u8>,
    unit: String,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    unit_sign: i8,
    t_order: u32,
    #[serde(default = "even")]
    t_parity: String,
    #[serde(default)]
    laurent_e: bool,
    /// Entries `m_k(inputs) = value`; curvature is the entry with no inputs.
    operations: Vec<RawEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pairing: Option<RawPairing>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    euler: Option<RawEuler>,
}

struct Labels<'a>(&'a [String]);

impl Labels<'_> {
    fn index(&self, label: &str, location: impl FnOnce() -> String) -> Result<usize> {
        self.0
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::parse(location(), format!("unknown basis label `{label}`")))
    }

    fn table(&self, entries: &[RawEntry], parity: u8, at: &str) -> Result<TableCochain> {
        let mut table = TableCochain::new(parity);
        for (k, entry) in entries.iter().enumerate() {
            let inputs = entry
                .inputs
                .iter()
                .enumerate()
                .map(|(j, l)| self.index(l, || format!("{at}[{k}].inputs[{j}]")))
                .collect::<Result<Vec<_>>>()?;
            if table.get(&inputs).is_some() {
                return Err(Error::parse(format!("{at}[{k}]"), "duplicate entry"));
            }
            let mut value = Vector::new();
            for (j, term) in entry.value.iter().enumerate() {
                let b = self.index(&term.basis, || format!("{at}[{k}].value[{j}].basis"))?;
                value.add_term((b, Mono { t: term.t, e: term.e }), term.coeff.clone());
            }
            table.set(inputs, value);
        }
        Ok(table)
    }

    fn raw_table(&self, table: &TableCochain) -> Vec<RawEntry> {
        table
            .entries()
            .map(|(inputs, value)| RawEntry {
                inputs: inputs.iter().map(|&a| self.0[a].clone()).collect(),
                value: value
                    .iter()
                    .map(|((b, m), c)| RawTerm {
                        basis: self.0[*b].clone(),
                        coeff: c.clone(),
                        t: m.t,
                        e: m.e,
                    })
                    .collect(),
            })
            .collect()
    }
}

fn raw_coeffs(v: &RingElem) -> Vec<RawCoeff> {
    v.iter()
        .map(|(m, c)| RawCoeff {
            coeff: c.clone(),
            t: m.t,
            e: m.e,
        })
        .collect()
}

/// Parse an A∞ algebra spec. Only an even `t` is supported.
pub fn parse_algebra(text: &str) -> Result<AInftyAlgebra> {
    let raw: RawAlgebra = parse_json(text)?;
    match raw.t_parity.as_str() {
        "even" => {}
        "odd" => {
            return Err(Error::OddParityViolation(
                "the deformation parameter t must be even".into(),
            ))
        }
        other => {
            return Err(Error::parse(
                "t_parity",
                format!("expected `even` or `odd`, got `{other}`"),
            ))
        }
    }
    let labels = Labels(&raw.basis);
    let unit = labels.index(&raw.unit, || "unit".into())?;
    let ops = labels.table(&raw.operations, 1, "operations")?;
    let pairing = raw
        .pairing
        .map(|p| -> Result<Pairing> {
            let mut out = Pairing::new(p.dimension);
            for (k, entry) in p.entries.iter().enumerate() {
                let a = labels.index(&entry.left, || format!("pairing.entries[{k}].left"))?;
                let b = labels.index(&entry.right, || format!("pairing.entries[{k}].right"))?;
                let value: RingElem = entry
                    .value
                    .iter()
                    .map(|c| (Mono { t: c.t, e: c.e }, c.coeff.clone()))
                    .collect();
                out.set(a, b, value);
            }
            Ok(out)
        })
        .transpose()?;
    let euler = raw
        .euler
        .map(|eg| -> Result<EulerGrading> {
            Ok(EulerGrading {
                gr: labels.table(&eg.gr, 0, "euler.gr")?,
                t_weight: eg.t_weight,
                e_weight: eg.e_weight,
            })
        })
        .transpose()?;
    AInftyAlgebra::new(raw.name, raw.basis.clone(), raw.degrees, unit, raw.t_order)?
        .with_unit_sign(raw.unit_sign)?
        .with_laurent_e(raw.laurent_e)
        .with_ops(ops)?
        .with_pairing(pairing)?
        .with_euler(euler)
}

/// Canonical text of an A∞ algebra spec.
pub fn algebra_to_string(alg: &AInftyAlgebra) -> String {
    let labels = Labels(alg.labels());
    render(&RawAlgebra {
        name: alg.name().to_string(),
        basis: alg.labels().to_vec(),
        degrees: alg.degrees().to_vec(),
        unit: alg.label(alg.unit_index()).to_string(),
        unit_sign: alg.unit_sign(),
        t_order: alg.t_order(),
        t_parity: even(),
        laurent_e: alg.has_laurent_e(),
        operations: labels.raw_table(alg.ops()),
        pairing: alg.pairing().map(|p| RawPairing {
            dimension: p.dimension,
            entries: p
                .values
                .iter()
                .map(|((a, b), v)| RawPairingEntry {
                    left: alg.label(*a).to_string(),
                    right: alg.label(*b).to_string(),
                    value: raw_coeffs(v),
                })
                .collect(),
        }),
        euler: alg.euler().map(|eg| RawEuler {
            gr: labels.raw_table(&eg.gr),
            t_weight: eg.t_weight.clone(),
            e_weight: eg.e_weight.clone(),
        }),
    })
}

/// Any serializable report in the canonical layout.
pub fn report_to_string<T: Serialize>(value: &T) -> String {
    render(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hochschild::samples;
    use crate::quantum::{build_quantum, preset};

    #[test]
    fn connection_round_trip() {
        let q = build_quantum(&preset("s2").unwrap(), 4).unwrap();
        let text = connection_to_string(&q.estructure);
        let back = parse_connection(&text).unwrap();
        assert_eq!(back, q.estructure);
        assert_eq!(connection_to_string(&back), text);
    }

    #[test]
    fn algebra_round_trip() {
        for alg in samples::zoo() {
            let text = algebra_to_string(&alg);
            let back = parse_algebra(&text).unwrap();
            assert_eq!(back, alg, "{}", alg.name());
            assert_eq!(algebra_to_string(&back), text);
        }
    }

    #[test]
    fn zero_denominator_reports_location() {
        let text = "{\"rank\": 1, \"order\": 0, \"field\": \"Q\",\n \"coefficients\": [[[\"1/0\"]]]}";
        match parse_connection(text) {
            Err(Error::Parse { location, message }) => {
                assert!(location.starts_with("line 2"), "{location}");
                assert!(message.contains("zero denominator"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn wrong_pole_order() {
        let text = r#"{"rank": 1, "order": 0, "field": "Q", "pole_order": 3, "coefficients": [[["1"]]]}"#;
        assert_eq!(parse_connection(text).unwrap_err().kind(), "PoleOrder");
    }

    #[test]
    fn odd_t_rejected() {
        let text = r#"{"name": "k", "basis": ["1"], "degrees": [0], "unit": "1", "t_order": 1,
            "t_parity": "odd", "operations": []}"#;
        assert_eq!(parse_algebra(text).unwrap_err().kind(), "OddParityViolation");
    }
}
