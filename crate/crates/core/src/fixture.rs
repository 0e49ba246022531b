//! JSON fixture format and the bundled fixture catalog.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::complex::{build_complex, InvariantComplex, LieAlgebraSpec};
use crate::error::{Error, Result};
use crate::exterior::{Endomorphism, Form, MultiIndex};
use crate::hodge::MetricStructure;
use crate::linalg::{format_scalar, parse_scalar, Matrix, Scalar};
use crate::sasakian::{ContactStructure, SasakianModel};

/// Rational literal: `"p/q"`, `"p"`, or a bare JSON integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Rational {
    Int(i64),
    Text(String),
}

impl Rational {
    pub fn value(&self) -> std::result::Result<Scalar, String> {
        match self {
            Rational::Int(v) => Ok(Scalar::from_integer((*v).into())),
            Rational::Text(s) => parse_scalar(s),
        }
    }
}

impl From<&Scalar> for Rational {
    fn from(v: &Scalar) -> Self {
        Rational::Text(format_scalar(v))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MetricSpec {
    Named(String),
    Gram(Vec<Vec<Rational>>),
}

impl Default for MetricSpec {
    fn default() -> Self {
        MetricSpec::Named("identity".into())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureDocument {
    pub name: String,
    pub dim: usize,
    /// Generator → terms `[coeff, i, j]` of `de^k`.
    #[serde(default)]
    pub diff1: BTreeMap<String, Vec<(Rational, usize, usize)>>,
    /// Terms `[coeff, i]` of `η`.
    #[serde(default)]
    pub eta: Vec<(Rational, usize)>,
    #[serde(default)]
    pub metric: MetricSpec,
    /// Rows of `φ`; column `j` is the image of `E_j`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<Vec<Rational>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<i64>,
}

fn field_error(path: &str, message: impl Into<String>) -> Error {
    Error::Fixture {
        path: path.to_string(),
        message: message.into(),
    }
}

fn scalar_at(r: &Rational, path: &str) -> Result<Scalar> {
    r.value().map_err(|m| field_error(path, m))
}

fn square_matrix(rows: &[Vec<Rational>], dim: usize, field: &str) -> Result<Matrix> {
    if rows.len() != dim {
        return Err(field_error(field, format!("expected {dim} rows, found {}", rows.len())));
    }
    let mut dense = Vec::with_capacity(dim);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != dim {
            return Err(field_error(
                &format!("{field}[{i}]"),
                format!("expected {dim} entries, found {}", row.len()),
            ));
        }
        dense.push(
            row.iter()
                .enumerate()
                .map(|(j, r)| scalar_at(r, &format!("{field}[{i}][{j}]")))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Ok(Matrix::from_dense(&dense))
}

/// Parses and validates fixture text. Syntax errors carry line and column.
pub fn parse_fixture(text: &str) -> Result<FixtureDocument> {
    let doc: FixtureDocument = serde_json::from_str(text).map_err(|e| {
        field_error(&format!("line {} column {}", e.line(), e.column()), e.to_string())
    })?;
    doc.validate()?;
    Ok(doc)
}

pub fn load_fixture(path: &Path) -> Result<FixtureDocument> {
    let text = std::fs::read_to_string(path)?;
    parse_fixture(&text).map_err(|e| match e {
        Error::Fixture { path: field, message } => Error::Fixture {
            path: format!("{}: {field}", path.display()),
            message,
        },
        other => other,
    })
}

impl FixtureDocument {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 || self.dim > crate::exterior::MAX_DIM {
            return Err(field_error("dim", format!("unsupported dimension {}", self.dim)));
        }
        for (key, terms) in &self.diff1 {
            let path = format!("diff1.{key}");
            let k: usize = key
                .parse()
                .map_err(|_| field_error(&path, "generator key must be an integer"))?;
            if k == 0 || k > self.dim {
                return Err(field_error(&path, format!("generator {k} outside 1..={}", self.dim)));
            }
            for (t, (c, i, j)) in terms.iter().enumerate() {
                let tp = format!("{path}[{t}]");
                scalar_at(c, &tp)?;
                if !(1 <= *i && i < j && *j <= self.dim) {
                    return Err(field_error(
                        &tp,
                        format!("index pair ({i}, {j}) must satisfy 1 <= i < j <= {}", self.dim),
                    ));
                }
            }
        }
        for (t, (c, i)) in self.eta.iter().enumerate() {
            let tp = format!("eta[{t}]");
            scalar_at(c, &tp)?;
            if *i == 0 || *i > self.dim {
                return Err(field_error(&tp, format!("index {i} outside 1..={}", self.dim)));
            }
        }
        match &self.metric {
            MetricSpec::Named(name) if name != "identity" => {
                return Err(field_error("metric", format!("unknown metric {name:?}")));
            }
            MetricSpec::Named(_) => {}
            MetricSpec::Gram(rows) => {
                square_matrix(rows, self.dim, "metric")?;
            }
        }
        if let Some(rows) = &self.phi {
            square_matrix(rows, self.dim, "phi")?;
        }
        if let Some(o) = self.orientation {
            if o != 1 && o != -1 {
                return Err(field_error("orientation", "must be 1 or -1"));
            }
        }
        Ok(())
    }

    pub fn lie_algebra(&self) -> Result<LieAlgebraSpec> {
        let mut entries = Vec::new();
        for (key, terms) in &self.diff1 {
            let k: usize = key.parse().map_err(|_| field_error("diff1", "bad key"))?;
            let terms = terms
                .iter()
                .map(|(c, i, j)| Ok((scalar_at(c, "diff1")?, *i, *j)))
                .collect::<Result<Vec<_>>>()?;
            entries.push((k, terms));
        }
        LieAlgebraSpec::new(&self.name, self.dim, &entries)
    }

    pub fn eta_form(&self) -> Result<Form> {
        let terms = self
            .eta
            .iter()
            .map(|(c, i)| Ok((MultiIndex::from_indices(&[*i])?, scalar_at(c, "eta")?)))
            .collect::<Result<Vec<_>>>()?;
        let mut out = Form::zero(self.dim, 1);
        for (m, c) in terms {
            out = &out + &Form::from_terms(self.dim, 1, [(m, c)]);
        }
        Ok(out)
    }

    pub fn gram1(&self) -> Result<Matrix> {
        match &self.metric {
            MetricSpec::Named(_) => Ok(Matrix::identity(self.dim)),
            MetricSpec::Gram(rows) => square_matrix(rows, self.dim, "metric"),
        }
    }

    pub fn phi_endomorphism(&self) -> Result<Option<Endomorphism>> {
        self.phi
            .as_ref()
            .map(|rows| Endomorphism::new(square_matrix(rows, self.dim, "phi")?))
            .transpose()
    }

    /// Builds the complex (validating Jacobi) and the metric.
    pub fn load(&self) -> Result<Fixture> {
        let complex = Arc::new(build_complex(self.lie_algebra()?)?);
        let metric = MetricStructure::new(complex.frame(), self.gram1()?, self.orientation.unwrap_or(1))?;
        Ok(Fixture {
            name: self.name.clone(),
            complex,
            eta: self.eta_form()?,
            metric,
            phi: self.phi_endomorphism()?,
        })
    }
}

/// A loaded fixture: complex, `η`, metric and optional `φ`.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub complex: Arc<InvariantComplex>,
    pub eta: Form,
    pub metric: MetricStructure,
    pub phi: Option<Endomorphism>,
}

impl Fixture {
    pub fn contact(&self) -> Result<ContactStructure> {
        self.complex.contact_half_dim()?;
        ContactStructure::new(&self.complex, self.eta.clone())
    }

    /// Structure with axioms checked; not required to pass.
    pub fn model(&self) -> Result<SasakianModel> {
        let contact = self.contact()?;
        SasakianModel::from_contact(
            self.complex.clone(),
            contact,
            self.metric.clone(),
            self.phi.clone(),
        )
    }
}

const BUNDLED: &[(&str, &str)] = &[
    ("heis3", include_str!("../fixtures/heis3.json")),
    ("heis3_alt", include_str!("../fixtures/heis3_alt.json")),
    ("heis5", include_str!("../fixtures/heis5.json")),
    ("heis5_alt", include_str!("../fixtures/heis5_alt.json")),
    ("heis7", include_str!("../fixtures/heis7.json")),
    ("heis11", include_str!("../fixtures/heis11.json")),
    ("n5_contact", include_str!("../fixtures/n5_contact.json")),
    ("abelian3", include_str!("../fixtures/abelian3.json")),
];

pub fn bundled_names() -> Vec<&'static str> {
    BUNDLED.iter().map(|(n, _)| *n).collect()
}

pub fn bundled_text(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn bundled(name: &str) -> Result<Fixture> {
    let text = bundled_text(name)
        .ok_or_else(|| field_error(name, "no bundled fixture with this name"))?;
    parse_fixture(text)?.load()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    #[test]
    fn heis3_parses() {
        let doc = parse_fixture(bundled_text("heis3").unwrap()).unwrap();
        assert_eq!(doc.dim, 3);
        let f = doc.load().unwrap();
        let de3 = f.complex.spec().diff_of_generator(3);
        assert_eq!(de3, &Form::monomial(3, &[1, 2], int(-2)).unwrap());
        assert!(f.metric.gram1().is_identity());
    }

    #[test]
    fn index_out_of_range() {
        let text = r#"{"name":"bad","dim":3,"diff1":{"3":[["1",1,4]]},"eta":[[1,3]]}"#;
        match parse_fixture(text) {
            Err(Error::Fixture { path, .. }) => assert_eq!(path, "diff1.3[0]"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn malformed_rational_and_syntax() {
        let text = r#"{"name":"bad","dim":3,"diff1":{"3":[["1/0",1,2]]}}"#;
        assert!(matches!(parse_fixture(text), Err(Error::Fixture { .. })));
        let text = "{\"name\": \"x\",\n \"dim\": }";
        match parse_fixture(text) {
            Err(Error::Fixture { path, .. }) => assert!(path.starts_with("line 2")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn every_bundled_fixture_loads() {
        for name in bundled_names() {
            let f = bundled(name).unwrap();
            assert_eq!(f.name, name);
        }
    }
}
