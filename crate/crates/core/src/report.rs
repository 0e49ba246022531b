//! Serializable reports. Every scalar is an exact rational string.

use serde::{Deserialize, Serialize};

use crate::identities::{ResidualReport, TachibanaReport};
use crate::ladder::{CompositionReport, FamilyTag, FigureData, LadderTrace};
use crate::lefschetz::{
    BilinearReport, LefschetzRelationReport, MetricIndependence, ObstructionVerdict, Overall,
    ParityReport,
};
use crate::linalg::{format_scalar, Matrix};
use crate::sasakian::{AdjointPairsReport, AxiomReport};

pub const TOOL: &str = "lefschetz-lab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn matrix_strings(m: &Matrix) -> Vec<Vec<String>> {
    m.to_dense()
        .iter()
        .map(|row| row.iter().map(format_scalar).collect())
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool: String,
    pub version: String,
    pub fixture: String,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validate: Option<ValidateSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cohomology: Option<CohomologySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identities: Option<IdentitiesSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ladder: Vec<LadderSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub figure: Option<FigureData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lefschetz: Option<LefschetzSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crosscheck: Option<CrosscheckSection>,
}

impl ReportDocument {
    pub fn new(fixture: &str, command: &str) -> Self {
        ReportDocument {
            tool: TOOL.into(),
            version: VERSION.into(),
            fixture: fixture.into(),
            command: command.into(),
            ..Default::default()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContactSection {
    pub n: usize,
    pub eta: String,
    pub xi: Vec<String>,
    pub phi_form: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidateSection {
    pub dim: usize,
    pub jacobi: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contact: Option<ContactSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contact_error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axioms: Option<AxiomReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adjoint_pairs: Option<AdjointPairsReport>,
    pub sasakian: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologySection {
    pub betti: Vec<usize>,
    pub representatives: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentitiesSection {
    pub diagnostic: bool,
    pub verified: bool,
    pub results: Vec<ResidualReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual_cross_check: Option<bool>,
    #[serde(default)]
    pub tachibana: Vec<TachibanaReport>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeDoc {
    pub operator: String,
    pub degree: usize,
    pub nu: String,
    pub family: FamilyTag,
    pub form: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceDoc {
    pub seed: String,
    pub nodes: Vec<NodeDoc>,
    pub factorizations_hold: bool,
}

impl From<&LadderTrace> for TraceDoc {
    fn from(t: &LadderTrace) -> Self {
        let mut nodes = vec![NodeDoc {
            operator: "seed".into(),
            degree: t.seed.degree,
            nu: format_scalar(&t.seed.nu),
            family: t.seed.family,
            form: t.seed.form.to_string(),
        }];
        nodes.extend(t.steps.iter().map(|s| NodeDoc {
            operator: s.operator.into(),
            degree: s.node.degree,
            nu: format_scalar(&s.node.nu),
            family: s.node.family,
            form: s.node.form.to_string(),
        }));
        TraceDoc {
            seed: t.seed.form.to_string(),
            nodes,
            factorizations_hold: t
                .eps_d_factorization
                .iter()
                .chain(&t.delta_i_xi_factorization)
                .all(|b| *b),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LadderSection {
    pub degree: usize,
    pub traces: Vec<TraceDoc>,
    pub composition: CompositionReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationDoc {
    pub degree: usize,
    pub constraint_dim: usize,
    pub betti_source: usize,
    pub betti_target: usize,
    pub domain_full: bool,
    pub well_defined: bool,
    pub bijective: bool,
    pub classification: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<String>>>,
}

impl From<&LefschetzRelationReport> for RelationDoc {
    fn from(r: &LefschetzRelationReport) -> Self {
        RelationDoc {
            degree: r.degree,
            constraint_dim: r.constraint_basis.len(),
            betti_source: r.betti_source,
            betti_target: r.betti_target,
            domain_full: r.domain_full,
            well_defined: r.well_defined,
            bijective: r.bijective,
            classification: r.class.to_string(),
            matrix: r.matrix.as_ref().map(matrix_strings),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BilinearDoc {
    pub degree: usize,
    pub matrix: Vec<Vec<String>>,
    pub graded_symmetric: bool,
    pub nondegenerate: bool,
}

impl From<&BilinearReport> for BilinearDoc {
    fn from(b: &BilinearReport) -> Self {
        BilinearDoc {
            degree: b.degree,
            matrix: matrix_strings(&b.matrix),
            graded_symmetric: b.graded_symmetric,
            nondegenerate: b.nondegenerate,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LefschetzSection {
    pub relations: Vec<RelationDoc>,
    pub bilinear: Vec<BilinearDoc>,
    pub parity: ParityReport,
    pub verdict: Overall,
    pub cross_checked: Vec<usize>,
}

impl From<&ObstructionVerdict> for LefschetzSection {
    fn from(v: &ObstructionVerdict) -> Self {
        LefschetzSection {
            relations: v.relations.iter().map(RelationDoc::from).collect(),
            bilinear: v.bilinear.iter().flatten().map(BilinearDoc::from).collect(),
            parity: v.parity.clone(),
            verdict: v.overall.clone(),
            cross_checked: v.cross_checked.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossDoc {
    pub degree: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation_matrix: Option<Vec<Vec<String>>>,
    pub harmonic_matrix: Vec<Vec<String>>,
    pub relation_agrees: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second_metric: Option<MetricIndependence>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrosscheckSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second_fixture: Option<String>,
    pub degrees: Vec<CrossDoc>,
    pub passed: bool,
}
