use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::files::{named, ExponentMap, GeneratorSpec, PointFile};
use crate::affine::{IdealPresentation, OrbitSample, StratumSummary};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::toric::{GradingReport, ToricRadical};
use crate::valuegroup::{CoefficientGroup, SqrtExtension};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinomialDoc {
    pub plus: Vec<i64>,
    pub minus: Vec<i64>,
    pub scalar: ExponentMap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealDoc {
    pub stratum: Vec<usize>,
    /// `x_i` generators, 1-based.
    pub variables: Vec<usize>,
    pub binomials: Vec<BinomialDoc>,
    pub laurent_exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryDoc {
    pub stratum: Vec<usize>,
    pub radical_rank: usize,
    pub center_monomial_basis: Vec<Vec<i64>>,
    pub fibre_dimension: usize,
    pub torus_mode: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitDoc {
    /// Coefficient group after adjoining the generators used by the sample.
    pub generators: Vec<GeneratorSpec>,
    pub base: PointFile,
    pub points: Vec<PointFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToricRadicalDoc {
    /// Lift of the radical to `ℤᵐ`, containing the relations.
    pub lifted: Vec<Vec<i64>>,
    /// Invariant factors of the radical as a subgroup of the grading group;
    /// zero marks a free factor.
    pub invariants: Vec<i64>,
    pub pulled_back: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinementDoc {
    pub finer: IdealDoc,
    pub coarser: IdealDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradingDoc {
    pub degrees_generate_group: bool,
    pub action_faithful: bool,
    pub eigenspaces_one_dimensional: bool,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub kind: String,
    pub message: String,
}

/// The single output of every command. Field order is fixed and absent
/// sections are omitted, so equal results serialize to equal bytes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub command: String,
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stratum: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<IdealDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summaries: Option<Vec<SummaryDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocycle: Option<Vec<Vec<ExponentMap>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub same_fibre: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit: Option<OrbitDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub toric_radical: Option<ToricRadicalDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refinement: Option<RefinementDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading: Option<GradingDoc>,
    #[serde(default)]
    pub diagnostics: Vec<Diagnostic>,
}

impl ResultDocument {
    pub fn ok(command: &str) -> Self {
        ResultDocument {
            command: command.to_string(),
            status: "ok".to_string(),
            ..Default::default()
        }
    }

    pub fn error(command: &str, e: &Error) -> Self {
        ResultDocument {
            command: command.to_string(),
            status: "error".to_string(),
            diagnostics: vec![Diagnostic {
                kind: e.kind().to_string(),
                message: e.to_string(),
            }],
            ..Default::default()
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }
}

pub fn small(x: &BigInt) -> Result<i64> {
    x.to_i64()
        .ok_or_else(|| Error::Invalid(format!("integer {x} exceeds the 64-bit range")))
}

pub fn small_vec(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter().map(small).collect()
}

pub fn lattice_rows(l: &Lattice) -> Result<Vec<Vec<i64>>> {
    l.basis_rows().map(small_vec).collect()
}

pub fn ideal_doc(ideal: &IdealPresentation, ext: &SqrtExtension) -> Result<IdealDoc> {
    Ok(IdealDoc {
        stratum: ideal.stratum.one_based(),
        variables: ideal.variables.iter().map(|i| i + 1).collect(),
        binomials: ideal
            .binomials
            .iter()
            .map(|b| {
                Ok(BinomialDoc {
                    plus: small_vec(&b.plus)?,
                    minus: small_vec(&b.minus)?,
                    scalar: named(ext, &b.scalar)?,
                })
            })
            .collect::<Result<_>>()?,
        laurent_exact: ideal.laurent_exact,
    })
}

pub fn summary_doc(s: &StratumSummary) -> Result<SummaryDoc> {
    Ok(SummaryDoc {
        stratum: s.stratum.one_based(),
        radical_rank: s.radical_rank,
        center_monomial_basis: s.center_monomial_basis.iter().map(|r| small_vec(r)).collect::<Result<_>>()?,
        fibre_dimension: s.fibre_dimension,
        torus_mode: s.torus_mode,
    })
}

pub fn generator_specs(group: &CoefficientGroup) -> Vec<GeneratorSpec> {
    group
        .generators()
        .iter()
        .map(|g| GeneratorSpec {
            name: g.name.clone(),
            order: g.order,
        })
        .collect()
}

pub fn orbit_doc(sample: &OrbitSample) -> Result<OrbitDoc> {
    let ext = sample.space.cocycle().ext();
    Ok(OrbitDoc {
        generators: generator_specs(sample.space.bichar().group()),
        base: PointFile::from_point(&sample.base, ext)?,
        points: sample
            .points
            .iter()
            .map(|p| PointFile::from_point(p, ext))
            .collect::<Result<_>>()?,
    })
}

pub fn toric_radical_doc(r: &ToricRadical) -> Result<ToricRadicalDoc> {
    Ok(ToricRadicalDoc {
        lifted: lattice_rows(&r.lifted)?,
        invariants: small_vec(&r.invariants.factor_orders())?,
        pulled_back: lattice_rows(&r.pulled_back)?,
    })
}

pub fn grading_doc(r: &GradingReport) -> GradingDoc {
    GradingDoc {
        degrees_generate_group: r.degrees_generate_group,
        action_faithful: r.action_faithful,
        eigenspaces_one_dimensional: r.eigenspaces_one_dimensional,
        passed: r.passed(),
    }
}
