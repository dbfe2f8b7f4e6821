use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::affine::{Coord, Point, QuantumSpace};
use crate::bichar::BicharMatrix;
use crate::error::{Error, Result};
use crate::lattice::IntMatrix;
use crate::toric::{GBicharacter, GradingData, ToricSpace};
use crate::valuegroup::{CoefficientGroup, Generator, KElement, SqrtExtension};

/// Generator name to exponent; absent names have exponent zero.
pub type ExponentMap = BTreeMap<String, i64>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub name: String,
    /// Zero for a free generator.
    #[serde(default)]
    pub order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToricSpec {
    pub m: usize,
    #[serde(default)]
    pub relations: Vec<Vec<i64>>,
    pub degrees: Vec<Vec<i64>>,
    pub c: Vec<Vec<ExponentMap>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub characteristic: u64,
    pub generators: Vec<GeneratorSpec>,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<Vec<ExponentMap>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub toric: Option<ToricSpec>,
}

/// A bicharacter on the grading group, for `refine`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BicharacterFile {
    pub c: Vec<Vec<ExponentMap>>,
}

/// A coordinate: the literal `0` or the exponent map of a unit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoordSpec {
    Zero(u8),
    Unit(ExponentMap),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointFile {
    pub coords: Vec<CoordSpec>,
}

/// A validated problem.
#[derive(Clone, Debug)]
pub struct Problem {
    pub space: QuantumSpace,
    pub toric: Option<ToricSpace>,
}

pub fn to_big(map: &ExponentMap) -> BTreeMap<String, BigInt> {
    map.iter().map(|(k, v)| (k.clone(), BigInt::from(*v))).collect()
}

pub fn to_small(map: BTreeMap<String, BigInt>) -> Result<ExponentMap> {
    map.into_iter()
        .map(|(k, v)| {
            let x = v
                .to_i64()
                .ok_or_else(|| Error::Invalid(format!("exponent of `{k}` exceeds the 64-bit range")))?;
            Ok((k, x))
        })
        .collect()
}

pub fn big_rows(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

fn check_square<T>(rows: &[Vec<T>], size: usize, context: &'static str) -> Result<()> {
    if rows.len() != size {
        return Err(Error::DimensionMismatch {
            context,
            expected: size,
            found: rows.len(),
        });
    }
    if let Some(r) = rows.iter().find(|r| r.len() != size) {
        return Err(Error::DimensionMismatch {
            context,
            expected: size,
            found: r.len(),
        });
    }
    Ok(())
}

fn entry_matrices(group: &CoefficientGroup, rows: &[Vec<ExponentMap>], size: usize) -> Result<Vec<IntMatrix>> {
    check_square(rows, size, "parameter matrix")?;
    let mut matrices = vec![IntMatrix::zeros(size, size); group.len()];
    for (i, row) in rows.iter().enumerate() {
        for (j, map) in row.iter().enumerate() {
            let e = group.from_named(&to_big(map))?;
            for (k, x) in e.exponents().iter().enumerate() {
                matrices[k][(i, j)] = x.clone();
            }
        }
    }
    Ok(matrices)
}

impl ProblemFile {
    pub fn group(&self) -> Result<CoefficientGroup> {
        let gens = self
            .generators
            .iter()
            .map(|g| Generator::new(g.name.clone(), g.order))
            .collect();
        CoefficientGroup::new(self.characteristic, gens)
    }

    pub fn bicharacter(&self, group: &CoefficientGroup, c: &[Vec<ExponentMap>]) -> Result<GBicharacter> {
        let toric = self
            .toric
            .as_ref()
            .ok_or_else(|| Error::Invalid("the problem has no toric block".into()))?;
        GBicharacter::new(group.clone(), entry_matrices(group, c, toric.m)?)
    }

    pub fn grading(&self) -> Result<GradingData> {
        let toric = self
            .toric
            .as_ref()
            .ok_or_else(|| Error::Invalid("the problem has no toric block".into()))?;
        if toric.degrees.len() != self.n {
            return Err(Error::DimensionMismatch {
                context: "degree list",
                expected: self.n,
                found: toric.degrees.len(),
            });
        }
        GradingData::new(toric.m, big_rows(&toric.relations), big_rows(&toric.degrees))
    }

    pub fn build(&self) -> Result<Problem> {
        let group = self.group()?;
        // the square-root names must be unambiguous even if unused
        SqrtExtension::new(group.clone())?;
        let affine = match &self.q {
            Some(rows) => Some(BicharMatrix::new(
                self.n,
                group.clone(),
                entry_matrices(&group, rows, self.n)?,
            )?),
            None => None,
        };
        let toric = match &self.toric {
            Some(spec) => {
                let c = self.bicharacter(&group, &spec.c)?;
                Some(ToricSpace::new(self.grading()?, c)?)
            }
            None => None,
        };
        let space = match (affine, &toric) {
            (Some(b), Some(t)) => {
                if &b != t.space().bichar() {
                    return Err(Error::Invalid(
                        "q does not equal the square of the pulled-back toric bicharacter".into(),
                    ));
                }
                t.space().clone()
            }
            (Some(b), None) => QuantumSpace::new(b)?,
            (None, Some(t)) => t.space().clone(),
            (None, None) => return Err(Error::Invalid("the problem needs q or a toric block".into())),
        };
        Ok(Problem { space, toric })
    }
}

impl PointFile {
    pub fn to_point(&self, ext: &SqrtExtension) -> Result<Point> {
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(i, c)| match c {
                CoordSpec::Zero(0) => Ok(Coord::Zero),
                CoordSpec::Zero(x) => Err(Error::MalformedPoint(format!(
                    "coordinate {} is the number {x}; only 0 or an exponent map is allowed",
                    i + 1
                ))),
                CoordSpec::Unit(map) => Ok(Coord::Unit(ext.from_named(&to_big(map))?)),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Point::new(coords))
    }

    pub fn from_point(p: &Point, ext: &SqrtExtension) -> Result<PointFile> {
        let coords = p
            .coords()
            .iter()
            .map(|c| match c {
                Coord::Zero => Ok(CoordSpec::Zero(0)),
                Coord::Unit(v) => Ok(CoordSpec::Unit(named(ext, v)?)),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PointFile { coords })
    }
}

/// Named form of an element of the square-root extension.
pub fn named(ext: &SqrtExtension, v: &KElement) -> Result<ExponentMap> {
    to_small(ext.to_named(v))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &std::path::Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

/// Parses `"1,3"` as a 1-based stratum; the empty string is `∅`.
pub fn parse_stratum(n: usize, text: &str) -> Result<crate::stratum::Stratum> {
    let trimmed = text.trim();
    let indices = if trimmed.is_empty() {
        vec![]
    } else {
        trimmed
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Invalid(format!("stratum index `{}` is not a positive integer", s.trim())))
            })
            .collect::<Result<Vec<_>>>()?
    };
    crate::stratum::Stratum::from_one_based(n, &indices)
}
