//! The quotient map from the quantized affine space to its torus-orbit
//! space, stratum by stratum.

mod ideal;
mod orbit;

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::bichar::{BicharMatrix, Cocycle};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::stratum::Stratum;
use crate::valuegroup::{CoefficientGroup, Generator, KElement};

pub use ideal::{Binomial, IdealPresentation, LatticeCosetIdeal};
pub use orbit::{root_of_unity, OrbitSample};

/// Largest `n` for which all `2ⁿ` strata are enumerated.
pub const MAX_ENUMERATED_N: usize = 24;

/// One coordinate of a point of `Kⁿ`: zero or a unit of the coefficient
/// group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coord {
    Zero,
    Unit(KElement),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    coords: Vec<Coord>,
}

impl Point {
    pub fn new(coords: Vec<Coord>) -> Self {
        Point { coords }
    }

    pub fn coords(&self) -> &[Coord] {
        &self.coords
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    /// The stratum of indices where the point vanishes.
    pub fn stratum(&self) -> Stratum {
        let zeros = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| matches!(c, Coord::Zero))
            .map(|(i, _)| i);
        Stratum::new(self.coords.len(), zeros).expect("indices in range")
    }

    pub fn value(&self, i: usize) -> Option<&KElement> {
        match &self.coords[i] {
            Coord::Zero => None,
            Coord::Unit(v) => Some(v),
        }
    }

    /// `λ^α = ∏ λ_j^{α_j}`, ignoring indices where `α_j = 0`.
    pub fn monomial(&self, group: &CoefficientGroup, alpha: &[BigInt]) -> Result<KElement> {
        let mut acc = group.one();
        for (i, a) in alpha.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let v = self.value(i).ok_or(Error::ZeroCoordinate(i))?;
            acc = group.mul(&acc, &group.pow(v, a)?)?;
        }
        Ok(acc)
    }
}

/// Summary of one stratum of the orbit space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StratumSummary {
    pub stratum: Stratum,
    pub radical_rank: usize,
    /// Hermite basis of the radical: the exponents of central monomials.
    pub center_monomial_basis: Vec<Vec<BigInt>>,
    /// `|w̄| − rank rad(σ_w)`, the dimension of a generic fibre.
    pub fibre_dimension: usize,
    pub torus_mode: bool,
}

/// The quantized affine space for one parameter matrix, with its cocycle
/// and a cache of per-stratum radicals.
pub struct QuantumSpace {
    bichar: BicharMatrix,
    cocycle: Cocycle,
    radicals: Mutex<HashMap<Stratum, Lattice>>,
}

impl Clone for QuantumSpace {
    fn clone(&self) -> Self {
        QuantumSpace {
            bichar: self.bichar.clone(),
            cocycle: self.cocycle.clone(),
            radicals: Mutex::new(self.radicals.lock().expect("cache lock").clone()),
        }
    }
}

impl std::fmt::Debug for QuantumSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("QuantumSpace").field("bichar", &self.bichar).finish()
    }
}

impl QuantumSpace {
    pub fn new(bichar: BicharMatrix) -> Result<Self> {
        let cocycle = bichar.cocycle()?;
        Ok(QuantumSpace {
            bichar,
            cocycle,
            radicals: Mutex::new(HashMap::new()),
        })
    }

    pub fn n(&self) -> usize {
        self.bichar.n()
    }

    pub fn bichar(&self) -> &BicharMatrix {
        &self.bichar
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    /// Group in which point coordinates and ideal scalars live: the
    /// square-root extension of the coefficient group.
    pub fn scalars(&self) -> &CoefficientGroup {
        self.cocycle.scalars()
    }

    /// The same space over a coefficient group with fresh generators.
    pub fn with_fresh_generators(&self, fresh: Vec<Generator>) -> Result<QuantumSpace> {
        QuantumSpace::new(self.bichar.with_fresh_generators(fresh)?)
    }

    /// Re-expresses a point of a space whose group is a prefix of ours.
    pub fn embed_point(&self, from: &QuantumSpace, p: &Point) -> Result<Point> {
        let coords = p
            .coords
            .iter()
            .map(|c| match c {
                Coord::Zero => Ok(Coord::Zero),
                Coord::Unit(v) => Ok(Coord::Unit(self.scalars().embed_from(from.scalars(), v)?)),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Point::new(coords))
    }

    pub fn radical(&self, w: &Stratum) -> Result<Lattice> {
        if let Some(l) = self.radicals.lock().expect("cache lock").get(w) {
            return Ok(l.clone());
        }
        let l = self.bichar.radical(w)?.lattice;
        self.radicals
            .lock()
            .expect("cache lock")
            .insert(w.clone(), l.clone());
        Ok(l)
    }

    pub fn check_point(&self, p: &Point) -> Result<()> {
        if p.n() != self.n() {
            return Err(Error::MalformedPoint(format!(
                "expected {} coordinates, found {}",
                self.n(),
                p.n()
            )));
        }
        let k = self.scalars().len();
        for (i, c) in p.coords.iter().enumerate() {
            if let Coord::Unit(v) = c {
                if v.len() != k {
                    return Err(Error::MalformedPoint(format!(
                        "coordinate {} has {} exponents, expected {k}",
                        i + 1,
                        v.len()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn summary(&self, w: &Stratum) -> Result<StratumSummary> {
        Ok(summarize(w, &self.radical(w)?))
    }

    /// Summaries of all `2ⁿ` strata, ordered by the bitmask of `w`.
    /// Bypasses the radical cache.
    pub fn enumerate_strata(&self) -> Result<Vec<StratumSummary>> {
        let n = self.n();
        if n > MAX_ENUMERATED_N {
            return Err(Error::StrataCapExceeded {
                n,
                cap: MAX_ENUMERATED_N,
            });
        }
        (0..1u64 << n)
            .into_par_iter()
            .map(|mask| {
                let w = Stratum::from_mask(n, mask);
                Ok(summarize(&w, &self.bichar.radical(&w)?.lattice))
            })
            .collect()
    }

    /// The single stratum of the torus `(K^×)ⁿ`.
    pub fn torus_summary(&self) -> Result<StratumSummary> {
        let mut s = self.summary(&Stratum::empty(self.n()))?;
        s.torus_mode = true;
        Ok(s)
    }

    /// Exponents `α` of a basis of central monomials `x_α` on the stratum.
    pub fn center_generators(&self, w: &Stratum) -> Result<Vec<Vec<BigInt>>> {
        Ok(self.radical(w)?.basis().to_rows())
    }

    fn binomials(&self, point: &Point, rad: &Lattice) -> Result<Vec<Binomial>> {
        let k = self.scalars();
        rad.basis_rows()
            .map(|alpha| {
                let b = Binomial::split(alpha, k.one());
                let s = k.mul(
                    &point.monomial(k, alpha)?,
                    &k.div(
                        &self.cocycle.monomial_normalizer(&b.plus)?,
                        &self.cocycle.monomial_normalizer(&b.minus)?,
                    )?,
                )?;
                Ok(Binomial { scalar: s, ..b })
            })
            .collect()
    }

    /// Generators of the image of the point under the quotient map: the
    /// primitive ideal of the quantized algebra over it.
    pub fn map_point(&self, point: &Point) -> Result<IdealPresentation> {
        self.check_point(point)?;
        let p = self.scalars().characteristic();
        if p != 0 {
            return Err(Error::PositiveCharacteristic(p));
        }
        let w = point.stratum();
        let rad = self.radical(&w)?;
        let binomials = self.binomials(point, &rad)?;
        Ok(IdealPresentation {
            laurent_exact: !saturation_certified(&w, &rad),
            variables: w.members().to_vec(),
            stratum: w,
            binomials,
            lattice: rad,
        })
    }

    /// [`map_point`](Self::map_point) on the torus, where every coordinate
    /// is a unit and ideals are read in the Laurent ring.
    pub fn torus_map_point(&self, point: &Point) -> Result<IdealPresentation> {
        self.check_point(point)?;
        if let Some(i) = point.coords.iter().position(|c| matches!(c, Coord::Zero)) {
            return Err(Error::ZeroCoordinate(i));
        }
        let mut ideal = self.map_point(point)?;
        ideal.laurent_exact = true;
        Ok(ideal)
    }

    /// Whether two points have the same image: same stratum and
    /// `(μ/λ)^α = 1` for every `α` in the radical.
    pub fn same_fibre(&self, lambda: &Point, mu: &Point) -> Result<bool> {
        self.check_point(lambda)?;
        self.check_point(mu)?;
        let w = lambda.stratum();
        if w != mu.stratum() {
            return Ok(false);
        }
        let k = self.scalars();
        for alpha in self.radical(&w)?.basis_rows() {
            if k.div(&mu.monomial(k, alpha)?, &lambda.monomial(k, alpha)?)? != k.one() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn summarize(w: &Stratum, rad: &Lattice) -> StratumSummary {
    StratumSummary {
        stratum: w.clone(),
        radical_rank: rad.rank(),
        center_monomial_basis: rad.basis().to_rows(),
        fibre_dimension: w.complement().len() - rad.rank(),
        torus_mode: false,
    }
}

/// A basis row `d·ε_j` for every `j ∉ w` makes each such `x_j` invertible
/// modulo the binomials, so the polynomial ideal is already saturated.
/// With no binomials the ideal is `⟨x_i : i ∈ w⟩`, which is prime.
fn saturation_certified(w: &Stratum, rad: &Lattice) -> bool {
    if rad.is_zero() {
        return true;
    }
    w.complement().into_iter().all(|j| {
        rad.basis_rows()
            .any(|r| r.iter().enumerate().all(|(i, x)| (i == j) != x.is_zero()))
    })
}
