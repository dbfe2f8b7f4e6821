//! Quantum toric varieties as cocycle twists of a `G`-graded monoid algebra.
//!
//! The grading group is `G = ℤᵐ / R` and the algebra is generated by
//! `r_1, …, r_n` of degrees `δ_i`. Everything is pulled back along
//! `ρ : ℤⁿ → ℤᵐ`, `ε_i ↦ δ_i`, to the quantum affine space with
//! parameters `c̃(ε_i, ε_j)²`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::affine::{IdealPresentation, Point, QuantumSpace};
use crate::bichar::{check_alternating, BicharMatrix};
use crate::error::{Error, Result};
use crate::lattice::{
    kernel_with_congruences, quotient_invariants, solve_left, CongruenceBlock, FgAbelianGroup,
    IntMatrix, Lattice,
};
use crate::stratum::Stratum;
use crate::valuegroup::{CoefficientGroup, KElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradingData {
    relations: Lattice,
    /// `m × n`; column `i` is a representative of `δ_i`.
    rho: IntMatrix,
    group: FgAbelianGroup,
}

impl GradingData {
    pub fn new(m: usize, relations: Vec<Vec<BigInt>>, degrees: Vec<Vec<BigInt>>) -> Result<Self> {
        let relations = Lattice::from_rows(m, relations)?;
        let rho = IntMatrix::from_rows(m, degrees)?.transpose();
        if rho.rows() != m {
            return Err(Error::DimensionMismatch {
                context: "degree vectors",
                expected: m,
                found: rho.rows(),
            });
        }
        let group = quotient_invariants(&Lattice::full(m), &relations)?;
        Ok(GradingData {
            relations,
            rho,
            group,
        })
    }

    /// `G = ℤⁿ` with `δ_i = ε_i`.
    pub fn identity(n: usize) -> Self {
        let degrees = (0..n)
            .map(|i| (0..n).map(|j| BigInt::from(i32::from(i == j))).collect())
            .collect();
        GradingData::new(n, vec![], degrees).expect("square identity")
    }

    pub fn m(&self) -> usize {
        self.rho.rows()
    }

    pub fn n(&self) -> usize {
        self.rho.cols()
    }

    pub fn rho(&self) -> &IntMatrix {
        &self.rho
    }

    pub fn relations(&self) -> &Lattice {
        &self.relations
    }

    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    /// `{α : ρα ∈ R}`, the exponent relations among the `r_i`.
    pub fn kernel(&self) -> Result<Lattice> {
        Lattice::preimage(&self.rho, &self.relations)
    }

    /// Lift of `G_w = Σ_{j∉w} ℤδ_j` to `ℤᵐ`, containing `R`.
    pub fn lifted_degrees(&self, w: &Stratum) -> Result<Lattice> {
        Lattice::coordinate(self.n(), w.members())
            .image(&self.rho)?
            .sum(&self.relations)
    }
}

/// An alternating bicharacter on `G`, given by one `m × m` integer matrix
/// per coefficient generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GBicharacter {
    group: CoefficientGroup,
    matrices: Vec<IntMatrix>,
}

impl GBicharacter {
    pub fn new(group: CoefficientGroup, matrices: Vec<IntMatrix>) -> Result<Self> {
        if matrices.len() != group.len() {
            return Err(Error::DimensionMismatch {
                context: "matrices per generator",
                expected: group.len(),
                found: matrices.len(),
            });
        }
        let m = matrices.first().map_or(0, IntMatrix::rows);
        for (mat, g) in matrices.iter().zip(group.generators()) {
            if mat.rows() != m {
                return Err(Error::DimensionMismatch {
                    context: "bicharacter matrix size",
                    expected: m,
                    found: mat.rows(),
                });
            }
            check_alternating(mat, g.order, &g.name)?;
        }
        Ok(GBicharacter { group, matrices })
    }

    pub fn group(&self) -> &CoefficientGroup {
        &self.group
    }

    pub fn matrices(&self) -> &[IntMatrix] {
        &self.matrices
    }

    pub fn eval(&self, y: &[BigInt], z: &[BigInt]) -> Result<KElement> {
        let e = self
            .matrices
            .iter()
            .map(|m| m.bilinear(y, z))
            .collect::<Result<Vec<_>>>()?;
        self.group.element(e)
    }

    /// Fails unless `c(r, −) ≡ 1` for every relation `r`.
    pub fn check_well_defined(&self, grading: &GradingData) -> Result<()> {
        let m = grading.m();
        if self.group.is_empty() {
            return Ok(());
        }
        if self.matrices[0].rows() != m {
            return Err(Error::DimensionMismatch {
                context: "bicharacter matrix size",
                expected: m,
                found: self.matrices[0].rows(),
            });
        }
        for r in grading.relations.basis_rows() {
            for j in 0..m {
                let mut e = vec![BigInt::zero(); m];
                e[j] = BigInt::one();
                if !self.group.is_one(&self.eval(r, &e)?)? {
                    return Err(Error::NotWellDefined(format!(
                        "c({r:?}, e{}) is not 1 although {r:?} is a relation",
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `c̃ = c∘(ρ×ρ)` as a parameter matrix on `ℤⁿ`.
pub fn pullback(grading: &GradingData, c: &GBicharacter) -> Result<BicharMatrix> {
    c.check_well_defined(grading)?;
    let rho = grading.rho();
    let matrices = c
        .matrices
        .iter()
        .map(|m| rho.transpose().mul(m)?.mul(rho))
        .collect::<Result<Vec<_>>>()?;
    BicharMatrix::new(grading.n(), c.group.clone(), matrices)
}

/// `S_w = rad(c_w)` lifted to `ℤᵐ` (so it contains `R`), its invariants as
/// a subgroup of `G`, and its pullback `S̃_w ⊆ Γ_w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricRadical {
    pub stratum: Stratum,
    pub lifted: Lattice,
    pub invariants: FgAbelianGroup,
    pub pulled_back: Lattice,
}

/// Quantum toric variety: grading data, bicharacter and the pulled-back
/// quantum affine space.
#[derive(Clone, Debug)]
pub struct ToricSpace {
    grading: GradingData,
    c: GBicharacter,
    pulled: BicharMatrix,
    space: QuantumSpace,
}

impl ToricSpace {
    pub fn new(grading: GradingData, c: GBicharacter) -> Result<Self> {
        let pulled = pullback(&grading, &c)?;
        let space = QuantumSpace::new(pulled.squared())?;
        let ext = space.cocycle().ext();
        for i in 0..grading.n() {
            for j in 0..grading.n() {
                if space.cocycle().entry(i, j) != ext.embed(&pulled.entry(i, j))? {
                    return Err(Error::Internal(format!(
                        "square-root cocycle differs from the pulled-back bicharacter at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(ToricSpace {
            grading,
            c,
            pulled,
            space,
        })
    }

    pub fn grading(&self) -> &GradingData {
        &self.grading
    }

    pub fn bicharacter(&self) -> &GBicharacter {
        &self.c
    }

    pub fn pulled_back(&self) -> &BicharMatrix {
        &self.pulled
    }

    /// The quantum affine space with parameters `c̃²`; its cocycle is `c̃`.
    pub fn space(&self) -> &QuantumSpace {
        &self.space
    }

    pub fn n(&self) -> usize {
        self.grading.n()
    }

    /// Computes `S_w` in `G` and checks `ρ⁻¹(S_w) ∩ Γ_w = rad(c̃_w)`.
    pub fn stratum_radical(&self, w: &Stratum) -> Result<ToricRadical> {
        let n = self.n();
        if w.n() != n {
            return Err(Error::DimensionMismatch {
                context: "stratum size",
                expected: n,
                found: w.n(),
            });
        }
        let outside = w.complement();
        let rho = self.grading.rho();
        let all: Vec<usize> = (0..self.grading.m()).collect();
        // c(y, δ_j) has exponent (ρᵀ Cᵀ)_j · y
        let blocks = self
            .c
            .matrices
            .iter()
            .zip(self.c.group.generators())
            .map(|(cm, g)| {
                let rows = rho.transpose().mul(&cm.transpose())?;
                Ok(CongruenceBlock::new(rows.submatrix(&outside, &all), g.order))
            })
            .collect::<Result<Vec<_>>>()?;
        let lifted = kernel_with_congruences(&blocks, &self.grading.lifted_degrees(w)?)?;
        let gamma_w = Lattice::coordinate(n, w.members());
        let via_preimage = Lattice::preimage(rho, &lifted)?.intersect(&gamma_w)?;
        let direct = self.pulled.radical(w)?.lattice;
        if via_preimage != direct {
            return Err(Error::Internal(format!(
                "pulled-back radical mismatch on stratum {:?}: {:?} vs {:?}",
                w.one_based(),
                via_preimage,
                direct
            )));
        }
        let invariants = quotient_invariants(&lifted, &self.grading.relations)?;
        Ok(ToricRadical {
            stratum: w.clone(),
            lifted,
            invariants,
            pulled_back: direct,
        })
    }

    /// Best-effort face test: each kernel basis relation `r^{κ₊} = r^{κ₋}`
    /// must have both sides vanish or neither.
    pub fn check_face(&self, w: &Stratum) -> Result<()> {
        for kappa in self.grading.kernel()?.basis_rows() {
            let plus_alive = kappa.iter().enumerate().all(|(i, x)| !x.is_positive() || !w.contains(i));
            let minus_alive = kappa.iter().enumerate().all(|(i, x)| !x.is_negative() || !w.contains(i));
            if plus_alive != minus_alive {
                return Err(Error::NotAFace(w.one_based()));
            }
        }
        Ok(())
    }

    /// A point of the toric variety: a face stratum, and `λ^κ = 1` on the
    /// exponent relations supported off the stratum.
    pub fn check_point(&self, lambda: &Point) -> Result<()> {
        self.space.check_point(lambda)?;
        let w = lambda.stratum();
        self.check_face(&w)?;
        let k = self.space.scalars();
        let on_stratum = self
            .grading
            .kernel()?
            .intersect(&Lattice::coordinate(self.n(), w.members()))?;
        for kappa in on_stratum.basis_rows() {
            if !k.is_one(&lambda.monomial(k, kappa)?)? {
                return Err(Error::NotOnVariety(format!(
                    "relation with exponent {:?} fails",
                    kappa.iter().map(ToString::to_string).collect::<Vec<_>>()
                )));
            }
        }
        Ok(())
    }

    /// The image of `λ` in the primitive spectrum, as generators in the
    /// quantum generators `a_i`, read modulo the toric relations.
    pub fn map_point(&self, lambda: &Point) -> Result<IdealPresentation> {
        self.check_point(lambda)?;
        let w = lambda.stratum();
        let rad = self.stratum_radical(&w)?;
        let ideal = self.space.map_point(lambda)?;
        if ideal.lattice != rad.pulled_back {
            return Err(Error::Internal("affine radical differs from the toric radical".into()));
        }
        Ok(ideal)
    }

    /// Fibre test computed through `G` and through the pullback; the two
    /// must agree.
    pub fn same_fibre(&self, lambda: &Point, mu: &Point) -> Result<bool> {
        self.check_point(lambda)?;
        self.check_point(mu)?;
        let via_pullback = self.space.same_fibre(lambda, mu)?;
        let w = lambda.stratum();
        let via_group = w == mu.stratum() && self.ratio_test(&w, lambda, mu)?;
        if via_group != via_pullback {
            return Err(Error::Internal(format!(
                "fibre tests disagree: through G {via_group}, through the pullback {via_pullback}"
            )));
        }
        Ok(via_group)
    }

    /// `μ/λ` is trivial on a lift to `Γ_w` of every generator of `S_w`.
    fn ratio_test(&self, w: &Stratum, lambda: &Point, mu: &Point) -> Result<bool> {
        let outside = w.complement();
        let m = self.grading.m();
        let all: Vec<usize> = (0..m).collect();
        let degrees = self.grading.rho().submatrix(&all, &outside).transpose();
        let gens = degrees.vstack(self.grading.relations.basis())?;
        let k = self.space.scalars();
        for g in self.stratum_radical(w)?.lifted.basis_rows() {
            let x = solve_left(&gens, g)?
                .ok_or_else(|| Error::Internal("radical generator outside G_w".into()))?;
            let mut alpha = vec![BigInt::zero(); self.n()];
            for (&j, xj) in outside.iter().zip(&x) {
                alpha[j] = xj.clone();
            }
            if !k.is_one(&k.div(&mu.monomial(k, &alpha)?, &lambda.monomial(k, &alpha)?)?)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Outcome of comparing two twists of the same graded algebra at a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refinement {
    /// Ideal over the point under the finer twist `c₁`.
    pub finer: IdealPresentation,
    /// Ideal over the point under the coarser twist `c₂`.
    pub coarser: IdealPresentation,
}

/// Two twists `c₁`, `c₂` of one graded algebra with `rad(c₂_w) ⊆ rad(c₁_w)`
/// on every stratum, so that the quotient map for `c₂` factors through
/// the one for `c₁`.
#[derive(Clone, Debug)]
pub struct Refiner {
    finer: ToricSpace,
    coarser: ToricSpace,
}

impl Refiner {
    /// Checks the radical inclusion on all strata.
    pub fn new(grading: &GradingData, c1: &GBicharacter, c2: &GBicharacter) -> Result<Self> {
        if c1.group != c2.group {
            return Err(Error::GroupMismatch {
                left: c1.group.len(),
                right: c2.group.len(),
            });
        }
        let finer = ToricSpace::new(grading.clone(), c1.clone())?;
        let coarser = ToricSpace::new(grading.clone(), c2.clone())?;
        let n = grading.n();
        if n > crate::affine::MAX_ENUMERATED_N {
            return Err(Error::StrataCapExceeded {
                n,
                cap: crate::affine::MAX_ENUMERATED_N,
            });
        }
        let failing = (0..1u64 << n)
            .into_par_iter()
            .map(|mask| {
                let w = Stratum::from_mask(n, mask);
                let r1 = finer.stratum_radical(&w)?.lifted;
                let r2 = coarser.stratum_radical(&w)?.lifted;
                Ok((!r2.is_subset_of(&r1)?).then_some(w))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .next();
        if let Some(w) = failing {
            return Err(Error::RefinementFails(w.one_based()));
        }
        Ok(Refiner { finer, coarser })
    }

    pub fn finer(&self) -> &ToricSpace {
        &self.finer
    }

    pub fn coarser(&self) -> &ToricSpace {
        &self.coarser
    }

    /// Maps `λ` under both twists and verifies that the `c₂` ideal is the
    /// image of the `c₁` ideal: a sublattice with restricted scalars.
    pub fn at(&self, lambda: &Point) -> Result<Refinement> {
        let finer = self.finer.map_point(lambda)?;
        let coarser = self.coarser.map_point(lambda)?;
        let k = self.finer.space().scalars();
        let s1 = finer.shadow(self.finer.space().cocycle())?;
        let s2 = coarser.shadow(self.coarser.space().cocycle())?;
        if !coarser.lattice.is_subset_of(&finer.lattice)? || !s1.contains(k, &s2)? {
            return Err(Error::Internal("refinement triangle does not commute at the point".into()));
        }
        Ok(Refinement { finer, coarser })
    }
}

pub fn refine(
    grading: &GradingData,
    c1: &GBicharacter,
    c2: &GBicharacter,
    lambda: &Point,
) -> Result<Refinement> {
    Refiner::new(grading, c1, c2)?.at(lambda)
}

/// Pass/fail per condition on the grading.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradingReport {
    /// The degrees and relations span `ℤᵐ`.
    pub degrees_generate_group: bool,
    /// Every character trivial on all `δ_i` is trivial.
    pub action_faithful: bool,
    /// Distinct degrees are separated by characters into `k^×`.
    pub eigenspaces_one_dimensional: bool,
}

impl GradingReport {
    pub fn passed(&self) -> bool {
        self.degrees_generate_group && self.action_faithful && self.eigenspaces_one_dimensional
    }
}

fn is_power_of(x: &BigInt, p: u64) -> bool {
    let p = BigInt::from(p);
    let mut x = x.clone();
    while x.is_multiple_of(&p) && !x.is_zero() {
        x /= &p;
    }
    x.is_one()
}

pub fn validate_grading(grading: &GradingData, characteristic: u64) -> Result<GradingReport> {
    let m = grading.m();
    let spanned = Lattice::full(grading.n())
        .image(grading.rho())?
        .sum(&grading.relations)?;
    let cokernel = quotient_invariants(&Lattice::full(m), &spanned)?;
    let action_faithful = if characteristic == 0 {
        cokernel.is_trivial()
    } else {
        cokernel.rank() == 0 && cokernel.torsion_orders().iter().all(|d| is_power_of(d, characteristic))
    };
    let eigenspaces_one_dimensional = characteristic == 0
        || grading
            .group
            .torsion_orders()
            .iter()
            .all(|d| !d.is_multiple_of(&BigInt::from(characteristic)));
    Ok(GradingReport {
        degrees_generate_group: cokernel.is_trivial(),
        action_faithful,
        eigenspaces_one_dimensional,
    })
}
