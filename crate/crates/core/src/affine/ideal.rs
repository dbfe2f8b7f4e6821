use num_bigint::BigInt;
use num_traits::Zero;

use crate::bichar::Cocycle;
use crate::error::{Error, Result};
use crate::lattice::{hermite_in_place, IntMatrix, Lattice, RowOps};
use crate::stratum::Stratum;
use crate::valuegroup::{CoefficientGroup, KElement};

/// `x^plus − scalar · x^minus` in the quantized algebra, where
/// `x^β = x₁^{β₁} ⋯ x_n^{β_n}` is an ordered monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Binomial {
    pub plus: Vec<BigInt>,
    pub minus: Vec<BigInt>,
    pub scalar: KElement,
}

impl Binomial {
    /// Splits a lattice vector `α = α₊ − α₋` into positive and negative parts.
    pub fn split(alpha: &[BigInt], scalar: KElement) -> Self {
        let plus = alpha.iter().map(|x| x.max(&BigInt::zero()).clone()).collect();
        let minus = alpha.iter().map(|x| (-x).max(BigInt::zero())).collect();
        Binomial {
            plus,
            minus,
            scalar,
        }
    }

    pub fn exponent(&self) -> Vec<BigInt> {
        self.plus.iter().zip(&self.minus).map(|(a, b)| a - b).collect()
    }

    /// The scalar `χ` of the commutative image `y^α − χ` in the Laurent
    /// ring, where `y^{α₊}·y^{-α₋}` replaces the ordered monomials.
    pub fn commutative_scalar(&self, cocycle: &Cocycle) -> Result<KElement> {
        let k = cocycle.scalars();
        let np = cocycle.monomial_normalizer(&self.plus)?;
        let nm = cocycle.monomial_normalizer(&self.minus)?;
        k.div(&k.mul(&self.scalar, &nm)?, &np)
    }
}

/// Generators of an ideal of the quantized algebra lying over one stratum:
/// the variables `x_i` for `i ∈ w` and binomials indexed by a lattice in
/// `Γ_w`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IdealPresentation {
    pub stratum: Stratum,
    /// 0-based indices `i` with `x_i` a generator; always the members of `w`.
    pub variables: Vec<usize>,
    pub binomials: Vec<Binomial>,
    /// True when the generators are only certified to describe the ideal
    /// after inverting the `x_j`, `j ∉ w`; the polynomial-ring ideal they
    /// generate may be smaller than the true image.
    pub laurent_exact: bool,
    /// Lattice spanned by the binomial exponents.
    pub lattice: Lattice,
}

impl IdealPresentation {
    /// Normal form of the ideal's image in the commutative Laurent ring
    /// over the stratum.
    pub fn shadow(&self, cocycle: &Cocycle) -> Result<LatticeCosetIdeal> {
        let pairs = self
            .binomials
            .iter()
            .map(|b| Ok((b.exponent(), b.commutative_scalar(cocycle)?)))
            .collect::<Result<Vec<_>>>()?;
        LatticeCosetIdeal::from_pairs(cocycle.scalars(), &self.stratum, &pairs)?
            .ok_or_else(|| Error::Internal("quotient-map ideal reduced to the unit ideal".into()))
    }
}

/// An ideal `⟨y_i : i ∈ w⟩ + ⟨y^α − χ(α) : α ∈ L⟩` of the commutative Laurent
/// ring over a stratum, with `χ` a character of `L`.
///
/// Stored as the Hermite basis of `L` and the value of `χ` on each basis
/// row, which is canonical: two generating sets give equal values exactly
/// when they generate the same ideal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeCosetIdeal {
    pub stratum: Stratum,
    pub lattice: Lattice,
    pub values: Vec<KElement>,
}

struct ScalarRows<'a> {
    group: &'a CoefficientGroup,
    values: Vec<KElement>,
}

impl RowOps for ScalarRows<'_> {
    fn swap(&mut self, a: usize, b: usize) {
        self.values.swap(a, b);
    }

    fn add_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        let step = self.group.pow(&self.values[source], factor).expect("same group");
        self.values[target] = self.group.mul(&self.values[target], &step).expect("same group");
    }

    fn negate(&mut self, row: usize) {
        self.values[row] = self.group.inv(&self.values[row]).expect("same group");
    }
}

impl LatticeCosetIdeal {
    /// Reduces generators `y^α − χ` to normal form. Returns `None` when the
    /// generators are inconsistent, i.e. they generate the unit ideal.
    pub fn from_pairs(
        group: &CoefficientGroup,
        stratum: &Stratum,
        pairs: &[(Vec<BigInt>, KElement)],
    ) -> Result<Option<Self>> {
        let n = stratum.n();
        for (alpha, value) in pairs {
            if alpha.len() != n {
                return Err(Error::DimensionMismatch {
                    context: "binomial exponent",
                    expected: n,
                    found: alpha.len(),
                });
            }
            if let Some(&i) = stratum.members().iter().find(|&&i| !alpha[i].is_zero()) {
                return Err(Error::Invalid(format!(
                    "binomial involves x{} which vanishes on the stratum",
                    i + 1
                )));
            }
            group.is_one(value)?;
        }
        let rows = pairs.iter().map(|(a, _)| a.clone()).collect();
        let mut m = IntMatrix::from_rows(n, rows)?;
        let mut scalars = ScalarRows {
            group,
            values: pairs.iter().map(|(_, v)| v.clone()).collect(),
        };
        let rank = hermite_in_place(&mut m, &mut scalars);
        for v in &scalars.values[rank..] {
            if !group.is_one(v)? {
                return Ok(None);
            }
        }
        m.truncate_rows(rank);
        scalars.values.truncate(rank);
        Ok(Some(LatticeCosetIdeal {
            stratum: stratum.clone(),
            lattice: Lattice::from_generators(&m),
            values: scalars.values,
        }))
    }

    /// `χ(α)` if `α ∈ L`.
    pub fn evaluate(&self, group: &CoefficientGroup, alpha: &[BigInt]) -> Result<Option<KElement>> {
        match self.lattice.coordinates(alpha)? {
            Some(coefs) => Ok(Some(group.product_of_powers(&self.values, &coefs)?)),
            None => Ok(None),
        }
    }

    /// Ideal containment `other ⊆ self`.
    pub fn contains(&self, group: &CoefficientGroup, other: &LatticeCosetIdeal) -> Result<bool> {
        if !self.stratum.is_subset_of(&other.stratum) {
            return Ok(false);
        }
        for (row, value) in other.lattice.basis_rows().zip(&other.values) {
            // a variable of `self` kills monomials that use it
            if self.stratum.members().iter().any(|&i| !row[i].is_zero()) {
                continue;
            }
            match self.evaluate(group, row)? {
                Some(v) if &v == value => {}
                _ => return Ok(false),
            }
        }
        Ok(true)
    }
}
