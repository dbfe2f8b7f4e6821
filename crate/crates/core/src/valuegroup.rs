//! Finitely generated subgroups of `k^×`, modeled by exponent vectors.
//!
//! Scalars are never field elements: every scalar is a product of named
//! generators, each either of infinite order or a root of unity of a
//! declared odd order. Because the only element of order two in `k^×` is
//! `-1`, forbidding even orders is exactly the hypothesis that `-1` is not
//! in the group.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Prefix of the generator adjoined as the square root of a free generator.
pub const SQRT_PREFIX: &str = "sqrt_";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub name: String,
    /// Multiplicative order; `0` means infinite order.
    pub order: u64,
}

impl Generator {
    pub fn new(name: impl Into<String>, order: u64) -> Self {
        Generator {
            name: name.into(),
            order,
        }
    }

    pub fn free(name: impl Into<String>) -> Self {
        Self::new(name, 0)
    }

    pub fn is_free(&self) -> bool {
        self.order == 0
    }
}

/// An element of a [`CoefficientGroup`]: one exponent per generator,
/// reduced into `[0, order)` for finite-order generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KElement(Vec<BigInt>);

impl KElement {
    pub fn exponents(&self) -> &[BigInt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoefficientGroup {
    characteristic: u64,
    generators: Vec<Generator>,
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl CoefficientGroup {
    pub fn new(characteristic: u64, generators: Vec<Generator>) -> Result<Self> {
        if characteristic != 0 && !is_prime(characteristic) {
            return Err(Error::InvalidCharacteristic(characteristic));
        }
        let mut seen = std::collections::BTreeSet::new();
        for g in &generators {
            if g.name.is_empty() {
                return Err(Error::Invalid("empty generator name".into()));
            }
            if !seen.insert(g.name.as_str()) {
                return Err(Error::DuplicateGenerator(g.name.clone()));
            }
            if g.order != 0 && g.order % 2 == 0 {
                return Err(Error::InvalidOrder {
                    name: g.name.clone(),
                    order: g.order,
                    reason: "even order would put -1 in the group",
                });
            }
            if characteristic != 0 && g.order % characteristic == 0 && g.order != 0 {
                return Err(Error::InvalidOrder {
                    name: g.name.clone(),
                    order: g.order,
                    reason: "k^x has no torsion of the characteristic's order",
                });
            }
        }
        Ok(CoefficientGroup {
            characteristic,
            generators,
        })
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn one(&self) -> KElement {
        KElement(vec![BigInt::zero(); self.len()])
    }

    pub fn generator(&self, i: usize) -> KElement {
        let mut e = vec![BigInt::zero(); self.len()];
        e[i] = BigInt::one();
        self.reduce(e)
    }

    /// Element with the given raw exponents, reduced.
    pub fn element(&self, exponents: Vec<BigInt>) -> Result<KElement> {
        self.check_len(exponents.len())?;
        Ok(self.reduce(exponents))
    }

    pub fn element_i64(&self, exponents: &[i64]) -> Result<KElement> {
        self.element(exponents.iter().map(|&e| BigInt::from(e)).collect())
    }

    fn reduce(&self, mut e: Vec<BigInt>) -> KElement {
        for (x, g) in e.iter_mut().zip(&self.generators) {
            if g.order != 0 {
                *x = x.mod_floor(&BigInt::from(g.order));
            }
        }
        KElement(e)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.len() {
            return Err(Error::GroupMismatch {
                left: self.len(),
                right: len,
            });
        }
        Ok(())
    }

    pub fn mul(&self, a: &KElement, b: &KElement) -> Result<KElement> {
        self.check_len(a.len())?;
        self.check_len(b.len())?;
        Ok(self.reduce(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect()))
    }

    pub fn div(&self, a: &KElement, b: &KElement) -> Result<KElement> {
        self.mul(a, &self.inv(b)?)
    }

    pub fn inv(&self, a: &KElement) -> Result<KElement> {
        self.pow(a, &BigInt::from(-1))
    }

    pub fn pow(&self, a: &KElement, e: &BigInt) -> Result<KElement> {
        self.check_len(a.len())?;
        Ok(self.reduce(a.0.iter().map(|x| x * e).collect()))
    }

    pub fn is_one(&self, a: &KElement) -> Result<bool> {
        self.check_len(a.len())?;
        Ok(a.0.iter().all(Zero::is_zero))
    }

    /// `∏ bases[i]^exps[i]`.
    pub fn product_of_powers(&self, bases: &[KElement], exps: &[BigInt]) -> Result<KElement> {
        let mut acc = self.one();
        for (b, e) in bases.iter().zip(exps) {
            if !e.is_zero() {
                acc = self.mul(&acc, &self.pow(b, e)?)?;
            }
        }
        Ok(acc)
    }

    /// Appends fresh generators. Existing elements embed by zero padding.
    pub fn extend(&self, fresh: Vec<Generator>) -> Result<CoefficientGroup> {
        let mut generators = self.generators.clone();
        generators.extend(fresh);
        CoefficientGroup::new(self.characteristic, generators)
    }

    /// Embeds an element of a prefix group `smaller` into `self`.
    pub fn embed_from(&self, smaller: &CoefficientGroup, a: &KElement) -> Result<KElement> {
        smaller.check_len(a.len())?;
        if smaller.len() > self.len() || self.generators[..smaller.len()] != smaller.generators[..] {
            return Err(Error::GroupMismatch {
                left: self.len(),
                right: smaller.len(),
            });
        }
        let mut e = a.0.clone();
        e.resize(self.len(), BigInt::zero());
        Ok(KElement(e))
    }

    /// A generator name starting with `prefix` that clashes with nothing
    /// already present, including the square-root names of free generators.
    pub fn fresh_name(&self, prefix: &str) -> String {
        let taken = |s: &str| {
            self.generators
                .iter()
                .any(|g| g.name == s || format!("{SQRT_PREFIX}{}", g.name) == s)
        };
        let mut i = 1usize;
        loop {
            let candidate = format!("{prefix}{i}");
            if !taken(&candidate) {
                return candidate;
            }
            i += 1;
        }
    }

    /// Nonzero exponents by generator name.
    pub fn to_named(&self, a: &KElement) -> BTreeMap<String, BigInt> {
        self.generators
            .iter()
            .zip(&a.0)
            .filter(|(_, e)| !e.is_zero())
            .map(|(g, e)| (g.name.clone(), e.clone()))
            .collect()
    }

    pub fn from_named(&self, map: &BTreeMap<String, BigInt>) -> Result<KElement> {
        let mut e = vec![BigInt::zero(); self.len()];
        for (name, x) in map {
            let i = self
                .index_of(name)
                .ok_or_else(|| Error::UnknownGenerator(name.clone()))?;
            e[i] += x;
        }
        Ok(self.reduce(e))
    }
}

/// The coefficient group enlarged so that every element has a canonical
/// square root.
///
/// Odd-order generators already have one (`g^{(t+1)/2}`); each free
/// generator `g` is replaced by `sqrt_g`, so that `g` itself becomes
/// `sqrt_g²`. Generator positions are preserved.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SqrtExtension {
    base: CoefficientGroup,
    extended: CoefficientGroup,
}

impl SqrtExtension {
    pub fn new(base: CoefficientGroup) -> Result<Self> {
        let generators = base
            .generators()
            .iter()
            .map(|g| {
                if g.is_free() {
                    Generator::free(format!("{SQRT_PREFIX}{}", g.name))
                } else {
                    g.clone()
                }
            })
            .collect();
        let extended = CoefficientGroup::new(base.characteristic(), generators)?;
        // `sqrt_x` as a finite base name would be ambiguous in named form
        for g in base.generators() {
            if let Some(stripped) = g.name.strip_prefix(SQRT_PREFIX) {
                if base.index_of(stripped).is_some_and(|i| base.generators()[i].is_free()) {
                    return Err(Error::DuplicateGenerator(g.name.clone()));
                }
            }
        }
        Ok(SqrtExtension { base, extended })
    }

    pub fn base(&self) -> &CoefficientGroup {
        &self.base
    }

    pub fn extended(&self) -> &CoefficientGroup {
        &self.extended
    }

    pub fn embed(&self, a: &KElement) -> Result<KElement> {
        self.base.check_len(a.len())?;
        let e = self
            .base
            .generators()
            .iter()
            .zip(&a.0)
            .map(|(g, x)| if g.is_free() { x * 2 } else { x.clone() })
            .collect();
        self.extended.element(e)
    }

    /// The canonical square root, a homomorphism from the base group.
    pub fn sqrt(&self, a: &KElement) -> Result<KElement> {
        self.base.check_len(a.len())?;
        let e = self
            .base
            .generators()
            .iter()
            .zip(&a.0)
            .map(|(g, x)| {
                if g.is_free() {
                    x.clone()
                } else {
                    x * BigInt::from(g.order.div_ceil(2))
                }
            })
            .collect();
        self.extended.element(e)
    }

    /// The base element whose embedding is `a`, if there is one.
    pub fn project(&self, a: &KElement) -> Result<Option<KElement>> {
        self.extended.check_len(a.len())?;
        let mut e = Vec::with_capacity(a.len());
        for (g, x) in self.base.generators().iter().zip(&a.0) {
            if g.is_free() {
                if x.is_odd() {
                    return Ok(None);
                }
                e.push(x / 2);
            } else {
                e.push(x.clone());
            }
        }
        Ok(Some(self.base.element(e)?))
    }

    /// Named form of an extended element: a free generator's half-integral
    /// exponent `e/2` is written as `g^{⌊e/2⌋}·sqrt_g^{e mod 2}`.
    pub fn to_named(&self, a: &KElement) -> BTreeMap<String, BigInt> {
        let mut out = BTreeMap::new();
        for (g, x) in self.base.generators().iter().zip(&a.0) {
            if g.is_free() {
                let (q, r) = x.div_mod_floor(&BigInt::from(2));
                if !q.is_zero() {
                    out.insert(g.name.clone(), q);
                }
                if !r.is_zero() {
                    out.insert(format!("{SQRT_PREFIX}{}", g.name), r);
                }
            } else if !x.is_zero() {
                out.insert(g.name.clone(), x.clone());
            }
        }
        out
    }

    /// Parses a named form that may mix base names and `sqrt_` names.
    pub fn from_named(&self, map: &BTreeMap<String, BigInt>) -> Result<KElement> {
        let mut e = vec![BigInt::zero(); self.base.len()];
        for (name, x) in map {
            if let Some(i) = self.base.index_of(name) {
                let g = &self.base.generators()[i];
                e[i] += if g.is_free() { x * 2 } else { x.clone() };
            } else if let Some(i) = self.extended.index_of(name) {
                e[i] += x;
            } else {
                return Err(Error::UnknownGenerator(name.clone()));
            }
        }
        self.extended.element(e)
    }
}
