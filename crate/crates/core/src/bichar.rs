//! The multiplicatively antisymmetric parameter matrix, its bicharacter
//! `σ`, per-stratum radicals and the alternating square-root cocycle.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{kernel_with_congruences, CongruenceBlock, IntMatrix, Lattice};
use crate::stratum::Stratum;
use crate::valuegroup::{CoefficientGroup, Generator, KElement, SqrtExtension};

/// Parameters `q_ij = ∏_k g_k^{Q⁽ᵏ⁾_ij}`, one integer matrix per
/// generator of the coefficient group.
///
/// `σ(α, β) = ∏_k g_k^{αᵀ Q⁽ᵏ⁾ β}` is an alternating bicharacter on `ℤⁿ`;
/// the relation `x_i x_j = q_ij x_j x_i` holds in the quantized algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BicharMatrix {
    n: usize,
    group: CoefficientGroup,
    matrices: Vec<IntMatrix>,
}

fn reduce_entry(x: &BigInt, order: u64) -> BigInt {
    if order == 0 {
        x.clone()
    } else {
        x.mod_floor(&BigInt::from(order))
    }
}

fn congruent(x: &BigInt, order: u64) -> bool {
    reduce_entry(x, order).is_zero()
}

/// Checks `M + Mᵀ ≡ 0` and `diag M ≡ 0` modulo `order` (exactly when 0).
pub(crate) fn check_alternating(m: &IntMatrix, order: u64, name: &str) -> Result<()> {
    let n = m.rows();
    if m.cols() != n {
        return Err(Error::DimensionMismatch {
            context: "parameter matrix",
            expected: n,
            found: m.cols(),
        });
    }
    for i in 0..n {
        for j in i..n {
            let s = &m[(i, j)] + &m[(j, i)];
            let bad = if i == j {
                !congruent(&m[(i, i)], order)
            } else {
                !congruent(&s, order)
            };
            if bad {
                return Err(Error::NotAntisymmetric {
                    generator: name.to_string(),
                    i,
                    j,
                });
            }
        }
    }
    Ok(())
}

impl BicharMatrix {
    pub fn new(n: usize, group: CoefficientGroup, matrices: Vec<IntMatrix>) -> Result<Self> {
        if matrices.len() != group.len() {
            return Err(Error::DimensionMismatch {
                context: "one parameter matrix per generator",
                expected: group.len(),
                found: matrices.len(),
            });
        }
        let mut reduced = Vec::with_capacity(matrices.len());
        for (m, g) in matrices.into_iter().zip(group.generators()) {
            if m.rows() != n {
                return Err(Error::DimensionMismatch {
                    context: "parameter matrix size",
                    expected: n,
                    found: m.rows(),
                });
            }
            check_alternating(&m, g.order, &g.name)?;
            let mut r = m;
            for i in 0..n {
                for j in 0..n {
                    r[(i, j)] = reduce_entry(&r[(i, j)], g.order);
                }
            }
            reduced.push(r);
        }
        Ok(BicharMatrix {
            n,
            group,
            matrices: reduced,
        })
    }

    /// Builds the matrix from its entries `q_ij`.
    pub fn from_entries(group: CoefficientGroup, entries: &[Vec<KElement>]) -> Result<Self> {
        let n = entries.len();
        let mut matrices = vec![IntMatrix::zeros(n, n); group.len()];
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Ragged);
            }
            for (j, q) in row.iter().enumerate() {
                if q.len() != group.len() {
                    return Err(Error::GroupMismatch {
                        left: group.len(),
                        right: q.len(),
                    });
                }
                for (k, e) in q.exponents().iter().enumerate() {
                    matrices[k][(i, j)] = e.clone();
                }
            }
        }
        Self::new(n, group, matrices)
    }

    /// The single-parameter matrix: `q_ij = g` for `i < j`.
    pub fn single_parameter(group: CoefficientGroup, generator: usize, n: usize) -> Result<Self> {
        let mut matrices = vec![IntMatrix::zeros(n, n); group.len()];
        for i in 0..n {
            for j in i + 1..n {
                matrices[generator][(i, j)] = BigInt::from(1);
                matrices[generator][(j, i)] = BigInt::from(-1);
            }
        }
        Self::new(n, group, matrices)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn group(&self) -> &CoefficientGroup {
        &self.group
    }

    pub fn matrices(&self) -> &[IntMatrix] {
        &self.matrices
    }

    pub fn entry(&self, i: usize, j: usize) -> KElement {
        let e = self.matrices.iter().map(|m| m[(i, j)].clone()).collect();
        self.group.element(e).expect("one exponent per generator")
    }

    fn check_vec(&self, v: &[BigInt]) -> Result<()> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch {
                context: "exponent vector",
                expected: self.n,
                found: v.len(),
            });
        }
        Ok(())
    }

    /// `σ(α, β) = ∏_{i,j} q_ij^{α_i β_j}`.
    pub fn sigma(&self, alpha: &[BigInt], beta: &[BigInt]) -> Result<KElement> {
        self.check_vec(alpha)?;
        self.check_vec(beta)?;
        let e = self
            .matrices
            .iter()
            .map(|m| m.bilinear(alpha, beta))
            .collect::<Result<Vec<_>>>()?;
        self.group.element(e)
    }

    /// `rad(σ_w)`: the `α ∈ Γ_w` with `σ(α, −) ≡ 1` on `Γ_w`.
    pub fn radical(&self, w: &Stratum) -> Result<RadicalLattice> {
        self.check_stratum(w)?;
        let outside = w.complement();
        let all: Vec<usize> = (0..self.n).collect();
        // σ(α, ε_j) has exponent (Qᵀ α)_j on each generator
        let blocks: Vec<CongruenceBlock> = self
            .matrices
            .iter()
            .zip(self.group.generators())
            .map(|(m, g)| CongruenceBlock::new(m.transpose().submatrix(&outside, &all), g.order))
            .collect();
        let lattice = kernel_with_congruences(&blocks, &Lattice::coordinate(self.n, w.members()))?;
        Ok(RadicalLattice {
            stratum: w.clone(),
            lattice,
        })
    }

    /// The same radical, computed on the restricted `w̄ × w̄` matrices and
    /// embedded back into `ℤⁿ`.
    pub fn radical_via_submatrix(&self, w: &Stratum) -> Result<RadicalLattice> {
        self.check_stratum(w)?;
        let outside = w.complement();
        let blocks: Vec<CongruenceBlock> = self
            .matrices
            .iter()
            .zip(self.group.generators())
            .map(|(m, g)| CongruenceBlock::new(m.submatrix(&outside, &outside).transpose(), g.order))
            .collect();
        let small = kernel_with_congruences(&blocks, &Lattice::full(outside.len()))?;
        let rows = small
            .basis_rows()
            .map(|r| {
                let mut v = vec![BigInt::zero(); self.n];
                for (&j, x) in outside.iter().zip(r) {
                    v[j] = x.clone();
                }
                v
            })
            .collect();
        Ok(RadicalLattice {
            stratum: w.clone(),
            lattice: Lattice::from_rows(self.n, rows)?,
        })
    }

    fn check_stratum(&self, w: &Stratum) -> Result<()> {
        if w.n() != self.n {
            return Err(Error::DimensionMismatch {
                context: "stratum size",
                expected: self.n,
                found: w.n(),
            });
        }
        Ok(())
    }

    /// `σ²`, i.e. the matrix with every `q_ij` squared.
    pub fn squared(&self) -> BicharMatrix {
        let two = BigInt::from(2);
        let matrices = self
            .matrices
            .iter()
            .map(|m| {
                let mut s = m.clone();
                for i in 0..self.n {
                    for j in 0..self.n {
                        s[(i, j)] = &s[(i, j)] * &two;
                    }
                }
                s
            })
            .collect();
        BicharMatrix::new(self.n, self.group.clone(), matrices).expect("squares stay antisymmetric")
    }

    /// The same parameters over a coefficient group with fresh generators
    /// appended.
    pub fn with_fresh_generators(&self, fresh: Vec<Generator>) -> Result<BicharMatrix> {
        let extra = fresh.len();
        let group = self.group.extend(fresh)?;
        let mut matrices = self.matrices.clone();
        matrices.extend(std::iter::repeat_n(IntMatrix::zeros(self.n, self.n), extra));
        BicharMatrix::new(self.n, group, matrices)
    }

    /// The canonical alternating bicharacter `c = s∘σ`, see [`Cocycle`].
    pub fn cocycle(&self) -> Result<Cocycle> {
        build_cocycle(self)
    }
}

/// `rad(σ_w) ⊆ Γ_w` together with its stratum.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RadicalLattice {
    pub stratum: Stratum,
    pub lattice: Lattice,
}

impl RadicalLattice {
    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }
}

/// The alternating bicharacter `c` with `c² = σ` on the square-root
/// extension of the coefficient group.
///
/// `c` is `σ` followed by the square-root homomorphism `s` of
/// [`SqrtExtension`]. Since `s` is injective, `c(α, β) = 1` exactly when
/// `σ(α, β) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cocycle {
    n: usize,
    ext: SqrtExtension,
    matrices: Vec<IntMatrix>,
}

pub fn build_cocycle(b: &BicharMatrix) -> Result<Cocycle> {
    let ext = SqrtExtension::new(b.group.clone())?;
    let matrices = b
        .matrices
        .iter()
        .zip(b.group.generators())
        .map(|(m, g)| {
            if g.is_free() {
                return m.clone();
            }
            let half = BigInt::from(g.order.div_ceil(2));
            let mut c = m.clone();
            for i in 0..b.n {
                for j in 0..b.n {
                    c[(i, j)] = reduce_entry(&(&c[(i, j)] * &half), g.order);
                }
            }
            c
        })
        .collect();
    Ok(Cocycle {
        n: b.n,
        ext,
        matrices,
    })
}

impl Cocycle {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ext(&self) -> &SqrtExtension {
        &self.ext
    }

    /// The extended group, where cocycle values and points live.
    pub fn scalars(&self) -> &CoefficientGroup {
        self.ext.extended()
    }

    pub fn matrices(&self) -> &[IntMatrix] {
        &self.matrices
    }

    pub fn entry(&self, i: usize, j: usize) -> KElement {
        let e = self.matrices.iter().map(|m| m[(i, j)].clone()).collect();
        self.scalars().element(e).expect("one exponent per generator")
    }

    pub fn eval(&self, alpha: &[BigInt], beta: &[BigInt]) -> Result<KElement> {
        for v in [alpha, beta] {
            if v.len() != self.n {
                return Err(Error::DimensionMismatch {
                    context: "exponent vector",
                    expected: self.n,
                    found: v.len(),
                });
            }
        }
        let e = self
            .matrices
            .iter()
            .map(|m| m.bilinear(alpha, beta))
            .collect::<Result<Vec<_>>>()?;
        self.scalars().element(e)
    }

    /// `n(β)` with `x₁^{β₁} ⋯ x_n^{β_n} = n(β)·x_β`, namely
    /// `∏_{i<j} c(ε_i, ε_j)^{β_i β_j}`.
    pub fn monomial_normalizer(&self, beta: &[BigInt]) -> Result<KElement> {
        if beta.len() != self.n {
            return Err(Error::DimensionMismatch {
                context: "exponent vector",
                expected: self.n,
                found: beta.len(),
            });
        }
        if let Some(i) = beta.iter().position(|x| x.is_negative()) {
            return Err(Error::NegativeExponent(i));
        }
        let e = self
            .matrices
            .iter()
            .map(|m| {
                let mut acc = BigInt::zero();
                for i in 0..self.n {
                    if beta[i].is_zero() {
                        continue;
                    }
                    for j in i + 1..self.n {
                        acc += &m[(i, j)] * &beta[i] * &beta[j];
                    }
                }
                acc
            })
            .collect();
        self.scalars().element(e)
    }
}
