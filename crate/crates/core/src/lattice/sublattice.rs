use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::matrix::IntMatrix;
use super::normal_form::{hermite_in_place, hermite_normal_form, pivot_columns};
use crate::error::{Error, Result};

/// A subgroup of `ℤⁿ`, stored by the Hermite normal form of its basis.
///
/// Two lattices with the same row space compare equal, whatever
/// generating set they were built from.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    ambient: usize,
    basis: IntMatrix,
}

impl Lattice {
    pub fn zero(ambient: usize) -> Self {
        Lattice {
            ambient,
            basis: IntMatrix::zeros(0, ambient),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Lattice {
            ambient,
            basis: IntMatrix::identity(ambient),
        }
    }

    /// `{α ∈ ℤⁿ : α_i = 0 for i in vanishing}`.
    pub fn coordinate(ambient: usize, vanishing: &[usize]) -> Self {
        let rows = (0..ambient)
            .filter(|i| !vanishing.contains(i))
            .map(|i| {
                let mut r = vec![BigInt::zero(); ambient];
                r[i] = BigInt::one();
                r
            })
            .collect();
        Lattice {
            ambient,
            basis: IntMatrix::from_rows(ambient, rows).expect("unit rows"),
        }
    }

    /// Lattice spanned by the rows of `generators`.
    pub fn from_generators(generators: &IntMatrix) -> Self {
        Lattice {
            ambient: generators.cols(),
            basis: hermite_normal_form(generators),
        }
    }

    pub fn from_rows(ambient: usize, rows: Vec<Vec<BigInt>>) -> Result<Self> {
        Ok(Self::from_generators(&IntMatrix::from_rows(ambient, rows)?))
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    /// Canonical (Hermite) basis, one row per generator.
    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn basis_rows(&self) -> impl Iterator<Item = &[BigInt]> + '_ {
        self.basis.row_iter()
    }

    fn check_len(&self, len: usize, context: &'static str) -> Result<()> {
        if len != self.ambient {
            return Err(Error::DimensionMismatch {
                context,
                expected: self.ambient,
                found: len,
            });
        }
        Ok(())
    }

    /// Coefficients of `v` with respect to the canonical basis, if `v` lies
    /// in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        self.check_len(v.len(), "lattice membership")?;
        let mut rest = v.to_vec();
        let pivots = pivot_columns(&self.basis);
        let mut coefs = Vec::with_capacity(self.rank());
        let mut col = 0;
        for (row, &p) in self.basis.row_iter().zip(&pivots) {
            if rest[col..p].iter().any(|x| !x.is_zero()) {
                return Ok(None);
            }
            let (q, r) = rest[p].div_rem(&row[p]);
            if !r.is_zero() {
                return Ok(None);
            }
            for (x, b) in rest.iter_mut().zip(row) {
                *x -= &q * b;
            }
            coefs.push(q);
            col = p + 1;
        }
        if rest.iter().any(|x| !x.is_zero()) {
            return Ok(None);
        }
        Ok(Some(coefs))
    }

    pub fn contains(&self, v: &[BigInt]) -> Result<bool> {
        Ok(self.coordinates(v)?.is_some())
    }

    pub fn is_subset_of(&self, other: &Lattice) -> Result<bool> {
        other.check_len(self.ambient, "lattice inclusion")?;
        for row in self.basis_rows() {
            if !other.contains(row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Lattice) -> Result<Lattice> {
        self.check_len(other.ambient, "lattice sum")?;
        Ok(Self::from_generators(&self.basis.vstack(&other.basis)?))
    }

    pub fn intersect(&self, other: &Lattice) -> Result<Lattice> {
        self.check_len(other.ambient, "lattice intersection")?;
        // a·B1 = b·B2  <=>  (a, -b) in the left kernel of [B1; B2]
        let stacked = self.basis.vstack(&other.basis)?;
        let kernel = left_kernel(&stacked);
        let r = self.rank();
        let gens: Vec<Vec<BigInt>> = kernel
            .basis_rows()
            .map(|k| self.basis.vec_mul(&k[..r]).expect("sized"))
            .collect();
        Lattice::from_rows(self.ambient, gens)
    }

    /// `{α : ρ·α ∈ target}` where `rho` is an `m × n` matrix and `target ⊆ ℤᵐ`.
    pub fn preimage(rho: &IntMatrix, target: &Lattice) -> Result<Lattice> {
        target.check_len(rho.rows(), "lattice preimage")?;
        let n = rho.cols();
        // rows ρ(ε_i) followed by the target basis; left kernel (a, y) has ρ·a = -y·B
        let stacked = rho.transpose().vstack(&target.basis)?;
        let kernel = left_kernel(&stacked);
        let gens: Vec<Vec<BigInt>> = kernel.basis_rows().map(|k| k[..n].to_vec()).collect();
        Lattice::from_rows(n, gens)
    }

    /// `ρ(self)` for an `m × n` matrix `rho`.
    pub fn image(&self, rho: &IntMatrix) -> Result<Lattice> {
        self.check_len(rho.cols(), "lattice image")?;
        let gens = self
            .basis_rows()
            .map(|b| rho.mul_vec(b))
            .collect::<Result<Vec<_>>>()?;
        Lattice::from_rows(rho.rows(), gens)
    }
}

/// `{y : yᵀ·m = 0}` as a lattice in `ℤ^{rows(m)}`.
pub fn left_kernel(m: &IntMatrix) -> Lattice {
    let rows = m.rows();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let rank = hermite_in_place(&mut h, &mut u);
    let gens: Vec<Vec<BigInt>> = (rank..rows).map(|r| u.row(r).to_vec()).collect();
    Lattice::from_rows(rows, gens).expect("transform rows have uniform length")
}

/// Integer solution `x` of `xᵀ·generators = target`, if one exists.
pub fn solve_left(generators: &IntMatrix, target: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if target.len() != generators.cols() {
        return Err(Error::DimensionMismatch {
            context: "integer solve",
            expected: generators.cols(),
            found: target.len(),
        });
    }
    let mut h = generators.clone();
    let mut u = IntMatrix::identity(generators.rows());
    let rank = hermite_in_place(&mut h, &mut u);
    h.truncate_rows(rank);
    let basis = Lattice {
        ambient: generators.cols(),
        basis: h,
    };
    let Some(coefs) = basis.coordinates(target)? else {
        return Ok(None);
    };
    let mut x = vec![BigInt::zero(); generators.rows()];
    for (c, r) in coefs.iter().zip(0..rank) {
        for (xi, ui) in x.iter_mut().zip(u.row(r)) {
            *xi += c * ui;
        }
    }
    Ok(Some(x))
}

/// One block of congruence conditions `matrix · α ≡ 0 (mod modulus)`.
/// A modulus of zero asks for exact equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceBlock {
    pub matrix: IntMatrix,
    pub modulus: u64,
}

impl CongruenceBlock {
    pub fn new(matrix: IntMatrix, modulus: u64) -> Self {
        CongruenceBlock { matrix, modulus }
    }
}

/// All `α ∈ restrict_to` satisfying every block's congruences.
pub fn kernel_with_congruences(
    blocks: &[CongruenceBlock],
    restrict_to: &Lattice,
) -> Result<Lattice> {
    let n = restrict_to.ambient;
    for b in blocks {
        if b.matrix.cols() != n {
            return Err(Error::DimensionMismatch {
                context: "congruence kernel",
                expected: n,
                found: b.matrix.cols(),
            });
        }
    }
    let r = restrict_to.rank();
    if r == 0 {
        return Ok(Lattice::zero(n));
    }
    let constraints: usize = blocks.iter().map(|b| b.matrix.rows()).sum();
    let moduli_rows: usize = blocks
        .iter()
        .filter(|b| b.modulus != 0)
        .map(|b| b.matrix.rows())
        .sum();

    // Unknowns: α = y·B (y ∈ ℤʳ) and one slack per modular constraint row.
    let mut system = IntMatrix::zeros(r + moduli_rows, constraints);
    let mut col = 0;
    let mut slack = r;
    for b in blocks {
        for row in b.matrix.row_iter() {
            for (i, basis_row) in restrict_to.basis_rows().enumerate() {
                system[(i, col)] = super::matrix::dot(basis_row, row);
            }
            if b.modulus != 0 {
                system[(slack, col)] = BigInt::from(b.modulus);
                slack += 1;
            }
            col += 1;
        }
    }
    let kernel = left_kernel(&system);
    let gens = kernel
        .basis_rows()
        .map(|k| restrict_to.basis.vec_mul(&k[..r]))
        .collect::<Result<Vec<_>>>()?;
    Lattice::from_rows(n, gens)
}
