use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::matrix::IntMatrix;
use super::normal_form::smith_normal_form;
use super::sublattice::Lattice;
use crate::error::{Error, Result};

/// A finitely generated abelian group `ℤʳ ⊕ ℤ/d₁ ⊕ … ⊕ ℤ/d_k` realized as a
/// quotient `ambient / sub` of lattices.
///
/// `presentation_map` sends the coordinates of an ambient vector (with
/// respect to the ambient basis) to invariant-factor coordinates: first
/// one column per torsion factor, then one per free factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FgAbelianGroup {
    ambient: Lattice,
    rank: usize,
    torsion_orders: Vec<BigInt>,
    presentation_map: IntMatrix,
}

impl FgAbelianGroup {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Orders `d₁ | d₂ | …` of the cyclic torsion factors, all `> 1`.
    pub fn torsion_orders(&self) -> &[BigInt] {
        &self.torsion_orders
    }

    pub fn presentation_map(&self) -> &IntMatrix {
        &self.presentation_map
    }

    pub fn ambient(&self) -> &Lattice {
        &self.ambient
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion_orders.is_empty()
    }

    /// Order of each invariant-factor coordinate; zero marks a free factor.
    pub fn factor_orders(&self) -> Vec<BigInt> {
        self.torsion_orders
            .iter()
            .cloned()
            .chain(std::iter::repeat_n(BigInt::zero(), self.rank))
            .collect()
    }

    /// Invariant-factor coordinates of an element of the ambient lattice,
    /// torsion coordinates reduced into `[0, d)`.
    pub fn coordinates(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        let coefs = self.ambient.coordinates(v)?.ok_or(Error::NotContained)?;
        let mut out = self.presentation_map.vec_mul(&coefs)?;
        for (x, d) in out.iter_mut().zip(&self.torsion_orders) {
            *x = x.mod_floor(d);
        }
        Ok(out)
    }
}

/// Invariants of `ambient / sub`.
pub fn quotient_invariants(ambient: &Lattice, sub: &Lattice) -> Result<FgAbelianGroup> {
    if ambient.ambient_rank() != sub.ambient_rank() {
        return Err(Error::DimensionMismatch {
            context: "quotient group",
            expected: ambient.ambient_rank(),
            found: sub.ambient_rank(),
        });
    }
    let a = ambient.rank();
    let rows = sub
        .basis_rows()
        .map(|row| ambient.coordinates(row)?.ok_or(Error::NotContained))
        .collect::<Result<Vec<_>>>()?;
    let relations = IntMatrix::from_rows(a, rows)?;
    let smith = smith_normal_form(&relations);
    let diag = smith.invariants();

    // Columns of V beyond the relation rank are free; diagonal entries equal
    // to one are trivial factors and get dropped.
    let mut torsion_cols = Vec::new();
    let mut torsion_orders = Vec::new();
    let mut free_cols = Vec::new();
    for c in 0..a {
        match diag.get(c) {
            Some(d) if d.is_one() => {}
            Some(d) if !d.is_zero() => {
                torsion_cols.push(c);
                torsion_orders.push(d.clone());
            }
            _ => free_cols.push(c),
        }
    }
    let keep: Vec<usize> = torsion_cols.iter().chain(&free_cols).copied().collect();
    let all_rows: Vec<usize> = (0..a).collect();
    Ok(FgAbelianGroup {
        ambient: ambient.clone(),
        rank: free_cols.len(),
        torsion_orders,
        presentation_map: smith.v.submatrix(&all_rows, &keep),
    })
}
