//! Hermite and Smith normal forms over the integers.
//!
//! The Hermite routine is written against [`RowOps`] so that callers can
//! replay every elementary row operation on companion data: a transform
//! matrix when solving linear systems, or multiplicative scalars when
//! reducing binomial ideals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// Receiver for the elementary row operations performed during reduction.
pub trait RowOps {
    fn swap(&mut self, a: usize, b: usize);
    /// `row[target] += factor * row[source]`
    fn add_multiple(&mut self, target: usize, source: usize, factor: &BigInt);
    fn negate(&mut self, row: usize);
}

impl RowOps for () {
    fn swap(&mut self, _: usize, _: usize) {}
    fn add_multiple(&mut self, _: usize, _: usize, _: &BigInt) {}
    fn negate(&mut self, _: usize) {}
}

impl RowOps for IntMatrix {
    fn swap(&mut self, a: usize, b: usize) {
        self.swap_rows(a, b);
    }
    fn add_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        self.add_row_multiple(target, source, factor);
    }
    fn negate(&mut self, row: usize) {
        self.negate_row(row);
    }
}

struct Both<'a, C: RowOps> {
    m: &'a mut IntMatrix,
    companion: &'a mut C,
}

impl<C: RowOps> Both<'_, C> {
    fn swap(&mut self, a: usize, b: usize) {
        if a != b {
            self.m.swap_rows(a, b);
            self.companion.swap(a, b);
        }
    }
    fn add_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if !factor.is_zero() {
            self.m.add_row_multiple(target, source, factor);
            self.companion.add_multiple(target, source, factor);
        }
    }
    fn negate(&mut self, row: usize) {
        self.m.negate_row(row);
        self.companion.negate(row);
    }
}

/// Reduces `m` in place to row-style Hermite normal form and returns its rank.
///
/// On return the first `rank` rows have strictly increasing pivot columns,
/// positive pivots, and entries above each pivot in `[0, pivot)`; the
/// remaining rows are zero.
pub fn hermite_in_place<C: RowOps>(m: &mut IntMatrix, companion: &mut C) -> usize {
    let rows = m.rows();
    let cols = m.cols();
    let mut ops = Both { m, companion };
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        loop {
            let pivot = (rank..rows)
                .filter(|&r| !ops.m[(r, col)].is_zero())
                .min_by(|&a, &b| ops.m[(a, col)].abs().cmp(&ops.m[(b, col)].abs()));
            let Some(pivot) = pivot else { break };
            ops.swap(rank, pivot);
            let mut clean = true;
            for r in rank + 1..rows {
                if ops.m[(r, col)].is_zero() {
                    continue;
                }
                let q = ops.m[(r, col)].div_floor(&ops.m[(rank, col)]);
                ops.add_multiple(r, rank, &-q);
                if !ops.m[(r, col)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if ops.m[(rank, col)].is_zero() {
            continue;
        }
        if ops.m[(rank, col)].is_negative() {
            ops.negate(rank);
        }
        for r in 0..rank {
            let q = ops.m[(r, col)].div_floor(&ops.m[(rank, col)]);
            ops.add_multiple(r, rank, &-q);
        }
        rank += 1;
    }
    rank
}

/// Hermite normal form of the row space of `m`, zero rows dropped.
pub fn hermite_normal_form(m: &IntMatrix) -> IntMatrix {
    let mut h = m.clone();
    let rank = hermite_in_place(&mut h, &mut ());
    h.truncate_rows(rank);
    h
}

/// Pivot column of each row of a matrix already in Hermite normal form.
pub fn pivot_columns(h: &IntMatrix) -> Vec<usize> {
    h.row_iter()
        .map(|row| {
            row.iter()
                .position(|x| !x.is_zero())
                .expect("Hermite basis rows are nonzero")
        })
        .collect()
}

/// Result of [`smith_normal_form`]: `u · m · v = d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries of `d`, including trailing zeros.
    pub fn invariants(&self) -> Vec<BigInt> {
        self.d.diagonal()
    }

    pub fn rank(&self) -> usize {
        self.invariants().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Smith normal form with unimodular transforms.
///
/// The diagonal of `d` is nonnegative and forms a divisor chain, with all
/// zero entries last.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let rows = m.rows();
    let cols = m.cols();
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for r in t..rows {
                for c in t..cols {
                    let x = &d[(r, c)];
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(br, bc)| x.abs() < d[(br, bc)].abs()) {
                        best = Some((r, c));
                    }
                }
            }
            let Some((br, bc)) = best else {
                return finish(u, d, v);
            };
            d.swap_rows(t, br);
            u.swap_rows(t, br);
            d.swap_cols(t, bc);
            v.swap_cols(t, bc);

            let mut clean = true;
            for r in t + 1..rows {
                if d[(r, t)].is_zero() {
                    continue;
                }
                let q = -d[(r, t)].div_floor(&d[(t, t)]);
                d.add_row_multiple(r, t, &q);
                u.add_row_multiple(r, t, &q);
                clean &= d[(r, t)].is_zero();
            }
            for c in t + 1..cols {
                if d[(t, c)].is_zero() {
                    continue;
                }
                let q = -d[(t, c)].div_floor(&d[(t, t)]);
                d.add_col_multiple(c, t, &q);
                v.add_col_multiple(c, t, &q);
                clean &= d[(t, c)].is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..rows)
                .find(|&r| (t + 1..cols).any(|c| !d[(r, c)].is_multiple_of(&d[(t, t)])));
            match offender {
                Some(r) => {
                    d.add_row_multiple(t, r, &BigInt::one());
                    u.add_row_multiple(t, r, &BigInt::one());
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    finish(u, d, v)
}

fn finish(u: IntMatrix, d: IntMatrix, v: IntMatrix) -> SmithForm {
    SmithForm { u, d, v }
}

/// True if the square matrix `m` has determinant ±1.
pub fn is_unimodular(m: &IntMatrix) -> bool {
    if m.rows() != m.cols() {
        return false;
    }
    hermite_normal_form(m) == IntMatrix::identity(m.rows())
}
