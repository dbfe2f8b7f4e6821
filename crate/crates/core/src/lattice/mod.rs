//! Exact integer linear algebra: Hermite and Smith normal forms,
//! sublattices of `ℤⁿ`, congruence kernels and finitely generated abelian
//! quotient groups.

mod group;
mod matrix;
mod normal_form;
mod sublattice;

pub use group::{quotient_invariants, FgAbelianGroup};
pub use matrix::{big_vec, dot, IntMatrix};
pub use normal_form::{
    hermite_in_place, hermite_normal_form, is_unimodular, pivot_columns, smith_normal_form,
    RowOps, SmithForm,
};
pub use sublattice::{kernel_with_congruences, left_kernel, solve_left, CongruenceBlock, Lattice};
