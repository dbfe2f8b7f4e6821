pub mod affine;
pub mod bichar;
pub mod cli;
pub mod error;
pub mod lattice;
pub mod stratum;
pub mod toric;
pub mod valuegroup;
