#![allow(dead_code)]

use std::path::PathBuf;

use num_bigint::BigInt;
use num_integer::Integer;
use qstrata::affine::{Coord, Point, QuantumSpace};
use qstrata::bichar::BicharMatrix;
use qstrata::lattice::IntMatrix;
use qstrata::toric::{GBicharacter, GradingData};
use qstrata::valuegroup::{CoefficientGroup, Generator, KElement};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const ORDERS: [u64; 4] = [0, 3, 5, 7];

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

/// `count` parameter generators with random orders, followed by `extra`
/// free generators named `l1, l2, …`.
pub fn random_group(rng: &mut ChaCha8Rng, count: usize, extra: usize) -> CoefficientGroup {
    let mut gens: Vec<Generator> = (0..count)
        .map(|i| Generator::new(format!("g{i}"), *ORDERS.choose(rng).unwrap()))
        .collect();
    gens.extend((1..=extra).map(|i| Generator::free(format!("l{i}"))));
    CoefficientGroup::new(0, gens).unwrap()
}

/// Random antisymmetric integer matrix with entries in `[-bound, bound]`.
pub fn random_antisymmetric(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> IntMatrix {
    let mut m = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let x = rng.gen_range(-bound..=bound);
            m[(i, j)] = BigInt::from(x);
            m[(j, i)] = BigInt::from(-x);
        }
    }
    m
}

/// Random parameters on the first `active` generators; the rest are zero.
pub fn random_bichar(rng: &mut ChaCha8Rng, n: usize, group: CoefficientGroup, active: usize) -> BicharMatrix {
    let matrices = (0..group.len())
        .map(|k| {
            if k < active {
                random_antisymmetric(rng, n, 3)
            } else {
                IntMatrix::zeros(n, n)
            }
        })
        .collect();
    BicharMatrix::new(n, group, matrices).unwrap()
}

/// A point with `λ_i = l_i^{e_i}`, zero where `zero[i]`; `l_i` is the base
/// generator at `offset + i`.
pub fn l_point(space: &QuantumSpace, offset: usize, exps: &[i64], zero: &[bool]) -> Point {
    let ext = space.cocycle().ext();
    let coords = exps
        .iter()
        .zip(zero)
        .enumerate()
        .map(|(i, (&e, &z))| {
            if z {
                Coord::Zero
            } else {
                let base = ext.base();
                let g = base.pow(&base.generator(offset + i), &BigInt::from(e)).unwrap();
                Coord::Unit(ext.embed(&g).unwrap())
            }
        })
        .collect();
    Point::new(coords)
}

/// A random toric instance: `G = ℤᵐ/R` in scrambled coordinates, a
/// well-defined bicharacter, and characters of `G` for building points.
pub struct ToricInstance {
    pub grading: GradingData,
    /// Parameter matrices in scrambled coordinates, one per bicharacter
    /// generator (before the point generators).
    pub c_matrices: Vec<IntMatrix>,
    pub group: CoefficientGroup,
    /// Orders of `G`'s cyclic coordinates before scrambling (0 = free).
    pub torsion: Vec<u64>,
    pub u_inv: Vec<Vec<i64>>,
    pub m: usize,
    pub n: usize,
    /// Index of the first point generator `u1` in `group`.
    pub point_offset: usize,
}

pub const POINT_ROOT_ORDER: u64 = 45;

/// Bicharacter generators with the given orders, then free `u1..um` and
/// `z` of order 45 used only by points.
pub fn toric_group(orders: &[u64], m: usize) -> CoefficientGroup {
    let mut gens: Vec<Generator> = orders
        .iter()
        .enumerate()
        .map(|(i, &o)| Generator::new(format!("g{i}"), o))
        .collect();
    gens.extend((1..=m).map(|i| Generator::free(format!("u{i}"))));
    gens.push(Generator::new("z", POINT_ROOT_ORDER));
    CoefficientGroup::new(0, gens).unwrap()
}

fn unimodular(rng: &mut ChaCha8Rng, m: usize) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let mut u: Vec<Vec<i64>> = (0..m).map(|i| (0..m).map(|j| i64::from(i == j)).collect()).collect();
    let mut inv = u.clone();
    if m < 2 {
        return (u, inv);
    }
    for _ in 0..m + 1 {
        let a = rng.gen_range(0..m);
        let mut b = rng.gen_range(0..m);
        while b == a {
            b = rng.gen_range(0..m);
        }
        let f = *[-1i64, 1, 2].choose(rng).unwrap();
        // row_a += f·row_b on U, so column_b −= f·column_a on U⁻¹
        let source = u[b].clone();
        for (x, y) in u[a].iter_mut().zip(&source) {
            *x += f * y;
        }
        for row in inv.iter_mut() {
            row[b] -= f * row[a];
        }
    }
    (u, inv)
}

fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Constraint step for `C[i][j]` of a generator of order `t` when
/// coordinate `i` has order `d`: `d·C[i][j] ≡ 0 (mod t)`.
fn step(t: u64, d: u64) -> Option<u64> {
    match (t, d) {
        (_, 0) => Some(1),
        (0, _) => None,
        (t, d) => Some(t / t.gcd(&d)),
    }
}

pub fn random_toric_with(
    rng: &mut ChaCha8Rng,
    m: usize,
    n: usize,
    orders: &[u64],
    shared: bool,
) -> ToricInstance {
    let torsion: Vec<u64> = (0..m)
        .map(|_| if rng.gen_bool(0.6) { 0 } else { *[3u64, 5, 9, 15].choose(rng).unwrap() })
        .collect();
    let (u, u_inv) = unimodular(rng, m);
    let group = toric_group(orders, m);
    let mut c_matrices = Vec::new();
    for &t in orders {
        if shared && !c_matrices.is_empty() {
            let first: &IntMatrix = &c_matrices[0];
            c_matrices.push(first.clone());
            continue;
        }
        let mut c = vec![vec![0i64; m]; m];
        for i in 0..m {
            for j in i + 1..m {
                let x = match (step(t, torsion[i]), step(t, torsion[j])) {
                    (Some(a), Some(b)) => lcm(a, b) as i64 * rng.gen_range(-2..=2),
                    _ => 0,
                };
                c[i][j] = x;
                c[j][i] = -x;
            }
        }
        // C' = U⁻¹ C U⁻ᵀ
        let mut out = IntMatrix::zeros(m, m);
        for a in 0..m {
            for b in 0..m {
                let mut acc = 0i64;
                for i in 0..m {
                    for j in 0..m {
                        acc += u_inv[a][i] * c[i][j] * u_inv[b][j];
                    }
                }
                out[(a, b)] = BigInt::from(acc);
            }
        }
        c_matrices.push(out);
    }
    let relations: Vec<Vec<BigInt>> = torsion
        .iter()
        .enumerate()
        .filter(|(_, &d)| d != 0)
        .map(|(i, &d)| (0..m).map(|j| BigInt::from(d as i64 * u[i][j])).collect())
        .collect();
    let degrees: Vec<Vec<BigInt>> = (0..n)
        .map(|_| (0..m).map(|_| BigInt::from(rng.gen_range(-2i64..=2))).collect())
        .collect();
    let grading = GradingData::new(m, relations, degrees).unwrap();
    ToricInstance {
        grading,
        c_matrices,
        point_offset: orders.len(),
        group,
        torsion,
        u_inv,
        m,
        n,
    }
}

pub fn random_toric(rng: &mut ChaCha8Rng) -> ToricInstance {
    let m = rng.gen_range(1..=5);
    let n = rng.gen_range(1..=5);
    let count = rng.gen_range(1..=3);
    let orders: Vec<u64> = (0..count).map(|_| *ORDERS.choose(rng).unwrap()).collect();
    random_toric_with(rng, m, n, &orders, false)
}

impl ToricInstance {
    /// The bicharacter with parameter matrices for the first generators
    /// and zero for the point generators.
    pub fn bicharacter(&self, matrices: &[IntMatrix]) -> GBicharacter {
        let mut all = matrices.to_vec();
        all.resize(self.group.len(), IntMatrix::zeros(self.m, self.m));
        GBicharacter::new(self.group.clone(), all).unwrap()
    }

    pub fn c(&self) -> GBicharacter {
        self.bicharacter(&self.c_matrices)
    }

    /// Exponents of a random character of `G` on its cyclic coordinates:
    /// a `u_i` power on free coordinates and a `d`-th root of unity on
    /// torsion coordinates.
    pub fn random_character(&self, rng: &mut ChaCha8Rng) -> Vec<KElement> {
        let k = &self.group;
        (0..self.m)
            .map(|i| match self.torsion[i] {
                0 => {
                    let e = rng.gen_range(-2i64..=2);
                    k.pow(&k.generator(self.point_offset + i), &BigInt::from(e)).unwrap()
                }
                d => {
                    let e = (POINT_ROOT_ORDER / d) as i64 * rng.gen_range(0..d as i64);
                    k.pow(&k.generator(self.point_offset + self.m), &BigInt::from(e)).unwrap()
                }
            })
            .collect()
    }

    /// The point `λ_j = χ(δ_j)` off the stratum, zero on it, with `χ`
    /// given on the unscrambled cyclic coordinates.
    pub fn point(&self, space: &QuantumSpace, chi: &[KElement], zero: &[bool]) -> Point {
        let k = &self.group;
        // value on scrambled basis vector e_a is χ(e_a U⁻¹)
        let scrambled: Vec<KElement> = (0..self.m)
            .map(|a| {
                let exps: Vec<BigInt> = self.u_inv[a].iter().map(|&x| BigInt::from(x)).collect();
                k.product_of_powers(chi, &exps).unwrap()
            })
            .collect();
        let rho = self.grading.rho();
        let ext = space.cocycle().ext();
        let coords = (0..self.n)
            .map(|j| {
                if zero[j] {
                    return Coord::Zero;
                }
                let v = k.product_of_powers(&scrambled, &rho.column(j)).unwrap();
                Coord::Unit(ext.embed(&v).unwrap())
            })
            .collect();
        Point::new(coords)
    }
}

pub fn mask_bits(n: usize, mask: u64) -> Vec<bool> {
    (0..n).map(|i| mask >> i & 1 == 1).collect()
}
