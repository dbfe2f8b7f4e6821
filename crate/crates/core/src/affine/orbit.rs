use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Coord, Point, QuantumSpace};
use crate::error::{Error, Result};
use crate::lattice::{quotient_invariants, IntMatrix, Lattice};
use crate::valuegroup::{CoefficientGroup, Generator, KElement};

/// Points `h.λ` in the fibre of `λ`, over a coefficient group enlarged by
/// the fresh generators used to build the characters `h`.
#[derive(Clone, Debug)]
pub struct OrbitSample {
    pub space: QuantumSpace,
    pub base: Point,
    pub points: Vec<Point>,
}

/// A primitive `d`-th root of unity among the powers of an existing
/// finite-order generator, if there is one.
///
/// Fails when `d` is even or divisible by the characteristic, since the
/// coefficient group holds no such roots.
pub fn root_of_unity(group: &CoefficientGroup, d: &BigInt) -> Result<Option<KElement>> {
    let order = d.to_u64().ok_or(Error::UnsupportedTorsion {
        order: u64::MAX,
        reason: "torsion order too large",
    })?;
    if order.is_even() {
        return Err(Error::UnsupportedTorsion {
            order,
            reason: "even-order roots of unity are not available in an odd-torsion group",
        });
    }
    let p = group.characteristic();
    if p != 0 && order % p == 0 {
        return Err(Error::UnsupportedTorsion {
            order,
            reason: "the characteristic divides the order",
        });
    }
    for (i, g) in group.generators().iter().enumerate() {
        if !g.is_free() && g.order % order == 0 {
            let e = BigInt::from(g.order / order);
            return Ok(Some(group.pow(&group.generator(i), &e)?));
        }
    }
    Ok(None)
}

impl QuantumSpace {
    /// `count` points of the fibre through `λ`, built from characters that
    /// kill the radical of its stratum. The first point uses every
    /// generator once; the rest are drawn from a seeded generator.
    pub fn orbit_sample(&self, lambda: &Point, count: usize, seed: u64) -> Result<OrbitSample> {
        self.check_point(lambda)?;
        let n = self.n();
        let w = lambda.stratum();
        let outside = w.complement();
        if outside.is_empty() {
            return Ok(OrbitSample {
                space: self.clone(),
                base: lambda.clone(),
                points: vec![lambda.clone()],
            });
        }
        let quotient = quotient_invariants(&Lattice::coordinate(n, w.members()), &self.radical(&w)?)?;

        // One character value per invariant factor; fresh generators are
        // appended in factor order.
        enum Source {
            Existing(KElement),
            Fresh(usize),
        }
        let mut fresh: Vec<Generator> = Vec::new();
        let mut sources = Vec::new();
        let base_group = self.bichar().group();
        for d in quotient.factor_orders() {
            let taken = base_group.extend(fresh.clone())?;
            if d.is_zero() {
                sources.push(Source::Fresh(fresh.len()));
                fresh.push(Generator::free(taken.fresh_name("orbit_a")));
            } else if let Some(root) = root_of_unity(self.scalars(), &d)? {
                sources.push(Source::Existing(root));
            } else {
                let order = d.to_u64().expect("checked by root_of_unity");
                sources.push(Source::Fresh(fresh.len()));
                fresh.push(Generator::new(taken.fresh_name("orbit_z"), order));
            }
        }
        let space = self.with_fresh_generators(fresh)?;
        let k = space.scalars();
        let offset = base_group.len();
        let ext = space.cocycle().ext();
        let chi: Vec<KElement> = sources
            .into_iter()
            .map(|s| match s {
                Source::Existing(v) => k.embed_from(self.scalars(), &v),
                Source::Fresh(i) => ext.embed(&ext.base().generator(offset + i)),
            })
            .collect::<Result<_>>()?;
        let orders = quotient.factor_orders();
        let base = space.embed_point(self, lambda)?;

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut points = Vec::with_capacity(count);
        for s in 0..count {
            let exps: Vec<BigInt> = orders
                .iter()
                .map(|d| match (s, d.to_i64().unwrap_or(0)) {
                    (0, _) => BigInt::from(1),
                    (_, 0) => BigInt::from(rng.gen_range(-3i64..=3)),
                    (_, d) => BigInt::from(rng.gen_range(0..d)),
                })
                .collect();
            points.push(twist(&space, &base, &outside, quotient.presentation_map(), &chi, &exps)?);
        }
        Ok(OrbitSample { space, base, points })
    }
}

/// `h.λ` for the character `h(ε_j) = ∏_i χ_i^{e_i P_{j,i}}`, which is
/// trivial on the radical because `P` maps it into the torsion relations.
fn twist(
    space: &QuantumSpace,
    base: &Point,
    outside: &[usize],
    presentation: &IntMatrix,
    chi: &[KElement],
    exps: &[BigInt],
) -> Result<Point> {
    let k = space.scalars();
    let mut coords = base.coords().to_vec();
    for (pos, &j) in outside.iter().enumerate() {
        let powers: Vec<BigInt> = presentation.row(pos).iter().zip(exps).map(|(p, e)| p * e).collect();
        let h = k.product_of_powers(chi, &powers)?;
        let v = base.value(j).expect("j lies outside the stratum");
        coords[j] = Coord::Unit(k.mul(v, &h)?);
    }
    Ok(Point::new(coords))
}
