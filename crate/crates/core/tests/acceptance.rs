//! End-to-end acceptance checks, one line of output per criterion.

mod common;

use std::collections::{BTreeMap, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use common::*;
use num_bigint::BigInt;
use num_traits::Zero;
use qstrata::affine::{Binomial, Coord, IdealPresentation, LatticeCosetIdeal, Point, QuantumSpace};
use qstrata::bichar::{build_cocycle, BicharMatrix};
use qstrata::cli::{read_json, ProblemFile};
use qstrata::lattice::{IntMatrix, Lattice};
use qstrata::stratum::Stratum;
use qstrata::toric::{pullback, GBicharacter, Refiner, ToricSpace};
use qstrata::valuegroup::{CoefficientGroup, Generator, KElement, SqrtExtension};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn load_space(name: &str) -> QuantumSpace {
    let file: ProblemFile = read_json(&fixture(name)).unwrap();
    file.build().unwrap().space
}

/// A published generator `a·x^{plus} − b·x^{minus}` with named scalars, or
/// a bare variable.
enum Published {
    Var(usize),
    Bin {
        lead: &'static [(&'static str, i64)],
        plus: [i64; 3],
        trail: &'static [(&'static str, i64)],
        minus: [i64; 3],
    },
}

fn named(pairs: &[(&str, i64)]) -> BTreeMap<String, BigInt> {
    pairs.iter().map(|(k, v)| (k.to_string(), BigInt::from(*v))).collect()
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Divides through by the leading coefficient: `x^{plus} − (b/a)·x^{minus}`.
fn monic(ext: &SqrtExtension, p: &Published) -> Option<Binomial> {
    match p {
        Published::Var(_) => None,
        Published::Bin { lead, plus, trail, minus } => {
            let k = ext.extended();
            let a = ext.from_named(&named(lead)).unwrap();
            let b = ext.from_named(&named(trail)).unwrap();
            Some(Binomial {
                plus: big(plus),
                minus: big(minus),
                scalar: k.div(&b, &a).unwrap(),
            })
        }
    }
}

struct Row {
    present: [bool; 3],
    generators: Vec<Published>,
}

fn x_minus_l(i: usize) -> Published {
    const NAMES: [&[(&str, i64)]; 3] = [&[("l1", 1)], &[("l2", 1)], &[("l3", 1)]];
    let mut plus = [0; 3];
    plus[i] = 1;
    Published::Bin {
        lead: &[],
        plus,
        trail: NAMES[i],
        minus: [0; 3],
    }
}

fn x_cubed_minus_l_cubed(i: usize) -> Published {
    const NAMES: [&[(&str, i64)]; 3] = [&[("l1", 3)], &[("l2", 3)], &[("l3", 3)]];
    let mut plus = [0; 3];
    plus[i] = 3;
    Published::Bin {
        lead: &[],
        plus,
        trail: NAMES[i],
        minus: [0; 3],
    }
}

fn middle_binomial(p: &'static [(&'static str, i64)]) -> Published {
    Published::Bin {
        lead: &[("l2", 1)],
        plus: [1, 0, 1],
        trail: p,
        minus: [0, 1, 0],
    }
}

fn singles_and_pairs(root: bool) -> Vec<Row> {
    use Published::Var;
    let pair = |i: usize| if root { x_cubed_minus_l_cubed(i) } else { Var(usize::MAX) };
    let mut rows = vec![
        Row { present: [false, false, false], generators: vec![Var(0), Var(1), Var(2)] },
        Row { present: [true, false, false], generators: vec![x_minus_l(0), Var(1), Var(2)] },
        Row { present: [false, true, false], generators: vec![Var(0), x_minus_l(1), Var(2)] },
        Row { present: [false, false, true], generators: vec![Var(0), Var(1), x_minus_l(2)] },
        Row { present: [true, true, false], generators: vec![pair(0), pair(1), Var(2)] },
        Row { present: [true, false, true], generators: vec![pair(0), Var(1), pair(2)] },
        Row { present: [false, true, true], generators: vec![Var(0), pair(1), pair(2)] },
    ];
    // generic rows list only the variable
    for r in &mut rows {
        r.generators.retain(|g| !matches!(g, Var(usize::MAX)));
    }
    rows
}

fn golden_point(space: &QuantumSpace, present: [bool; 3]) -> Point {
    l_point(space, 1, &[1, 1, 1], &present.map(|p| !p))
}

fn published_variables(row: &Row) -> Vec<usize> {
    let mut v: Vec<usize> = row
        .generators
        .iter()
        .filter_map(|g| match g {
            Published::Var(i) => Some(*i),
            _ => None,
        })
        .collect();
    v.sort();
    v
}

fn criterion_generic_table() -> Outcome {
    let space = load_space("cubic_generic.json");
    let ext = space.cocycle().ext();
    let mut rows = singles_and_pairs(false);
    rows.push(Row {
        present: [true, true, true],
        generators: vec![middle_binomial(&[("sqrt_q", 1), ("l1", 1), ("l3", 1)])],
    });
    for row in &rows {
        let ideal = space.map_point(&golden_point(&space, row.present)).map_err(|e| e.to_string())?;
        ensure(ideal.variables == published_variables(row), || format!("variables differ for {:?}", row.present))?;
        let expected: Vec<Binomial> = row.generators.iter().filter_map(|g| monic(ext, g)).collect();
        ensure(ideal.binomials == expected, || {
            format!("binomials differ for {:?}: {:?} vs {:?}", row.present, ideal.binomials, expected)
        })?;
    }
    // the same dense row through the command-line interface
    let out = Command::new(env!("CARGO_BIN_EXE_qstrata"))
        .args(["map-point", "--problem"])
        .arg(fixture("cubic_generic.json"))
        .arg("--point")
        .arg(fixture("dense.json"))
        .output()
        .unwrap();
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let scalar = &doc["generators"]["binomials"][0]["scalar"];
    ensure(
        out.status.success() && *scalar == serde_json::json!({"l1": 1, "l2": -1, "l3": 1, "sqrt_q": 1}),
        || format!("command-line dense row: {doc}"),
    )?;
    Ok(format!("{} strata rows exact", rows.len()))
}

/// `n(β) = ∏_{i<j} p^{β_i β_j}` for the single-parameter matrix.
fn single_parameter_normalizer(k: &CoefficientGroup, p: &KElement, beta: &[BigInt]) -> KElement {
    let mut e = BigInt::zero();
    for i in 0..beta.len() {
        for j in i + 1..beta.len() {
            e += &beta[i] * &beta[j];
        }
    }
    k.pow(p, &e).unwrap()
}

fn published_shadow(
    space: &QuantumSpace,
    p: &KElement,
    w: &Stratum,
    gens: &[Published],
) -> LatticeCosetIdeal {
    let k = space.scalars();
    let ext = space.cocycle().ext();
    let pairs: Vec<(Vec<BigInt>, KElement)> = gens
        .iter()
        .filter_map(|g| monic(ext, g))
        .map(|b| {
            let chi = k
                .div(
                    &k.mul(&b.scalar, &single_parameter_normalizer(k, p, &b.minus)).unwrap(),
                    &single_parameter_normalizer(k, p, &b.plus),
                )
                .unwrap();
            (b.exponent(), chi)
        })
        .collect();
    LatticeCosetIdeal::from_pairs(k, w, &pairs).unwrap().unwrap()
}

fn criterion_root_of_unity_table() -> Outcome {
    let space = load_space("cubic_root_of_unity.json");
    let k = space.scalars();
    let p = k.element_i64(&[2, 0, 0, 0]).unwrap();
    let mut rows = singles_and_pairs(true);
    rows.push(Row {
        present: [true, true, true],
        generators: vec![
            x_cubed_minus_l_cubed(0),
            x_cubed_minus_l_cubed(1),
            x_cubed_minus_l_cubed(2),
            middle_binomial(&[("q", 2), ("l1", 1), ("l3", 1)]),
        ],
    });
    let mut redundant = 0;
    for row in &rows {
        let ideal = space.map_point(&golden_point(&space, row.present)).map_err(|e| e.to_string())?;
        ensure(ideal.variables == published_variables(row), || format!("variables differ for {:?}", row.present))?;
        let ours = ideal.shadow(space.cocycle()).map_err(|e| e.to_string())?;
        let theirs = published_shadow(&space, &p, &ideal.stratum, &row.generators);
        ensure(ours == theirs, || format!("ideals differ for {:?}: {ours:?} vs {theirs:?}", row.present))?;
        let listed = row.generators.iter().filter(|g| !matches!(g, Published::Var(_))).count();
        redundant += listed - ideal.binomials.len();
    }
    Ok(format!("{} strata rows equal as ideals ({redundant} redundant published generator)", rows.len()))
}

/// `σ(α, β)` straight from the matrices, reduced by generator order.
fn sigma_oracle(group: &CoefficientGroup, b: &BicharMatrix, alpha: &[i64], beta: &[i64]) -> Vec<i64> {
    b.matrices()
        .iter()
        .zip(group.generators())
        .map(|(m, g)| {
            let mut acc = 0i64;
            for i in 0..alpha.len() {
                for j in 0..beta.len() {
                    acc += alpha[i] * i64::try_from(&m[(i, j)]).unwrap() * beta[j];
                }
            }
            if g.order == 0 {
                acc
            } else {
                acc.rem_euclid(g.order as i64)
            }
        })
        .collect()
}

fn criterion_cocycle_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut implications = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=6);
        let count = rng.gen_range(1..=3);
        let group = random_group(&mut rng, count, 0);
        let b = random_bichar(&mut rng, n, group.clone(), count);
        let c = build_cocycle(&b).map_err(|e| e.to_string())?;
        let ext = c.ext();
        let k = c.scalars();
        let radical: Vec<Vec<BigInt>> = b
            .radical(&Stratum::empty(n))
            .map_err(|e| e.to_string())?
            .lattice
            .basis()
            .to_rows();
        for trial in 0..20 {
            let alpha: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
            let beta: Vec<i64> = match trial % 4 {
                // multiples of α and radical vectors make σ trivial
                0 => alpha.iter().map(|x| x * 2).collect(),
                1 if !radical.is_empty() => {
                    let r = &radical[rng.gen_range(0..radical.len())];
                    r.iter().map(|x| i64::try_from(x).unwrap() * rng.gen_range(-2..=2)).collect()
                }
                _ => (0..n).map(|_| rng.gen_range(-3..=3)).collect(),
            };
            let (a, bb) = (big(&alpha), big(&beta));
            let cab = c.eval(&a, &bb).unwrap();
            let cba = c.eval(&bb, &a).unwrap();
            let sigma = group.element_i64(&sigma_oracle(&group, &b, &alpha, &beta)).unwrap();
            ensure(k.is_one(&c.eval(&a, &a).unwrap()).unwrap(), || "c(α,α) ≠ 1".into())?;
            ensure(k.mul(&cab, &cab).unwrap() == ext.embed(&sigma).unwrap(), || "c² ≠ σ".into())?;
            ensure(k.is_one(&k.mul(&cab, &cba).unwrap()).unwrap(), || "c(α,β)c(β,α) ≠ 1".into())?;
            if group.is_one(&sigma).unwrap() {
                implications += 1;
                ensure(k.is_one(&cab).unwrap(), || "σ = 1 but c ≠ 1".into())?;
            }
        }
    }
    Ok(format!("1000 instances, 20000 pairs, {implications} with σ = 1"))
}

/// Radical mod `t` by enumerating `(ℤ/t)^{w̄}`, as exponent vectors.
fn brute_radical(e: &[Vec<i64>], t: i64, outside: &[usize]) -> Vec<Vec<i64>> {
    let size = outside.len();
    let mut out = Vec::new();
    for code in 0..t.pow(size as u32) {
        let mut alpha = vec![0i64; e.len()];
        let mut c = code;
        for &j in outside {
            alpha[j] = c % t;
            c /= t;
        }
        let central = outside
            .iter()
            .all(|&j| (0..e.len()).map(|i| alpha[i] * e[i][j]).sum::<i64>().rem_euclid(t) == 0);
        if central {
            out.push(alpha);
        }
    }
    out
}

/// Fully torsion instance: coordinates are `0` or powers of `z`, `q_ij`
/// powers of `z`. Compares the fibre test with enumeration of characters.
fn fibre_sweep(rng: &mut ChaCha8Rng, t: u64, n: usize, pair_budget: Option<usize>) -> Result<usize, String> {
    let group = CoefficientGroup::new(0, vec![Generator::new("z", t)]).unwrap();
    let b = random_bichar(rng, n, group, 1);
    let ti = t as i64;
    let e: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::try_from(&b.matrices()[0][(i, j)]).unwrap()).collect())
        .collect();
    let space = QuantumSpace::new(b).unwrap();
    let k = space.scalars();
    // coordinate code 0 is zero, code c > 0 is z^{c-1}
    let total = (ti + 1).pow(n as u32);
    let decode = |code: i64| -> Vec<i64> { (0..n).map(|i| (code / (ti + 1).pow(i as u32)) % (ti + 1)).collect() };
    let to_point = |codes: &[i64]| {
        Point::new(
            codes
                .iter()
                .map(|&c| if c == 0 { Coord::Zero } else { Coord::Unit(k.element_i64(&[c - 1]).unwrap()) })
                .collect(),
        )
    };
    let mut cache: BTreeMap<Vec<usize>, Vec<Vec<i64>>> = BTreeMap::new();
    let pairs: Vec<(i64, i64)> = match pair_budget {
        None => (0..total).flat_map(|a| (0..total).map(move |b| (a, b))).collect(),
        Some(budget) => (0..budget).map(|_| (rng.gen_range(0..total), rng.gen_range(0..total))).collect(),
    };
    for &(a, bcode) in &pairs {
        let (ca, cb) = (decode(a), decode(bcode));
        let (pa, pb) = (to_point(&ca), to_point(&cb));
        let got = space.same_fibre(&pa, &pb).map_err(|e| e.to_string())?;
        let w = pa.stratum();
        let outside = w.complement();
        let rad = cache
            .entry(outside.clone())
            .or_insert_with(|| brute_radical(&e, ti, &outside))
            .clone();
        // enumerate h ∈ μ_t^{w̄} killing the radical and test h.λ = μ
        let mut expected = false;
        if w == pb.stratum() {
            for code in 0..ti.pow(outside.len() as u32) {
                let mut h = vec![0i64; n];
                let mut c = code;
                for &j in &outside {
                    h[j] = c % ti;
                    c /= ti;
                }
                let kills = rad.iter().all(|alpha| (0..n).map(|i| alpha[i] * h[i]).sum::<i64>().rem_euclid(ti) == 0);
                if kills && outside.iter().all(|&j| (ca[j] - 1 + h[j]).rem_euclid(ti) == cb[j] - 1) {
                    expected = true;
                    break;
                }
            }
        }
        ensure(got == expected, || format!("t={t} n={n}: {ca:?} vs {cb:?}: got {got}, oracle {expected}"))?;
    }
    Ok(pairs.len())
}

fn criterion_fibre_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut pairs = 0;
    let start = Instant::now();
    for _ in 0..3 {
        pairs += fibre_sweep(&mut rng, 3, 3, None)?;
    }
    let full_t3n3 = start.elapsed();
    for (t, n, budget) in [(3, 2, None), (5, 2, None), (5, 3, None), (3, 4, None), (5, 4, Some(20000))] {
        for _ in 0..2 {
            pairs += fibre_sweep(&mut rng, t, n, budget)?;
        }
    }
    ensure(full_t3n3.as_secs() < 60, || format!("t=3, n=3 sweep took {full_t3n3:?}"))?;
    Ok(format!("{pairs} point pairs agree with character enumeration"))
}

fn random_instances(count: usize, seed: u64) -> Vec<ToricInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_toric(&mut rng)).collect()
}

fn criterion_radical_identity(instances: &[ToricInstance]) -> Outcome {
    let mut strata = 0;
    for inst in instances {
        let c = inst.c();
        let t = ToricSpace::new(inst.grading.clone(), c.clone()).map_err(|e| e.to_string())?;
        let pulled = pullback(&inst.grading, &c).map_err(|e| e.to_string())?;
        for mask in 0..1u64 << inst.n {
            let w = Stratum::from_mask(inst.n, mask);
            let r = t.stratum_radical(&w).map_err(|e| e.to_string())?;
            let lhs = Lattice::preimage(inst.grading.rho(), &r.lifted)
                .unwrap()
                .intersect(&Lattice::coordinate(inst.n, w.members()))
                .unwrap();
            let rhs = pulled.radical(&w).unwrap().lattice;
            ensure(lhs == rhs, || format!("mismatch on {:?}: {lhs:?} vs {rhs:?}", w.one_based()))?;
            strata += 1;
        }
    }
    Ok(format!("{} instances, {strata} strata", instances.len()))
}

/// A random face stratum of the instance, falling back to the torus.
fn face(rng: &mut ChaCha8Rng, t: &ToricSpace, n: usize) -> Vec<bool> {
    for _ in 0..4 {
        let zero = mask_bits(n, rng.gen_range(0..1u64 << n));
        let w = Stratum::new(n, (0..n).filter(|&i| zero[i])).unwrap();
        if t.check_face(&w).is_ok() {
            return zero;
        }
    }
    vec![false; n]
}

fn padded(inst: &ToricInstance, group: &CoefficientGroup) -> GBicharacter {
    let mut ms = inst.c().matrices().to_vec();
    ms.resize(group.len(), IntMatrix::zeros(inst.m, inst.m));
    GBicharacter::new(group.clone(), ms).unwrap()
}

fn criterion_two_way_fibres(instances: &[ToricInstance]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut same, mut different) = (0, 0);
    for inst in instances {
        let t = ToricSpace::new(inst.grading.clone(), inst.c()).map_err(|e| e.to_string())?;
        let zero = face(&mut rng, &t, inst.n);
        let chi = inst.random_character(&mut rng);
        let lambda = inst.point(t.space(), &chi, &zero);
        // 25 pairs from the fibre through λ
        let sample = t.space().orbit_sample(&lambda, 25, rng.gen()).map_err(|e| e.to_string())?;
        let ext_group = sample.space.bichar().group().clone();
        let wide = ToricSpace::new(inst.grading.clone(), padded(inst, &ext_group)).map_err(|e| e.to_string())?;
        for mu in &sample.points {
            let r = wide.same_fibre(&sample.base, mu).map_err(|e| e.to_string())?;
            ensure(r, || "orbit point reported outside the fibre".into())?;
            same += 1;
        }
        // 25 pairs against independent points on the same face
        for _ in 0..25 {
            let mu = inst.point(t.space(), &inst.random_character(&mut rng), &zero);
            if t.same_fibre(&lambda, &mu).map_err(|e| e.to_string())? {
                same += 1;
            } else {
                different += 1;
            }
        }
    }
    ensure(different > 0, || "no separated pairs were exercised".into())?;
    Ok(format!("{} pairs agree ({same} same fibre, {different} separated)", same + different))
}

fn criterion_refinement(instances: &[ToricInstance]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    let mut check = |inst: &ToricInstance, c1: GBicharacter, c2: GBicharacter, rng: &mut ChaCha8Rng| -> Result<(), String> {
        let refiner = Refiner::new(&inst.grading, &c1, &c2).map_err(|e| e.to_string())?;
        for _ in 0..20 {
            let zero = face(rng, refiner.finer(), inst.n);
            let lambda = inst.point(refiner.finer().space(), &inst.random_character(rng), &zero);
            let r = refiner.at(&lambda).map_err(|e| e.to_string())?;
            // independent restatement: lattice inclusion and λ^α on both
            ensure(r.coarser.lattice.is_subset_of(&r.finer.lattice).unwrap(), || "lattices not nested".into())?;
            let k = refiner.finer().space().scalars();
            let s1 = r.finer.shadow(refiner.finer().space().cocycle()).unwrap();
            let s2 = r.coarser.shadow(refiner.coarser().space().cocycle()).unwrap();
            for (row, v) in s2.lattice.basis_rows().zip(&s2.values) {
                ensure(s1.evaluate(k, row).unwrap().as_ref() == Some(v), || "scalars do not restrict".into())?;
                ensure(lambda.monomial(k, row).unwrap() == *v, || "scalar is not λ^α".into())?;
            }
            checked += 1;
        }
        Ok(())
    };
    for inst in instances.iter().take(10) {
        let zeros = vec![IntMatrix::zeros(inst.m, inst.m); inst.c_matrices.len()];
        check(inst, inst.bicharacter(&zeros), inst.c(), &mut rng)?;
    }
    for i in 0..10 {
        let t = [3u64, 5, 7][i % 3];
        let m = rng.gen_range(1..=4);
        let n = rng.gen_range(1..=4);
        let inst = random_toric_with(&mut rng, m, n, &[0, t], true);
        let zero = IntMatrix::zeros(m, m);
        let generic = inst.bicharacter(&[inst.c_matrices[0].clone(), zero.clone()]);
        let special = inst.bicharacter(&[zero, inst.c_matrices[1].clone()]);
        check(&inst, special, generic, &mut rng)?;
    }
    Ok(format!("{checked} points over 20 refinement pairs"))
}

fn criterion_torus_smoke() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let generic = {
        let k = CoefficientGroup::new(0, vec![Generator::free("q"), Generator::free("l1"), Generator::free("l2")]).unwrap();
        QuantumSpace::new(BicharMatrix::single_parameter(k, 0, 2).unwrap()).unwrap()
    };
    let points: Vec<Point> = (0..10)
        .map(|_| l_point(&generic, 1, &[rng.gen_range(-3..=3), rng.gen_range(-3..=3)], &[false, false]))
        .collect();
    for p in &points {
        let ideal = generic.torus_map_point(p).map_err(|e| e.to_string())?;
        ensure(ideal.binomials.is_empty() && ideal.variables.is_empty(), || "nonzero ideal".into())?;
        for other in &points {
            ensure(generic.same_fibre(p, other).unwrap(), || "torus points separated".into())?;
        }
    }
    for t in [3u64, 5] {
        let k = CoefficientGroup::new(0, vec![Generator::new("q", t), Generator::free("l1"), Generator::free("l2")]).unwrap();
        let space = QuantumSpace::new(BicharMatrix::single_parameter(k.clone(), 0, 2).unwrap()).unwrap();
        let kk = space.scalars();
        let lambda = l_point(&space, 1, &[1, 1], &[false, false]);
        let ideal = space.torus_map_point(&lambda).map_err(|e| e.to_string())?;
        let ti = t as i64;
        let expected = [[ti, 0], [0, ti]];
        ensure(ideal.binomials.len() == 2, || format!("t={t}: {} generators", ideal.binomials.len()))?;
        for (b, (e, lam)) in ideal.binomials.iter().zip(expected.iter().zip(lambda.coords())) {
            let Coord::Unit(l) = lam else { unreachable!() };
            ensure(
                b.plus == big(e) && b.minus.iter().all(Zero::is_zero) && b.scalar == kk.pow(l, &BigInt::from(ti)).unwrap(),
                || format!("t={t}: generator {b:?}"),
            )?;
        }
        // the μ_t oracle: every h.λ lies in the fibre, and nothing else nearby
        let mut fibre = HashSet::new();
        for a in 0..ti {
            for b in 0..ti {
                let h = [a, b];
                let mu = Point::new(
                    lambda
                        .coords()
                        .iter()
                        .zip(h)
                        .map(|(c, e)| {
                            let Coord::Unit(v) = c else { unreachable!() };
                            Coord::Unit(kk.mul(v, &kk.element_i64(&[e, 0, 0]).unwrap()).unwrap())
                        })
                        .collect(),
                );
                ensure(space.same_fibre(&lambda, &mu).unwrap(), || format!("t={t}: μ_t translate separated"))?;
                fibre.insert(mu);
            }
        }
        ensure(fibre.len() == (t * t) as usize, || format!("t={t}: fibre has {} points", fibre.len()))?;
        let off = l_point(&space, 1, &[2, 1], &[false, false]);
        ensure(!space.same_fibre(&lambda, &off).unwrap(), || format!("t={t}: distinct orbit merged"))?;
    }
    Ok("generic and t ∈ {3, 5} tori".into())
}

/// `χ = s·n(α₋)/n(α₊)` with `n` read off the cocycle entries directly.
fn shadow_scalar(space: &QuantumSpace, b: &Binomial) -> KElement {
    let k = space.scalars();
    let c = space.cocycle();
    let norm = |beta: &[BigInt]| {
        let mut acc = k.one();
        for i in 0..beta.len() {
            for j in i + 1..beta.len() {
                acc = k.mul(&acc, &k.pow(&c.entry(i, j), &(&beta[i] * &beta[j])).unwrap()).unwrap();
            }
        }
        acc
    };
    k.div(&k.mul(&b.scalar, &norm(&b.minus)).unwrap(), &norm(&b.plus)).unwrap()
}

fn vanishes(space: &QuantumSpace, ideal: &IdealPresentation, mu: &Point) -> bool {
    let k = space.scalars();
    let vars = ideal.variables.iter().all(|&i| mu.value(i).is_none());
    vars && ideal.binomials.iter().all(|b| {
        let chi = space.scalars().embed_from(space.scalars(), &shadow_scalar(space, b)).unwrap();
        let lhs = mu.monomial(k, &b.plus).unwrap();
        let rhs = k.mul(&chi, &mu.monomial(k, &b.minus).unwrap()).unwrap();
        lhs == rhs
    })
}

fn criterion_vanishing() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut evaluations = 0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=5);
        let count = rng.gen_range(1..=3);
        let group = random_group(&mut rng, count, n);
        let space = QuantumSpace::new(random_bichar(&mut rng, n, group, count)).unwrap();
        let exps: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
        let zero = mask_bits(n, rng.gen_range(0..1u64 << n));
        let lambda = l_point(&space, count, &exps, &zero);
        let sample = space.orbit_sample(&lambda, 10, rng.gen()).map_err(|e| e.to_string())?;
        let ideal = sample.space.map_point(&sample.base).map_err(|e| e.to_string())?;
        for mu in &sample.points {
            ensure(vanishes(&sample.space, &ideal, mu), || format!("generator nonzero at {mu:?}"))?;
            evaluations += ideal.binomials.len() + ideal.variables.len();
            let moved = sample.space.map_point(mu).map_err(|e| e.to_string())?;
            ensure(moved == ideal, || "image changed along the orbit".into())?;
        }
    }
    Ok(format!("100 instances, {evaluations} generator evaluations"))
}

fn run_cli(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_qstrata")).args(args).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    out.stdout
}

fn criterion_determinism() -> Outcome {
    let dir = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let n = 10;
    let group = random_group(&mut rng, 2, 0);
    let b = random_bichar(&mut rng, n, group.clone(), 2);
    let problem = serde_json::json!({
        "characteristic": 0,
        "generators": group.generators().iter().map(|g| serde_json::json!({"name": g.name, "order": g.order})).collect::<Vec<_>>(),
        "n": n,
        "q": (0..n).map(|i| (0..n).map(|j| qstrata::cli::to_small(group.to_named(&b.entry(i, j))).unwrap()).collect::<Vec<_>>()).collect::<Vec<_>>(),
    });
    let path = dir.join("determinism_problem.json");
    std::fs::write(&path, serde_json::to_string(&problem).unwrap()).unwrap();
    let p = path.to_str().unwrap();
    let f = |name: &str| fixture(name).to_str().unwrap().to_string();
    let commands: Vec<Vec<String>> = vec![
        vec!["strata".into(), "--problem".into(), p.into()],
        vec!["map-point".into(), "--problem".into(), f("cubic_root_of_unity.json"), "--point".into(), f("dense.json")],
        vec!["orbit-sample".into(), "--problem".into(), f("cubic_generic.json"), "--point".into(), f("dense.json"), "--count".into(), "5".into(), "--seed".into(), "11".into()],
        vec!["refine".into(), "--problem".into(), f("plane.json"), "--point".into(), f("plane_point.json"), "--c1".into(), f("plane_trivial_c1.json")],
        vec!["toric-fibre".into(), "--problem".into(), f("plane.json"), "--point".into(), f("plane_point.json"), "--other".into(), f("plane_point.json")],
    ];
    let mut runs = 0;
    for cmd in &commands {
        let args: Vec<&str> = cmd.iter().map(String::as_str).collect();
        let reference = run_cli(&args);
        for threads in ["1", "2", "8", "1", "8"] {
            let mut with = args.clone();
            with.extend(["--threads", threads]);
            ensure(run_cli(&with) == reference, || format!("{} differs with {threads} threads", cmd[0]))?;
            runs += 1;
        }
    }
    Ok(format!("{} commands, {runs} repeated runs byte-identical", commands.len()))
}

fn main() {
    let instances = random_instances(200, 5);
    let criteria: Vec<(&str, Check)> = vec![
        ("generic single-parameter golden table", Box::new(criterion_generic_table)),
        ("root-of-unity golden table", Box::new(criterion_root_of_unity_table)),
        ("cocycle laws", Box::new(criterion_cocycle_laws)),
        ("fibre test against character enumeration", Box::new(criterion_fibre_oracle)),
        ("pulled-back radical identity", Box::new(|| criterion_radical_identity(&instances))),
        ("two-way toric fibre agreement", Box::new(|| criterion_two_way_fibres(&instances))),
        ("refinement triangle", Box::new(|| criterion_refinement(&instances))),
        ("quantum torus smoke", Box::new(criterion_torus_smoke)),
        ("vanishing on sampled orbits", Box::new(criterion_vanishing)),
        ("byte-identical output", Box::new(criterion_determinism)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
