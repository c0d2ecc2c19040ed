//! Property suites runnable from the command line.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::boolean::{arf, normal_form, sp_action, ArfIdealBasis, BoolPoly, Monomial};
use crate::bounds::{census, dim_report};
use crate::certificate::verify_certificate;
use crate::cycles::{decide_equal_genus1, relation_holds, sigma_k, CycleSystem, Verdict};
use crate::gf2::{enumerate_symplectic_2subspaces, orthogonal_complement, symplectic_basis_of, symplectic_plane_count, GenusContext};
use crate::instances::{
    random_genus1_pair, random_gf2_sp, random_relation_instance, random_splitting_222, sigma_matched,
};
use crate::lattice::IntSymplecticSubgroup;
use crate::sigma::{recover_genus1_subspace, sigma_of_int_subgroup, sigma_of_subspace, Mode, QuadraticBasis};
use crate::trees::{enumerate_admissible_trees, realize_splitting, reduce_to_genus1, tree_sigma_k};
use crate::wedge::{BitRow, DenseEchelon};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Level {
    #[default]
    Quick,
    Full,
}

impl std::str::FromStr for Level {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "quick" => Ok(Level::Quick),
            "full" => Ok(Level::Full),
            _ => Err(format!("unknown level {s:?} (expected quick or full)")),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

type Check = fn(Level, &mut ChaCha8Rng) -> std::result::Result<String, String>;

const CHECKS: &[(&str, Check)] = &[
    ("plane_counts", plane_counts),
    ("b2_dimension", b2_dimension),
    ("sigma_recovery", sigma_recovery),
    ("arf_invariance", arf_invariance),
    ("complement_symmetry", complement_symmetry),
    ("s3_splitting", s3_splitting),
    ("certificates", certificates),
    ("vanishing_criterion", vanishing_criterion),
    ("triviality", triviality),
    ("reduction", reduction),
    ("relation_rule", relation_rule),
    ("dim_bounds", dim_bounds),
];

/// Runs every suite; each gets its own RNG derived from `seed`.
pub fn run_selftest(level: Level, seed: u64) -> Vec<CheckResult> {
    CHECKS
        .iter()
        .enumerate()
        .map(|(i, &(name, f))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let start = Instant::now();
            let r = f(level, &mut rng);
            let seconds = start.elapsed().as_secs_f64();
            match r {
                Ok(detail) => CheckResult { name, passed: true, detail, seconds },
                Err(detail) => CheckResult { name, passed: false, detail, seconds },
            }
        })
        .collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn ctx(g: usize) -> GenusContext {
    GenusContext::new(g).expect("small genus")
}

fn pick(level: Level, quick: usize, full: usize) -> usize {
    if level == Level::Quick {
        quick
    } else {
        full
    }
}

fn plane_counts(level: Level, _: &mut ChaCha8Rng) -> std::result::Result<String, String> {
    let top = pick(level, 3, 4);
    for g in 1..=top {
        let n = enumerate_symplectic_2subspaces(ctx(g)).count() as u128;
        ensure(n == symplectic_plane_count(g), || format!("g={g}: {n} planes"))?;
    }
    Ok(format!("g=1..{top}"))
}

fn b2_dimension(level: Level, _: &mut ChaCha8Rng) -> std::result::Result<String, String> {
    let top = pick(level, 3, 5);
    for g in 1..=top {
        let c = ctx(g);
        let ideal = ArfIdealBasis::full(c).map_err(err)?;
        let qb = QuadraticBasis::new(c, Mode::Boundary);
        let mut ech = DenseEchelon::new(qb.dim());
        for i in 0..qb.dim() {
            let nf = normal_form(&BoolPoly::from_monomials(c, [qb.monomial(i)]), Some(&ideal));
            let idx = nf.terms().iter().map(|&m: &Monomial| qb.index_of(m).expect("degree <= 2"));
            ech.insert(BitRow::from_indices(qb.dim(), idx));
        }
        ensure(ech.rank() == 2 * g * g + g, || format!("g={g}: rank {}", ech.rank()))?;
    }
    Ok(format!("g=1..{top}"))
}

fn sigma_recovery(_: Level, _: &mut ChaCha8Rng) -> std::result::Result<String, String> {
    let mut seen = HashSet::new();
    for v in enumerate_symplectic_2subspaces(ctx(3)) {
        let s = sigma_of_subspace(&v, Mode::Closed);
        let w = recover_genus1_subspace(&s).map_err(err)?;
        ensure(w.space() == v.space(), || format!("recovered {} from {}", w.space(), v.space()))?;
        seen.insert(s);
    }
    ensure(seen.len() == 336, || format!("{} distinct values", seen.len()))?;
    Ok("336 planes at g=3".into())
}

fn arf_invariance(level: Level, rng: &mut ChaCha8Rng) -> std::result::Result<String, String> {
    let n = pick(level, 200, 1000);
    for i in 0..n {
        let c = ctx(1 + i % 4);
        let m = random_gf2_sp(c, 6, rng);
        ensure(sp_action(&arf(c), &m).map_err(err)? == arf(c), || format!("moved by {m:?}"))?;
    }
    Ok(format!("{n} products"))
}

fn complement_symmetry(level: Level, rng: &mut ChaCha8Rng) -> std::result::Result<String, String> {
    let mut checked = 0;
    for v in enumerate_symplectic_2subspaces(ctx(3)) {
        let perp = symplectic_basis_of(&orthogonal_complement(v.space())).map_err(err)?;
        ensure(sigma_of_subspace(&v, Mode::Closed) == sigma_of_subspace(&perp, Mode::Closed), || v.space().to_string())?;
        checked += 1;
    }
    if level == Level::Full {
        let c = ctx(4);
        let all: Vec<_> = enumerate_symplectic_2subspaces(c).collect();
        for _ in 0..500 {
            let v = &all[rand::Rng::gen_range(rng, 0..all.len())];
            let perp = symplectic_basis_of(&orthogonal_complement(v.space())).map_err(err)?;
            ensure(sigma_of_subspace(v, Mode::Closed) == sigma_of_subspace(&perp, Mode::Closed), || v.space().to_string())?;
            checked += 1;
        }
    }
    Ok(format!("{checked} subspaces"))
}

fn s3_splitting(level: Level, rng: &mut ChaCha8Rng) -> std::result::Result<String, String> {
    let n = pick(level, 20, 100);
    let c = ctx(3);
    for _ in 0..n {
        let [u1, u2, u3] = random_splitting_222(rng).map_err(err)?;
        let s = |a: &IntSymplecticSubgroup, b: &IntSymplecticSubgroup| {
            CycleSystem::new(c, vec![a.clone(), b.clone()]).and_then(|sys| sigma_k(&sys))
        };
        let (x, y, z) = (s(&u1, &u2).map_err(err)?, s(&u2, &u3).map_err(err)?, s(&u3, &u1).map_err(err)?);
        ensure(x == y && y == z, || format!("splitting {u1} | {u2} | {u3}"))?;
    }
    Ok(format!("{n} splittings"))
}

fn certificates(level: Level, rng: &mut ChaCha8Rng) -> std::result::Result<String, String> {
    let plan = [(4, pick(level, 10, 100)), (5, pick(level, 5, 50))];
    for (g, n) in plan {
        for _ in 0..n {
            let p = random_genus1_pair(ctx(g), rng).map_err(err)?;
            let q = sigma_matched(&p, rng).map_err(err)?;
            match decide_equal_genus1(&p, &q).map_err(err)? {
                Verdict::Equal(cert) => ensure(verify_certificate(&cert), || format!("rejected certificate for {p} vs {q}"))?,
                v => return Err(format!("{p} vs {q}: {v:?}")),
            }
        }
    }
    Ok(format!("{} instances", plan.iter().map(|p| p.1).sum::<usize>()))
}

fn vanishing_criterion(level: Level, _: &mut ChaCha8Rng) -> std::result::Result<String, String> {
    let cases: &[(usize, usize)] = if level == Level::Quick { &[(4, 2), (4, 3)] } else { &[(4, 2), (4, 3), (5, 2), (5, 3)] };
    let mut n = 0;
    for &(g, k) in cases {
        for row in census(g, k).map_err(err)? {
            ensure(row.sigma_k_zero == row.has_genus0, || format!("g={g} k={k}: {}", row.tree))?;
            n += 1;
        }
    }
    Ok(format!("{n} trees"))
}

fn triviality(level: Level, _: &mut ChaCha8Rng) -> std::result::Result<String, String> {
    let mut n = 0;
    for g in 3..=pick(level, 3, 4) {
        for k in g..=2 * g - 3 {
            for t in enumerate_admissible_trees(g, k).map_err(err)? {
                let w = tree_sigma_k(&t, &realize_splitting(&t).map_err(err)?).map_err(err)?;
                ensure(w.is_zero(), || format!("sigma_{k} of {t} is nonzero"))?;
                ensure(reduce_to_genus1(&t).map_err(err)?.is_empty(), || format!("{t} reduces to a nonempty sum"))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} trees"))
}

fn reduction(level: Level, _: &mut ChaCha8Rng) -> std::result::Result<String, String> {
    let mut n = 0;
    for g in 2..=pick(level, 3, 4) {
        for k in 1..=2 * g - 3 {
            for t in enumerate_admissible_trees(g, k).map_err(err)? {
                let want = tree_sigma_k(&t, &realize_splitting(&t).map_err(err)?).map_err(err)?;
                let d = QuadraticBasis::new(t.ctx(), Mode::Closed).dim();
                let mut acc = crate::cycles::SigmaWedge::from_coords(t.ctx(), &vec![BitRow::zeros(d); k]).map_err(err)?;
                for sys in reduce_to_genus1(&t).map_err(err)? {
                    acc = acc.checked_add(&sigma_k(&sys).map_err(err)?).map_err(err)?;
                }
                ensure(acc == want, || format!("reduction of {t} changes sigma_{k}"))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} trees"))
}

fn relation_rule(level: Level, rng: &mut ChaCha8Rng) -> std::result::Result<String, String> {
    let n = pick(level, 100, 500);
    let mut positive = 0;
    for _ in 0..n {
        let r = random_relation_instance(rng).map_err(err)?;
        let got = relation_holds(&r.u, &r.vs).map_err(err)?;
        let su = sigma_of_int_subgroup(&r.u, Mode::Closed).map_err(err)?;
        let mut sum = BoolPoly::zero(r.u.ctx());
        for v in &r.vs {
            sum.add_assign(sigma_of_int_subgroup(v, Mode::Closed).map_err(err)?.poly());
        }
        let want = sum.is_zero() || &sum == su.poly();
        ensure(got == want, || format!("relation_holds disagrees on U = {}", r.u))?;
        positive += usize::from(got);
    }
    Ok(format!("{n} instances, {positive} relations"))
}

fn dim_bounds(level: Level, _: &mut ChaCha8Rng) -> std::result::Result<String, String> {
    if level == Level::Quick {
        return Ok("skipped at quick level".into());
    }
    let r = dim_report(4).map_err(err)?;
    ensure(r.upper_bound == 913_920 && r.lower_bound <= 630, || format!("{r:?}"))?;
    Ok(format!("lower {} <= upper {}", r.lower_bound, r.upper_bound))
}

pub fn total_seconds(results: &[CheckResult]) -> Duration {
    Duration::from_secs_f64(results.iter().map(|r| r.seconds).sum())
}
