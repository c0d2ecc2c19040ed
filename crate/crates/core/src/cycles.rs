//! Abelian cycles given by splittings, their σ_k invariants, and the
//! equality decision for pairs of genus-1 separating twists.

use std::fmt;

use crate::certificate::{Certificate, Step};
use crate::error::{Error, Result};
use crate::gf2::GenusContext;
use crate::lattice::{adapt_pair_mod2, build_adapted_u2prime, construct_v1prime, IntSymplecticSubgroup};
use crate::sigma::{sigma_coords, sigma_of_subspace, Mode, QuadraticBasis, SigmaValue};
use crate::wedge::{wedge, BitRow, WedgeElement};

/// An abelian cycle `A(U_1, ..., U_k)` recorded by its splitting data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleSystem {
    g: usize,
    parts: Vec<IntSymplecticSubgroup>,
}

impl CycleSystem {
    pub fn new(ctx: GenusContext, parts: Vec<IntSymplecticSubgroup>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidSystem("no parts".into()));
        }
        for p in &parts {
            if p.ctx() != ctx {
                return Err(Error::ContextMismatch(ctx.genus(), p.ctx().genus()));
            }
            if p.rank() == 0 {
                return Err(Error::InvalidSystem("empty part".into()));
            }
        }
        for i in 0..parts.len() {
            for j in i + 1..parts.len() {
                if !parts[i].orthogonal_to(&parts[j]) {
                    return Err(Error::InvalidSystem(format!("parts {} and {} are not orthogonal", i + 1, j + 1)));
                }
            }
        }
        Ok(Self { g: ctx.genus(), parts })
    }

    /// Parses parts separated by `;`, each in subgroup syntax `"x1, y1, ..."`.
    pub fn parse(s: &str, ctx: GenusContext) -> Result<Self> {
        let parts = s
            .split(';')
            .map(|p| IntSymplecticSubgroup::parse(p, ctx))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ctx, parts)
    }

    pub fn ctx(&self) -> GenusContext {
        GenusContext::new(self.g).expect("valid genus")
    }

    pub fn parts(&self) -> &[IntSymplecticSubgroup] {
        &self.parts
    }

    pub fn k(&self) -> usize {
        self.parts.len()
    }

    /// Equality of the underlying unordered collections of subgroups.
    pub fn same_system(&self, other: &Self) -> bool {
        if self.g != other.g || self.k() != other.k() {
            return false;
        }
        let mut used = vec![false; other.k()];
        self.parts.iter().all(|p| {
            match other.parts.iter().enumerate().position(|(j, q)| !used[j] && p.same_as(q)) {
                Some(j) => {
                    used[j] = true;
                    true
                }
                None => false,
            }
        })
    }
}

impl fmt::Display for CycleSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// `σ(U_1) ∧ ... ∧ σ(U_k)` in `Λ^k B'_2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaWedge {
    g: usize,
    wedge: WedgeElement,
}

impl SigmaWedge {
    pub fn from_coords(ctx: GenusContext, parts: &[BitRow]) -> Result<Self> {
        let dim = QuadraticBasis::new(ctx, Mode::Closed).dim();
        if let Some(p) = parts.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: p.len() });
        }
        Ok(Self { g: ctx.genus(), wedge: wedge(parts)? })
    }

    pub fn wedge(&self) -> &WedgeElement {
        &self.wedge
    }

    pub fn k(&self) -> usize {
        self.wedge.degree()
    }

    pub fn is_zero(&self) -> bool {
        self.wedge.is_zero()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        Ok(Self { g: self.g, wedge: self.wedge.checked_add(&other.wedge)? })
    }
}

impl fmt::Display for SigmaWedge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.wedge.is_zero() {
            return write!(f, "0");
        }
        let qb = QuadraticBasis::new(GenusContext::new(self.g).expect("valid genus"), Mode::Closed);
        let terms: Vec<String> = self
            .wedge
            .terms()
            .iter()
            .map(|t| {
                let ms: Vec<String> = t.iter().map(|&i| qb.monomial(i as usize).to_string()).collect();
                ms.join(" ∧ ")
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

fn part_coords(u: &IntSymplecticSubgroup) -> Result<BitRow> {
    Ok(sigma_coords(&u.reduce_mod2()?, Mode::Closed))
}

/// `σ_k` of a cycle system.
pub fn sigma_k(sys: &CycleSystem) -> Result<SigmaWedge> {
    let rows = sys.parts.iter().map(part_coords).collect::<Result<Vec<_>>>()?;
    SigmaWedge::from_coords(sys.ctx(), &rows)
}

/// Whether `Σ A(V_i, U) = 0`, decided by `Σ σ(V_i) ∈ {0, σ(U)}`.
pub fn relation_holds(u: &IntSymplecticSubgroup, vs: &[IntSymplecticSubgroup]) -> Result<bool> {
    let ctx = u.ctx();
    let g = ctx.genus();
    if g < 4 {
        return Err(Error::HypothesisViolation(format!("genus {g} < 4")));
    }
    if vs.iter().any(|v| v.ctx() != ctx) {
        return Err(Error::HypothesisViolation("mixed genus".into()));
    }
    let inside = vs.iter().all(|v| u.contains_subgroup(v));
    let outside = vs.iter().all(|v| v.orthogonal_to(u));
    let roomy = (inside && u.rank() >= 6) || (outside && ctx.dim() - u.rank() >= 6);
    if !roomy && (inside || outside) {
        return Err(Error::HypothesisViolation("the containing subgroup has rank < 6".into()));
    }
    if !roomy {
        return Err(Error::HypothesisViolation("the V_i are neither all in U nor all in U^⊥".into()));
    }
    let dim = QuadraticBasis::new(ctx, Mode::Closed).dim();
    let mut sum = BitRow::zeros(dim);
    for v in vs {
        sum.xor_assign(&part_coords(v)?);
    }
    Ok(sum.is_zero() || sum == part_coords(u)?)
}

/// Outcome of [`decide_equal_genus1`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Equal in `H_2`, with a replayable proof.
    Equal(Certificate),
    /// `σ_2` differs, so the classes differ.
    DistinctBySigma,
    /// `σ_2` agrees but the σ-pairs differ; no conclusion is available.
    Inconclusive,
}

fn closed_sigma(u: &IntSymplecticSubgroup) -> Result<SigmaValue> {
    Ok(sigma_of_subspace(&u.reduce_mod2()?, Mode::Closed))
}

fn check_genus1_pair(sys: &CycleSystem, name: &str) -> Result<()> {
    if sys.k() != 2 || sys.parts.iter().any(|p| p.rank() != 2) {
        return Err(Error::HypothesisViolation(format!("{name} must have two parts of rank 2")));
    }
    Ok(())
}

/// Decides `A(U1, U2) = A(V1, V2)` for genus-1 pairs when the σ-pairs agree.
///
/// The certificate is the chain
/// `(U1,U2) → (U1,U2') → (V1',V2') → (V1',V2) → (V1,V2)`: key relations for
/// the first, third and fourth steps and a genus-3 subsurface argument inside
/// `W = ⟨a1,b1,a2',b2',a4',b4'⟩` for the second.
pub fn decide_equal_genus1(p: &CycleSystem, q: &CycleSystem) -> Result<Verdict> {
    let ctx = p.ctx();
    if ctx.genus() < 4 {
        return Err(Error::HypothesisViolation(format!("genus {} < 4", ctx.genus())));
    }
    if q.ctx() != ctx {
        return Err(Error::ContextMismatch(ctx.genus(), q.ctx().genus()));
    }
    check_genus1_pair(p, "p")?;
    check_genus1_pair(q, "q")?;
    let sp = [closed_sigma(&p.parts[0])?, closed_sigma(&p.parts[1])?];
    let sq = [closed_sigma(&q.parts[0])?, closed_sigma(&q.parts[1])?];
    let (v1, v2) = if sp[0] == sq[0] && sp[1] == sq[1] {
        (&q.parts[0], &q.parts[1])
    } else if sp[0] == sq[1] && sp[1] == sq[0] {
        (&q.parts[1], &q.parts[0])
    } else {
        return Ok(if sigma_k(p)? == sigma_k(q)? { Verdict::Inconclusive } else { Verdict::DistinctBySigma });
    };
    if p.same_system(q) {
        return Ok(Verdict::Equal(Certificate::new(ctx.genus(), vec![])));
    }
    let (u1, u2) = (&p.parts[0], &p.parts[1]);
    let (pair1, pair2) = (&u1.pairs()[0], &u2.pairs()[0]);
    let v2_adapted = adapt_pair_mod2(&v2.pairs()[0], pair2.x.reduce_mod2(), pair2.y.reduce_mod2())?;
    let ad = build_adapted_u2prime(pair1, pair2, &v2_adapted.x)?;
    let cons = construct_v1prime(pair1, &ad.u2_prime, &v2_adapted.x, &v2_adapted.y)?;

    let grp = |pairs: Vec<crate::lattice::IntSymplecticPair>| IntSymplecticSubgroup::new(ctx, pairs);
    let u2p = grp(vec![ad.u2_prime.clone()])?;
    let v1p = grp(vec![cons.v1_prime.clone()])?;
    let v2p = grp(vec![cons.v2_prime.clone()])?;
    let w = grp(vec![
        pair1.clone(),
        ad.u2_prime.clone(),
        crate::lattice::IntSymplecticPair::new(cons.a4p.clone(), cons.b4p.clone())?,
    ])?;
    let steps = vec![
        Step::key_relation(u1, u2, &u2p, [u1, u2], [u1, &u2p]),
        Step::gen3_subsurface(&w, [u1, &u2p], [&v1p, &v2p]),
        Step::key_relation(&v1p, &v2p, v2, [&v1p, &v2p], [&v1p, v2]),
        Step::key_relation(v2, &v1p, v1, [&v1p, v2], [v1, v2]),
    ];
    Ok(Verdict::Equal(Certificate::new(ctx.genus(), steps)))
}
