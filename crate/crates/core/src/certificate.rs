//! Replayable equality proofs between abelian cycles and their JSON form.
//!
//! A certificate is a chain of cycle systems joined by steps. Every step
//! names a rule and carries the subgroups the rule needs as witnesses, keyed
//! `"<name>.x<i>"` / `"<name>.y<i>"`. Nothing is trusted on load: the verifier
//! rebuilds every subgroup and rechecks every hypothesis.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cycles::CycleSystem;
use crate::error::{Error, Result};
use crate::gf2::GenusContext;
use crate::lattice::{IntSymplecticSubgroup, IntVector};
use crate::sigma::{sigma_of_subspace, Mode, SigmaValue};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    KeyRelation,
    Gen3Subsurface,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::KeyRelation => write!(f, "KeyRelation"),
            Rule::Gen3Subsurface => write!(f, "Gen3Subsurface"),
        }
    }
}

/// One rewriting step `lhs → rhs`. Parts are lists `x1, y1, x2, y2, ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub rule: Rule,
    pub lhs: Vec<Vec<IntVector>>,
    pub rhs: Vec<Vec<IntVector>>,
    pub witnesses: BTreeMap<String, IntVector>,
}

fn put(w: &mut BTreeMap<String, IntVector>, name: &str, u: &IntSymplecticSubgroup) {
    for (i, p) in u.pairs().iter().enumerate() {
        w.insert(format!("{name}.x{}", i + 1), p.x.clone());
        w.insert(format!("{name}.y{}", i + 1), p.y.clone());
    }
}

fn side(parts: [&IntSymplecticSubgroup; 2]) -> Vec<Vec<IntVector>> {
    parts.iter().map(|p| p.vectors()).collect()
}

impl Step {
    /// `A(V, F) = A(V', F)` where `F` is `U` or `U^⊥`.
    pub fn key_relation(
        u: &IntSymplecticSubgroup,
        v: &IntSymplecticSubgroup,
        v_new: &IntSymplecticSubgroup,
        lhs: [&IntSymplecticSubgroup; 2],
        rhs: [&IntSymplecticSubgroup; 2],
    ) -> Self {
        let mut witnesses = BTreeMap::new();
        put(&mut witnesses, "U", u);
        put(&mut witnesses, "V", v);
        put(&mut witnesses, "V'", v_new);
        Self { rule: Rule::KeyRelation, lhs: side(lhs), rhs: side(rhs), witnesses }
    }

    /// `A(X1, X2) = A(Y1, Y2)` inside a rank-6 symplectic `W`.
    pub fn gen3_subsurface(
        w: &IntSymplecticSubgroup,
        x: [&IntSymplecticSubgroup; 2],
        y: [&IntSymplecticSubgroup; 2],
    ) -> Self {
        let mut witnesses = BTreeMap::new();
        put(&mut witnesses, "W", w);
        put(&mut witnesses, "X1", x[0]);
        put(&mut witnesses, "X2", x[1]);
        put(&mut witnesses, "Y1", y[0]);
        put(&mut witnesses, "Y2", y[1]);
        Self { rule: Rule::Gen3Subsurface, lhs: side(x), rhs: side(y), witnesses }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    g: usize,
    steps: Vec<Step>,
}

impl Certificate {
    pub fn new(g: usize, steps: Vec<Step>) -> Self {
        Self { g, steps }
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn steps_mut(&mut self) -> &mut Vec<Step> {
        &mut self.steps
    }

    /// Whether the chain starts at `p` and ends at `q` (unordered parts).
    pub fn connects(&self, p: &CycleSystem, q: &CycleSystem) -> bool {
        let Ok(ctx) = GenusContext::new(self.g) else {
            return false;
        };
        match (self.steps.first(), self.steps.last()) {
            (Some(first), Some(last)) => {
                matches!(system(ctx, &first.lhs), Ok(s) if s.same_system(p))
                    && matches!(system(ctx, &last.rhs), Ok(s) if s.same_system(q))
            }
            _ => p.same_system(q),
        }
    }

    pub fn to_json(&self) -> String {
        let wire = WireCert {
            g: self.g,
            steps: self
                .steps
                .iter()
                .map(|s| WireStep {
                    rule: s.rule,
                    lhs: s.lhs.iter().map(|p| p.iter().map(wire_vec).collect()).collect(),
                    rhs: s.rhs.iter().map(|p| p.iter().map(wire_vec).collect()).collect(),
                    witnesses: s.witnesses.iter().map(|(k, v)| (k.clone(), wire_vec(v))).collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&wire).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let wire: WireCert = serde_json::from_str(s).map_err(|e| Error::CertificateFormat(e.to_string()))?;
        let ctx = GenusContext::new(wire.g).map_err(|e| Error::CertificateFormat(e.to_string()))?;
        let vector = |v: Vec<JsonInt>| -> Result<IntVector> {
            IntVector::from_coords(ctx, v.into_iter().map(|j| j.0).collect())
                .map_err(|e| Error::CertificateFormat(e.to_string()))
        };
        let part_list = |ps: Vec<Vec<Vec<JsonInt>>>| -> Result<Vec<Vec<IntVector>>> {
            ps.into_iter().map(|p| p.into_iter().map(vector).collect()).collect()
        };
        let steps = wire
            .steps
            .into_iter()
            .map(|s| {
                Ok(Step {
                    rule: s.rule,
                    lhs: part_list(s.lhs)?,
                    rhs: part_list(s.rhs)?,
                    witnesses: s
                        .witnesses
                        .into_iter()
                        .map(|(k, v)| Ok((k, vector(v)?)))
                        .collect::<Result<_>>()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { g: wire.g, steps })
    }
}

/// An integer carried through JSON without loss of precision.
struct JsonInt(BigInt);

fn wire_vec(v: &IntVector) -> Vec<JsonInt> {
    v.coords().iter().map(|c| JsonInt(c.clone())).collect()
}

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n = serde_json::Number::from_str(&self.0.to_string()).map_err(serde::ser::Error::custom)?;
        n.serialize(s)
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let n = serde_json::Number::deserialize(d)?;
        BigInt::from_str(&n.to_string())
            .map(JsonInt)
            .map_err(|_| serde::de::Error::custom(format!("{n} is not an integer")))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireStep {
    rule: Rule,
    lhs: Vec<Vec<Vec<JsonInt>>>,
    rhs: Vec<Vec<Vec<JsonInt>>>,
    witnesses: BTreeMap<String, Vec<JsonInt>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireCert {
    g: usize,
    steps: Vec<WireStep>,
}

/// Per-step diagnostics from [`check_certificate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepReport {
    pub index: usize,
    pub rule: Rule,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateReport {
    pub steps: Vec<StepReport>,
    pub chain_failures: Vec<String>,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.chain_failures.is_empty() && self.steps.iter().all(|s| s.failures.is_empty())
    }
}

impl fmt::Display for CertificateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            if s.failures.is_empty() {
                writeln!(f, "step {} ({}): ok", s.index + 1, s.rule)?;
            } else {
                for msg in &s.failures {
                    writeln!(f, "step {} ({}): FAILED {msg}", s.index + 1, s.rule)?;
                }
            }
        }
        for msg in &self.chain_failures {
            writeln!(f, "chain: FAILED {msg}")?;
        }
        write!(f, "{}", if self.passed() { "certificate verified" } else { "certificate rejected" })
    }
}

fn system(ctx: GenusContext, parts: &[Vec<IntVector>]) -> Result<CycleSystem> {
    let parts = parts
        .iter()
        .map(|p| IntSymplecticSubgroup::from_vectors(ctx, p.clone()))
        .collect::<Result<Vec<_>>>()?;
    CycleSystem::new(ctx, parts)
}

fn witness(ctx: GenusContext, step: &Step, name: &str) -> Result<IntSymplecticSubgroup> {
    let mut vs = Vec::new();
    for i in 1.. {
        match (step.witnesses.get(&format!("{name}.x{i}")), step.witnesses.get(&format!("{name}.y{i}"))) {
            (Some(x), Some(y)) => vs.extend([x.clone(), y.clone()]),
            (None, None) => break,
            _ => return Err(Error::CertificateFormat(format!("witness {name} has an unpaired vector"))),
        }
    }
    if vs.is_empty() {
        return Err(Error::CertificateFormat(format!("missing witness {name}")));
    }
    IntSymplecticSubgroup::from_vectors(ctx, vs)
}

fn sigma(u: &IntSymplecticSubgroup) -> Result<SigmaValue> {
    Ok(sigma_of_subspace(&u.reduce_mod2()?, Mode::Closed))
}

fn is_complement(f: &IntSymplecticSubgroup, u: &IntSymplecticSubgroup) -> bool {
    f.orthogonal_to(u) && f.rank() + u.rank() == 2 * u.ctx().genus()
}

/// The two parts of a side, matched against `known`; returns the other one.
fn other_part<'a>(sys: &'a CycleSystem, known: &IntSymplecticSubgroup) -> Option<&'a IntSymplecticSubgroup> {
    let ps = sys.parts();
    if ps.len() != 2 {
        return None;
    }
    if ps[0].same_as(known) {
        Some(&ps[1])
    } else if ps[1].same_as(known) {
        Some(&ps[0])
    } else {
        None
    }
}

fn check_key_relation(ctx: GenusContext, step: &Step, lhs: &CycleSystem, rhs: &CycleSystem, out: &mut Vec<String>) -> Result<()> {
    let u = witness(ctx, step, "U")?;
    let v = witness(ctx, step, "V")?;
    let vn = witness(ctx, step, "V'")?;
    let g = ctx.genus();
    if g < 4 {
        out.push(format!("genus {g} < 4"));
    }
    let inside = u.contains_subgroup(&v) && u.contains_subgroup(&vn);
    let outside = v.orthogonal_to(&u) && vn.orthogonal_to(&u);
    if inside {
        if u.rank() < 6 {
            out.push(format!("V, V' ⊆ U but rank U = {} < 6", u.rank()));
        }
    } else if outside {
        if 2 * g - u.rank() < 6 {
            out.push(format!("V, V' ⊆ U^⊥ but rank U^⊥ = {} < 6", 2 * g - u.rank()));
        }
    } else {
        out.push("V, V' are neither both in U nor both in U^⊥".into());
    }
    if sigma(&v)? != sigma(&vn)? {
        out.push("σ(V) != σ(V')".into());
    }
    match (other_part(lhs, &v), other_part(rhs, &vn)) {
        (Some(fl), Some(fr)) => {
            if !fl.same_as(fr) {
                out.push("the fixed part differs between lhs and rhs".into());
            } else if !(fl.same_as(&u) || is_complement(fl, &u)) {
                out.push("the fixed part is neither U nor U^⊥".into());
            }
        }
        (None, _) => out.push("lhs does not contain V".into()),
        (_, None) => out.push("rhs does not contain V'".into()),
    }
    Ok(())
}

fn check_gen3(ctx: GenusContext, step: &Step, lhs: &CycleSystem, rhs: &CycleSystem, out: &mut Vec<String>) -> Result<()> {
    let w = witness(ctx, step, "W")?;
    let x1 = witness(ctx, step, "X1")?;
    let x2 = witness(ctx, step, "X2")?;
    let y1 = witness(ctx, step, "Y1")?;
    let y2 = witness(ctx, step, "Y2")?;
    if ctx.genus() < 4 {
        out.push(format!("genus {} < 4", ctx.genus()));
    }
    if w.rank() != 6 {
        out.push(format!("rank W = {} != 6", w.rank()));
    }
    for (name, s) in [("X1", &x1), ("X2", &x2), ("Y1", &y1), ("Y2", &y2)] {
        if s.rank() != 2 {
            out.push(format!("rank {name} = {} != 2", s.rank()));
        }
        if !w.contains_subgroup(s) {
            out.push(format!("{name} ⊄ W"));
        }
    }
    if !x1.orthogonal_to(&x2) {
        out.push("X1 not ⊥ X2".into());
    }
    if !y1.orthogonal_to(&y2) {
        out.push("Y1 not ⊥ Y2".into());
    }
    match x1.direct_sum(&x2) {
        Ok(x12) if x12.contains_subgroup(&y2) => {}
        _ => out.push("Y2 ⊄ X1 ⊕ X2".into()),
    }
    if sigma(&x1)? != sigma(&y1)? {
        out.push("σ(X1) != σ(Y1)".into());
    }
    if sigma(&x2)? != sigma(&y2)? {
        out.push("σ(X2) != σ(Y2)".into());
    }
    let xs = CycleSystem::new(ctx, vec![x1, x2]);
    let ys = CycleSystem::new(ctx, vec![y1, y2]);
    if !matches!(&xs, Ok(s) if s.same_system(lhs)) {
        out.push("lhs is not (X1, X2)".into());
    }
    if !matches!(&ys, Ok(s) if s.same_system(rhs)) {
        out.push("rhs is not (Y1, Y2)".into());
    }
    Ok(())
}

/// Rechecks every hypothesis of every step and the chain links.
pub fn check_certificate(cert: &Certificate) -> CertificateReport {
    let mut report = CertificateReport { steps: Vec::new(), chain_failures: Vec::new() };
    let ctx = match GenusContext::new(cert.g) {
        Ok(c) => c,
        Err(e) => {
            report.chain_failures.push(e.to_string());
            return report;
        }
    };
    let mut sides = Vec::new();
    for (index, step) in cert.steps.iter().enumerate() {
        let mut failures = Vec::new();
        let lhs = system(ctx, &step.lhs);
        let rhs = system(ctx, &step.rhs);
        match (&lhs, &rhs) {
            (Ok(l), Ok(r)) => {
                let res = match step.rule {
                    Rule::KeyRelation => check_key_relation(ctx, step, l, r, &mut failures),
                    Rule::Gen3Subsurface => check_gen3(ctx, step, l, r, &mut failures),
                };
                if let Err(e) = res {
                    failures.push(format!("witness invalid: {e}"));
                }
            }
            (Err(e), _) => failures.push(format!("lhs invalid: {e}")),
            (_, Err(e)) => failures.push(format!("rhs invalid: {e}")),
        }
        sides.push((lhs.ok(), rhs.ok()));
        report.steps.push(StepReport { index, rule: step.rule, failures });
    }
    for i in 1..sides.len() {
        let linked = matches!((&sides[i - 1].1, &sides[i].0), (Some(r), Some(l)) if r.same_system(l));
        if !linked {
            report.chain_failures.push(format!("rhs of step {i} is not lhs of step {}", i + 1));
        }
    }
    report
}

pub fn verify_certificate(cert: &Certificate) -> bool {
    check_certificate(cert).passed()
}
