//! Boolean polynomials in the variables `x̄` for `x` in the standard basis of
//! `H_1(S; Z/2)`, the Arf invariant and its ideal.
//!
//! Variables share the interleaved indexing of [`crate::gf2`], so a monomial
//! is a bitmask of variables. `x * x = x`, so monomials multiply by union.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::gf2::{self, coordinate_label, parse_label, GenusContext, Gf2Matrix, Gf2Vector};
use crate::wedge::{BitRow, DenseEchelon};

/// A squarefree monomial, ordered by degree and then by mask value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn degree(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn var(idx: usize) -> Self {
        Monomial(1 << idx)
    }

    pub fn product(self, other: Self) -> Self {
        Monomial(self.0 | other.0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.degree(), self.0).cmp(&(other.degree(), other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        let vars: Vec<String> = gf2::ones(self.0).map(coordinate_label).collect();
        write!(f, "{}", vars.join("*"))
    }
}

/// An element of the Boolean ring `B(S)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoolPoly {
    g: u8,
    terms: BTreeSet<Monomial>,
}

impl BoolPoly {
    pub fn zero(ctx: GenusContext) -> Self {
        Self { g: ctx.genus() as u8, terms: BTreeSet::new() }
    }

    pub fn one(ctx: GenusContext) -> Self {
        Self::from_monomials(ctx, [Monomial::ONE])
    }

    pub fn var(ctx: GenusContext, idx: usize) -> Self {
        assert!(idx < ctx.dim());
        Self::from_monomials(ctx, [Monomial::var(idx)])
    }

    /// Sums the monomials; repeats cancel.
    pub fn from_monomials(ctx: GenusContext, ms: impl IntoIterator<Item = Monomial>) -> Self {
        let mut p = Self::zero(ctx);
        for m in ms {
            assert!(m.0 & !ctx.full_mask() == 0, "monomial outside genus {}", ctx.genus());
            p.toggle(m);
        }
        p
    }

    pub fn ctx(&self) -> GenusContext {
        GenusContext::new(self.g as usize).expect("valid genus")
    }

    pub fn genus(&self) -> usize {
        self.g as usize
    }

    pub fn terms(&self) -> &BTreeSet<Monomial> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, m: Monomial) -> bool {
        self.terms.contains(&m)
    }

    pub(crate) fn toggle(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.iter().map(|m| m.degree()).max()
    }

    pub fn degree_at_most(&self, k: usize) -> bool {
        self.degree().is_none_or(|d| d <= k)
    }

    pub fn leading(&self) -> Option<Monomial> {
        self.terms.last().copied()
    }

    pub fn add_assign(&mut self, other: &BoolPoly) {
        assert_eq!(self.g, other.g, "genus mismatch");
        for &m in &other.terms {
            self.toggle(m);
        }
    }

    pub fn checked_add(&self, other: &BoolPoly) -> Result<BoolPoly> {
        self.ctx().check(other.genus())?;
        let mut out = self.clone();
        out.add_assign(other);
        Ok(out)
    }

    pub fn mul(&self, other: &BoolPoly) -> Result<BoolPoly> {
        self.ctx().check(other.genus())?;
        let mut out = BoolPoly { g: self.g, terms: BTreeSet::new() };
        for &a in &self.terms {
            for &b in &other.terms {
                out.toggle(a.product(b));
            }
        }
        Ok(out)
    }

    /// Value at the point `x` (bit `i` of `x` is the value of variable `i`).
    pub fn evaluate(&self, x: u64) -> bool {
        self.terms.iter().filter(|m| m.0 & !x == 0).count() % 2 == 1
    }

    /// Parses `"a1*b1 + a2*b2 + 1"`; `"0"` is the zero polynomial.
    pub fn parse(s: &str, ctx: GenusContext) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut p = Self::zero(ctx);
        for term in s.split('+') {
            let term = term.trim();
            match term {
                "0" => {}
                "1" => p.toggle(Monomial::ONE),
                _ => {
                    let mut m = 0u64;
                    for v in term.split('*') {
                        m |= 1 << parse_label(v.trim(), ctx)?;
                    }
                    p.toggle(Monomial(m));
                }
            }
        }
        Ok(p)
    }
}

impl std::ops::Add<&BoolPoly> for &BoolPoly {
    type Output = BoolPoly;

    fn add(self, rhs: &BoolPoly) -> BoolPoly {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl std::ops::Mul<&BoolPoly> for &BoolPoly {
    type Output = BoolPoly;

    fn mul(self, rhs: &BoolPoly) -> BoolPoly {
        BoolPoly::mul(self, rhs).expect("genus mismatch")
    }
}

impl fmt::Display for BoolPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut ms: Vec<Monomial> = self.terms.iter().copied().collect();
        ms.sort_by_key(|m| (std::cmp::Reverse(m.degree()), m.0));
        let parts: Vec<String> = ms.iter().map(|m| m.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `x̄ = Σ_{i ∈ x} x̄_i + c(x)`, with `c(x)` the parity of complete pairs in `x`.
pub fn bar(x: Gf2Vector) -> BoolPoly {
    bar_bits(x.ctx(), x.bits())
}

pub(crate) fn bar_bits(ctx: GenusContext, x: u64) -> BoolPoly {
    let mut p = BoolPoly::from_monomials(ctx, gf2::ones(x).map(Monomial::var));
    if gf2::pair_parity(x) == 1 {
        p.toggle(Monomial::ONE);
    }
    p
}

/// `Arf = Σ ā_i b̄_i`.
pub fn arf(ctx: GenusContext) -> BoolPoly {
    BoolPoly::from_monomials(ctx, (0..ctx.genus()).map(|i| Monomial(0b11 << (2 * i))))
}

/// Largest genus for which the full ideal `(Arf)` is materialised.
pub const FULL_IDEAL_MAX_GENUS: usize = 6;

/// A GF(2) echelon basis of the ideal `(Arf)`, or of its slice of polynomials
/// of degree at most `degree_bound`, keyed by leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArfIdealBasis {
    g: u8,
    degree_bound: Option<usize>,
    rows: BTreeMap<Monomial, BoolPoly>,
}

impl ArfIdealBasis {
    /// The whole ideal, spanned by `m * Arf` over all monomials `m`.
    pub fn full(ctx: GenusContext) -> Result<Self> {
        let g = ctx.genus();
        if g > FULL_IDEAL_MAX_GENUS {
            return Err(Error::GenusTooLarge { what: "the full Arf ideal", got: g, limit: FULL_IDEAL_MAX_GENUS });
        }
        let n = 1usize << ctx.dim();
        let mut order: Vec<u64> = (0..n as u64).collect();
        order.sort_by_key(|&m| Monomial(m));
        let mut pos = vec![0usize; n];
        for (i, &m) in order.iter().enumerate() {
            pos[m as usize] = i;
        }
        // pivot on the highest position so leads are leading monomials
        let flip = |i: usize| n - 1 - i;
        let mut ech = DenseEchelon::new(n);
        for m in 0..n as u64 {
            let mut row = BitRow::zeros(n);
            for i in 0..g {
                row.toggle(flip(pos[(m | 0b11 << (2 * i)) as usize]));
            }
            ech.insert(row);
        }
        let rows = ech
            .into_rows()
            .map(|r| {
                let p = BoolPoly::from_monomials(ctx, r.ones().map(|i| Monomial(order[flip(i)])));
                (p.leading().expect("nonzero row"), p)
            })
            .collect();
        Ok(Self { g: g as u8, degree_bound: None, rows })
    }

    /// The slice of the ideal in degree at most 2, which is `{0, Arf}`.
    pub fn quadratic(ctx: GenusContext) -> Self {
        let a = arf(ctx);
        let lead = a.leading().expect("Arf is nonzero");
        Self { g: ctx.genus() as u8, degree_bound: Some(2), rows: BTreeMap::from([(lead, a)]) }
    }

    /// Restricts a basis to its rows of degree at most `k`.
    pub fn truncated(&self, k: usize) -> Self {
        let rows = self
            .rows
            .iter()
            .filter(|(lead, _)| lead.degree() <= k)
            .map(|(l, p)| (*l, p.clone()))
            .collect();
        let bound = Some(self.degree_bound.map_or(k, |b| b.min(k)));
        Self { g: self.g, degree_bound: bound, rows }
    }

    pub fn genus(&self) -> usize {
        self.g as usize
    }

    pub fn degree_bound(&self) -> Option<usize> {
        self.degree_bound
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn leads(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.rows.keys().copied()
    }

    pub fn rows(&self) -> impl Iterator<Item = &BoolPoly> {
        self.rows.values()
    }
}

/// The canonical representative of `p` modulo the ideal, or `p` itself
/// when no ideal is given (the surface-with-boundary setting).
///
/// Panics if a truncated basis is applied to a polynomial above its degree bound.
pub fn normal_form(p: &BoolPoly, ideal: Option<&ArfIdealBasis>) -> BoolPoly {
    let Some(ideal) = ideal else {
        return p.clone();
    };
    assert_eq!(p.genus(), ideal.genus(), "genus mismatch");
    if let Some(k) = ideal.degree_bound {
        assert!(p.degree_at_most(k), "degree {:?} above ideal slice bound {k}", p.degree());
    }
    let mut cur = p.clone();
    for (lead, row) in ideal.rows.iter().rev() {
        if cur.contains(*lead) {
            cur.add_assign(row);
        }
    }
    cur
}

/// Action of a symplectic matrix by `x̄_i -> bar(M e_i)`.
pub fn sp_action(p: &BoolPoly, m: &Gf2Matrix) -> Result<BoolPoly> {
    let ctx = p.ctx();
    ctx.check(m.ctx().genus())?;
    if !m.is_symplectic() {
        return Err(Error::NotSymplectic);
    }
    let images: Vec<BoolPoly> = m.columns().iter().map(|&c| bar_bits(ctx, c)).collect();
    let mut out = BoolPoly::zero(ctx);
    for mono in &p.terms {
        let mut t = BoolPoly::one(ctx);
        for i in gf2::ones(mono.0) {
            t = &t * &images[i];
        }
        out.add_assign(&t);
    }
    Ok(out)
}
