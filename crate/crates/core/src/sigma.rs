//! The map `σ(V) = Σ x̄_i ȳ_i` from symplectic subspaces to `B'_2`.

use std::fmt;

use crate::boolean::{bar, normal_form, ArfIdealBasis, BoolPoly, Monomial};
use crate::error::{Error, Result};
use crate::gf2::{self, form_bits, pair_parity, GenusContext, Gf2Subspace, Gf2SymplecticSubspace};
use crate::lattice::IntSymplecticSubgroup;
use crate::wedge::BitRow;

/// Closed surfaces reduce modulo `(Arf)`; surfaces with one boundary
/// component do not.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Mode {
    #[default]
    Closed,
    Boundary,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed" => Ok(Mode::Closed),
            "boundary" => Ok(Mode::Boundary),
            _ => Err(Error::Parse(format!("unknown mode {s:?}"))),
        }
    }
}

/// A value of σ, always in normal form for its mode.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SigmaValue {
    mode: Mode,
    poly: BoolPoly,
}

impl SigmaValue {
    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn poly(&self) -> &BoolPoly {
        &self.poly
    }

    /// Reduces an arbitrary polynomial of degree at most 2.
    pub fn from_poly(p: &BoolPoly, mode: Mode) -> Result<Self> {
        if !p.degree_at_most(2) {
            return Err(Error::NotGenus1Image);
        }
        let poly = match mode {
            Mode::Closed => normal_form(p, Some(&ArfIdealBasis::quadratic(p.ctx()))),
            Mode::Boundary => p.clone(),
        };
        Ok(Self { mode, poly })
    }
}

impl fmt::Display for SigmaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

/// Coordinates on degree-at-most-2 polynomials: index 0 is the constant,
/// `1 + i` the variable `i`, then pairs `{i < j}` at `1 + 2g + C(j,2) + i`.
/// In closed mode the last pair `a_g b_g`, the leading monomial of Arf, is
/// dropped, leaving a basis of `B'_2` of size `2g^2 + g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadraticBasis {
    g: usize,
    mode: Mode,
}

impl QuadraticBasis {
    pub fn new(ctx: GenusContext, mode: Mode) -> Self {
        Self { g: ctx.genus(), mode }
    }

    pub fn dim(&self) -> usize {
        let n = 2 * self.g;
        let full = 1 + n + n * (n - 1) / 2;
        match self.mode {
            Mode::Closed => full - 1,
            Mode::Boundary => full,
        }
    }

    fn raw_index(&self, m: Monomial) -> Option<usize> {
        let n = 2 * self.g;
        match m.degree() {
            0 => Some(0),
            1 => Some(1 + m.0.trailing_zeros() as usize),
            2 => {
                let i = m.0.trailing_zeros() as usize;
                let j = 63 - m.0.leading_zeros() as usize;
                Some(1 + n + j * (j - 1) / 2 + i)
            }
            _ => None,
        }
    }

    pub fn index_of(&self, m: Monomial) -> Option<usize> {
        self.raw_index(m).filter(|&i| i < self.dim())
    }

    pub fn monomial(&self, idx: usize) -> Monomial {
        assert!(idx < self.dim());
        let n = 2 * self.g;
        if idx == 0 {
            return Monomial::ONE;
        }
        if idx <= n {
            return Monomial::var(idx - 1);
        }
        let mut r = idx - 1 - n;
        let mut j = 1;
        while r >= j {
            r -= j;
            j += 1;
        }
        Monomial((1 << r) | (1 << j))
    }

    /// Coordinates of a value already in normal form.
    pub fn coords(&self, s: &SigmaValue) -> BitRow {
        assert_eq!(s.mode, self.mode, "mode mismatch");
        let mut row = BitRow::zeros(self.dim());
        for &m in s.poly.terms() {
            row.toggle(self.index_of(m).expect("normal form has no Arf lead"));
        }
        row
    }

    pub fn value(&self, row: &BitRow) -> SigmaValue {
        let ctx = GenusContext::new(self.g).expect("valid genus");
        let poly = BoolPoly::from_monomials(ctx, row.ones().map(|i| self.monomial(i)));
        SigmaValue { mode: self.mode, poly }
    }
}

/// σ of a symplectic subspace by multiplying out `Σ bar(x_i) bar(y_i)`.
pub fn sigma_of_subspace(v: &Gf2SymplecticSubspace, mode: Mode) -> SigmaValue {
    let ctx = v.ctx();
    let mut p = BoolPoly::zero(ctx);
    for (x, y) in v.pairs() {
        p.add_assign(&(&bar(x) * &bar(y)));
    }
    SigmaValue::from_poly(&p, mode).expect("σ has degree at most 2")
}

/// σ of the mod-2 reduction of an integral symplectic subgroup.
pub fn sigma_of_int_subgroup(u: &IntSymplecticSubgroup, mode: Mode) -> Result<SigmaValue> {
    Ok(sigma_of_subspace(&u.reduce_mod2()?, mode))
}

/// σ in coordinates straight from packed symplectic pairs, without building
/// polynomials. The quadratic part of `bar(x) bar(y)` is `x ∧ y`, the linear
/// part is `x ∧ y` on the diagonal plus the constant corrections.
pub fn sigma_coords_raw(ctx: GenusContext, pairs: &[(u64, u64)], mode: Mode) -> BitRow {
    let g = ctx.genus();
    let n = 2 * g;
    let full = QuadraticBasis::new(ctx, Mode::Boundary);
    let mut row = BitRow::zeros(full.dim());
    let mut cst = 0u64;
    let mut lin = 0u64;
    for &(x, y) in pairs {
        let (cx, cy) = (pair_parity(x), pair_parity(y));
        cst ^= cx & cy;
        lin ^= (x & y) ^ (x & cy.wrapping_neg()) ^ (y & cx.wrapping_neg());
        for i in gf2::ones(x) {
            for j in gf2::ones(y & !(1 << i)) {
                let (lo, hi) = if i < j { (i, j) } else { (j, i) };
                row.toggle(1 + n + hi * (hi - 1) / 2 + lo);
            }
        }
    }
    if cst == 1 {
        row.toggle(0);
    }
    for i in gf2::ones(lin) {
        row.toggle(1 + i);
    }
    if mode == Mode::Boundary {
        return row;
    }
    let lead = full.dim() - 1;
    if row.get(lead) {
        for k in 0..g {
            let (lo, hi) = (2 * k, 2 * k + 1);
            row.toggle(1 + n + hi * (hi - 1) / 2 + lo);
        }
    }
    let mut out = BitRow::zeros(lead);
    for i in row.ones() {
        out.toggle(i);
    }
    out
}

pub fn sigma_coords(v: &Gf2SymplecticSubspace, mode: Mode) -> BitRow {
    sigma_coords_raw(v.ctx(), v.raw_pairs(), mode)
}

/// The genus-1 subspace `V` with `σ(V) = s`.
///
/// The quadratic part of `σ(V)` is the 2-vector `x ∧ y`, known up to the
/// quadratic part of Arf in closed mode. Contracting a decomposable 2-vector
/// against the basis recovers its plane; each candidate is then confirmed by
/// recomputing σ. Below genus 3 σ is not injective on planes and the first
/// candidate is returned.
pub fn recover_genus1_subspace(s: &SigmaValue) -> Result<Gf2SymplecticSubspace> {
    let ctx = s.poly.ctx();
    if !s.poly.degree_at_most(2) {
        return Err(Error::NotGenus1Image);
    }
    let n = ctx.dim();
    let mut omega = vec![0u64; n];
    for m in s.poly.terms().iter().filter(|m| m.degree() == 2) {
        let i = m.0.trailing_zeros() as usize;
        let j = 63 - m.0.leading_zeros() as usize;
        omega[i] ^= 1 << j;
        omega[j] ^= 1 << i;
    }
    let mut candidates = vec![omega.clone()];
    if s.mode == Mode::Closed {
        let mut alt = omega;
        for k in 0..ctx.genus() {
            alt[2 * k] ^= 1 << (2 * k + 1);
            alt[2 * k + 1] ^= 1 << (2 * k);
        }
        candidates.push(alt);
    }
    for rows in candidates {
        let plane = Gf2Subspace::span(
            ctx,
            rows.iter().map(|&r| gf2::Gf2Vector::from_bits(ctx, r).expect("in range")),
        )?;
        if plane.dim() != 2 {
            continue;
        }
        let (u, v) = (plane.rows()[0], plane.rows()[1]);
        if form_bits(u, v) != 1 {
            continue;
        }
        let cand = gf2::symplectic_basis_of(&plane)?;
        if &sigma_of_subspace(&cand, s.mode) == s {
            return Ok(cand);
        }
    }
    Err(Error::NotGenus1Image)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::{enumerate_symplectic_2subspaces, orthogonal_complement, symplectic_basis_of};
    use std::collections::HashSet;

    fn ctx(g: usize) -> GenusContext {
        GenusContext::new(g).unwrap()
    }

    #[test]
    fn sigma_examples() {
        let c = ctx(3);
        let v = Gf2SymplecticSubspace::standard_pair(c, 1);
        assert_eq!(sigma_of_subspace(&v, Mode::Closed).to_string(), "a1*b1");
        let w = Gf2SymplecticSubspace::standard(c, &[1, 2]).unwrap();
        assert_eq!(sigma_of_subspace(&w, Mode::Closed).to_string(), "a1*b1 + a2*b2");
        // the same subspace at genus 2 is everything, and σ is Arf
        let c2 = ctx(2);
        let w2 = Gf2SymplecticSubspace::standard(c2, &[1, 2]).unwrap();
        assert!(sigma_of_subspace(&w2, Mode::Closed).poly().is_zero());
        assert_eq!(sigma_of_subspace(&w2, Mode::Boundary).to_string(), "a1*b1 + a2*b2");
    }

    #[test]
    fn sigma_reduces_arf_lead() {
        let c = ctx(2);
        let v = Gf2SymplecticSubspace::standard_pair(c, 2);
        assert_eq!(sigma_of_subspace(&v, Mode::Closed).to_string(), "a1*b1");
    }

    #[test]
    fn sigma_is_independent_of_the_symplectic_basis() {
        let c = ctx(3);
        for v in enumerate_symplectic_2subspaces(c) {
            let (u, w) = v.raw_pairs()[0];
            let other = Gf2SymplecticSubspace::from_raw_pairs(c, vec![(u ^ w, w)]).unwrap();
            assert_eq!(sigma_of_subspace(&v, Mode::Boundary), sigma_of_subspace(&other, Mode::Boundary));
        }
    }

    #[test]
    fn coordinate_route_matches_polynomial_route() {
        for g in 1..=3 {
            let c = ctx(g);
            for mode in [Mode::Closed, Mode::Boundary] {
                let qb = QuadraticBasis::new(c, mode);
                for v in enumerate_symplectic_2subspaces(c) {
                    let s = sigma_of_subspace(&v, mode);
                    assert_eq!(sigma_coords(&v, mode), qb.coords(&s));
                    assert_eq!(qb.value(&qb.coords(&s)), s);
                }
            }
        }
    }

    #[test]
    fn quadratic_basis_indexing() {
        for g in 1..=5 {
            let qb = QuadraticBasis::new(ctx(g), Mode::Closed);
            assert_eq!(qb.dim(), 2 * g * g + g);
            for i in 0..qb.dim() {
                assert_eq!(qb.index_of(qb.monomial(i)), Some(i));
            }
            assert_eq!(qb.index_of(Monomial(0b11 << (2 * g - 2))), None);
        }
    }

    #[test]
    fn recovery_matches_enumeration_oracle() {
        for g in [3usize, 4] {
            let c = ctx(g);
            let mut seen = HashSet::new();
            for v in enumerate_symplectic_2subspaces(c) {
                let s = sigma_of_subspace(&v, Mode::Closed);
                assert!(seen.insert(s.clone()), "σ not injective at g={g}");
                assert_eq!(recover_genus1_subspace(&s).unwrap().space(), v.space());
            }
        }
    }

    #[test]
    fn sigma_is_not_injective_at_genus_2() {
        let c = ctx(2);
        let distinct: HashSet<_> = enumerate_symplectic_2subspaces(c)
            .map(|v| sigma_of_subspace(&v, Mode::Closed))
            .collect();
        assert_eq!(distinct.len(), 10);
    }

    #[test]
    fn recovery_rejects_non_images() {
        let c = ctx(3);
        let p = BoolPoly::parse("a1*b1 + a2*b2", c).unwrap();
        let s = SigmaValue::from_poly(&p, Mode::Boundary).unwrap();
        assert_eq!(recover_genus1_subspace(&s), Err(Error::NotGenus1Image));
        // modulo Arf this is the third handle
        let s = SigmaValue::from_poly(&p, Mode::Closed).unwrap();
        let w = recover_genus1_subspace(&s).unwrap();
        assert!(w.space().contains(crate::gf2::Gf2Vector::basis(c, 4)));
        let iso = BoolPoly::parse("a1*a2", c).unwrap();
        let s = SigmaValue::from_poly(&iso, Mode::Closed).unwrap();
        assert_eq!(recover_genus1_subspace(&s), Err(Error::NotGenus1Image));
        let cubic = BoolPoly::parse("a1*b1*a2", c).unwrap();
        assert!(SigmaValue::from_poly(&cubic, Mode::Closed).is_err());
    }

    #[test]
    fn sigma_of_complement_in_closed_mode() {
        for g in 2..=3 {
            let c = ctx(g);
            for v in enumerate_symplectic_2subspaces(c) {
                let perp = symplectic_basis_of(&orthogonal_complement(v.space())).unwrap();
                assert_eq!(sigma_of_subspace(&v, Mode::Closed), sigma_of_subspace(&perp, Mode::Closed));
            }
        }
    }

    #[test]
    fn mode_parses() {
        assert_eq!("closed".parse::<Mode>().unwrap(), Mode::Closed);
        assert_eq!("boundary".parse::<Mode>().unwrap(), Mode::Boundary);
        assert!("open".parse::<Mode>().is_err());
    }
}
