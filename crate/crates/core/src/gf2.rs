//! Symplectic linear algebra over GF(2).
//!
//! Vectors of `H_1(S; Z/2)` are packed into a `u64` with the interleaved
//! layout `a1, b1, a2, b2, ...`: bit `2(i-1)` is `a_i`, bit `2(i-1)+1` is `b_i`.

use std::fmt;

use crate::error::{Error, Result};

pub const MAX_GENUS: usize = 16;

const EVEN_BITS: u64 = 0x5555_5555_5555_5555;

/// Swaps every `a_i` bit with its `b_i` partner.
#[inline]
pub fn swap_pairs(v: u64) -> u64 {
    ((v & EVEN_BITS) << 1) | ((v >> 1) & EVEN_BITS)
}

/// The intersection form on packed vectors.
#[inline]
pub fn form_bits(u: u64, v: u64) -> u64 {
    ((u & swap_pairs(v)).count_ones() & 1) as u64
}

/// Parity of the number of pairs `(a_i, b_i)` fully contained in `v`.
#[inline]
pub fn pair_parity(v: u64) -> u64 {
    ((v & (v >> 1) & EVEN_BITS).count_ones() & 1) as u64
}

/// The genus of the surface every object is tied to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GenusContext {
    g: usize,
}

impl GenusContext {
    pub fn new(g: usize) -> Result<Self> {
        if g == 0 || g > MAX_GENUS {
            return Err(Error::UnsupportedGenus(g));
        }
        Ok(Self { g })
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    /// `2g`, the rank of `H_1`.
    pub fn dim(&self) -> usize {
        2 * self.g
    }

    pub fn full_mask(&self) -> u64 {
        (1u64 << (2 * self.g)) - 1
    }

    pub fn a(&self, i: usize) -> Gf2Vector {
        assert!(i >= 1 && i <= self.g, "a{i} out of range for genus {}", self.g);
        Gf2Vector { bits: 1 << (2 * (i - 1)), g: self.g as u8 }
    }

    pub fn b(&self, i: usize) -> Gf2Vector {
        assert!(i >= 1 && i <= self.g, "b{i} out of range for genus {}", self.g);
        Gf2Vector { bits: 1 << (2 * (i - 1) + 1), g: self.g as u8 }
    }

    pub(crate) fn check(&self, other: usize) -> Result<()> {
        if self.g != other {
            Err(Error::ContextMismatch(self.g, other))
        } else {
            Ok(())
        }
    }
}

/// Name of coordinate `idx` in the interleaved layout (`a1`, `b1`, ...).
pub fn coordinate_label(idx: usize) -> String {
    let letter = if idx.is_multiple_of(2) { 'a' } else { 'b' };
    format!("{letter}{}", idx / 2 + 1)
}

/// Parses `a3` / `b12` into a coordinate index.
pub(crate) fn parse_label(s: &str, ctx: GenusContext) -> Result<usize> {
    let mut chars = s.chars();
    let off = match chars.next() {
        Some('a') => 0,
        Some('b') => 1,
        _ => return Err(Error::Parse(format!("expected a<i> or b<i>, got {s:?}"))),
    };
    let i: usize = chars
        .as_str()
        .parse()
        .map_err(|_| Error::Parse(format!("bad index in {s:?}")))?;
    if i == 0 || i > ctx.genus() {
        return Err(Error::Parse(format!(
            "{s} is out of range for genus {}",
            ctx.genus()
        )));
    }
    Ok(2 * (i - 1) + off)
}

/// An element of `H_1(S; Z/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf2Vector {
    g: u8,
    bits: u64,
}

impl Gf2Vector {
    pub fn zero(ctx: GenusContext) -> Self {
        Self { g: ctx.g as u8, bits: 0 }
    }

    pub fn from_bits(ctx: GenusContext, bits: u64) -> Result<Self> {
        if bits & !ctx.full_mask() != 0 {
            return Err(Error::DimensionMismatch {
                expected: ctx.dim(),
                got: 64 - bits.leading_zeros() as usize,
            });
        }
        Ok(Self { g: ctx.g as u8, bits })
    }

    pub fn basis(ctx: GenusContext, idx: usize) -> Self {
        assert!(idx < ctx.dim());
        Self { g: ctx.g as u8, bits: 1 << idx }
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn genus(&self) -> usize {
        self.g as usize
    }

    pub fn ctx(&self) -> GenusContext {
        GenusContext { g: self.g as usize }
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn get(&self, idx: usize) -> bool {
        self.bits >> idx & 1 == 1
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.ctx().check(other.genus())?;
        Ok(Self { g: self.g, bits: self.bits ^ other.bits })
    }

    /// Parses `"a1+b2"`; repeated labels cancel, `"0"` is the zero vector.
    pub fn parse(s: &str, ctx: GenusContext) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty vector".into()));
        }
        let mut bits = 0u64;
        for term in s.split('+') {
            let term = term.trim();
            if term == "0" {
                continue;
            }
            bits ^= 1 << parse_label(term, ctx)?;
        }
        Ok(Self { g: ctx.g as u8, bits })
    }
}

impl std::ops::Add for Gf2Vector {
    type Output = Gf2Vector;

    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.g, rhs.g, "genus mismatch");
        Self { g: self.g, bits: self.bits ^ rhs.bits }
    }
}

impl fmt::Display for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits == 0 {
            return write!(f, "0");
        }
        let labels: Vec<String> = ones(self.bits).map(coordinate_label).collect();
        write!(f, "{}", labels.join("+"))
    }
}

/// Iterates the indices of set bits, lowest first.
pub(crate) fn ones(mut v: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if v == 0 {
            None
        } else {
            let i = v.trailing_zeros() as usize;
            v &= v - 1;
            Some(i)
        }
    })
}

/// `<u, v>` on checked vectors.
pub fn gf2_form(u: Gf2Vector, v: Gf2Vector) -> Result<bool> {
    u.ctx().check(v.genus())?;
    Ok(form_bits(u.bits, v.bits) == 1)
}

/// Reduced row echelon form with pivot = lowest set bit, rows sorted by pivot.
pub(crate) fn rref(rows: impl IntoIterator<Item = u64>) -> Vec<u64> {
    let mut basis: Vec<u64> = Vec::new();
    for mut r in rows {
        for b in &basis {
            if r & (b & b.wrapping_neg()) != 0 {
                r ^= b;
            }
        }
        if r == 0 {
            continue;
        }
        let p = r & r.wrapping_neg();
        for b in basis.iter_mut() {
            if *b & p != 0 {
                *b ^= r;
            }
        }
        basis.push(r);
    }
    basis.sort_by_key(|b| b.trailing_zeros());
    basis
}

/// A linear subspace stored in canonical reduced echelon form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gf2Subspace {
    g: u8,
    rows: Vec<u64>,
}

impl Gf2Subspace {
    pub fn span(ctx: GenusContext, gens: impl IntoIterator<Item = Gf2Vector>) -> Result<Self> {
        let mut raw = Vec::new();
        for v in gens {
            ctx.check(v.genus())?;
            raw.push(v.bits);
        }
        Ok(Self { g: ctx.g as u8, rows: rref(raw) })
    }

    pub(crate) fn from_bits_unchecked(ctx: GenusContext, rows: impl IntoIterator<Item = u64>) -> Self {
        Self { g: ctx.g as u8, rows: rref(rows) }
    }

    /// Parses comma separated generators, e.g. `"a1, b1+a2"`.
    pub fn parse(s: &str, ctx: GenusContext) -> Result<Self> {
        let gens = s
            .split(',')
            .map(|t| Gf2Vector::parse(t, ctx))
            .collect::<Result<Vec<_>>>()?;
        Self::span(ctx, gens)
    }

    pub fn ctx(&self) -> GenusContext {
        GenusContext { g: self.g as usize }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn basis(&self) -> Vec<Gf2Vector> {
        self.rows.iter().map(|&bits| Gf2Vector { g: self.g, bits }).collect()
    }

    pub fn contains(&self, v: Gf2Vector) -> bool {
        let mut r = v.bits;
        for b in &self.rows {
            if r & (b & b.wrapping_neg()) != 0 {
                r ^= b;
            }
        }
        r == 0
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.basis().into_iter().all(|v| other.contains(v))
    }

    /// Every element of the subspace, starting with zero.
    pub fn elements(&self) -> Vec<u64> {
        let mut out = vec![0u64];
        for &r in &self.rows {
            let n = out.len();
            for i in 0..n {
                out.push(out[i] ^ r);
            }
        }
        out
    }

    pub fn is_symplectic(&self) -> bool {
        let gram = self
            .rows
            .iter()
            .map(|&u| {
                self.rows
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (j, &v)| acc | form_bits(u, v) << j)
            })
            .collect::<Vec<_>>();
        rref(gram).len() == self.rows.len()
    }
}

impl fmt::Display for Gf2Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.basis().iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// A nondegenerate subspace together with a symplectic basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gf2SymplecticSubspace {
    space: Gf2Subspace,
    pairs: Vec<(u64, u64)>,
}

impl Gf2SymplecticSubspace {
    /// Builds the subspace from a basis that must already satisfy the pairing table.
    pub fn from_pairs(ctx: GenusContext, pairs: &[(Gf2Vector, Gf2Vector)]) -> Result<Self> {
        let raw: Vec<(u64, u64)> = pairs
            .iter()
            .map(|(x, y)| {
                ctx.check(x.genus())?;
                ctx.check(y.genus())?;
                Ok((x.bits, y.bits))
            })
            .collect::<Result<_>>()?;
        Self::from_raw_pairs(ctx, raw)
    }

    pub(crate) fn from_raw_pairs(ctx: GenusContext, pairs: Vec<(u64, u64)>) -> Result<Self> {
        for (i, &(xi, yi)) in pairs.iter().enumerate() {
            if form_bits(xi, yi) != 1 {
                return Err(Error::NotSymplectic);
            }
            for &(xj, yj) in &pairs[i + 1..] {
                if form_bits(xi, xj) | form_bits(xi, yj) | form_bits(yi, xj) | form_bits(yi, yj) != 0 {
                    return Err(Error::NotSymplectic);
                }
            }
        }
        let space = Gf2Subspace::from_bits_unchecked(ctx, pairs.iter().flat_map(|&(x, y)| [x, y]));
        Ok(Self { space, pairs })
    }

    /// The plane `span{a_i, b_i}`.
    pub fn standard_pair(ctx: GenusContext, i: usize) -> Self {
        Self::from_pairs(ctx, &[(ctx.a(i), ctx.b(i))]).expect("standard pair")
    }

    /// `span{a_i, b_i : i in idx}` (1-based indices).
    pub fn standard(ctx: GenusContext, idx: &[usize]) -> Result<Self> {
        let pairs: Vec<_> = idx.iter().map(|&i| (ctx.a(i), ctx.b(i))).collect();
        Self::from_pairs(ctx, &pairs)
    }

    pub fn space(&self) -> &Gf2Subspace {
        &self.space
    }

    pub fn ctx(&self) -> GenusContext {
        self.space.ctx()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Number of pairs, the genus of the subspace.
    pub fn genus(&self) -> usize {
        self.pairs.len()
    }

    pub fn raw_pairs(&self) -> &[(u64, u64)] {
        &self.pairs
    }

    pub fn pairs(&self) -> Vec<(Gf2Vector, Gf2Vector)> {
        let g = self.space.g;
        self.pairs
            .iter()
            .map(|&(x, y)| (Gf2Vector { g, bits: x }, Gf2Vector { g, bits: y }))
            .collect()
    }
}

impl fmt::Display for Gf2SymplecticSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.space.fmt(f)
    }
}

/// Symplectic Gram-Schmidt on the canonical basis of `s`.
pub fn symplectic_basis_of(s: &Gf2Subspace) -> Result<Gf2SymplecticSubspace> {
    let mut pool: Vec<u64> = s.rows.clone();
    let mut pairs = Vec::with_capacity(pool.len() / 2);
    while !pool.is_empty() {
        let x = pool[0];
        let j = pool
            .iter()
            .position(|&v| form_bits(x, v) == 1)
            .ok_or(Error::NotSymplectic)?;
        let y = pool.remove(j);
        pool.remove(0);
        for v in pool.iter_mut() {
            let (cy, cx) = (form_bits(*v, y), form_bits(*v, x));
            *v ^= (x & cy.wrapping_neg()) ^ (y & cx.wrapping_neg());
        }
        pairs.push((x, y));
    }
    Ok(Gf2SymplecticSubspace { space: s.clone(), pairs })
}

/// `s^perp` with respect to the intersection form.
pub fn orthogonal_complement(s: &Gf2Subspace) -> Gf2Subspace {
    let ctx = s.ctx();
    let eqs = rref(s.rows.iter().map(|&r| swap_pairs(r)));
    let pivots: u64 = eqs.iter().fold(0, |acc, r| acc | (r & r.wrapping_neg()));
    let free = ctx.full_mask() & !pivots;
    let gens = ones(free).map(|c| {
        let mut v = 1u64 << c;
        for r in &eqs {
            if r >> c & 1 == 1 {
                v |= r & r.wrapping_neg();
            }
        }
        v
    });
    Gf2Subspace::from_bits_unchecked(ctx, gens.collect::<Vec<_>>())
}

/// Number of 2-dimensional symplectic subspaces of `(Z/2)^{2g}`.
pub fn symplectic_plane_count(g: usize) -> u128 {
    let n = 1u128 << (2 * g);
    (n - 1) * (n / 2) / 6
}

/// Streams every symplectic plane exactly once as its canonical triple
/// `u < v < u ^ v` with `<u, v> = 1`, yielded as `(u, v)`.
///
/// `u_range` restricts the smallest element, which lets callers split the
/// stream across threads.
pub fn symplectic_planes_raw(
    ctx: GenusContext,
    u_range: std::ops::Range<u64>,
) -> impl Iterator<Item = (u64, u64)> {
    let top = ctx.full_mask() + 1;
    let lo = u_range.start.max(1);
    let hi = u_range.end.min(top);
    (lo..hi).flat_map(move |u| {
        (u + 1..top).filter_map(move |v| {
            if v < (u ^ v) && form_bits(u, v) == 1 {
                Some((u, v))
            } else {
                None
            }
        })
    })
}

/// Every 2-dimensional symplectic subspace, in canonical order.
pub fn enumerate_symplectic_2subspaces(
    ctx: GenusContext,
) -> impl Iterator<Item = Gf2SymplecticSubspace> {
    symplectic_planes_raw(ctx, 0..u64::MAX).map(move |(u, v)| Gf2SymplecticSubspace {
        space: Gf2Subspace::from_bits_unchecked(ctx, [u, v]),
        pairs: vec![(u, v)],
    })
}

/// A linear map of `(Z/2)^{2g}` stored by the images of the basis vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    g: u8,
    cols: Vec<u64>,
}

impl Gf2Matrix {
    pub fn identity(ctx: GenusContext) -> Self {
        Self { g: ctx.g as u8, cols: (0..ctx.dim()).map(|i| 1u64 << i).collect() }
    }

    /// The matrix whose `i`-th column is `cols[i]`.
    pub fn from_columns(ctx: GenusContext, cols: Vec<u64>) -> Result<Self> {
        if cols.len() != ctx.dim() {
            return Err(Error::DimensionMismatch { expected: ctx.dim(), got: cols.len() });
        }
        if cols.iter().any(|c| c & !ctx.full_mask() != 0) {
            return Err(Error::DimensionMismatch { expected: ctx.dim(), got: 64 });
        }
        Ok(Self { g: ctx.g as u8, cols })
    }

    /// The symplectic transvection `x -> x + <x, v> v`.
    pub fn transvection(v: Gf2Vector) -> Self {
        let ctx = v.ctx();
        let cols = (0..ctx.dim())
            .map(|i| {
                let e = 1u64 << i;
                e ^ (v.bits & form_bits(e, v.bits).wrapping_neg())
            })
            .collect();
        Self { g: v.g, cols }
    }

    pub fn ctx(&self) -> GenusContext {
        GenusContext { g: self.g as usize }
    }

    pub fn columns(&self) -> &[u64] {
        &self.cols
    }

    pub fn apply_bits(&self, v: u64) -> u64 {
        ones(v).fold(0, |acc, i| acc ^ self.cols[i])
    }

    pub fn apply(&self, v: Gf2Vector) -> Gf2Vector {
        assert_eq!(v.g, self.g, "genus mismatch");
        Gf2Vector { g: self.g, bits: self.apply_bits(v.bits) }
    }

    /// `self * other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.g, other.g, "genus mismatch");
        Self { g: self.g, cols: other.cols.iter().map(|&c| self.apply_bits(c)).collect() }
    }

    pub fn is_symplectic(&self) -> bool {
        let n = self.cols.len();
        (0..n).all(|i| {
            (0..n).all(|j| form_bits(self.cols[i], self.cols[j]) == form_bits(1 << i, 1 << j))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(g: usize) -> GenusContext {
        GenusContext::new(g).unwrap()
    }

    #[test]
    fn form_examples() {
        let c = ctx(2);
        assert!(gf2_form(c.a(1), c.b(1)).unwrap());
        assert!(!gf2_form(c.a(1), c.a(2)).unwrap());
        let v = Gf2Vector::parse("a1+b2", c).unwrap();
        assert!(gf2_form(v, c.b(1)).unwrap());
        assert!(gf2_form(ctx(3).a(1), c.b(1)).is_err());
    }

    #[test]
    fn form_matches_matrix_definition() {
        // independent route: sum over i of (u_ai v_bi + u_bi v_ai)
        let c = ctx(3);
        for u in 0..64u64 {
            for v in 0..64u64 {
                let mut s = 0;
                for i in 0..3 {
                    s ^= (u >> (2 * i) & 1) & (v >> (2 * i + 1) & 1);
                    s ^= (u >> (2 * i + 1) & 1) & (v >> (2 * i) & 1);
                }
                assert_eq!(form_bits(u, v), s, "{u} {v}");
            }
        }
        let _ = c;
    }

    #[test]
    fn vector_text_round_trip() {
        let c = ctx(3);
        for s in ["a1+b2", "b3", "a1+b1+a2+b2+a3+b3", "0"] {
            assert_eq!(Gf2Vector::parse(s, c).unwrap().to_string(), s);
        }
        assert_eq!(Gf2Vector::parse("a1 + a1 + b1", c).unwrap().to_string(), "b1");
        assert!(Gf2Vector::parse("a4", c).is_err());
        assert!(Gf2Vector::parse("c1", c).is_err());
        assert!(Gf2Vector::parse("", c).is_err());
    }

    #[test]
    fn gram_schmidt_examples() {
        let c = ctx(2);
        let s = Gf2Subspace::parse("a1, b1", c).unwrap();
        let sb = symplectic_basis_of(&s).unwrap();
        assert_eq!(sb.pairs(), vec![(c.a(1), c.b(1))]);
        let s = Gf2Subspace::parse("a1, a2", c).unwrap();
        assert_eq!(symplectic_basis_of(&s), Err(Error::NotSymplectic));
        let full = Gf2Subspace::parse("a1,b1,a2,b2", ctx(2)).unwrap();
        let sb = symplectic_basis_of(&full).unwrap();
        assert_eq!(sb.genus(), 2);
        assert!(Gf2SymplecticSubspace::from_raw_pairs(c, sb.raw_pairs().to_vec()).is_ok());
    }

    #[test]
    fn complement_examples() {
        let c = ctx(2);
        let s = Gf2Subspace::parse("a1, b1", c).unwrap();
        let perp = orthogonal_complement(&s);
        assert_eq!(perp, Gf2Subspace::parse("a2, b2", c).unwrap());
        assert_eq!(orthogonal_complement(&perp), s);
        let l = Gf2Subspace::parse("a1", c).unwrap();
        assert_eq!(orthogonal_complement(&l), Gf2Subspace::parse("a1, a2, b2", c).unwrap());
    }

    #[test]
    fn plane_counts() {
        let expected = [1u128, 20, 336, 5440, 87296];
        for (g, &n) in (1..=5).zip(expected.iter()) {
            assert_eq!(symplectic_plane_count(g), n);
        }
        for g in 1..=3 {
            assert_eq!(enumerate_symplectic_2subspaces(ctx(g)).count() as u128, expected[g - 1]);
        }
    }

    #[test]
    fn plane_enumeration_matches_brute_force() {
        // oracle: collect spans of all symplectic pairs, dedupe
        for g in 1..=3 {
            let c = ctx(g);
            let top = 1u64 << (2 * g);
            let mut seen = std::collections::HashSet::new();
            for u in 1..top {
                for v in 1..top {
                    if form_bits(u, v) == 1 {
                        let mut key = [u, v, u ^ v];
                        key.sort();
                        seen.insert(key);
                    }
                }
            }
            let ours: std::collections::HashSet<[u64; 3]> = symplectic_planes_raw(c, 0..u64::MAX)
                .map(|(u, v)| [u, v, u ^ v])
                .collect();
            assert_eq!(ours, seen);
        }
    }

    #[test]
    fn split_ranges_partition_the_stream() {
        let c = ctx(3);
        let whole: Vec<_> = symplectic_planes_raw(c, 0..u64::MAX).collect();
        let mut parts: Vec<_> = symplectic_planes_raw(c, 0..20).collect();
        parts.extend(symplectic_planes_raw(c, 20..64));
        assert_eq!(whole, parts);
    }

    #[test]
    fn transvections_are_symplectic() {
        let c = ctx(3);
        for v in 0..64u64 {
            let t = Gf2Matrix::transvection(Gf2Vector::from_bits(c, v).unwrap());
            assert!(t.is_symplectic());
            assert_eq!(t.compose(&t), Gf2Matrix::identity(c));
        }
        let bad = Gf2Matrix::from_columns(ctx(1), vec![1, 1]).unwrap();
        assert!(!bad.is_symplectic());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn form_is_bilinear_and_alternating(u in 0u64..1 << 10, v in 0u64..1 << 10, w in 0u64..1 << 10) {
                prop_assert_eq!(form_bits(u ^ v, w), form_bits(u, w) ^ form_bits(v, w));
                prop_assert_eq!(form_bits(u, u), 0);
                prop_assert_eq!(form_bits(u, v), form_bits(v, u));
            }

            #[test]
            fn complement_is_involutive(gens in proptest::collection::vec(0u64..1 << 8, 0..6)) {
                let c = GenusContext::new(4).unwrap();
                let s = Gf2Subspace::from_bits_unchecked(c, gens);
                let perp = orthogonal_complement(&s);
                prop_assert_eq!(perp.dim() + s.dim(), 8);
                prop_assert_eq!(orthogonal_complement(&perp), s.clone());
                for &x in s.rows() {
                    for &y in perp.rows() {
                        prop_assert_eq!(form_bits(x, y), 0);
                    }
                }
            }

            #[test]
            fn gram_schmidt_on_symplectic_spans(gens in proptest::collection::vec(0u64..1 << 8, 0..6)) {
                let c = GenusContext::new(4).unwrap();
                let s = Gf2Subspace::from_bits_unchecked(c, gens);
                match symplectic_basis_of(&s) {
                    Ok(sb) => {
                        prop_assert!(s.is_symplectic());
                        prop_assert_eq!(sb.dim(), 2 * sb.genus());
                        prop_assert!(Gf2SymplecticSubspace::from_raw_pairs(c, sb.raw_pairs().to_vec()).is_ok());
                        prop_assert_eq!(sb.space(), &s);
                    }
                    Err(_) => prop_assert!(!s.is_symplectic()),
                }
            }
        }
    }
}
