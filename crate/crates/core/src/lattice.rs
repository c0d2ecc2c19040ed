//! Integral symplectic algebra on `H_1(S; Z) = Z^{2g}`.
//!
//! Coordinates use the interleaved layout `a1, b1, a2, b2, ...` shared with
//! [`crate::gf2`]. All arithmetic is arbitrary precision.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::gf2::{coordinate_label, parse_label, GenusContext, Gf2SymplecticSubspace, Gf2Vector};

/// An element of `Z^{2g}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVector {
    coords: Vec<BigInt>,
}

impl IntVector {
    pub fn zero(ctx: GenusContext) -> Self {
        Self { coords: vec![BigInt::zero(); ctx.dim()] }
    }

    pub fn basis(ctx: GenusContext, idx: usize) -> Self {
        let mut v = Self::zero(ctx);
        v.coords[idx] = BigInt::one();
        v
    }

    pub fn a(ctx: GenusContext, i: usize) -> Self {
        assert!(i >= 1 && i <= ctx.genus());
        Self::basis(ctx, 2 * (i - 1))
    }

    pub fn b(ctx: GenusContext, i: usize) -> Self {
        assert!(i >= 1 && i <= ctx.genus());
        Self::basis(ctx, 2 * (i - 1) + 1)
    }

    pub fn from_coords(ctx: GenusContext, coords: Vec<BigInt>) -> Result<Self> {
        if coords.len() != ctx.dim() {
            return Err(Error::DimensionMismatch { expected: ctx.dim(), got: coords.len() });
        }
        Ok(Self { coords })
    }

    pub fn from_i64s(ctx: GenusContext, coords: &[i64]) -> Result<Self> {
        Self::from_coords(ctx, coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn genus(&self) -> usize {
        self.coords.len() / 2
    }

    pub fn ctx(&self) -> GenusContext {
        GenusContext::new(self.genus()).expect("valid genus")
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self { coords: self.coords.iter().map(|c| c * k).collect() }
    }

    /// `k * self` for small `k`.
    pub fn times(&self, k: i64) -> Self {
        self.scale(&BigInt::from(k))
    }

    /// gcd of the coordinates, nonnegative.
    pub fn content(&self) -> BigInt {
        self.coords.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    pub fn is_even(&self) -> bool {
        self.coords.iter().all(|c| c.is_even())
    }

    /// Exact division; panics if `d` does not divide every coordinate.
    pub fn div_exact(&self, d: &BigInt) -> Self {
        Self {
            coords: self
                .coords
                .iter()
                .map(|c| {
                    let (q, r) = c.div_rem(d);
                    assert!(r.is_zero(), "inexact division");
                    q
                })
                .collect(),
        }
    }

    /// Divides by the content and makes the first nonzero coordinate positive.
    pub fn primitive_normalized(&self) -> Self {
        let c = self.content();
        if c.is_zero() {
            return self.clone();
        }
        let v = self.div_exact(&c);
        match v.coords.iter().find(|x| !x.is_zero()) {
            Some(x) if x.is_negative() => -&v,
            _ => v,
        }
    }

    pub fn reduce_mod2(&self) -> Gf2Vector {
        let bits = self
            .coords
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, c)| if c.is_odd() { acc | 1 << i } else { acc });
        Gf2Vector::from_bits(self.ctx(), bits).expect("in range")
    }

    /// Parses `"2a1 - b3 + 4b4"`; `"0"` is the zero vector.
    pub fn parse(s: &str, ctx: GenusContext) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty vector".into()));
        }
        let mut v = Self::zero(ctx);
        let bytes = compact.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let mut neg = false;
            if bytes[i] == b'+' || bytes[i] == b'-' {
                neg = bytes[i] == b'-';
                i += 1;
            } else if i > 0 {
                return Err(Error::Parse(format!("expected + or - in {s:?}")));
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let coef: BigInt = if i > start {
                compact[start..i].parse().expect("digits")
            } else {
                BigInt::one()
            };
            if i < bytes.len() && bytes[i] == b'*' {
                i += 1;
            }
            let lstart = i;
            if i < bytes.len() && (bytes[i] == b'a' || bytes[i] == b'b') {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if lstart == i {
                if start == lstart || !coef.is_zero() {
                    return Err(Error::Parse(format!("missing basis label in {s:?}")));
                }
                continue;
            }
            let idx = parse_label(&compact[lstart..i], ctx)?;
            let coef = if neg { -coef } else { coef };
            v.coords[idx] += coef;
        }
        Ok(v)
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let m = c.abs();
            if !m.is_one() {
                write!(f, "{m}")?;
            }
            write!(f, "{}", coordinate_label(i))?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl std::ops::Add<&IntVector> for &IntVector {
    type Output = IntVector;

    fn add(self, rhs: &IntVector) -> IntVector {
        assert_eq!(self.coords.len(), rhs.coords.len(), "genus mismatch");
        IntVector { coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect() }
    }
}

impl std::ops::Sub<&IntVector> for &IntVector {
    type Output = IntVector;

    fn sub(self, rhs: &IntVector) -> IntVector {
        assert_eq!(self.coords.len(), rhs.coords.len(), "genus mismatch");
        IntVector { coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect() }
    }
}

impl std::ops::Neg for &IntVector {
    type Output = IntVector;

    fn neg(self) -> IntVector {
        IntVector { coords: self.coords.iter().map(|c| -c).collect() }
    }
}

fn form_unchecked(x: &IntVector, y: &IntVector) -> BigInt {
    let mut s = BigInt::zero();
    for i in 0..x.genus() {
        s += &x.coords[2 * i] * &y.coords[2 * i + 1];
        s -= &x.coords[2 * i + 1] * &y.coords[2 * i];
    }
    s
}

/// The algebraic intersection number, `a_i · b_i = 1`.
pub fn int_form(x: &IntVector, y: &IntVector) -> Result<BigInt> {
    if x.coords.len() != y.coords.len() {
        return Err(Error::ContextMismatch(x.genus(), y.genus()));
    }
    Ok(form_unchecked(x, y))
}

/// Sum of `coeffs[i] * vs[i]`.
pub fn combine(ctx: GenusContext, coeffs: &[BigInt], vs: &[IntVector]) -> IntVector {
    let mut out = IntVector::zero(ctx);
    for (c, v) in coeffs.iter().zip(vs) {
        if !c.is_zero() {
            out = &out + &v.scale(c);
        }
    }
    out
}

/// A pair with `x · y = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntSymplecticPair {
    pub x: IntVector,
    pub y: IntVector,
}

impl IntSymplecticPair {
    pub fn new(x: IntVector, y: IntVector) -> Result<Self> {
        let f = int_form(&x, &y)?;
        if !f.is_one() {
            return Err(Error::NotUnimodular(format!("x · y = {f} for x = {x}, y = {y}")));
        }
        Ok(Self { x, y })
    }

    pub fn standard(ctx: GenusContext, i: usize) -> Self {
        Self { x: IntVector::a(ctx, i), y: IntVector::b(ctx, i) }
    }
}

/// A subgroup with a symplectic basis; it is automatically a direct summand.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntSymplecticSubgroup {
    g: usize,
    pairs: Vec<IntSymplecticPair>,
}

impl IntSymplecticSubgroup {
    pub fn new(ctx: GenusContext, pairs: Vec<IntSymplecticPair>) -> Result<Self> {
        for p in &pairs {
            ctx.check(p.x.genus())?;
            ctx.check(p.y.genus())?;
        }
        for (i, p) in pairs.iter().enumerate() {
            for q in &pairs[i + 1..] {
                for (u, v) in [(&p.x, &q.x), (&p.x, &q.y), (&p.y, &q.x), (&p.y, &q.y)] {
                    let f = form_unchecked(u, v);
                    if !f.is_zero() {
                        return Err(Error::NotUnimodular(format!("{u} · {v} = {f} across pairs")));
                    }
                }
            }
        }
        Ok(Self { g: ctx.genus(), pairs })
    }

    /// Validates a flat list `x1, y1, x2, y2, ...`.
    pub fn from_vectors(ctx: GenusContext, vs: Vec<IntVector>) -> Result<Self> {
        if !vs.len().is_multiple_of(2) {
            return Err(Error::NotUnimodular(format!("odd number of vectors ({})", vs.len())));
        }
        let mut pairs = Vec::with_capacity(vs.len() / 2);
        let mut it = vs.into_iter();
        while let (Some(x), Some(y)) = (it.next(), it.next()) {
            pairs.push(IntSymplecticPair::new(x, y)?);
        }
        Self::new(ctx, pairs)
    }

    pub fn standard(ctx: GenusContext, idx: &[usize]) -> Self {
        Self { g: ctx.genus(), pairs: idx.iter().map(|&i| IntSymplecticPair::standard(ctx, i)).collect() }
    }

    /// Parses `"x1, y1, x2, y2"` in the integer vector syntax.
    pub fn parse(s: &str, ctx: GenusContext) -> Result<Self> {
        let vs = s
            .split(',')
            .map(|t| IntVector::parse(t, ctx))
            .collect::<Result<Vec<_>>>()?;
        Self::from_vectors(ctx, vs)
    }

    pub fn ctx(&self) -> GenusContext {
        GenusContext::new(self.g).expect("valid genus")
    }

    pub fn pairs(&self) -> &[IntSymplecticPair] {
        &self.pairs
    }

    pub fn rank(&self) -> usize {
        2 * self.pairs.len()
    }

    pub fn vectors(&self) -> Vec<IntVector> {
        self.pairs.iter().flat_map(|p| [p.x.clone(), p.y.clone()]).collect()
    }

    /// Orthogonal projection onto the subgroup, `Σ (v·y_j) x_j − (v·x_j) y_j`.
    pub fn project(&self, v: &IntVector) -> IntVector {
        let mut out = IntVector::zero(self.ctx());
        for p in &self.pairs {
            let cx = form_unchecked(v, &p.y);
            let cy = -form_unchecked(v, &p.x);
            out = &(&out + &p.x.scale(&cx)) + &p.y.scale(&cy);
        }
        out
    }

    /// The component of `v` in the orthogonal complement.
    pub fn residual(&self, v: &IntVector) -> IntVector {
        v - &self.project(v)
    }

    pub fn contains(&self, v: &IntVector) -> bool {
        v.genus() == self.g && self.residual(v).is_zero()
    }

    pub fn contains_subgroup(&self, other: &Self) -> bool {
        other.vectors().iter().all(|v| self.contains(v))
    }

    /// Equality as subgroups, independent of the chosen bases.
    pub fn same_as(&self, other: &Self) -> bool {
        self.g == other.g && self.rank() == other.rank() && self.contains_subgroup(other)
    }

    pub fn orthogonal_to(&self, other: &Self) -> bool {
        self.vectors()
            .iter()
            .all(|u| other.vectors().iter().all(|v| form_unchecked(u, v).is_zero()))
    }

    pub fn orthogonal_to_vector(&self, v: &IntVector) -> bool {
        self.vectors().iter().all(|u| form_unchecked(u, v).is_zero())
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        let mut pairs = self.pairs.clone();
        pairs.extend(other.pairs.iter().cloned());
        Self::new(self.ctx(), pairs)
    }

    pub fn reduce_mod2(&self) -> Result<Gf2SymplecticSubspace> {
        let pairs: Vec<(Gf2Vector, Gf2Vector)> =
            self.pairs.iter().map(|p| (p.x.reduce_mod2(), p.y.reduce_mod2())).collect();
        Gf2SymplecticSubspace::from_pairs(self.ctx(), &pairs)
    }
}

impl fmt::Display for IntSymplecticSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vectors().iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// gcd of `values` (nonnegative) and coefficients realising it.
pub fn bezout(values: &[BigInt]) -> (BigInt, Vec<BigInt>) {
    let mut g = BigInt::zero();
    let mut coeffs = vec![BigInt::zero(); values.len()];
    for (i, c) in values.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let e = g.extended_gcd(c);
        for k in coeffs[..i].iter_mut() {
            *k *= &e.x;
        }
        coeffs[i] = e.y;
        g = e.gcd;
    }
    if g.is_negative() {
        g = -g;
        for k in coeffs.iter_mut() {
            *k = -&*k;
        }
    }
    (g, coeffs)
}

/// Some `y` in `span(gens)` with `x · y = 1`, preferring a single generator.
fn partner_from(x: &IntVector, gens: &[IntVector]) -> Result<IntVector> {
    let vals: Vec<BigInt> = gens.iter().map(|h| form_unchecked(x, h)).collect();
    if let Some(i) = vals.iter().position(|v| v.abs().is_one()) {
        return Ok(gens[i].scale(&vals[i]));
    }
    let (g, coeffs) = bezout(&vals);
    if !g.is_one() {
        return Err(Error::NotUnimodular(format!("pairings of {x} have gcd {g}")));
    }
    Ok(combine(x.ctx(), &coeffs, gens))
}

fn complement_generators(frame: &IntSymplecticSubgroup) -> Vec<IntVector> {
    let ctx = frame.ctx();
    (0..ctx.dim())
        .map(|i| frame.residual(&IntVector::basis(ctx, i)))
        .filter(|v| !v.is_zero())
        .collect()
}

/// Completes `partial` to a symplectic basis of `Z^{2g}`.
pub fn extend_to_symplectic_basis(partial: &IntSymplecticSubgroup) -> Result<IntSymplecticSubgroup> {
    let ctx = partial.ctx();
    let mut basis = partial.clone();
    let mut gens = complement_generators(&basis);
    while let Some(first) = gens.first() {
        let x = first.primitive_normalized();
        let y = partner_from(&x, &gens)?;
        let pair = IntSymplecticPair::new(x, y)?;
        let step = IntSymplecticSubgroup { g: ctx.genus(), pairs: vec![pair.clone()] };
        gens = gens.iter().map(|h| step.residual(h)).filter(|v| !v.is_zero()).collect();
        basis.pairs.push(pair);
    }
    if basis.rank() != ctx.dim() {
        return Err(Error::NotUnimodular("extension did not reach full rank".into()));
    }
    Ok(basis)
}

/// A symplectic basis of `U^⊥`.
pub fn orthogonal_complement_basis(u: &IntSymplecticSubgroup) -> Result<IntSymplecticSubgroup> {
    let full = extend_to_symplectic_basis(u)?;
    Ok(IntSymplecticSubgroup { g: u.g, pairs: full.pairs[u.pairs.len()..].to_vec() })
}

/// A partner `y ∈ frame^⊥` with `x · y = 1` for a primitive `x ∈ frame^⊥`.
pub fn partner_in_complement(frame: &IntSymplecticSubgroup, x: &IntVector) -> Result<IntVector> {
    if !frame.orthogonal_to_vector(x) {
        return Err(Error::HypothesisViolation(format!("{x} is not orthogonal to the frame")));
    }
    partner_from(x, &complement_generators(frame))
}

/// Coefficients of `v` against `x1, y1, x2, y2, ...`; the basis must satisfy
/// the symplectic pairing table.
pub fn express(v: &IntVector, basis: &[IntVector]) -> Result<Vec<BigInt>> {
    if !basis.len().is_multiple_of(2) {
        return Err(Error::FrameInvalid("odd number of basis vectors".into()));
    }
    for (i, u) in basis.iter().enumerate() {
        if u.genus() != v.genus() {
            return Err(Error::ContextMismatch(v.genus(), u.genus()));
        }
        for (j, w) in basis.iter().enumerate().skip(i + 1) {
            let want = if i % 2 == 0 && j == i + 1 { 1 } else { 0 };
            if form_unchecked(u, w) != BigInt::from(want) {
                return Err(Error::FrameInvalid(format!("basis vectors {i} and {j} pair wrongly")));
            }
        }
    }
    let mut coeffs = Vec::with_capacity(basis.len());
    for p in basis.chunks(2) {
        coeffs.push(form_unchecked(v, &p[1]));
        coeffs.push(-form_unchecked(v, &p[0]));
    }
    if !(v - &combine(v.ctx(), &coeffs, basis)).is_zero() {
        return Err(Error::NotInSpan);
    }
    Ok(coeffs)
}

/// Output of [`primitive_odd_rep`]: `coeffs = (2α₁+1, 2α₂, 2α₃)` after
/// dividing by the odd `content`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitiveOddRep {
    pub coeffs: [BigInt; 3],
    pub alpha: [BigInt; 3],
    pub content: BigInt,
}

/// Divides an (odd, even, even) coefficient triple by its content.
pub fn primitive_odd_rep(c: [BigInt; 3]) -> Result<PrimitiveOddRep> {
    if !(c[0].is_odd() && c[1].is_even() && c[2].is_even()) {
        return Err(Error::BadParityPattern(format!("({}, {}, {})", c[0], c[1], c[2])));
    }
    let content = c[0].gcd(&c[1]).gcd(&c[2]);
    let coeffs = [&c[0] / &content, &c[1] / &content, &c[2] / &content];
    let alpha = [(&coeffs[0] - 1) / 2, &coeffs[1] / 2, &coeffs[2] / 2];
    Ok(PrimitiveOddRep { coeffs, alpha, content })
}

/// `β` with `(2α₁+1)(2β₁+1) + 4α₂β₂ + 4α₃β₃ = 1`.
pub fn solve_parity_bezout(alpha: &[BigInt; 3]) -> Result<[BigInt; 3]> {
    let odd: BigInt = &alpha[0] * 2 + 1;
    let vals = [odd.clone(), &alpha[1] * 4, &alpha[2] * 4];
    let (g, c) = bezout(&vals);
    if !g.is_one() {
        return Err(Error::NotCoprime(format!("gcd(2α₁+1, α₂, α₃) = {g}")));
    }
    debug_assert!(c[0].is_odd());
    Ok([(&c[0] - 1) / 2, c[1].clone(), c[2].clone()])
}

/// A basis of the plane `pair` whose reduction is `(tx, ty)`, obtained by
/// lifting the mod-2 change of basis to `SL_2(Z)`.
pub fn adapt_pair_mod2(pair: &IntSymplecticPair, tx: Gf2Vector, ty: Gf2Vector) -> Result<IntSymplecticPair> {
    let (p, q) = (pair.x.reduce_mod2(), pair.y.reduce_mod2());
    let coord = |t: Gf2Vector| -> Result<(i64, i64)> {
        let alpha = crate::gf2::gf2_form(t, q)? as i64;
        let beta = crate::gf2::gf2_form(p, t)? as i64;
        if Gf2Vector::from_bits(t.ctx(), (p.bits() & alpha.wrapping_neg() as u64) ^ (q.bits() & beta.wrapping_neg() as u64))? != t {
            return Err(Error::HypothesisViolation(format!("{t} is not in the reduction of the plane")));
        }
        Ok((alpha, beta))
    };
    let (a, b) = coord(tx)?;
    let (mut c, mut d) = coord(ty)?;
    match a * d - b * c {
        1 => {}
        -1 => {
            c = -c;
            d = -d;
        }
        _ => return Err(Error::HypothesisViolation("target vectors are dependent".into())),
    }
    let x = &pair.x.times(a) + &pair.y.times(b);
    let y = &pair.x.times(c) + &pair.y.times(d);
    IntSymplecticPair::new(x, y)
}

/// `U2' = (a2', b2')` together with the frame data used to build it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdaptedU2 {
    pub u2_prime: IntSymplecticPair,
    pub a3: IntVector,
    pub b3: IntVector,
    /// `x2 = 2ζ₁a₁ + 2η₁b₁ + (2ζ₂+1)a₂ + 2η₂b₂ + 2ζ₃a₃`.
    pub zeta1: BigInt,
    pub eta1: BigInt,
    pub zeta2: BigInt,
    pub eta2: BigInt,
    pub zeta3: BigInt,
    pub rep: PrimitiveOddRep,
    pub beta: [BigInt; 3],
}

fn split_even_primitive(r: &IntVector) -> Option<(BigInt, IntVector)> {
    if r.is_zero() {
        return None;
    }
    let half = r.div_exact(&BigInt::from(2));
    let c = half.content();
    Some((c.clone(), half.div_exact(&c)))
}

fn first_new_pair(frame: &IntSymplecticSubgroup) -> Result<IntSymplecticPair> {
    let full = extend_to_symplectic_basis(frame)?;
    Ok(full.pairs[frame.pairs.len()].clone())
}

fn halve(c: &BigInt, what: &str) -> Result<BigInt> {
    if c.is_odd() {
        return Err(Error::HypothesisViolation(format!("{what} = {c} is not even")));
    }
    Ok(c / 2)
}

fn halve_odd(c: &BigInt, what: &str) -> Result<BigInt> {
    if c.is_even() {
        return Err(Error::HypothesisViolation(format!("{what} = {c} is not odd")));
    }
    Ok((c - 1) / 2)
}

/// Replaces `U2 = (a2, b2)` by `U2' = (a2', b2')` with `a2'` proportional to
/// the part of `x2` not absorbed by `a1, b1`, keeping the mod-2 reduction and
/// orthogonality to `U1`.
pub fn build_adapted_u2prime(
    u1: &IntSymplecticPair,
    u2: &IntSymplecticPair,
    x2: &IntVector,
) -> Result<AdaptedU2> {
    let ctx = x2.ctx();
    if ctx.genus() < 4 {
        return Err(Error::HypothesisViolation(format!("genus {} < 4", ctx.genus())));
    }
    let frame = IntSymplecticSubgroup::new(ctx, vec![u1.clone(), u2.clone()])
        .map_err(|e| Error::HypothesisViolation(format!("U1, U2 not orthogonal: {e}")))?;
    let fv = frame.vectors();
    let c: Vec<BigInt> = fv.chunks(2).flat_map(|p| [form_unchecked(x2, &p[1]), -form_unchecked(x2, &p[0])]).collect();
    let zeta1 = halve(&c[0], "coefficient of a1 in x2")?;
    let eta1 = halve(&c[1], "coefficient of b1 in x2")?;
    let zeta2 = halve_odd(&c[2], "coefficient of a2 in x2")?;
    let eta2 = halve(&c[3], "coefficient of b2 in x2")?;
    let r = frame.residual(x2);
    if !r.is_even() {
        return Err(Error::HypothesisViolation("x2 is not a2 modulo 2".into()));
    }
    let (zeta3, a3, b3) = match split_even_primitive(&r) {
        Some((z, a3)) => {
            let b3 = partner_in_complement(&frame, &a3)?;
            (z, a3, b3)
        }
        None => {
            let p = first_new_pair(&frame)?;
            (BigInt::zero(), p.x, p.y)
        }
    };
    let rep = primitive_odd_rep([c[2].clone(), c[3].clone(), &zeta3 * 2])?;
    let beta = solve_parity_bezout(&rep.alpha)?;
    let (a2, b2) = (&u2.x, &u2.y);
    let a2p = combine(ctx, &rep.coeffs, &[a2.clone(), b2.clone(), a3.clone()]);
    let b2p = combine(
        ctx,
        &[&beta[0] * 2 + 1, &beta[1] * -2, &beta[2] * 2],
        &[b2.clone(), a2.clone(), b3.clone()],
    );
    let u2_prime = IntSymplecticPair::new(a2p, b2p)
        .map_err(|e| Error::Internal(format!("a2' · b2' != 1: {e}")))?;
    let u1g = IntSymplecticSubgroup { g: ctx.genus(), pairs: vec![u1.clone()] };
    let u2g = IntSymplecticSubgroup { g: ctx.genus(), pairs: vec![u2_prime.clone()] };
    if !u1g.orthogonal_to(&u2g) {
        return Err(Error::Internal("U2' is not orthogonal to U1".into()));
    }
    if u2_prime.x.reduce_mod2() != a2.reduce_mod2() || u2_prime.y.reduce_mod2() != b2.reduce_mod2() {
        return Err(Error::Internal("U2' changed the mod-2 reduction".into()));
    }
    Ok(AdaptedU2 { u2_prime, a3, b3, zeta1, eta1, zeta2, eta2, zeta3, rep, beta })
}

/// Coefficients of `x2 = 2ζ₁a₁ + 2η₁b₁ + (2ζ₂'+1)a₂'` and
/// `y2 = 2λ₁a₁ + 2μ₁b₁ + 2λ₂'a₂' + (2μ₂'+1)b₂' + 2λ₃'a₃'`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct V1Coefficients {
    pub zeta1: BigInt,
    pub eta1: BigInt,
    pub zeta2p: BigInt,
    pub lambda1: BigInt,
    pub mu1: BigInt,
    pub lambda2p: BigInt,
    pub mu2p: BigInt,
}

/// `a1, b1, a2', b2', a3', a4', b4'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct V1Frame {
    pub a1: IntVector,
    pub b1: IntVector,
    pub a2p: IntVector,
    pub b2p: IntVector,
    pub a3p: IntVector,
    pub a4p: IntVector,
    pub b4p: IntVector,
}

impl V1Frame {
    pub fn standard(ctx: GenusContext) -> Self {
        Self {
            a1: IntVector::a(ctx, 1),
            b1: IntVector::b(ctx, 1),
            a2p: IntVector::a(ctx, 2),
            b2p: IntVector::b(ctx, 2),
            a3p: IntVector::a(ctx, 3),
            a4p: IntVector::a(ctx, 4),
            b4p: IntVector::b(ctx, 4),
        }
    }

    fn check(&self) -> Result<()> {
        let named = [
            ("a1", &self.a1),
            ("b1", &self.b1),
            ("a2'", &self.a2p),
            ("b2'", &self.b2p),
            ("a3'", &self.a3p),
            ("a4'", &self.a4p),
            ("b4'", &self.b4p),
        ];
        let dual = [(0, 1), (2, 3), (5, 6)];
        for i in 0..named.len() {
            if named[i].1.genus() != self.a1.genus() {
                return Err(Error::FrameInvalid(format!("{} has the wrong genus", named[i].0)));
            }
            for j in i + 1..named.len() {
                let want = if dual.contains(&(i, j)) { 1 } else { 0 };
                let f = form_unchecked(named[i].1, named[j].1);
                if f != BigInt::from(want) {
                    return Err(Error::FrameInvalid(format!(
                        "{} · {} = {f}, expected {want}",
                        named[i].0, named[j].0
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The pair `(x1', y1')` orthogonal to `V2` reducing to `(a1, b1)`.
///
/// `x1' = ZM a1 + 2Mη₁ b2' + (4η₁λ₂' − 2Zμ₁) a2' + 2 a4'` and
/// `y1' = ZM b1 − 2Mζ₁ b2' + (−4ζ₁λ₂' + 2Zλ₁) a2' + 2ν b4'` with
/// `Z = 2ζ₂'+1`, `M = 2μ₂'+1`. The first five terms pair to
/// `r ≡ (ZM)² ≡ 1 (mod 8)`, so `ν = (1 − r)/4` is an integer.
pub fn build_v1prime(k: &V1Coefficients, f: &V1Frame) -> Result<IntSymplecticPair> {
    f.check()?;
    let ctx = f.a1.ctx();
    let z: BigInt = &k.zeta2p * 2 + 1;
    let m: BigInt = &k.mu2p * 2 + 1;
    let zm: BigInt = &z * &m;
    let x1 = combine(
        ctx,
        &[
            zm.clone(),
            &m * &k.eta1 * 2,
            &k.eta1 * &k.lambda2p * 4 - &z * &k.mu1 * 2,
            BigInt::from(2),
        ],
        &[f.a1.clone(), f.b2p.clone(), f.a2p.clone(), f.a4p.clone()],
    );
    let y1_base = combine(
        ctx,
        &[
            zm,
            -(&m * &k.zeta1 * 2u32),
            &z * &k.lambda1 * 2u32 - &k.zeta1 * &k.lambda2p * 4u32,
        ],
        &[f.b1.clone(), f.b2p.clone(), f.a2p.clone()],
    );
    let r = form_unchecked(&x1, &y1_base);
    let (nu, rem) = (BigInt::one() - &r).div_rem(&BigInt::from(4));
    if !rem.is_zero() {
        return Err(Error::FrameInvalid(format!("1 − r = {} is not divisible by 4", BigInt::one() - &r)));
    }
    let y1 = &y1_base + &f.b4p.scale(&(&nu * 2));
    IntSymplecticPair::new(x1, y1).map_err(|e| Error::Internal(format!("x1' · y1' != 1: {e}")))
}

/// Everything produced while replacing `V1` by `V1'` and `V2` by `V2'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct V1PrimeConstruction {
    pub v1_prime: IntSymplecticPair,
    /// `(x2, y2 − 2λ₃'a₃')`.
    pub v2_prime: IntSymplecticPair,
    pub coefficients: V1Coefficients,
    pub lambda3p: BigInt,
    pub a3p: IntVector,
    pub b3p: IntVector,
    pub a4p: IntVector,
    pub b4p: IntVector,
}

/// Extracts the coefficients of `x2, y2` against `a1, b1, a2', b2'` and
/// builds `V1'`, `V2'`. Requires `x2 ∈ ⟨a1, b1, a2'⟩` with the parity
/// pattern of [`V1Coefficients`] and `y2 ≡ b2 (mod 2)`.
pub fn construct_v1prime(
    u1: &IntSymplecticPair,
    u2p: &IntSymplecticPair,
    x2: &IntVector,
    y2: &IntVector,
) -> Result<V1PrimeConstruction> {
    let ctx = x2.ctx();
    let frame = IntSymplecticSubgroup::new(ctx, vec![u1.clone(), u2p.clone()])?;
    let fv = frame.vectors();
    let cx = express(x2, &fv).map_err(|_| Error::HypothesisViolation("x2 is not in ⟨a1, b1, a2'⟩".into()))?;
    if !cx[3].is_zero() {
        return Err(Error::HypothesisViolation("x2 has a b2' component".into()));
    }
    let cy: Vec<BigInt> = fv.chunks(2).flat_map(|p| [form_unchecked(y2, &p[1]), -form_unchecked(y2, &p[0])]).collect();
    let coefficients = V1Coefficients {
        zeta1: halve(&cx[0], "coefficient of a1 in x2")?,
        eta1: halve(&cx[1], "coefficient of b1 in x2")?,
        zeta2p: halve_odd(&cx[2], "coefficient of a2' in x2")?,
        lambda1: halve(&cy[0], "coefficient of a1 in y2")?,
        mu1: halve(&cy[1], "coefficient of b1 in y2")?,
        lambda2p: halve(&cy[2], "coefficient of a2' in y2")?,
        mu2p: halve_odd(&cy[3], "coefficient of b2' in y2")?,
    };
    let r = frame.residual(y2);
    if !r.is_even() {
        return Err(Error::HypothesisViolation("y2 is not b2 modulo 2".into()));
    }
    let (lambda3p, a3p, b3p) = match split_even_primitive(&r) {
        Some((l, a3p)) => {
            let b3p = partner_in_complement(&frame, &a3p)?;
            (l, a3p, b3p)
        }
        None => {
            let p = first_new_pair(&frame)?;
            (BigInt::zero(), p.x, p.y)
        }
    };
    let frame3 = frame.direct_sum(&IntSymplecticSubgroup::new(
        ctx,
        vec![IntSymplecticPair::new(a3p.clone(), b3p.clone())?],
    )?)?;
    let p4 = first_new_pair(&frame3)?;
    let v1_frame = V1Frame {
        a1: u1.x.clone(),
        b1: u1.y.clone(),
        a2p: u2p.x.clone(),
        b2p: u2p.y.clone(),
        a3p: a3p.clone(),
        a4p: p4.x.clone(),
        b4p: p4.y.clone(),
    };
    let v1_prime = build_v1prime(&coefficients, &v1_frame)?;
    let y2p = y2 - &a3p.scale(&(&lambda3p * 2));
    let v2_prime = IntSymplecticPair::new(x2.clone(), y2p)?;
    Ok(V1PrimeConstruction {
        v1_prime,
        v2_prime,
        coefficients,
        lambda3p,
        a3p,
        b3p,
        a4p: p4.x,
        b4p: p4.y,
    })
}
