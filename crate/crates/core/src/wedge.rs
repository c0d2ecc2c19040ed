//! Exterior powers over GF(2) and ranks of spans of wedge products.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::error::{Error, Result};

/// A dense GF(2) row vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitRow {
    len: usize,
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        Self { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn from_indices(len: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut r = Self::zeros(len);
        for i in idx {
            r.toggle(i);
        }
        r
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        if self.get(i) != bit {
            self.toggle(i);
        }
    }

    pub fn toggle(&mut self, i: usize) {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        assert_eq!(self.len, other.len, "row length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// XORs the low `len` bits of `src` into positions `offset..offset+len`.
    pub(crate) fn xor_bits_at(&mut self, offset: usize, src: u64, len: usize) {
        if len == 0 || src == 0 {
            return;
        }
        let src = if len == 64 { src } else { src & ((1u64 << len) - 1) };
        let (w, s) = (offset / 64, offset % 64);
        self.words[w] ^= src << s;
        if s != 0 && s + len > 64 {
            self.words[w + 1] ^= src >> (64 - s);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .position(|&w| w != 0)
            .map(|i| i * 64 + self.words[i].trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            crate::gf2::ones(w).map(move |b| wi * 64 + b)
        })
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// Binomial coefficient, saturating at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Colexicographic rank of a strictly increasing index set.
pub fn combinadic_rank(subset: &[u32]) -> u64 {
    subset
        .iter()
        .enumerate()
        .map(|(i, &c)| binomial(c as u64, i as u64 + 1))
        .sum()
}

/// An element of `Λ^k` of a GF(2) space of dimension `ambient_dim`,
/// stored as the set of basis `k`-subsets with coefficient 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WedgeElement {
    ambient_dim: usize,
    k: usize,
    terms: BTreeSet<Vec<u32>>,
}

impl WedgeElement {
    pub fn zero(ambient_dim: usize, k: usize) -> Self {
        Self { ambient_dim, k, terms: BTreeSet::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn terms(&self) -> &BTreeSet<Vec<u32>> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if (self.ambient_dim, self.k) != (other.ambient_dim, other.k) {
            return Err(Error::MixedShapes(format!(
                "Λ^{} of dim {} vs Λ^{} of dim {}",
                self.k, self.ambient_dim, other.k, other.ambient_dim
            )));
        }
        let terms = self.terms.symmetric_difference(&other.terms).cloned().collect();
        Ok(Self { ambient_dim: self.ambient_dim, k: self.k, terms })
    }

    /// Sorted colex ranks of the terms; the sparse coordinate vector.
    pub fn coordinates(&self) -> Vec<u64> {
        let mut c: Vec<u64> = self.terms.iter().map(|t| combinadic_rank(t)).collect();
        c.sort_unstable();
        c
    }
}

/// `v_1 ∧ ... ∧ v_k` expanded in the standard basis of `Λ^k`.
pub fn wedge(parts: &[BitRow]) -> Result<WedgeElement> {
    let Some(first) = parts.first() else {
        return Err(Error::MixedShapes("empty wedge".into()));
    };
    let n = first.len();
    if let Some(bad) = parts.iter().find(|p| p.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: bad.len() });
    }
    let mut cur: HashSet<Vec<u32>> = HashSet::from([Vec::new()]);
    for p in parts {
        let support: Vec<u32> = p.ones().map(|i| i as u32).collect();
        let mut next: HashSet<Vec<u32>> = HashSet::new();
        for s in &cur {
            for &i in &support {
                if let Err(pos) = s.binary_search(&i) {
                    let mut t = s.clone();
                    t.insert(pos, i);
                    if !next.remove(&t) {
                        next.insert(t);
                    }
                }
            }
        }
        cur = next;
    }
    Ok(WedgeElement { ambient_dim: n, k: parts.len(), terms: cur.into_iter().collect() })
}

fn sparse_xor(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Incremental echelon form over sparse coordinate rows of a fixed `Λ^k`.
#[derive(Clone, Debug)]
pub struct RankAccumulator {
    shape: Option<(usize, usize)>,
    rows: BTreeMap<u64, Vec<u64>>,
}

impl Default for RankAccumulator {
    fn default() -> Self {
        Self::new()
    }
}

impl RankAccumulator {
    pub fn new() -> Self {
        Self { shape: None, rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds a generator; returns whether the rank grew.
    pub fn insert(&mut self, w: &WedgeElement) -> Result<bool> {
        let shape = (w.ambient_dim, w.k);
        match self.shape {
            None => self.shape = Some(shape),
            Some(s) if s != shape => {
                return Err(Error::MixedShapes(format!(
                    "Λ^{} of dim {} vs Λ^{} of dim {}",
                    s.1, s.0, shape.1, shape.0
                )))
            }
            _ => {}
        }
        let mut r = w.coordinates();
        while let Some(&lead) = r.first() {
            match self.rows.get(&lead) {
                Some(b) => r = sparse_xor(&r, b),
                None => {
                    self.rows.insert(lead, r);
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
}

/// Dimension of the GF(2)-span of wedge elements of one shape.
pub fn rank_of_span(elems: &[WedgeElement]) -> Result<usize> {
    let mut acc = RankAccumulator::new();
    for e in elems {
        acc.insert(e)?;
    }
    Ok(acc.rank())
}

/// Incremental echelon form over dense rows of fixed width.
#[derive(Clone, Debug)]
pub struct DenseEchelon {
    width: usize,
    rows: Vec<Option<BitRow>>,
    rank: usize,
}

impl DenseEchelon {
    pub fn new(width: usize) -> Self {
        Self { width, rows: vec![None; width], rank: 0 }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_full(&self) -> bool {
        self.rank == self.width
    }

    pub fn insert(&mut self, mut row: BitRow) -> bool {
        assert_eq!(row.len(), self.width, "row length mismatch");
        while let Some(p) = row.first_one() {
            match &self.rows[p] {
                Some(b) => row.xor_assign(b),
                None => {
                    self.rows[p] = Some(row);
                    self.rank += 1;
                    return true;
                }
            }
        }
        false
    }

    pub fn into_rows(self) -> impl Iterator<Item = BitRow> {
        self.rows.into_iter().flatten()
    }

    pub fn absorb(&mut self, other: DenseEchelon) {
        for r in other.into_rows() {
            if self.is_full() {
                break;
            }
            self.insert(r);
        }
    }
}

/// Coordinates of `u ∧ v` in `Λ^2`, pairs `{i < j}` at colex position `C(j,2) + i`.
pub fn wedge2_dense(u: &BitRow, v: &BitRow) -> BitRow {
    let n = u.len();
    assert_eq!(n, v.len(), "row length mismatch");
    let mut out = BitRow::zeros(n * n.saturating_sub(1) / 2);
    for j in 1..n {
        let off = j * (j - 1) / 2;
        let (uj, vj) = (u.get(j), v.get(j));
        if !uj && !vj {
            continue;
        }
        let mut w = 0;
        while w * 64 < j {
            let take = (j - w * 64).min(64);
            let mask = if take == 64 { u64::MAX } else { (1u64 << take) - 1 };
            let mut chunk = 0u64;
            if uj {
                chunk ^= v.words[w];
            }
            if vj {
                chunk ^= u.words[w];
            }
            out.xor_bits_at(off + w * 64, chunk & mask, take);
            w += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn row(n: usize, idx: &[usize]) -> BitRow {
        BitRow::from_indices(n, idx.iter().copied())
    }

    #[test]
    fn wedge_of_basis_vectors() {
        let w = wedge(&[row(4, &[0]), row(4, &[1])]).unwrap();
        assert_eq!(w.terms().iter().cloned().collect::<Vec<_>>(), vec![vec![0, 1]]);
        let z = wedge(&[row(4, &[0, 2]), row(4, &[0, 2])]).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn wedge_rank_examples() {
        let a = wedge(&[row(4, &[0]), row(4, &[1])]).unwrap();
        let b = wedge(&[row(4, &[0]), row(4, &[2])]).unwrap();
        assert_eq!(rank_of_span(&[a.clone(), b.clone()]).unwrap(), 2);
        assert_eq!(rank_of_span(&[a.clone(), a.clone()]).unwrap(), 1);
        assert_eq!(rank_of_span(&[]).unwrap(), 0);
        let c = wedge(&[row(5, &[0]), row(5, &[1])]).unwrap();
        assert!(matches!(rank_of_span(&[a, c]), Err(Error::MixedShapes(_))));
    }

    #[test]
    fn full_exterior_square_has_binomial_rank() {
        let n = 6;
        let mut elems = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                elems.push(wedge(&[row(n, &[i]), row(n, &[j])]).unwrap());
            }
        }
        assert_eq!(rank_of_span(&elems).unwrap(), 15);
    }

    #[test]
    fn combinadic_is_a_bijection() {
        let n = 7u32;
        let mut seen = BTreeSet::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    seen.insert(combinadic_rank(&[a, b, c]));
                }
            }
        }
        assert_eq!(seen.len(), 35);
        assert_eq!(*seen.iter().max().unwrap(), 34);
    }

    #[test]
    fn dense_and_sparse_wedge2_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [3usize, 36, 70, 130] {
            let mut dense = DenseEchelon::new(n * (n - 1) / 2);
            let mut sparse = RankAccumulator::new();
            for _ in 0..60 {
                let u = BitRow::from_indices(n, (0..n).filter(|_| rng.gen_bool(0.3)));
                let v = BitRow::from_indices(n, (0..n).filter(|_| rng.gen_bool(0.3)));
                let d = wedge2_dense(&u, &v);
                let s = wedge(&[u, v]).unwrap();
                let from_sparse = BitRow::from_indices(d.len(), s.coordinates().iter().map(|&c| c as usize));
                assert_eq!(d, from_sparse);
                assert_eq!(dense.insert(d), sparse.insert(&s).unwrap());
            }
            assert_eq!(dense.rank(), sparse.rank());
        }
    }

    #[test]
    fn wedge_is_multilinear_and_alternating() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 9;
        for _ in 0..50 {
            let r = |rng: &mut ChaCha8Rng| BitRow::from_indices(n, (0..n).filter(|_| rng.gen_bool(0.5)));
            let (u, v, w, x) = (r(&mut rng), r(&mut rng), r(&mut rng), r(&mut rng));
            let mut uv = u.clone();
            uv.xor_assign(&v);
            let lhs = wedge(&[uv, w.clone(), x.clone()]).unwrap();
            let rhs = wedge(&[u.clone(), w.clone(), x.clone()])
                .unwrap()
                .checked_add(&wedge(&[v.clone(), w.clone(), x.clone()]).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
            assert!(wedge(&[u.clone(), w.clone(), u.clone()]).unwrap().is_zero());
        }
    }
}
