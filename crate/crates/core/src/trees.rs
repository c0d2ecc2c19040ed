//! Admissible partitions as genus-labelled trees.
//!
//! A vertex is a complementary subsurface, an edge is a separating curve.
//! Text form is `genus(child)(child)...`, rooted at vertex 0, vertices numbered
//! in pre-order: `0(1)(1)(2)` is the genus-4 star.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::cycles::{CycleSystem, SigmaWedge};
use crate::error::{Error, Result};
use crate::gf2::GenusContext;
use crate::lattice::IntSymplecticSubgroup;
use crate::sigma::{sigma_coords_raw, Mode, QuadraticBasis, SigmaValue};
use crate::wedge::BitRow;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartitionTree {
    g: usize,
    genus: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

impl PartitionTree {
    /// Only checks that `g` is supported and edge endpoints exist; the
    /// admissibility conditions are reported by [`validate_tree`].
    pub fn new(g: usize, genus: Vec<usize>, edges: Vec<(usize, usize)>) -> Result<Self> {
        GenusContext::new(g)?;
        if genus.is_empty() {
            return Err(Error::InvalidTree("no vertices".into()));
        }
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= genus.len() || v >= genus.len()) {
            return Err(Error::InvalidTree(format!("edge ({u}, {v}) has an endpoint out of range")));
        }
        Ok(Self { g, genus, edges })
    }

    pub fn parse(s: &str, g: usize) -> Result<Self> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let mut genus = Vec::new();
        let mut edges = Vec::new();
        parse_node(&chars, &mut pos, &mut genus, &mut edges)?;
        if pos != chars.len() {
            return Err(Error::Parse(format!("trailing input in tree {s:?} at {pos}")));
        }
        Self::new(g, genus, edges)
    }

    /// Ambient genus.
    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn ctx(&self) -> GenusContext {
        GenusContext::new(self.g).expect("checked at construction")
    }

    pub fn vertex_genera(&self) -> &[usize] {
        &self.genus
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.genus.len()
    }

    /// Number of curves.
    pub fn k(&self) -> usize {
        self.edges.len()
    }

    pub fn has_genus0_vertex(&self) -> bool {
        self.genus.contains(&0)
    }

    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        adjacency(self.genus.len(), &self.edges)
    }

    /// Vertices on the side of `edges[e].1` once edge `e` is cut.
    pub fn side(&self, e: usize) -> Vec<bool> {
        side(&self.adjacency(), &self.edges, e)
    }

    /// Isomorphism-invariant text form (rooted at a centre, children sorted).
    pub fn canonical_string(&self) -> String {
        canonical(&self.genus, &self.edges)
    }
}

fn parse_node(
    c: &[char],
    pos: &mut usize,
    genus: &mut Vec<usize>,
    edges: &mut Vec<(usize, usize)>,
) -> Result<usize> {
    let start = *pos;
    while *pos < c.len() && c[*pos].is_ascii_digit() {
        *pos += 1;
    }
    if start == *pos {
        return Err(Error::Parse(format!("expected a genus at position {start}")));
    }
    let text: String = c[start..*pos].iter().collect();
    let h = text.parse::<usize>().map_err(|e| Error::Parse(e.to_string()))?;
    let me = genus.len();
    genus.push(h);
    while *pos < c.len() && c[*pos] == '(' {
        *pos += 1;
        let slot = edges.len();
        edges.push((me, genus.len()));
        let child = parse_node(c, pos, genus, edges)?;
        debug_assert_eq!(edges[slot].1, child);
        if *pos >= c.len() || c[*pos] != ')' {
            return Err(Error::Parse(format!("expected ')' at position {pos}")));
        }
        *pos += 1;
    }
    Ok(me)
}

fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<(usize, usize)>> {
    let mut adj = vec![Vec::new(); n];
    for (i, &(u, v)) in edges.iter().enumerate() {
        adj[u].push((v, i));
        adj[v].push((u, i));
    }
    for a in &mut adj {
        a.sort_unstable();
    }
    adj
}

fn side(adj: &[Vec<(usize, usize)>], edges: &[(usize, usize)], e: usize) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![edges[e].1];
    seen[edges[e].1] = true;
    while let Some(x) = stack.pop() {
        for &(y, f) in &adj[x] {
            if f != e && !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen
}

fn is_tree(n: usize, edges: &[(usize, usize)]) -> bool {
    if edges.len() + 1 != n {
        return false;
    }
    let adj = adjacency(n, edges);
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &(y, _) in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen.iter().all(|&s| s)
}

fn encode(genus: &[usize], adj: &[Vec<(usize, usize)>], v: usize, parent: Option<usize>) -> String {
    let mut kids: Vec<String> = adj[v]
        .iter()
        .filter(|&&(w, _)| Some(w) != parent)
        .map(|&(w, _)| encode(genus, adj, w, Some(v)))
        .collect();
    kids.sort();
    let mut s = genus[v].to_string();
    for k in kids {
        s.push('(');
        s.push_str(&k);
        s.push(')');
    }
    s
}

fn centres(adj: &[Vec<(usize, usize)>]) -> Vec<usize> {
    let n = adj.len();
    let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    let mut left = n;
    while left > 2 {
        left -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &(w, _) in &adj[v] {
                deg[w] -= 1;
                if deg[w] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    layer
}

fn canonical(genus: &[usize], edges: &[(usize, usize)]) -> String {
    let adj = adjacency(genus.len(), edges);
    if !is_tree(genus.len(), edges) {
        return render(genus, &adj);
    }
    centres(&adj)
        .into_iter()
        .map(|c| encode(genus, &adj, c, None))
        .min()
        .unwrap_or_default()
}

fn render(genus: &[usize], adj: &[Vec<(usize, usize)>]) -> String {
    fn go(genus: &[usize], adj: &[Vec<(usize, usize)>], v: usize, seen: &mut [bool], out: &mut String) {
        seen[v] = true;
        out.push_str(&genus[v].to_string());
        for &(w, _) in &adj[v] {
            if !seen[w] {
                out.push('(');
                go(genus, adj, w, seen, out);
                out.push(')');
            }
        }
    }
    let mut seen = vec![false; genus.len()];
    let mut out = String::new();
    go(genus, adj, 0, &mut seen, &mut out);
    out
}

impl fmt::Display for PartitionTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render(&self.genus, &self.adjacency()))
    }
}

/// Human-readable admissibility violations; empty iff the tree is admissible.
pub fn validate_tree(t: &PartitionTree) -> Vec<String> {
    let n = t.vertex_count();
    let mut out = Vec::new();
    if let Some((i, _)) = t.edges.iter().enumerate().find(|(_, &(u, v))| u == v) {
        out.push(format!("edge {i}: loop"));
    }
    if !is_tree(n, &t.edges) {
        out.push(format!("not a tree: {n} vertices, {} edges", t.k()));
        return out;
    }
    let total: usize = t.genus.iter().sum();
    if total != t.g {
        out.push(format!("genus sum {total} differs from g = {}", t.g));
    }
    for (v, nb) in t.adjacency().iter().enumerate() {
        match (nb.len(), t.genus[v]) {
            (1, 0) => out.push(format!("vertex {v}: inessential curve (genus-0 leaf on edge {})", nb[0].1)),
            (2, 0) => out.push(format!(
                "vertex {v}: genus-0 annulus, edges {} and {} are isotopic",
                nb[0].1, nb[1].1
            )),
            _ => {}
        }
    }
    if t.k() > 0 && t.k() + 3 > 2 * t.g {
        out.push(format!("k = {} exceeds 2g - 3 = {}", t.k(), 2 * t.g as i64 - 3));
    }
    out
}

fn ensure_valid(t: &PartitionTree) -> Result<()> {
    let v = validate_tree(t);
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidTree(v.join("; ")))
    }
}

fn side_genera(t: &PartitionTree, e: usize) -> (usize, usize) {
    let s = t.side(e);
    let far: usize = t.genus.iter().zip(&s).filter(|(_, &b)| b).map(|(h, _)| h).sum();
    let total: usize = t.genus.iter().sum();
    (total - far, far)
}

/// Genus of the curve on edge `e`: the smaller of the two side genera.
pub fn curve_genus(t: &PartitionTree, e: usize) -> Result<usize> {
    if e >= t.k() {
        return Err(Error::InvalidTree(format!("no edge {e}")));
    }
    let (near, far) = side_genera(t, e);
    Ok(near.min(far))
}

/// Outermost and grouping curves with their caps and cap bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub outermost: Vec<bool>,
    pub grouping: Vec<bool>,
    /// Outermost edge → cap vertex.
    pub cap: BTreeMap<usize, usize>,
    /// Grouping edge → cap-base vertex.
    pub cap_base: BTreeMap<usize, usize>,
    /// Grouping edge → the outermost edges it groups.
    pub grouped: BTreeMap<usize, Vec<usize>>,
    /// Every cap has genus 1.
    pub simple: bool,
}

struct Shape {
    genus: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

impl Shape {
    fn classify(&self) -> Classification {
        let adj = adjacency(self.genus.len(), &self.edges);
        let leaf = |v: usize| adj[v].len() == 1;
        let k = self.edges.len();
        let mut c = Classification {
            outermost: vec![false; k],
            grouping: vec![false; k],
            cap: BTreeMap::new(),
            cap_base: BTreeMap::new(),
            grouped: BTreeMap::new(),
            simple: true,
        };
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            let cap = match (leaf(u), leaf(v)) {
                (true, true) => Some(u.min(v)),
                (true, false) => Some(u),
                (false, true) => Some(v),
                _ => None,
            };
            if let Some(cv) = cap {
                c.outermost[i] = true;
                c.cap.insert(i, cv);
                c.simple &= self.genus[cv] == 1;
            }
        }
        let total: usize = self.genus.iter().sum();
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if c.outermost[i] {
                continue;
            }
            let qualifies = |x: usize| adj[x].iter().all(|&(_, f)| f == i || c.outermost[f]);
            let far = side(&adj, &self.edges, i);
            let side_genus = |x: usize| -> usize {
                let g: usize = self.genus.iter().zip(&far).filter(|(_, &b)| b).map(|(h, _)| h).sum();
                if far[x] {
                    g
                } else {
                    total - g
                }
            };
            let cands: Vec<usize> = [u, v].into_iter().filter(|&x| qualifies(x)).collect();
            let Some(&cb) = cands.iter().min_by_key(|&&x| (side_genus(x), x)) else {
                continue;
            };
            c.grouping[i] = true;
            c.cap_base.insert(i, cb);
            c.grouped.insert(i, adj[cb].iter().map(|&(_, f)| f).filter(|&f| f != i).collect());
        }
        c
    }
}

pub fn classify(t: &PartitionTree) -> Result<Classification> {
    ensure_valid(t)?;
    Ok(Shape { genus: t.genus.clone(), edges: t.edges.clone() }.classify())
}

pub fn is_simple(t: &PartitionTree) -> Result<bool> {
    Ok(classify(t)?.simple)
}

/// Standard pairs `(a_i, b_i)` handed out per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingAssignment {
    g: usize,
    pairs: Vec<Vec<usize>>,
}

impl SplittingAssignment {
    pub fn ctx(&self) -> GenusContext {
        GenusContext::new(self.g).expect("valid genus")
    }

    /// 1-based pair indices held by vertex `v`.
    pub fn pair_indices(&self, v: usize) -> &[usize] {
        &self.pairs[v]
    }

    pub fn subgroup(&self, v: usize) -> IntSymplecticSubgroup {
        IntSymplecticSubgroup::standard(self.ctx(), &self.pairs[v])
    }

    pub fn subgroups(&self) -> Vec<IntSymplecticSubgroup> {
        (0..self.pairs.len()).map(|v| self.subgroup(v)).collect()
    }

    /// Pairwise orthogonal and spanning the whole lattice.
    pub fn check(&self) -> Result<()> {
        let groups = self.subgroups();
        for (i, a) in groups.iter().enumerate() {
            for b in &groups[i + 1..] {
                if !a.orthogonal_to(b) {
                    return Err(Error::Internal("vertex subgroups are not orthogonal".into()));
                }
            }
        }
        let mut all = IntSymplecticSubgroup::standard(self.ctx(), &[]);
        for gr in &groups {
            all = all.direct_sum(gr)?;
        }
        if all.rank() != self.ctx().dim() {
            return Err(Error::Internal(format!("vertex subgroups span rank {}", all.rank())));
        }
        Ok(())
    }
}

/// DFS from vertex 0 (neighbours ascending), consecutive standard pairs.
pub fn realize_splitting(t: &PartitionTree) -> Result<SplittingAssignment> {
    ensure_valid(t)?;
    let adj = t.adjacency();
    let mut pairs = vec![Vec::new(); t.vertex_count()];
    let mut next = 1;
    let mut seen = vec![false; t.vertex_count()];
    let mut stack = vec![0];
    while let Some(v) = stack.pop() {
        if seen[v] {
            continue;
        }
        seen[v] = true;
        pairs[v] = (next..next + t.genus[v]).collect();
        next += t.genus[v];
        for &(w, _) in adj[v].iter().rev() {
            if !seen[w] {
                stack.push(w);
            }
        }
    }
    Ok(SplittingAssignment { g: t.g, pairs })
}

fn pairs_coords(ctx: GenusContext, idx: impl IntoIterator<Item = usize>) -> BitRow {
    let raw: Vec<(u64, u64)> = idx.into_iter().map(|i| (ctx.a(i).bits(), ctx.b(i).bits())).collect();
    sigma_coords_raw(ctx, &raw, Mode::Closed)
}

fn edge_coords(t: &PartitionTree, asg: &SplittingAssignment, e: usize) -> Result<BitRow> {
    if e >= t.k() {
        return Err(Error::InvalidTree(format!("no edge {e}")));
    }
    if asg.pairs.len() != t.vertex_count() {
        return Err(Error::DimensionMismatch { expected: t.vertex_count(), got: asg.pairs.len() });
    }
    let ctx = t.ctx();
    let far = t.side(e);
    let pick = |want: bool| -> Vec<usize> {
        (0..t.vertex_count()).filter(|&v| far[v] == want).flat_map(|v| asg.pairs[v].iter().copied()).collect()
    };
    let near = pairs_coords(ctx, pick(false));
    let other = pairs_coords(ctx, pick(true));
    if near != other {
        return Err(Error::Internal(format!("edge {e}: the two sides have different sigma")));
    }
    Ok(near)
}

/// σ of one side of edge `e`; both sides are computed and compared.
pub fn edge_sigma(t: &PartitionTree, asg: &SplittingAssignment, e: usize) -> Result<SigmaValue> {
    let row = edge_coords(t, asg, e)?;
    Ok(QuadraticBasis::new(t.ctx(), Mode::Closed).value(&row))
}

/// Wedge of all edge sigmas.
pub fn tree_sigma_k(t: &PartitionTree, asg: &SplittingAssignment) -> Result<SigmaWedge> {
    if t.k() == 0 {
        return Err(Error::NoCurves);
    }
    let rows = (0..t.k()).map(|e| edge_coords(t, asg, e)).collect::<Result<Vec<_>>>()?;
    SigmaWedge::from_coords(t.ctx(), &rows)
}

/// For `k < g`, the abelian cycle vanishes iff some subsurface has genus 0.
pub fn vanishes_main3(t: &PartitionTree) -> Result<bool> {
    ensure_valid(t)?;
    if t.k() == 0 {
        return Err(Error::NoCurves);
    }
    if t.k() >= t.g {
        return Err(Error::HypothesisViolation(format!("k = {} is not below g = {}", t.k(), t.g)));
    }
    Ok(t.has_genus0_vertex())
}

/// Splits the tree into a GF(2)-sum of systems of genus-1 curves with the
/// same `σ_k`. Empty when `k ≥ g`.
pub fn reduce_to_genus1(t: &PartitionTree) -> Result<Vec<CycleSystem>> {
    ensure_valid(t)?;
    let k = t.k();
    if k == 0 {
        return Err(Error::NoCurves);
    }
    if k >= t.g {
        return Ok(Vec::new());
    }
    let ctx = t.ctx();
    let asg = realize_splitting(t)?;
    let mut found: Vec<Vec<usize>> = Vec::new();
    if k == 1 {
        let (u, v) = t.edges[0];
        let one = [u.min(v), u.max(v)].into_iter().find(|&x| t.genus[x] == 1);
        match one {
            Some(x) => found.push(asg.pairs[x].clone()),
            None => found.extend(asg.pairs[0].iter().map(|&p| vec![p])),
        }
    } else {
        let work = Work { edges: t.edges.clone(), pairs: asg.pairs.clone() };
        work.reduce(&mut found);
    }
    let mut out: Vec<CycleSystem> = Vec::new();
    for parts in found {
        let groups = parts.iter().map(|&p| IntSymplecticSubgroup::standard(ctx, &[p])).collect();
        let sys = CycleSystem::new(ctx, groups)?;
        match out.iter().position(|s| s.same_system(&sys)) {
            Some(i) => {
                out.remove(i);
            }
            None => out.push(sys),
        }
    }
    Ok(out)
}

/// A tree with a fixed vertex set whose vertices carry pair indices.
#[derive(Clone)]
struct Work {
    edges: Vec<(usize, usize)>,
    pairs: Vec<Vec<usize>>,
}

impl Work {
    fn shape(&self) -> Shape {
        Shape { genus: self.pairs.iter().map(Vec::len).collect(), edges: self.edges.clone() }
    }

    /// Appends, per surviving system, the cap pair of each edge in edge order.
    fn reduce(self, out: &mut Vec<Vec<usize>>) {
        let c = self.shape().classify();
        let split = c.cap.values().copied().filter(|&v| self.pairs[v].len() >= 2).min();
        if let Some(cap) = split {
            let nb = self.edges.iter().find_map(|&(u, v)| match (u == cap, v == cap) {
                (true, _) => Some(v),
                (_, true) => Some(u),
                _ => None,
            });
            let w = nb.expect("caps have a neighbour");
            for (i, &p) in self.pairs[cap].iter().enumerate() {
                let mut next = self.clone();
                let mut rest = self.pairs[cap].clone();
                rest.remove(i);
                next.pairs[cap] = vec![p];
                next.pairs[w].extend(rest);
                next.reduce(out);
            }
            return;
        }
        if c.cap_base.values().any(|&v| self.pairs[v].is_empty()) {
            return;
        }
        let Some((&e, &cb)) = c.cap_base.iter().next() else {
            let parts = (0..self.edges.len()).map(|e| self.pairs[c.cap[&e]][0]).collect();
            out.push(parts);
            return;
        };
        let (u, v) = self.edges[e];
        let w = if u == cb { v } else { u };
        for (i, &p) in self.pairs[cb].iter().enumerate() {
            let mut next = self.clone();
            let mut rest = self.pairs[cb].clone();
            rest.remove(i);
            next.pairs[cb] = vec![p];
            next.pairs[w].extend(rest);
            for &f in &c.grouped[&e] {
                let (a, b) = next.edges[f];
                next.edges[f] = if a == cb { (w, b) } else { (a, w) };
            }
            next.reduce(out);
        }
    }
}

/// Every admissible tree with `k` curves in genus `g`, up to isomorphism,
/// sorted by canonical form.
pub fn enumerate_admissible_trees(g: usize, k: usize) -> Result<Vec<PartitionTree>> {
    GenusContext::new(g)?;
    let mut shapes: BTreeSet<String> = BTreeSet::from(["0".to_string()]);
    for _ in 0..k {
        let mut grown = BTreeSet::new();
        for s in &shapes {
            let t = PartitionTree::parse(s, 1)?;
            for v in 0..t.vertex_count() {
                let mut genus = t.genus.clone();
                let mut edges = t.edges.clone();
                genus.push(0);
                edges.push((v, genus.len() - 1));
                grown.insert(canonical(&genus, &edges));
            }
        }
        shapes = grown;
    }
    let mut out = BTreeMap::new();
    for s in &shapes {
        let shape = PartitionTree::parse(s, 1)?;
        let adj = shape.adjacency();
        let mins: Vec<usize> = adj.iter().map(|a| usize::from(a.len() <= 2)).collect();
        let base: usize = mins.iter().sum();
        if base > g {
            continue;
        }
        let mut extra = vec![0; mins.len()];
        compositions(g - base, 0, &mut extra, &mut |ex| {
            let genus: Vec<usize> = mins.iter().zip(ex).map(|(m, e)| m + e).collect();
            let key = canonical(&genus, &shape.edges);
            out.entry(key).or_insert(());
        });
    }
    let mut trees = Vec::with_capacity(out.len());
    for key in out.keys() {
        let t = PartitionTree::parse(key, g)?;
        if validate_tree(&t).is_empty() {
            trees.push(t);
        }
    }
    Ok(trees)
}

fn compositions(left: usize, i: usize, acc: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if i + 1 == acc.len() {
        acc[i] = left;
        f(acc);
        return;
    }
    for x in 0..=left {
        acc[i] = x;
        compositions(left - x, i + 1, acc, f);
    }
    acc[i] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::sigma_k;

    fn tree(s: &str, g: usize) -> PartitionTree {
        PartitionTree::parse(s, g).unwrap()
    }

    fn sk(t: &PartitionTree) -> SigmaWedge {
        tree_sigma_k(t, &realize_splitting(t).unwrap()).unwrap()
    }

    #[test]
    fn text_round_trip() {
        for s in ["1(2)", "0(1)(1)(2)", "1(1(1(1)))", "3", "1(1)(1)(1)(1(1(1)))"] {
            assert_eq!(tree(s, 16).to_string(), s);
        }
        let t = tree(" 0 (1) (12) ", 13);
        assert_eq!(t.vertex_genera(), &[0, 1, 12]);
        assert!(PartitionTree::parse("0(1", 1).is_err());
        assert!(PartitionTree::parse("(1)", 1).is_err());
        assert!(PartitionTree::parse("1)(", 1).is_err());
    }

    #[test]
    fn canonical_form_ignores_labelling() {
        assert_eq!(tree("2(0(1)(1))", 4).canonical_string(), tree("0(1)(2)(1)", 4).canonical_string());
        assert_eq!(tree("1(1(1(1)))", 4).canonical_string(), tree("1(1)(1(1))", 4).canonical_string());
        assert_ne!(tree("1(2)(1)", 4).canonical_string(), tree("2(1)(1)", 4).canonical_string());
    }

    #[test]
    fn validation_examples() {
        assert!(validate_tree(&tree("1(2)", 3)).is_empty());
        assert!(validate_tree(&tree("0(1)(1)(1)", 3)).is_empty());
        assert!(validate_tree(&tree("3", 3)).is_empty());
        let v = validate_tree(&tree("1(0)(2)", 3));
        assert!(v.iter().any(|m| m.contains("inessential")), "{v:?}");
        let v = validate_tree(&tree("1(0(2))", 3));
        assert!(v.iter().any(|m| m.contains("vertex 1")), "{v:?}");
        let v = validate_tree(&tree("1(2)", 4));
        assert!(v.iter().any(|m| m.contains("genus sum")), "{v:?}");
        let cyc = PartitionTree::new(3, vec![1, 1, 1], vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(validate_tree(&cyc)[0].contains("not a tree"));
        let forest = PartitionTree::new(3, vec![1, 1, 1], vec![(0, 1), (0, 1)]).unwrap();
        assert!(!validate_tree(&forest).is_empty());
        assert!(PartitionTree::new(3, vec![1, 2], vec![(0, 2)]).is_err());
    }

    #[test]
    fn curve_genus_examples() {
        assert_eq!(curve_genus(&tree("1(2)", 3), 0).unwrap(), 1);
        let star = tree("0(1)(1)(1)", 3);
        for e in 0..3 {
            assert_eq!(curve_genus(&star, e).unwrap(), 1);
        }
        let path = tree("1(1(1(1)))", 4);
        assert_eq!(curve_genus(&path, 1).unwrap(), 2);
        assert_eq!(curve_genus(&path, 0).unwrap(), 1);
    }

    #[test]
    fn classification_examples() {
        let c = classify(&tree("1(2)", 3)).unwrap();
        assert_eq!(c.outermost, vec![true]);
        assert_eq!(c.cap[&0], 0);
        assert!(c.simple);

        let c = classify(&tree("0(1)(1)(1)", 3)).unwrap();
        assert_eq!(c.outermost, vec![true; 3]);
        assert_eq!(c.grouping, vec![false; 3]);
        assert!(c.cap_base.is_empty());

        // centre 1 with three genus-1 leaves, then a path 1 - 1 - 1 onward
        let t = tree("1(1)(1)(1)(1(1(1)))", 7);
        let c = classify(&t).unwrap();
        let toward_path = t.edges().iter().position(|&e| e == (0, 4)).unwrap();
        assert!(c.grouping[toward_path]);
        assert_eq!(c.cap_base[&toward_path], 0);
        assert_eq!(c.grouped[&toward_path].len(), 3);
        let next = t.edges().iter().position(|&e| e == (4, 5)).unwrap();
        assert!(c.grouping[next]);
        assert_eq!(c.cap_base[&next], 5);

        // a single grouping curve: smaller side wins
        let t = tree("1(1)(1)(1)(1(1))", 6);
        let c = classify(&t).unwrap();
        let e = t.edges().iter().position(|&e| e == (0, 4)).unwrap();
        assert_eq!(c.cap_base[&e], 4);
        // tie on genus goes to the lower index
        let c = classify(&tree("1(1(1(1)))", 4)).unwrap();
        assert_eq!(c.cap_base[&1], 1);

        assert!(!is_simple(&tree("0(1)(1)(2)", 4)).unwrap());
        assert!(classify(&tree("1(0)", 1)).is_err());
    }

    #[test]
    fn splitting_examples() {
        let a = realize_splitting(&tree("3", 3)).unwrap();
        assert_eq!(a.pair_indices(0), &[1, 2, 3]);
        let a = realize_splitting(&tree("1(2)", 3)).unwrap();
        assert_eq!(a.pair_indices(0), &[1]);
        assert_eq!(a.pair_indices(1), &[2, 3]);
        for g in 2..=5 {
            for k in 0..=2 * g - 3 {
                for t in enumerate_admissible_trees(g, k).unwrap() {
                    realize_splitting(&t).unwrap().check().unwrap();
                }
            }
        }
    }

    #[test]
    fn edge_sigma_examples() {
        let t = tree("1(2)", 3);
        let s = edge_sigma(&t, &realize_splitting(&t).unwrap(), 0).unwrap();
        let genus1 = IntSymplecticSubgroup::standard(t.ctx(), &[1]);
        assert_eq!(s, crate::sigma::sigma_of_int_subgroup(&genus1, Mode::Closed).unwrap());
        let t = tree("0(1)(1)(2)", 4);
        let asg = realize_splitting(&t).unwrap();
        let third = edge_sigma(&t, &asg, 2).unwrap();
        let ctx4 = t.ctx();
        let direct = crate::sigma::sigma_of_int_subgroup(&IntSymplecticSubgroup::standard(ctx4, &[3, 4]), Mode::Closed).unwrap();
        assert_eq!(third, direct);
        let other = crate::sigma::sigma_of_int_subgroup(&IntSymplecticSubgroup::standard(ctx4, &[1, 2]), Mode::Closed).unwrap();
        assert_eq!(third, other);
    }

    #[test]
    fn edge_sigma_is_side_independent() {
        for g in 2..=4 {
            for k in 1..=2 * g - 3 {
                for t in enumerate_admissible_trees(g, k).unwrap() {
                    let asg = realize_splitting(&t).unwrap();
                    for e in 0..k {
                        edge_sigma(&t, &asg, e).unwrap();
                    }
                }
            }
        }
    }

    #[test]
    fn tree_sigma_examples() {
        let path = tree("1(1(1(1)))", 4);
        let w = sk(&path);
        assert!(!w.is_zero());
        let sys = CycleSystem::parse("a1, b1; a2, b2; a3, b3", path.ctx()).unwrap();
        assert_eq!(w, sigma_k(&sys).unwrap());
        assert!(sk(&tree("0(1)(1)(2)", 4)).is_zero());
        assert!(sk(&tree("0(1)(1)(1)", 3)).is_zero());
        assert!(tree_sigma_k(&tree("4", 4), &realize_splitting(&tree("4", 4)).unwrap()).is_err());
    }

    #[test]
    fn vanishing_examples() {
        assert!(!vanishes_main3(&tree("1(1(1(1)))", 4)).unwrap());
        assert!(vanishes_main3(&tree("0(1)(1)(2)", 4)).unwrap());
        assert!(matches!(vanishes_main3(&tree("0(1)(1)(1)", 3)), Err(Error::HypothesisViolation(_))));
    }

    #[test]
    fn sigma_detects_genus0_vertices() {
        for (g, k) in [(4, 2), (4, 3), (5, 2), (5, 3)] {
            let trees = enumerate_admissible_trees(g, k).unwrap();
            assert!(!trees.is_empty());
            for t in trees {
                assert_eq!(sk(&t).is_zero(), vanishes_main3(&t).unwrap(), "{t}");
            }
        }
    }

    #[test]
    fn sigma_vanishes_from_k_equal_g() {
        for g in 3..=4 {
            for k in g..=2 * g - 3 {
                for t in enumerate_admissible_trees(g, k).unwrap() {
                    assert!(sk(&t).is_zero(), "{t}");
                    assert!(reduce_to_genus1(&t).unwrap().is_empty());
                }
            }
        }
    }

    fn sum_sigma(systems: &[CycleSystem], ctx: GenusContext, k: usize) -> SigmaWedge {
        let dim = QuadraticBasis::new(ctx, Mode::Closed).dim();
        let mut acc = SigmaWedge::from_coords(ctx, &vec![BitRow::zeros(dim); k]).unwrap();
        for s in systems {
            assert!(s.parts().iter().all(|p| p.rank() == 2));
            acc = acc.checked_add(&sigma_k(s).unwrap()).unwrap();
        }
        acc
    }

    #[test]
    fn reduction_examples() {
        let t = tree("2(2)", 4);
        let r = reduce_to_genus1(&t).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(sum_sigma(&r, t.ctx(), 1), sk(&t));
        assert!(reduce_to_genus1(&tree("0(1)(1)(1)", 3)).unwrap().is_empty());
        let t = tree("1(1(1(1)))", 4);
        let r = reduce_to_genus1(&t).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(sigma_k(&r[0]).unwrap(), sk(&t));
        assert_eq!(reduce_to_genus1(&tree("4", 4)), Err(Error::NoCurves));
    }

    #[test]
    fn reduction_preserves_sigma() {
        for g in 2..=4 {
            for k in 1..=2 * g - 3 {
                for t in enumerate_admissible_trees(g, k).unwrap() {
                    let r = reduce_to_genus1(&t).unwrap();
                    assert_eq!(sum_sigma(&r, t.ctx(), k), sk(&t), "{t}");
                }
            }
        }
        for t in enumerate_admissible_trees(5, 3).unwrap() {
            let r = reduce_to_genus1(&t).unwrap();
            assert_eq!(sum_sigma(&r, t.ctx(), 3), sk(&t), "{t}");
        }
    }

    #[test]
    fn enumeration_respects_the_curve_bound() {
        for g in 2..=5 {
            assert!(enumerate_admissible_trees(g, 2 * g - 2).unwrap().is_empty());
            assert_eq!(enumerate_admissible_trees(g, 0).unwrap().len(), 1);
        }
        // genus splits of a single curve: 1|g-1, ..., floor(g/2)|ceil(g/2)
        assert_eq!(enumerate_admissible_trees(5, 1).unwrap().len(), 2);
        // g=3, k=3: only the star
        let t = enumerate_admissible_trees(3, 3).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].canonical_string(), "0(1)(1)(1)");
    }

    #[test]
    fn enumeration_matches_brute_force() {
        // label every labelled tree on k+1 vertices (Prüfer codes) and dedupe
        for (g, k) in [(3, 2), (4, 3), (4, 4), (5, 4)] {
            let n: usize = k + 1;
            let mut seen = BTreeSet::new();
            let mut code = vec![0usize; n.saturating_sub(2)];
            loop {
                let edges = prufer_edges(&code, n);
                let mut genus = vec![0; n];
                brute_labels(g, 0, &mut genus, &mut |gs| {
                    let t = PartitionTree::new(g, gs.to_vec(), edges.clone()).unwrap();
                    if validate_tree(&t).is_empty() {
                        seen.insert(t.canonical_string());
                    }
                });
                if !next_code(&mut code, n) {
                    break;
                }
            }
            let ours: BTreeSet<String> =
                enumerate_admissible_trees(g, k).unwrap().iter().map(PartitionTree::canonical_string).collect();
            assert_eq!(ours, seen, "g={g} k={k}");
        }
    }

    fn brute_labels(left: usize, i: usize, acc: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if i == acc.len() {
            if left == 0 {
                f(acc);
            }
            return;
        }
        for x in 0..=left {
            acc[i] = x;
            brute_labels(left - x, i + 1, acc, f);
        }
    }

    fn next_code(code: &mut [usize], n: usize) -> bool {
        for c in code.iter_mut() {
            *c += 1;
            if *c < n {
                return true;
            }
            *c = 0;
        }
        false
    }

    fn prufer_edges(code: &[usize], n: usize) -> Vec<(usize, usize)> {
        if n == 1 {
            return vec![];
        }
        let mut deg = vec![1; n];
        for &c in code {
            deg[c] += 1;
        }
        let mut edges = Vec::new();
        for &c in code {
            let leaf = (0..n).find(|&v| deg[v] == 1).unwrap();
            edges.push((leaf, c));
            deg[leaf] -= 1;
            deg[c] -= 1;
        }
        let rest: Vec<usize> = (0..n).filter(|&v| deg[v] == 1).collect();
        edges.push((rest[0], rest[1]));
        edges
    }
}
