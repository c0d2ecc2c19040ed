//! Seeded random instances for property suites, self-tests and benchmarks.

use rand::Rng;

use crate::cycles::CycleSystem;
use crate::error::Result;
use crate::gf2::{GenusContext, Gf2Matrix, Gf2Vector};
use crate::lattice::{int_form, IntSymplecticPair, IntSymplecticSubgroup, IntVector};

/// An element of `Sp(2g, Z)` stored by the images of the basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntSymplecticMatrix {
    cols: Vec<IntVector>,
}

impl IntSymplecticMatrix {
    pub fn identity(ctx: GenusContext) -> Self {
        Self { cols: (0..ctx.dim()).map(|i| IntVector::basis(ctx, i)).collect() }
    }

    pub fn ctx(&self) -> GenusContext {
        self.cols[0].ctx()
    }

    pub fn columns(&self) -> &[IntVector] {
        &self.cols
    }

    pub fn apply(&self, v: &IntVector) -> IntVector {
        let mut out = IntVector::zero(self.ctx());
        for (c, col) in v.coords().iter().zip(&self.cols) {
            if !num_traits::Zero::is_zero(c) {
                out = &out + &col.scale(c);
            }
        }
        out
    }

    /// Left-multiplies by the transvection `x ↦ x + k (x · w) w`.
    pub fn transvect(&mut self, w: &IntVector, k: i64) {
        for col in &mut self.cols {
            let f = int_form(col, w).expect("same genus");
            *col = &*col + &w.scale(&(f * k));
        }
    }

    pub fn reduce_mod2(&self) -> Gf2Matrix {
        let cols = self.cols.iter().map(|c| c.reduce_mod2().bits()).collect();
        Gf2Matrix::from_columns(self.ctx(), cols).expect("square")
    }

    pub fn apply_pair(&self, p: &IntSymplecticPair) -> IntSymplecticPair {
        IntSymplecticPair { x: self.apply(&p.x), y: self.apply(&p.y) }
    }

    pub fn apply_subgroup(&self, u: &IntSymplecticSubgroup) -> IntSymplecticSubgroup {
        let pairs = u.pairs().iter().map(|p| self.apply_pair(p)).collect();
        IntSymplecticSubgroup::new(self.ctx(), pairs).expect("isometries preserve frames")
    }
}

/// A nonzero vector with entries in `{-1, 0, 1}` supported on the pairs in `support`.
fn random_direction<R: Rng>(ctx: GenusContext, support: &[usize], rng: &mut R) -> IntVector {
    loop {
        let mut c = vec![0i64; ctx.dim()];
        for &i in support {
            c[2 * (i - 1)] = rng.gen_range(-1..=1);
            c[2 * (i - 1) + 1] = rng.gen_range(-1..=1);
        }
        if c.iter().any(|&x| x != 0) {
            return IntVector::from_i64s(ctx, &c).expect("right length");
        }
    }
}

fn random_product<R: Rng>(ctx: GenusContext, support: &[usize], steps: usize, level: i64, rng: &mut R) -> IntSymplecticMatrix {
    let mut m = IntSymplecticMatrix::identity(ctx);
    for _ in 0..steps {
        let w = random_direction(ctx, support, rng);
        let k = if rng.gen_bool(0.5) { level } else { -level };
        m.transvect(&w, k);
    }
    m
}

/// A product of `steps` random transvections `x ↦ x ± (x · w) w`.
pub fn random_sp<R: Rng>(ctx: GenusContext, steps: usize, rng: &mut R) -> IntSymplecticMatrix {
    let all: Vec<usize> = (1..=ctx.genus()).collect();
    random_product(ctx, &all, steps, 1, rng)
}

/// Like [`random_sp`] but only moving the standard pairs in `support`.
pub fn random_sp_on<R: Rng>(ctx: GenusContext, support: &[usize], steps: usize, rng: &mut R) -> IntSymplecticMatrix {
    random_product(ctx, support, steps, 1, rng)
}

/// A random element of the level-2 congruence subgroup (identity mod 2).
pub fn random_level2<R: Rng>(ctx: GenusContext, steps: usize, rng: &mut R) -> IntSymplecticMatrix {
    let all: Vec<usize> = (1..=ctx.genus()).collect();
    random_product(ctx, &all, steps, 2, rng)
}

/// A random product of GF(2) transvections.
pub fn random_gf2_sp<R: Rng>(ctx: GenusContext, steps: usize, rng: &mut R) -> Gf2Matrix {
    let mut m = Gf2Matrix::identity(ctx);
    for _ in 0..steps {
        let v = rng.gen_range(1..=ctx.full_mask());
        m = Gf2Matrix::transvection(Gf2Vector::from_bits(ctx, v).expect("in range")).compose(&m);
    }
    m
}

/// `(x, y) ↦ (αx + βy, γx + δy)` for a random small `[[α, β], [γ, δ]] ∈ SL_2(Z)`.
pub fn random_sl2_change<R: Rng>(p: &IntSymplecticPair, rng: &mut R) -> IntSymplecticPair {
    let (mut x, mut y) = (p.x.clone(), p.y.clone());
    for _ in 0..rng.gen_range(0..4) {
        let k = rng.gen_range(-2..=2);
        if rng.gen_bool(0.5) {
            x = &x + &y.times(k);
        } else {
            y = &y + &x.times(k);
        }
    }
    IntSymplecticPair::new(x, y).expect("SL2 preserves the pairing")
}

/// `M · (⟨a1, b1⟩, ⟨a2, b2⟩)` for a random `M`.
pub fn random_genus1_pair<R: Rng>(ctx: GenusContext, rng: &mut R) -> Result<CycleSystem> {
    let m = random_sp(ctx, 2 * ctx.genus() + 2, rng);
    let parts = (1..=2).map(|i| m.apply_subgroup(&IntSymplecticSubgroup::standard(ctx, &[i]))).collect();
    CycleSystem::new(ctx, parts)
}

/// A second system with the same σ-pair as `p`: a level-2 image, each pair
/// re-based by `SL_2(Z)`, parts in random order.
pub fn sigma_matched<R: Rng>(p: &CycleSystem, rng: &mut R) -> Result<CycleSystem> {
    let ctx = p.ctx();
    let l = random_level2(ctx, ctx.genus() + 2, rng);
    let mut parts: Vec<IntSymplecticSubgroup> = p
        .parts()
        .iter()
        .map(|u| {
            let pairs = u.pairs().iter().map(|q| random_sl2_change(&l.apply_pair(q), rng)).collect();
            IntSymplecticSubgroup::new(ctx, pairs)
        })
        .collect::<Result<_>>()?;
    if rng.gen_bool(0.5) {
        parts.reverse();
    }
    CycleSystem::new(ctx, parts)
}

/// `M · (⟨a1, b1⟩, ⟨a2, b2⟩, ⟨a3, b3⟩)` at genus 3.
pub fn random_splitting_222<R: Rng>(rng: &mut R) -> Result<[IntSymplecticSubgroup; 3]> {
    let ctx = GenusContext::new(3)?;
    let m = random_sp(ctx, 8, rng);
    Ok([1, 2, 3].map(|i| m.apply_subgroup(&IntSymplecticSubgroup::standard(ctx, &[i]))))
}

/// A legal input to [`crate::cycles::relation_holds`] at genus 4.
#[derive(Clone, Debug)]
pub struct RelationInstance {
    pub u: IntSymplecticSubgroup,
    pub vs: Vec<IntSymplecticSubgroup>,
    /// The `V_i` lie in `U` rather than in `U^⊥`.
    pub inside: bool,
}

/// Genus-1 `V_i` inside a rank-6 `U` or inside `U^⊥` for a rank-2 `U`.
/// Half of the instances use a full splitting of the ambient block, so both
/// outcomes of the relation test occur.
pub fn random_relation_instance<R: Rng>(rng: &mut R) -> Result<RelationInstance> {
    let ctx = GenusContext::new(4)?;
    let m = random_sp(ctx, 10, rng);
    let inside = rng.gen_bool(0.5);
    let (u_idx, block): (Vec<usize>, Vec<usize>) = if inside {
        (vec![1, 2, 3], vec![1, 2, 3])
    } else {
        (vec![1], vec![2, 3, 4])
    };
    let u = m.apply_subgroup(&IntSymplecticSubgroup::standard(ctx, &u_idx));
    let n = random_sp_on(ctx, &block, 6, rng);
    let vs = if rng.gen_bool(0.5) {
        block.iter().map(|&i| m.apply_subgroup(&n.apply_subgroup(&IntSymplecticSubgroup::standard(ctx, &[i])))).collect()
    } else {
        (0..rng.gen_range(1..=4))
            .map(|_| {
                let n = random_sp_on(ctx, &block, 6, rng);
                let i = block[rng.gen_range(0..block.len())];
                m.apply_subgroup(&n.apply_subgroup(&IntSymplecticSubgroup::standard(ctx, &[i])))
            })
            .collect()
    };
    Ok(RelationInstance { u, vs, inside })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigma::{sigma_of_int_subgroup, Mode};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_matrices_are_symplectic() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for g in 1..=5 {
            let ctx = GenusContext::new(g).unwrap();
            for _ in 0..10 {
                let m = random_sp(ctx, 8, &mut rng);
                for i in 0..ctx.dim() {
                    for j in 0..ctx.dim() {
                        let want = int_form(&IntVector::basis(ctx, i), &IntVector::basis(ctx, j)).unwrap();
                        assert_eq!(int_form(&m.columns()[i], &m.columns()[j]).unwrap(), want);
                    }
                }
                assert!(m.reduce_mod2().is_symplectic());
                assert_eq!(random_level2(ctx, 5, &mut rng).reduce_mod2(), Gf2Matrix::identity(ctx));
                assert!(random_gf2_sp(ctx, 5, &mut rng).is_symplectic());
            }
        }
    }

    #[test]
    fn matched_systems_share_sigma() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let ctx = GenusContext::new(4).unwrap();
        for _ in 0..20 {
            let p = random_genus1_pair(ctx, &mut rng).unwrap();
            let q = sigma_matched(&p, &mut rng).unwrap();
            let sp: Vec<_> = p.parts().iter().map(|u| sigma_of_int_subgroup(u, Mode::Closed).unwrap()).collect();
            let sq: Vec<_> = q.parts().iter().map(|u| sigma_of_int_subgroup(u, Mode::Closed).unwrap()).collect();
            assert!(sp == sq || (sp[0] == sq[1] && sp[1] == sq[0]));
        }
    }

    #[test]
    fn relation_instances_are_legal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let r = random_relation_instance(&mut rng).unwrap();
            for v in &r.vs {
                assert_eq!(v.rank(), 2);
                if r.inside {
                    assert!(r.u.contains_subgroup(v));
                } else {
                    assert!(v.orthogonal_to(&r.u));
                }
            }
        }
    }
}
