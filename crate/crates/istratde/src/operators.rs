//! Mutation, crossover, bound repair, and greedy selection.
//!
//! All operators are pure functions of their inputs and a random stream:
//! given the same stream state they replay the same draws, which is what
//! makes parallel reproduction bit-identical to the sequential loop. Draw
//! order is part of each operator's contract and is documented on it.

use rand::Rng;

use crate::error::{Error, Result};
use crate::population::Population;
use crate::real::Real;
use crate::strategy::{BaseVectorKind, StrategyConfig, PBEST_FRACTION};

/// Candidate produced by crossover; `j_rand` records the guaranteed
/// inheritance coordinate for binomial crossover and is absent otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialVector<R: Real> {
    pub coords: Vec<R>,
    pub j_rand: Option<usize>,
}

/// Outcome of base-vector selection: either a concrete population index or
/// the marker for the target individual itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseRef {
    Index(usize),
    Current,
}

impl BaseRef {
    pub fn resolve(self, target: usize) -> usize {
        match self {
            BaseRef::Index(i) => i,
            BaseRef::Current => target,
        }
    }
}

/// Per-generation snapshot ordering: the best index and the `pbest`
/// candidate set, computed once per generation and shared by every
/// reproduction in it.
#[derive(Debug, Clone)]
pub struct PopulationRanking {
    best: usize,
    pbest_pool: Vec<usize>,
}

impl PopulationRanking {
    /// Ranks a population snapshot. The `pbest` pool holds the
    /// `ceil(0.05 N)` (at least one) lowest-fitness indices; fitness ties
    /// break to the lower index.
    pub fn compute<R: Real>(pop: &Population<R>) -> Self {
        let n = pop.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            pop.fitness()[a]
                .partial_cmp(&pop.fitness()[b])
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        let count = ((PBEST_FRACTION * n as f64).ceil() as usize).max(1);
        Self {
            best: order[0],
            pbest_pool: order[..count.min(n)].to_vec(),
        }
    }

    pub fn best(&self) -> usize {
        self.best
    }

    pub fn pbest_pool(&self) -> &[usize] {
        &self.pbest_pool
    }
}

/// Small exclusion set for distinct-index sampling; stays a plain vector
/// because it never holds more than eleven entries.
#[derive(Debug, Clone, Default)]
struct Excluded(Vec<usize>);

impl Excluded {
    fn with_target(target: usize) -> Self {
        Self(vec![target])
    }

    fn contains(&self, index: usize) -> bool {
        self.0.contains(&index)
    }

    fn insert(&mut self, index: usize) {
        if !self.contains(index) {
            self.0.push(index);
        }
    }

    fn len(&self) -> usize {
        self.0.len()
    }
}

/// Uniform draw over `0..n` excluding the listed indices, by rejection.
/// One successful draw per call; the number of uniforms consumed depends
/// only on the stream state, so replays are exact.
fn draw_distinct<G: Rng + ?Sized>(rng: &mut G, n: usize, excluded: &Excluded) -> Result<usize> {
    if excluded.len() >= n {
        return Err(Error::InsufficientPopulation {
            needed: 1,
            available: 0,
        });
    }
    loop {
        let candidate = rng.gen_range(0..n);
        if !excluded.contains(candidate) {
            return Ok(candidate);
        }
    }
}

fn draw_pbest<G: Rng + ?Sized>(rng: &mut G, ranking: &PopulationRanking) -> usize {
    ranking.pbest_pool[rng.gen_range(0..ranking.pbest_pool.len())]
}

/// Selects a base vector of the given kind for `target`.
///
/// `Rand` draws uniformly outside `excluded` (which always contains the
/// target); `Best` and `Pbest` resolve against the snapshot ranking;
/// `Current` returns the marker for the target itself. Only `Rand` and
/// `Pbest` consume randomness (one bounded draw each, plus rejections for
/// `Rand`).
pub fn select_base<R: Real, G: Rng + ?Sized>(
    kind: BaseVectorKind,
    pop: &Population<R>,
    ranking: &PopulationRanking,
    target: usize,
    excluded: &[usize],
    rng: &mut G,
) -> Result<BaseRef> {
    match kind {
        BaseVectorKind::Rand => {
            let mut exc = Excluded::with_target(target);
            for &i in excluded {
                exc.insert(i);
            }
            Ok(BaseRef::Index(draw_distinct(rng, pop.len(), &exc)?))
        }
        BaseVectorKind::Best => Ok(BaseRef::Index(ranking.best())),
        BaseVectorKind::Pbest => Ok(BaseRef::Index(draw_pbest(rng, ranking))),
        BaseVectorKind::Current => Ok(BaseRef::Current),
    }
}

/// Generalized mutation: `v = x_bl + F (x_br - x_bl) + F sum_k (x_ak - x_bk)`.
///
/// Index discipline: the exclusion set starts with the target, every
/// `rand`-drawn base index joins it, and every difference index joins it as
/// it is drawn, so all `rand`/difference participants are pairwise distinct
/// and distinct from the target. `Best`, `Pbest`, and `Current` bases are
/// positional references and stay out of the exclusion set.
///
/// Draw order: `bl` base, `br` base, then difference pairs `(a_1, b_1)` up
/// to `(a_dn, b_dn)`. No bound repair is applied here.
pub fn mutate_generalized<R: Real, G: Rng + ?Sized>(
    pop: &Population<R>,
    ranking: &PopulationRanking,
    target: usize,
    strategy: &StrategyConfig<R>,
    rng: &mut G,
) -> Result<Vec<R>> {
    let n = pop.len();
    let needed = strategy.distinct_index_demand();
    if needed + 1 > n {
        return Err(Error::InsufficientPopulation {
            needed,
            available: n.saturating_sub(1),
        });
    }

    let mut excluded = Excluded::with_target(target);
    let bl_ref = match strategy.bl() {
        BaseVectorKind::Rand => {
            let idx = draw_distinct(rng, n, &excluded)?;
            excluded.insert(idx);
            BaseRef::Index(idx)
        }
        BaseVectorKind::Best => BaseRef::Index(ranking.best()),
        BaseVectorKind::Pbest => BaseRef::Index(draw_pbest(rng, ranking)),
        BaseVectorKind::Current => BaseRef::Current,
    };
    let br_ref = match strategy.br() {
        BaseVectorKind::Rand => {
            let idx = draw_distinct(rng, n, &excluded)?;
            excluded.insert(idx);
            BaseRef::Index(idx)
        }
        BaseVectorKind::Best => BaseRef::Index(ranking.best()),
        BaseVectorKind::Pbest => BaseRef::Index(draw_pbest(rng, ranking)),
        BaseVectorKind::Current => BaseRef::Current,
    };

    let dim = pop.dim();
    let mut diff_sum = vec![R::zero(); dim];
    for _ in 0..strategy.dn() {
        let a = draw_distinct(rng, n, &excluded)?;
        excluded.insert(a);
        let b = draw_distinct(rng, n, &excluded)?;
        excluded.insert(b);
        let va = pop.vector(a);
        let vb = pop.vector(b);
        for j in 0..dim {
            diff_sum[j] += va[j] - vb[j];
        }
    }

    let bl = pop.vector(bl_ref.resolve(target));
    let br = pop.vector(br_ref.resolve(target));
    let f = strategy.f();
    Ok((0..dim)
        .map(|j| bl[j] + f * (br[j] - bl[j]) + f * diff_sum[j])
        .collect())
}

/// The five textbook mutation strategies, implemented directly from their
/// closed forms. These are the reference forms the generalized operator is
/// cross-checked against where the two coincide.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedMutation {
    Rand1,
    Best1,
    Current1,
    CurrentToPbest1,
    CurrentToRand1,
}

/// Classic mutation formulas. Random indices are pairwise distinct and
/// distinct from the target; the `pbest` reference is drawn from the
/// snapshot's best-5% pool and does not join the exclusion set.
pub fn mutate_named<R: Real, G: Rng + ?Sized>(
    name: NamedMutation,
    pop: &Population<R>,
    ranking: &PopulationRanking,
    target: usize,
    f: R,
    rng: &mut G,
) -> Result<Vec<R>> {
    let n = pop.len();
    let needed = match name {
        NamedMutation::Rand1 | NamedMutation::CurrentToRand1 => 3,
        _ => 2,
    };
    if needed + 1 > n {
        return Err(Error::InsufficientPopulation {
            needed,
            available: n.saturating_sub(1),
        });
    }
    let mut excluded = Excluded::with_target(target);
    let draw = |rng: &mut G, excluded: &mut Excluded| -> Result<usize> {
        let idx = draw_distinct(rng, n, excluded)?;
        excluded.insert(idx);
        Ok(idx)
    };
    let dim = pop.dim();
    match name {
        NamedMutation::Rand1 => {
            let r1 = draw(rng, &mut excluded)?;
            let r2 = draw(rng, &mut excluded)?;
            let r3 = draw(rng, &mut excluded)?;
            let (x1, x2, x3) = (pop.vector(r1), pop.vector(r2), pop.vector(r3));
            Ok((0..dim).map(|j| x1[j] + f * (x2[j] - x3[j])).collect())
        }
        NamedMutation::Best1 => {
            let best = pop.vector(ranking.best());
            let r1 = draw(rng, &mut excluded)?;
            let r2 = draw(rng, &mut excluded)?;
            let (x1, x2) = (pop.vector(r1), pop.vector(r2));
            Ok((0..dim).map(|j| best[j] + f * (x1[j] - x2[j])).collect())
        }
        NamedMutation::Current1 => {
            let xi = pop.vector(target);
            let r1 = draw(rng, &mut excluded)?;
            let r2 = draw(rng, &mut excluded)?;
            let (x1, x2) = (pop.vector(r1), pop.vector(r2));
            Ok((0..dim).map(|j| xi[j] + f * (x1[j] - x2[j])).collect())
        }
        NamedMutation::CurrentToPbest1 => {
            let xi = pop.vector(target);
            let pbest = pop.vector(draw_pbest(rng, ranking));
            let r1 = draw(rng, &mut excluded)?;
            let r2 = draw(rng, &mut excluded)?;
            let (x1, x2) = (pop.vector(r1), pop.vector(r2));
            Ok((0..dim)
                .map(|j| xi[j] + f * (pbest[j] - xi[j]) + f * (x1[j] - x2[j]))
                .collect())
        }
        NamedMutation::CurrentToRand1 => {
            let xi = pop.vector(target);
            let r1 = draw(rng, &mut excluded)?;
            let r2 = draw(rng, &mut excluded)?;
            let r3 = draw(rng, &mut excluded)?;
            let (x1, x2, x3) = (pop.vector(r1), pop.vector(r2), pop.vector(r3));
            Ok((0..dim)
                .map(|j| xi[j] + f * (x1[j] - xi[j]) + f * (x2[j] - x3[j]))
                .collect())
        }
    }
}

fn check_same_len<R: Real>(x: &[R], v: &[R]) -> Result<()> {
    if x.len() != v.len() || x.is_empty() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: v.len(),
        });
    }
    Ok(())
}

/// Binomial crossover: coordinate `j` comes from the mutant when
/// `rand(0,1) <= cr` or `j == j_rand`, from the parent otherwise.
///
/// Draw order: `j_rand`, then one uniform per coordinate (including the
/// forced one).
pub fn crossover_bin<R: Real, G: Rng + ?Sized>(
    x: &[R],
    v: &[R],
    cr: R,
    rng: &mut G,
) -> Result<TrialVector<R>> {
    check_same_len(x, v)?;
    let d = x.len();
    let j_rand = rng.gen_range(0..d);
    let coords = (0..d)
        .map(|j| {
            if R::sample_unit(rng) <= cr || j == j_rand {
                v[j]
            } else {
                x[j]
            }
        })
        .collect();
    Ok(TrialVector {
        coords,
        j_rand: Some(j_rand),
    })
}

/// Exponential crossover: copies a single circular block of length `L`
/// from the mutant, starting at a uniform position. `L` starts at one and
/// grows while `rand(0,1) <= cr`, capped at the dimension.
///
/// Draw order: start position, then one uniform per extension attempt
/// (none once the cap is reached).
pub fn crossover_exp<R: Real, G: Rng + ?Sized>(
    x: &[R],
    v: &[R],
    cr: R,
    rng: &mut G,
) -> Result<TrialVector<R>> {
    check_same_len(x, v)?;
    let d = x.len();
    let start = rng.gen_range(0..d);
    let mut len = 1;
    while len < d && R::sample_unit(rng) <= cr {
        len += 1;
    }
    let mut coords: Vec<R> = x.to_vec();
    for offset in 0..len {
        let j = (start + offset) % d;
        coords[j] = v[j];
    }
    Ok(TrialVector {
        coords,
        j_rand: None,
    })
}

/// Arithmetic crossover: one fresh weight per reproduction event,
/// `u = alpha v + (1 - alpha) x` componentwise.
pub fn crossover_arith<R: Real, G: Rng + ?Sized>(
    x: &[R],
    v: &[R],
    rng: &mut G,
) -> Result<TrialVector<R>> {
    check_same_len(x, v)?;
    let alpha = R::sample_unit(rng);
    Ok(arith_with_weight(x, v, alpha))
}

pub(crate) fn arith_with_weight<R: Real>(x: &[R], v: &[R], alpha: R) -> TrialVector<R> {
    let coords = x
        .iter()
        .zip(v)
        .map(|(&xj, &vj)| alpha * vj + (R::one() - alpha) * xj)
        .collect();
    TrialVector {
        coords,
        j_rand: None,
    }
}

/// Componentwise clamp to the box.
pub fn repair_bounds<R: Real>(u: &[R], lb: R, ub: R) -> Vec<R> {
    u.iter().map(|&c| clamp(c, lb, ub)).collect()
}

/// In-place clamp used by the drivers.
pub fn repair_bounds_in_place<R: Real>(u: &mut [R], lb: R, ub: R) {
    for c in u.iter_mut() {
        *c = clamp(*c, lb, ub);
    }
}

fn clamp<R: Real>(c: R, lb: R, ub: R) -> R {
    if c < lb {
        lb
    } else if c > ub {
        ub
    } else {
        c
    }
}

/// Greedy one-to-one selection: the trial survives when its value is less
/// than or equal to the parent's, so exact ties go to the trial.
pub fn select_greedy<'a, R: Real>(x: &'a [R], fx: R, u: &'a [R], fu: R) -> (&'a [R], R, bool) {
    if fu <= fx {
        (u, fu, true)
    } else {
        (x, fx, false)
    }
}
