//! The strategy pool and per-individual strategy sampling.
//!
//! A strategy names a mutation recipe `bl-to-br/dn` plus a crossover scheme,
//! written `DE/bl-to-br/dn/cs`. The pool is the full Cartesian product
//! 4 (bl) x 4 (br) x 4 (dn) x 3 (cs) = 192 discrete configurations. Each
//! individual additionally carries its own control parameters `f` and `cr`,
//! sampled once from U(0,1) and frozen for the rest of the run.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::real::{cast, Real};

/// Role of a base vector in the generalized mutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum BaseVectorKind {
    /// A uniformly drawn individual, distinct from previously drawn indices.
    Rand,
    /// The lowest-fitness individual of the current generation.
    Best,
    /// A uniform draw from the best 5% of the current generation.
    Pbest,
    /// The target individual itself.
    Current,
}

impl BaseVectorKind {
    pub const ALL: [BaseVectorKind; 4] = [
        BaseVectorKind::Rand,
        BaseVectorKind::Best,
        BaseVectorKind::Pbest,
        BaseVectorKind::Current,
    ];
}

impl fmt::Display for BaseVectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            BaseVectorKind::Rand => "rand",
            BaseVectorKind::Best => "best",
            BaseVectorKind::Pbest => "pbest",
            BaseVectorKind::Current => "current",
        };
        f.write_str(name)
    }
}

/// Recombination scheme applied to the mutant and its parent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum CrossoverKind {
    Binomial,
    Exponential,
    Arithmetic,
}

impl CrossoverKind {
    pub const ALL: [CrossoverKind; 3] = [
        CrossoverKind::Binomial,
        CrossoverKind::Exponential,
        CrossoverKind::Arithmetic,
    ];
}

impl fmt::Display for CrossoverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            CrossoverKind::Binomial => "bin",
            CrossoverKind::Exponential => "exp",
            CrossoverKind::Arithmetic => "arith",
        };
        f.write_str(name)
    }
}

/// Number of entries in the full strategy pool.
pub const POOL_SIZE: usize = 192;

/// Fraction of the population eligible as a `pbest` reference.
pub const PBEST_FRACTION: f64 = 0.05;

/// One discrete pool entry: the mutation/crossover recipe without control
/// parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StrategyTuple {
    pub bl: BaseVectorKind,
    pub br: BaseVectorKind,
    pub dn: usize,
    pub cs: CrossoverKind,
}

impl fmt::Display for StrategyTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DE/{}-to-{}/{}/{}", self.bl, self.br, self.dn, self.cs)
    }
}

/// Enumerates the full pool in its documented order: `bl` outermost, then
/// `br`, then `dn` in 1..=4, then `cs`. The first entry is therefore
/// `DE/rand-to-rand/1/bin` and the order is stable across releases so that
/// restricted-pool experiments are reproducible from an index list alone.
pub fn enumerate_pool() -> Vec<StrategyTuple> {
    let mut pool = Vec::with_capacity(POOL_SIZE);
    for bl in BaseVectorKind::ALL {
        for br in BaseVectorKind::ALL {
            for dn in 1..=4 {
                for cs in CrossoverKind::ALL {
                    pool.push(StrategyTuple { bl, br, dn, cs });
                }
            }
        }
    }
    pool
}

/// Position of a tuple in the documented enumeration order.
pub fn pool_index(tuple: &StrategyTuple) -> usize {
    let kind_pos = |k: BaseVectorKind| BaseVectorKind::ALL.iter().position(|&x| x == k).unwrap();
    let cs_pos = CrossoverKind::ALL
        .iter()
        .position(|&x| x == tuple.cs)
        .unwrap();
    ((kind_pos(tuple.bl) * 4 + kind_pos(tuple.br)) * 4 + (tuple.dn - 1)) * 3 + cs_pos
}

/// An individual's complete, immutable reproduction recipe: the discrete
/// strategy tuple plus its frozen control parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StrategyConfig<R: Real> {
    bl: BaseVectorKind,
    br: BaseVectorKind,
    dn: usize,
    cs: CrossoverKind,
    f: R,
    cr: R,
}

impl<R: Real> StrategyConfig<R> {
    /// Builds a config, validating `dn` in 1..=4 and `f`, `cr` in [0, 1].
    pub fn new(tuple: StrategyTuple, f: R, cr: R) -> Result<Self> {
        if !(1..=4).contains(&tuple.dn) {
            return Err(Error::InvalidParameter {
                name: "dn",
                value: tuple.dn as f64,
                min: 1.0,
                max: 4.0,
            });
        }
        check_unit_interval("f", f)?;
        check_unit_interval("cr", cr)?;
        Ok(Self {
            bl: tuple.bl,
            br: tuple.br,
            dn: tuple.dn,
            cs: tuple.cs,
            f,
            cr,
        })
    }

    pub fn bl(&self) -> BaseVectorKind {
        self.bl
    }

    pub fn br(&self) -> BaseVectorKind {
        self.br
    }

    /// Number of difference vectors added to the base combination.
    pub fn dn(&self) -> usize {
        self.dn
    }

    pub fn cs(&self) -> CrossoverKind {
        self.cs
    }

    /// Scale factor applied to the directional and difference terms.
    pub fn f(&self) -> R {
        self.f
    }

    /// Crossover rate.
    pub fn cr(&self) -> R {
        self.cr
    }

    pub fn tuple(&self) -> StrategyTuple {
        StrategyTuple {
            bl: self.bl,
            br: self.br,
            dn: self.dn,
            cs: self.cs,
        }
    }

    /// Constructor for the classic baseline, whose scale factor may range
    /// over [0, 2] instead of the pool's sampled [0, 1].
    pub(crate) fn with_classic_range(tuple: StrategyTuple, f: R, cr: R) -> Result<Self> {
        if f < R::zero() || f > cast::<R>(2.0) {
            return Err(Error::InvalidParameter {
                name: "f",
                value: f.to_f64().unwrap_or(f64::NAN),
                min: 0.0,
                max: 2.0,
            });
        }
        check_unit_interval("cr", cr)?;
        Ok(Self {
            bl: tuple.bl,
            br: tuple.br,
            dn: tuple.dn,
            cs: tuple.cs,
            f,
            cr,
        })
    }

    /// Distinct non-target indices this strategy consumes per reproduction:
    /// one per `rand` base plus two per difference vector.
    pub fn distinct_index_demand(&self) -> usize {
        let rand_bases = [self.bl, self.br]
            .iter()
            .filter(|&&k| k == BaseVectorKind::Rand)
            .count();
        rand_bases + 2 * self.dn
    }
}

fn check_unit_interval<R: Real>(name: &'static str, value: R) -> Result<()> {
    if value < R::zero() || value > R::one() {
        return Err(Error::InvalidParameter {
            name,
            value: value.to_f64().unwrap_or(f64::NAN),
            min: 0.0,
            max: 1.0,
        });
    }
    Ok(())
}

/// Validates a pool restriction: non-empty, all indices inside the pool.
fn check_restriction(restriction: &[usize]) -> Result<()> {
    if restriction.is_empty() {
        return Err(Error::EmptyPoolRestriction);
    }
    if let Some(&bad) = restriction.iter().find(|&&i| i >= POOL_SIZE) {
        return Err(Error::InvalidPoolIndex(bad, POOL_SIZE));
    }
    Ok(())
}

/// Draws one strategy: the discrete tuple uniformly from the (optionally
/// restricted) pool, then `f` and `cr` independently from U(0,1).
///
/// Draw order is fixed at pool index, then `f`, then `cr`, so a given stream
/// state always reproduces the same config.
pub fn sample_strategy<R: Real, G: Rng + ?Sized>(
    rng: &mut G,
    restriction: Option<&[usize]>,
) -> Result<StrategyConfig<R>> {
    static POOL: std::sync::OnceLock<Vec<StrategyTuple>> = std::sync::OnceLock::new();
    let pool = POOL.get_or_init(enumerate_pool);
    let tuple = match restriction {
        Some(indices) => {
            check_restriction(indices)?;
            pool[indices[rng.gen_range(0..indices.len())]]
        }
        None => pool[rng.gen_range(0..POOL_SIZE)],
    };
    let f = R::sample_unit(rng);
    let cr = R::sample_unit(rng);
    StrategyConfig::new(tuple, f, cr)
}

/// Independent categorical weights over the strategy components.
///
/// `bl` and `br` are drawn independently from the shared `vector_kind`
/// distribution; `diff_count` indexes `dn` in 1..=4; `crossover` follows
/// [`CrossoverKind::ALL`] order.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StrategyDistribution {
    pub vector_kind: [f64; 4],
    pub diff_count: [f64; 4],
    pub crossover: [f64; 3],
}

impl StrategyDistribution {
    /// Uniform weights over every component, matching the unrestricted pool.
    pub fn uniform() -> Self {
        Self {
            vector_kind: [0.25; 4],
            diff_count: [0.25; 4],
            crossover: [1.0 / 3.0; 3],
        }
    }

    /// Weights biased toward the component mix observed among elite
    /// individuals: base vectors lean on `best`/`pbest`, low difference
    /// counts and binomial crossover dominate.
    pub fn elite_profile() -> Self {
        Self {
            vector_kind: [0.26, 0.32, 0.32, 0.10],
            diff_count: [0.40, 0.30, 0.20, 0.10],
            crossover: [0.60, 0.25, 0.15],
        }
    }

    /// Checks that every weight vector is non-negative and sums to one
    /// within 1e-9.
    pub fn validate(&self) -> Result<()> {
        validate_weights("vector_kind", &self.vector_kind)?;
        validate_weights("diff_count", &self.diff_count)?;
        validate_weights("crossover", &self.crossover)?;
        Ok(())
    }

    /// Draws one strategy from these distributions: `bl`, `br`, `dn`, `cs`
    /// in that order (one U(0,1) draw each), then `f` and `cr` from U(0,1).
    pub fn sample<R: Real, G: Rng + ?Sized>(&self, rng: &mut G) -> Result<StrategyConfig<R>> {
        self.validate()?;
        let bl = BaseVectorKind::ALL[draw_categorical(rng, &self.vector_kind)];
        let br = BaseVectorKind::ALL[draw_categorical(rng, &self.vector_kind)];
        let dn = draw_categorical(rng, &self.diff_count) + 1;
        let cs = CrossoverKind::ALL[draw_categorical(rng, &self.crossover)];
        let f = R::sample_unit(rng);
        let cr = R::sample_unit(rng);
        StrategyConfig::new(StrategyTuple { bl, br, dn, cs }, f, cr)
    }
}

fn validate_weights(name: &str, weights: &[f64]) -> Result<()> {
    if weights.iter().any(|&w| w < 0.0 || !w.is_finite()) {
        return Err(Error::InvalidDistribution(format!(
            "{name} weights must be finite and non-negative"
        )));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidDistribution(format!(
            "{name} weights sum to {total}, expected 1"
        )));
    }
    Ok(())
}

/// Inverse-CDF draw over validated categorical weights, one uniform each.
fn draw_categorical<G: Rng + ?Sized>(rng: &mut G, weights: &[f64]) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    weights.len() - 1
}

/// Order-sensitive FNV-1a digest of a strategy slice.
///
/// Strategies are frozen at initialization, so the digest of a population's
/// strategies must be identical at every generation of a run.
pub fn strategies_digest<R: Real>(strategies: &[StrategyConfig<R>]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut hash = OFFSET;
    let mut eat = |byte: u8| {
        hash ^= byte as u64;
        hash = hash.wrapping_mul(PRIME);
    };
    for s in strategies {
        eat(pool_index(&s.tuple()) as u8);
        for b in s.f().to_f64().unwrap_or(f64::NAN).to_bits().to_le_bytes() {
            eat(b);
        }
        for b in s.cr().to_f64().unwrap_or(f64::NAN).to_bits().to_le_bytes() {
            eat(b);
        }
    }
    hash
}

/// Convenience constructor for a fixed tuple with explicit parameters,
/// used by the classic baseline and by single-tuple restricted pools.
pub fn fixed_config<R: Real>(
    bl: BaseVectorKind,
    br: BaseVectorKind,
    dn: usize,
    cs: CrossoverKind,
    f: f64,
    cr: f64,
) -> Result<StrategyConfig<R>> {
    StrategyConfig::new(
        StrategyTuple { bl, br, dn, cs },
        cast::<R>(f),
        cast::<R>(cr),
    )
}
