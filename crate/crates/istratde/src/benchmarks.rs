//! Parametric shifted-rotated black-box test functions with known optima.
//!
//! Each problem wraps a classical base function whose global minimum value
//! is zero at the origin of the transformed space `z = R (x - shift)`. The
//! shift is drawn from the strict interior of the box so the optimum never
//! hugs the boundary, and the rotation is an orthonormalized seeded Gaussian
//! matrix. Construction is a pure function of `(function, dim, seed, rotate)`
//! so a problem can be rebuilt from a log header alone.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::real::{cast, Real};
use crate::rng::{keyed_rng, DOMAIN_PROBLEM};

/// Threshold below which a reported error counts as zero.
pub const REPORT_THRESHOLD: f64 = 1e-8;

/// Abscissa of the classical Schwefel minimum.
const SCHWEFEL_ARGMIN: f64 = 420.9687462275036;

/// The eight base landscapes covered by the suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum FunctionId {
    Sphere,
    Rastrigin,
    Ackley,
    Schwefel,
    Rosenbrock,
    Griewank,
    Levy,
    Zakharov,
}

impl FunctionId {
    pub const ALL: [FunctionId; 8] = [
        FunctionId::Sphere,
        FunctionId::Rastrigin,
        FunctionId::Ackley,
        FunctionId::Schwefel,
        FunctionId::Rosenbrock,
        FunctionId::Griewank,
        FunctionId::Levy,
        FunctionId::Zakharov,
    ];

    /// Canonical search box per function.
    pub fn standard_box(self) -> (f64, f64) {
        match self {
            FunctionId::Sphere => (-100.0, 100.0),
            FunctionId::Rastrigin => (-5.12, 5.12),
            FunctionId::Ackley => (-32.768, 32.768),
            FunctionId::Schwefel => (-500.0, 500.0),
            FunctionId::Rosenbrock => (-30.0, 30.0),
            FunctionId::Griewank => (-600.0, 600.0),
            FunctionId::Levy => (-10.0, 10.0),
            FunctionId::Zakharov => (-10.0, 10.0),
        }
    }

    /// Schwefel's basin sits near the box boundary, where a rotated box no
    /// longer contains it; rotation is therefore disabled for it.
    pub fn supports_rotation(self) -> bool {
        !matches!(self, FunctionId::Schwefel)
    }

    fn code(self) -> u64 {
        Self::ALL.iter().position(|&f| f == self).unwrap() as u64
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            FunctionId::Sphere => "sphere",
            FunctionId::Rastrigin => "rastrigin",
            FunctionId::Ackley => "ackley",
            FunctionId::Schwefel => "schwefel",
            FunctionId::Rosenbrock => "rosenbrock",
            FunctionId::Griewank => "griewank",
            FunctionId::Levy => "levy",
            FunctionId::Zakharov => "zakharov",
        };
        f.write_str(name)
    }
}

impl FromStr for FunctionId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sphere" => Ok(FunctionId::Sphere),
            "rastrigin" => Ok(FunctionId::Rastrigin),
            "ackley" => Ok(FunctionId::Ackley),
            "schwefel" => Ok(FunctionId::Schwefel),
            "rosenbrock" => Ok(FunctionId::Rosenbrock),
            "griewank" => Ok(FunctionId::Griewank),
            "levy" => Ok(FunctionId::Levy),
            "zakharov" => Ok(FunctionId::Zakharov),
            other => Err(format!("unknown function '{other}'")),
        }
    }
}

/// A concrete optimization problem: base function, box, shift, rotation.
#[derive(Debug, Clone)]
pub struct BenchmarkProblem<R: Real> {
    function: FunctionId,
    dim: usize,
    lb: R,
    ub: R,
    shift: Vec<R>,
    rotation: Option<Vec<Vec<R>>>,
    optimum_value: R,
}

impl<R: Real> BenchmarkProblem<R> {
    /// Assembles a problem from explicit parts, validating shapes and the
    /// orthogonality of the rotation. The box itself is taken as given;
    /// degenerate boxes are rejected where they matter (initialization).
    pub fn from_parts(
        function: FunctionId,
        lb: R,
        ub: R,
        shift: Vec<R>,
        rotation: Option<Vec<Vec<R>>>,
    ) -> Result<Self> {
        let dim = shift.len();
        if dim == 0 {
            return Err(Error::UnsupportedDimension);
        }
        if let Some(rot) = &rotation {
            if rot.len() != dim || rot.iter().any(|row| row.len() != dim) {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: rot.len(),
                });
            }
            let err = orthogonality_error(rot).to_f64().unwrap_or(f64::INFINITY);
            if err >= 1e-10 {
                return Err(Error::InvalidDistribution(format!(
                    "rotation is not orthogonal (max deviation {err:.3e})"
                )));
            }
        }
        Ok(Self {
            function,
            dim,
            lb,
            ub,
            shift,
            rotation,
            optimum_value: R::zero(),
        })
    }

    pub fn function(&self) -> FunctionId {
        self.function
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Scalar box bounds, identical in every coordinate.
    pub fn bounds(&self) -> (R, R) {
        (self.lb, self.ub)
    }

    /// Location of the global optimum.
    pub fn shift(&self) -> &[R] {
        &self.shift
    }

    pub fn rotation(&self) -> Option<&Vec<Vec<R>>> {
        self.rotation.as_ref()
    }

    pub fn optimum_value(&self) -> R {
        self.optimum_value
    }
}

/// Builds a problem with a seeded interior shift and, when requested and
/// supported, a seeded random rotation. Identical `(function, dim, seed)`
/// always produce identical problems.
pub fn make_problem<R: Real>(
    function: FunctionId,
    dim: usize,
    seed: u64,
    rotate: bool,
) -> Result<BenchmarkProblem<R>> {
    if dim == 0 {
        return Err(Error::UnsupportedDimension);
    }
    let (lb, ub) = function.standard_box();
    let mut rng = keyed_rng(seed, function.code(), dim as u64, DOMAIN_PROBLEM);

    // Shift drawn from the interior band [lb + 0.1 w, ub - 0.1 w].
    let width = ub - lb;
    let shift: Vec<R> = (0..dim)
        .map(|_| {
            let u: f64 = rng.gen();
            cast::<R>(lb_band(lb, width, u))
        })
        .collect();

    let rotation = if rotate {
        if function.supports_rotation() {
            Some(random_rotation::<R>(dim, &mut rng))
        } else {
            eprintln!("warning: rotation requested for {function} is unsupported; using identity");
            None
        }
    } else {
        None
    };

    BenchmarkProblem::from_parts(function, cast::<R>(lb), cast::<R>(ub), shift, rotation)
}

fn lb_band(lb: f64, width: f64, u: f64) -> f64 {
    lb + 0.1 * width + u * 0.8 * width
}

/// Evaluates the objective at `x`. Defined on all finite inputs; staying in
/// the box is the caller's job.
pub fn evaluate<R: Real>(problem: &BenchmarkProblem<R>, x: &[R]) -> Result<R> {
    if x.len() != problem.dim {
        return Err(Error::DimensionMismatch {
            expected: problem.dim,
            got: x.len(),
        });
    }
    let mut z: Vec<R> = x
        .iter()
        .zip(&problem.shift)
        .map(|(&xi, &si)| xi - si)
        .collect();
    if let Some(rot) = &problem.rotation {
        let mut rotated = vec![R::zero(); problem.dim];
        for (out, row) in rotated.iter_mut().zip(rot) {
            let mut acc = R::zero();
            for (&rij, &zj) in row.iter().zip(&z) {
                acc += rij * zj;
            }
            *out = acc;
        }
        z = rotated;
    }
    Ok(base_value(problem.function, &z))
}

/// Error reported in result tables: zero when the gap to the optimum is
/// below `threshold`, the raw gap otherwise. Applied at reporting time only,
/// never inside the optimization loop.
pub fn round_reported<R: Real>(value: R, optimum_value: R, threshold: R) -> R {
    let err = value - optimum_value;
    if err.abs() < threshold {
        R::zero()
    } else {
        err
    }
}

fn base_value<R: Real>(function: FunctionId, z: &[R]) -> R {
    match function {
        FunctionId::Sphere => sphere(z),
        FunctionId::Rastrigin => rastrigin(z),
        FunctionId::Ackley => ackley(z),
        FunctionId::Schwefel => schwefel(z),
        FunctionId::Rosenbrock => rosenbrock(z),
        FunctionId::Griewank => griewank(z),
        FunctionId::Levy => levy(z),
        FunctionId::Zakharov => zakharov(z),
    }
}

fn sphere<R: Real>(z: &[R]) -> R {
    z.iter().fold(R::zero(), |acc, &v| acc + v * v)
}

fn rastrigin<R: Real>(z: &[R]) -> R {
    let ten = cast::<R>(10.0);
    let two_pi = cast::<R>(std::f64::consts::TAU);
    z.iter().fold(R::zero(), |acc, &v| {
        acc + (v * v - ten * (two_pi * v).cos() + ten)
    })
}

fn ackley<R: Real>(z: &[R]) -> R {
    let d = cast::<R>(z.len() as f64);
    let two_pi = cast::<R>(std::f64::consts::TAU);
    let sum_sq = z.iter().fold(R::zero(), |acc, &v| acc + v * v);
    let sum_cos = z.iter().fold(R::zero(), |acc, &v| acc + (two_pi * v).cos());
    let e1 = (-cast::<R>(0.2) * (sum_sq / d).sqrt()).exp();
    let e2 = (sum_cos / d).exp();
    // Written as two non-negative gaps so the value at the optimum is an
    // exact zero.
    cast::<R>(20.0) * (R::one() - e1) + (R::one().exp() - e2)
}

fn schwefel<R: Real>(z: &[R]) -> R {
    let argmin = cast::<R>(SCHWEFEL_ARGMIN);
    let five_hundred = cast::<R>(500.0);
    let g = |t: R| t * t.abs().sqrt().sin();
    let offset = g(argmin);
    let penalty_scale = cast::<R>(10_000.0) * cast::<R>(z.len() as f64);
    z.iter().fold(R::zero(), |acc, &zj| {
        let w = zj + argmin;
        // Outside [-500, 500] the argument is wrapped and a quadratic
        // penalty keeps every term non-negative.
        let value = if w.abs() <= five_hundred {
            g(w)
        } else if w > five_hundred {
            let t = five_hundred - (w % five_hundred);
            g(t) - (w - five_hundred) * (w - five_hundred) / penalty_scale
        } else {
            let t = (w.abs() % five_hundred) - five_hundred;
            g(t) - (w + five_hundred) * (w + five_hundred) / penalty_scale
        };
        acc + (offset - value)
    })
}

fn rosenbrock<R: Real>(z: &[R]) -> R {
    // Coordinates are offset by one so the minimum sits at the origin.
    let one = R::one();
    let hundred = cast::<R>(100.0);
    let mut acc = R::zero();
    for pair in z.windows(2) {
        let y0 = pair[0] + one;
        let y1 = pair[1] + one;
        let a = y1 - y0 * y0;
        let b = y0 - one;
        acc += hundred * a * a + b * b;
    }
    acc
}

fn griewank<R: Real>(z: &[R]) -> R {
    let scale = cast::<R>(4000.0);
    let sum_sq = z.iter().fold(R::zero(), |acc, &v| acc + v * v);
    let mut product = R::one();
    for (i, &v) in z.iter().enumerate() {
        product *= (v / cast::<R>(((i + 1) as f64).sqrt())).cos();
    }
    (R::one() - product) + sum_sq / scale
}

fn levy<R: Real>(z: &[R]) -> R {
    let one = R::one();
    let pi = cast::<R>(std::f64::consts::PI);
    let quarter = cast::<R>(0.25);
    let w = |v: R| one + v * quarter;
    let d = z.len();
    let w0 = w(z[0]);
    let mut acc = (pi * w0).sin().powi(2);
    for &v in &z[..d - 1] {
        let wi = w(v);
        let s = (pi * wi + one).sin();
        acc += (wi - one) * (wi - one) * (one + cast::<R>(10.0) * s * s);
    }
    let wd = w(z[d - 1]);
    let s = (cast::<R>(2.0) * pi * wd).sin();
    acc += (wd - one) * (wd - one) * (one + s * s);
    acc
}

fn zakharov<R: Real>(z: &[R]) -> R {
    let half = cast::<R>(0.5);
    let sum_sq = z.iter().fold(R::zero(), |acc, &v| acc + v * v);
    let mut weighted = R::zero();
    for (i, &v) in z.iter().enumerate() {
        weighted += half * cast::<R>((i + 1) as f64) * v;
    }
    sum_sq + weighted * weighted + weighted * weighted * weighted * weighted
}

/// Orthonormalizes a seeded Gaussian matrix with two-pass modified
/// Gram-Schmidt over the rows.
pub fn random_rotation<R: Real>(dim: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<R>> {
    let mut rows: Vec<Vec<R>> = (0..dim)
        .map(|_| (0..dim).map(|_| standard_normal::<R>(rng)).collect())
        .collect();
    for k in 0..dim {
        let (done, rest) = rows.split_at_mut(k);
        let row = &mut rest[0];
        for _pass in 0..2 {
            for prev in done.iter() {
                let mut dot = R::zero();
                for (&p, &r) in prev.iter().zip(row.iter()) {
                    dot += p * r;
                }
                for (r, &p) in row.iter_mut().zip(prev.iter()) {
                    *r -= dot * p;
                }
            }
        }
        let norm = row.iter().fold(R::zero(), |acc, &v| acc + v * v).sqrt();
        for r in row.iter_mut() {
            *r /= norm;
        }
    }
    rows
}

/// Box-Muller draw; two uniforms per normal keeps the stream layout simple.
fn standard_normal<R: Real>(rng: &mut ChaCha8Rng) -> R {
    let u1 = R::one() - R::sample_unit(rng);
    let u2 = R::sample_unit(rng);
    let two_pi = cast::<R>(std::f64::consts::TAU);
    (-cast::<R>(2.0) * u1.ln()).sqrt() * (two_pi * u2).cos()
}

/// Largest absolute entry of `M^T M - I`.
pub fn orthogonality_error<R: Real>(m: &[Vec<R>]) -> R {
    let dim = m.len();
    let mut worst = R::zero();
    for i in 0..dim {
        for j in 0..dim {
            let mut dot = R::zero();
            for row in m {
                dot += row[i] * row[j];
            }
            let target = if i == j { R::one() } else { R::zero() };
            let dev = (dot - target).abs();
            if dev > worst {
                worst = dev;
            }
        }
    }
    worst
}

/// Determinant by LU decomposition with partial pivoting.
pub fn determinant<R: Real>(m: &[Vec<R>]) -> R {
    let dim = m.len();
    let mut a: Vec<Vec<R>> = m.to_vec();
    let mut det = R::one();
    for col in 0..dim {
        let pivot = (col..dim)
            .max_by(|&i, &j| {
                a[i][col]
                    .abs()
                    .partial_cmp(&a[j][col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap();
        if a[pivot][col] == R::zero() {
            return R::zero();
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        let (pivot_rows, rest) = a.split_at_mut(col + 1);
        let pivot_row = &pivot_rows[col];
        for row in rest {
            let factor = row[col] / pivot_row[col];
            for (entry, &upper) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *entry -= factor * upper;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plain_problem(function: FunctionId, dim: usize) -> BenchmarkProblem<f64> {
        let (lb, ub) = function.standard_box();
        BenchmarkProblem::from_parts(function, lb, ub, vec![0.0; dim], None).unwrap()
    }

    #[test]
    fn sphere_hand_value() {
        let p = plain_problem(FunctionId::Sphere, 2);
        assert_eq!(evaluate(&p, &[3.0, 4.0]).unwrap(), 25.0);
    }

    #[test]
    fn rastrigin_hand_value() {
        let p = plain_problem(FunctionId::Rastrigin, 2);
        // 2 * (0.25 - 10 cos(pi) + 10) = 40.5
        let v = evaluate(&p, &[0.5, 0.5]).unwrap();
        assert!((v - 40.5).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn rosenbrock_hand_value() {
        let p = plain_problem(FunctionId::Rosenbrock, 2);
        // y = (2, 2): 100 (2 - 4)^2 + (2 - 1)^2 = 401
        assert_eq!(evaluate(&p, &[1.0, 1.0]).unwrap(), 401.0);
    }

    #[test]
    fn zakharov_hand_value() {
        let p = plain_problem(FunctionId::Zakharov, 2);
        // s1 = 2, s2 = 0.5 + 1.0 = 1.5: 2 + 2.25 + 5.0625 = 9.3125
        assert_eq!(evaluate(&p, &[1.0, 1.0]).unwrap(), 9.3125);
    }

    #[test]
    fn schwefel_recovers_classic_value_at_old_origin() {
        let p = plain_problem(FunctionId::Schwefel, 1);
        let v = evaluate(&p, &[-SCHWEFEL_ARGMIN]).unwrap();
        assert!((v - 418.9828872724339).abs() < 1e-9, "got {v}");
    }

    #[test]
    fn every_base_function_is_zero_at_the_shift() {
        for function in FunctionId::ALL {
            for dim in [1, 2, 7] {
                let p = make_problem::<f64>(function, dim, 99, false).unwrap();
                let v = evaluate(&p, p.shift()).unwrap();
                assert!(v.abs() < 1e-12, "{function} dim {dim} optimum value {v:e}");
            }
        }
    }

    #[test]
    fn rotated_problems_keep_the_optimum_at_the_shift() {
        for function in FunctionId::ALL {
            let p = make_problem::<f64>(function, 6, 3, true).unwrap();
            let v = evaluate(&p, p.shift()).unwrap();
            assert!(v.abs() < 1e-12, "{function} rotated optimum {v:e}");
        }
    }

    #[test]
    fn schwefel_rotation_request_falls_back_to_identity() {
        let p = make_problem::<f64>(FunctionId::Schwefel, 4, 1, true).unwrap();
        assert!(p.rotation().is_none());
    }

    #[test]
    fn ackley_is_zero_at_origin() {
        let p = plain_problem(FunctionId::Ackley, 5);
        assert!(evaluate(&p, &[0.0; 5]).unwrap().abs() < 1e-12);
    }

    #[test]
    fn same_seed_reproduces_the_problem() {
        let a = make_problem::<f64>(FunctionId::Levy, 8, 41, true).unwrap();
        let b = make_problem::<f64>(FunctionId::Levy, 8, 41, true).unwrap();
        assert_eq!(a.shift(), b.shift());
        assert_eq!(a.rotation(), b.rotation());
    }

    #[test]
    fn different_seeds_move_the_shift() {
        let a = make_problem::<f64>(FunctionId::Levy, 8, 41, false).unwrap();
        let b = make_problem::<f64>(FunctionId::Levy, 8, 42, false).unwrap();
        assert_ne!(a.shift(), b.shift());
    }

    #[test]
    fn zero_dimension_is_rejected() {
        assert_eq!(
            make_problem::<f64>(FunctionId::Sphere, 0, 1, false).unwrap_err(),
            Error::UnsupportedDimension
        );
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let p = plain_problem(FunctionId::Sphere, 3);
        assert!(matches!(
            evaluate(&p, &[1.0, 2.0]).unwrap_err(),
            Error::DimensionMismatch {
                expected: 3,
                got: 2
            }
        ));
    }

    #[test]
    fn shift_consistency_without_rotation() {
        let p = make_problem::<f64>(FunctionId::Griewank, 5, 17, false).unwrap();
        let unshifted = plain_problem(FunctionId::Griewank, 5);
        let x = [3.0, -2.0, 150.0, 80.0, -41.5];
        let moved: Vec<f64> = x.iter().zip(p.shift()).map(|(xi, si)| xi - si).collect();
        let a = evaluate(&p, &x).unwrap();
        let b = evaluate(&unshifted, &moved).unwrap();
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn rotation_is_orthogonal_with_unit_determinant() {
        for dim in [2, 5, 12, 30] {
            let mut rng = keyed_rng(7, 0, dim as u64, DOMAIN_PROBLEM);
            let rot = random_rotation::<f64>(dim, &mut rng);
            assert!(orthogonality_error(&rot) < 1e-10);
            assert!((determinant(&rot).abs() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn shift_stays_in_the_interior_band() {
        for function in FunctionId::ALL {
            let (lb, ub) = function.standard_box();
            let band = 0.1 * (ub - lb);
            let p = make_problem::<f64>(function, 10, 2024, false).unwrap();
            for &s in p.shift() {
                assert!(s >= lb + band && s <= ub - band);
            }
        }
    }

    #[test]
    fn round_reported_thresholds() {
        assert_eq!(round_reported(9.9e-9, 0.0, REPORT_THRESHOLD), 0.0);
        assert_eq!(round_reported(1.1e-8, 0.0, REPORT_THRESHOLD), 1.1e-8);
        assert_eq!(round_reported(0.0, 0.0, REPORT_THRESHOLD), 0.0);
    }

    #[test]
    fn function_names_round_trip() {
        for function in FunctionId::ALL {
            let name = function.to_string();
            assert_eq!(name.parse::<FunctionId>().unwrap(), function);
        }
    }

    #[test]
    fn base_functions_are_non_negative_in_the_box() {
        let mut rng = keyed_rng(88, 0, 0, DOMAIN_PROBLEM);
        for function in FunctionId::ALL {
            let (lb, ub) = function.standard_box();
            for dim in [2usize, 10] {
                for _ in 0..200 {
                    let z: Vec<f64> = (0..dim)
                        .map(|_| lb + rng.gen::<f64>() * (ub - lb))
                        .collect();
                    let v = base_value(function, &z);
                    assert!(v >= 0.0, "{function} negative at {z:?}: {v}");
                }
            }
        }
    }
}
