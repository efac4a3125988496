use rand::RngExt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{chunk_rng, chunks};
use crate::el::{OrthantFunction, Side};
use crate::error::{Error, Result};
use crate::point::Point;
use crate::surface::SSurface;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    /// `f(0) = 0`.
    Pointed,
    /// `x <= y` implies `f(x) <= f(y)`.
    Monotone,
    /// `f(x) + f(y) >= f(min(x, y)) + f(max(x, y))`.
    Submodular,
    /// Diminishing returns for `x <= y` differing in one coordinate.
    DiminishingReturnsAxis,
    /// Diminishing returns for arbitrary `x <= y`.
    DiminishingReturns,
    /// Concavity along positive directions.
    DirectionalConcavity,
    /// Partials are non-negative and `left >= right`.
    DerivativeSigns,
    /// `x <= y` implies `f_i^+(x) >= f_i^+(y)`.
    DerivativeMonotone,
    /// `f_i^+(x + eps e_i) -> f_i^+(x)` and `f_i^+(x - eps e_i) -> f_i^-(x)`,
    /// monotonically, over a geometric sequence of `eps`.
    LemmaLimits,
}

impl Property {
    pub const ALL: [Property; 9] = [
        Property::Pointed,
        Property::Monotone,
        Property::Submodular,
        Property::DiminishingReturnsAxis,
        Property::DiminishingReturns,
        Property::DirectionalConcavity,
        Property::DerivativeSigns,
        Property::DerivativeMonotone,
        Property::LemmaLimits,
    ];

    fn index(self) -> usize {
        Property::ALL.iter().position(|p| *p == self).unwrap()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub points: Vec<Vec<f64>>,
    pub axis: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyVerdict {
    pub property: Property,
    pub passed: bool,
    /// Largest observed violation, clamped at 0.
    pub worst_violation: f64,
    pub tolerance: f64,
    /// Points realizing the worst violation; present only on failure.
    pub witness: Option<Witness>,
    pub checks: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElReport {
    pub verdicts: Vec<PropertyVerdict>,
    pub samples: usize,
    pub seed: u64,
    pub passed: bool,
}

impl ElReport {
    pub fn verdict(&self, p: Property) -> &PropertyVerdict {
        &self.verdicts[p.index()]
    }

    pub fn failures(&self) -> impl Iterator<Item = &PropertyVerdict> {
        self.verdicts.iter().filter(|v| !v.passed)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteOptions {
    pub samples: usize,
    pub seed: u64,
    /// Absolute tolerance on function values and exact partials.
    pub tol: f64,
    /// Tolerance of the derivative-limit checks: on monotonicity, and on the
    /// final gap to the limit relative to `max(1, |limit|, first gap)`.
    pub lemma_tol: f64,
    /// Decreasing step sequence of the derivative-limit checks.
    pub lemma_eps: Vec<f64>,
    /// Relative margin kept from the boundary of the surface.
    pub margin: f64,
    /// Tolerance on the jump condition.
    pub jump_tol: f64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            samples: 10_000,
            seed: 0,
            tol: 1e-7,
            lemma_tol: 1e-6,
            lemma_eps: (2..=8).map(|k| 10f64.powi(-k)).collect(),
            margin: 1e-4,
            jump_tol: 1e-6,
        }
    }
}

#[derive(Clone)]
struct Worst {
    v: f64,
    witness: Option<Witness>,
    checks: usize,
}

impl Worst {
    fn new() -> Self {
        Worst {
            v: f64::NEG_INFINITY,
            witness: None,
            checks: 0,
        }
    }

    fn see(&mut self, v: f64, points: impl FnOnce() -> Vec<Vec<f64>>, axis: Option<usize>) {
        self.checks += 1;
        // NaN counts as a violation
        let v = if v.is_nan() { f64::INFINITY } else { v };
        if v > self.v {
            self.v = v;
            self.witness = Some(Witness { points: points(), axis });
        }
    }

    fn merge(&mut self, other: Worst) {
        self.checks += other.checks;
        if other.v > self.v {
            self.v = other.v;
            self.witness = other.witness;
        }
    }
}

fn random_point<R: rand::Rng + ?Sized>(rng: &mut R, lo: f64, bbox: &[f64]) -> Vec<f64> {
    bbox.iter().map(|b| lo.min(*b) + (b - lo.min(*b)) * rng.random::<f64>()).collect()
}

fn shifted(x: &[f64], i: usize, by: f64) -> Vec<f64> {
    let mut p = x.to_vec();
    p[i] += by;
    p
}

/// Property suite with default options and the given budget and seed.
pub fn check_el(f: &dyn OrthantFunction, bbox: &Point, samples: usize, seed: u64) -> Result<ElReport> {
    check_el_with(
        f,
        bbox,
        &SuiteOptions {
            samples,
            seed,
            ..SuiteOptions::default()
        },
    )
}

/// Runs every [`Property`] on seeded samples from `[0, bbox]`.
pub fn check_el_with(f: &dyn OrthantFunction, bbox: &Point, opts: &SuiteOptions) -> Result<ElReport> {
    let n = f.dim();
    if bbox.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: bbox.dim(),
        });
    }
    if bbox.iter().any(|b| *b <= 0.0) {
        return Err(Error::Malformed("sampling box must be strictly positive".into()));
    }
    let bbox = bbox.coords();
    let np = Property::ALL.len();

    let mut worst = vec![Worst::new(); np];
    let origin = vec![0.0; n];
    worst[Property::Pointed.index()].see(f.value(&origin).abs(), || vec![origin.clone()], None);

    let pair_parts: Vec<Vec<Worst>> = chunks(opts.samples)
        .into_par_iter()
        .map(|(k, count)| pair_chunk(f, bbox, opts.seed, k, count))
        .collect();
    let lemma_points = (opts.samples / 10).clamp(1, 1000);
    let lemma_parts: Vec<Worst> = chunks(lemma_points)
        .into_par_iter()
        .map(|(k, count)| lemma_chunk(f, bbox, opts, k, count))
        .collect();
    for part in pair_parts {
        for (w, p) in worst.iter_mut().zip(part) {
            w.merge(p);
        }
    }
    for part in lemma_parts {
        worst[Property::LemmaLimits.index()].merge(part);
    }

    let verdicts: Vec<PropertyVerdict> = Property::ALL
        .iter()
        .zip(worst)
        .map(|(&property, w)| {
            let tolerance = if property == Property::LemmaLimits {
                opts.lemma_tol
            } else {
                opts.tol
            };
            let passed = w.v <= tolerance;
            PropertyVerdict {
                property,
                passed,
                worst_violation: w.v.max(0.0),
                tolerance,
                witness: if passed { None } else { w.witness },
                checks: w.checks,
            }
        })
        .collect();
    Ok(ElReport {
        passed: verdicts.iter().all(|v| v.passed),
        verdicts,
        samples: opts.samples,
        seed: opts.seed,
    })
}

fn pair_chunk(f: &dyn OrthantFunction, bbox: &[f64], seed: u64, chunk: usize, count: usize) -> Vec<Worst> {
    let n = f.dim();
    let mut rng = chunk_rng(seed, chunk);
    let mut worst = vec![Worst::new(); Property::ALL.len()];
    let idx = |p: Property| p.index();
    for _ in 0..count {
        let x = random_point(&mut rng, 0.0, bbox);
        let y = random_point(&mut rng, 0.0, bbox);
        let u = random_point(&mut rng, 0.0, &vec![1.0; n]);
        // z >= x inside the box
        let z: Vec<f64> = x.iter().zip(bbox).zip(&u).map(|((x, b), u)| x + u * (b - x)).collect();
        let i = rng.random_range(0..n);
        let eps = bbox[i] * (1.0 - rng.random::<f64>());
        let lam = bbox[i] * (1.0 - rng.random::<f64>());
        let mix = rng.random::<f64>();

        let (fx, fy, fz) = (f.value(&x), f.value(&y), f.value(&z));

        let lo: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a.min(*b)).collect();
        let hi: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a.max(*b)).collect();
        let v = f.value(&lo) + f.value(&hi) - fx - fy;
        worst[idx(Property::Submodular)].see(v, || vec![x.clone(), y.clone()], None);

        worst[idx(Property::Monotone)].see(fx - fz, || vec![x.clone(), z.clone()], None);

        let gain_x = f.value(&shifted(&x, i, eps)) - fx;
        let gain_z = f.value(&shifted(&z, i, eps)) - fz;
        worst[idx(Property::DiminishingReturns)].see(gain_z - gain_x, || vec![x.clone(), z.clone()], Some(i));

        let w = shifted(&x, i, lam);
        let gain_w = f.value(&shifted(&w, i, eps)) - f.value(&w);
        worst[idx(Property::DiminishingReturnsAxis)].see(gain_w - gain_x, || vec![x.clone(), w.clone()], Some(i));

        let m: Vec<f64> = x.iter().zip(&z).map(|(a, b)| mix * a + (1.0 - mix) * b).collect();
        let v = mix * fx + (1.0 - mix) * fz - f.value(&m);
        worst[idx(Property::DirectionalConcavity)].see(v, || vec![x.clone(), z.clone(), m.clone()], None);

        let gx = f.one_sided(&x);
        let gz = f.one_sided(&z);
        for d in 0..n {
            let mut v = -gx.right[d];
            if let Some(l) = gx.left[d] {
                v = v.max(-l).max(gx.right[d] - l);
            }
            worst[idx(Property::DerivativeSigns)].see(v, || vec![x.clone()], Some(d));
            worst[idx(Property::DerivativeMonotone)].see(gz.right[d] - gx.right[d], || vec![x.clone(), z.clone()], Some(d));
        }
    }
    worst
}

/// Distance to the limit at the smallest step, relative to the larger of 1,
/// the limit itself and the distance at the largest step. A smooth partial
/// with curvature `K` leaves a gap of about `K eps`; a missing limit leaves
/// the gap from not shrinking.
fn convergence_gap(seq: &[f64], target: f64) -> f64 {
    match (seq.first(), seq.last()) {
        (Some(first), Some(last)) => {
            (last - target).abs() / (first - target).abs().max(target.abs()).max(1.0)
        }
        _ => 0.0,
    }
}

fn lemma_chunk(f: &dyn OrthantFunction, bbox: &[f64], opts: &SuiteOptions, chunk: usize, count: usize) -> Worst {
    let n = f.dim();
    // distinct stream family from the pair sampler
    let mut rng = chunk_rng(opts.seed ^ 0x4c45_4d4d_4131, chunk);
    let mut worst = Worst::new();
    let eps_max = opts.lemma_eps.first().copied().unwrap_or(0.0);
    for _ in 0..count {
        let x = random_point(&mut rng, 2.0 * eps_max, bbox);
        for d in 0..n {
            let target = f.partial(&x, d, Side::Right);
            let above: Vec<f64> = opts
                .lemma_eps
                .iter()
                .map(|e| f.partial(&shifted(&x, d, *e), d, Side::Right))
                .collect();
            // from above: non-decreasing as eps shrinks
            let mut v = above.windows(2).map(|w| w[0] - w[1]).fold(f64::NEG_INFINITY, f64::max);
            v = v.max(convergence_gap(&above, target));
            if x[d] > eps_max {
                let target = f.partial(&x, d, Side::Left);
                let below: Vec<f64> = opts
                    .lemma_eps
                    .iter()
                    .map(|e| f.partial(&shifted(&x, d, -e), d, Side::Right))
                    .collect();
                // from below: non-increasing as eps shrinks
                v = v.max(below.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max));
                v = v.max(convergence_gap(&below, target));
            }
            worst.see(v, || vec![x.clone()], Some(d));
        }
    }
    worst
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    /// Minimum of `f_i^-(x) - f_i^+(x)` over sampled inner surface points
    /// and all coordinates.
    pub min_jump: f64,
    pub witness_point: Vec<f64>,
    pub witness_axis: usize,
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub feasible: bool,
}

pub fn check_feasible(f: &dyn OrthantFunction, surface: &SSurface, samples: usize, seed: u64) -> Result<FeasibilityReport> {
    check_feasible_with(
        f,
        surface,
        &SuiteOptions {
            samples,
            seed,
            ..SuiteOptions::default()
        },
    )
}

/// Minimum derivative jump over seeded inner points of `surface`.
pub fn check_feasible_with(f: &dyn OrthantFunction, surface: &SSurface, opts: &SuiteOptions) -> Result<FeasibilityReport> {
    let n = f.dim();
    if surface.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: surface.dim(),
            got: n,
        });
    }
    let jumps = |x: &[f64]| -> (f64, usize) {
        (0..n)
            .map(|d| (f.partial(x, d, Side::Left) - f.partial(x, d, Side::Right), d))
            .fold((f64::INFINITY, 0), |a, b| if b.0 < a.0 { b } else { a })
    };
    let parts: Vec<(f64, Vec<f64>, usize)> = chunks(opts.samples)
        .into_par_iter()
        .map(|(k, count)| {
            let mut rng = chunk_rng(opts.seed, k);
            let mut best = (f64::INFINITY, Vec::new(), 0);
            for _ in 0..count {
                let x = surface.sample_inner(&mut rng, opts.margin);
                let (j, d) = jumps(&x);
                if j < best.0 || j.is_nan() {
                    best = (j, x, d);
                }
            }
            best
        })
        .collect();
    let mut best = (f64::INFINITY, Vec::new(), 0);
    if let SSurface::Curve(c) = surface {
        if let Some(t) = c.t_point() {
            let x = vec![t.t_x, c.alpha(t.t_x)];
            let (j, d) = jumps(&x);
            best = (j, x, d);
        }
    }
    for p in parts {
        if p.0 < best.0 || p.0.is_nan() {
            best = p;
        }
    }
    let (min_jump, witness_point, witness_axis) = best;
    Ok(FeasibilityReport {
        feasible: min_jump >= 1.0 - opts.jump_tol,
        min_jump,
        witness_point,
        witness_axis,
        samples: opts.samples,
        seed: opts.seed,
        tolerance: opts.jump_tol,
    })
}
