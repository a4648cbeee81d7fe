//! Monte-Carlo estimation of graph weights.
//!
//! For a graph with `n` aerial vertices, two boundary vertices and `2n`
//! edges, the weight is
//!
//! `w_Γ = (2π)^{-2n} ∫_{C⁺} ∧_e dφ_e`,
//!
//! where the boundary points are pinned at `0` and `c` (default `c = 1`),
//! which uses up the scaling and translation symmetry. The top form is the
//! determinant of the Jacobian of the edge angles with respect to the
//! aerial coordinates `(a_1, b_1, …, a_n, b_n)`, rows in edge order.

mod sampler;
mod table;

pub use sampler::Sampler;
pub use table::{WeightEntry, WeightTable};

use std::f64::consts::PI;

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{Graph, GraphId, Vertex};
use crate::polyalg::Rational;

/// A point of the closed upper half-plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub re: f64,
    pub im: f64,
}

impl Point {
    pub fn new(re: f64, im: f64) -> Self {
        Point { re, im }
    }

    pub fn real(re: f64) -> Self {
        Point { re, im: 0.0 }
    }
}

/// A point `a + ib` with `b > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UpperHalfPoint(Point);

impl UpperHalfPoint {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(b > 0.0) || !a.is_finite() || !b.is_finite() {
            return Err(Error::Unsupported(format!("{a} + {b}i is not in the open upper half-plane")));
        }
        Ok(UpperHalfPoint(Point::new(a, b)))
    }

    pub fn point(self) -> Point {
        self.0
    }
}

impl From<UpperHalfPoint> for Point {
    fn from(p: UpperHalfPoint) -> Point {
        p.0
    }
}

/// The hyperbolic angle `φ(z, w) = arg((w − z) / (w − z̄))` in `[0, 2π)`.
///
/// Points on the real line are allowed; for a boundary `z` the angle is
/// identically zero.
pub fn angle(z: Point, w: Point) -> Result<f64> {
    if z.im < 0.0 || w.im < 0.0 {
        return Err(Error::Unsupported("points must lie in the closed upper half-plane".into()));
    }
    if z == w {
        return Err(Error::CoincidentPoints);
    }
    let a = (w.im - z.im).atan2(w.re - z.re);
    let b = (w.im + z.im).atan2(w.re - z.re);
    Ok((a - b).rem_euclid(2.0 * PI))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightEstimate {
    pub graph: GraphId,
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    pub sampler: Sampler,
    /// Position of the second boundary point; the first sits at 0.
    pub pin: f64,
    pub batch_size: u64,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            samples: 1_000_000,
            seed: 0,
            sampler: Sampler::Importance,
            pin: 1.0,
            batch_size: 8192,
        }
    }
}

/// Mean and standard error of a raw integral estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
}

/// Weight estimate with the default sampler and pinning.
pub fn weight_mc(g: &Graph, samples: u64, seed: u64) -> Result<WeightEstimate> {
    weight_mc_with(
        g,
        &McConfig {
            samples,
            seed,
            ..McConfig::default()
        },
    )
}

pub fn weight_mc_with(g: &Graph, cfg: &McConfig) -> Result<WeightEstimate> {
    let id = g.id()?;
    let raw = form_integral(g, cfg)?;
    let norm = (2.0 * PI).powi(2 * g.n() as i32);
    Ok(WeightEstimate {
        graph: id,
        mean: raw.mean / norm,
        stderr: raw.stderr / norm,
        samples: raw.samples,
        seed: cfg.seed,
    })
}

/// Estimate of `∫ ∧_e dφ_e` over configurations with the boundary points
/// pinned at `0` and `cfg.pin`, oriented by `sign(pin)`.
///
/// A graph whose edge count differs from `2n + n̄ − 2` has weight exactly 0.
pub fn form_integral(g: &Graph, cfg: &McConfig) -> Result<Estimate> {
    if !g.is_admissible() {
        return Err(Error::NotAdmissible);
    }
    if g.nbar() != 2 {
        return Err(Error::Unsupported(format!(
            "weights are only computed for two boundary vertices, got {}",
            g.nbar()
        )));
    }
    if cfg.pin == 0.0 || !cfg.pin.is_finite() {
        return Err(Error::CoincidentPoints);
    }
    if Some(g.edge_count()) != g.expected_edge_count() {
        return Ok(Estimate {
            mean: 0.0,
            stderr: 0.0,
            samples: 0,
        });
    }
    if g.n() == 0 {
        // integral of the constant 0-form over a point
        return Ok(Estimate {
            mean: 1.0,
            stderr: 0.0,
            samples: 0,
        });
    }
    if cfg.samples < 2 {
        return Err(Error::Unsupported("need at least two samples".into()));
    }
    let orientation = cfg.pin.signum();
    let boundary = [0.0, cfg.pin];
    let batch = cfg.batch_size.max(1);
    let nbatches = cfg.samples.div_ceil(batch);
    let ctx = sampler::Context::new(g, boundary, cfg.sampler);
    let stats: Vec<Stats> = (0..nbatches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(b);
            let count = batch.min(cfg.samples - b * batch);
            let mut st = Stats::default();
            let mut scratch = ctx.scratch();
            for _ in 0..count {
                st.push(ctx.sample(&mut rng, &mut scratch));
            }
            st
        })
        .collect();
    let total = tree_combine(stats);
    Ok(Estimate {
        mean: orientation * total.mean,
        stderr: total.stderr(),
        samples: total.count,
    })
}

/// The top form at one configuration: `det(∂φ_e / ∂(a_k, b_k))`.
pub fn form_density(g: &Graph, aerial: &[Point], boundary: [f64; 2]) -> f64 {
    let n = g.n();
    let m = 2 * n;
    let mut jac = vec![0.0; m * m];
    for (row, (v, t)) in g.edges().enumerate() {
        let z = aerial[v];
        let w = match t {
            Vertex::Aerial(k) => aerial[k],
            Vertex::Boundary(k) => Point::real(boundary[k]),
        };
        let Some((dz, dw)) = angle_gradient(z, w) else {
            return 0.0;
        };
        jac[row * m + 2 * v] += dz[0];
        jac[row * m + 2 * v + 1] += dz[1];
        if let Vertex::Aerial(k) = t {
            jac[row * m + 2 * k] += dw[0];
            jac[row * m + 2 * k + 1] += dw[1];
        }
    }
    determinant(&mut jac, m)
}

/// Gradients of `φ(z, w)` with respect to `(Re z, Im z)` and `(Re w, Im w)`.
fn angle_gradient(z: Point, w: Point) -> Option<([f64; 2], [f64; 2])> {
    let (ux, uy) = (w.re - z.re, w.im - z.im);
    let (vx, vy) = (w.re - z.re, w.im + z.im);
    let nu = ux * ux + uy * uy;
    let nv = vx * vx + vy * vy;
    if nu == 0.0 || nv == 0.0 {
        return None;
    }
    let dw = [-uy / nu + vy / nv, ux / nu - vx / nv];
    let dz = [uy / nu - vy / nv, -ux / nu - vx / nv];
    Some((dz, dw))
}

/// Determinant by Gaussian elimination with partial pivoting (destroys `a`).
fn determinant(a: &mut [f64], m: usize) -> f64 {
    let mut det = 1.0;
    for c in 0..m {
        let p = (c..m)
            .max_by(|&i, &j| a[i * m + c].abs().total_cmp(&a[j * m + c].abs()))
            .unwrap_or(c);
        if a[p * m + c] == 0.0 {
            return 0.0;
        }
        if p != c {
            for k in 0..m {
                a.swap(p * m + k, c * m + k);
            }
            det = -det;
        }
        let piv = a[c * m + c];
        det *= piv;
        for r in c + 1..m {
            let f = a[r * m + c] / piv;
            if f != 0.0 {
                for k in c..m {
                    a[r * m + k] -= f * a[c * m + k];
                }
            }
        }
    }
    det
}

/// Running count, mean and sum of squared deviations.
#[derive(Clone, Copy, Debug, Default)]
struct Stats {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Stats {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(a: Stats, b: Stats) -> Stats {
        if a.count == 0 {
            return b;
        }
        if b.count == 0 {
            return a;
        }
        let n = a.count + b.count;
        let d = b.mean - a.mean;
        let (na, nb, nf) = (a.count as f64, b.count as f64, n as f64);
        Stats {
            count: n,
            mean: a.mean + d * nb / nf,
            m2: a.m2 + b.m2 + d * d * na * nb / nf,
        }
    }

    fn stderr(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        let n = self.count as f64;
        (self.m2 / (n - 1.0) / n).sqrt()
    }
}

/// Pairwise reduction in a fixed shape, independent of how the batches
/// were scheduled.
fn tree_combine(mut v: Vec<Stats>) -> Stats {
    if v.is_empty() {
        return Stats::default();
    }
    while v.len() > 1 {
        v = v
            .chunks(2)
            .map(|c| if c.len() == 2 { Stats::merge(c[0], c[1]) } else { c[0] })
            .collect();
    }
    v[0]
}

/// The unique `p/q` with `q ≤ max_denominator` within `3·stderr` of the
/// mean, if there is exactly one. With zero stderr only an exact match counts.
pub fn snap(est: &WeightEstimate, max_denominator: u64) -> Option<Rational> {
    snap_value(est.mean, est.stderr, max_denominator)
}

pub fn snap_value(mean: f64, stderr: f64, max_denominator: u64) -> Option<Rational> {
    if !mean.is_finite() || !stderr.is_finite() || stderr < 0.0 || max_denominator == 0 {
        return None;
    }
    let lo = mean - 3.0 * stderr;
    let hi = mean + 3.0 * stderr;
    let mut found: Option<Rational> = None;
    for q in 1..=max_denominator {
        let qf = q as f64;
        let pmin = (lo * qf).ceil() as i64;
        let pmax = (hi * qf).floor() as i64;
        for p in pmin..=pmax {
            let r = Rational::new(BigInt::from(p), BigInt::from(q));
            if stderr == 0.0 && p as f64 / qf != mean {
                continue;
            }
            match &found {
                None => found = Some(r),
                Some(f) if *f == r => {}
                Some(_) => return None,
            }
        }
    }
    found
}
