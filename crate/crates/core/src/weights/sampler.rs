use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{form_density, Point};
use crate::graphs::Graph;

/// How aerial configurations are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sampler {
    /// Each aerial point is the image of a uniform point of the unit disk
    /// under `w ↦ i(1 + w)/(1 − w)`.
    UniformDisk,
    /// Points are drawn one after another from a mixture of heavy-tailed
    /// polar densities centred on the boundary points and on the aerial
    /// points already placed, in a uniformly random order. This follows the
    /// singularities of the angle form where points collide.
    Importance,
}

pub(super) struct Context {
    graph: Graph,
    boundary: [f64; 2],
    sampler: Sampler,
    orders: Vec<Vec<usize>>,
}

pub(super) struct Scratch {
    points: Vec<Point>,
}

#[derive(Clone, Copy)]
enum Component {
    /// Half-disk polar density around a boundary point.
    Boundary { center: f64, scale: f64 },
    /// Full polar density around an aerial point.
    Aerial { center: Point, scale: f64 },
}

impl Component {
    fn draw(self, rng: &mut ChaCha8Rng) -> Point {
        let u: f64 = rng.random();
        let v: f64 = rng.random();
        match self {
            Component::Boundary { center, scale } => {
                let r = scale * u / (1.0 - u);
                let t = PI * v;
                Point::new(center + r * t.cos(), r * t.sin())
            }
            Component::Aerial { center, scale } => {
                let r = scale * u / (1.0 - u);
                let t = 2.0 * PI * v;
                Point::new(center.re + r * t.cos(), center.im + r * t.sin())
            }
        }
    }

    /// Density with respect to area at `z`.
    fn density(self, z: Point) -> f64 {
        match self {
            Component::Boundary { center, scale } => {
                if z.im <= 0.0 {
                    return 0.0;
                }
                let r = (z.re - center).hypot(z.im);
                scale / ((r + scale) * (r + scale) * PI * r)
            }
            Component::Aerial { center, scale } => {
                let r = (z.re - center.re).hypot(z.im - center.im);
                scale / ((r + scale) * (r + scale) * 2.0 * PI * r)
            }
        }
    }
}

impl Context {
    pub(super) fn new(g: &Graph, boundary: [f64; 2], sampler: Sampler) -> Self {
        Context {
            graph: g.clone(),
            boundary,
            sampler,
            orders: permutations(g.n()),
        }
    }

    pub(super) fn scratch(&self) -> Scratch {
        Scratch {
            points: vec![Point::new(0.0, 1.0); self.graph.n()],
        }
    }

    /// One sample of `form / density`.
    pub(super) fn sample(&self, rng: &mut ChaCha8Rng, s: &mut Scratch) -> f64 {
        match self.sampler {
            Sampler::UniformDisk => self.sample_disk(rng, s),
            Sampler::Importance => self.sample_importance(rng, s),
        }
    }

    fn sample_disk(&self, rng: &mut ChaCha8Rng, s: &mut Scratch) -> f64 {
        let mut inv_density = 1.0;
        for p in s.points.iter_mut() {
            // uniform point of the unit disk by rejection
            let (x, y) = loop {
                let x: f64 = 2.0 * rng.random::<f64>() - 1.0;
                let y: f64 = 2.0 * rng.random::<f64>() - 1.0;
                if x * x + y * y < 1.0 {
                    break (x, y);
                }
            };
            // z = i(1 + w)/(1 − w), |dz/dw|² = 4/|1 − w|⁴
            let (dx, dy) = (1.0 - x, -y);
            let n = dx * dx + dy * dy;
            let (nx, ny) = (1.0 + x, y);
            // (1 + w)/(1 − w)
            let qx = (nx * dx + ny * dy) / n;
            let qy = (ny * dx - nx * dy) / n;
            *p = Point::new(-qy, qx);
            inv_density *= PI * 4.0 / (n * n);
        }
        if s.points.iter().any(|p| !(p.im > 0.0) || !p.re.is_finite()) {
            return 0.0;
        }
        form_density(&self.graph, &s.points, self.boundary) * inv_density
    }

    fn components(&self, placed: &[Point], out: &mut Vec<Component>) {
        out.clear();
        for &c in &self.boundary {
            out.push(Component::Boundary { center: c, scale: 1.0 });
            for z in placed {
                let d = (z.re - c).hypot(z.im);
                out.push(Component::Boundary { center: c, scale: d });
            }
        }
        for &z in placed {
            out.push(Component::Aerial { center: z, scale: z.im });
        }
    }

    fn sample_importance(&self, rng: &mut ChaCha8Rng, s: &mut Scratch) -> f64 {
        let n = self.graph.n();
        let order = &self.orders[rng.random_range(0..self.orders.len())];
        let mut comps = Vec::new();
        let mut placed: Vec<Point> = Vec::with_capacity(n);
        for &v in order {
            self.components(&placed, &mut comps);
            let c = comps[rng.random_range(0..comps.len())];
            let z = c.draw(rng);
            s.points[v] = z;
            placed.push(z);
        }
        if s.points.iter().any(|p| !(p.im > 0.0) || !p.re.is_finite()) {
            return 0.0;
        }
        let f = form_density(&self.graph, &s.points, self.boundary);
        if f == 0.0 {
            return 0.0;
        }
        // the density averages over every placement order
        let mut total = 0.0;
        for ord in &self.orders {
            let mut dens = 1.0;
            placed.clear();
            for &v in ord {
                self.components(&placed, &mut comps);
                let z = s.points[v];
                let q: f64 = comps.iter().map(|c| c.density(z)).sum::<f64>() / comps.len() as f64;
                dens *= q;
                placed.push(z);
            }
            total += dens;
        }
        let density = total / self.orders.len() as f64;
        if density <= 0.0 || !density.is_finite() {
            return 0.0;
        }
        f / density
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}
