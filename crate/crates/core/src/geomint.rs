//! Monte Carlo evaluation of configuration-space integrals: the Gauss
//! linking integral and a four-term integral formula for v₂ of a long
//! knot.
//!
//! Every integrand is a pullback of the unit-area form on the sphere
//! (the solid-angle form divided by 4π) under a direction map, so a
//! degree comes out as an integer. Samples are drawn in fixed-size
//! chunks; chunk `k` of term `j` uses its own ChaCha stream, and chunk
//! results are combined in index order, so the estimate depends only on
//! the seed and the sample count, never on the thread count.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gauss::Shape;
use crate::polyknot::PolyKnot;

type V3 = [f64; 3];

/// Samples per chunk; the unit of parallel work.
pub const CHUNK: u64 = 1 << 14;

/// Configurations closer than this to a coincidence are redrawn.
const COINCIDENCE: f64 = 1e-6;

#[derive(Debug, Error, PartialEq)]
pub enum IntegralError {
    #[error("the two loops come within {0:e} of each other")]
    Intersecting(f64),
    #[error("a loop needs at least three vertices")]
    TooFewVertices,
    #[error("the integral formula needs a long knot")]
    NotLong,
    #[error("at least one sample is needed")]
    NoSamples,
    #[error("corner radius fraction {0} must lie in (0, 1/2)")]
    BadRadius(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
    /// Draws discarded for landing next to a coincidence.
    pub rejected: u64,
}

fn sub(a: V3, b: V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn add(a: V3, b: V3) -> V3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn scale(a: V3, s: f64) -> V3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn dot(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: V3, b: V3) -> V3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn det(a: V3, b: V3, c: V3) -> f64 {
    dot(a, cross(b, c))
}

fn norm(a: V3) -> f64 {
    dot(a, a).sqrt()
}

const ZERO: V3 = [0.0; 3];

/// Pullback of `ω̂(a) ∧ ω̂(b)` evaluated on the four coordinate vectors,
/// where `da[i]`, `db[i]` are the partial derivatives of `a`, `b`.
fn pair_form(a: V3, da: &[V3; 4], b: V3, db: &[V3; 4]) -> Option<f64> {
    let (na, nb) = (norm(a), norm(b));
    if na < COINCIDENCE || nb < COINCIDENCE {
        return None;
    }
    let ka = 1.0 / (4.0 * PI * na * na * na);
    let kb = 1.0 / (4.0 * PI * nb * nb * nb);
    let al = |i: usize, j: usize| det(a, da[i], da[j]) * ka;
    let be = |i: usize, j: usize| det(b, db[i], db[j]) * kb;
    Some(
        al(0, 1) * be(2, 3) - al(0, 2) * be(1, 3) + al(0, 3) * be(1, 2) + al(1, 2) * be(0, 3) - al(1, 3) * be(0, 2)
            + al(2, 3) * be(0, 1),
    )
}

#[derive(Clone, Debug)]
enum Piece {
    Line { start: V3, step: V3 },
    Bezier { p0: V3, p1: V3, p2: V3 },
    /// Ray arriving from infinity at `end`, travelling along `dir`.
    RayIn { end: V3, dir: V3, size: f64 },
    /// Ray leaving `start` along `dir` to infinity.
    RayOut { start: V3, dir: V3, size: f64 },
}

impl Piece {
    fn eval(&self, s: f64) -> (V3, V3) {
        match *self {
            Piece::Line { start, step } => (add(start, scale(step, s)), step),
            Piece::Bezier { p0, p1, p2 } => {
                let t = 1.0 - s;
                let p = add(add(scale(p0, t * t), scale(p1, 2.0 * s * t)), scale(p2, s * s));
                let d = add(scale(sub(p1, p0), 2.0 * t), scale(sub(p2, p1), 2.0 * s));
                (p, d)
            }
            Piece::RayIn { end, dir, size } => {
                let r = size * (1.0 - s) / s;
                (sub(end, scale(dir, r)), scale(dir, size / (s * s)))
            }
            Piece::RayOut { start, dir, size } => {
                let r = size * s / (1.0 - s);
                (add(start, scale(dir, r)), scale(dir, size / ((1.0 - s) * (1.0 - s))))
            }
        }
    }
}

/// A curve parametrised by `(0, 1)`, piece by piece.
#[derive(Clone, Debug)]
struct Path {
    pieces: Vec<Piece>,
    /// Start of each piece's parameter interval, plus a final 1.
    starts: Vec<f64>,
}

impl Path {
    fn new(pieces: Vec<(Piece, f64)>) -> Path {
        let total: f64 = pieces.iter().map(|p| p.1).sum();
        let mut starts = Vec::with_capacity(pieces.len() + 1);
        let mut acc = 0.0;
        for p in &pieces {
            starts.push(acc / total);
            acc += p.1;
        }
        starts.push(1.0);
        Path { pieces: pieces.into_iter().map(|p| p.0).collect(), starts }
    }

    /// Point and velocity at parameter `u`.
    fn at(&self, u: f64) -> (V3, V3) {
        let k = self.starts.partition_point(|&s| s <= u).saturating_sub(1).min(self.pieces.len() - 1);
        let w = self.starts[k + 1] - self.starts[k];
        let s = ((u - self.starts[k]) / w).clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON);
        let (p, d) = self.pieces[k].eval(s);
        (p, scale(d, 1.0 / w))
    }

    fn closed_polygon(vs: &[V3]) -> Path {
        let n = vs.len();
        Path::new(
            (0..n)
                .map(|i| {
                    let step = sub(vs[(i + 1) % n], vs[i]);
                    (Piece::Line { start: vs[i], step }, norm(step))
                })
                .collect(),
        )
    }

    /// Long polygon with its corners replaced by quadratic arcs that cut
    /// `fraction` of the shortest edge from either side, and its two ends
    /// continued to infinity along the axis.
    fn rounded_long(vs: &[V3], fraction: f64) -> Path {
        let n = vs.len();
        let shortest = (0..n - 1).map(|i| norm(sub(vs[i + 1], vs[i]))).fold(f64::INFINITY, f64::min);
        let cut = shortest * fraction;
        let size = vs.iter().map(|v| norm(sub(*v, vs[0]))).fold(0.0, f64::max).max(1.0);
        let mut pieces = vec![(Piece::RayIn { end: vs[0], dir: [0.0, 1.0, 0.0], size }, size)];
        let mut from = vs[0];
        for i in 1..n {
            let dir_in = sub(vs[i], vs[i - 1]);
            let a = if i + 1 < n { sub(vs[i], scale(dir_in, cut / norm(dir_in))) } else { vs[i] };
            let step = sub(a, from);
            pieces.push((Piece::Line { start: from, step }, norm(step)));
            if i + 1 < n {
                let dir_out = sub(vs[i + 1], vs[i]);
                let b = add(vs[i], scale(dir_out, cut / norm(dir_out)));
                pieces.push((Piece::Bezier { p0: a, p1: vs[i], p2: b }, 2.0 * cut));
                from = b;
            }
        }
        pieces.push((Piece::RayOut { start: vs[n - 1], dir: [0.0, 1.0, 0.0], size }, size));
        Path::new(pieces)
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct Tally {
    sum: f64,
    sum_sq: f64,
    count: u64,
    rejected: u64,
}

impl Tally {
    fn merge(self, o: Tally) -> Tally {
        Tally {
            sum: self.sum + o.sum,
            sum_sq: self.sum_sq + o.sum_sq,
            count: self.count + o.count,
            rejected: self.rejected + o.rejected,
        }
    }

    fn mean(&self) -> f64 {
        self.sum / self.count as f64
    }

    /// Variance of the mean.
    fn var_mean(&self) -> f64 {
        let n = self.count as f64;
        if n < 2.0 {
            return 0.0;
        }
        let m = self.mean();
        ((self.sum_sq / n - m * m).max(0.0)) * n / (n - 1.0) / n
    }
}

/// Averages `draw` over `samples` draws in deterministic parallel chunks;
/// `draw` returns `None` for a rejected configuration, which is redrawn.
fn estimate<F>(samples: u64, seed: u64, stream: u64, draw: F) -> Tally
where
    F: Fn(&mut ChaCha8Rng) -> Option<f64> + Sync,
{
    let chunks = samples.div_ceil(CHUNK);
    let parts: Vec<Tally> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream((stream << 40) | k);
            let todo = CHUNK.min(samples - k * CHUNK);
            let mut t = Tally::default();
            while t.count < todo {
                match draw(&mut rng) {
                    Some(v) => {
                        t.sum += v;
                        t.sum_sq += v * v;
                        t.count += 1;
                    }
                    None => {
                        t.rejected += 1;
                        if t.rejected > 1000 * (t.count + 1) {
                            // a degenerate input would otherwise spin forever
                            t.count += 1;
                        }
                    }
                }
            }
            t
        })
        .collect();
    parts.into_iter().fold(Tally::default(), Tally::merge)
}

fn segment_distance(p0: V3, p1: V3, q0: V3, q1: V3) -> f64 {
    let (d1, d2, r) = (sub(p1, p0), sub(q1, q0), sub(p0, q0));
    let (a, e, f) = (dot(d1, d1), dot(d2, d2), dot(d2, r));
    let c = dot(d1, r);
    let b = dot(d1, d2);
    let denom = a * e - b * b;
    let mut s = if denom > 1e-15 { ((b * f - c * e) / denom).clamp(0.0, 1.0) } else { 0.0 };
    let mut t = (b * s + f) / e;
    if t < 0.0 {
        t = 0.0;
        s = (-c / a).clamp(0.0, 1.0);
    } else if t > 1.0 {
        t = 1.0;
        s = ((b - c) / a).clamp(0.0, 1.0);
    }
    norm(sub(add(p0, scale(d1, s)), add(q0, scale(d2, t))))
}

/// Smallest distance between two closed polygons.
pub fn loop_distance(a: &[V3], b: &[V3]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..a.len() {
        for j in 0..b.len() {
            let d = segment_distance(a[i], a[(i + 1) % a.len()], b[j], b[(j + 1) % b.len()]);
            best = best.min(d);
        }
    }
    best
}

/// Linking number from the projection to the xy-plane: the signed count
/// of crossings where `a` passes over `b`.
pub fn linking_number(a: &[V3], b: &[V3]) -> i64 {
    let mut total = 0;
    for i in 0..a.len() {
        let (p0, p1) = (a[i], a[(i + 1) % a.len()]);
        for j in 0..b.len() {
            let (q0, q1) = (b[j], b[(j + 1) % b.len()]);
            let (d1, d2) = (sub(p1, p0), sub(q1, q0));
            let den = d1[0] * d2[1] - d1[1] * d2[0];
            if den == 0.0 {
                continue;
            }
            let r = sub(q0, p0);
            let s = (r[0] * d2[1] - r[1] * d2[0]) / den;
            let t = (r[0] * d1[1] - r[1] * d1[0]) / den;
            if !(0.0..1.0).contains(&s) || !(0.0..1.0).contains(&t) {
                continue;
            }
            let za = p0[2] + s * d1[2];
            let zb = q0[2] + t * d2[2];
            if za > zb {
                // over strand first, under strand second
                total += if den > 0.0 { 1 } else { -1 };
            }
        }
    }
    total
}

/// Gauss linking integral of two disjoint closed polygons.
pub fn linking_mc(a: &[V3], b: &[V3], samples: u64, seed: u64) -> Result<McEstimate, IntegralError> {
    if a.len() < 3 || b.len() < 3 {
        return Err(IntegralError::TooFewVertices);
    }
    if samples == 0 {
        return Err(IntegralError::NoSamples);
    }
    let gap = loop_distance(a, b);
    if gap < COINCIDENCE {
        return Err(IntegralError::Intersecting(gap));
    }
    let (pa, pb) = (Path::closed_polygon(a), Path::closed_polygon(b));
    let t = estimate(samples, seed, 0, |rng| {
        let (x, dx) = pa.at(rng.gen());
        let (y, dy) = pb.at(rng.gen());
        let r = sub(x, y);
        let n = norm(r);
        (n >= COINCIDENCE).then(|| det(r, dx, dy) / (4.0 * PI * n * n * n))
    });
    Ok(McEstimate { value: t.mean(), std_error: t.var_mean().sqrt(), samples, seed, rejected: t.rejected })
}

/// Uniform point of the parameter simplex `0 < t₁ < … < t_k < 1`.
fn simplex<const K: usize, R: Rng>(rng: &mut R) -> [f64; K] {
    let mut t = [0.0f64; K];
    for x in &mut t {
        *x = rng.gen();
    }
    t.sort_by(|a, b| a.total_cmp(b));
    t
}

/// The four terms of the integral, each with its domain volume folded in.
/// The two strata with the free point inside a segment are oriented
/// opposite to the coordinate order `(t₁, t₂, t₃, s)`.
fn terms(path: &Path) -> [Box<dyn Fn(&mut ChaCha8Rng) -> Option<f64> + Sync + '_>; 4] {
    [
        // four ordered points, chords 1→3 and 2→4 crossed
        Box::new(move |rng| {
            let [t1, t2, t3, t4] = simplex::<4, _>(rng);
            let ((x1, d1), (x2, d2), (x3, d3), (x4, d4)) = (path.at(t1), path.at(t2), path.at(t3), path.at(t4));
            let a = sub(x1, x3);
            let b = sub(x4, x2);
            let f = pair_form(a, &[d1, ZERO, scale(d3, -1.0), ZERO], b, &[ZERO, scale(d2, -1.0), ZERO, d4])?;
            Some(f / 24.0)
        }),
        // free point between x₁ and x₂
        Box::new(move |rng| {
            let [t1, t2, t3] = simplex::<3, _>(rng);
            let s: f64 = rng.gen();
            let ((x1, d1), (x2, d2), (x3, d3)) = (path.at(t1), path.at(t2), path.at(t3));
            let a = sub(x1, x2);
            let b = add(sub(x2, x3), scale(a, s));
            let da = [d1, scale(d2, -1.0), ZERO, ZERO];
            let db = [scale(d1, s), scale(d2, 1.0 - s), scale(d3, -1.0), a];
            Some(-pair_form(a, &da, b, &db)? / 6.0)
        }),
        // free point between x₂ and x₃
        Box::new(move |rng| {
            let [t1, t2, t3] = simplex::<3, _>(rng);
            let s: f64 = rng.gen();
            let ((x1, d1), (x2, d2), (x3, d3)) = (path.at(t1), path.at(t2), path.at(t3));
            let a = sub(x2, x3);
            let b = add(sub(x1, x2), scale(a, s));
            let da = [ZERO, d2, scale(d3, -1.0), ZERO];
            let db = [d1, scale(d2, s - 1.0), scale(d3, -s), a];
            Some(-pair_form(a, &da, b, &db)? / 6.0)
        }),
        // free point on the line through x₁ and x₃, outside the segment
        Box::new(move |rng| {
            let [t1, t2, t3] = simplex::<3, _>(rng);
            let u: f64 = rng.gen();
            if u <= 0.0 || u >= 1.0 {
                return None;
            }
            // (1, ∞) by s = 1/(1-u), (-∞, 0) by s = -u/(1-u); each half
            // drawn with probability 1/2
            let jac = 1.0 / ((1.0 - u) * (1.0 - u));
            let s = if rng.gen_bool(0.5) { 1.0 / (1.0 - u) } else { -u / (1.0 - u) };
            let ((x1, d1), (x2, d2), (x3, d3)) = (path.at(t1), path.at(t2), path.at(t3));
            let a = sub(x3, x1);
            let b = add(sub(x1, x2), scale(a, s));
            let da = [scale(d1, -1.0), ZERO, d3, ZERO];
            let db = [scale(d1, 1.0 - s), scale(d2, -1.0), scale(d3, s), a];
            Some(2.0 * jac * pair_form(a, &da, b, &db)? / 6.0)
        }),
    ]
}

/// Options for [`v2_mc_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McOptions {
    /// Corner arcs cut this fraction of the shortest edge off each side.
    pub corner_fraction: f64,
}

impl Default for McOptions {
    fn default() -> Self {
        McOptions { corner_fraction: 0.05 }
    }
}

/// Per-term estimates of the integral formula, before weighting.
pub fn v2_mc_terms(
    knot: &PolyKnot,
    samples: u64,
    seed: u64,
    options: McOptions,
) -> Result<[McEstimate; 4], IntegralError> {
    if knot.shape() != Shape::Long {
        return Err(IntegralError::NotLong);
    }
    if samples == 0 {
        return Err(IntegralError::NoSamples);
    }
    if !(options.corner_fraction > 0.0 && options.corner_fraction < 0.5) {
        return Err(IntegralError::BadRadius(options.corner_fraction));
    }
    let vs: Vec<V3> = knot.vertices().iter().map(|v| v.to_f64()).collect();
    let path = Path::rounded_long(&vs, options.corner_fraction);
    let fs = terms(&path);
    let per = samples.div_ceil(4).max(1);
    let mut out = Vec::with_capacity(4);
    for (j, f) in fs.iter().enumerate() {
        let t = estimate(per, seed, j as u64 + 1, f);
        out.push(McEstimate { value: t.mean(), std_error: t.var_mean().sqrt(), samples: per, seed, rejected: t.rejected });
    }
    Ok(out.try_into().expect("four terms"))
}

/// v₂ of a long polygonal knot from the integral formula: the crossed
/// four-point term plus half of each of the three terms with a point
/// locked on a line through two others.
pub fn v2_mc_with(knot: &PolyKnot, samples: u64, seed: u64, options: McOptions) -> Result<McEstimate, IntegralError> {
    let t = v2_mc_terms(knot, samples, seed, options)?;
    let weights = [1.0, 0.5, 0.5, 0.5];
    let value = t.iter().zip(weights).map(|(e, w)| w * e.value).sum();
    let var: f64 = t.iter().zip(weights).map(|(e, w)| (w * e.std_error).powi(2)).sum();
    Ok(McEstimate {
        value,
        std_error: var.sqrt(),
        samples: t.iter().map(|e| e.samples).sum(),
        seed,
        rejected: t.iter().map(|e| e.rejected).sum(),
    })
}

pub fn v2_mc(knot: &PolyKnot, samples: u64, seed: u64) -> Result<McEstimate, IntegralError> {
    v2_mc_with(knot, samples, seed, McOptions::default())
}

/// Two interlocked squares with linking number 1.
pub fn hopf_link() -> (Vec<V3>, Vec<V3>) {
    let a = vec![[-1.0, -1.0, 0.0], [1.0, -1.0, 0.0], [1.0, 1.0, 0.0], [-1.0, 1.0, 0.0]];
    let b = vec![[0.0, -0.3, 1.0], [2.0, -0.3, 1.0], [2.0, 0.3, -1.0], [0.0, 0.3, -1.0]];
    (a, b)
}

/// Two random closed hexagons in overlapping boxes, at least `0.1` apart.
pub fn random_link<R: Rng>(rng: &mut R) -> (Vec<V3>, Vec<V3>) {
    loop {
        let mut hexagon = |shift: f64| -> Vec<V3> {
            (0..6)
                .map(|_| [rng.gen_range(-1.0..1.0) + shift, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)])
                .collect()
        };
        let a = hexagon(-0.3);
        let b = hexagon(0.3);
        if loop_distance(&a, &b) > 0.1 {
            return (a, b);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyknot::PolyKnot;

    #[test]
    fn hopf_link_is_linked_once() {
        let (a, b) = hopf_link();
        assert_eq!(linking_number(&a, &b), 1);
        assert_eq!(linking_number(&b, &a), 1);
    }

    #[test]
    fn segment_distances() {
        let d = segment_distance([0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.5, -1.0, 2.0], [0.5, 1.0, 2.0]);
        assert!((d - 2.0).abs() < 1e-12);
        let d = segment_distance([0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [2.0, 0.0, 0.0], [3.0, 0.0, 0.0]);
        assert!((d - 1.0).abs() < 1e-12);
    }

    #[test]
    fn path_is_continuous() {
        let vs = [[0.0, 0.0, 0.0], [1.0, 1.0, 0.5], [-1.0, 2.0, -0.5], [0.0, 3.0, 0.0]];
        let p = Path::rounded_long(&vs, 0.1);
        for w in p.starts.windows(2).skip(1).take(p.pieces.len() - 2) {
            let (a, _) = p.at(w[0] - 1e-9);
            let (b, _) = p.at(w[0] + 1e-9);
            assert!(norm(sub(a, b)) < 1e-6);
        }
        // numerical derivative matches the returned velocity
        for u in [0.2, 0.37, 0.5, 0.61, 0.8] {
            let h = 1e-6;
            let (a, _) = p.at(u - h);
            let (b, _) = p.at(u + h);
            let (_, d) = p.at(u);
            let num = scale(sub(b, a), 0.5 / h);
            assert!(norm(sub(num, d)) < 1e-3 * norm(d).max(1.0), "{u}: {num:?} vs {d:?}");
        }
    }

    #[test]
    fn same_seed_same_estimate() {
        let (a, b) = hopf_link();
        let x = linking_mc(&a, &b, 3 * CHUNK + 5, 9).unwrap();
        let y = linking_mc(&a, &b, 3 * CHUNK + 5, 9).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn same_estimate_on_any_thread_count() {
        let (a, b) = hopf_link();
        let run = |threads| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| linking_mc(&a, &b, 20 * CHUNK, 4).unwrap())
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn hopf_integral_is_one() {
        let (a, b) = hopf_link();
        let e = linking_mc(&a, &b, 1_000_000, 1).unwrap();
        assert!((e.value - 1.0).abs() < 3.0 * e.std_error, "{e:?}");
    }

    #[test]
    fn reversal_negates_and_distance_unlinks() {
        let (a, mut b) = hopf_link();
        let fwd = linking_mc(&a, &b, 200_000, 2).unwrap();
        b.reverse();
        let back = linking_mc(&a, &b, 200_000, 2).unwrap();
        assert!((fwd.value + back.value).abs() < 3.0 * (fwd.std_error + back.std_error));
        assert_eq!(linking_number(&a, &b), -1);
        for v in &mut b {
            v[0] += 10.0;
        }
        let far = linking_mc(&a, &b, 200_000, 2).unwrap();
        assert!(far.value.abs() < 0.02, "{far:?}");
    }

    #[test]
    fn random_links_match_crossing_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let (a, b) = random_link(&mut rng);
            let lk = linking_number(&a, &b);
            assert_eq!(lk, linking_number(&b, &a));
            let e = linking_mc(&a, &b, 1_000_000, 5).unwrap();
            assert!((e.value - lk as f64).abs() < 3.0 * e.std_error + 1e-3, "{lk} {e:?}");
        }
    }

    #[test]
    fn straight_line_is_zero() {
        let e = v2_mc(&PolyKnot::straight(), 100_000, 1).unwrap();
        assert!(e.value.abs() < 1e-9, "{e:?}");
    }

    #[test]
    fn closed_knots_are_refused() {
        let k = crate::fixtures::round_circle(8);
        assert_eq!(v2_mc(&k, 10, 0), Err(IntegralError::NotLong));
        let opts = McOptions { corner_fraction: 0.7 };
        assert_eq!(v2_mc_with(&PolyKnot::straight(), 10, 0, opts), Err(IntegralError::BadRadius(0.7)));
    }

    #[test]
    fn touching_loops_are_rejected() {
        let a = vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]];
        let b = vec![[0.5, 0.0, 0.0], [0.5, -1.0, 1.0], [0.5, -1.0, -1.0]];
        assert!(matches!(linking_mc(&a, &b, 10, 0), Err(IntegralError::Intersecting(_))));
    }
}
