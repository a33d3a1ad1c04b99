//! Plane curves and the formulas for v₂ read off a projection with a height
//! function: counts of maxima and same-direction double points, plus signed
//! sums of indices of double and extremal points.
//!
//! The index of a point with respect to an oriented chain is the signed
//! number of times the chain crosses the open horizontal ray from the point
//! to the right, upward crossings counting `+1`.

use std::collections::HashSet;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gauss::{End, Endpoint, GaussDiagram, Shape, Sign};
use crate::pairing::{bracket, bracket_sum, ArrowPattern, PatternSum};
use crate::polyknot::{int, rat, PolyKnot, Rat, P2, P3};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenericityError {
    #[error("vertices {0} and {1} are at the same height")]
    EqualHeights(usize, usize),
    #[error("edges {0} and {1} overlap")]
    Overlap(usize, usize),
    #[error("the curve turns back on itself at vertex {0}")]
    FoldBack(usize),
    #[error("edges {0} and {1} meet at a vertex")]
    DoublePointAtVertex(usize, usize),
    #[error("three branches meet at one point")]
    TriplePoint,
    #[error("a double point of edges {0} and {1} is at the height of a vertex")]
    DoublePointAtVertexLevel(usize, usize),
    #[error("edges {0} and {1} cross at equal depth")]
    EqualDepth(usize, usize),
    #[error("a long curve must start at its lowest point and end at its highest, on the line x = 0")]
    NotLong,
    #[error("a {0:?} curve needs at least {1} vertices")]
    TooFewVertices(Shape, usize),
    #[error("no cut of the closed curve keeps it generic")]
    NoCut,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MorseError {
    #[error(transparent)]
    Genericity(#[from] GenericityError),
    #[error("this needs a {0:?} curve")]
    WrongShape(Shape),
    #[error("the projection carries no depth information")]
    NoHeights,
    #[error("explicit resolution has {got} entries for {want} double points")]
    ResolutionLength { got: usize, want: usize },
    #[error("formula {formula}: {numerator} is not divisible by {divisor}")]
    NotDivisible { formula: &'static str, numerator: i64, divisor: i64 },
    #[error("formulas disagree: {0:?}")]
    Disagreement(Vec<i64>),
}

/// A transversal self-intersection. Passages are `(edge, parameter)` with
/// the first one earlier along the curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoublePoint {
    pub first: (usize, Rat),
    pub second: (usize, Rat),
    pub point: P2,
    /// Whether the first passage is the overpass, when depth is known.
    pub over_first: Option<bool>,
}

/// How to decide over and under at double points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Resolution {
    /// From the depth of the knot that was projected.
    Heights,
    /// Every double point is first passed from below.
    Ascending,
    /// Every double point is first passed from above.
    Descending,
    /// One flag per double point, in curve order: `true` if first passage is over.
    Explicit(Vec<bool>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneCurve {
    shape: Shape,
    vertices: Vec<P2>,
    double_points: Vec<DoublePoint>,
}

fn cross(ax: &Rat, ay: &Rat, bx: &Rat, by: &Rat) -> Rat {
    ax * by - ay * bx
}

fn sub(a: &P2, b: &P2) -> P2 {
    P2 { x: &a.x - &b.x, y: &a.y - &b.y }
}

fn det(a: &P2, b: &P2) -> Rat {
    cross(&a.x, &a.y, &b.x, &b.y)
}

fn sign_of(r: &Rat) -> i64 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

enum Meet {
    Apart,
    At(Rat, Rat),
    Overlap,
}

fn meet(p: &P2, p2: &P2, q: &P2, q2: &P2) -> Meet {
    let lo = |a: &Rat, b: &Rat| if a < b { a.clone() } else { b.clone() };
    let hi = |a: &Rat, b: &Rat| if a > b { a.clone() } else { b.clone() };
    if hi(&p.x, &p2.x) < lo(&q.x, &q2.x)
        || hi(&q.x, &q2.x) < lo(&p.x, &p2.x)
        || hi(&p.y, &p2.y) < lo(&q.y, &q2.y)
        || hi(&q.y, &q2.y) < lo(&p.y, &p2.y)
    {
        return Meet::Apart;
    }
    let r = sub(p2, p);
    let u = sub(q2, q);
    let qp = sub(q, p);
    let denom = det(&r, &u);
    if denom.is_zero() {
        if !det(&qp, &r).is_zero() {
            return Meet::Apart;
        }
        let rr = &r.x * &r.x + &r.y * &r.y;
        let t0 = (&qp.x * &r.x + &qp.y * &r.y) / &rr;
        let t1 = &t0 + (&u.x * &r.x + &u.y * &r.y) / &rr;
        let zero = Rat::zero();
        let one = Rat::one();
        if hi(&t0, &t1) < zero || lo(&t0, &t1) > one {
            return Meet::Apart;
        }
        return Meet::Overlap;
    }
    let s = det(&qp, &u) / &denom;
    let t = det(&qp, &r) / &denom;
    let unit = |v: &Rat| !v.is_negative() && *v <= Rat::one();
    if unit(&s) && unit(&t) {
        Meet::At(s, t)
    } else {
        Meet::Apart
    }
}

impl PlaneCurve {
    /// Builds a curve and checks genericity. For long curves the first and
    /// last vertices lie on `x = 0` and are the lowest and highest points.
    pub fn new(shape: Shape, vertices: Vec<P2>) -> Result<PlaneCurve, GenericityError> {
        PlaneCurve::with_depths(shape, vertices, None)
    }

    fn with_depths(
        shape: Shape,
        vertices: Vec<P2>,
        depths: Option<&[Rat]>,
    ) -> Result<PlaneCurve, GenericityError> {
        let n = vertices.len();
        let min = if shape == Shape::Long { 2 } else { 3 };
        if n < min {
            return Err(GenericityError::TooFewVertices(shape, min));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| vertices[a].y.cmp(&vertices[b].y));
        if let Some(w) = order.windows(2).find(|w| vertices[w[0]].y == vertices[w[1]].y) {
            return Err(GenericityError::EqualHeights(w[0].min(w[1]), w[0].max(w[1])));
        }
        if shape == Shape::Long
            && (order[0] != 0 || order[n - 1] != n - 1 || !vertices[0].x.is_zero() || !vertices[n - 1].x.is_zero())
        {
            return Err(GenericityError::NotLong);
        }
        let edges = if shape == Shape::Long { n - 1 } else { n };
        let end = |k: usize| (&vertices[k], &vertices[(k + 1) % n]);
        let adjacent = |a: usize, b: usize| b == a + 1 || (shape == Shape::Closed && a == 0 && b == edges - 1);

        let heights: HashSet<&Rat> = vertices.iter().map(|v| &v.y).collect();
        let mut points: HashSet<P2> = HashSet::new();
        let mut double_points = Vec::new();
        for a in 0..edges {
            for b in a + 1..edges {
                let (p, p2) = end(a);
                let (q, q2) = end(b);
                if adjacent(a, b) {
                    // shared vertex; anything more is a fold
                    let shared = if b == a + 1 { a + 1 } else { 0 };
                    let (r, u) = (sub(p2, p), sub(q2, q));
                    if det(&r, &u).is_zero() && (&r.x * &u.x + &r.y * &u.y).is_negative() {
                        return Err(GenericityError::FoldBack(shared % n));
                    }
                    continue;
                }
                match meet(p, p2, q, q2) {
                    Meet::Apart => {}
                    Meet::Overlap => return Err(GenericityError::Overlap(a, b)),
                    Meet::At(s, t) => {
                        let zero = Rat::zero();
                        let one = Rat::one();
                        if s == zero || s == one || t == zero || t == one {
                            return Err(GenericityError::DoublePointAtVertex(a, b));
                        }
                        let point = P2 { x: &p.x + &s * (&p2.x - &p.x), y: &p.y + &s * (&p2.y - &p.y) };
                        if heights.contains(&point.y) {
                            return Err(GenericityError::DoublePointAtVertexLevel(a, b));
                        }
                        if !points.insert(point.clone()) {
                            return Err(GenericityError::TriplePoint);
                        }
                        let over_first = match depths {
                            None => None,
                            Some(z) => {
                                let za = &z[a] + &s * (&z[(a + 1) % n] - &z[a]);
                                let zb = &z[b] + &t * (&z[(b + 1) % n] - &z[b]);
                                if za == zb {
                                    return Err(GenericityError::EqualDepth(a, b));
                                }
                                Some(za > zb)
                            }
                        };
                        double_points.push(DoublePoint { first: (a, s), second: (b, t), point, over_first });
                    }
                }
            }
        }
        double_points.sort_by(|d, e| d.first.cmp(&e.first));
        Ok(PlaneCurve { shape, vertices, double_points })
    }

    /// Projection of a space polygon to the xy-plane; depth is `z`.
    pub fn project(knot: &PolyKnot) -> Result<PlaneCurve, GenericityError> {
        let vs: Vec<P2> = knot.vertices().iter().map(P3::plane).collect();
        let zs: Vec<Rat> = knot.vertices().iter().map(|v| v.z.clone()).collect();
        PlaneCurve::with_depths(knot.shape(), vs, Some(&zs))
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn vertices(&self) -> &[P2] {
        &self.vertices
    }

    pub fn double_points(&self) -> &[DoublePoint] {
        &self.double_points
    }

    pub fn edge_count(&self) -> usize {
        match self.shape {
            Shape::Long => self.vertices.len() - 1,
            Shape::Closed => self.vertices.len(),
        }
    }

    fn direction(&self, k: usize) -> P2 {
        let n = self.vertices.len();
        sub(&self.vertices[(k + 1) % n], &self.vertices[k])
    }

    /// Index of `p` with respect to the given edges.
    pub fn index(&self, p: &P2, edges: impl IntoIterator<Item = usize>) -> i64 {
        let n = self.vertices.len();
        let mut total = 0;
        for k in edges {
            let (a, b) = (&self.vertices[k], &self.vertices[(k + 1) % n]);
            let up = a.y < p.y && p.y < b.y;
            let down = b.y < p.y && p.y < a.y;
            if !(up || down) {
                continue;
            }
            let x = &a.x + (&p.y - &a.y) * (&b.x - &a.x) / (&b.y - &a.y);
            debug_assert!(x != p.x, "query point lies on an edge");
            if x > p.x {
                total += if up { 1 } else { -1 };
            }
        }
        total
    }

    /// Index of a point with respect to the whole curve.
    pub fn point_index(&self, p: &P2) -> i64 {
        self.index(p, 0..self.edge_count())
    }

    /// Sign of the ordered pair of branch tangents at double point `k`.
    pub fn crossing_sign(&self, k: usize) -> i64 {
        let d = &self.double_points[k];
        sign_of(&det(&self.direction(d.first.0), &self.direction(d.second.0)))
    }

    /// Vertices where the height has a local extremum, with `true` for maxima.
    pub fn extrema(&self) -> Vec<(usize, bool)> {
        let n = self.vertices.len();
        let range = match self.shape {
            Shape::Long => 1..n.saturating_sub(1),
            Shape::Closed => 0..n,
        };
        range
            .filter_map(|k| {
                let prev = &self.vertices[(k + n - 1) % n].y;
                let next = &self.vertices[(k + 1) % n].y;
                let here = &self.vertices[k].y;
                if prev < here && next < here {
                    Some((k, true))
                } else if prev > here && next > here {
                    Some((k, false))
                } else {
                    None
                }
            })
            .collect()
    }

    /// `+1` where the curve turns counterclockwise at vertex `k`.
    pub fn turn_sign(&self, k: usize) -> i64 {
        let n = self.vertices.len();
        sign_of(&det(&self.direction((k + n - 1) % n), &self.direction(k)))
    }

    /// Over/under flags per double point in curve order.
    pub fn resolve(&self, resolution: &Resolution) -> Result<Vec<bool>, MorseError> {
        let want = self.double_points.len();
        match resolution {
            Resolution::Heights => self
                .double_points
                .iter()
                .map(|d| d.over_first.ok_or(MorseError::NoHeights))
                .collect(),
            Resolution::Ascending => Ok(vec![false; want]),
            Resolution::Descending => Ok(vec![true; want]),
            Resolution::Explicit(flags) if flags.len() == want => Ok(flags.clone()),
            Resolution::Explicit(flags) => Err(MorseError::ResolutionLength { got: flags.len(), want }),
        }
    }

    /// Gauss diagram of the curve with the given crossing information. The
    /// base point is the start of the curve (at `-∞` for long curves).
    pub fn gauss_diagram(&self, resolution: &Resolution) -> Result<GaussDiagram, MorseError> {
        let over = self.resolve(resolution)?;
        let mut passages: Vec<(&(usize, Rat), Endpoint)> = Vec::new();
        let mut signs = Vec::new();
        for (k, d) in self.double_points.iter().enumerate() {
            let eps = self.crossing_sign(k);
            let (first_end, writhe) = if over[k] { (End::Tail, eps) } else { (End::Head, -eps) };
            passages.push((&d.first, Endpoint { chord: k, end: first_end }));
            passages.push((&d.second, Endpoint { chord: k, end: first_end.opposite() }));
            signs.push(Sign::from_value(writhe).expect("transversal crossing"));
        }
        passages.sort_by(|a, b| a.0.cmp(b.0));
        let seq: Vec<Endpoint> = passages.into_iter().map(|(_, e)| e).collect();
        let ids: Vec<u32> = (1..=signs.len() as u32).collect();
        Ok(GaussDiagram::from_sequence(self.shape, &seq, &ids, &signs).expect("two passages per double point"))
    }

    pub fn stats(&self) -> MorseStats {
        let edges = self.edge_count();
        let extrema = self.extrema();
        let m = extrema.iter().filter(|e| e.1).count() as i64;
        let (mut x, mut x_plus) = (0, 0);
        for (k, d) in self.double_points.iter().enumerate() {
            let up1 = self.direction(d.first.0).y.is_positive();
            let up2 = self.direction(d.second.0).y.is_positive();
            if up1 == up2 {
                x += 1;
                if (self.crossing_sign(k) == 1) == up1 {
                    x_plus += 1;
                }
            }
        }
        let mut stats = MorseStats { shape: self.shape, m, x, ..MorseStats::default() };
        match self.shape {
            Shape::Long => {
                let (mut i_int, mut i_out, mut i_r, mut i_l) = (0, 0, 0, 0);
                for (k, d) in self.double_points.iter().enumerate() {
                    let (a, b) = (d.first.0, d.second.0);
                    let eps = self.crossing_sign(k);
                    i_int += eps * self.index(&d.point, a + 1..b);
                    i_out += eps * self.index(&d.point, (0..a).chain(b + 1..edges));
                }
                for &(k, is_max) in &extrema {
                    let turn = self.turn_sign(k);
                    let before = self.index(&self.vertices[k], 0..k);
                    let after = self.index(&self.vertices[k], k..edges);
                    let after_is_right = (turn < 0) == is_max;
                    let (right, left) = if after_is_right { (after, before) } else { (before, after) };
                    i_r += turn * right;
                    i_l += turn * left;
                }
                stats.x_plus = Some(x_plus);
                stats.x_minus = Some(x - x_plus);
                stats.i_int = Some(i_int);
                stats.i_out = Some(i_out);
                stats.i_r = Some(i_r);
                stats.i_l = Some(i_l);
            }
            Shape::Closed => {
                let e: i64 = extrema
                    .iter()
                    .map(|&(k, _)| self.turn_sign(k) * self.point_index(&self.vertices[k]))
                    .sum();
                let mut q = 0;
                for (k, d) in self.double_points.iter().enumerate() {
                    let (a, b) = (d.first.0, d.second.0);
                    let inner = self.index(&d.point, a + 1..b);
                    let outer = self.index(&d.point, (0..a).chain(b + 1..edges));
                    q += self.crossing_sign(k) * (inner - outer);
                }
                stats.e = Some(e);
                stats.q = Some(q);
            }
        }
        stats
    }

    /// Same curve traversed backwards. Long curves are rotated by π so that
    /// they remain long.
    pub fn reversed(&self) -> PlaneCurve {
        let mut vs: Vec<P2> = self.vertices.iter().rev().cloned().collect();
        if self.shape == Shape::Long {
            for v in &mut vs {
                v.x = -v.x.clone();
                v.y = -v.y.clone();
            }
        }
        PlaneCurve::new(self.shape, vs).expect("reversal keeps genericity")
    }

    /// Long curve obtained by cutting the leftmost string and pulling the
    /// two ends to `y = ±∞`. The result may run in the opposite direction.
    pub fn cut_open(&self) -> Result<PlaneCurve, GenericityError> {
        if self.shape != Shape::Closed {
            return Err(GenericityError::NotLong);
        }
        let pts: Vec<P3> = self.vertices.iter().map(|v| P3::new(v.x.clone(), v.y.clone(), int(0))).collect();
        let long = cut_open_points(&pts, self.double_points.len(), false)?;
        PlaneCurve::new(Shape::Long, long.iter().map(P3::plane).collect())
    }
}

/// Long knot with the same closure, cut along its leftmost string.
pub fn long_from_closed(knot: &PolyKnot) -> Result<PolyKnot, GenericityError> {
    if knot.shape() != Shape::Closed {
        return Ok(knot.clone());
    }
    let crossings = PlaneCurve::project(knot)?.double_points.len();
    let vs = cut_open_points(knot.vertices(), crossings, true)?;
    let long = PolyKnot::new(Shape::Long, vs).map_err(|_| GenericityError::NotLong)?;
    PlaneCurve::project(&long)?;
    Ok(long)
}

fn cut_open_points(vs: &[P3], crossings: usize, depths: bool) -> Result<Vec<P3>, GenericityError> {
    let n = vs.len();
    let left = (0..n).min_by(|&a, &b| vs[a].x.cmp(&vs[b].x)).expect("nonempty");
    let min_y = vs.iter().map(|v| &v.y).min().unwrap().clone();
    let max_y = vs.iter().map(|v| &v.y).max().unwrap().clone();
    let x_left = &vs[left].x - int(1);

    // (orientation reversed?, cut description)
    let mut attempts: Vec<(bool, Cut)> = Vec::new();
    for reversed in [false, true] {
        let order: Vec<usize> =
            if reversed { (0..n).rev().collect() } else { (0..n).collect() };
        let at = order.iter().position(|&k| k == left).unwrap();
        let prev = order[(at + n - 1) % n];
        let next = order[(at + 1) % n];
        let (py, y, ny) = (&vs[prev].y, &vs[left].y, &vs[next].y);
        if py > y && y > ny {
            attempts.push((reversed, Cut::Vertex));
        } else if py < y && ny < y {
            attempts.push((reversed, Cut::After));
        } else if py > y && ny > y {
            attempts.push((reversed, Cut::Before));
        }
    }
    for (reversed, cut) in attempts {
        let order: Vec<P3> =
            if reversed { vs.iter().rev().cloned().collect() } else { vs.to_vec() };
        let at = if reversed { n - 1 - left } else { left };
        let ring = |k: isize| order[(at as isize + k).rem_euclid(n as isize) as usize].clone();
        let mu_choices = match cut {
            Cut::Vertex => vec![int(0)],
            _ => vec![rat(1, 2), rat(1, 4), rat(1, 16), rat(3, 4), rat(1, 64)],
        };
        for mu in mu_choices {
            let mut lambda = match cut {
                Cut::Vertex => rat(1, 2),
                _ => {
                    let room = if mu < rat(1, 2) { mu.clone() } else { int(1) - &mu };
                    room / int(2)
                }
            };
            for _ in 0..40 {
                let (arrive, leave, middle): (P3, P3, Vec<P3>) = match cut {
                    Cut::Vertex => {
                        let v = ring(0);
                        let arrive = v.lerp(&ring(-1), &lambda);
                        let leave = v.lerp(&ring(1), &lambda);
                        (arrive, leave, (1..n as isize).map(ring).collect())
                    }
                    Cut::After => {
                        // cut the descending edge leaving the top vertex
                        let (a, b) = (ring(0), ring(1));
                        let arrive = a.lerp(&b, &(&mu - &lambda));
                        let leave = a.lerp(&b, &(&mu + &lambda));
                        let mut middle: Vec<P3> = (1..n as isize).map(ring).collect();
                        middle.push(ring(0));
                        (arrive, leave, middle)
                    }
                    Cut::Before => {
                        // cut the descending edge entering the bottom vertex
                        let (a, b) = (ring(-1), ring(0));
                        let arrive = a.lerp(&b, &(&mu - &lambda));
                        let leave = a.lerp(&b, &(&mu + &lambda));
                        let middle: Vec<P3> = (0..n as isize - 1).map(ring).collect();
                        (arrive, leave, middle)
                    }
                };
                let mut long = Vec::with_capacity(n + 4);
                long.push(P3::new(x_left.clone(), &min_y - int(1), int(0)));
                long.push(leave);
                long.extend(middle);
                long.push(arrive);
                long.push(P3::new(x_left.clone(), &max_y + int(1), int(0)));
                for v in &mut long {
                    v.x = &v.x - &x_left;
                }
                let plane: Vec<P2> = long.iter().map(P3::plane).collect();
                let zs: Vec<Rat> = long.iter().map(|v| v.z.clone()).collect();
                if let Ok(c) = PlaneCurve::with_depths(Shape::Long, plane, depths.then_some(&zs[..])) {
                    if c.double_points.len() == crossings {
                        return Ok(long);
                    }
                }
                lambda /= int(2);
            }
        }
    }
    Err(GenericityError::NoCut)
}

#[derive(Clone, Copy)]
enum Cut {
    Vertex,
    After,
    Before,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorseStats {
    #[serde(skip)]
    pub shape: Shape,
    pub m: i64,
    pub x: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_plus: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_minus: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i_int: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i_out: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i_r: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i_l: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<i64>,
}

pub(crate) fn exact_div(formula: &'static str, numerator: i64, divisor: i64) -> Result<i64, MorseError> {
    if numerator % divisor != 0 {
        return Err(MorseError::NotDivisible { formula, numerator, divisor });
    }
    Ok(numerator / divisor)
}

pub(crate) fn all_equal(values: Vec<i64>) -> Result<i64, MorseError> {
    if values.windows(2).all(|w| w[0] == w[1]) {
        Ok(values[0])
    } else {
        Err(MorseError::Disagreement(values))
    }
}

/// The three values of v₂ given by the long-curve formulas, in order:
/// with `I_out + I_r`, with `I_int`, with `I_out + I_l`.
pub fn v2_morse_all(curve: &PlaneCurve, resolution: &Resolution) -> Result<[i64; 3], MorseError> {
    if curve.shape() != Shape::Long {
        return Err(MorseError::WrongShape(Shape::Long));
    }
    let g = curve.gauss_diagram(resolution)?;
    let s = bracket_sum(&PatternSum::parallel(), &g);
    let st = curve.stats();
    let (i_int, i_out, i_r, i_l) = (st.i_int.unwrap(), st.i_out.unwrap(), st.i_r.unwrap(), st.i_l.unwrap());
    let (x_plus, x_minus) = (st.x_plus.unwrap(), st.x_minus.unwrap());
    Ok([
        exact_div("right", 2 * s - (i_out + i_r) + st.x - st.m, 4)?,
        exact_div("interior", s + i_int + x_plus, 2)?,
        exact_div("left", 2 * s - (i_out + i_l) + 2 * x_minus, 4)?,
    ])
}

/// v₂ of the long knot given by a curve and crossing data; all three
/// formulas must agree.
pub fn v2_morse(curve: &PlaneCurve, resolution: &Resolution) -> Result<i64, MorseError> {
    all_equal(v2_morse_all(curve, resolution)?.to_vec())
}

/// v₂ of a closed knot from its projection.
pub fn v2_morse_closed(curve: &PlaneCurve, resolution: &Resolution) -> Result<i64, MorseError> {
    if curve.shape() != Shape::Closed {
        return Err(MorseError::WrongShape(Shape::Closed));
    }
    let g = curve.gauss_diagram(resolution)?;
    let all = bracket_sum(&PatternSum::all_crossed(), &g);
    let st = curve.stats();
    let numerator = 6 * all - st.e.unwrap() + 2 * st.q.unwrap() + 3 * st.x - st.m + 1;
    exact_div("closed", numerator, 24)
}

/// v₂ of a space polygon through its projection, dispatching on shape.
pub fn v2_of_knot(knot: &PolyKnot) -> Result<i64, MorseError> {
    let curve = PlaneCurve::project(knot)?;
    match knot.shape() {
        Shape::Long => v2_morse(&curve, &Resolution::Heights),
        Shape::Closed => v2_morse_closed(&curve, &Resolution::Heights),
    }
}

/// `−⟨2 XUP + 2 (XFWD + XBWD), G⟩` for the diagram with the given crossings.
pub fn arnold_i_with(curve: &PlaneCurve, resolution: &Resolution) -> Result<i64, MorseError> {
    let g = curve.gauss_diagram(resolution)?;
    Ok(-(2 * bracket(&ArrowPattern::xup(), &g) + 2 * bracket_sum(&PatternSum::parallel(), &g)))
}

/// The plane-curve part shared by all formulas, from the ascending diagram
/// (which is an unknot).
pub fn arnold_i(curve: &PlaneCurve) -> i64 {
    arnold_i_with(curve, &Resolution::Ascending).expect("ascending resolution always exists")
}

/// The same quantity read off the curve's own statistics, no crossing data.
pub fn arnold_i_plane(curve: &PlaneCurve) -> Result<i64, MorseError> {
    let st = curve.stats();
    match curve.shape() {
        Shape::Long => all_equal(vec![
            -(st.i_out.unwrap() + st.i_r.unwrap()) + st.x - st.m,
            2 * st.i_int.unwrap() + 2 * st.x_plus.unwrap(),
            -(st.i_out.unwrap() + st.i_l.unwrap()) + 2 * st.x_minus.unwrap(),
        ]),
        Shape::Closed => {
            exact_div("closed plane part", -st.e.unwrap() + 2 * st.q.unwrap() + 3 * st.x - st.m + 1, 3)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> P2 {
        P2 { x: int(x), y: int(y) }
    }

    fn circle() -> PlaneCurve {
        // counterclockwise, heights all distinct
        PlaneCurve::new(Shape::Closed, vec![p(10, 1), p(7, 8), p(0, 10), p(-8, 6), p(-9, -2), p(-3, -9), p(6, -7)])
            .unwrap()
    }

    #[test]
    fn square_winding() {
        let sq = PlaneCurve::new(Shape::Closed, vec![p(0, 0), p(4, 1), p(3, 5), p(-1, 4)]).unwrap();
        assert_eq!(sq.point_index(&P2 { x: rat(3, 2), y: rat(5, 2) }), 1);
        assert_eq!(sq.point_index(&P2 { x: int(100), y: rat(5, 2) }), 0);
        assert_eq!(sq.reversed().point_index(&P2 { x: rat(3, 2), y: rat(5, 2) }), -1);
    }

    #[test]
    fn straight_line() {
        let line = PlaneCurve::new(Shape::Long, vec![p(0, 0), p(0, 1)]).unwrap();
        assert_eq!(line.stats(), MorseStats {
            x_plus: Some(0),
            x_minus: Some(0),
            i_int: Some(0),
            i_out: Some(0),
            i_r: Some(0),
            i_l: Some(0),
            ..MorseStats::default()
        });
        assert_eq!(v2_morse(&line, &Resolution::Ascending), Ok(0));
        assert_eq!(arnold_i(&line), 0);
    }

    #[test]
    fn round_circle() {
        let c = circle();
        let st = c.stats();
        assert_eq!((st.m, st.x, st.e, st.q), (1, 0, Some(0), Some(0)));
        assert_eq!(v2_morse_closed(&c, &Resolution::Ascending), Ok(0));
        let long = c.cut_open().unwrap();
        assert_eq!(long.stats().m, 2);
        assert_eq!(v2_morse(&long, &Resolution::Ascending), Ok(0));
    }

    #[test]
    fn genericity_errors() {
        assert_eq!(
            PlaneCurve::new(Shape::Closed, vec![p(0, 0), p(2, 0), p(1, 3)]),
            Err(GenericityError::EqualHeights(0, 1))
        );
        assert_eq!(
            PlaneCurve::new(Shape::Long, vec![p(0, 0), p(1, 5), p(3, 2), p(0, 9)]).map(|c| c.double_points.len()),
            Ok(0)
        );
        assert_eq!(
            PlaneCurve::new(Shape::Long, vec![p(0, 0), p(0, 4), p(0, 2), p(0, 9)]),
            Err(GenericityError::FoldBack(1))
        );
        assert_eq!(
            PlaneCurve::new(Shape::Long, vec![p(0, 0), p(1, 10), p(0, 5)]),
            Err(GenericityError::NotLong)
        );
        // figure-eight loop crossing exactly at a vertex
        assert_eq!(
            PlaneCurve::new(Shape::Closed, vec![p(0, 0), p(2, 2), p(2, -1), p(1, 1), p(-1, 3)])
                .err()
                .map(|e| matches!(e, GenericityError::DoublePointAtVertex(..))),
            Some(true)
        );
    }

    #[test]
    fn kink_curve() {
        // long curve with one loop
        let c = PlaneCurve::new(Shape::Long, vec![p(0, 0), p(3, 4), p(1, 6), p(-1, 3), p(2, 2), p(0, 11)])
            .unwrap();
        assert_eq!(c.double_points().len(), 3);
        for res in [Resolution::Ascending, Resolution::Descending] {
            assert_eq!(v2_morse(&c, &res), Ok(0));
        }
        assert_eq!(arnold_i(&c), arnold_i_plane(&c).unwrap());
    }
}
