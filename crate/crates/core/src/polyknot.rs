//! Polygonal knots in space with exact rational vertices.
//!
//! A long knot starts and ends on the `y`-axis: its first and last vertices
//! have `x = z = 0`, the first is the lowest vertex and the last the highest,
//! and the knot continues along the axis to `y = ∓∞` beyond them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::gauss::Shape;
use crate::notation::Braid;

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `p/q`, an integer, or a finite decimal such as `-1.25e-3`.
pub fn parse_rational(text: &str) -> Option<Rat> {
    let s = text.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).ok()?;
        let q = BigInt::from_str(q.trim()).ok()?;
        return (!q.is_zero()).then(|| Rat::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let n = BigInt::from_str(&format!("{whole}{frac}")).ok()?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut r = Rat::from_integer(n);
    if scale >= 0 {
        r *= Rat::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= Rat::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if neg { -r } else { r })
}

pub fn format_rational(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Nearest rational with the given denominator.
pub fn from_f64(x: f64, denom: i64) -> Rat {
    rat((x * denom as f64).round() as i64, denom)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct P2 {
    pub x: Rat,
    pub y: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct P3 {
    pub x: Rat,
    pub y: Rat,
    pub z: Rat,
}

impl P3 {
    pub fn new(x: Rat, y: Rat, z: Rat) -> P3 {
        P3 { x, y, z }
    }

    pub fn ints(x: i64, y: i64, z: i64) -> P3 {
        P3::new(int(x), int(y), int(z))
    }

    pub fn plane(&self) -> P2 {
        P2 { x: self.x.clone(), y: self.y.clone() }
    }

    pub fn to_f64(&self) -> [f64; 3] {
        [to_f64(&self.x), to_f64(&self.y), to_f64(&self.z)]
    }

    /// `self + t (other - self)`
    pub fn lerp(&self, other: &P3, t: &Rat) -> P3 {
        P3 {
            x: &self.x + t * (&other.x - &self.x),
            y: &self.y + t * (&other.y - &self.y),
            z: &self.z + t * (&other.z - &self.z),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KnotError {
    #[error("a {0:?} knot needs at least {1} vertices")]
    TooFewVertices(Shape, usize),
    #[error("vertices {0} and {1} coincide")]
    RepeatedVertex(usize, usize),
    #[error("a long knot must start and end on the y-axis (x = z = 0)")]
    OffAxis,
    #[error("a long knot must start at its lowest vertex and end at its highest")]
    NotLong,
    #[error("bad coordinate {0:?}")]
    BadCoordinate(String),
    #[error("could not find a generic embedding after {0} attempts")]
    NoGenericEmbedding(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyKnot {
    shape: Shape,
    vertices: Vec<P3>,
}

impl PolyKnot {
    pub fn new(shape: Shape, vertices: Vec<P3>) -> Result<PolyKnot, KnotError> {
        let min = match shape {
            Shape::Long => 2,
            Shape::Closed => 3,
        };
        if vertices.len() < min {
            return Err(KnotError::TooFewVertices(shape, min));
        }
        let n = vertices.len();
        let pairs = match shape {
            Shape::Long => n - 1,
            Shape::Closed => n,
        };
        for i in 0..pairs {
            let j = (i + 1) % n;
            if vertices[i] == vertices[j] {
                return Err(KnotError::RepeatedVertex(i, j));
            }
        }
        if shape == Shape::Long {
            let (first, last) = (&vertices[0], &vertices[n - 1]);
            if !(first.x.is_zero() && first.z.is_zero() && last.x.is_zero() && last.z.is_zero()) {
                return Err(KnotError::OffAxis);
            }
            if vertices[1..n - 1].iter().any(|v| v.y <= first.y || v.y >= last.y) || first.y >= last.y {
                return Err(KnotError::NotLong);
            }
        }
        Ok(PolyKnot { shape, vertices })
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn vertices(&self) -> &[P3] {
        &self.vertices
    }

    pub fn edge_count(&self) -> usize {
        match self.shape {
            Shape::Long => self.vertices.len() - 1,
            Shape::Closed => self.vertices.len(),
        }
    }

    pub fn edge(&self, k: usize) -> (&P3, &P3) {
        (&self.vertices[k], &self.vertices[(k + 1) % self.vertices.len()])
    }

    /// Straight piece of the axis, the trivial long knot.
    pub fn straight() -> PolyKnot {
        PolyKnot::new(Shape::Long, vec![P3::ints(0, 0, 0), P3::ints(0, 1, 0)]).unwrap()
    }

    /// Same knot traversed backwards. Long knots are also turned upside
    /// down (rotation by π about the z-axis) so they stay long.
    pub fn reversed(&self) -> PolyKnot {
        let mut vs: Vec<P3> = self.vertices.iter().rev().cloned().collect();
        if self.shape == Shape::Long {
            for v in &mut vs {
                v.x = -v.x.clone();
                v.y = -v.y.clone();
            }
        }
        PolyKnot { shape: self.shape, vertices: vs }
    }

    /// Reflection through the xy-plane: swaps every crossing.
    pub fn mirrored(&self) -> PolyKnot {
        let vs = self
            .vertices
            .iter()
            .map(|v| P3::new(v.x.clone(), v.y.clone(), -v.z.clone()))
            .collect();
        PolyKnot { shape: self.shape, vertices: vs }
    }

    /// Moves interior vertices by random multiples of `1/denom` of size at
    /// most `amplitude/denom`. Endpoints of long knots stay on the axis.
    pub fn perturbed<R: Rng>(&self, rng: &mut R, amplitude: i64, denom: i64) -> PolyKnot {
        let n = self.vertices.len();
        let mut jitter = || rat(rng.gen_range(-amplitude..=amplitude), denom);
        let vs = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| {
                if self.shape == Shape::Long && (i == 0 || i == n - 1) {
                    let dy = jitter();
                    let dy = if i == 0 { -dy.abs() } else { dy.abs() };
                    P3::new(v.x.clone(), &v.y + dy, v.z.clone())
                } else {
                    P3::new(&v.x + jitter(), &v.y + jitter(), &v.z + jitter())
                }
            })
            .collect();
        PolyKnot { shape: self.shape, vertices: vs }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<PolyKnot, serde_json::Error> {
        serde_json::from_str(text)
    }
}

impl fmt::Display for PolyKnot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

#[derive(Serialize, Deserialize)]
struct RawKnot {
    shape: Shape,
    vertices: Vec<[serde_json::Value; 3]>,
}

fn coordinate(v: &serde_json::Value) -> Result<Rat, KnotError> {
    let text = match v {
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Number(n) => n.to_string(),
        other => return Err(KnotError::BadCoordinate(other.to_string())),
    };
    parse_rational(&text).ok_or(KnotError::BadCoordinate(text))
}

impl Serialize for PolyKnot {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let vertices = self
            .vertices
            .iter()
            .map(|v| [&v.x, &v.y, &v.z].map(|c| serde_json::Value::String(format_rational(c))))
            .collect();
        RawKnot { shape: self.shape, vertices }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolyKnot {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawKnot::deserialize(d)?;
        let vertices = raw
            .vertices
            .iter()
            .map(|[x, y, z]| Ok(P3::new(coordinate(x)?, coordinate(y)?, coordinate(z)?)))
            .collect::<Result<Vec<_>, KnotError>>()
            .map_err(D::Error::custom)?;
        PolyKnot::new(raw.shape, vertices).map_err(D::Error::custom)
    }
}

/// Polygonal closure of a braid. Strand positions sit at `x = 0..k`, letter
/// `j` occupies `j <= y <= j + 1`, and closing arcs nest to the right.
///
/// For [`Shape::Long`] the arc of the first strand is replaced by the axis.
/// Coordinates are exact multiples of `1/3`; call [`PolyKnot::perturbed`]
/// (or use [`generic_braid_knot`]) to make the projection generic.
pub fn braid_skeleton(braid: &Braid, shape: Shape) -> PolyKnot {
    let k = braid.strands() as i64;
    let m = braid.letters().len() as i64;
    let third = rat(1, 3);
    let mut vs: Vec<P3> = Vec::new();
    let push = |vs: &mut Vec<P3>, p: P3| {
        if vs.last() != Some(&p) {
            vs.push(p);
        }
    };
    if shape == Shape::Long {
        push(&mut vs, P3::ints(0, -k - 1, 0));
    }
    let mut pos = 0i64;
    loop {
        push(&mut vs, P3::ints(pos, 0, 0));
        for (j, &l) in braid.letters().iter().enumerate() {
            let j = j as i64;
            let i = l.unsigned_abs() as i64 - 1;
            let (from, to, left) = if pos == i {
                (i, i + 1, true)
            } else if pos == i + 1 {
                (i + 1, i, false)
            } else {
                continue;
            };
            let over = left == (l > 0);
            push(&mut vs, P3::ints(from, j, 0));
            let x = int(from) + (int(to) - int(from)) * &third;
            let y = int(j) + &third;
            push(&mut vs, P3::new(x, y, int(if over { 1 } else { -1 })));
            push(&mut vs, P3::ints(to, j + 1, 0));
            pos = to;
        }
        push(&mut vs, P3::ints(pos, m, 0));
        if pos == 0 && shape == Shape::Long {
            push(&mut vs, P3::ints(0, m + k + 1, 0));
            break;
        }
        let depth = k - pos;
        push(&mut vs, P3::ints(pos, m + depth, 0));
        push(&mut vs, P3::ints(k + depth, m + depth, 0));
        push(&mut vs, P3::ints(k + depth, -depth, 0));
        push(&mut vs, P3::ints(pos, -depth, 0));
        if pos == 0 {
            break;
        }
    }
    if shape == Shape::Closed && vs.first() == vs.last() {
        vs.pop();
    }
    PolyKnot::new(shape, vs).expect("braid skeleton is a valid polygon")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("3/4"), Some(rat(3, 4)));
        assert_eq!(parse_rational("-2"), Some(int(-2)));
        assert_eq!(parse_rational("0.125"), Some(rat(1, 8)));
        assert_eq!(parse_rational("-1.5e1"), Some(int(-15)));
        assert_eq!(parse_rational("2.5E-1"), Some(rat(1, 4)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("."), None);
    }

    #[test]
    fn json_round_trip() {
        let k = PolyKnot::new(
            Shape::Long,
            vec![P3::ints(0, 0, 0), P3::new(rat(1, 2), int(1), rat(-3, 7)), P3::ints(0, 2, 0)],
        )
        .unwrap();
        let text = k.to_json();
        assert_eq!(PolyKnot::from_json(&text).unwrap(), k);
        let loose = r#"{"shape":"long","vertices":[[0,0,0],["1/2",1,-0.25],[0,2,0]]}"#;
        assert!(PolyKnot::from_json(loose).is_ok());
    }

    #[test]
    fn long_knots_must_sit_on_axis() {
        let off = PolyKnot::new(Shape::Long, vec![P3::ints(1, 0, 0), P3::ints(0, 1, 0)]);
        assert_eq!(off, Err(KnotError::OffAxis));
        let low = PolyKnot::new(
            Shape::Long,
            vec![P3::ints(0, 0, 0), P3::ints(1, -1, 0), P3::ints(0, 2, 0)],
        );
        assert_eq!(low, Err(KnotError::NotLong));
    }

    #[test]
    fn braid_skeleton_shapes() {
        let b = Braid::parse("s1 s1 s1").unwrap();
        let long = braid_skeleton(&b, Shape::Long);
        assert_eq!(long.vertices()[0], P3::ints(0, -3, 0));
        let closed = braid_skeleton(&b, Shape::Closed);
        assert!(closed.vertices().len() > long.vertices().len());
    }
}
