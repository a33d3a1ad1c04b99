//! Based Gauss diagrams.
//!
//! A diagram is a circle (or a line, for long knots) carrying signed arrows.
//! Each arrow runs from the overpassing preimage of a double point to the
//! underpassing one. Endpoint positions are exact rationals in the open
//! interval `(0, 1)` measured from the base point; only their order is ever
//! consumed.

use std::fmt;
use std::ops::{Mul, Neg};

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Local writhe of a crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "-")]
    Negative,
    #[serde(rename = "+")]
    Positive,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn from_value(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Positive),
            -1 => Some(Sign::Negative),
            _ => None,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Positive => '+',
            Sign::Negative => '-',
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

/// Which end of an arrow an endpoint is. The tail sits on the overpass.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum End {
    Tail,
    Head,
}

impl End {
    pub fn opposite(self) -> End {
        match self {
            End::Tail => End::Head,
            End::Head => End::Tail,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chord {
    pub id: u32,
    pub tail: Rational64,
    pub head: Rational64,
    pub sign: Sign,
}

/// Closed diagrams keep the base point on the circle; long diagrams put it at
/// infinity. Both are stored the same way.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Closed,
    #[default]
    Long,
}

/// One endpoint in circle order: an index into [`GaussDiagram::chords`] and
/// which end of that chord it is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Endpoint {
    pub chord: usize,
    pub end: End,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("chord {0}: endpoint outside the open interval (0, 1)")]
    OutOfRange(u32),
    #[error("chord {0}: tail and head coincide")]
    DegenerateChord(u32),
    #[error("two endpoints share position {0}")]
    CollidingEndpoints(Rational64),
    #[error("chord id {0} used twice")]
    DuplicateId(u32),
    #[error("endpoint sequence is not a valid chord pairing")]
    BadSequence,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawDiagram", into = "RawDiagram")]
pub struct GaussDiagram {
    chords: Vec<Chord>,
    shape: Shape,
    provenance: String,
    order: Vec<Endpoint>,
    // (tail index, head index) into `order`, per chord
    slots: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct RawDiagram {
    shape: Shape,
    #[serde(default)]
    provenance: String,
    chords: Vec<Chord>,
}

impl TryFrom<RawDiagram> for GaussDiagram {
    type Error = DiagramError;
    fn try_from(raw: RawDiagram) -> Result<Self, DiagramError> {
        Ok(GaussDiagram::new(raw.chords, raw.shape)?.with_provenance(raw.provenance))
    }
}

impl From<GaussDiagram> for RawDiagram {
    fn from(g: GaussDiagram) -> RawDiagram {
        RawDiagram { shape: g.shape, provenance: g.provenance, chords: g.chords }
    }
}

impl PartialEq for GaussDiagram {
    /// Equality of cyclic-order data: same shape, same endpoint sequence,
    /// same ids and signs. Exact positions and provenance are ignored.
    fn eq(&self, other: &Self) -> bool {
        self.shape == other.shape
            && self.order.len() == other.order.len()
            && self.order.iter().zip(&other.order).all(|(a, b)| {
                let (ca, cb) = (&self.chords[a.chord], &other.chords[b.chord]);
                a.end == b.end && ca.id == cb.id && ca.sign == cb.sign
            })
    }
}

impl Eq for GaussDiagram {}

impl GaussDiagram {
    pub fn new(chords: Vec<Chord>, shape: Shape) -> Result<Self, DiagramError> {
        let zero = Rational64::from_integer(0);
        let one = Rational64::from_integer(1);
        let mut ids = std::collections::HashSet::new();
        let mut all = Vec::with_capacity(2 * chords.len());
        for (i, c) in chords.iter().enumerate() {
            if !ids.insert(c.id) {
                return Err(DiagramError::DuplicateId(c.id));
            }
            for p in [c.tail, c.head] {
                if p <= zero || p >= one {
                    return Err(DiagramError::OutOfRange(c.id));
                }
            }
            if c.tail == c.head {
                return Err(DiagramError::DegenerateChord(c.id));
            }
            all.push((c.tail, Endpoint { chord: i, end: End::Tail }));
            all.push((c.head, Endpoint { chord: i, end: End::Head }));
        }
        all.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = all.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(DiagramError::CollidingEndpoints(w[0].0));
        }
        let order: Vec<Endpoint> = all.into_iter().map(|(_, e)| e).collect();
        let slots = compute_slots(&order, chords.len());
        Ok(GaussDiagram { chords, shape, provenance: String::new(), order, slots })
    }

    /// Builds a diagram from an endpoint sequence. `signs[k]` and `ids[k]`
    /// belong to the chord numbered `k` in the sequence. Positions are spread
    /// evenly as `i / (2n + 1)`.
    pub fn from_sequence(
        shape: Shape,
        sequence: &[Endpoint],
        ids: &[u32],
        signs: &[Sign],
    ) -> Result<Self, DiagramError> {
        let n = ids.len();
        if signs.len() != n || sequence.len() != 2 * n {
            return Err(DiagramError::BadSequence);
        }
        let mut tail = vec![None; n];
        let mut head = vec![None; n];
        let denom = (2 * n + 1) as i64;
        for (i, e) in sequence.iter().enumerate() {
            let slot = match e.end {
                End::Tail => tail.get_mut(e.chord),
                End::Head => head.get_mut(e.chord),
            }
            .ok_or(DiagramError::BadSequence)?;
            if slot.is_some() {
                return Err(DiagramError::BadSequence);
            }
            *slot = Some(Rational64::new(i as i64 + 1, denom));
        }
        let chords = (0..n)
            .map(|k| {
                Ok(Chord {
                    id: ids[k],
                    tail: tail[k].ok_or(DiagramError::BadSequence)?,
                    head: head[k].ok_or(DiagramError::BadSequence)?,
                    sign: signs[k],
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        GaussDiagram::new(chords, shape)
    }

    pub fn empty(shape: Shape) -> Self {
        GaussDiagram::new(Vec::new(), shape).expect("empty diagram is valid")
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    pub fn chords(&self) -> &[Chord] {
        &self.chords
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// Number of chords.
    pub fn len(&self) -> usize {
        self.chords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chords.is_empty()
    }

    /// Endpoints in order from the base point.
    pub fn endpoints(&self) -> &[Endpoint] {
        &self.order
    }

    /// Indices into [`endpoints`](Self::endpoints) of the tail and head of chord `k`.
    pub fn slots(&self, k: usize) -> (usize, usize) {
        self.slots[k]
    }

    pub fn sign(&self, k: usize) -> Sign {
        self.chords[k].sign
    }

    pub fn chord_index(&self, id: u32) -> Option<usize> {
        self.chords.iter().position(|c| c.id == id)
    }

    /// Whether the endpoints of chords `a` and `b` alternate around the circle.
    pub fn interlocked(&self, a: usize, b: usize) -> bool {
        let (a0, a1) = ordered(self.slots[a]);
        let (b0, b1) = ordered(self.slots[b]);
        (a0 < b0 && b0 < a1) != (a0 < b1 && b1 < a1)
    }

    /// Ids, signs and endpoint sequence with chords renumbered by first
    /// appearance; the shape-independent skeleton most rewrites work on.
    pub fn skeleton(&self) -> (Vec<Endpoint>, Vec<u32>, Vec<Sign>) {
        let mut renumber = vec![usize::MAX; self.chords.len()];
        let mut ids = Vec::new();
        let mut signs = Vec::new();
        let seq = self
            .order
            .iter()
            .map(|e| {
                if renumber[e.chord] == usize::MAX {
                    renumber[e.chord] = ids.len();
                    ids.push(self.chords[e.chord].id);
                    signs.push(self.chords[e.chord].sign);
                }
                Endpoint { chord: renumber[e.chord], end: e.end }
            })
            .collect();
        (seq, ids, signs)
    }

    /// Same diagram with every arrow reversed; signs are kept.
    pub fn reversed_arrows(&self) -> Self {
        let chords = self
            .chords
            .iter()
            .map(|c| Chord { id: c.id, tail: c.head, head: c.tail, sign: c.sign })
            .collect();
        GaussDiagram::new(chords, self.shape)
            .expect("reversal keeps positions valid")
            .with_provenance(self.provenance.clone())
    }

    /// Moves the base point forward past `k` endpoints.
    pub fn rotated(&self, k: usize) -> Self {
        if self.order.is_empty() {
            return self.clone();
        }
        let (seq, ids, signs) = self.skeleton();
        let k = k % seq.len();
        let mut rotated = seq[k..].to_vec();
        rotated.extend_from_slice(&seq[..k]);
        GaussDiagram::from_sequence(self.shape, &rotated, &ids, &signs)
            .expect("rotation keeps the pairing")
            .with_provenance(self.provenance.clone())
    }

    /// Canonical Gauss code, labels renumbered by first appearance.
    pub fn to_gauss_code(&self) -> String {
        let (seq, _, signs) = self.skeleton();
        let mut out = String::with_capacity(seq.len() * 3);
        for e in seq {
            out.push(match e.end {
                End::Tail => 'O',
                End::Head => 'U',
            });
            out.push_str(&(e.chord + 1).to_string());
            out.push(signs[e.chord].symbol());
        }
        out
    }
}

impl fmt::Display for GaussDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_gauss_code())
    }
}

fn ordered((a, b): (usize, usize)) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn compute_slots(order: &[Endpoint], n: usize) -> Vec<(usize, usize)> {
    let mut slots = vec![(0, 0); n];
    for (i, e) in order.iter().enumerate() {
        match e.end {
            End::Tail => slots[e.chord].0 = i,
            End::Head => slots[e.chord].1 = i,
        }
    }
    slots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn rejects_colliding_endpoints() {
        let chords = vec![
            Chord { id: 1, tail: r(1, 5), head: r(2, 5), sign: Sign::Positive },
            Chord { id: 2, tail: r(2, 5), head: r(3, 5), sign: Sign::Positive },
        ];
        assert!(matches!(
            GaussDiagram::new(chords, Shape::Closed),
            Err(DiagramError::CollidingEndpoints(_))
        ));
    }

    #[test]
    fn rejects_base_point_endpoint() {
        let chords = vec![Chord { id: 1, tail: r(0, 1), head: r(1, 2), sign: Sign::Positive }];
        assert_eq!(GaussDiagram::new(chords, Shape::Long), Err(DiagramError::OutOfRange(1)));
    }

    #[test]
    fn equality_ignores_exact_positions() {
        let a = GaussDiagram::new(
            vec![Chord { id: 1, tail: r(1, 3), head: r(2, 3), sign: Sign::Negative }],
            Shape::Closed,
        )
        .unwrap();
        let b = GaussDiagram::new(
            vec![Chord { id: 1, tail: r(1, 100), head: r(99, 100), sign: Sign::Negative }],
            Shape::Closed,
        )
        .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_gauss_code(), "O1-U1-");
    }

    #[test]
    fn interlocking() {
        let seq = [
            Endpoint { chord: 0, end: End::Tail },
            Endpoint { chord: 1, end: End::Head },
            Endpoint { chord: 0, end: End::Head },
            Endpoint { chord: 1, end: End::Tail },
            Endpoint { chord: 2, end: End::Tail },
            Endpoint { chord: 2, end: End::Head },
        ];
        let g = GaussDiagram::from_sequence(Shape::Long, &seq, &[1, 2, 3], &[Sign::Positive; 3])
            .unwrap();
        assert!(g.interlocked(0, 1));
        assert!(!g.interlocked(0, 2));
        assert!(!g.interlocked(1, 2));
    }

    #[test]
    fn json_round_trip() {
        let seq = [
            Endpoint { chord: 0, end: End::Tail },
            Endpoint { chord: 0, end: End::Head },
        ];
        let g = GaussDiagram::from_sequence(Shape::Closed, &seq, &[7], &[Sign::Negative]).unwrap();
        let text = serde_json::to_string(&g).unwrap();
        let back: GaussDiagram = serde_json::from_str(&text).unwrap();
        assert_eq!(g, back);
    }
}
