//! v₂ by making a diagram descending one crossing at a time and summing the
//! linking numbers of the smoothings met along the way.

use serde::Serialize;
use thiserror::Error;

use crate::gauss::{End, Endpoint, GaussDiagram, Sign};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SkeinError {
    #[error("no chord with id {0}")]
    UnknownChord(u32),
    #[error("chord {id}: one-sided count {one_sided} but two-colour count {two_colour:?}; diagram is not realizable")]
    LinkingMismatch { id: u32, one_sided: i64, two_colour: Option<i64> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Flip {
    pub id: u32,
    /// Sign of the crossing just before it was switched.
    pub sign: Sign,
    pub lk: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlipTrace {
    pub flips: Vec<Flip>,
    #[serde(serialize_with = "as_code")]
    pub final_diagram: GaussDiagram,
}

fn as_code<S: serde::Serializer>(g: &GaussDiagram, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&g.to_gauss_code())
}

impl FlipTrace {
    pub fn v2(&self) -> i64 {
        self.flips.iter().map(|f| f.sign.value() * f.lk).sum()
    }
}

// Mutable working copy: endpoint sequence plus per-chord data.
struct Work {
    seq: Vec<Endpoint>,
    ids: Vec<u32>,
    signs: Vec<Sign>,
    slots: Vec<(usize, usize)>,
}

impl Work {
    fn new(g: &GaussDiagram) -> Work {
        let (seq, ids, signs) = g.skeleton();
        let mut slots = vec![(0, 0); ids.len()];
        for (i, e) in seq.iter().enumerate() {
            match e.end {
                End::Tail => slots[e.chord].0 = i,
                End::Head => slots[e.chord].1 = i,
            }
        }
        Work { seq, ids, signs, slots }
    }

    fn interlocked(&self, a: usize, b: usize) -> bool {
        let inside = |p: usize| {
            let (x, y) = self.slots[a];
            let (lo, hi) = if x < y { (x, y) } else { (y, x) };
            lo < p && p < hi
        };
        let (t, h) = self.slots[b];
        inside(t) != inside(h)
    }

    /// Signs of chords crossing `c` whose heads lie after the tail of `c`.
    fn one_sided(&self, c: usize) -> i64 {
        let tail = self.slots[c].0;
        (0..self.ids.len())
            .filter(|&d| d != c && self.interlocked(c, d) && self.slots[d].1 > tail)
            .map(|d| self.signs[d].value())
            .sum()
    }

    /// Linking number of the two-component smoothing at `c`: colour the
    /// endpoints by component and take half the signed count of crossings
    /// between the colours.
    fn two_colour(&self, c: usize) -> Option<i64> {
        let (t, h) = self.slots[c];
        let (lo, hi) = if t < h { (t, h) } else { (h, t) };
        let colour: Vec<bool> = (0..self.seq.len()).map(|i| lo < i && i < hi).collect();
        let total: i64 = (0..self.ids.len())
            .filter(|&d| d != c)
            .filter(|&d| colour[self.slots[d].0] != colour[self.slots[d].1])
            .map(|d| self.signs[d].value())
            .sum();
        (total % 2 == 0).then_some(total / 2)
    }

    fn switch(&mut self, c: usize) {
        let (t, h) = self.slots[c];
        self.seq[t].end = End::Head;
        self.seq[h].end = End::Tail;
        self.slots[c] = (h, t);
        self.signs[c] = -self.signs[c];
    }

    fn into_diagram(self, g: &GaussDiagram) -> GaussDiagram {
        GaussDiagram::from_sequence(g.shape(), &self.seq, &self.ids, &self.signs)
            .expect("switching keeps the pairing")
            .with_provenance(g.provenance().to_string())
    }
}

/// Walks from the base point and switches every crossing first met from
/// below, recording the sign and smoothing linking number at each switch.
pub fn descend(g: &GaussDiagram) -> Result<FlipTrace, SkeinError> {
    let mut w = Work::new(g);
    let mut flips = Vec::new();
    for i in 0..w.seq.len() {
        let e = w.seq[i];
        if e.end != End::Head || w.slots[e.chord].0 < i {
            continue;
        }
        let c = e.chord;
        let lk = w.one_sided(c);
        let two = w.two_colour(c);
        if two != Some(lk) {
            return Err(SkeinError::LinkingMismatch { id: w.ids[c], one_sided: lk, two_colour: two });
        }
        flips.push(Flip { id: w.ids[c], sign: w.signs[c], lk });
        w.switch(c);
    }
    Ok(FlipTrace { flips, final_diagram: w.into_diagram(g) })
}

/// The one-sided count for chord `id` on `g` as it stands.
pub fn lk_smoothed(g: &GaussDiagram, id: u32) -> Result<i64, SkeinError> {
    let w = Work::new(g);
    let c = w.ids.iter().position(|&x| x == id).ok_or(SkeinError::UnknownChord(id))?;
    Ok(w.one_sided(c))
}

/// Half the signed count of chords crossing chord `id`; `None` if odd.
pub fn lk_two_colour(g: &GaussDiagram, id: u32) -> Result<Option<i64>, SkeinError> {
    let w = Work::new(g);
    let c = w.ids.iter().position(|&x| x == id).ok_or(SkeinError::UnknownChord(id))?;
    Ok(w.two_colour(c))
}

pub fn v2_skein(g: &GaussDiagram) -> Result<i64, SkeinError> {
    Ok(descend(g)?.v2())
}

/// Whether every chord is first met at its tail.
pub fn is_descending(g: &GaussDiagram) -> bool {
    (0..g.len()).all(|c| {
        let (t, h) = g.slots(c);
        t < h
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::{from_braid_word, parse_gauss_code, torus_knot_2};

    #[test]
    fn trefoil_trace() {
        let g = parse_gauss_code("O1+U2+O3+U1+O2+U3+").unwrap();
        let trace = descend(&g).unwrap();
        assert_eq!(trace.flips, vec![Flip { id: 2, sign: Sign::Positive, lk: 1 }]);
        assert_eq!(trace.v2(), 1);
        assert!(is_descending(&trace.final_diagram));
        assert!(descend(&trace.final_diagram).unwrap().flips.is_empty());
    }

    #[test]
    fn named_values() {
        assert_eq!(v2_skein(&from_braid_word("s1 -s2 s1 -s2").unwrap()), Ok(-1));
        assert_eq!(v2_skein(&torus_knot_2(9).unwrap()), Ok(10));
        assert_eq!(v2_skein(&GaussDiagram::empty(crate::gauss::Shape::Long)), Ok(0));
    }

    #[test]
    fn lone_chord_has_zero_linking() {
        let g = parse_gauss_code("O1+U1+O2-U2-").unwrap();
        assert_eq!(lk_smoothed(&g, 1), Ok(0));
        assert_eq!(lk_two_colour(&g, 2), Ok(Some(0)));
        assert_eq!(lk_smoothed(&g, 9), Err(SkeinError::UnknownChord(9)));
    }

    #[test]
    fn unrealizable_pair_is_caught() {
        // two interlocked chords alone cannot come from a plane curve
        let g = parse_gauss_code("O1+U2+U1+O2+").unwrap();
        assert_eq!(lk_smoothed(&g, 1), Ok(1));
        assert_eq!(lk_smoothed(&g, 2), Ok(0));
        assert_eq!(lk_two_colour(&g, 1), Ok(None));
        assert!(matches!(v2_skein(&g), Err(SkeinError::LinkingMismatch { .. })));
    }
}
