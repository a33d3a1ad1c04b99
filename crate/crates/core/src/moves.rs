//! Reidemeister and base-point moves on realizable Gauss diagrams.
//!
//! Faces of the underlying plane curve are recovered from the diagram: the
//! sign of a crossing fixes the cyclic order of its four half-edges, and
//! tracing faces of that rotation system gives the regions of the plane.
//! Moves are then only offered where a region makes them possible.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::gauss::{End, Endpoint, GaussDiagram, Shape, Sign};
use crate::notation::{from_braid, Braid};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MoveError {
    #[error("move site does not apply to this diagram: {0}")]
    InvalidSite(String),
    #[error("diagram is not realizable by a plane curve")]
    NotPlanar,
}

/// A side of an edge, walked with the region on the left.
///
/// Edge `k` runs from endpoint `k` to endpoint `k + 1` of the based order;
/// the last edge wraps through the base point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dart {
    pub edge: usize,
    pub forward: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MoveSite {
    /// New kink inserted before endpoint `gap` (`gap = 2n` appends).
    R1Insert { gap: usize, sign: Sign, tail_first: bool },
    R1Remove { id: u32 },
    /// A finger of `first.edge` pushed across the region to pass over
    /// (`first_over`) or under `second.edge`. Both darts bound one region.
    R2Insert { first: Dart, second: Dart, first_over: bool },
    R2Remove { ids: [u32; 2] },
    R3 { ids: [u32; 3] },
    /// Moves the base point past one endpoint, forward or backward.
    BasePoint { forward: bool },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MoveKind {
    R1Insert,
    R1Remove,
    R2Insert,
    R2Remove,
    R3,
    BasePoint,
}

impl MoveSite {
    pub fn kind(&self) -> MoveKind {
        match self {
            MoveSite::R1Insert { .. } => MoveKind::R1Insert,
            MoveSite::R1Remove { .. } => MoveKind::R1Remove,
            MoveSite::R2Insert { .. } => MoveKind::R2Insert,
            MoveSite::R2Remove { .. } => MoveKind::R2Remove,
            MoveSite::R3 { .. } => MoveKind::R3,
            MoveSite::BasePoint { .. } => MoveKind::BasePoint,
        }
    }
}

struct Skeleton {
    seq: Vec<Endpoint>,
    ids: Vec<u32>,
    signs: Vec<Sign>,
    shape: Shape,
}

impl Skeleton {
    fn of(g: &GaussDiagram) -> Skeleton {
        let (seq, ids, signs) = g.skeleton();
        Skeleton { seq, ids, signs, shape: g.shape() }
    }

    fn build(self, provenance: &str) -> GaussDiagram {
        // drop chords that no longer appear and renumber
        let mut keep = vec![usize::MAX; self.ids.len()];
        let mut ids = Vec::new();
        let mut signs = Vec::new();
        let seq: Vec<Endpoint> = self
            .seq
            .iter()
            .map(|e| {
                if keep[e.chord] == usize::MAX {
                    keep[e.chord] = ids.len();
                    ids.push(self.ids[e.chord]);
                    signs.push(self.signs[e.chord]);
                }
                Endpoint { chord: keep[e.chord], end: e.end }
            })
            .collect();
        GaussDiagram::from_sequence(self.shape, &seq, &ids, &signs)
            .expect("moves keep a valid pairing")
            .with_provenance(provenance.to_string())
    }

    fn fresh_id(&self) -> u32 {
        self.ids.iter().copied().max().unwrap_or(0) + 1
    }

    fn chord_of(&self, id: u32) -> Option<usize> {
        self.ids.iter().position(|&x| x == id)
    }
}

/// Regions of the plane curve underlying `g`, each as a cycle of darts.
pub fn faces(g: &GaussDiagram) -> Result<Vec<Vec<Dart>>, MoveError> {
    let m = 2 * g.len();
    if m == 0 {
        return Ok(Vec::new());
    }
    // half-edge 2k arrives at endpoint k, 2k+1 leaves it
    let incoming = |k: usize| 2 * k;
    let outgoing = |k: usize| 2 * k + 1;
    let mut place = vec![(0usize, 0usize); 2 * m];
    let mut rotation = vec![[0usize; 4]; g.len()];
    for (c, rot) in rotation.iter_mut().enumerate() {
        let (t, h) = g.slots(c);
        *rot = match g.sign(c) {
            Sign::Positive => [outgoing(t), outgoing(h), incoming(t), incoming(h)],
            Sign::Negative => [outgoing(h), outgoing(t), incoming(h), incoming(t)],
        };
        for (i, &he) in rot.iter().enumerate() {
            place[he] = (c, i);
        }
    }
    let dart_index = |d: Dart| 2 * d.edge + (!d.forward) as usize;
    let mut seen = vec![false; 2 * m];
    let mut out = Vec::new();
    for start in 0..2 * m {
        if seen[start] {
            continue;
        }
        let mut face = Vec::new();
        let mut d = Dart { edge: start / 2, forward: start % 2 == 0 };
        while !seen[dart_index(d)] {
            seen[dart_index(d)] = true;
            face.push(d);
            let arrive = if d.forward { incoming((d.edge + 1) % m) } else { outgoing(d.edge) };
            let (c, i) = place[arrive];
            let leave = rotation[c][(i + 3) % 4];
            let k = leave / 2;
            d = if leave % 2 == 1 {
                Dart { edge: k, forward: true }
            } else {
                Dart { edge: (k + m - 1) % m, forward: false }
            };
        }
        out.push(face);
    }
    if out.len() != g.len() + 2 {
        return Err(MoveError::NotPlanar);
    }
    Ok(out)
}

/// Whether `g` passes the planarity test for its own rotation system.
pub fn is_realizable(g: &GaussDiagram) -> bool {
    faces(g).is_ok()
}

/// Every site applicable to `g`.
pub fn sites(g: &GaussDiagram) -> Result<Vec<MoveSite>, MoveError> {
    let mut out = Vec::new();
    for kind in [
        MoveKind::R1Insert,
        MoveKind::R1Remove,
        MoveKind::R2Insert,
        MoveKind::R2Remove,
        MoveKind::R3,
        MoveKind::BasePoint,
    ] {
        out.extend(sites_of_kind(g, kind)?);
    }
    Ok(out)
}

pub fn sites_of_kind(g: &GaussDiagram, kind: MoveKind) -> Result<Vec<MoveSite>, MoveError> {
    let m = 2 * g.len();
    let seq = g.endpoints();
    let mut out = Vec::new();
    match kind {
        MoveKind::R1Insert => {
            for gap in 0..=m {
                for sign in [Sign::Positive, Sign::Negative] {
                    for tail_first in [true, false] {
                        out.push(MoveSite::R1Insert { gap, sign, tail_first });
                    }
                }
            }
        }
        MoveKind::R1Remove => {
            for c in 0..g.len() {
                let (t, h) = g.slots(c);
                let (lo, hi) = if t < h { (t, h) } else { (h, t) };
                if hi - lo == 1 || (lo == 0 && hi == m - 1) {
                    out.push(MoveSite::R1Remove { id: g.chords()[c].id });
                }
            }
        }
        MoveKind::R2Insert => {
            if m == 0 {
                // the lone circle: both darts on its single edge
                let d = Dart { edge: 0, forward: true };
                for first_over in [true, false] {
                    out.push(MoveSite::R2Insert { first: d, second: d, first_over });
                }
            }
            for face in faces(g)? {
                for &first in &face {
                    for &second in &face {
                        if first.edge != second.edge {
                            for first_over in [true, false] {
                                out.push(MoveSite::R2Insert { first, second, first_over });
                            }
                        }
                    }
                }
            }
        }
        MoveKind::R2Remove => {
            for face in faces(g)? {
                if face.len() != 2 || face[0].edge == face[1].edge {
                    continue;
                }
                let ends = |e: usize| (seq[e], seq[(e + 1) % m]);
                let (a0, a1) = ends(face[0].edge);
                if a0.chord == a1.chord {
                    continue;
                }
                let over = a0.end == End::Tail && a1.end == End::Tail;
                let under = a0.end == End::Head && a1.end == End::Head;
                // strands that would fuse into one edge are left to R1
                let gap = (face[1].edge + m - face[0].edge) % m;
                let fused = m > 4 && (gap == 2 || gap == m - 2);
                if (over || under) && !fused && g.sign(a0.chord) != g.sign(a1.chord) {
                    let ids = [g.chords()[a0.chord].id, g.chords()[a1.chord].id];
                    out.push(MoveSite::R2Remove { ids });
                }
            }
        }
        MoveKind::R3 => {
            for face in faces(g)? {
                if let Some(ids) = r3_triangle(g, &face) {
                    out.push(MoveSite::R3 { ids });
                }
            }
        }
        MoveKind::BasePoint => {
            if m > 0 {
                out.push(MoveSite::BasePoint { forward: true });
                out.push(MoveSite::BasePoint { forward: false });
            }
        }
    }
    Ok(out)
}

fn r3_triangle(g: &GaussDiagram, face: &[Dart]) -> Option<[u32; 3]> {
    let m = 2 * g.len();
    if face.len() != 3 || face.iter().any(|d| d.edge == m - 1) {
        return None;
    }
    let seq = g.endpoints();
    let mut chords = Vec::new();
    let mut kinds = Vec::new();
    for d in face {
        let (a, b) = (seq[d.edge], seq[d.edge + 1]);
        if a.chord == b.chord {
            return None;
        }
        chords.extend([a.chord, b.chord]);
        kinds.push(match (a.end, b.end) {
            (End::Tail, End::Tail) => 0,
            (End::Head, End::Head) => 2,
            _ => 1,
        });
    }
    chords.sort_unstable();
    chords.dedup();
    kinds.sort_unstable();
    if chords.len() != 3 || kinds != [0, 1, 2] {
        return None;
    }
    let mut ids = [0; 3];
    for (slot, c) in ids.iter_mut().zip(chords) {
        *slot = g.chords()[c].id;
    }
    ids.sort_unstable();
    Some(ids)
}

/// Applies a move, returning the new diagram.
pub fn apply(g: &GaussDiagram, site: &MoveSite) -> Result<GaussDiagram, MoveError> {
    apply_core(g, site).map(|(h, _)| h)
}

/// Applies a move and returns a site on the result that undoes it, up to
/// the position of the base point.
pub fn apply_with_inverse(
    g: &GaussDiagram,
    site: &MoveSite,
) -> Result<(GaussDiagram, MoveSite), MoveError> {
    let (h, inverse) = apply_core(g, site)?;
    match (inverse, site) {
        (Some(inv), _) => Ok((h, inv)),
        (None, MoveSite::R2Remove { ids }) => {
            let inv = reinsertion(&h, g, *ids)?;
            Ok((h, inv))
        }
        (None, _) => unreachable!("only removals defer their inverse"),
    }
}

fn apply_core(g: &GaussDiagram, site: &MoveSite) -> Result<(GaussDiagram, Option<MoveSite>), MoveError> {
    let invalid = || MoveError::InvalidSite(format!("{site:?}"));
    let m = 2 * g.len();
    let mut sk = Skeleton::of(g);
    let inverse;
    match *site {
        MoveSite::R1Insert { gap, sign, tail_first } => {
            if gap > m {
                return Err(invalid());
            }
            let id = sk.fresh_id();
            let c = sk.ids.len();
            sk.ids.push(id);
            sk.signs.push(sign);
            let (first, second) = if tail_first { (End::Tail, End::Head) } else { (End::Head, End::Tail) };
            sk.seq.splice(
                gap..gap,
                [Endpoint { chord: c, end: first }, Endpoint { chord: c, end: second }],
            );
            inverse = MoveSite::R1Remove { id };
        }
        MoveSite::R1Remove { id } => {
            if !sites_of_kind(g, MoveKind::R1Remove)?.contains(site) {
                return Err(invalid());
            }
            let c = sk.chord_of(id).ok_or_else(invalid)?;
            let first = sk.seq.iter().position(|e| e.chord == c).expect("chord present");
            let last = sk.seq.iter().rposition(|e| e.chord == c).expect("chord present");
            // a kink across the base point comes back appended at the end,
            // which agrees with the original up to moving the base point
            let (gap, lead) = if last - first == 1 { (first, first) } else { (m - 2, last) };
            let tail_first = sk.seq[lead].end == End::Tail;
            inverse = MoveSite::R1Insert { gap, sign: sk.signs[c], tail_first };
            sk.seq.retain(|e| e.chord != c);
        }
        MoveSite::R2Insert { first, second, first_over } if m == 0 => {
            if first != (Dart { edge: 0, forward: true }) || second != first {
                return Err(invalid());
            }
            let sign_a = if first_over { Sign::Positive } else { Sign::Negative };
            let (end1, end2) = if first_over { (End::Tail, End::Head) } else { (End::Head, End::Tail) };
            sk.ids = vec![1, 2];
            sk.signs = vec![sign_a, -sign_a];
            sk.seq = vec![
                Endpoint { chord: 1, end: end2 },
                Endpoint { chord: 0, end: end2 },
                Endpoint { chord: 0, end: end1 },
                Endpoint { chord: 1, end: end1 },
            ];
            inverse = MoveSite::R2Remove { ids: [1, 2] };
        }
        MoveSite::R2Insert { first, second, first_over } => {
            if first.edge == second.edge || first.edge >= m.max(1) || second.edge >= m.max(1) {
                return Err(invalid());
            }
            let faces = faces(g)?;
            if !faces.iter().any(|f| f.contains(&first) && f.contains(&second)) {
                return Err(invalid());
            }
            let s = |d: Dart| if d.forward { 1 } else { -1 };
            let product = s(first) * s(second);
            let sign_a = Sign::from_value(if first_over { product } else { -product }).unwrap();
            let (id_a, id_b) = (sk.fresh_id(), sk.fresh_id() + 1);
            let (ca, cb) = (sk.ids.len(), sk.ids.len() + 1);
            sk.ids.extend([id_a, id_b]);
            sk.signs.extend([sign_a, -sign_a]);
            let end1 = if first_over { End::Tail } else { End::Head };
            let along = |a: usize, b: usize, end: End| {
                [Endpoint { chord: a, end }, Endpoint { chord: b, end }]
            };
            let on_first = if first.forward { along(ca, cb, end1) } else { along(cb, ca, end1) };
            let on_second = if second.forward {
                along(cb, ca, end1.opposite())
            } else {
                along(ca, cb, end1.opposite())
            };
            let mut pieces = [(first.edge + 1, on_first), (second.edge + 1, on_second)];
            pieces.sort_by_key(|p| std::cmp::Reverse(p.0));
            for (at, piece) in pieces {
                sk.seq.splice(at..at, piece);
            }
            inverse = MoveSite::R2Remove { ids: [id_a, id_b] };
        }
        MoveSite::R2Remove { ids } => {
            let mut found = sites_of_kind(g, MoveKind::R2Remove)?.into_iter().filter_map(|s| match s {
                MoveSite::R2Remove { ids: found } => Some(found),
                _ => None,
            });
            let same = |f: [u32; 2]| f == ids || f == [ids[1], ids[0]];
            if !found.any(same) {
                return Err(invalid());
            }
            let removed = [sk.chord_of(ids[0]).unwrap(), sk.chord_of(ids[1]).unwrap()];
            sk.seq.retain(|e| !removed.contains(&e.chord));
            return Ok((sk.build(g.provenance()), None));
        }
        MoveSite::R3 { ids } => {
            let mut want = ids;
            want.sort_unstable();
            let ok = sites_of_kind(g, MoveKind::R3)?.iter().any(|s| match s {
                MoveSite::R3 { ids: found } => *found == want,
                _ => false,
            });
            if !ok {
                return Err(invalid());
            }
            let chords: Vec<usize> = want.iter().map(|&id| sk.chord_of(id).unwrap()).collect();
            let faces = faces(g)?;
            let face = faces
                .iter()
                .find(|f| r3_triangle(g, f) == Some(want))
                .expect("site was listed");
            for d in face {
                let (a, b) = (d.edge, d.edge + 1);
                debug_assert!(chords.contains(&sk.seq[a].chord));
                sk.seq.swap(a, b);
            }
            inverse = MoveSite::R3 { ids: want };
        }
        MoveSite::BasePoint { forward } => {
            if m == 0 {
                return Err(invalid());
            }
            let h = g.rotated(if forward { 1 } else { m - 1 });
            return Ok((h, Some(MoveSite::BasePoint { forward: !forward })));
        }
    }
    let h = sk.build(g.provenance());
    if !is_realizable(&h) {
        return Err(MoveError::NotPlanar);
    }
    Ok((h, Some(inverse)))
}

// Finds the R2 insertion on `h` that recreates `g`, where `h` is `g` with
// the bigon crossings `ids` removed.
fn reinsertion(h: &GaussDiagram, g: &GaussDiagram, ids: [u32; 2]) -> Result<MoveSite, MoveError> {
    let m = 2 * g.len();
    let removed = [g.chord_index(ids[0]).unwrap(), g.chord_index(ids[1]).unwrap()];
    let gone = |i: usize| removed.contains(&g.endpoints()[i % m].chord);
    // h-edges that absorbed the two strands of the bigon
    let mut merged = Vec::new();
    for i in 0..m {
        if gone(i) && gone(i + 1) && !gone(i + m - 1) {
            let before = (i + m - 1) % m;
            let shift = (0..before).filter(|&k| gone(k)).count();
            merged.push(before - shift);
        }
    }
    let candidates = sites_of_kind(h, MoveKind::R2Insert)?;
    let mut fallback = None;
    for site in candidates {
        let MoveSite::R2Insert { first, second, .. } = site else { continue };
        if !h.is_empty() && !(merged.contains(&first.edge) && merged.contains(&second.edge)) {
            continue;
        }
        if let Ok(candidate) = apply(h, &site) {
            if candidate.to_gauss_code() == g.to_gauss_code() {
                return Ok(site);
            }
            if fallback.is_none() && same_cyclic(&candidate, g) {
                fallback = Some(site);
            }
        }
    }
    fallback.ok_or_else(|| MoveError::InvalidSite("no inverse insertion found".into()))
}

/// Equality of endpoint sequences up to moving the base point.
pub fn same_cyclic(a: &GaussDiagram, b: &GaussDiagram) -> bool {
    a.len() == b.len()
        && (0..(2 * a.len()).max(1)).any(|k| a.rotated(k).to_gauss_code() == b.to_gauss_code())
}

/// Weights for drawing random moves: R2 insert, R2 remove, R1, R3, base point.
#[derive(Clone, Copy, Debug)]
pub struct MoveMix {
    pub r2_insert: f64,
    pub r2_remove: f64,
    pub r1: f64,
    pub r3: f64,
    pub base_point: f64,
}

impl Default for MoveMix {
    fn default() -> MoveMix {
        MoveMix { r2_insert: 0.4, r2_remove: 0.2, r1: 0.2, r3: 0.2, base_point: 0.0 }
    }
}

/// Draws a random applicable site. Falls back to an R1 insertion, which is
/// always possible.
pub fn random_site<R: Rng>(rng: &mut R, g: &GaussDiagram, mix: MoveMix) -> Result<MoveSite, MoveError> {
    let total = mix.r2_insert + mix.r2_remove + mix.r1 + mix.r3 + mix.base_point;
    let mut x = rng.gen::<f64>() * total;
    let mut pick = |w: f64| {
        let hit = x < w;
        x -= w;
        hit
    };
    let kind = if pick(mix.r2_insert) {
        MoveKind::R2Insert
    } else if pick(mix.r2_remove) {
        MoveKind::R2Remove
    } else if pick(mix.r1) {
        if rng.gen_bool(0.5) {
            MoveKind::R1Insert
        } else {
            MoveKind::R1Remove
        }
    } else if pick(mix.r3) {
        MoveKind::R3
    } else {
        MoveKind::BasePoint
    };
    let options = sites_of_kind(g, kind)?;
    match options.choose(rng) {
        Some(s) => Ok(s.clone()),
        None => Ok(sites_of_kind(g, MoveKind::R1Insert)?
            .choose(rng)
            .expect("R1 insertion always applies")
            .clone()),
    }
}

/// A random braid with `letters` letters on 2 to 5 strands whose closure is
/// a knot.
pub fn random_knot_braid<R: Rng>(rng: &mut R, letters: usize) -> Braid {
    if letters == 0 {
        return Braid::new(Vec::new());
    }
    loop {
        let strands = rng.gen_range(2..=5usize.min(letters + 1));
        let word: Vec<i32> = (0..letters)
            .map(|_| {
                let i = rng.gen_range(1..strands as i32);
                if rng.gen_bool(0.5) {
                    i
                } else {
                    -i
                }
            })
            .collect();
        let b = Braid::with_strands(strands, word);
        if b.strands() == strands && b.is_knot() {
            return b;
        }
    }
}

/// Deterministic random realizable diagram: a random braid closure followed
/// by `moves` random moves.
pub fn random_realizable(seed: u64, letters: usize, moves: usize) -> GaussDiagram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let braid = random_knot_braid(&mut rng, letters);
    let mut g = from_braid(&braid).expect("braid closes to a knot");
    for _ in 0..moves {
        let site = random_site(&mut rng, &g, MoveMix::default()).expect("generated diagrams are planar");
        g = apply(&g, &site).expect("listed sites apply");
    }
    g.with_provenance(format!("seed={seed} braid=[{braid}] moves={moves}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::casson::v2_gauss;
    use crate::notation::{from_braid_word, parse_gauss_code};

    #[test]
    fn face_counts() {
        let trefoil = from_braid_word("s1 s1 s1").unwrap();
        let f = faces(&trefoil).unwrap();
        assert_eq!(f.len(), 5);
        assert_eq!(f.iter().map(Vec::len).sum::<usize>(), 12);
        let mut sizes: Vec<usize> = f.iter().map(Vec::len).collect();
        sizes.sort();
        assert_eq!(sizes, vec![2, 2, 2, 3, 3]);
    }

    #[test]
    fn rejects_virtual_pair() {
        let g = parse_gauss_code("O1+U2+U1+O2+").unwrap();
        assert!(!is_realizable(&g));
    }

    #[test]
    fn r1_on_empty() {
        let g = GaussDiagram::empty(Shape::Closed);
        let h = apply(&g, &MoveSite::R1Insert { gap: 0, sign: Sign::Positive, tail_first: true }).unwrap();
        assert_eq!(h.to_gauss_code(), "O1+U1+");
    }

    #[test]
    fn every_site_is_invertible_on_trefoil() {
        let g = from_braid_word("s1 s1 s1").unwrap();
        for site in sites(&g).unwrap() {
            let (h, back) = apply_with_inverse(&g, &site).unwrap();
            assert_eq!(v2_gauss(&h), 1, "{site:?}");
            let again = apply(&h, &back).unwrap();
            assert_eq!(again.to_gauss_code(), g.to_gauss_code(), "{site:?} then {back:?}");
        }
    }

    #[test]
    fn deterministic_generation() {
        let a = random_realizable(7, 8, 15);
        let b = random_realizable(7, 8, 15);
        assert_eq!(a.to_gauss_code(), b.to_gauss_code());
        assert!(random_realizable(1, 0, 0).is_empty());
    }
}
