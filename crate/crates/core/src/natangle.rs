//! Knot diagrams cut into horizontal strips, each holding one cap, cup,
//! crossing or associator, with v₂ read off signed associator counts.
//!
//! A horizontal slice meets the curve in a row of points. Between strips
//! no three of them are evenly spaced, so the gaps between neighbours are
//! ordered by size and the row is bracketed: the largest gap splits it
//! into two clusters, the largest gap inside each cluster splits it again,
//! and so on down to single points. Caps and crossings act on a pair of
//! points bracketed together. An associator is a strip where a cluster of
//! exactly three single points changes from `(ab)c` to `a(bc)` or back;
//! nothing else may change the bracketing.
//!
//! Text form, one event per line (or separated by `;`), bottom to top:
//!
//! ```text
//! MAX@i:u      cap joining strands i and i+1; u/d is the direction of strand i
//! MIN@i:d      cup creating new strands i and i+1; u/d is the direction of strand i
//! MIN@i:d:R1   same, with the new pair attached one level above its right neighbour
//! X@i:+:o      crossing of strands i and i+1; writhe sign; o if strand i is over, u if under
//! A@i:L        associator on strands i..i+2; L turns (ab)c into a(bc), R the reverse
//! closed       the word describes a closed knot (starts and ends with no strands)
//! ```
//!
//! Positions are 1-based and refer to the row below the event, except for
//! `MIN` where they give the new strands' positions above it. A cup's new
//! pair sits next to a cluster containing its left (`L`) or right (`R`)
//! neighbour; level 0 is the neighbour alone, each further level the next
//! enclosing cluster that still ends at that neighbour. Without the suffix
//! the pair hugs its left neighbour, or its right one at the left edge.
//! Lines starting with `#` are ignored.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::gauss::{End, Endpoint, GaussDiagram, Shape, Sign};
use crate::morse::{all_equal, exact_div, MorseError};
use crate::pairing::{bracket_sum, PatternSum};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TangleError {
    #[error("line {line}: cannot parse {text:?}")]
    Syntax { line: usize, text: String },
    #[error("event {event}: position {pos} is out of range for {strands} strands")]
    Position { event: usize, pos: usize, strands: usize },
    #[error("event {event}: an associator needs three strands, there are {strands}")]
    TooFewStrands { event: usize, strands: usize },
    #[error("event {event}: strands {pos} and {next} are not bracketed together")]
    NotClosest { event: usize, pos: usize, next: usize },
    #[error("event {event}: strands {pos}..{} do not form a cluster of three", pos + 2)]
    NotCluster { event: usize, pos: usize },
    #[error("event {event}: associator type does not match the current bracketing")]
    WrongAssociator { event: usize },
    #[error("event {event}: the cup cannot be attached there")]
    BadAttach { event: usize },
    #[error("expected {want} strand(s) at the {end}, found {got}")]
    Ends { end: &'static str, want: usize, got: usize },
    #[error("the word traces more than one component")]
    MultipleComponents,
    #[error("event {event}: declared {what} does not match the traced curve")]
    Mismatch { event: usize, what: &'static str },
}

/// Left or right. For an associator: which way the bracketing flips,
/// reading upwards.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    /// `(ab)c` below, `a(bc)` above.
    Left,
    /// `a(bc)` below, `(ab)c` above.
    Right,
}

/// Where a cup's new pair enters the bracketing: as the sibling of the
/// cluster `level` steps above the neighbouring point on side `toward`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Attach {
    pub toward: Side,
    pub level: usize,
}

impl Attach {
    /// Hug the left neighbour, or the right one when there is none.
    pub fn default_at(pos: usize) -> Attach {
        Attach { toward: if pos > 0 { Side::Left } else { Side::Right }, level: 0 }
    }
}

/// One strip. Positions are 0-based here.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TangleEvent {
    Max { pos: usize, up: bool },
    Min { pos: usize, up: bool, attach: Attach },
    Cross { pos: usize, sign: Sign, left_over: bool },
    Assoc { pos: usize, side: Side },
}

impl fmt::Display for TangleEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ud = |up: bool| if up { 'u' } else { 'd' };
        let lr = |s: Side| if s == Side::Left { 'L' } else { 'R' };
        match *self {
            TangleEvent::Max { pos, up } => write!(f, "MAX@{}:{}", pos + 1, ud(up)),
            TangleEvent::Min { pos, up, attach } => {
                write!(f, "MIN@{}:{}", pos + 1, ud(up))?;
                if attach != Attach::default_at(pos) {
                    write!(f, ":{}{}", lr(attach.toward), attach.level)?;
                }
                Ok(())
            }
            TangleEvent::Cross { pos, sign, left_over } => {
                write!(f, "X@{}:{}:{}", pos + 1, sign.symbol(), if left_over { 'o' } else { 'u' })
            }
            TangleEvent::Assoc { pos, side } => write!(f, "A@{}:{}", pos + 1, lr(side)),
        }
    }
}

/// Elements of the symmetric group on three branches, in cycle notation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Perm3 {
    Id,
    T12,
    T13,
    T23,
    C123,
    C132,
}

impl Perm3 {
    pub const ALL: [Perm3; 6] = [Perm3::Id, Perm3::T12, Perm3::T13, Perm3::T23, Perm3::C123, Perm3::C132];

    /// From images of 1, 2, 3 (0-based values).
    pub fn from_images(images: [usize; 3]) -> Perm3 {
        match images {
            [0, 1, 2] => Perm3::Id,
            [1, 0, 2] => Perm3::T12,
            [2, 1, 0] => Perm3::T13,
            [0, 2, 1] => Perm3::T23,
            [1, 2, 0] => Perm3::C123,
            [2, 0, 1] => Perm3::C132,
            _ => panic!("not a permutation of three elements: {images:?}"),
        }
    }

    pub fn images(self) -> [usize; 3] {
        match self {
            Perm3::Id => [0, 1, 2],
            Perm3::T12 => [1, 0, 2],
            Perm3::T13 => [2, 1, 0],
            Perm3::T23 => [0, 2, 1],
            Perm3::C123 => [1, 2, 0],
            Perm3::C132 => [2, 0, 1],
        }
    }

    pub fn sign(self) -> i64 {
        match self {
            Perm3::Id | Perm3::C123 | Perm3::C132 => 1,
            _ => -1,
        }
    }

    pub fn inverse(self) -> Perm3 {
        match self {
            Perm3::C123 => Perm3::C132,
            Perm3::C132 => Perm3::C123,
            p => p,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Perm3::Id => "1",
            Perm3::T12 => "(1,2)",
            Perm3::T13 => "(1,3)",
            Perm3::T23 => "(2,3)",
            Perm3::C123 => "(1,2,3)",
            Perm3::C132 => "(1,3,2)",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// Sign of a [`Side::Left`] associator with no upward branch and branches
/// met left to right in source order. Fixed by requiring the three
/// long-knot formulas to agree with the Gauss-diagram value.
pub const LEFT_SIDE_SIGN: i64 = -1;

/// Gap sizes of a row, kept only as ranks. A pair of points is bracketed
/// together when its gap is smaller than both neighbouring gaps.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Spacing {
    points: usize,
    gaps: Vec<u32>,
}

impl Spacing {
    fn start(shape: Shape) -> Spacing {
        Spacing { points: if shape == Shape::Long { 1 } else { 0 }, gaps: Vec::new() }
    }

    fn set(&mut self, values: Vec<u64>) {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by_key(|&i| values[i]);
        self.gaps = vec![0; values.len()];
        for (rank, i) in order.into_iter().enumerate() {
            self.gaps[i] = rank as u32;
        }
    }

    fn values(&self) -> Vec<u64> {
        self.gaps.iter().map(|&g| 4 * g as u64 + 4).collect()
    }

    fn pair(&self, g: usize) -> bool {
        g + 1 < self.points
            && (g == 0 || self.gaps[g - 1] > self.gaps[g])
            && self.gaps.get(g + 1).map_or(true, |&h| h > self.gaps[g])
    }

    fn cluster(&self, g: usize) -> bool {
        if g + 2 >= self.points {
            return false;
        }
        let inner = self.gaps[g].max(self.gaps[g + 1]);
        (g == 0 || self.gaps[g - 1] > inner) && self.gaps.get(g + 2).map_or(true, |&h| h > inner)
    }

    fn side(&self, g: usize) -> Side {
        if self.gaps[g] < self.gaps[g + 1] {
            Side::Left
        } else {
            Side::Right
        }
    }

    fn rotate(&mut self, g: usize) {
        self.gaps.swap(g, g + 1);
    }

    /// Removes the pair at gap `g`; the remaining neighbours are as far
    /// apart as the larger of their old gaps to the pair.
    fn cap(&mut self, g: usize) {
        let n = self.gaps.len();
        let mut v = self.values();
        if n == 1 {
            v.clear();
        } else if g == 0 {
            v.drain(0..2);
        } else if g == n - 1 {
            v.drain(n - 2..);
        } else {
            let merged = v[g - 1].max(v[g + 1]);
            v.splice(g - 1..g + 2, [merged]);
        }
        self.points -= 2;
        self.set(v);
    }

    /// Gap sizes of the clusters ending at the neighbour on side `toward`
    /// of insertion point `pos`, innermost first, that stay inside the gap
    /// being split. `None` when there is no neighbour on that side.
    fn spine(&self, pos: usize, toward: Side) -> Option<Vec<u64>> {
        let v = self.values();
        let (bound, scan): (Option<u64>, Vec<usize>) = match toward {
            Side::Left => {
                if pos == 0 {
                    return None;
                }
                ((pos < self.points).then(|| v[pos - 1]), (0..pos - 1).rev().collect())
            }
            Side::Right => {
                if pos >= self.points {
                    return None;
                }
                ((pos > 0).then(|| v[pos - 1]), (pos..v.len()).collect())
            }
        };
        let mut out: Vec<u64> = Vec::new();
        for k in scan {
            if bound.is_some_and(|b| v[k] > b) {
                break;
            }
            if out.last().map_or(true, |&m| v[k] > m) {
                out.push(v[k]);
            }
        }
        Some(out)
    }

    /// Number of levels a cup at `pos` may attach at on side `toward`.
    fn levels(&self, pos: usize, toward: Side) -> usize {
        if self.points == 0 {
            return 1;
        }
        self.spine(pos, toward).map_or(0, |s| s.len() + 1)
    }

    fn cup(&mut self, pos: usize, attach: Attach) -> bool {
        if pos > self.points {
            return false;
        }
        if self.points == 0 {
            if attach.level != 0 {
                return false;
            }
            self.points = 2;
            self.gaps = vec![0];
            return true;
        }
        let Some(spine) = self.spine(pos, attach.toward) else { return false };
        if attach.level > spine.len() {
            return false;
        }
        let near = if attach.level == 0 { 0 } else { spine[attach.level - 1] } + 2;
        let v = self.values();
        let split = (pos > 0 && pos < self.points).then(|| v[pos - 1]);
        let mut out = v[..pos.saturating_sub(1)].to_vec();
        match attach.toward {
            Side::Left => {
                out.push(near);
                out.push(0);
                out.extend(split);
            }
            Side::Right => {
                out.extend(split);
                out.push(0);
                out.push(near);
            }
        }
        if pos < self.points {
            out.extend_from_slice(&v[pos..]);
        }
        self.points += 2;
        self.set(out);
        true
    }
}

/// A validated word with the traced curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangleWord {
    shape: Shape,
    events: Vec<TangleEvent>,
    /// For every row between strips, `(visit time, upward)` per strand.
    rows: Vec<Vec<(usize, bool)>>,
}

fn check_spacing(shape: Shape, events: &[TangleEvent]) -> Result<(), TangleError> {
    let mut sp = Spacing::start(shape);
    for (k, e) in events.iter().enumerate() {
        let event = k + 1;
        let points = sp.points;
        match *e {
            TangleEvent::Max { pos, .. } | TangleEvent::Cross { pos, .. } => {
                if pos + 1 >= points {
                    return Err(TangleError::Position { event, pos: pos + 1, strands: points });
                }
                if !sp.pair(pos) {
                    return Err(TangleError::NotClosest { event, pos: pos + 1, next: pos + 2 });
                }
                if let TangleEvent::Max { .. } = e {
                    sp.cap(pos);
                }
            }
            TangleEvent::Min { pos, attach, .. } => {
                if pos > points {
                    return Err(TangleError::Position { event, pos: pos + 1, strands: points });
                }
                if !sp.cup(pos, attach) {
                    return Err(TangleError::BadAttach { event });
                }
            }
            TangleEvent::Assoc { pos, side } => {
                if points < 3 {
                    return Err(TangleError::TooFewStrands { event, strands: points });
                }
                if pos + 2 >= points {
                    return Err(TangleError::Position { event, pos: pos + 1, strands: points });
                }
                if !sp.cluster(pos) {
                    return Err(TangleError::NotCluster { event, pos: pos + 1 });
                }
                if sp.side(pos) != side {
                    return Err(TangleError::WrongAssociator { event });
                }
                sp.rotate(pos);
            }
        }
    }
    let want = if shape == Shape::Long { 1 } else { 0 };
    if sp.points != want {
        return Err(TangleError::Ends { end: "top", want, got: sp.points });
    }
    Ok(())
}

fn widths(shape: Shape, events: &[TangleEvent]) -> Vec<usize> {
    let mut w: usize = if shape == Shape::Long { 1 } else { 0 };
    let mut out = vec![w];
    for e in events {
        match e {
            TangleEvent::Max { .. } => w = w.saturating_sub(2),
            TangleEvent::Min { .. } => w += 2,
            _ => {}
        }
        out.push(w);
    }
    out
}

impl TangleWord {
    pub fn new(shape: Shape, events: Vec<TangleEvent>) -> Result<TangleWord, TangleError> {
        check_spacing(shape, &events)?;
        let rows = trace(shape, &events)?;
        let word = TangleWord { shape, events, rows };
        word.check_declarations()?;
        Ok(word)
    }

    /// Like [`new`](Self::new), but takes directions and crossing signs
    /// from the traced curve instead of checking them.
    pub fn oriented(shape: Shape, mut events: Vec<TangleEvent>) -> Result<TangleWord, TangleError> {
        check_spacing(shape, &events)?;
        let rows = trace(shape, &events)?;
        for (k, e) in events.iter_mut().enumerate() {
            match e {
                TangleEvent::Max { pos, up } => *up = rows[k][*pos].1,
                TangleEvent::Min { pos, up, .. } => *up = rows[k + 1][*pos].1,
                TangleEvent::Cross { pos, sign, left_over } => {
                    *sign = crossing_writhe(rows[k][*pos].1, rows[k][*pos + 1].1, *left_over)
                }
                TangleEvent::Assoc { .. } => {}
            }
        }
        Ok(TangleWord { shape, events, rows })
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn events(&self) -> &[TangleEvent] {
        &self.events
    }

    /// Direction of the strand at `pos` in the row below event `k`.
    fn upward(&self, k: usize, pos: usize) -> bool {
        self.rows[k][pos].1
    }

    fn time(&self, k: usize, pos: usize) -> usize {
        self.rows[k][pos].0
    }

    fn check_declarations(&self) -> Result<(), TangleError> {
        for (k, e) in self.events.iter().enumerate() {
            let event = k + 1;
            match *e {
                TangleEvent::Max { pos, up } => {
                    if self.upward(k, pos) != up {
                        return Err(TangleError::Mismatch { event, what: "direction" });
                    }
                }
                TangleEvent::Min { pos, up, .. } => {
                    if self.upward(k + 1, pos) != up {
                        return Err(TangleError::Mismatch { event, what: "direction" });
                    }
                }
                TangleEvent::Cross { pos, sign, left_over } => {
                    if crossing_writhe(self.upward(k, pos), self.upward(k, pos + 1), left_over) != sign {
                        return Err(TangleError::Mismatch { event, what: "crossing sign" });
                    }
                }
                TangleEvent::Assoc { .. } => {}
            }
        }
        Ok(())
    }

    /// Crossings as `(event index, position, left strand passes first)`.
    fn crossings(&self) -> impl Iterator<Item = (usize, usize, bool)> + '_ {
        self.events.iter().enumerate().filter_map(move |(k, e)| match *e {
            TangleEvent::Cross { pos, .. } => Some((k, pos, self.time(k, pos) < self.time(k, pos + 1))),
            _ => None,
        })
    }

    /// Sign of the ordered pair of branch tangents at crossing event `k`.
    fn intersection_sign(&self, k: usize, pos: usize, left_first: bool) -> i64 {
        let (l, r) = (self.upward(k, pos), self.upward(k, pos + 1));
        let d = if l == r { 1 } else { -1 };
        if left_first {
            d
        } else {
            -d
        }
    }
}

fn crossing_writhe(left_up: bool, right_up: bool, left_over: bool) -> Sign {
    let same = left_up == right_up;
    if same == left_over {
        Sign::Positive
    } else {
        Sign::Negative
    }
}

/// Walks the curve through the strips, numbering every strand piece in
/// the order it is met and recording its direction.
fn trace(shape: Shape, events: &[TangleEvent]) -> Result<Vec<Vec<(usize, bool)>>, TangleError> {
    let w = widths(shape, events);
    let mut rows: Vec<Vec<Option<(usize, bool)>>> = w.iter().map(|&n| vec![None; n]).collect();
    let total: usize = w.iter().sum();
    let top = events.len();
    let (mut level, mut pos, mut up) = match shape {
        Shape::Long => (0usize, 0usize, true),
        Shape::Closed => {
            if total == 0 {
                return Ok(rows.into_iter().map(|r| r.into_iter().map(Option::unwrap).collect()).collect());
            }
            // start on the left branch of the first cup, walking up
            let k = events
                .iter()
                .position(|e| matches!(e, TangleEvent::Min { .. }))
                .expect("closed word with strands has a cup");
            let TangleEvent::Min { pos, .. } = events[k] else { unreachable!() };
            (k + 1, pos, true)
        }
    };
    let start = (level, pos, up);
    let mut time = 0;
    loop {
        if rows[level][pos].is_some() {
            break;
        }
        rows[level][pos] = Some((time, up));
        time += 1;
        if up {
            if level == top {
                break;
            }
            match events[level] {
                TangleEvent::Cross { pos: g, .. } => {
                    level += 1;
                    pos = if pos == g { g + 1 } else if pos == g + 1 { g } else { pos };
                }
                TangleEvent::Max { pos: g, .. } => {
                    if pos == g || pos == g + 1 {
                        pos = if pos == g { g + 1 } else { g };
                        up = false;
                    } else {
                        level += 1;
                        if pos > g {
                            pos -= 2;
                        }
                    }
                }
                TangleEvent::Min { pos: g, .. } => {
                    level += 1;
                    if pos >= g {
                        pos += 2;
                    }
                }
                TangleEvent::Assoc { .. } => level += 1,
            }
        } else {
            if level == 0 {
                break;
            }
            match events[level - 1] {
                TangleEvent::Cross { pos: g, .. } => {
                    level -= 1;
                    pos = if pos == g { g + 1 } else if pos == g + 1 { g } else { pos };
                }
                TangleEvent::Max { pos: g, .. } => {
                    level -= 1;
                    if pos >= g {
                        pos += 2;
                    }
                }
                TangleEvent::Min { pos: g, .. } => {
                    if pos == g || pos == g + 1 {
                        pos = if pos == g { g + 1 } else { g };
                        up = true;
                    } else {
                        level -= 1;
                        if pos > g {
                            pos -= 2;
                        }
                    }
                }
                TangleEvent::Assoc { .. } => level -= 1,
            }
        }
    }
    if shape == Shape::Long && !(level == top && up) {
        return Err(TangleError::MultipleComponents);
    }
    if shape == Shape::Closed && (level, pos, up) != start {
        return Err(TangleError::MultipleComponents);
    }
    if time != total {
        return Err(TangleError::MultipleComponents);
    }
    Ok(rows.into_iter().map(|r| r.into_iter().map(|c| c.expect("visited")).collect()).collect())
}

fn parse_attach(text: &str) -> Option<Attach> {
    let toward = match text.chars().next()? {
        'L' | 'l' => Side::Left,
        'R' | 'r' => Side::Right,
        _ => return None,
    };
    let level = text[1..].parse().ok()?;
    Some(Attach { toward, level })
}

fn parse_event(text: &str) -> Option<TangleEvent> {
    let (head, rest) = text.split_once('@')?;
    let mut parts = rest.split(':');
    let pos: usize = parts.next()?.trim().parse().ok()?;
    let pos = pos.checked_sub(1)?;
    let mut field = || parts.next().map(str::trim);
    let ud = |s: &str| match s {
        "u" | "U" => Some(true),
        "d" | "D" => Some(false),
        _ => None,
    };
    let event = match head.trim().to_ascii_uppercase().as_str() {
        "MAX" => TangleEvent::Max { pos, up: ud(field()?)? },
        "MIN" => {
            let up = ud(field()?)?;
            let attach = match field() {
                Some(a) => parse_attach(a)?,
                None => Attach::default_at(pos),
            };
            TangleEvent::Min { pos, up, attach }
        }
        "X" => {
            let sign = match field()? {
                "+" => Sign::Positive,
                "-" => Sign::Negative,
                _ => return None,
            };
            let left_over = match field()? {
                "o" | "O" => true,
                "u" | "U" => false,
                _ => return None,
            };
            TangleEvent::Cross { pos, sign, left_over }
        }
        "A" => {
            let side = match field()? {
                "L" | "l" => Side::Left,
                "R" | "r" => Side::Right,
                _ => return None,
            };
            TangleEvent::Assoc { pos, side }
        }
        _ => return None,
    };
    if parts.next().is_some() {
        return None;
    }
    Some(event)
}

/// Parses the text form; see the module documentation.
pub fn parse_tangle(text: &str) -> Result<TangleWord, TangleError> {
    let mut shape = Shape::Long;
    let mut events = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for item in line.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            if item.eq_ignore_ascii_case("closed") {
                shape = Shape::Closed;
                continue;
            }
            let e = parse_event(item).ok_or_else(|| TangleError::Syntax { line: n + 1, text: item.to_string() })?;
            events.push(e);
        }
    }
    TangleWord::new(shape, events)
}

impl FromStr for TangleWord {
    type Err = TangleError;
    fn from_str(s: &str) -> Result<Self, TangleError> {
        parse_tangle(s)
    }
}

impl fmt::Display for TangleWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.shape == Shape::Closed {
            writeln!(f, "closed")?;
        }
        for e in &self.events {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}

/// Gauss diagram of the traced knot; only crossings produce chords.
pub fn gauss_of_tangle(word: &TangleWord) -> GaussDiagram {
    let mut passages: Vec<(usize, Endpoint)> = Vec::new();
    let mut signs = Vec::new();
    for (chord, (k, pos, _)) in word.crossings().enumerate() {
        let TangleEvent::Cross { sign, left_over, .. } = word.events[k] else { unreachable!() };
        let (over, under) = if left_over { (pos, pos + 1) } else { (pos + 1, pos) };
        passages.push((word.time(k, over), Endpoint { chord, end: End::Tail }));
        passages.push((word.time(k, under), Endpoint { chord, end: End::Head }));
        signs.push(sign);
    }
    passages.sort_by_key(|p| p.0);
    let seq: Vec<Endpoint> = passages.into_iter().map(|p| p.1).collect();
    let ids: Vec<u32> = (1..=signs.len() as u32).collect();
    GaussDiagram::from_sequence(word.shape, &seq, &ids, &signs).expect("two passages per crossing")
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AssociatorStats {
    /// Signed associator counts indexed as [`Perm3::ALL`].
    pub n: [i64; 6],
    pub n_total: i64,
    pub x: i64,
    pub x_plus: i64,
    pub x_minus: i64,
    pub m: i64,
}

impl AssociatorStats {
    pub fn get(&self, p: Perm3) -> i64 {
        self.n[p.index()]
    }
}

/// One associator strip of a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Associator {
    /// Index of the event in the word.
    pub event: usize,
    /// Sends the left-to-right number of a branch to its number in
    /// source order.
    pub perm: Perm3,
    /// Number of branches pointing up.
    pub upward: usize,
    pub side: Side,
}

impl Associator {
    pub fn sign(&self) -> i64 {
        associator_sign(self.perm, self.upward, self.side)
    }
}

/// `±(−1)^upward · sign(perm)`, the sign flipping with the side.
pub fn associator_sign(perm: Perm3, upward: usize, side: Side) -> i64 {
    let q_sign = if upward % 2 == 0 { 1 } else { -1 };
    let side_sign = if side == Side::Left { LEFT_SIDE_SIGN } else { -LEFT_SIDE_SIGN };
    side_sign * q_sign * perm.sign()
}

pub fn associators(word: &TangleWord) -> Vec<Associator> {
    let mut out = Vec::new();
    for (k, e) in word.events.iter().enumerate() {
        let TangleEvent::Assoc { pos, side } = *e else { continue };
        let times = [word.time(k, pos), word.time(k, pos + 1), word.time(k, pos + 2)];
        let mut source = [0usize; 3];
        for (i, slot) in source.iter_mut().enumerate() {
            *slot = times.iter().filter(|&&t| t < times[i]).count();
        }
        let perm = Perm3::from_images(source);
        let upward = (0..3).filter(|&i| word.upward(k, pos + i)).count();
        out.push(Associator { event: k, perm, upward, side });
    }
    out
}

pub fn associator_stats(word: &TangleWord) -> AssociatorStats {
    let mut st = AssociatorStats {
        m: word.events.iter().filter(|e| matches!(e, TangleEvent::Max { .. })).count() as i64,
        ..AssociatorStats::default()
    };
    for a in associators(word) {
        st.n[a.perm.index()] += a.sign();
        st.n_total += a.sign();
    }
    for (k, pos, left_first) in word.crossings() {
        let (l, r) = (word.upward(k, pos), word.upward(k, pos + 1));
        if l != r {
            continue;
        }
        st.x += 1;
        if (word.intersection_sign(k, pos, left_first) == 1) == l {
            st.x_plus += 1;
        } else {
            st.x_minus += 1;
        }
    }
    st
}

/// The three long-knot values, in the order: with `N(1) + N(1,3)`, with
/// `N(2,3) + N(1,3,2)`, with `N(1,2) + N(1,2,3)`.
pub fn v2_natangle_all(word: &TangleWord) -> Result<[i64; 3], MorseError> {
    if word.shape != Shape::Long {
        return Err(MorseError::WrongShape(Shape::Long));
    }
    let g = gauss_of_tangle(word);
    let s = bracket_sum(&PatternSum::parallel(), &g);
    let st = associator_stats(word);
    let n = |a: Perm3, b: Perm3| st.get(a) + st.get(b);
    Ok([
        exact_div("first", 2 * s + n(Perm3::Id, Perm3::T13) + st.x - st.m, 4)?,
        exact_div("second", 2 * s + n(Perm3::T23, Perm3::C132) + 2 * st.x_plus, 4)?,
        exact_div("third", 2 * s + n(Perm3::T12, Perm3::C123) + 2 * st.x_minus, 4)?,
    ])
}

/// v₂ from a tangle word; long words use all three formulas and require
/// them to agree.
pub fn v2_natangle(word: &TangleWord) -> Result<i64, MorseError> {
    match word.shape {
        Shape::Long => all_equal(v2_natangle_all(word)?.to_vec()),
        Shape::Closed => {
            let g = gauss_of_tangle(word);
            let all = bracket_sum(&PatternSum::all_crossed(), &g);
            let st = associator_stats(word);
            exact_div("closed", 6 * all + st.n_total + 3 * st.x - st.m + 1, 24)
        }
    }
}

/// Builds tangle words from positions alone; directions and crossing
/// signs are filled in from the traced curve by [`build`](Self::build).
/// Crossings and caps on a pair sitting in a cluster of three insert the
/// associator that brackets the pair together.
#[derive(Clone, Debug)]
pub struct TangleBuilder {
    shape: Shape,
    events: Vec<TangleEvent>,
    spacing: Spacing,
}

impl TangleBuilder {
    pub fn new(shape: Shape) -> TangleBuilder {
        TangleBuilder { shape, events: Vec::new(), spacing: Spacing::start(shape) }
    }

    pub fn strands(&self) -> usize {
        self.spacing.points
    }

    fn event(&self) -> usize {
        self.events.len() + 1
    }

    /// Rotates the cluster of three starting at `pos`.
    pub fn associator(&mut self, pos: usize) -> Result<&mut Self, TangleError> {
        if !self.spacing.cluster(pos) {
            return Err(TangleError::NotCluster { event: self.event(), pos: pos + 1 });
        }
        let side = self.spacing.side(pos);
        self.spacing.rotate(pos);
        self.events.push(TangleEvent::Assoc { pos, side });
        Ok(self)
    }

    fn bring_together(&mut self, pos: usize) -> Result<(), TangleError> {
        if pos + 1 >= self.spacing.points {
            return Err(TangleError::Position { event: self.event(), pos: pos + 1, strands: self.spacing.points });
        }
        if self.spacing.pair(pos) {
            return Ok(());
        }
        if pos > 0 && self.spacing.cluster(pos - 1) {
            self.associator(pos - 1)?;
        } else if self.spacing.cluster(pos) {
            self.associator(pos)?;
        }
        if !self.spacing.pair(pos) {
            return Err(TangleError::NotClosest { event: self.event(), pos: pos + 1, next: pos + 2 });
        }
        Ok(())
    }

    /// Crossing of strands `pos` and `pos + 1`.
    pub fn cross(&mut self, pos: usize, left_over: bool) -> Result<&mut Self, TangleError> {
        self.bring_together(pos)?;
        self.events.push(TangleEvent::Cross { pos, sign: Sign::Positive, left_over });
        Ok(self)
    }

    /// Cap joining strands `pos` and `pos + 1`.
    pub fn cap(&mut self, pos: usize) -> Result<&mut Self, TangleError> {
        self.bring_together(pos)?;
        self.spacing.cap(pos);
        self.events.push(TangleEvent::Max { pos, up: true });
        Ok(self)
    }

    /// Cup creating strands `pos` and `pos + 1`.
    pub fn cup(&mut self, pos: usize, attach: Attach) -> Result<&mut Self, TangleError> {
        if !self.spacing.cup(pos, attach) {
            return Err(TangleError::BadAttach { event: self.event() });
        }
        self.events.push(TangleEvent::Min { pos, up: true, attach });
        Ok(self)
    }

    /// A curl on the strand at `pos`, put to its right or left.
    pub fn kink(&mut self, pos: usize, right: bool, left_over: bool) -> Result<&mut Self, TangleError> {
        if right {
            self.cup(pos + 1, Attach { toward: Side::Left, level: 0 })?.cross(pos, left_over)?.cap(pos)
        } else {
            self.cup(pos, Attach { toward: Side::Right, level: 0 })?.cross(pos + 1, left_over)?.cap(pos)
        }
    }

    pub fn build(&self) -> Result<TangleWord, TangleError> {
        TangleWord::oriented(self.shape, self.events.clone())
    }
}

/// Long trefoil with three positive crossings.
pub fn trefoil_tangle() -> TangleWord {
    parse_tangle("MIN@2:u\nA@1:R\nX@1:+:o\nX@1:+:o\nX@1:+:o\nA@1:L\nMAX@2:u").expect("valid trefoil word")
}

/// Long figure-eight knot.
pub fn figure_eight_tangle() -> TangleWord {
    let mut b = TangleBuilder::new(Shape::Long);
    let steps = |b: &mut TangleBuilder| -> Result<(), TangleError> {
        b.cup(1, Attach { toward: Side::Left, level: 0 })?;
        b.cross(0, false)?.cross(1, true)?.cross(0, false)?.cross(0, false)?;
        b.cap(1)?;
        Ok(())
    };
    steps(&mut b).expect("valid figure-eight word");
    b.build().expect("single component")
}

/// A random valid word: a walk through cups, caps, crossings and
/// associators that never closes off a separate component, keeping at
/// most `max_points` strands. After `moves` events it only winds down.
pub fn random_tangle<R: Rng>(rng: &mut R, shape: Shape, max_points: usize, moves: usize) -> TangleWord {
    loop {
        if let Some(w) = random_attempt(rng, shape, max_points.max(3), moves) {
            return w;
        }
    }
}

#[derive(Clone, Copy)]
enum Move {
    Cup(usize, Attach),
    Cap(usize),
    Cross(usize),
    Rotate(usize),
}

fn random_attempt<R: Rng>(rng: &mut R, shape: Shape, max_points: usize, moves: usize) -> Option<TangleWord> {
    let mut b = TangleBuilder::new(shape);
    // piece label per strand; a cap on one piece would close a loop
    let mut piece: Vec<usize> = if shape == Shape::Long { vec![0] } else { Vec::new() };
    let mut next_piece = 1;
    let end = if shape == Shape::Long { 1 } else { 0 };
    for step in 0..moves * 10 + 100 {
        let sp = &b.spacing;
        let n = sp.points;
        let winding = step >= moves;
        if winding && n == end && !b.events.is_empty() {
            return b.build().ok();
        }
        let mut options: Vec<(Move, u32)> = Vec::new();
        if n + 2 <= max_points && (!winding || n < end + 2) {
            for pos in 0..=n {
                for toward in [Side::Left, Side::Right] {
                    for level in 0..sp.levels(pos, toward) {
                        options.push((Move::Cup(pos, Attach { toward, level }), 1));
                    }
                }
            }
        }
        for g in 0..n.saturating_sub(1) {
            if !sp.pair(g) {
                continue;
            }
            let closes = piece[g] == piece[g + 1];
            if !closes || (shape == Shape::Closed && n == 2 && winding) {
                options.push((Move::Cap(g), if winding { 50 } else { 3 }));
            }
            options.push((Move::Cross(g), if winding { 1 } else { 8 }));
        }
        for g in 0..n.saturating_sub(2) {
            if sp.cluster(g) {
                options.push((Move::Rotate(g), 4));
            }
        }
        if options.is_empty() {
            return None;
        }
        let total: u32 = options.iter().map(|o| o.1).sum();
        let mut pick = rng.gen_range(0..total);
        let mv = options.iter().find(|o| {
            if pick < o.1 {
                true
            } else {
                pick -= o.1;
                false
            }
        })?;
        match mv.0 {
            Move::Cup(pos, attach) => {
                b.cup(pos, attach).ok()?;
                piece.splice(pos..pos, [next_piece, next_piece]);
                next_piece += 1;
            }
            Move::Cap(g) => {
                let (keep, gone) = (piece[g], piece[g + 1]);
                b.cap(g).ok()?;
                piece.drain(g..g + 2);
                for p in &mut piece {
                    if *p == gone {
                        *p = keep;
                    }
                }
            }
            Move::Cross(g) => {
                b.cross(g, rng.gen_bool(0.5)).ok()?;
                piece.swap(g, g + 1);
            }
            Move::Rotate(g) => {
                b.associator(g).ok()?;
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::casson::v2_gauss;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trivial_word() {
        let w = parse_tangle("").unwrap();
        assert_eq!(gauss_of_tangle(&w).len(), 0);
        assert_eq!(associator_stats(&w), AssociatorStats::default());
        assert_eq!(v2_natangle(&w), Ok(0));
    }

    #[test]
    fn lone_associator_is_rejected() {
        assert_eq!(parse_tangle("A@1:L"), Err(TangleError::TooFewStrands { event: 1, strands: 1 }));
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(parse_tangle("MAX@1"), Err(TangleError::Syntax { .. })));
        assert!(matches!(parse_tangle("X@0:+:o"), Err(TangleError::Syntax { .. })));
        assert!(matches!(parse_tangle("FOO@1:u"), Err(TangleError::Syntax { .. })));
        assert!(matches!(parse_tangle("MIN@2:d:Q1"), Err(TangleError::Syntax { .. })));
    }

    #[test]
    fn zigzag_has_one_maximum() {
        let w = parse_tangle("MIN@2:d\nA@1:R\nMAX@1:u").unwrap();
        assert_eq!(associator_stats(&w).m, 1);
        assert_eq!(v2_natangle(&w), Ok(0));
        assert!(matches!(parse_tangle("MIN@2:u\nA@1:R\nMAX@1:u"), Err(TangleError::Mismatch { .. })));
        assert!(matches!(parse_tangle("MIN@2:d\nMAX@1:u"), Err(TangleError::NotClosest { .. })));
        assert!(matches!(parse_tangle("MIN@2:d:L1\nA@1:R\nMAX@1:u"), Err(TangleError::BadAttach { .. })));
    }

    #[test]
    fn separate_circle_is_rejected() {
        assert_eq!(parse_tangle("MIN@2:u\nMAX@2:u"), Err(TangleError::MultipleComponents));
    }

    #[test]
    fn only_clusters_of_three_rotate() {
        let mut sp = Spacing::start(Shape::Closed);
        assert!(sp.cup(0, Attach::default_at(0)));
        assert!(sp.cup(2, Attach { toward: Side::Left, level: 1 }));
        // ((12)(34)) has pairs but no cluster of three
        assert!(sp.pair(0) && sp.pair(2));
        assert!(!sp.cluster(0) && !sp.cluster(1));
        assert!(sp.cup(4, Attach { toward: Side::Left, level: 2 }));
        assert!(sp.pair(4) && !sp.cluster(2) && !sp.cluster(3));
        sp.cap(2);
        assert_eq!(sp.points, 4);
        assert!(sp.pair(0) && sp.pair(2));
    }

    #[test]
    fn cup_levels_follow_the_hierarchy() {
        let mut sp = Spacing::start(Shape::Long);
        assert_eq!(sp.levels(1, Side::Left), 1);
        assert_eq!(sp.levels(1, Side::Right), 0);
        assert!(sp.cup(1, Attach { toward: Side::Left, level: 0 }));
        // (1(23)): a cup at the far right may hug 3, (23) or everything
        assert_eq!(sp.levels(3, Side::Left), 3);
        assert!(sp.cluster(0));
        assert_eq!(sp.side(0), Side::Right);
    }

    #[test]
    fn text_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for shape in [Shape::Long, Shape::Closed] {
            let w = random_tangle(&mut rng, shape, 7, 30);
            assert_eq!(parse_tangle(&w.to_string()).unwrap(), w);
        }
    }

    #[test]
    fn named_knots() {
        let t = trefoil_tangle();
        assert_eq!(gauss_of_tangle(&t).len(), 3);
        assert_eq!(v2_gauss(&gauss_of_tangle(&t)), 1);
        assert_eq!(v2_natangle(&t), Ok(1));
        let f = figure_eight_tangle();
        assert_eq!(v2_gauss(&gauss_of_tangle(&f)), -1);
        assert_eq!(v2_natangle(&f), Ok(-1));
    }

    #[test]
    fn kinks_do_not_change_v2() {
        for right in [false, true] {
            for over in [false, true] {
                let mut b = TangleBuilder::new(Shape::Long);
                b.kink(0, right, over).unwrap();
                let w = b.build().unwrap();
                assert_eq!(v2_natangle(&w), Ok(0), "{w}");
            }
        }
    }

    #[test]
    fn upward_left_identity_counts_plus_one() {
        assert_eq!(associator_sign(Perm3::Id, 3, Side::Left), 1);
        assert_eq!(associator_sign(Perm3::Id, 3, Side::Right), -1);
    }

    proptest::proptest! {
        #[test]
        fn sign_ignores_cyclic_relabelling(p in 0usize..6, shift in 0usize..3, up in 0usize..4, left: bool) {
            let perm = Perm3::ALL[p];
            let im = perm.images();
            // moving the start of the source past `shift` branches
            let shifted = Perm3::from_images([0, 1, 2].map(|lr| (im[lr] + shift) % 3));
            let side = if left { Side::Left } else { Side::Right };
            proptest::prop_assert_eq!(associator_sign(perm, up, side), associator_sign(shifted, up, side));
        }
    }

    #[test]
    fn random_words_agree_with_gauss() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let shape = if rng.gen_bool(0.5) { Shape::Long } else { Shape::Closed };
            let w = random_tangle(&mut rng, shape, 7, 40);
            assert_eq!(v2_natangle(&w), Ok(v2_gauss(&gauss_of_tangle(&w))), "{w}");
        }
    }
}
