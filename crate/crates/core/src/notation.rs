//! Text notations: Gauss codes, PD codes and braid words.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::gauss::{End, Endpoint, GaussDiagram, Shape, Sign};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NotationError {
    #[error("unexpected character {found:?} at byte {at}")]
    Unexpected { at: usize, found: char },
    #[error("missing label at byte {0}")]
    EmptyLabel(usize),
    #[error("missing sign after label {0}")]
    MissingSign(u32),
    #[error("label {label} has two {kind} tokens")]
    DuplicateToken { label: u32, kind: char },
    #[error("label {0} lacks an O or U token")]
    MissingToken(u32),
    #[error("label {0}: O and U tokens carry different signs")]
    SignMismatch(u32),
    #[error("malformed crossing tuple: {0}")]
    MalformedTuple(String),
    #[error("edge {edge} is used {count} times")]
    EdgeCount { edge: u32, count: usize },
    #[error("edge labels must be 1..={max}, found {found}")]
    EdgeRange { max: u32, found: u32 },
    #[error("crossing {0} is inconsistent with a single oriented component")]
    InconsistentCrossing(usize),
    #[error("diagram has more than one component")]
    MultipleComponents,
    #[error("unknown braid token {0:?}")]
    UnknownToken(String),
    #[error("torus knot T(n,2) needs odd n >= 3, got {0}")]
    BadTorusParameter(i64),
}

/// Parses a Gauss code such as `O1+U2+O3+U1+O2+U3+`.
///
/// Tokens may be separated by whitespace or written back to back. Each label
/// must occur once as `O` (the tail of its chord) and once as `U` (the head).
pub fn parse_gauss_code(text: &str) -> Result<GaussDiagram, NotationError> {
    let bytes = text.as_bytes();
    let mut i = 0;
    let mut tokens: Vec<(End, u32, Sign)> = Vec::new();
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let end = match c {
            'O' => End::Tail,
            'U' => End::Head,
            _ => return Err(unexpected(text, i)),
        };
        i += 1;
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        if start == i {
            return Err(NotationError::EmptyLabel(start));
        }
        if bytes[start] == b'0' {
            return Err(unexpected(text, start));
        }
        let label: u32 = text[start..i].parse().map_err(|_| unexpected(text, start))?;
        let sign = match bytes.get(i) {
            Some(b'+') => Sign::Positive,
            Some(b'-') => Sign::Negative,
            _ => return Err(NotationError::MissingSign(label)),
        };
        i += 1;
        tokens.push((end, label, sign));
    }

    let mut index: HashMap<u32, usize> = HashMap::new();
    let mut ids = Vec::new();
    let mut signs = Vec::new();
    let mut seen = Vec::new();
    let mut seq = Vec::with_capacity(tokens.len());
    for (end, label, sign) in tokens {
        let k = *index.entry(label).or_insert_with(|| {
            ids.push(label);
            signs.push(sign);
            seen.push([false, false]);
            ids.len() - 1
        });
        let slot = &mut seen[k][(end == End::Head) as usize];
        if *slot {
            let kind = if end == End::Tail { 'O' } else { 'U' };
            return Err(NotationError::DuplicateToken { label, kind });
        }
        *slot = true;
        if signs[k] != sign {
            return Err(NotationError::SignMismatch(label));
        }
        seq.push(Endpoint { chord: k, end });
    }
    if let Some(k) = seen.iter().position(|s| !(s[0] && s[1])) {
        return Err(NotationError::MissingToken(ids[k]));
    }
    let g = GaussDiagram::from_sequence(Shape::Closed, &seq, &ids, &signs)
        .expect("token sequence forms a pairing");
    Ok(g.with_provenance(text.trim()))
}

fn unexpected(text: &str, at: usize) -> NotationError {
    NotationError::Unexpected { at, found: text[at..].chars().next().unwrap_or(' ') }
}

/// Parses a planar diagram code, a list of `X[a,b,c,d]` tuples.
///
/// `a` is the incoming under-edge, `(b, c, d)` follow counterclockwise, and
/// edges are numbered `1..=2n` along the orientation. A `PD[...]` wrapper and
/// commas between tuples are accepted.
pub fn parse_pd_code(text: &str) -> Result<GaussDiagram, NotationError> {
    let tuples = pd_tuples(text)?;
    let n = tuples.len();
    if n == 0 {
        return Ok(GaussDiagram::empty(Shape::Closed).with_provenance(text.trim()));
    }
    let m = 2 * n as u32;
    let mut uses = vec![0usize; m as usize + 1];
    for t in &tuples {
        for &e in t {
            if e == 0 || e > m {
                return Err(NotationError::EdgeRange { max: m, found: e });
            }
            uses[e as usize] += 1;
        }
    }
    if let Some(e) = (1..=m).find(|&e| uses[e as usize] != 2) {
        return Err(NotationError::EdgeCount { edge: e, count: uses[e as usize] });
    }

    let next = |e: u32| e % m + 1;
    // passage[e] = (crossing, end) for the crossing at the far end of edge e
    let mut passage: Vec<Option<(usize, End)>> = vec![None; m as usize + 1];
    let mut signs = Vec::with_capacity(n);
    for (k, &[a, b, c, d]) in tuples.iter().enumerate() {
        if c != next(a) {
            return Err(NotationError::InconsistentCrossing(k + 1));
        }
        let (over_in, sign) = if d == next(b) {
            (b, Sign::Negative)
        } else if b == next(d) {
            (d, Sign::Positive)
        } else {
            return Err(NotationError::InconsistentCrossing(k + 1));
        };
        for (e, end) in [(a, End::Head), (over_in, End::Tail)] {
            if passage[e as usize].replace((k, end)).is_some() {
                return Err(NotationError::MultipleComponents);
            }
        }
        signs.push(sign);
    }
    let seq: Vec<Endpoint> = (1..=m)
        .map(|e| {
            let (chord, end) = passage[e as usize].ok_or(NotationError::MultipleComponents)?;
            Ok(Endpoint { chord, end })
        })
        .collect::<Result<_, NotationError>>()?;
    let ids: Vec<u32> = (1..=n as u32).collect();
    let g = GaussDiagram::from_sequence(Shape::Closed, &seq, &ids, &signs)
        .map_err(|_| NotationError::MultipleComponents)?;
    Ok(g.with_provenance(text.trim()))
}

fn pd_tuples(text: &str) -> Result<Vec<[u32; 4]>, NotationError> {
    let mut body = text.trim();
    if let Some(rest) = body.strip_prefix("PD[") {
        body = rest
            .strip_suffix(']')
            .ok_or_else(|| NotationError::MalformedTuple(text.trim().to_string()))?;
    }
    let mut out = Vec::new();
    let mut rest = body;
    loop {
        rest = rest.trim_start_matches(|c: char| c.is_whitespace() || c == ',');
        if rest.is_empty() {
            break;
        }
        let inner = rest
            .strip_prefix("X[")
            .ok_or_else(|| NotationError::MalformedTuple(snippet(rest)))?;
        let close = inner.find(']').ok_or_else(|| NotationError::MalformedTuple(snippet(rest)))?;
        let parts: Vec<&str> = inner[..close].split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(NotationError::MalformedTuple(snippet(rest)));
        }
        let mut t = [0u32; 4];
        for (slot, p) in t.iter_mut().zip(&parts) {
            *slot = p.parse().map_err(|_| NotationError::MalformedTuple(snippet(rest)))?;
        }
        out.push(t);
        rest = &inner[close + 1..];
    }
    Ok(out)
}

fn snippet(s: &str) -> String {
    s.chars().take(16).collect()
}

/// A braid word. Letters are nonzero integers: `+i` is the generator
/// crossing strands `i` and `i+1` with the left one on top, `-i` its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Braid {
    strands: usize,
    letters: Vec<i32>,
}

impl Braid {
    /// Strand count defaults to one more than the largest generator index.
    pub fn new(letters: Vec<i32>) -> Braid {
        let strands = letters.iter().map(|l| l.unsigned_abs() as usize + 1).max().unwrap_or(1);
        Braid { strands, letters }
    }

    pub fn with_strands(strands: usize, letters: Vec<i32>) -> Braid {
        let b = Braid::new(letters);
        Braid { strands: b.strands.max(strands), letters: b.letters }
    }

    /// Parses `s1 -s2 s1^-1 ...`.
    pub fn parse(word: &str) -> Result<Braid, NotationError> {
        let mut letters = Vec::new();
        for tok in word.split_whitespace() {
            let bad = || NotationError::UnknownToken(tok.to_string());
            let (neg, rest) = match tok.strip_prefix('-') {
                Some(r) => (true, r),
                None => (false, tok),
            };
            let rest = rest.strip_prefix('s').ok_or_else(bad)?;
            let (digits, inverse) = match rest.strip_suffix("^-1") {
                Some(d) => (d, true),
                None => (rest, false),
            };
            if digits.is_empty() || digits.starts_with('0') {
                return Err(bad());
            }
            let i: i32 = digits.parse().map_err(|_| bad())?;
            letters.push(if neg != inverse { -i } else { i });
        }
        Ok(Braid::new(letters))
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    /// Bottom position to top position permutation.
    pub fn permutation(&self) -> Vec<usize> {
        (0..self.strands)
            .map(|mut p| {
                for &l in &self.letters {
                    let i = l.unsigned_abs() as usize - 1;
                    if p == i {
                        p = i + 1;
                    } else if p == i + 1 {
                        p = i;
                    }
                }
                p
            })
            .collect()
    }

    /// Whether the closure is a knot.
    pub fn is_knot(&self) -> bool {
        let perm = self.permutation();
        let mut p = 0;
        for step in 1..=self.strands {
            p = perm[p];
            if p == 0 {
                return step == self.strands;
            }
        }
        false
    }
}

impl fmt::Display for Braid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            if *l < 0 {
                f.write_str("-")?;
            }
            write!(f, "s{}", l.unsigned_abs())?;
        }
        Ok(())
    }
}

/// Long diagram of the closure of a braid, cut on strand 1 at the bottom.
pub fn from_braid(braid: &Braid) -> Result<GaussDiagram, NotationError> {
    if !braid.is_knot() {
        return Err(NotationError::MultipleComponents);
    }
    let letters = braid.letters();
    let signs: Vec<Sign> = letters
        .iter()
        .map(|&l| if l > 0 { Sign::Positive } else { Sign::Negative })
        .collect();
    let mut seq = Vec::with_capacity(2 * letters.len());
    let mut pos = 0usize;
    loop {
        for (j, &l) in letters.iter().enumerate() {
            let i = l.unsigned_abs() as usize - 1;
            let left = if pos == i {
                pos = i + 1;
                true
            } else if pos == i + 1 {
                pos = i;
                false
            } else {
                continue;
            };
            let over = left == (l > 0);
            seq.push(Endpoint { chord: j, end: if over { End::Tail } else { End::Head } });
        }
        if pos == 0 {
            break;
        }
    }
    let ids: Vec<u32> = (1..=letters.len() as u32).collect();
    let g = GaussDiagram::from_sequence(Shape::Long, &seq, &ids, &signs)
        .expect("a knotted closure visits every letter twice");
    Ok(g.with_provenance(braid.to_string()))
}

pub fn from_braid_word(word: &str) -> Result<GaussDiagram, NotationError> {
    from_braid(&Braid::parse(word)?)
}

/// The (n, 2) torus knot as the closure of `s1^n`.
pub fn torus_knot_2(n: i64) -> Result<GaussDiagram, NotationError> {
    if n < 3 || n % 2 == 0 {
        return Err(NotationError::BadTorusParameter(n));
    }
    from_braid(&Braid::new(vec![1; n as usize]))
}
