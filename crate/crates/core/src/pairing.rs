//! The pairing of arrow patterns with Gauss diagrams: a signed count of
//! subdiagrams with the same based endpoint order as the pattern.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::gauss::{End, Endpoint, GaussDiagram};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PatternError {
    #[error("a pattern needs at least one chord")]
    Empty,
    #[error("chord {0} does not appear exactly once as head and once as tail")]
    Unpaired(usize),
    #[error("unknown pattern name {0:?}")]
    UnknownName(String),
}

/// Unsigned based chord configuration, stored in canonical form: slots in
/// order from the base point, chords numbered by first appearance.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ArrowPattern {
    slots: Vec<Endpoint>,
}

impl ArrowPattern {
    pub fn new(slots: Vec<Endpoint>) -> Result<ArrowPattern, PatternError> {
        if slots.is_empty() {
            return Err(PatternError::Empty);
        }
        let max = slots.iter().map(|s| s.chord).max().unwrap_or(0);
        let mut seen = vec![[0u8; 2]; max + 1];
        for s in &slots {
            seen[s.chord][(s.end == End::Head) as usize] += 1;
        }
        if let Some(c) = seen.iter().position(|s| *s != [1, 1]) {
            return Err(PatternError::Unpaired(c));
        }
        Ok(ArrowPattern { slots: canonical(&slots) })
    }

    fn from_spec(spec: &[(usize, End)]) -> ArrowPattern {
        let slots = spec.iter().map(|&(chord, end)| Endpoint { chord, end }).collect();
        ArrowPattern::new(slots).expect("built-in pattern is well formed")
    }

    pub fn arity(&self) -> usize {
        self.slots.len() / 2
    }

    pub fn slots(&self) -> &[Endpoint] {
        &self.slots
    }

    /// Same pattern with every arrow reversed.
    pub fn reversed(&self) -> ArrowPattern {
        let slots: Vec<Endpoint> = self
            .slots
            .iter()
            .map(|s| Endpoint { chord: s.chord, end: s.end.opposite() })
            .collect();
        ArrowPattern { slots: canonical(&slots) }
    }

    /// Two interlocked arrows: the first slot is a head, the second a tail.
    pub fn xup() -> ArrowPattern {
        ArrowPattern::from_spec(&[(0, End::Head), (1, End::Tail), (0, End::Tail), (1, End::Head)])
    }

    pub fn xdown() -> ArrowPattern {
        ArrowPattern::xup().reversed()
    }

    /// Two interlocked arrows, both pointing away from the base point.
    pub fn xfwd() -> ArrowPattern {
        ArrowPattern::from_spec(&[(0, End::Tail), (1, End::Tail), (0, End::Head), (1, End::Head)])
    }

    pub fn xbwd() -> ArrowPattern {
        ArrowPattern::xfwd().reversed()
    }

    /// All eight based two-arrow patterns whose arrows interlock. Only four
    /// are distinct as patterns; each carries an overall sign too, giving the
    /// candidates of the calibration sweep.
    pub fn interlocked_pairs() -> [ArrowPattern; 4] {
        [ArrowPattern::xup(), ArrowPattern::xdown(), ArrowPattern::xfwd(), ArrowPattern::xbwd()]
    }
}

impl fmt::Display for ArrowPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.slots {
            let e = if s.end == End::Tail { 'T' } else { 'H' };
            write!(f, "{}{}", e, s.chord + 1)?;
        }
        Ok(())
    }
}

fn canonical(slots: &[Endpoint]) -> Vec<Endpoint> {
    let mut relabel: Vec<usize> = Vec::new();
    let mut map = vec![usize::MAX; slots.iter().map(|s| s.chord + 1).max().unwrap_or(0)];
    slots
        .iter()
        .map(|s| {
            if map[s.chord] == usize::MAX {
                map[s.chord] = relabel.len();
                relabel.push(s.chord);
            }
            Endpoint { chord: map[s.chord], end: s.end }
        })
        .collect()
}

/// Formal integer combination of patterns.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PatternSum {
    pub terms: Vec<(i64, ArrowPattern)>,
}

impl PatternSum {
    pub fn new() -> PatternSum {
        PatternSum::default()
    }

    pub fn plus(mut self, coeff: i64, pattern: ArrowPattern) -> PatternSum {
        self.terms.push((coeff, pattern));
        self
    }

    /// `XFWD + XBWD`, the same-direction interlocked pairs.
    pub fn parallel() -> PatternSum {
        PatternSum::new().plus(1, ArrowPattern::xfwd()).plus(1, ArrowPattern::xbwd())
    }

    /// Sum of all four interlocked two-arrow patterns.
    pub fn all_crossed() -> PatternSum {
        ArrowPattern::interlocked_pairs()
            .into_iter()
            .fold(PatternSum::new(), |s, p| s.plus(1, p))
    }
}

impl From<ArrowPattern> for PatternSum {
    fn from(p: ArrowPattern) -> PatternSum {
        PatternSum::new().plus(1, p)
    }
}

/// Named patterns accepted on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedPattern {
    Xup,
    Xdown,
    Xfwd,
    Xbwd,
    Xall,
}

impl NamedPattern {
    pub fn sum(self) -> PatternSum {
        match self {
            NamedPattern::Xup => ArrowPattern::xup().into(),
            NamedPattern::Xdown => ArrowPattern::xdown().into(),
            NamedPattern::Xfwd => ArrowPattern::xfwd().into(),
            NamedPattern::Xbwd => ArrowPattern::xbwd().into(),
            NamedPattern::Xall => PatternSum::all_crossed(),
        }
    }
}

impl FromStr for NamedPattern {
    type Err = PatternError;
    fn from_str(s: &str) -> Result<Self, PatternError> {
        match s.to_ascii_lowercase().as_str() {
            "xup" => Ok(NamedPattern::Xup),
            "xdown" => Ok(NamedPattern::Xdown),
            "xfwd" => Ok(NamedPattern::Xfwd),
            "xbwd" => Ok(NamedPattern::Xbwd),
            "xall" => Ok(NamedPattern::Xall),
            _ => Err(PatternError::UnknownName(s.to_string())),
        }
    }
}

/// Visits every chord subset of size `k` whose based endpoint order equals
/// the pattern, passing the subset to `f`.
fn for_each_match(pattern: &ArrowPattern, g: &GaussDiagram, mut f: impl FnMut(&[usize])) {
    let k = pattern.arity();
    let n = g.len();
    if k > n {
        return;
    }
    let mut subset: Vec<usize> = (0..k).collect();
    let mut buf: Vec<(usize, Endpoint)> = Vec::with_capacity(2 * k);
    loop {
        buf.clear();
        for (local, &c) in subset.iter().enumerate() {
            let (t, h) = g.slots(c);
            buf.push((t, Endpoint { chord: local, end: End::Tail }));
            buf.push((h, Endpoint { chord: local, end: End::Head }));
        }
        buf.sort_unstable_by_key(|x| x.0);
        if matches_canonical(&buf, pattern.slots(), k) {
            f(&subset);
        }
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if subset[i] < n - k + i {
                subset[i] += 1;
                for j in i + 1..k {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn matches_canonical(seq: &[(usize, Endpoint)], target: &[Endpoint], k: usize) -> bool {
    let mut map = [usize::MAX; 8];
    let mut heap;
    let map: &mut [usize] = if k <= 8 {
        &mut map[..k]
    } else {
        heap = vec![usize::MAX; k];
        &mut heap
    };
    let mut next = 0;
    for ((_, e), t) in seq.iter().zip(target) {
        if e.end != t.end {
            return false;
        }
        if map[e.chord] == usize::MAX {
            map[e.chord] = next;
            next += 1;
        }
        if map[e.chord] != t.chord {
            return false;
        }
    }
    true
}

/// ⟨A, G⟩ for a single pattern.
pub fn bracket(pattern: &ArrowPattern, g: &GaussDiagram) -> i64 {
    let mut total = 0;
    for_each_match(pattern, g, |s| {
        total += s.iter().map(|&c| g.sign(c).value()).product::<i64>();
    });
    total
}

/// ⟨A, G⟩ extended linearly to formal sums.
pub fn bracket_sum(sum: &PatternSum, g: &GaussDiagram) -> i64 {
    sum.terms.iter().map(|(c, p)| c * bracket(p, g)).sum()
}

/// Number of matching subsets, ignoring signs.
pub fn count(pattern: &ArrowPattern, g: &GaussDiagram) -> u64 {
    let mut total = 0;
    for_each_match(pattern, g, |_| total += 1);
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::parse_gauss_code;

    #[test]
    fn builtin_patterns_are_distinct() {
        let ps = ArrowPattern::interlocked_pairs();
        for i in 0..4 {
            for j in 0..i {
                assert_ne!(ps[i], ps[j]);
            }
        }
        assert_eq!(ArrowPattern::xup().to_string(), "H1T2T1H2");
        assert_eq!(ArrowPattern::xdown().to_string(), "T1H2H1T2");
        assert_eq!(ArrowPattern::xbwd().to_string(), "H1H2T1T2");
    }

    #[test]
    fn rejects_unpaired() {
        let bad = vec![Endpoint { chord: 0, end: End::Tail }, Endpoint { chord: 0, end: End::Tail }];
        assert_eq!(ArrowPattern::new(bad), Err(PatternError::Unpaired(0)));
        assert_eq!(ArrowPattern::new(vec![]), Err(PatternError::Empty));
    }

    #[test]
    fn trefoil_matches() {
        let g = parse_gauss_code("O1+U2+O3+U1+O2+U3+").unwrap();
        assert_eq!(bracket(&ArrowPattern::xup(), &g), 1);
        assert_eq!(bracket(&ArrowPattern::xdown(), &g), 1);
        assert_eq!(count(&ArrowPattern::xup(), &g), 1);
        assert_eq!(bracket_sum(&PatternSum::all_crossed(), &g), 3);
    }

    #[test]
    fn single_chord_pattern_counts_chords() {
        let g = parse_gauss_code("O1+U2-O3+U1+O2-U3+").unwrap();
        let arrow = ArrowPattern::new(vec![
            Endpoint { chord: 0, end: End::Tail },
            Endpoint { chord: 0, end: End::Head },
        ])
        .unwrap();
        assert_eq!(count(&arrow, &g), 2);
        assert_eq!(bracket(&arrow, &g), 2);
    }

    #[test]
    fn three_chord_pattern() {
        let g = parse_gauss_code("O1+U2+O3+U1+O2+U3+").unwrap();
        let whole = ArrowPattern::new(g.endpoints().to_vec()).unwrap();
        assert_eq!(bracket(&whole, &g), 1);
    }

    #[test]
    fn names_parse() {
        assert_eq!("XUP".parse::<NamedPattern>().unwrap(), NamedPattern::Xup);
        assert!("xsideways".parse::<NamedPattern>().is_err());
    }
}
