//! The Casson invariant, its Arf reduction and the crossing-number bound.

use serde::{Deserialize, Serialize};

use crate::gauss::GaussDiagram;
use crate::pairing::{bracket, count, ArrowPattern};

/// v₂ as the pairing with the up-crossed arrow pair.
pub fn v2_gauss(g: &GaussDiagram) -> i64 {
    bracket(&ArrowPattern::xup(), g)
}

/// v₂ as the pairing with the arrow-reversed pattern.
pub fn v2_sym(g: &GaussDiagram) -> i64 {
    bracket(&ArrowPattern::xdown(), g)
}

/// Parity of the number of up-crossed subdiagrams, ignoring signs.
pub fn arf(g: &GaussDiagram) -> u8 {
    (count(&ArrowPattern::xup(), g) % 2) as u8
}

/// `⌊n²/8⌋` for a diagram with `n` crossings.
pub fn crossing_bound(n: usize) -> i64 {
    let n = n as i64;
    n * n / 8
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub v2: i64,
    pub bound: i64,
    pub ok: bool,
}

pub fn check_bound(g: &GaussDiagram) -> BoundCheck {
    let v2 = v2_gauss(g);
    let bound = crossing_bound(g.len());
    BoundCheck { v2, bound, ok: v2.abs() <= bound }
}

/// Tighter estimate for an even number of crossings, `⌊n²/8⌋ - 1`.
///
/// This is a conjectural refinement. Returns `None` for odd `n` (and for
/// `n = 0`), otherwise whether `|v₂|` stays under it.
pub fn even_bound_advisory(g: &GaussDiagram) -> Option<bool> {
    let n = g.len();
    if n == 0 || n % 2 == 1 {
        return None;
    }
    Some(v2_gauss(g).abs() <= crossing_bound(n) - 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Gauss,
    Sym,
    Skein,
    Morse,
    Natangle,
}

impl Method {
    pub const ALL: [Method; 5] =
        [Method::Gauss, Method::Sym, Method::Skein, Method::Morse, Method::Natangle];

    pub fn name(self) -> &'static str {
        match self {
            Method::Gauss => "gauss",
            Method::Sym => "sym",
            Method::Skein => "skein",
            Method::Morse => "morse",
            Method::Natangle => "natangle",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Method, String> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown method {s:?}"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub v2: i64,
    pub arf: u8,
    pub n: usize,
    pub bound: i64,
    pub method: Method,
}

impl InvariantReport {
    /// Report for a value computed by `method` on diagram `g`.
    pub fn new(g: &GaussDiagram, v2: i64, method: Method) -> InvariantReport {
        InvariantReport { v2, arf: arf(g), n: g.len(), bound: crossing_bound(g.len()), method }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::{from_braid_word, parse_gauss_code, torus_knot_2};

    #[test]
    fn named_knots() {
        let unknot = GaussDiagram::empty(crate::gauss::Shape::Closed);
        let trefoil = parse_gauss_code("O1+U2+O3+U1+O2+U3+").unwrap();
        let eight = from_braid_word("s1 -s2 s1 -s2").unwrap();
        assert_eq!((v2_gauss(&unknot), v2_sym(&unknot), arf(&unknot)), (0, 0, 0));
        assert_eq!((v2_gauss(&trefoil), v2_sym(&trefoil), arf(&trefoil)), (1, 1, 1));
        assert_eq!((v2_gauss(&eight), v2_sym(&eight), arf(&eight)), (-1, -1, 1));
    }

    #[test]
    fn torus_sharpness() {
        for n in (3..=15).step_by(2) {
            let g = torus_knot_2(n).unwrap();
            let check = check_bound(&g);
            assert_eq!(check.v2, (n * n - 1) / 8);
            assert_eq!(check.v2, check.bound);
            assert!(check.ok);
        }
    }

    #[test]
    fn report_json_shape() {
        let g = parse_gauss_code("O1+U2+O3+U1+O2+U3+").unwrap();
        let r = InvariantReport::new(&g, v2_gauss(&g), Method::Gauss);
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v, serde_json::json!({"v2": 1, "arf": 1, "n": 3, "bound": 1, "method": "gauss"}));
    }

    #[test]
    fn advisory_is_silent_on_odd() {
        assert_eq!(even_bound_advisory(&torus_knot_2(3).unwrap()), None);
        let g = from_braid_word("s1 -s2 s1 -s2").unwrap();
        assert_eq!(even_bound_advisory(&g), Some(true));
    }
}
