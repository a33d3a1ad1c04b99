//! Turning a knot description into the structures the methods need.

use std::fmt;
use std::str::FromStr;

use casson::casson::{v2_gauss, v2_sym, Method};
use casson::fixtures;
use casson::morse::{v2_of_knot, MorseError, PlaneCurve, Resolution};
use casson::moves::is_realizable;
use casson::natangle::{gauss_of_tangle, parse_tangle, v2_natangle, TangleWord};
use casson::notation::{from_braid, parse_gauss_code, parse_pd_code, torus_knot_2, Braid};
use casson::polyknot::PolyKnot;
use casson::skein::v2_skein;
use casson::{GaussDiagram, Shape};
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputKind {
    Gauss,
    Pd,
    Braid,
    Torus,
    Polyknot,
    Tangle,
}

impl InputKind {
    pub const ALL: [InputKind; 6] =
        [InputKind::Gauss, InputKind::Pd, InputKind::Braid, InputKind::Torus, InputKind::Polyknot, InputKind::Tangle];

    pub fn name(self) -> &'static str {
        match self {
            InputKind::Gauss => "gauss",
            InputKind::Pd => "pd",
            InputKind::Braid => "braid",
            InputKind::Torus => "torus",
            InputKind::Polyknot => "polyknot",
            InputKind::Tangle => "tangle",
        }
    }
}

impl fmt::Display for InputKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InputKind {
    type Err = CliError;
    fn from_str(s: &str) -> Result<InputKind, CliError> {
        InputKind::ALL
            .into_iter()
            .find(|k| k.name() == s.trim())
            .ok_or_else(|| CliError::Parse(format!("unknown input kind {s:?}")))
    }
}

/// A knot together with whatever extra structure its description carries.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub kind: InputKind,
    pub diagram: GaussDiagram,
    pub knot: Option<PolyKnot>,
    pub tangle: Option<TangleWord>,
}

fn parse_err(e: impl fmt::Display) -> CliError {
    CliError::Parse(e.to_string())
}

fn invalid(e: impl fmt::Display) -> CliError {
    CliError::Invalid(e.to_string())
}

impl Loaded {
    /// `seed` drives the random perturbation that puts braid closures in
    /// general position for the Morse method.
    pub fn parse(kind: InputKind, payload: &str, seed: u64) -> Result<Loaded, CliError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let braid_knot = |braid: &Braid, rng: &mut ChaCha8Rng| fixtures::generic_braid_knot(rng, braid, Shape::Long).ok();
        let (diagram, knot, tangle) = match kind {
            InputKind::Gauss => (parse_gauss_code(payload).map_err(parse_err)?, None, None),
            InputKind::Pd => (parse_pd_code(payload).map_err(parse_err)?, None, None),
            InputKind::Braid => {
                let braid = Braid::parse(payload).map_err(parse_err)?;
                let g = from_braid(&braid).map_err(invalid)?;
                (g, braid_knot(&braid, &mut rng), None)
            }
            InputKind::Torus => {
                let n: i64 = payload.trim().parse().map_err(|_| CliError::Parse(format!("bad torus parameter {payload:?}")))?;
                let g = torus_knot_2(n).map_err(invalid)?;
                let braid = Braid::new(vec![1; n as usize]);
                (g, braid_knot(&braid, &mut rng), None)
            }
            InputKind::Polyknot => {
                let k = PolyKnot::from_json(payload).map_err(parse_err)?;
                let curve = PlaneCurve::project(&k).map_err(invalid)?;
                let g = curve.gauss_diagram(&Resolution::Heights).map_err(invalid)?;
                (g, Some(k), None)
            }
            InputKind::Tangle => {
                let w = parse_tangle(payload).map_err(|e| match e {
                    casson::natangle::TangleError::Syntax { .. } => parse_err(e),
                    _ => invalid(e),
                })?;
                (gauss_of_tangle(&w), None, Some(w))
            }
        };
        Ok(Loaded { kind, diagram, knot, tangle })
    }
}

/// Outcome of one method on one input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum MethodResult {
    Ok { value: i64 },
    NotApplicable { reason: String },
    Error { message: String },
    /// The method's own consistency checks failed.
    InternalError { message: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodOutcome {
    pub method: Method,
    #[serde(flatten)]
    pub result: MethodResult,
}

fn morse_error(e: MorseError) -> MethodResult {
    match e {
        MorseError::Disagreement(_) | MorseError::NotDivisible { .. } => {
            MethodResult::InternalError { message: e.to_string() }
        }
        _ => MethodResult::Error { message: e.to_string() },
    }
}

pub fn evaluate(input: &Loaded, method: Method) -> MethodResult {
    let g = &input.diagram;
    match method {
        Method::Gauss => MethodResult::Ok { value: v2_gauss(g) },
        Method::Sym => MethodResult::Ok { value: v2_sym(g) },
        Method::Skein => match v2_skein(g) {
            Ok(value) => MethodResult::Ok { value },
            Err(e) => MethodResult::Error { message: e.to_string() },
        },
        Method::Morse => match &input.knot {
            Some(k) => v2_of_knot(k).map_or_else(morse_error, |value| MethodResult::Ok { value }),
            None => MethodResult::NotApplicable { reason: format!("{} input has no spatial polygon", input.kind) },
        },
        Method::Natangle => match &input.tangle {
            Some(w) => v2_natangle(w).map_or_else(morse_error, |value| MethodResult::Ok { value }),
            None => MethodResult::NotApplicable { reason: format!("{} input has no tangle word", input.kind) },
        },
    }
}

/// Runs `methods` and checks that every value agrees. Disagreement on a
/// realizable diagram is an internal error; on a diagram no knot has, it
/// only means the input was invalid.
pub fn evaluate_all(input: &Loaded, methods: &[Method]) -> (Vec<MethodOutcome>, Result<(), CliError>) {
    let outcomes: Vec<MethodOutcome> =
        methods.iter().map(|&method| MethodOutcome { method, result: evaluate(input, method) }).collect();
    let values: Vec<i64> = outcomes
        .iter()
        .filter_map(|o| match o.result {
            MethodResult::Ok { value } => Some(value),
            _ => None,
        })
        .collect();
    let internal = outcomes.iter().any(|o| matches!(o.result, MethodResult::InternalError { .. }));
    let agree = !internal && values.windows(2).all(|w| w[0] == w[1]);
    let realizable = is_realizable(&input.diagram);
    let first_error = outcomes.iter().find_map(|o| match &o.result {
        MethodResult::Error { message } => Some(format!("{}: {message}", o.method.name())),
        _ => None,
    });
    let status = if !realizable {
        Err(CliError::Invalid("diagram is not realizable by a knot".into()))
    } else if !agree {
        Err(CliError::Disagreement(
            outcomes
                .iter()
                .map(|o| format!("{}={}", o.method.name(), crate::report::short(&o.result)))
                .collect::<Vec<_>>()
                .join(" "),
        ))
    } else if let Some(msg) = first_error {
        Err(CliError::Invalid(msg))
    } else {
        Ok(())
    };
    (outcomes, status)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds_parse_by_name() {
        for k in InputKind::ALL {
            assert_eq!(k.name().parse::<InputKind>(), Ok(k));
        }
        assert!(matches!("knot".parse::<InputKind>(), Err(CliError::Parse(_))));
    }

    #[test]
    fn structure_decides_applicability() {
        let g = Loaded::parse(InputKind::Gauss, "O1+U2+O3+U1+O2+U3+", 0).unwrap();
        assert!(matches!(evaluate(&g, Method::Morse), MethodResult::NotApplicable { .. }));
        let b = Loaded::parse(InputKind::Torus, "5", 0).unwrap();
        assert_eq!(evaluate(&b, Method::Morse), MethodResult::Ok { value: 3 });
    }

    #[test]
    fn mismatched_structure_is_a_disagreement() {
        let mut l = Loaded::parse(InputKind::Gauss, "O1+U2+O3+U1+O2+U3+", 0).unwrap();
        l.tangle = Some(parse_tangle("").unwrap());
        let (out, status) = evaluate_all(&l, &[Method::Gauss, Method::Natangle]);
        assert_eq!(out[1].result, MethodResult::Ok { value: 0 });
        assert_eq!(status.map_err(|e| e.exit_code()), Err(3));
    }
}
