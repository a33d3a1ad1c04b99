//! Ready-made polygonal knots: generic braid closures and sampled smooth
//! curves.

use rand::Rng;
use thiserror::Error;

use crate::gauss::{GaussDiagram, Shape};
use crate::morse::{long_from_closed, PlaneCurve, Resolution};
use crate::notation::{from_braid, Braid};
use crate::polyknot::{braid_skeleton, from_f64, PolyKnot, P3};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FixtureError {
    #[error("braid [{0}] does not close to a knot")]
    NotAKnot(String),
    #[error("no generic position found after {0} attempts")]
    NoGenericPosition(usize),
}

const ATTEMPTS: usize = 64;

fn same_code(a: &GaussDiagram, b: &GaussDiagram) -> bool {
    let (sa, _, ea) = a.skeleton();
    let (sb, _, eb) = b.skeleton();
    sa == sb && ea == eb
}

/// Generic polygonal closure of a braid whose projection reads exactly the
/// braid's Gauss diagram.
pub fn generic_braid_knot<R: Rng>(rng: &mut R, braid: &Braid, shape: Shape) -> Result<PolyKnot, FixtureError> {
    let target = from_braid(braid).map_err(|_| FixtureError::NotAKnot(braid.to_string()))?;
    let skeleton = braid_skeleton(braid, shape);
    for _ in 0..ATTEMPTS {
        let knot = skeleton.perturbed(rng, 60, 1000);
        let Ok(curve) = PlaneCurve::project(&knot) else { continue };
        let g = curve.gauss_diagram(&Resolution::Heights).expect("projection has depths");
        if same_code(&g, &target) {
            return Ok(knot);
        }
    }
    Err(FixtureError::NoGenericPosition(ATTEMPTS))
}

fn sampled<R: Rng>(
    rng: &mut R,
    samples: usize,
    curve: impl Fn(f64) -> [f64; 3],
) -> Result<PolyKnot, FixtureError> {
    let base: Vec<P3> = (0..samples)
        .map(|i| {
            // off-phase sampling avoids the mirror symmetry t -> -t
            let t = std::f64::consts::TAU * (i as f64 + 0.37) / samples as f64;
            let [x, y, z] = curve(t);
            P3::new(from_f64(x, 1000), from_f64(y, 1000), from_f64(z, 1000))
        })
        .collect();
    let knot = PolyKnot::new(Shape::Closed, base).expect("distinct samples");
    if PlaneCurve::project(&knot).is_ok() {
        return Ok(knot);
    }
    for _ in 0..ATTEMPTS {
        let k = knot.perturbed(rng, 5, 1000);
        if PlaneCurve::project(&k).is_ok() {
            return Ok(k);
        }
    }
    Err(FixtureError::NoGenericPosition(ATTEMPTS))
}

/// Closed trefoil sampled from a smooth parametrisation, v₂ = 1.
pub fn trefoil<R: Rng>(rng: &mut R, samples: usize) -> Result<PolyKnot, FixtureError> {
    sampled(rng, samples, |t| {
        [t.sin() + 2.0 * (2.0 * t).sin(), t.cos() - 2.0 * (2.0 * t).cos(), -(3.0 * t).sin()]
    })
}

/// Closed figure-eight knot as a Lissajous-type curve, v₂ = −1.
pub fn figure_eight<R: Rng>(rng: &mut R, samples: usize) -> Result<PolyKnot, FixtureError> {
    sampled(rng, samples, |t| {
        let r = 2.0 + (2.0 * t).cos();
        [r * (3.0 * t).cos(), r * (3.0 * t).sin(), (4.0 * t).sin()]
    })
}

/// A slightly rotated regular polygon in the plane `z = 0`.
pub fn round_circle(samples: usize) -> PolyKnot {
    let vs = (0..samples)
        .map(|i| {
            let t = std::f64::consts::TAU * (i as f64 + 0.1) / samples as f64;
            P3::new(from_f64(5.0 * t.cos(), 1000), from_f64(5.0 * t.sin(), 1000), from_f64(0.0, 1))
        })
        .collect();
    PolyKnot::new(Shape::Closed, vs).expect("distinct samples")
}

/// Long version of a closed fixture.
pub fn long<R: Rng>(rng: &mut R, knot: &PolyKnot) -> Result<PolyKnot, FixtureError> {
    if let Ok(l) = long_from_closed(knot) {
        return Ok(l);
    }
    for _ in 0..ATTEMPTS {
        if let Ok(l) = long_from_closed(&knot.perturbed(rng, 2, 1000)) {
            return Ok(l);
        }
    }
    Err(FixtureError::NoGenericPosition(ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::casson::v2_gauss;
    use crate::morse::{v2_morse, v2_morse_closed};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn smooth_fixtures() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (knot, v2) in [(trefoil(&mut rng, 30).unwrap(), 1), (figure_eight(&mut rng, 30).unwrap(), -1)] {
            let curve = PlaneCurve::project(&knot).unwrap();
            let g = curve.gauss_diagram(&Resolution::Heights).unwrap();
            assert_eq!(v2_gauss(&g), v2);
            assert_eq!(v2_morse_closed(&curve, &Resolution::Heights), Ok(v2));
            let l = long(&mut rng, &knot).unwrap();
            assert_eq!(v2_morse(&PlaneCurve::project(&l).unwrap(), &Resolution::Heights), Ok(v2));
        }
    }

    #[test]
    fn circle_is_trivial() {
        let c = PlaneCurve::project(&round_circle(24)).unwrap();
        assert_eq!(c.stats().m, 1);
        assert_eq!(v2_morse_closed(&c, &Resolution::Heights), Ok(0));
    }

    #[test]
    fn braid_closures_read_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for word in ["s1 s1 s1", "s1 -s2 s1 -s2", "s1", "s1 s2", "s1 s1 s1 s1 s1 s2 -s1 s2"] {
            let braid = Braid::parse(word).unwrap();
            let v2 = v2_gauss(&from_braid(&braid).unwrap());
            for shape in [Shape::Long, Shape::Closed] {
                let knot = generic_braid_knot(&mut rng, &braid, shape).unwrap();
                let curve = PlaneCurve::project(&knot).unwrap();
                let got = match shape {
                    Shape::Long => v2_morse(&curve, &Resolution::Heights),
                    Shape::Closed => v2_morse_closed(&curve, &Resolution::Heights),
                };
                assert_eq!(got, Ok(v2), "{word} {shape:?}");
            }
        }
    }
}
