//! Computing the Casson knot invariant v₂ several independent ways.
//!
//! The combinatorial entry point is [`gauss::GaussDiagram`], built from a
//! Gauss code, PD code or braid word by the functions in [`notation`].

pub mod casson;
pub mod fixtures;
pub mod gauss;
pub mod geomint;
pub mod notation;
pub mod pairing;
pub mod polyknot;
pub mod moves;
pub mod morse;
pub mod natangle;
pub mod skein;

pub use casson::{arf, check_bound, v2_gauss, v2_sym, InvariantReport, Method};
pub use gauss::{Chord, End, Endpoint, GaussDiagram, Shape, Sign};
pub use notation::{from_braid_word, parse_gauss_code, parse_pd_code, torus_knot_2, Braid};
pub use pairing::{bracket, bracket_sum, ArrowPattern, PatternSum};
pub use skein::v2_skein;
