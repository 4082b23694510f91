//! Executable orbifold braid groups.
//!
//! * [`freeprod`]: free products `C_{q_1} * … * C_{q_m} * F_ρ` in normal form.
//! * [`braidword`]: classical braid words, the Artin action, strand traces.
//! * [`orbifold`]: pure orbifold braid words, `delta`/`section`, stretching,
//!   combing normal forms and the word problem.
//! * [`groupoid`]: finite groupoids, configuration groupoids and homomorphism
//!   checkers.
//! * [`arrangement`]: the `D^k_n` hyperplane arrangements over cyclotomic
//!   fields, intersection lattices, Falk patterns and supersolvability.
//! * [`verify`]: seeded property suites shared by the CLI and the tests.

pub mod arrangement;
pub mod braidword;
pub mod cyclo;
pub mod error;
pub mod freeprod;
pub mod groupoid;
pub mod kernel;
pub mod orbifold;
pub mod sample;
mod text;
pub mod verify;

pub use braidword::{BraidLetter, BraidWord, FreeGroupEndo, FreeWord};
pub use error::{Error, Result};
pub use freeprod::{FreeProductWord, Generator, ProductSignature, Syllable};
pub use orbifold::{CombedForm, OrbGenerator, OrbLetter, OrbWord, Surface};
pub use groupoid::{FiniteGroup, FiniteGroupoid, GroupAction, GroupoidHom, Label};
pub use arrangement::{Arrangement, Hyperplane};
pub use cyclo::CycloNumber;
