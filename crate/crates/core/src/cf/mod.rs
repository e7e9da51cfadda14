//! Exact continued-fraction engine.

mod convergents;
mod cylinder;
mod expand;
mod input;
mod quotients;
mod surd;

pub use convergents::{convergents, Continuants, Convergent};
pub use cylinder::{approx_error_bounds, cylinder, ClosedEnd, Cylinder};
pub use expand::{expand, gauss_orbit, OrbitPoint, ORBIT_LOOKAHEAD};
pub use input::{DecimalInput, Generator, RealInput};
pub use quotients::PartialQuotients;
pub use surd::{QuadraticSurd, MAX_PERIOD_SEARCH};
