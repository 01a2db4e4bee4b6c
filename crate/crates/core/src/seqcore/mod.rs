//! Domain types shared by every engine: exponents, sparse sequences,
//! index windows and log-domain values.

mod logvalue;
mod params;
mod sequence;
mod window;

pub use logvalue::LogValue;
pub use params::MorreyParams;
pub use sequence::{mass_in_window, prefix_masses, MassIndex, PrefixMass, SparseSequence};
pub use window::Window;
