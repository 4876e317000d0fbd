//! Frequency-lattice representation of functions: grids, coefficient
//! fields, discrete transforms, sharp-cube and smooth window restriction,
//! and exact band-limited products.

pub mod field;
pub mod grid;
pub mod product;
pub mod transform;
pub mod window;

pub use field::{cube_restrict, DataPair, SpectralField};
pub use grid::{bracket_weight, bracket_weight_freq, cube_of, in_cube, Coord, Domain, GridSpec};
pub use product::{pointwise_product, pointwise_product_checked};
pub use transform::{forward_transform, inverse_transform};
pub use window::{box_op, bump_profile, WindowBump};
