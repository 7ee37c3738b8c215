//! Periodic cubic lattice on the flat 3-torus with a compact `U(1)` connection
//! and a fixed `SU(n)` background.

mod background;
mod gauge;
mod geometry;
mod spinor_field;

pub use background::BackgroundField;
pub use gauge::{
    chern_flux, chern_vector, curvature, flux, gauge_transform, GaugeField, PlaquetteField, Plane,
    TripleField,
};
pub use geometry::LatticeGeometry;
pub use spinor_field::{covariant_derivative, l2_inner, SpinorField};

pub(crate) use gauge::plaquette_links;
pub(crate) use spinor_field::{check_inputs, transport};
