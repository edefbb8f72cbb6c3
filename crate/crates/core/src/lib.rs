//! Two-colored diagrams for singular sequences of planar five-vortex central
//! configurations, with exact polynomial reasoning and a numerical companion.

pub mod atlas;
pub mod diagram;
pub mod exactpoly;
pub mod lemmas;
pub mod numeric;
pub mod vorticity;
