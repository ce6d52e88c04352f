pub mod gf;
pub mod plane;
pub mod arcs;
pub mod bounds;
pub mod sdf;
pub mod construct;
pub mod search;
