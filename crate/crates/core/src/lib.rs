pub mod brackets;
pub mod continuant;
pub mod polyalg;
pub mod polygons;
pub mod polysets;
pub mod transforms;
pub mod varieties;
