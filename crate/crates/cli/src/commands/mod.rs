pub mod geo;
pub mod graph;
