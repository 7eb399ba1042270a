pub mod afcore;
pub mod checks;
pub mod fixtures;
pub mod graph;
pub mod ktheory;
pub mod matrix;
pub mod zmodule;
