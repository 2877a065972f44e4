pub mod decoder;
pub mod error;
pub mod experiments;
pub mod gadget;
pub mod graph;
pub mod lattice;
pub mod math;
pub mod noise;
pub mod protocol;
pub mod seed;
