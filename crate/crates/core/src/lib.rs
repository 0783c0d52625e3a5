pub mod cyclotomic;
pub mod field;
pub mod linalg;
pub mod novikov;
pub mod parse;
pub mod poly;
pub mod rational;
pub mod snf;
pub mod polytope;
pub mod classes;
pub mod potential;
pub mod critical;
pub mod qh;
pub mod config;
pub mod pipeline;
pub mod fixtures;
pub mod verify;
