pub mod catalog;
pub mod exterior;
pub mod liealg;
pub mod linalg;
pub mod obstructions;
pub mod poly;
pub mod ring;
pub mod scalar;
pub mod search;
pub mod splitting;
pub mod su2hypo;
pub mod upoly;
