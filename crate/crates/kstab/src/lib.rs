pub mod exact;
pub mod expr;
pub mod invariants;
pub mod lattice;
pub mod report;
pub mod scenario;
pub mod series;
pub mod zariski;
