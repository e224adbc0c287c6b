pub mod poly;
pub mod groebner;
pub mod ideal;
pub mod invariants;
pub mod criteria;
pub mod session;
