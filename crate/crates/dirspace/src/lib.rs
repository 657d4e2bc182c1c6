//! Directed spaces on finite and presented instances.

pub mod elem;
pub mod order;
pub mod report;
pub mod nab;
pub mod space;
pub mod ideal;
pub mod bposet;
pub mod algebra;
pub mod schema;
pub mod dot;
pub mod suite;
