pub mod arrangement;
pub mod certificate;
pub mod corpus;
pub mod game;
pub mod graph;
pub mod pauli;
pub mod planarity;
pub mod realization;
pub mod sign;
