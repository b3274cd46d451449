pub mod corpus;
pub mod oracles;
