//! Graph isomorphism for graphs of clique-width at most three.

pub mod graph;
pub mod kexpr;
pub mod decomposition;
pub mod oracle;
pub mod invariant;
pub mod chlrr;
pub mod struct_iso;
pub mod engine;
pub mod io;
