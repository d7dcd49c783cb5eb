//! Finite, exactly checkable models of string homology for knots and links
//! in Euclidean space.

pub mod exactlin;
pub mod chords;
pub mod cli;
pub mod cord;
pub mod free_dga;
pub mod specseq;
