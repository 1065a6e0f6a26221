//! Proof kernel, realiser extraction and bounded realisability checking for
//! an intuitionistic three-sorted arithmetic, plus a small ordinal-notation
//! toolkit.

pub mod coding;
pub mod pca;
pub mod syntax;
pub mod kernel;
pub mod extractor;
pub mod realcheck;
pub mod ordinals;
