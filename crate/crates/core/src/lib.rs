//! Ranked trees, finite tree automata, tree homomorphisms, tree
//! bimorphisms and top-down tree transducers with look-ahead.
//!
//! The constructions centre on quasi-alphabetic bimorphisms: their
//! canonical form over a product alphabet, closure under union, embedding
//! into alphabetic bimorphisms, compilation into linear top-down
//! transducers with finite look-ahead, and the synchronous product of two
//! context-free grammars.

pub mod alphabet;
pub mod bimorphism;
pub mod cfg;
pub mod error;
pub mod fta;
pub mod hom;
pub mod random;
pub mod syntax;
pub mod transducer;
pub mod tree;

pub use bimorphism::{BimClass, Bimorphism, ProductAlphabet, WordPair};
pub use cfg::{Cfg, Production};
pub use alphabet::{LeafAlphabet, RankedAlphabet, Signature, Symbol};
pub use error::{Error, Result};
pub use fta::{Fta, FtaBuilder, FtaRule, StateId};
pub use hom::{HeightBounds, HomClass, TreeHom};
pub use transducer::{Lookahead, Rhs, TdClass, TdRule, Transducer};
pub use tree::{Context, Position, Tree, Word};
