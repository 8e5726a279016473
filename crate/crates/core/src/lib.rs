//! Closed pattern mining over confluent pattern languages.
//!
//! A *confluence* is a finite poset whose principal up-sets are lattices; it
//! may have several minimal elements. Families of connected subgraphs are the
//! motivating example: the intersection of two connected subgraphs need not be
//! connected, but the union of two connected subgraphs sharing a connected
//! part is. Over such languages support closure is still a closure operator,
//! computed per minimal element as `p_m ∘ int ∘ ext`, and closed patterns can
//! be listed by depth-first augmentation with two exclusion lists.
//!
//! Layout:
//!
//! - [`order`]: explicit posets, lattices, closure and interior operators.
//! - [`local`]: explicit confluences, local meets/joins, subconfluences and
//!   the interior family `p_t`.
//! - [`setsys`]: implicit pattern families (connected vertex/edge sets,
//!   bounded-gap words, powersets, explicit lists).
//! - [`galois`]: object contexts, support closure, extensional abstractions.
//! - [`miner`]: the depth-first closed pattern enumerator.
//! - [`implications`]: support classes and the min-max implication basis.
//! - [`oracle`]: brute-force ground truth and randomized verification.
//! - [`text`]: line-oriented input formats.

pub mod galois;
pub mod implications;
pub mod local;
pub mod miner;
pub mod oracle;
pub mod order;
pub mod pattern;
pub mod setsys;
pub mod text;

pub use galois::{
    abstract_support_closure, support_closure, Concept, ConceptConfluence, ExtensionalAbstraction,
    ObjectContext,
};
pub use miner::{MineEvent, Miner, MinerConfig, TraceEvent};
pub use pattern::{Extent, Pattern, MAX_ITEMS};
pub use setsys::{
    ConnectedEdgeFamily, ConnectedVertexFamily, ExplicitFamily, Family, GraphSpec, KGapFamily,
    PowersetFamily,
};
