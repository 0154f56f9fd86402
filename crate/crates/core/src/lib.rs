//! Mealy automata: products, powers and duals, the labeled orbit tree of a
//! reversible machine, and certificates about the semigroups they generate.
//!
//! ```
//! use mealy::{catalog, certify};
//!
//! let l = catalog::lamplighter();
//! assert!(certify::torsion_free_certificate(&l).is_certified());
//! ```

pub mod catalog;
pub mod certify;
pub mod cli;
pub mod dot;
pub mod error;
pub mod format;
pub mod machine;
pub mod orbit;
pub mod random;
pub mod structure;

pub use error::{Error, Result};
pub use machine::{build_machine, LetterWord, MachineDescription, MealyMachine, StateWord};
pub use orbit::{component_of_word, orbit_tree, Component, OrbitTree, TreePath};
pub use structure::{
    classify, components, functions_equal, is_identity, minimize, restrict, PropertyFlags,
};
