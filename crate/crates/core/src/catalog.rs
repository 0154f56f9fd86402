//! Named machines used throughout the documentation and tests.

use crate::error::{Error, Result};
use crate::machine::{MachineDescription, MealyMachine};
use crate::structure::PropertyFlags;

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub key: &'static str,
    pub machine: MealyMachine,
    pub provenance: &'static str,
    /// Flags the machine is known to have.
    pub claimed: PropertyFlags,
}

pub const KEYS: [&str; 3] = ["lamplighter", "lamplighter-inverse", "J"];

const INV_REV_NON_BIREV: PropertyFlags = PropertyFlags {
    invertible: true,
    reversible: true,
    coreversible: false,
    bireversible: false,
};

pub fn catalog(key: &str) -> Result<CatalogEntry> {
    let entry = match key {
        "lamplighter" => CatalogEntry {
            key: "lamplighter",
            machine: lamplighter(),
            provenance: "2-state invertible reversible non-bireversible automaton generating the lamplighter group Z2 wr Z",
            claimed: INV_REV_NON_BIREV,
        },
        "lamplighter-inverse" => CatalogEntry {
            key: "lamplighter-inverse",
            machine: lamplighter_inverse(),
            provenance: "inverse of the lamplighter automaton, generating the same group",
            claimed: PropertyFlags {
                invertible: true,
                reversible: false,
                coreversible: true,
                bireversible: false,
            },
        },
        "J" => CatalogEntry {
            key: "J",
            machine: j_automaton(),
            provenance: "3-letter 6-state invertible reversible non-bireversible automaton",
            claimed: INV_REV_NON_BIREV,
        },
        _ => return Err(Error::UnknownKey(key.to_owned())),
    };
    Ok(entry)
}

/// The lamplighter automaton on states `x`, `y` over `{0, 1}`.
pub fn lamplighter() -> MealyMachine {
    MachineDescription::new(["x", "y"], ["0", "1"])
        .transition("x", "0", "y", "1")
        .transition("x", "1", "x", "0")
        .transition("y", "0", "x", "0")
        .transition("y", "1", "y", "1")
        .build()
        .expect("lamplighter table is complete")
}

pub fn lamplighter_inverse() -> MealyMachine {
    MachineDescription::new(["x^-1", "y^-1"], ["0", "1"])
        .transition("x^-1", "0", "x^-1", "1")
        .transition("x^-1", "1", "y^-1", "0")
        .transition("y^-1", "0", "x^-1", "0")
        .transition("y^-1", "1", "y^-1", "1")
        .build()
        .expect("inverse lamplighter table is complete")
}

/// Six states `a`..`f` over `{1, 2, 3}`.
pub fn j_automaton() -> MealyMachine {
    MachineDescription::new(["a", "b", "c", "d", "e", "f"], ["1", "2", "3"])
        .transition("a", "1", "b", "3")
        .transition("a", "2", "d", "2")
        .transition("a", "3", "f", "1")
        .transition("b", "1", "f", "3")
        .transition("b", "2", "f", "2")
        .transition("b", "3", "d", "1")
        .transition("c", "1", "a", "3")
        .transition("c", "2", "e", "2")
        .transition("c", "3", "b", "1")
        .transition("d", "1", "e", "3")
        .transition("d", "2", "a", "2")
        .transition("d", "3", "c", "1")
        .transition("e", "1", "c", "3")
        .transition("e", "2", "c", "2")
        .transition("e", "3", "a", "1")
        .transition("f", "1", "d", "3")
        .transition("f", "2", "b", "1")
        .transition("f", "3", "e", "2")
        .build()
        .expect("J table is complete")
}

/// The one-state machine `e` fixing every letter.
pub fn identity(letters: &[&str]) -> MealyMachine {
    let mut desc = MachineDescription::new(["e"], letters.iter().copied());
    for l in letters {
        desc = desc.transition("e", l, "e", l);
    }
    desc.build().expect("identity table is complete")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{classify, components};

    #[test]
    fn claimed_flags_hold() {
        for key in KEYS {
            let entry = catalog(key).unwrap();
            assert_eq!(classify(&entry.machine), entry.claimed, "{key}");
        }
    }

    #[test]
    fn j_is_connected_six_by_three() {
        let j = catalog("J").unwrap().machine;
        assert_eq!((j.num_states(), j.num_letters()), (6, 3));
        assert_eq!(components(&j).len(), 1);
    }

    #[test]
    fn inverse_entry_matches_construction() {
        assert_eq!(lamplighter().inverse().unwrap(), lamplighter_inverse());
    }

    #[test]
    fn unknown_key() {
        assert!(matches!(catalog("nope"), Err(Error::UnknownKey(k)) if k == "nope"));
    }
}
