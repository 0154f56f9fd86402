//! Seeded random machines for property campaigns.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::machine::MealyMachine;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MachineClass {
    Any,
    Invertible,
    Reversible,
    InvRev,
}

impl FromStr for MachineClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "any" => Ok(MachineClass::Any),
            "invertible" => Ok(MachineClass::Invertible),
            "reversible" => Ok(MachineClass::Reversible),
            "inv-rev" => Ok(MachineClass::InvRev),
            other => Err(format!(
                "unknown class `{other}` (expected any, invertible, reversible or inv-rev)"
            )),
        }
    }
}

impl fmt::Display for MachineClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MachineClass::Any => "any",
            MachineClass::Invertible => "invertible",
            MachineClass::Reversible => "reversible",
            MachineClass::InvRev => "inv-rev",
        })
    }
}

/// A machine on states `q0..` and letters `0..`, deterministic in `seed`.
///
/// For invertible classes every output row is an independent uniform
/// permutation of the letters; for reversible classes every transition
/// column is an independent uniform permutation of the states. Unconstrained
/// entries are drawn uniformly.
///
/// # Panics
///
/// If either size is zero.
pub fn random_machine(
    num_states: usize,
    num_letters: usize,
    class: MachineClass,
    seed: u64,
) -> MealyMachine {
    assert!(
        num_states >= 1 && num_letters >= 1,
        "sizes must be positive"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cells = num_states * num_letters;
    let mut next = vec![0; cells];
    let mut out = vec![0; cells];

    let reversible = matches!(class, MachineClass::Reversible | MachineClass::InvRev);
    let invertible = matches!(class, MachineClass::Invertible | MachineClass::InvRev);

    for i in 0..num_letters {
        let mut column: Vec<usize> = (0..num_states).collect();
        if reversible {
            column.shuffle(&mut rng);
        } else {
            column
                .iter_mut()
                .for_each(|y| *y = rng.gen_range(0..num_states));
        }
        for (x, y) in column.into_iter().enumerate() {
            next[x * num_letters + i] = y;
        }
    }
    for x in 0..num_states {
        let row = &mut out[x * num_letters..(x + 1) * num_letters];
        if invertible {
            row.iter_mut().enumerate().for_each(|(i, j)| *j = i);
            row.shuffle(&mut rng);
        } else {
            row.iter_mut()
                .for_each(|j| *j = rng.gen_range(0..num_letters));
        }
    }

    let states = (0..num_states).map(|x| format!("q{x}")).collect();
    let letters = (0..num_letters).map(|i| i.to_string()).collect();
    MealyMachine::from_tables(states, letters, next, out).expect("generated tables are valid")
}
