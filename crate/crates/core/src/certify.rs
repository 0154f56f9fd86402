//! Certificate-producing decision procedures: torsion-freeness of the
//! generated semigroup, order of single elements, finiteness of the
//! semigroup and connectivity of all powers.
//!
//! Every verdict carries the facts it was derived from. Where no finite
//! computation can settle a question the verdict is `Unknown` together with
//! the evidence gathered so far.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::machine::{MealyMachine, StateWord};
use crate::orbit::{orbit_members, orbit_tree, power_component_sizes};
use crate::structure::{classify, components, restrict, PropertyFlags, WordClosure};

/// A structured fact backing a verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "fact", rename_all = "kebab-case")]
pub enum Reason {
    MachineFlags {
        flags: PropertyFlags,
    },
    ComponentFlags {
        states: Vec<String>,
        flags: PropertyFlags,
    },
    ElementComponent {
        level: usize,
        size: usize,
        flags: PropertyFlags,
    },
    Note {
        text: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Precondition {
    NotInvertible,
    NotReversible,
    BireversibleComponent { states: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum TorsionOutcome {
    Certified,
    NotApplicable { failed: Precondition },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionFreeVerdict {
    #[serde(flatten)]
    pub outcome: TorsionOutcome,
    pub reasons: Vec<Reason>,
}

impl TorsionFreeVerdict {
    pub fn is_certified(&self) -> bool {
        self.outcome == TorsionOutcome::Certified
    }
}

fn block_names(m: &MealyMachine, block: &[usize]) -> Vec<String> {
    block.iter().map(|&x| m.state_name(x).to_owned()).collect()
}

/// Certifies that the semigroup generated by `m` is torsion-free when `m`
/// is invertible, reversible, and none of its connected components is
/// bireversible (equivalently, none is coreversible).
pub fn torsion_free_certificate(m: &MealyMachine) -> TorsionFreeVerdict {
    let flags = classify(m);
    let mut reasons = vec![Reason::MachineFlags { flags }];
    let failed = if !flags.invertible {
        Some(Precondition::NotInvertible)
    } else if !flags.reversible {
        Some(Precondition::NotReversible)
    } else {
        let mut failed = None;
        for block in components(m).blocks {
            let sub = restrict(m, &block).expect("connected components are closed");
            let sub_flags = classify(&sub);
            let states = block_names(m, &block);
            reasons.push(Reason::ComponentFlags {
                states: states.clone(),
                flags: sub_flags,
            });
            if sub_flags.coreversible && failed.is_none() {
                failed = Some(Precondition::BireversibleComponent { states });
            }
        }
        failed
    };
    let outcome = match failed {
        None => TorsionOutcome::Certified,
        Some(failed) => TorsionOutcome::NotApplicable { failed },
    };
    TorsionFreeVerdict { outcome, reasons }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InfiniteReason {
    /// A state of a connected invertible reversible non-bireversible machine.
    StateOfNonBireversibleMachine,
    /// The component of the word in its power is a connected invertible
    /// reversible non-bireversible machine having the word as a state.
    WordInNonBireversibleComponent,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum OrderOutcome {
    /// `ρ_{u^index} = ρ_{u^(index+period)}` with both minimal.
    Finite {
        index: usize,
        period: usize,
        is_identity_power: bool,
    },
    InfiniteCertified {
        reason: InfiniteReason,
    },
    /// Sizes of the components of `u, u², ...` as far as the budget allowed.
    Unknown {
        component_size_trace: Vec<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderResult {
    #[serde(flatten)]
    pub outcome: OrderOutcome,
    pub reasons: Vec<Reason>,
}

/// Outcome of searching `ρ_u, ρ_{u²}, ...` for a repetition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Repetition {
    Found {
        index: usize,
        period: usize,
        is_identity_power: bool,
    },
    /// No repeat among the first `max_power` powers.
    NotWithin { max_power: usize },
    /// The closure outgrew the budget before a repeat showed up.
    BudgetExhausted { powers_checked: usize },
}

/// Compares the maps induced by `u, u², ..., u^max_power` against each
/// other and against the identity, stopping at the first repeat.
pub fn detect_repetition(
    m: &MealyMachine,
    u: &StateWord,
    max_power: usize,
    budget: usize,
) -> Result<Repetition> {
    if u.is_empty() {
        return Err(Error::EmptyWord);
    }
    let mut closure = WordClosure::new(m, budget.max(1));
    let identity = closure.insert(&StateWord::empty())?;
    // Classes of closure elements never change as the closure grows, so
    // powers are inserted in doubling batches and classified once per batch.
    let mut powers: Vec<usize> = Vec::new();
    let mut batch_end = 1;
    let mut exhausted = false;
    while powers.len() < max_power && !exhausted {
        batch_end = (batch_end * 2).min(max_power);
        for q in powers.len() + 1..=batch_end {
            match closure.insert(&u.pow(q)) {
                Ok(id) => powers.push(id),
                Err(Error::BudgetExceeded(_)) => {
                    exhausted = true;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        let classes = closure.classes();
        let mut first_seen: HashMap<usize, usize> = HashMap::new();
        for (k, &id) in powers.iter().enumerate() {
            if let Some(&p) = first_seen.get(&classes[id]) {
                let is_identity_power = powers[..k]
                    .iter()
                    .any(|&pid| classes[pid] == classes[identity]);
                return Ok(Repetition::Found {
                    index: p + 1,
                    period: k - p,
                    is_identity_power,
                });
            }
            first_seen.insert(classes[id], k);
        }
    }
    if exhausted {
        return Ok(Repetition::BudgetExhausted {
            powers_checked: powers.len(),
        });
    }
    Ok(Repetition::NotWithin { max_power })
}

/// Sizes of the forward orbits of `u, u², ..., u^max_power`, stopping early
/// once an orbit exceeds the budget. For reversible machines these are the
/// component sizes.
pub fn component_size_trace(
    m: &MealyMachine,
    u: &StateWord,
    max_power: usize,
    budget: usize,
) -> Vec<usize> {
    let mut trace = Vec::new();
    for n in 1..=max_power {
        match orbit_members(m, &u.pow(n), budget) {
            Ok(members) => trace.push(members.len()),
            Err(_) => break,
        }
    }
    trace
}

/// Tries, in order: a structural certificate of infinite order, detection of
/// a repetition among the powers, and finally reports the component sizes of
/// the powers as evidence.
pub fn order_probe(
    m: &MealyMachine,
    u: &StateWord,
    max_power: usize,
    budget: usize,
) -> Result<OrderResult> {
    if u.is_empty() {
        return Err(Error::EmptyWord);
    }
    let flags = classify(m);
    let mut reasons = vec![Reason::MachineFlags { flags }];

    if flags.invertible && flags.reversible {
        if let Some(component) = materialize_component(m, u, budget) {
            let cflags = classify(&component);
            reasons.push(Reason::ElementComponent {
                level: u.len(),
                size: component.num_states(),
                flags: cflags,
            });
            if cflags.invertible && cflags.reversible && !cflags.coreversible {
                let reason = if u.len() == 1 {
                    InfiniteReason::StateOfNonBireversibleMachine
                } else {
                    InfiniteReason::WordInNonBireversibleComponent
                };
                return Ok(OrderResult {
                    outcome: OrderOutcome::InfiniteCertified { reason },
                    reasons,
                });
            }
        } else {
            reasons.push(Reason::Note {
                text: format!("component of the word exceeds the budget of {budget}"),
            });
        }
    }

    match detect_repetition(m, u, max_power, budget)? {
        Repetition::Found {
            index,
            period,
            is_identity_power,
        } => Ok(OrderResult {
            outcome: OrderOutcome::Finite {
                index,
                period,
                is_identity_power,
            },
            reasons,
        }),
        other => {
            reasons.push(Reason::Note {
                text: match other {
                    Repetition::NotWithin { max_power } => {
                        format!("no repetition among the first {max_power} powers")
                    }
                    Repetition::BudgetExhausted { powers_checked } => format!(
                        "closure exceeded the budget after {powers_checked} powers without a repetition"
                    ),
                    Repetition::Found { .. } => unreachable!(),
                },
            });
            Ok(OrderResult {
                outcome: OrderOutcome::Unknown {
                    component_size_trace: component_size_trace(m, u, max_power, budget),
                },
                reasons,
            })
        }
    }
}

/// The component of `u` in its power as a standalone machine, or `None` when
/// it exceeds the budget.
fn materialize_component(m: &MealyMachine, u: &StateWord, budget: usize) -> Option<MealyMachine> {
    let members = orbit_members(m, u, budget).ok()?;
    let nl = m.num_letters();
    let mut next = Vec::with_capacity(members.len() * nl);
    let mut out = Vec::with_capacity(members.len() * nl);
    let mut buf = Vec::new();
    for w in &members {
        for i in 0..nl {
            out.push(m.act_letter(w.as_slice(), i, &mut buf));
            let target = members
                .binary_search_by(|v| v.as_slice().cmp(buf.as_slice()))
                .expect("orbits are closed");
            next.push(target);
        }
    }
    let names = members.iter().map(|w| m.format_state_word(w)).collect();
    Some(MealyMachine::from_tables_unchecked(
        names,
        m.letters().to_vec(),
        next,
        out,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InfiniteSemigroupReason {
    /// Invertible, reversible, and not bireversible: the generated group is
    /// infinite.
    InvertibleReversibleNonBireversible,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum FinitenessOutcome {
    Finite {
        cardinality: usize,
    },
    InfiniteCertified {
        reason: InfiniteSemigroupReason,
    },
    /// Largest component size of each power `1..`, as far as computed.
    Unknown {
        level_size_trace: Vec<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FinitenessVerdict {
    #[serde(flatten)]
    pub outcome: FinitenessOutcome,
    pub reasons: Vec<String>,
}

/// Decides finiteness of the generated semigroup where possible.
pub fn finiteness_probe(m: &MealyMachine, max_level: usize, budget: usize) -> FinitenessVerdict {
    let flags = classify(m);
    let mut reasons = Vec::new();
    if flags.invertible && flags.reversible {
        let non_coreversible = components(m).blocks.into_iter().find(|block| {
            let sub = restrict(m, block).expect("connected components are closed");
            !classify(&sub).coreversible
        });
        if let Some(block) = non_coreversible {
            reasons.push(format!(
                "machine is invertible and reversible; component {{{}}} is not coreversible, so the machine is not bireversible",
                block_names(m, &block).join(", ")
            ));
            reasons.push(
                "an invertible reversible non-bireversible machine generates an infinite group"
                    .to_owned(),
            );
            reasons.push(
                "a finite semigroup of permutations is a group, so an infinite generated group forces infinitely many distinct maps in the generated semigroup".to_owned(),
            );
            return FinitenessVerdict {
                outcome: FinitenessOutcome::InfiniteCertified {
                    reason: InfiniteSemigroupReason::InvertibleReversibleNonBireversible,
                },
                reasons,
            };
        }
    }

    match enumerate_semigroup(m, budget) {
        Some(cardinality) => {
            reasons.push(format!(
                "closure under right multiplication by generators completed with {cardinality} distinct maps"
            ));
            FinitenessVerdict {
                outcome: FinitenessOutcome::Finite { cardinality },
                reasons,
            }
        }
        None => {
            reasons.push(format!(
                "element enumeration exceeded the budget of {budget}"
            ));
            let trace = max_component_trace(m, max_level, budget);
            reasons.push(
                "bounded component sizes of all powers characterize finiteness; a finite trace is evidence only".to_owned(),
            );
            FinitenessVerdict {
                outcome: FinitenessOutcome::Unknown {
                    level_size_trace: trace,
                },
                reasons,
            }
        }
    }
}

/// Number of distinct maps `ρ_u` over non-empty `u`, or `None` when the
/// enumeration exceeds the budget.
pub fn enumerate_semigroup(m: &MealyMachine, budget: usize) -> Option<usize> {
    let mut closure = WordClosure::new(m, budget.max(1));
    let mut reps: Vec<usize> = Vec::new();
    let mut frontier: Vec<StateWord> = (0..m.num_states()).map(|x| StateWord(vec![x])).collect();
    while !frontier.is_empty() {
        let ids: Vec<usize> = frontier
            .iter()
            .map(|w| closure.insert(w))
            .collect::<Result<_>>()
            .ok()?;
        let classes = closure.classes();
        let mut known: std::collections::HashSet<usize> =
            reps.iter().map(|&r| classes[r]).collect();
        let mut fresh = Vec::new();
        for (w, id) in frontier.iter().zip(ids) {
            if known.insert(classes[id]) {
                reps.push(id);
                fresh.push(w.clone());
            }
        }
        frontier = fresh
            .iter()
            .flat_map(|w| (0..m.num_states()).map(move |x| w.pushed(x)))
            .collect();
    }
    Some(reps.len())
}

/// Largest component size of the powers `1..=max_level`, stopping once a
/// power no longer fits in the budget.
pub fn max_component_trace(m: &MealyMachine, max_level: usize, budget: usize) -> Vec<usize> {
    let mut trace = Vec::new();
    for n in 1..=max_level {
        match power_component_sizes(m, n, budget) {
            Ok(sizes) => trace.push(sizes.into_iter().max().unwrap_or(0)),
            Err(_) => break,
        }
    }
    trace
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TransitivityReport {
    pub checked_depth: usize,
    pub connected_at_every_level: bool,
}

/// Checks whether every power up to `depth` is connected.
pub fn transitivity_probe(
    m: &MealyMachine,
    depth: usize,
    budget: usize,
) -> Result<TransitivityReport> {
    let tree = orbit_tree(m, depth, budget)?;
    let connected = (1..=tree.depth()).all(|k| tree.level(k).len() == 1);
    if connected && tree.is_truncated() {
        return Err(Error::BudgetExceeded(budget));
    }
    Ok(TransitivityReport {
        checked_depth: depth,
        connected_at_every_level: connected,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreenessNote {
    pub precondition_met: bool,
    pub note: String,
}

/// Checks whether `m` is a connected 3-state invertible reversible
/// non-bireversible machine. Such machines are known from the literature
/// to generate free semigroups; the conclusion itself is not certified here.
pub fn free_semigroup_precondition(m: &MealyMachine) -> FreenessNote {
    let flags = classify(m);
    let connected = components(m).len() == 1;
    let met = m.num_states() == 3
        && connected
        && flags.invertible
        && flags.reversible
        && !flags.bireversible;
    let note = if met {
        "connected 3-state invertible reversible non-bireversible: known to generate a free semigroup (literature result, not certified)".to_owned()
    } else {
        "precondition for the 3-state freeness result does not hold".to_owned()
    };
    FreenessNote {
        precondition_met: met,
        note,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    const BUDGET: usize = 100_000;

    #[test]
    fn torsion_free_catalog() {
        assert!(torsion_free_certificate(&catalog::lamplighter()).is_certified());
        assert!(torsion_free_certificate(&catalog::j_automaton()).is_certified());
        let v = torsion_free_certificate(&catalog::lamplighter_inverse());
        assert_eq!(
            v.outcome,
            TorsionOutcome::NotApplicable {
                failed: Precondition::NotReversible
            }
        );
    }

    #[test]
    fn bireversible_component_blocks_certificate() {
        let l = catalog::lamplighter();
        let e = catalog::identity(&["0", "1"]);
        let v = torsion_free_certificate(&l.disjoint_union(&e).unwrap());
        assert_eq!(
            v.outcome,
            TorsionOutcome::NotApplicable {
                failed: Precondition::BireversibleComponent {
                    states: vec!["e".into()]
                }
            }
        );
        assert_eq!(v.reasons.len(), 3);
    }

    #[test]
    fn order_examples() {
        let l = catalog::lamplighter();
        let r = order_probe(&l, &l.parse_state_word("x").unwrap(), 16, BUDGET).unwrap();
        assert_eq!(
            r.outcome,
            OrderOutcome::InfiniteCertified {
                reason: InfiniteReason::StateOfNonBireversibleMachine
            }
        );

        let u = l.disjoint_union(&l.inverse().unwrap()).unwrap();
        let w = u.parse_state_word("y x^-1").unwrap();
        let r = order_probe(&u, &w, 16, BUDGET).unwrap();
        assert_eq!(
            r.outcome,
            OrderOutcome::Finite {
                index: 1,
                period: 2,
                is_identity_power: true
            }
        );

        let e = catalog::identity(&["0", "1"]);
        let r = order_probe(&e, &StateWord(vec![0]), 16, BUDGET).unwrap();
        assert_eq!(
            r.outcome,
            OrderOutcome::Finite {
                index: 1,
                period: 1,
                is_identity_power: true
            }
        );
        assert_eq!(
            order_probe(&e, &StateWord::empty(), 4, BUDGET),
            Err(Error::EmptyWord)
        );
    }

    #[test]
    fn order_of_a_longer_word_uses_its_component() {
        let l = catalog::lamplighter();
        let r = order_probe(&l, &l.parse_state_word("x y y").unwrap(), 8, BUDGET).unwrap();
        assert_eq!(
            r.outcome,
            OrderOutcome::InfiniteCertified {
                reason: InfiniteReason::WordInNonBireversibleComponent
            }
        );
    }

    #[test]
    fn idempotent_non_identity_element() {
        // constant map to 0: ρ_z ∘ ρ_z = ρ_z, not the identity
        let z = crate::machine::MachineDescription::new(["z"], ["0", "1"])
            .transition("z", "0", "z", "0")
            .transition("z", "1", "z", "0")
            .build()
            .unwrap();
        let r = order_probe(&z, &StateWord(vec![0]), 8, BUDGET).unwrap();
        assert_eq!(
            r.outcome,
            OrderOutcome::Finite {
                index: 1,
                period: 1,
                is_identity_power: false
            }
        );
        assert_eq!(
            finiteness_probe(&z, 4, BUDGET).outcome,
            FinitenessOutcome::Finite { cardinality: 1 }
        );
    }

    #[test]
    fn unknown_when_power_limit_is_hit() {
        // the adding machine: bireversible-free but not reversible
        let adder = crate::machine::MachineDescription::new(["a", "e"], ["0", "1"])
            .transition("a", "0", "e", "1")
            .transition("a", "1", "a", "0")
            .transition("e", "0", "e", "0")
            .transition("e", "1", "e", "1")
            .build()
            .unwrap();
        let r = order_probe(&adder, &StateWord(vec![0]), 5, BUDGET).unwrap();
        match r.outcome {
            OrderOutcome::Unknown {
                component_size_trace,
            } => assert_eq!(component_size_trace.len(), 5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn finiteness_examples() {
        let e = catalog::identity(&["0", "1"]);
        assert_eq!(
            finiteness_probe(&e, 6, BUDGET).outcome,
            FinitenessOutcome::Finite { cardinality: 1 }
        );
        for m in [catalog::lamplighter(), catalog::j_automaton()] {
            let v = finiteness_probe(&m, 6, BUDGET);
            assert_eq!(
                v.outcome,
                FinitenessOutcome::InfiniteCertified {
                    reason: InfiniteSemigroupReason::InvertibleReversibleNonBireversible
                }
            );
            assert!(v
                .reasons
                .iter()
                .any(|r| r.contains("finite semigroup of permutations")));
        }
    }

    #[test]
    fn finiteness_unknown_for_the_adding_machine() {
        let adder = crate::machine::MachineDescription::new(["a", "e"], ["0", "1"])
            .transition("a", "0", "e", "1")
            .transition("a", "1", "a", "0")
            .transition("e", "0", "e", "0")
            .transition("e", "1", "e", "1")
            .build()
            .unwrap();
        let v = finiteness_probe(&adder, 4, 5_000);
        match v.outcome {
            FinitenessOutcome::Unknown { level_size_trace } => {
                assert_eq!(level_size_trace, vec![2, 4, 8, 16])
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn transitivity_examples() {
        let l = catalog::lamplighter();
        let r = transitivity_probe(&l, 8, 1_000_000).unwrap();
        assert!(r.connected_at_every_level);
        let ll = l.disjoint_union(&l).unwrap();
        assert!(
            !transitivity_probe(&ll, 1, 1000)
                .unwrap()
                .connected_at_every_level
        );
        let e = catalog::identity(&["0", "1"]);
        assert!(
            transitivity_probe(&e, 7, 1000)
                .unwrap()
                .connected_at_every_level
        );
        assert_eq!(
            transitivity_probe(&l, 8, 100),
            Err(Error::BudgetExceeded(100))
        );
        assert_eq!(
            transitivity_probe(&catalog::lamplighter_inverse(), 2, 100),
            Err(Error::NotReversible)
        );
    }

    #[test]
    fn freeness_precondition() {
        assert!(!free_semigroup_precondition(&catalog::lamplighter()).precondition_met);
        let three = crate::random::random_machine(3, 2, crate::random::MachineClass::InvRev, 0);
        let note = free_semigroup_precondition(&three);
        let flags = classify(&three);
        assert_eq!(
            note.precondition_met,
            components(&three).len() == 1 && !flags.bireversible
        );
    }
}
