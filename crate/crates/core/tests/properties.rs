mod common;

use common::{all_words, words_up_to, Table};
use mealy::certify::{
    finiteness_probe, order_probe, torsion_free_certificate, FinitenessOutcome, OrderOutcome,
};
use mealy::format::{parse_machine, serialize_machine};
use mealy::random::{random_machine, MachineClass};
use mealy::{
    classify, components, functions_equal, minimize, orbit_tree, restrict, LetterWord,
    MealyMachine, StateWord,
};
use proptest::prelude::*;

const BUDGET: usize = 200_000;

fn machine(
    class: MachineClass,
    max_states: usize,
    max_letters: usize,
) -> impl Strategy<Value = MealyMachine> {
    (1..=max_states, 1..=max_letters, any::<u64>())
        .prop_map(move |(q, l, seed)| random_machine(q, l, class, seed))
}

fn any_class() -> impl Strategy<Value = MachineClass> {
    prop_oneof![
        Just(MachineClass::Any),
        Just(MachineClass::Invertible),
        Just(MachineClass::Reversible),
        Just(MachineClass::InvRev),
    ]
}

/// A machine together with a state word and a letter word over it.
fn machine_with_words(
    max_u: usize,
    max_s: usize,
) -> impl Strategy<Value = (MealyMachine, StateWord, LetterWord)> {
    any_class()
        .prop_flat_map(|c| machine(c, 4, 3))
        .prop_flat_map(move |m| {
            let (q, l) = (m.num_states(), m.num_letters());
            (
                Just(m),
                prop::collection::vec(0..q, 0..=max_u).prop_map(StateWord::new),
                prop::collection::vec(0..l, 0..=max_s).prop_map(LetterWord::new),
            )
        })
}

fn connected_inv_rev_non_coreversible() -> impl Strategy<Value = MealyMachine> {
    (2usize..=4, 2usize..=3, any::<u64>())
        .prop_map(|(q, l, seed)| random_machine(q, l, MachineClass::InvRev, seed))
        .prop_filter("connected and not coreversible", |m| {
            components(m).len() == 1 && !classify(m).coreversible
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn run_matches_the_recursive_definition((m, u, s) in machine_with_words(4, 6)) {
        let t = Table::of(&m);
        let (out, fin) = m.run(&u, &s);
        let expected_out = t.rho(u.as_slice(), s.as_slice());
        prop_assert_eq!(out.as_slice(), expected_out.as_slice());
        let mut expected = u.as_slice().to_vec();
        for &i in s.as_slice() {
            expected = t.delta_letter(&expected, i);
        }
        prop_assert_eq!(fin.as_slice(), expected.as_slice());
    }

    #[test]
    fn run_preserves_length_and_prefixes((m, u, s) in machine_with_words(4, 6)) {
        let (out, fin) = m.run(&u, &s);
        prop_assert_eq!(out.len(), s.len());
        prop_assert_eq!(fin.len(), u.len());
        for k in 0..=s.len() {
            let (p, _) = m.run(&u, &LetterWord::new(s.as_slice()[..k].to_vec()));
            prop_assert_eq!(p.as_slice(), &out.as_slice()[..k]);
        }
    }

    #[test]
    fn run_factorizes_over_state_words(
        (m, u, s) in machine_with_words(6, 5),
        cut in 0usize..=6,
    ) {
        let cut = cut.min(u.len());
        let (u1, u2) = (u.prefix(cut), u.suffix(u.len() - cut));
        let (mid, f1) = m.run(&u1, &s);
        let (out, f2) = m.run(&u2, &mid);
        let (whole, fin) = m.run(&u, &s);
        prop_assert_eq!(whole, out);
        prop_assert_eq!(fin, f1.concat(&f2));
    }

    #[test]
    fn run_factorizes_over_letter_words(
        (m, u, s) in machine_with_words(4, 6),
        cut in 0usize..=6,
    ) {
        let cut = cut.min(s.len());
        let (s1, s2) = (&s.as_slice()[..cut], &s.as_slice()[cut..]);
        let (o1, mid) = m.run(&u, &LetterWord::new(s1.to_vec()));
        let (o2, fin) = m.run(&mid, &LetterWord::new(s2.to_vec()));
        let (whole, f) = m.run(&u, &s);
        let mut joined = o1.as_slice().to_vec();
        joined.extend_from_slice(o2.as_slice());
        prop_assert_eq!(whole.as_slice(), joined.as_slice());
        prop_assert_eq!(f, fin);
    }

    #[test]
    fn product_composes_actions(
        a in machine(MachineClass::Any, 3, 3),
        seed in any::<u64>(),
        s in prop::collection::vec(0usize..3, 0..6),
    ) {
        let b = random_machine(2, a.num_letters(), MachineClass::Any, seed);
        let p = a.product(&b).unwrap();
        let s: Vec<usize> = s.into_iter().map(|i| i % a.num_letters()).collect();
        let (ta, tb, tp) = (Table::of(&a), Table::of(&b), Table::of(&p));
        for x in 0..a.num_states() {
            for y in 0..b.num_states() {
                let pair = p.state_index(&format!("({},{})", a.state_name(x), b.state_name(y))).unwrap();
                prop_assert_eq!(pair, x * b.num_states() + y);
                prop_assert_eq!(tp.rho_state(pair, &s), tb.rho_state(y, &ta.rho_state(x, &s)));
            }
        }
    }

    #[test]
    fn dual_is_an_involution(m in any_class().prop_flat_map(|c| machine(c, 4, 4))) {
        prop_assert_eq!(m.dual().dual(), m.clone());
        prop_assert_eq!(classify(&m).invertible, classify(&m.dual()).reversible);
        prop_assert_eq!(classify(&m).reversible, classify(&m.dual()).invertible);
    }

    #[test]
    fn inverse_undoes_the_action((m, u, s) in machine_with_words(1, 6)) {
        prop_assume!(m.is_invertible() && !u.is_empty());
        let inv = m.inverse().unwrap();
        prop_assert_eq!(inv.inverse().unwrap(), m.clone());
        prop_assert_eq!(classify(&m).coreversible, classify(&inv).reversible);
        let x = u.as_slice()[0];
        let (image, _) = m.run(&u, &s);
        let (back, _) = inv.run(&StateWord::new(vec![x]), &image);
        prop_assert_eq!(back, s);
    }

    #[test]
    fn reversible_components_are_strongly_connected(m in machine(MachineClass::Reversible, 5, 3)) {
        let parts = components(&m);
        let strong = parts.strongly_connected.clone().unwrap();
        prop_assert!(strong.iter().all(|&b| b));
        let mut seen = vec![0usize; m.num_states()];
        for block in &parts.blocks {
            for &x in block {
                seen[x] += 1;
            }
            let sub = restrict(&m, block).unwrap();
            prop_assert!(sub.is_reversible());
        }
        prop_assert!(seen.iter().all(|&c| c == 1));
    }

    #[test]
    fn minimize_preserves_behavior(
        m in any_class().prop_flat_map(|c| machine(c, 6, 3)),
        probes in prop::collection::vec((any::<usize>(), prop::collection::vec(any::<usize>(), 0..8)), 32),
    ) {
        let min = minimize(&m);
        let (t, tm) = (Table::of(&m), Table::of(&min.machine));
        for (x, s) in probes {
            let x = x % m.num_states();
            let s: Vec<usize> = s.into_iter().map(|i| i % m.num_letters()).collect();
            prop_assert_eq!(t.rho_state(x, &s), tm.rho_state(min.class_of[x], &s));
        }
        prop_assert_eq!(minimize(&min.machine).machine.num_states(), min.machine.num_states());
    }

    #[test]
    fn functions_equal_agrees_with_short_words(
        m in any_class().prop_flat_map(|c| machine(c, 3, 2)),
        u in prop::collection::vec(any::<usize>(), 1..=3),
        v in prop::collection::vec(any::<usize>(), 1..=3),
    ) {
        let q = m.num_states();
        let u: Vec<usize> = u.into_iter().map(|x| x % q).collect();
        let v: Vec<usize> = v.into_iter().map(|x| x % q).collect();
        let t = Table::of(&m);
        let brute = words_up_to(m.num_letters(), 4)
            .iter()
            .all(|s| t.rho(&u, s) == t.rho(&v, s));
        let (su, sv) = (StateWord::new(u), StateWord::new(v));
        let decided = functions_equal(&m, &su, &sv, BUDGET).unwrap();
        if decided {
            prop_assert!(brute);
        }
        if !brute {
            prop_assert!(!decided);
        }
        prop_assert!(functions_equal(&m, &su, &su, BUDGET).unwrap());
        prop_assert_eq!(decided, functions_equal(&m, &sv, &su, BUDGET).unwrap());
    }

    #[test]
    fn finite_semigroups_match_truncated_enumeration(
        m in any_class().prop_flat_map(|c| machine(c, 2, 2)),
    ) {
        let verdict = finiteness_probe(&m, 6, 5_000);
        if let FinitenessOutcome::Finite { cardinality } = verdict.outcome {
            let t = Table::of(&m);
            let inputs = all_words(m.num_letters(), 6);
            let tabulate = |u: &[usize]| -> Vec<Vec<usize>> {
                inputs.iter().map(|s| t.rho(u, s)).collect()
            };
            let mut seen = std::collections::HashSet::new();
            let mut frontier: Vec<Vec<usize>> = Vec::new();
            for x in 0..m.num_states() {
                if seen.insert(tabulate(&[x])) {
                    frontier.push(vec![x]);
                }
            }
            while let Some(u) = frontier.pop() {
                for x in 0..m.num_states() {
                    let mut w = u.clone();
                    w.push(x);
                    if seen.insert(tabulate(&w)) {
                        frontier.push(w);
                    }
                }
            }
            prop_assert_eq!(seen.len(), cardinality);
        }
    }

    #[test]
    fn format_round_trips(m in any_class().prop_flat_map(|c| machine(c, 5, 4))) {
        let text = serialize_machine("prop", &m);
        let back = parse_machine(&text).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(serialize_machine("prop", &back), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn orbit_tree_partitions_every_level(m in machine(MachineClass::Reversible, 3, 3)) {
        let depth = 4;
        let tree = orbit_tree(&m, depth, BUDGET).unwrap();
        prop_assert!(!tree.is_truncated());
        let t = Table::of(&m);
        for n in 0..=depth {
            let mut sizes: Vec<usize> = tree
                .level(n)
                .iter()
                .map(|&id| tree.node(id).component.size)
                .collect();
            let mut expected = t.power_component_sizes(n);
            sizes.sort_unstable();
            expected.sort_unstable();
            prop_assert_eq!(sizes, expected);
            for w in all_words(m.num_states(), n) {
                let id = tree.node_of_word(&StateWord::new(w.clone())).unwrap();
                prop_assert_eq!(tree.node(id).component.size, t.orbit_size(&w));
                let members = tree.node(id).component.members.as_ref().unwrap();
                prop_assert!(members.iter().any(|x| x.as_slice() == w.as_slice()));
            }
        }
        for edge in tree.edges() {
            let parent = &tree.node(edge.parent).component;
            let child = &tree.node(edge.child).component;
            prop_assert_eq!(child.size, edge.label * parent.size);
            let prefix = child.representative.prefix(parent.level);
            prop_assert_eq!(tree.node_of_word(&prefix).unwrap(), edge.parent);
        }
        for id in 0..tree.nodes().len() {
            let path = tree.path_to(id);
            let product: usize = path.labels(&tree).iter().product();
            prop_assert_eq!(product, tree.node(id).component.size);
        }
    }

    #[test]
    fn powers_of_a_state_are_self_liftable(m in machine(MachineClass::Reversible, 3, 3)) {
        let depth = 5;
        let tree = orbit_tree(&m, depth, BUDGET).unwrap();
        for x in 0..m.num_states() {
            let path = tree.path_of_power(x, depth).unwrap();
            prop_assert_eq!(path.len(), depth);
            for pair in path.edges.windows(2) {
                prop_assert!(tree.is_liftable(pair[1], pair[0]).unwrap());
            }
            prop_assert!(tree.is_self_liftable(&path));
        }
    }

    #[test]
    fn self_liftable_paths_avoid_label_one(m in connected_inv_rev_non_coreversible()) {
        let tree = orbit_tree(&m, 4, BUDGET).unwrap();
        let (marked, paths) = tree.self_liftable_paths();
        for e in &marked {
            prop_assert!(tree.edge(*e).label > 1);
        }
        for p in &paths {
            prop_assert!(p.labels(&tree).iter().all(|&l| l > 1));
        }
    }

    #[test]
    fn product_components_see_every_state_of_a_connected_factor(
        a in machine(MachineClass::Reversible, 3, 3),
        seed in any::<u64>(),
        nb in 1usize..=3,
    ) {
        prop_assume!(components(&a).len() == 1);
        let b = random_machine(nb, a.num_letters(), MachineClass::Reversible, seed);
        let p = a.product(&b).unwrap();
        let non_coreversible = !classify(&a).coreversible;
        for block in components(&p).blocks {
            let mut firsts: Vec<usize> = block.iter().map(|&s| s / nb).collect();
            firsts.sort_unstable();
            firsts.dedup();
            prop_assert_eq!(firsts.len(), a.num_states());
            if non_coreversible {
                let flags = classify(&restrict(&p, &block).unwrap());
                prop_assert!(flags.reversible && !flags.coreversible);
            }
        }
    }

    #[test]
    fn states_of_qualifying_machines_have_infinite_order(m in connected_inv_rev_non_coreversible()) {
        for x in 0..m.num_states() {
            let r = order_probe(&m, &StateWord::new(vec![x]), 16, 20_000).unwrap();
            prop_assert!(
                matches!(r.outcome, OrderOutcome::InfiniteCertified { .. }),
                "state {} gave {:?}", x, r.outcome
            );
        }
    }

    #[test]
    fn certified_machines_only_have_identity_torsion(
        m in machine(MachineClass::InvRev, 3, 3),
        words in prop::collection::vec(prop::collection::vec(any::<usize>(), 1..=3), 8),
    ) {
        prop_assume!(torsion_free_certificate(&m).is_certified());
        let q = m.num_states();
        let singles = (0..q).map(|x| vec![x]);
        let random = words.into_iter().map(|w| w.into_iter().map(|x| x % q).collect::<Vec<_>>());
        for w in singles.chain(random) {
            let r = order_probe(&m, &StateWord::new(w), 16, 20_000).unwrap();
            if let OrderOutcome::Finite { index, period, is_identity_power } = r.outcome {
                prop_assert!(is_identity_power);
                prop_assert_eq!((index, period), (1, 1));
            }
        }
    }
}
