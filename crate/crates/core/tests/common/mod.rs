//! Brute-force oracles shared by the integration suites. They read the raw
//! transition table and re-derive everything from the recursive definition
//! of the production functions, without going through the library's
//! `run`, closures or orbit code.

#![allow(dead_code)]

use std::collections::HashSet;

use mealy::random::{random_machine, MachineClass};
use mealy::{classify, components, MealyMachine};

#[derive(Clone, Debug)]
pub struct Table {
    pub nq: usize,
    pub nl: usize,
    pub next: Vec<Vec<usize>>,
    pub out: Vec<Vec<usize>>,
}

impl Table {
    pub fn of(m: &MealyMachine) -> Self {
        let (nq, nl) = (m.num_states(), m.num_letters());
        Table {
            nq,
            nl,
            next: (0..nq)
                .map(|x| (0..nl).map(|i| m.next(x, i)).collect())
                .collect(),
            out: (0..nq)
                .map(|x| (0..nl).map(|i| m.out(x, i)).collect())
                .collect(),
        }
    }

    /// `ρ_x(i s) = ρ_x(i) ρ_{δ_i(x)}(s)`.
    pub fn rho_state(&self, x: usize, s: &[usize]) -> Vec<usize> {
        match s.split_first() {
            None => Vec::new(),
            Some((&i, rest)) => {
                let mut v = vec![self.out[x][i]];
                v.extend(self.rho_state(self.next[x][i], rest));
                v
            }
        }
    }

    /// `ρ_u = ρ_{x_n} ∘ ... ∘ ρ_{x_1}`.
    pub fn rho(&self, u: &[usize], s: &[usize]) -> Vec<usize> {
        u.iter().fold(s.to_vec(), |acc, &x| self.rho_state(x, &acc))
    }

    /// `δ_i(u)` read off the cross-diagram column by column.
    pub fn delta_letter(&self, u: &[usize], i: usize) -> Vec<usize> {
        let mut letter = i;
        u.iter()
            .map(|&x| {
                let y = self.next[x][letter];
                letter = self.out[x][letter];
                y
            })
            .collect()
    }

    /// Size of the orbit of `u` under all `δ_i`.
    pub fn orbit_size(&self, u: &[usize]) -> usize {
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        seen.insert(u.to_vec());
        let mut stack = vec![u.to_vec()];
        while let Some(w) = stack.pop() {
            for i in 0..self.nl {
                let v = self.delta_letter(&w, i);
                if seen.insert(v.clone()) {
                    stack.push(v);
                }
            }
        }
        seen.len()
    }

    /// Size of the weakly connected component of `u` in the `|u|`-th power,
    /// by union-find over all words of that length.
    pub fn power_component_sizes(&self, n: usize) -> Vec<usize> {
        let words = all_words(self.nq, n);
        let index = |w: &[usize]| w.iter().fold(0, |acc, &x| acc * self.nq + x);
        let mut parent: Vec<usize> = (0..words.len()).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for (k, w) in words.iter().enumerate() {
            for i in 0..self.nl {
                let t = index(&self.delta_letter(w, i));
                let (a, b) = (find(&mut parent, k), find(&mut parent, t));
                parent[a] = b;
            }
        }
        let mut counts = std::collections::BTreeMap::new();
        for k in 0..words.len() {
            *counts.entry(find(&mut parent, k)).or_insert(0) += 1;
        }
        counts.into_values().collect()
    }
}

/// All words of length `len` over `0..k`, in lexicographic order.
pub fn all_words(k: usize, len: usize) -> Vec<Vec<usize>> {
    let mut words = vec![Vec::new()];
    for _ in 0..len {
        words = words
            .into_iter()
            .flat_map(|w| {
                (0..k).map(move |x| {
                    let mut v = w.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    words
}

/// All words of length `1..=max_len`.
pub fn words_up_to(k: usize, max_len: usize) -> Vec<Vec<usize>> {
    (1..=max_len).flat_map(|n| all_words(k, n)).collect()
}

pub fn is_connected(m: &MealyMachine) -> bool {
    components(m).len() == 1
}

/// The first `count` connected invertible reversible non-coreversible
/// machines found by scanning seeds upward from `first_seed`.
pub fn connected_inv_rev_non_coreversible(
    count: usize,
    max_states: usize,
    max_letters: usize,
    first_seed: u64,
) -> Vec<(u64, MealyMachine)> {
    let mut found = Vec::new();
    let mut seed = first_seed;
    while found.len() < count {
        let nq = 2 + (seed as usize) % (max_states - 1);
        let nl = 2 + (seed as usize / 7) % (max_letters - 1);
        let m = random_machine(nq, nl, MachineClass::InvRev, seed);
        if is_connected(&m) && !classify(&m).coreversible {
            found.push((seed, m));
        }
        seed += 1;
    }
    found
}

/// First repeat `(p, q - p)` in `ρ_{u^1}, ρ_{u^2}, ...` restricted to letter
/// words of length `len`, scanning up to `max_power`.
pub fn truncated_first_repeat(
    t: &Table,
    u: &[usize],
    len: usize,
    max_power: usize,
) -> Option<(usize, usize)> {
    let inputs = all_words(t.nl, len);
    let mut seen: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut current = inputs.clone();
    for q in 1..=max_power {
        current = current.iter().map(|s| t.rho(u, s)).collect();
        if let Some(p) = seen.iter().position(|f| *f == current) {
            return Some((p + 1, q - (p + 1)));
        }
        seen.push(current.clone());
    }
    None
}
