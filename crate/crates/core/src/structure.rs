//! Structural classification, connected components, Nerode minimization and
//! the word problem for the maps induced by state words.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::machine::{MealyMachine, StateWord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PropertyFlags {
    pub invertible: bool,
    pub reversible: bool,
    pub coreversible: bool,
    pub bireversible: bool,
}

/// Reads off the invertible / reversible / coreversible flags.
///
/// Coreversibility fails exactly when two distinct states reach the same
/// target while writing the same letter.
pub fn classify(m: &MealyMachine) -> PropertyFlags {
    let invertible = m.is_invertible();
    let reversible = m.is_reversible();
    let coreversible = is_coreversible(m);
    PropertyFlags {
        invertible,
        reversible,
        coreversible,
        bireversible: invertible && reversible && coreversible,
    }
}

fn is_coreversible(m: &MealyMachine) -> bool {
    let nl = m.num_letters();
    let mut source: Vec<Option<usize>> = vec![None; m.num_states() * nl];
    for (x, _, y, j) in m.transitions() {
        match &mut source[y * nl + j] {
            Some(z) if *z != x => return false,
            slot => *slot = Some(x),
        }
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartitionKind {
    ConnectedComponents,
    NerodeClasses,
}

/// Disjoint blocks of state indices covering the stateset, each sorted, and
/// ordered by their least state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatePartition {
    pub kind: PartitionKind,
    pub blocks: Vec<Vec<usize>>,
    /// Per-block strong connectivity; only present for connected components.
    pub strongly_connected: Option<Vec<bool>>,
}

impl StatePartition {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Index of the block holding `state`.
    pub fn block_of(&self, state: usize) -> Option<usize> {
        self.blocks
            .iter()
            .position(|b| b.binary_search(&state).is_ok())
    }
}

/// Weakly connected components of the transition graph. Each block also
/// records whether it is strongly connected.
pub fn components(m: &MealyMachine) -> StatePartition {
    let n = m.num_states();
    let mut forward = vec![Vec::new(); n];
    let mut backward = vec![Vec::new(); n];
    for (x, _, y, _) in m.transitions() {
        forward[x].push(y);
        backward[y].push(x);
    }

    let mut block_of = vec![usize::MAX; n];
    let mut blocks = Vec::new();
    for start in 0..n {
        if block_of[start] != usize::MAX {
            continue;
        }
        let id = blocks.len();
        let mut block = vec![start];
        block_of[start] = id;
        let mut k = 0;
        while k < block.len() {
            let x = block[k];
            k += 1;
            for &y in forward[x].iter().chain(&backward[x]) {
                if block_of[y] == usize::MAX {
                    block_of[y] = id;
                    block.push(y);
                }
            }
        }
        block.sort_unstable();
        blocks.push(block);
    }

    let strongly_connected = blocks
        .iter()
        .map(|b| {
            let root = b[0];
            reach_count(root, &forward) == b.len() && reach_count(root, &backward) == b.len()
        })
        .collect();
    StatePartition {
        kind: PartitionKind::ConnectedComponents,
        blocks,
        strongly_connected: Some(strongly_connected),
    }
}

fn reach_count(root: usize, adj: &[Vec<usize>]) -> usize {
    let mut seen = vec![false; adj.len()];
    seen[root] = true;
    let mut stack = vec![root];
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count
}

/// The sub-machine on a transition-closed set of states, keeping the
/// original relative order.
pub fn restrict(m: &MealyMachine, block: &[usize]) -> Result<MealyMachine> {
    let mut block = block.to_vec();
    block.sort_unstable();
    block.dedup();
    if block.is_empty() {
        return Err(Error::EmptyStateSet);
    }
    let mut local = vec![usize::MAX; m.num_states()];
    for (k, &x) in block.iter().enumerate() {
        if x >= m.num_states() {
            return Err(Error::UnknownSymbol(format!("state #{x}")));
        }
        local[x] = k;
    }
    let nl = m.num_letters();
    let mut next = Vec::with_capacity(block.len() * nl);
    let mut out = Vec::with_capacity(block.len() * nl);
    for &x in &block {
        for i in 0..nl {
            let y = m.next(x, i);
            if local[y] == usize::MAX {
                return Err(Error::NotClosed {
                    from: m.state_name(x).to_owned(),
                });
            }
            next.push(local[y]);
            out.push(m.out(x, i));
        }
    }
    let states = block.iter().map(|&x| m.state_name(x).to_owned()).collect();
    Ok(MealyMachine::from_tables_unchecked(
        states,
        m.letters().to_vec(),
        next,
        out,
    ))
}

/// Result of Nerode minimization.
#[derive(Clone, Debug)]
pub struct Minimized {
    /// One state per class, named after the class's first member.
    pub machine: MealyMachine,
    /// Class index of every original state.
    pub class_of: Vec<usize>,
}

impl Minimized {
    pub fn partition(&self) -> StatePartition {
        let mut blocks = vec![Vec::new(); self.machine.num_states()];
        for (x, &c) in self.class_of.iter().enumerate() {
            blocks[c].push(x);
        }
        StatePartition {
            kind: PartitionKind::NerodeClasses,
            blocks,
            strongly_connected: None,
        }
    }
}

/// Coarsest partition in which equivalent states have identical output rows
/// and successors in equivalent classes.
pub fn minimize(m: &MealyMachine) -> Minimized {
    let class_of = nerode_classes(m.num_states(), m.num_letters(), |x, i| {
        (m.out(x, i), m.next(x, i))
    });
    let count = class_of.iter().max().map_or(0, |c| c + 1);
    let nl = m.num_letters();
    let mut first = vec![usize::MAX; count];
    for (x, &c) in class_of.iter().enumerate() {
        if first[c] == usize::MAX {
            first[c] = x;
        }
    }
    let mut next = Vec::with_capacity(count * nl);
    let mut out = Vec::with_capacity(count * nl);
    for &x in &first {
        for i in 0..nl {
            next.push(class_of[m.next(x, i)]);
            out.push(m.out(x, i));
        }
    }
    let states = first.iter().map(|&x| m.state_name(x).to_owned()).collect();
    Minimized {
        machine: MealyMachine::from_tables_unchecked(states, m.letters().to_vec(), next, out),
        class_of,
    }
}

/// Moore-style refinement to a fixpoint. `step(x, i)` gives the output and
/// successor of `x` on `i`. Classes are numbered by first appearance.
pub(crate) fn nerode_classes(
    n: usize,
    width: usize,
    step: impl Fn(usize, usize) -> (usize, usize),
) -> Vec<usize> {
    let mut class = renumber(n, |x| (0..width).map(|i| step(x, i).0).collect::<Vec<_>>());
    let mut count = class.iter().max().map_or(0, |c| c + 1);
    loop {
        let refined = renumber(n, |x| {
            let mut sig = Vec::with_capacity(width + 1);
            sig.push(class[x]);
            sig.extend((0..width).map(|i| class[step(x, i).1]));
            sig
        });
        let refined_count = refined.iter().max().map_or(0, |c| c + 1);
        class = refined;
        if refined_count == count {
            return class;
        }
        count = refined_count;
    }
}

fn renumber<K: std::hash::Hash + Eq>(n: usize, key: impl Fn(usize) -> K) -> Vec<usize> {
    let mut ids: HashMap<K, usize> = HashMap::new();
    (0..n)
        .map(|x| {
            let next_id = ids.len();
            *ids.entry(key(x)).or_insert(next_id)
        })
        .collect()
}

/// The forward closure of a set of state words under the single-letter dual
/// actions `u ↦ δ_i(u)`, recorded as a Mealy machine whose states are the
/// visited words. Two words induce the same map on letter words exactly when
/// they are Nerode-equivalent in this machine.
#[derive(Clone, Debug)]
pub struct WordClosure<'m> {
    machine: &'m MealyMachine,
    budget: usize,
    words: Vec<StateWord>,
    index: HashMap<StateWord, usize>,
    next: Vec<usize>,
    out: Vec<usize>,
}

impl<'m> WordClosure<'m> {
    pub fn new(machine: &'m MealyMachine, budget: usize) -> Self {
        WordClosure {
            machine,
            budget,
            words: Vec::new(),
            index: HashMap::new(),
            next: Vec::new(),
            out: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[StateWord] {
        &self.words
    }

    pub fn id_of(&self, word: &StateWord) -> Option<usize> {
        self.index.get(word).copied()
    }

    /// Output row `ρ_w(i)` of a closure element.
    pub fn output_row(&self, id: usize) -> &[usize] {
        let nl = self.machine.num_letters();
        &self.out[id * nl..(id + 1) * nl]
    }

    fn intern(&mut self, word: StateWord, queue: &mut VecDeque<usize>) -> Result<usize> {
        if let Some(&id) = self.index.get(&word) {
            return Ok(id);
        }
        if self.words.len() >= self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        let id = self.words.len();
        self.index.insert(word.clone(), id);
        self.words.push(word);
        let nl = self.machine.num_letters();
        self.next.resize((id + 1) * nl, usize::MAX);
        self.out.resize((id + 1) * nl, usize::MAX);
        queue.push_back(id);
        Ok(id)
    }

    /// Adds `word` and everything reachable from it; returns its id. On
    /// failure the closure is left as it was.
    pub fn insert(&mut self, word: &StateWord) -> Result<usize> {
        let before = self.words.len();
        let result = self.expand(word);
        if result.is_err() {
            for w in self.words.drain(before..) {
                self.index.remove(&w);
            }
            let nl = self.machine.num_letters();
            self.next.truncate(before * nl);
            self.out.truncate(before * nl);
        }
        result
    }

    fn expand(&mut self, word: &StateWord) -> Result<usize> {
        let mut queue = VecDeque::new();
        let root = self.intern(word.clone(), &mut queue)?;
        let nl = self.machine.num_letters();
        let mut buf = Vec::new();
        while let Some(id) = queue.pop_front() {
            for i in 0..nl {
                let j = self
                    .machine
                    .act_letter(self.words[id].as_slice(), i, &mut buf);
                let succ = self.intern(StateWord(buf.clone()), &mut queue)?;
                self.next[id * nl + i] = succ;
                self.out[id * nl + i] = j;
            }
        }
        Ok(root)
    }

    /// Nerode classes of all closure elements.
    pub fn classes(&self) -> Vec<usize> {
        let nl = self.machine.num_letters();
        nerode_classes(self.words.len(), nl, |x, i| {
            (self.out[x * nl + i], self.next[x * nl + i])
        })
    }

    /// True when every closure element writes each letter unchanged.
    pub fn all_identity(&self) -> bool {
        let nl = self.machine.num_letters();
        self.out
            .chunks(nl)
            .all(|row| row.iter().enumerate().all(|(i, &j)| i == j))
    }
}

/// Decides `ρ_u = ρ_v` on all letter words.
pub fn functions_equal(
    m: &MealyMachine,
    u: &StateWord,
    v: &StateWord,
    budget: usize,
) -> Result<bool> {
    if u.is_empty() || v.is_empty() {
        return Err(Error::EmptyWord);
    }
    let mut closure = WordClosure::new(m, budget);
    let a = closure.insert(u)?;
    let b = closure.insert(v)?;
    let classes = closure.classes();
    Ok(classes[a] == classes[b])
}

/// Decides whether `ρ_u` is the identity on all letter words.
pub fn is_identity(m: &MealyMachine, u: &StateWord, budget: usize) -> Result<bool> {
    if u.is_empty() {
        return Err(Error::EmptyWord);
    }
    let mut closure = WordClosure::new(m, budget);
    closure.insert(u)?;
    Ok(closure.all_identity())
}
