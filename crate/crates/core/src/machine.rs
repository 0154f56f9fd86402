//! Mealy machines and the production/transition semantics.
//!
//! States and letters are stored by index in declaration order. A state `x`
//! reading letter `i` moves to `next(x, i)` and writes `out(x, i)`. A state
//! word `u = x_1 .. x_n` acts on a letter word by feeding it through `x_1`
//! first, then `x_2`, and so on; its final state word is read off the same
//! cross-diagram.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Suffix marking an inverse-tagged state identifier.
pub const INVERSE_TAG: &str = "^-1";

/// A complete, deterministic, letter-to-letter transducer whose input and
/// output alphabets coincide.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MealyMachine {
    states: Vec<String>,
    letters: Vec<String>,
    next: Vec<usize>,
    out: Vec<usize>,
}

/// A finite word over the stateset, stored as state indices.
///
/// The derived ordering is lexicographic under declaration order, which is
/// what canonical component representatives use.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateWord(pub Vec<usize>);

/// A finite word over the alphabet, stored as letter indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LetterWord(pub Vec<usize>);

impl StateWord {
    pub fn new(states: Vec<usize>) -> Self {
        StateWord(states)
    }

    pub fn empty() -> Self {
        StateWord(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &StateWord) -> StateWord {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        StateWord(v)
    }

    pub fn pushed(&self, state: usize) -> StateWord {
        let mut v = Vec::with_capacity(self.len() + 1);
        v.extend_from_slice(&self.0);
        v.push(state);
        StateWord(v)
    }

    /// The `n`-fold concatenation of `self`.
    pub fn pow(&self, n: usize) -> StateWord {
        StateWord(self.0.repeat(n))
    }

    pub fn prefix(&self, len: usize) -> StateWord {
        StateWord(self.0[..len].to_vec())
    }

    pub fn suffix(&self, len: usize) -> StateWord {
        StateWord(self.0[self.len() - len..].to_vec())
    }
}

impl LetterWord {
    pub fn new(letters: Vec<usize>) -> Self {
        LetterWord(letters)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

/// One transition line of a machine description, by identifier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub from: String,
    pub input: String,
    pub to: String,
    pub output: String,
}

/// An unvalidated, name-based description of a machine.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MachineDescription {
    pub states: Vec<String>,
    pub alphabet: Vec<String>,
    pub transitions: Vec<Transition>,
}

impl MachineDescription {
    pub fn new<S: Into<String>, L: Into<String>>(
        states: impl IntoIterator<Item = S>,
        alphabet: impl IntoIterator<Item = L>,
    ) -> Self {
        MachineDescription {
            states: states.into_iter().map(Into::into).collect(),
            alphabet: alphabet.into_iter().map(Into::into).collect(),
            transitions: Vec::new(),
        }
    }

    /// Adds `from --input|output--> to`.
    pub fn transition(mut self, from: &str, input: &str, to: &str, output: &str) -> Self {
        self.transitions.push(Transition {
            from: from.to_owned(),
            input: input.to_owned(),
            to: to.to_owned(),
            output: output.to_owned(),
        });
        self
    }

    pub fn build(&self) -> Result<MealyMachine> {
        build_machine(self)
    }
}

pub(crate) fn check_identifier(name: &str) -> Result<()> {
    if name.is_empty() || name.contains('#') || name.chars().any(char::is_whitespace) {
        return Err(Error::InvalidIdentifier(name.to_owned()));
    }
    Ok(())
}

fn index_symbols(names: &[String]) -> Result<HashMap<&str, usize>> {
    let mut index = HashMap::with_capacity(names.len());
    for (k, name) in names.iter().enumerate() {
        check_identifier(name)?;
        if index.insert(name.as_str(), k).is_some() {
            return Err(Error::DuplicateSymbol(name.clone()));
        }
    }
    Ok(index)
}

/// Validates a description and returns the machine it denotes.
pub fn build_machine(desc: &MachineDescription) -> Result<MealyMachine> {
    if desc.states.is_empty() {
        return Err(Error::EmptyStateSet);
    }
    if desc.alphabet.is_empty() {
        return Err(Error::EmptyAlphabet);
    }
    let state_index = index_symbols(&desc.states)?;
    let letter_index = index_symbols(&desc.alphabet)?;
    let lookup = |table: &HashMap<&str, usize>, name: &str| {
        table
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownSymbol(name.to_owned()))
    };

    let width = desc.alphabet.len();
    let mut cells: Vec<Option<(usize, usize)>> = vec![None; desc.states.len() * width];
    for t in &desc.transitions {
        let from = lookup(&state_index, &t.from)?;
        let input = lookup(&letter_index, &t.input)?;
        let to = lookup(&state_index, &t.to)?;
        let output = lookup(&letter_index, &t.output)?;
        let cell = &mut cells[from * width + input];
        if cell.is_some() {
            return Err(Error::DuplicateTransition {
                state: t.from.clone(),
                letter: t.input.clone(),
            });
        }
        *cell = Some((to, output));
    }

    let mut next = Vec::with_capacity(cells.len());
    let mut out = Vec::with_capacity(cells.len());
    for (k, cell) in cells.into_iter().enumerate() {
        let (to, output) = cell.ok_or_else(|| Error::MissingTransition {
            state: desc.states[k / width].clone(),
            letter: desc.alphabet[k % width].clone(),
        })?;
        next.push(to);
        out.push(output);
    }
    Ok(MealyMachine {
        states: desc.states.clone(),
        letters: desc.alphabet.clone(),
        next,
        out,
    })
}

impl MealyMachine {
    /// Builds a machine from index tables laid out state-major
    /// (`table[state * num_letters + letter]`).
    pub fn from_tables(
        states: Vec<String>,
        letters: Vec<String>,
        next: Vec<usize>,
        out: Vec<usize>,
    ) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::EmptyStateSet);
        }
        if letters.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        index_symbols(&states)?;
        index_symbols(&letters)?;
        let cells = states.len() * letters.len();
        if next.len() != cells || out.len() != cells {
            return Err(Error::MissingTransition {
                state: states[next.len().min(out.len()) / letters.len()].clone(),
                letter: letters[next.len().min(out.len()) % letters.len()].clone(),
            });
        }
        if let Some(&bad) = next.iter().find(|&&y| y >= states.len()) {
            return Err(Error::UnknownSymbol(format!("state #{bad}")));
        }
        if let Some(&bad) = out.iter().find(|&&j| j >= letters.len()) {
            return Err(Error::UnknownSymbol(format!("letter #{bad}")));
        }
        Ok(MealyMachine {
            states,
            letters,
            next,
            out,
        })
    }

    /// Same as [`from_tables`](Self::from_tables) without identifier checks;
    /// used for machines whose states are generated labels.
    pub(crate) fn from_tables_unchecked(
        states: Vec<String>,
        letters: Vec<String>,
        next: Vec<usize>,
        out: Vec<usize>,
    ) -> Self {
        debug_assert_eq!(next.len(), states.len() * letters.len());
        debug_assert_eq!(out.len(), states.len() * letters.len());
        MealyMachine {
            states,
            letters,
            next,
            out,
        }
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_letters(&self) -> usize {
        self.letters.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn state_name(&self, state: usize) -> &str {
        &self.states[state]
    }

    pub fn letter_name(&self, letter: usize) -> &str {
        &self.letters[letter]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn letter_index(&self, name: &str) -> Option<usize> {
        self.letters.iter().position(|s| s == name)
    }

    #[inline]
    pub fn next(&self, state: usize, letter: usize) -> usize {
        self.next[state * self.letters.len() + letter]
    }

    #[inline]
    pub fn out(&self, state: usize, letter: usize) -> usize {
        self.out[state * self.letters.len() + letter]
    }

    /// All transitions as `(from, input, to, output)` in declaration order.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, usize, usize, usize)> + '_ {
        let width = self.letters.len();
        (0..self.next.len()).map(move |k| (k / width, k % width, self.next[k], self.out[k]))
    }

    /// Parses a whitespace-separated list of state identifiers.
    pub fn parse_state_word(&self, text: &str) -> Result<StateWord> {
        text.split_whitespace()
            .map(|tok| {
                self.state_index(tok)
                    .ok_or_else(|| Error::UnknownSymbol(tok.to_owned()))
            })
            .collect::<Result<Vec<_>>>()
            .map(StateWord)
    }

    /// Parses a whitespace-separated list of letter identifiers.
    pub fn parse_letter_word(&self, text: &str) -> Result<LetterWord> {
        text.split_whitespace()
            .map(|tok| {
                self.letter_index(tok)
                    .ok_or_else(|| Error::UnknownSymbol(tok.to_owned()))
            })
            .collect::<Result<Vec<_>>>()
            .map(LetterWord)
    }

    pub fn format_state_word(&self, word: &StateWord) -> String {
        join_names(&self.states, &word.0)
    }

    pub fn format_letter_word(&self, word: &LetterWord) -> String {
        join_names(&self.letters, &word.0)
    }

    /// Applies the single-letter dual action to `word`: writes the final
    /// state word `δ_letter(word)` into `dest` and returns `ρ_word(letter)`.
    #[inline]
    pub fn act_letter(&self, word: &[usize], letter: usize, dest: &mut Vec<usize>) -> usize {
        dest.clear();
        let mut letter = letter;
        for &x in word {
            dest.push(self.next(x, letter));
            letter = self.out(x, letter);
        }
        letter
    }

    /// Returns `(ρ_u(s), δ_s(u))`.
    pub fn run(&self, u: &StateWord, s: &LetterWord) -> (LetterWord, StateWord) {
        let mut output = s.0.clone();
        let mut finals = Vec::with_capacity(u.len());
        for &x in &u.0 {
            let mut state = x;
            for letter in output.iter_mut() {
                let i = *letter;
                *letter = self.out(state, i);
                state = self.next(state, i);
            }
            finals.push(state);
        }
        (LetterWord(output), StateWord(finals))
    }

    /// The dual machine: states and letters swap roles, so that
    /// `x --i|j--> y` becomes `i --x|y--> j`.
    pub fn dual(&self) -> MealyMachine {
        let (nq, nl) = (self.num_states(), self.num_letters());
        let mut next = vec![0; nq * nl];
        let mut out = vec![0; nq * nl];
        for i in 0..nl {
            for x in 0..nq {
                next[i * nq + x] = self.out(x, i);
                out[i * nq + x] = self.next(x, i);
            }
        }
        MealyMachine {
            states: self.letters.clone(),
            letters: self.states.clone(),
            next,
            out,
        }
    }

    pub fn is_invertible(&self) -> bool {
        let nl = self.num_letters();
        (0..self.num_states()).all(|x| is_permutation((0..nl).map(|i| self.out(x, i)), nl))
    }

    pub fn is_reversible(&self) -> bool {
        let nq = self.num_states();
        (0..self.num_letters()).all(|i| is_permutation((0..nq).map(|x| self.next(x, i)), nq))
    }

    /// The inverse machine on inverse-tagged states: `x --i|j--> y` becomes
    /// `x^-1 --j|i--> y^-1`. Tagging toggles, so the inverse of the inverse
    /// is the original machine.
    pub fn inverse(&self) -> Result<MealyMachine> {
        if !self.is_invertible() {
            return Err(Error::NotInvertible);
        }
        let nl = self.num_letters();
        let mut next = vec![0; self.next.len()];
        let mut out = vec![0; self.out.len()];
        for (x, i, y, j) in self.transitions() {
            next[x * nl + j] = y;
            out[x * nl + j] = i;
        }
        Ok(MealyMachine {
            states: self.states.iter().map(|s| inverse_name(s)).collect(),
            letters: self.letters.clone(),
            next,
            out,
        })
    }

    /// Letter permutation taking `other`'s letter indices to `self`'s, if the
    /// two alphabets are the same set.
    fn align_alphabet(&self, other: &MealyMachine) -> Result<Vec<usize>> {
        if self.num_letters() != other.num_letters() {
            return Err(Error::AlphabetMismatch);
        }
        other
            .letters
            .iter()
            .map(|l| self.letter_index(l).ok_or(Error::AlphabetMismatch))
            .collect()
    }

    /// Disjoint union over a common alphabet. State identifiers are kept when
    /// the two statesets are disjoint and tagged `.1`/`.2` otherwise.
    pub fn disjoint_union(&self, other: &MealyMachine) -> Result<MealyMachine> {
        let to_self = self.align_alphabet(other)?;
        let nl = self.num_letters();
        let n1 = self.num_states();
        let clash = other.states.iter().any(|s| self.state_index(s).is_some());
        let mut states: Vec<String> = Vec::with_capacity(n1 + other.num_states());
        if clash {
            states.extend(self.states.iter().map(|s| copy_tag(s, 1)));
            states.extend(other.states.iter().map(|s| copy_tag(s, 2)));
        } else {
            states.extend(self.states.iter().cloned());
            states.extend(other.states.iter().cloned());
        }
        let mut next = self.next.clone();
        let mut out = self.out.clone();
        next.resize(states.len() * nl, 0);
        out.resize(states.len() * nl, 0);
        for (x, i, y, j) in other.transitions() {
            let cell = (n1 + x) * nl + to_self[i];
            next[cell] = n1 + y;
            out[cell] = to_self[j];
        }
        MealyMachine::from_tables(states, self.letters.clone(), next, out)
    }

    /// The product machine on pairs `(x, y)`: a letter passes through `x`
    /// first and its image through `y`. Pair `(x, y)` has index
    /// `x * other.num_states() + y`.
    pub fn product(&self, other: &MealyMachine) -> Result<MealyMachine> {
        let to_self = self.align_alphabet(other)?;
        let mut to_other = vec![0; to_self.len()];
        for (o, &s) in to_self.iter().enumerate() {
            to_other[s] = o;
        }
        let (n1, n2, nl) = (self.num_states(), other.num_states(), self.num_letters());
        let mut states = Vec::with_capacity(n1 * n2);
        let mut next = Vec::with_capacity(n1 * n2 * nl);
        let mut out = Vec::with_capacity(n1 * n2 * nl);
        for x in 0..n1 {
            for y in 0..n2 {
                states.push(format!("({},{})", self.states[x], other.states[y]));
                for i in 0..nl {
                    let mid = self.out(x, i);
                    let mid_other = to_other[mid];
                    next.push(self.next(x, i) * n2 + other.next(y, mid_other));
                    out.push(to_self[other.out(y, mid_other)]);
                }
            }
        }
        MealyMachine::from_tables(states, self.letters.clone(), next, out)
    }
}

fn is_permutation(images: impl Iterator<Item = usize>, n: usize) -> bool {
    let mut seen = vec![false; n];
    for k in images {
        if std::mem::replace(&mut seen[k], true) {
            return false;
        }
    }
    true
}

fn join_names(names: &[String], word: &[usize]) -> String {
    let mut s = String::new();
    for (k, &x) in word.iter().enumerate() {
        if k > 0 {
            s.push(' ');
        }
        s.push_str(&names[x]);
    }
    s
}

/// Toggles the inverse tag on a state identifier.
pub fn inverse_name(name: &str) -> String {
    match name.strip_suffix(INVERSE_TAG) {
        Some(base) => base.to_owned(),
        None => format!("{name}{INVERSE_TAG}"),
    }
}

fn copy_tag(name: &str, copy: usize) -> String {
    match name.strip_suffix(INVERSE_TAG) {
        Some(base) => format!("{base}.{copy}{INVERSE_TAG}"),
        None => format!("{name}.{copy}"),
    }
}

impl fmt::Display for StateWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}
