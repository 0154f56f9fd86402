//! The line-oriented `.mealy` text format.
//!
//! ```text
//! # comments run to end of line
//! mealy L
//! alphabet 0 1
//! state x
//!   0 -> y / 1
//!   1 -> x / 0
//! end
//! state y
//!   0 -> x / 0
//!   1 -> y / 1
//! end
//! ```
//!
//! State blocks fix the state order, the alphabet line fixes the letter
//! order. Identifiers are whitespace-free and may not contain `#`.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::machine::{
    build_machine, check_identifier, MachineDescription, MealyMachine, Transition,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MachineFile {
    pub name: String,
    pub machine: MealyMachine,
}

impl MachineFile {
    pub fn to_text(&self) -> String {
        serialize_machine(&self.name, &self.machine)
    }
}

fn parse_error(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        reason: reason.into(),
    }
}

pub fn parse_machine_file(text: &str) -> Result<MachineFile> {
    let mut lines = text.lines().enumerate().filter_map(|(k, raw)| {
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        (!tokens.is_empty()).then_some((k + 1, tokens))
    });

    let (line, header) = lines
        .next()
        .ok_or_else(|| parse_error(1, "missing `mealy <name>` header"))?;
    let name = match header.as_slice() {
        ["mealy", name] => name.to_string(),
        _ => return Err(parse_error(line, "expected `mealy <name>`")),
    };
    check_identifier(&name)
        .map_err(|_| parse_error(line, format!("invalid machine name `{name}`")))?;

    let (line, alpha) = lines
        .next()
        .ok_or_else(|| parse_error(line + 1, "missing `alphabet` line"))?;
    if alpha.first() != Some(&"alphabet") || alpha.len() < 2 {
        return Err(parse_error(line, "expected `alphabet <letter> ...`"));
    }
    let mut desc = MachineDescription {
        states: Vec::new(),
        alphabet: alpha[1..].iter().map(|s| s.to_string()).collect(),
        transitions: Vec::new(),
    };

    let mut current: Option<(usize, String)> = None;
    for (line, tokens) in lines {
        match (&current, tokens.as_slice()) {
            (None, ["state", q]) => {
                desc.states.push(q.to_string());
                current = Some((line, q.to_string()));
            }
            (None, _) => return Err(parse_error(line, "expected `state <name>`")),
            (Some(_), ["end"]) => current = None,
            (Some((_, from)), [input, "->", to, "/", output]) => {
                desc.transitions.push(Transition {
                    from: from.clone(),
                    input: input.to_string(),
                    to: to.to_string(),
                    output: output.to_string(),
                })
            }
            (Some(_), _) => {
                return Err(parse_error(
                    line,
                    "expected `<input> -> <next-state> / <output>` or `end`",
                ))
            }
        }
    }
    if let Some((line, q)) = current {
        return Err(parse_error(
            line,
            format!("state block `{q}` is not terminated by `end`"),
        ));
    }
    let machine = build_machine(&desc)?;
    Ok(MachineFile { name, machine })
}

pub fn parse_machine(text: &str) -> Result<MealyMachine> {
    parse_machine_file(text).map(|f| f.machine)
}

pub fn serialize_machine(name: &str, m: &MealyMachine) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "mealy {name}");
    let _ = writeln!(s, "alphabet {}", m.letters().join(" "));
    for x in 0..m.num_states() {
        let _ = writeln!(s, "state {}", m.state_name(x));
        for i in 0..m.num_letters() {
            let _ = writeln!(
                s,
                "  {} -> {} / {}",
                m.letter_name(i),
                m.state_name(m.next(x, i)),
                m.letter_name(m.out(x, i))
            );
        }
        s.push_str("end\n");
    }
    s
}
