//! Graphviz output for machines and orbit trees.

use std::fmt::Write;

use crate::machine::MealyMachine;
use crate::orbit::OrbitTree;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// One node per state, one edge per transition labeled `input|output`.
pub fn emit_dot_machine(name: &str, m: &MealyMachine) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "digraph {} {{", quote(name));
    s.push_str("  rankdir=LR;\n  node [shape=circle];\n");
    for x in 0..m.num_states() {
        let _ = writeln!(s, "  {};", quote(m.state_name(x)));
    }
    for (x, i, y, j) in m.transitions() {
        let label = format!("{}|{}", m.letter_name(i), m.letter_name(j));
        let _ = writeln!(
            s,
            "  {} -> {} [label={}];",
            quote(m.state_name(x)),
            quote(m.state_name(y)),
            quote(&label)
        );
    }
    s.push_str("}\n");
    s
}

/// Nodes labeled by component size, edges by their integer ratio; edges on
/// 1-self-liftable initial paths are drawn bold.
pub fn emit_dot_orbit_tree(tree: &OrbitTree) -> String {
    let mut s = String::new();
    s.push_str("digraph orbit_tree {\n  node [shape=ellipse];\n");
    for level in 0..=tree.depth() {
        for &n in tree.level(level) {
            let _ = writeln!(s, "  n{} [label=\"{}\"];", n, tree.node(n).component.size);
        }
    }
    for (id, e) in tree.edges().iter().enumerate() {
        let style = if tree.is_marked(id) {
            ", style=bold"
        } else {
            ""
        };
        let _ = writeln!(
            s,
            "  n{} -> n{} [label=\"{}\"{}];",
            e.parent, e.child, e.label, style
        );
    }
    s.push_str("}\n");
    s
}
