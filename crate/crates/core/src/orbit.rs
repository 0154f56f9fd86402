//! Connected components of the powers of a reversible machine, the labeled
//! orbit tree they form, and liftable paths in that tree.
//!
//! A state word `u` of length `n` is a state of the `n`-th power. Its
//! component is the orbit of `u` under the single-letter dual actions; for a
//! reversible machine the forward orbit already is the whole (strongly)
//! connected component.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::machine::{MealyMachine, StateWord};

/// One connected component of a power of a machine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub level: usize,
    pub size: usize,
    /// Lexicographically least member under the state declaration order.
    pub representative: StateWord,
    /// Members in increasing order, when materialized.
    pub members: Option<Vec<StateWord>>,
}

impl Component {
    fn root() -> Self {
        Component {
            level: 0,
            size: 1,
            representative: StateWord::empty(),
            members: Some(vec![StateWord::empty()]),
        }
    }
}

/// The component of `u`, with all its members.
pub fn component_of_word(m: &MealyMachine, u: &StateWord, budget: usize) -> Result<Component> {
    if !m.is_reversible() {
        return Err(Error::NotReversible);
    }
    let members = orbit_members(m, u, budget)?;
    Ok(Component {
        level: u.len(),
        size: members.len(),
        representative: members[0].clone(),
        members: Some(members),
    })
}

/// Forward orbit of `u` under the single-letter dual actions, sorted.
pub(crate) fn orbit_members(
    m: &MealyMachine,
    u: &StateWord,
    budget: usize,
) -> Result<Vec<StateWord>> {
    let mut seen: HashSet<StateWord> = HashSet::new();
    let mut members = vec![u.clone()];
    seen.insert(u.clone());
    if budget == 0 {
        return Err(Error::BudgetExceeded(budget));
    }
    let mut buf = Vec::new();
    let mut k = 0;
    while k < members.len() {
        for i in 0..m.num_letters() {
            m.act_letter(members[k].as_slice(), i, &mut buf);
            if !seen.contains(buf.as_slice()) {
                if members.len() >= budget {
                    return Err(Error::BudgetExceeded(budget));
                }
                let w = StateWord(buf.clone());
                seen.insert(w.clone());
                members.push(w);
            }
        }
        k += 1;
    }
    members.sort_unstable();
    Ok(members)
}

impl std::borrow::Borrow<[usize]> for StateWord {
    fn borrow(&self) -> &[usize] {
        &self.0
    }
}

/// Sizes of the weakly connected components of the `n`-th power, for any
/// machine, in order of their least member. Fails when `|Q|^n` exceeds the
/// budget.
pub fn power_component_sizes(m: &MealyMachine, n: usize, budget: usize) -> Result<Vec<usize>> {
    let q = m.num_states();
    let total = u32::try_from(n)
        .ok()
        .and_then(|n| q.checked_pow(n))
        .filter(|&t| t <= budget)
        .ok_or(Error::BudgetExceeded(budget))?;

    let mut parent: Vec<usize> = (0..total).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut word = vec![0; n];
    let mut buf = Vec::with_capacity(n);
    for code in 0..total {
        let mut c = code;
        for slot in word.iter_mut().rev() {
            *slot = c % q;
            c /= q;
        }
        for i in 0..m.num_letters() {
            m.act_letter(&word, i, &mut buf);
            let target = buf.iter().fold(0, |acc, &x| acc * q + x);
            let (a, b) = (find(&mut parent, code), find(&mut parent, target));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut sizes: Vec<usize> = Vec::new();
    let mut slot_of_root: HashMap<usize, usize> = HashMap::new();
    for code in 0..total {
        let root = find(&mut parent, code);
        let next_slot = sizes.len();
        let slot = *slot_of_root.entry(root).or_insert(next_slot);
        if slot == sizes.len() {
            sizes.push(0);
        }
        sizes[slot] += 1;
    }
    Ok(sizes)
}

pub type NodeId = usize;
pub type EdgeId = usize;

#[derive(Clone, Debug)]
pub struct TreeNode {
    pub component: Component,
    pub parent_edge: Option<EdgeId>,
    pub children: Vec<EdgeId>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeEdge {
    pub parent: NodeId,
    pub child: NodeId,
    /// `size(child) / size(parent)`.
    pub label: usize,
}

/// An initial path: consecutive edges starting at the root.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TreePath {
    pub edges: Vec<EdgeId>,
}

impl TreePath {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn labels(&self, tree: &OrbitTree) -> Vec<usize> {
        self.edges.iter().map(|&e| tree.edges[e].label).collect()
    }

    /// Node sequence, root first.
    pub fn nodes(&self, tree: &OrbitTree) -> Vec<NodeId> {
        std::iter::once(tree.root())
            .chain(self.edges.iter().map(|&e| tree.edges[e].child))
            .collect()
    }
}

/// The labeled orbit tree, expanded level by level from the root.
#[derive(Clone, Debug)]
pub struct OrbitTree {
    nodes: Vec<TreeNode>,
    edges: Vec<TreeEdge>,
    levels: Vec<Vec<NodeId>>,
    index: Vec<HashMap<StateWord, NodeId>>,
    requested_depth: usize,
    liftable_marks: BTreeSet<EdgeId>,
}

/// Builds the orbit tree down to `depth`. The budget bounds the number of
/// member words stored per level; when it is hit the tree is returned
/// truncated at the last complete level.
pub fn orbit_tree(m: &MealyMachine, depth: usize, budget: usize) -> Result<OrbitTree> {
    if !m.is_reversible() {
        return Err(Error::NotReversible);
    }
    let mut root_index = HashMap::new();
    root_index.insert(StateWord::empty(), 0);
    let mut tree = OrbitTree {
        nodes: vec![TreeNode {
            component: Component::root(),
            parent_edge: None,
            children: Vec::new(),
        }],
        edges: Vec::new(),
        levels: vec![vec![0]],
        index: vec![root_index],
        requested_depth: depth,
        liftable_marks: BTreeSet::new(),
    };

    'levels: for level in 0..depth {
        let mut found: Vec<(NodeId, Component)> = Vec::new();
        let mut next_index: HashMap<StateWord, usize> = HashMap::new();
        let mut stored = 0usize;
        for &node in &tree.levels[level] {
            let rep = &tree.nodes[node].component.representative;
            for x in 0..m.num_states() {
                let w = rep.pushed(x);
                if let Some(&k) = next_index.get(&w) {
                    if found[k].0 != node {
                        return Err(Error::MalformedTree(format!(
                            "level {} component reached from two parents",
                            level + 1
                        )));
                    }
                    continue;
                }
                let members = match orbit_members(m, &w, budget - stored) {
                    Ok(members) => members,
                    Err(Error::BudgetExceeded(_)) => break 'levels,
                    Err(e) => return Err(e),
                };
                stored += members.len();
                for member in &members {
                    if tree.index[level].get(&member.as_slice()[..level]) != Some(&node) {
                        return Err(Error::MalformedTree(format!(
                            "prefixes of a level {} component span several parents",
                            level + 1
                        )));
                    }
                }
                let parent_size = tree.nodes[node].component.size;
                if members.len() % parent_size != 0 {
                    return Err(Error::NonIntegerLabel {
                        parent: parent_size,
                        child: members.len(),
                    });
                }
                let k = found.len();
                for member in &members {
                    next_index.insert(member.clone(), k);
                }
                found.push((
                    node,
                    Component {
                        level: level + 1,
                        size: members.len(),
                        representative: members[0].clone(),
                        members: Some(members),
                    },
                ));
            }
        }

        let base = tree.nodes.len();
        let mut ids = Vec::with_capacity(found.len());
        for (parent, component) in found {
            let id = tree.nodes.len();
            let edge = tree.edges.len();
            let label = component.size / tree.nodes[parent].component.size;
            tree.edges.push(TreeEdge {
                parent,
                child: id,
                label,
            });
            tree.nodes[parent].children.push(edge);
            tree.nodes.push(TreeNode {
                component,
                parent_edge: Some(edge),
                children: Vec::new(),
            });
            ids.push(id);
        }
        tree.levels.push(ids);
        tree.index
            .push(next_index.into_iter().map(|(w, k)| (w, base + k)).collect());
    }

    tree.liftable_marks = tree.self_liftable_paths().0;
    Ok(tree)
}

impl OrbitTree {
    pub fn root(&self) -> NodeId {
        0
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[TreeEdge] {
        &self.edges
    }

    pub fn node(&self, id: NodeId) -> &TreeNode {
        &self.nodes[id]
    }

    pub fn edge(&self, id: EdgeId) -> &TreeEdge {
        &self.edges[id]
    }

    /// Nodes of a fully expanded level.
    pub fn level(&self, level: usize) -> &[NodeId] {
        &self.levels[level]
    }

    /// Deepest fully expanded level.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    /// True when the budget stopped expansion before the requested depth.
    pub fn is_truncated(&self) -> bool {
        self.depth() < self.requested_depth
    }

    pub fn requested_depth(&self) -> usize {
        self.requested_depth
    }

    /// Edges lying on some 1-self-liftable initial path.
    pub fn liftable_marks(&self) -> &BTreeSet<EdgeId> {
        &self.liftable_marks
    }

    pub fn is_marked(&self, edge: EdgeId) -> bool {
        self.liftable_marks.contains(&edge)
    }

    /// The node at `word.len()` whose component contains `word`.
    pub fn node_of_word(&self, word: &StateWord) -> Result<NodeId> {
        self.index
            .get(word.len())
            .ok_or(Error::DepthExceeded {
                needed: word.len(),
                depth: self.depth(),
            })?
            .get(word)
            .copied()
            .ok_or_else(|| Error::UnknownSymbol(format!("{word}")))
    }

    fn bottom_level(&self, e: EdgeId) -> usize {
        self.nodes[self.edges[e].child].component.level
    }

    /// Whether every word below `e` has a suffix below `f`. A single witness
    /// decides it: if one member of the lower component has its suffix in
    /// the target component, all members do.
    pub fn is_liftable(&self, e: EdgeId, f: EdgeId) -> Result<bool> {
        let (le, lf) = (self.bottom_level(e), self.bottom_level(f));
        if lf > le {
            return Err(Error::LevelMismatch);
        }
        let rep = &self.nodes[self.edges[e].child].component.representative;
        let suffix = &rep.as_slice()[le - lf..];
        Ok(self.index[lf].get(suffix) == Some(&self.edges[f].child))
    }

    /// Edges on 1-self-liftable initial paths, and the maximal such paths.
    ///
    /// Every node has a unique initial path, so a path is 1-self-liftable
    /// exactly when its last edge is liftable to the one before and the
    /// shorter path is itself 1-self-liftable. The first edge is
    /// unconstrained.
    pub fn self_liftable_paths(&self) -> (BTreeSet<EdgeId>, Vec<TreePath>) {
        let mut ok = vec![false; self.nodes.len()];
        ok[self.root()] = true;
        let mut marks = BTreeSet::new();
        for level in 1..self.levels.len() {
            for &node in &self.levels[level] {
                let e = self.nodes[node]
                    .parent_edge
                    .expect("non-root node has a parent");
                let parent = self.edges[e].parent;
                let good = match self.nodes[parent].parent_edge {
                    None => true,
                    Some(pe) => ok[parent] && self.is_liftable(e, pe).unwrap_or(false),
                };
                if good {
                    ok[node] = true;
                    marks.insert(e);
                }
            }
        }
        let mut maximal = Vec::new();
        for (id, node) in self.nodes.iter().enumerate() {
            if id == self.root() || !ok[id] {
                continue;
            }
            if node.children.iter().all(|&c| !ok[self.edges[c].child]) {
                maximal.push(self.path_to(id));
            }
        }
        (marks, maximal)
    }

    /// The initial path ending at `node`.
    pub fn path_to(&self, node: NodeId) -> TreePath {
        let mut edges = Vec::new();
        let mut cur = node;
        while let Some(e) = self.nodes[cur].parent_edge {
            edges.push(e);
            cur = self.edges[e].parent;
        }
        edges.reverse();
        TreePath { edges }
    }

    /// The initial path through the components of the prefixes of `word`.
    pub fn path_of_word(&self, word: &StateWord) -> Result<TreePath> {
        if word.len() > self.depth() {
            return Err(Error::DepthExceeded {
                needed: word.len(),
                depth: self.depth(),
            });
        }
        Ok(self.path_to(self.node_of_word(word)?))
    }

    /// The path of `x x x ...` down to `depth`.
    pub fn path_of_power(&self, state: usize, depth: usize) -> Result<TreePath> {
        self.path_of_word(&StateWord(vec![state; depth]))
    }

    /// True when every edge after the first is liftable to its predecessor.
    pub fn is_self_liftable(&self, path: &TreePath) -> bool {
        path.edges
            .windows(2)
            .all(|w| self.is_liftable(w[1], w[0]).unwrap_or(false))
    }
}
