//! Breadth-first truncated successor-tree search shared by the timed,
//! untimed and tail-based derivations.

use std::collections::HashSet;
use std::hash::Hash;

use crate::machine::StateId;

/// Node label of a truncated successor tree.
pub(crate) trait Label: Clone + Eq + Hash {
    /// Truncation by success: the goal is reached at this node.
    fn resolved(&self) -> bool;
    /// Truncation by subsumption: any continuation that resolves `self`
    /// also resolves `earlier`, so `self` need not be expanded.
    fn subsumed_by(&self, earlier: &Self) -> bool;
}

/// Why a search ended without a result.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Stop {
    /// Every branch was truncated.
    Exhausted,
    /// Live nodes remained at the depth cap.
    DepthCap,
    /// The node budget ran out.
    Budget,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Nodes generated, root included.
    pub nodes: usize,
    /// Deepest level generated.
    pub depth: usize,
}

struct Node<L, E> {
    label: L,
    parent: usize,
    edge: Option<E>,
}

/// Returns the edge labels of the first resolved node in BFS order, or why
/// none was found. `expand` lists the children of a label in edge order;
/// `None` marks an edge that leaves the domain and is skipped. At most
/// `budget` nodes are generated.
pub(crate) fn bfs<L: Label, E: Clone>(
    root: L,
    max_depth: usize,
    budget: usize,
    mut expand: impl FnMut(&L) -> Vec<(E, Option<L>)>,
) -> (Result<Vec<E>, Stop>, SearchStats) {
    let mut stats = SearchStats { nodes: 1, depth: 0 };
    if root.resolved() {
        return (Ok(Vec::new()), stats);
    }
    let mut nodes: Vec<Node<L, E>> = vec![Node {
        label: root.clone(),
        parent: 0,
        edge: None,
    }];
    let mut kept: Vec<usize> = vec![0];
    let mut exact: HashSet<L> = HashSet::from([root]);
    let mut frontier = vec![0usize];
    let mut level = 0;
    while !frontier.is_empty() && level < max_depth {
        level += 1;
        let mut next = Vec::new();
        for &n in &frontier {
            for (edge, child) in expand(&nodes[n].label) {
                let Some(child) = child else { continue };
                if stats.nodes >= budget {
                    return (Err(Stop::Budget), stats);
                }
                stats.nodes += 1;
                stats.depth = level;
                let idx = nodes.len();
                nodes.push(Node {
                    label: child,
                    parent: n,
                    edge: Some(edge),
                });
                let label = &nodes[idx].label;
                if label.resolved() {
                    return (Ok(path(&nodes, idx)), stats);
                }
                if exact.contains(label) || kept.iter().any(|&k| label.subsumed_by(&nodes[k].label))
                {
                    continue;
                }
                exact.insert(label.clone());
                kept.push(idx);
                next.push(idx);
            }
        }
        frontier = next;
    }
    let stop = if frontier.is_empty() {
        Stop::Exhausted
    } else {
        Stop::DepthCap
    };
    (Err(stop), stats)
}

/// Maps an unsuccessful tree search to `Ok(None)` or the cap error.
pub(crate) fn finish<E>(
    r: Result<Vec<E>, Stop>,
    cap: usize,
) -> Result<Option<Vec<E>>, crate::error::AnalysisError> {
    match r {
        Ok(p) => Ok(Some(p)),
        Err(Stop::Exhausted) => Ok(None),
        Err(Stop::DepthCap) => Err(crate::error::AnalysisError::Internal(format!(
            "search reached its depth cap {cap} with live nodes"
        ))),
        Err(Stop::Budget) => Err(crate::error::AnalysisError::Internal(
            "search ran out of nodes".into(),
        )),
    }
}

fn path<L, E: Clone>(nodes: &[Node<L, E>], mut idx: usize) -> Vec<E> {
    let mut out = Vec::new();
    while let Some(e) = &nodes[idx].edge {
        out.push(e.clone());
        idx = nodes[idx].parent;
    }
    out.reverse();
    out
}

/// Set of state blocks: sorted, deduplicated, each block sorted.
/// Blocks may overlap.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Blocks(Vec<Vec<StateId>>);

impl Blocks {
    pub fn new(blocks: impl IntoIterator<Item = Vec<StateId>>) -> Self {
        let mut v: Vec<Vec<StateId>> = blocks
            .into_iter()
            .filter(|b| !b.is_empty())
            .map(|mut b| {
                b.sort();
                b.dedup();
                b
            })
            .collect();
        v.sort();
        v.dedup();
        Blocks(v)
    }

    pub fn blocks(&self) -> &[Vec<StateId>] {
        &self.0
    }

    pub fn all_singletons(&self) -> bool {
        self.0.iter().all(|b| b.len() == 1)
    }

    /// Every non-singleton block of `other` is a block of `self`.
    pub fn contains_nontrivial_of(&self, other: &Blocks) -> bool {
        other
            .0
            .iter()
            .filter(|b| b.len() > 1)
            .all(|b| self.0.binary_search(b).is_ok())
    }
}

/// Homing label: resolved when every block is a singleton.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct HomingLabel(pub Blocks);

impl Label for HomingLabel {
    fn resolved(&self) -> bool {
        self.0.all_singletons()
    }

    fn subsumed_by(&self, earlier: &Self) -> bool {
        self.0.contains_nontrivial_of(&earlier.0)
    }
}

/// Synchronizing label: the set of possible current states.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct SyncLabel(pub Vec<StateId>);

impl SyncLabel {
    pub fn new(mut states: Vec<StateId>) -> Self {
        states.sort();
        states.dedup();
        SyncLabel(states)
    }
}

impl Label for SyncLabel {
    fn resolved(&self) -> bool {
        self.0.len() == 1
    }

    fn subsumed_by(&self, earlier: &Self) -> bool {
        // both sorted
        let mut it = self.0.iter().peekable();
        earlier.0.iter().all(|s| {
            while it.peek().is_some_and(|x| *x < s) {
                it.next();
            }
            it.peek() == Some(&s)
        })
    }
}
