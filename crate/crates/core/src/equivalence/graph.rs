use std::collections::{HashMap, VecDeque};

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::automaton::{LetterId, Word};
use crate::error::{Error, Result};

use super::tracker::{ClassAutomaton, ClassId};

/// Budget used when callers do not pick one.
pub const DEFAULT_BUDGET: usize = 1_000_000;

/// The reachable part of a class automaton, explored breadth-first with
/// letters in declared order.
#[derive(Clone, Debug)]
pub struct ClassGraph {
    nodes: Vec<ClassId>,
    node_of: HashMap<ClassId, usize>,
    succ: Vec<Vec<usize>>,
    parent: Vec<Option<(usize, LetterId)>>,
    complete: bool,
    infinite: Option<Vec<bool>>,
}

/// Explores the classes reachable from the initial class. Stops once more
/// than `budget` classes have been discovered; the result is then flagged
/// incomplete.
pub fn enumerate_classes<T: ClassAutomaton + ?Sized>(t: &mut T, budget: usize) -> ClassGraph {
    let letters = t.num_letters();
    let mut g = ClassGraph {
        nodes: vec![t.initial()],
        node_of: HashMap::from([(t.initial(), 0)]),
        succ: vec![Vec::new()],
        parent: vec![None],
        complete: true,
        infinite: None,
    };
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let mut row = Vec::with_capacity(letters);
        for a in 0..letters {
            let next = t.step(g.nodes[i], LetterId(a));
            let j = match g.node_of.get(&next) {
                Some(&j) => j,
                None => {
                    if g.nodes.len() >= budget {
                        g.complete = false;
                        g.succ[i] = row;
                        return g;
                    }
                    let j = g.nodes.len();
                    g.nodes.push(next);
                    g.node_of.insert(next, j);
                    g.succ.push(Vec::new());
                    g.parent.push(Some((i, LetterId(a))));
                    queue.push_back(j);
                    j
                }
            };
            row.push(j);
        }
        g.succ[i] = row;
    }
    g.infinite = Some(g.infinite_nodes());
    g
}

impl ClassGraph {
    /// Whether every discovered class had all of its successors discovered.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Classes in discovery order; the first is the initial class.
    pub fn classes(&self) -> &[ClassId] {
        &self.nodes
    }

    pub fn contains(&self, class: ClassId) -> bool {
        self.node_of.contains_key(&class)
    }

    /// Successor of a class under a letter, if explored.
    pub fn successor(&self, class: ClassId, letter: LetterId) -> Option<ClassId> {
        let i = *self.node_of.get(&class)?;
        self.succ[i].get(letter.0).map(|&j| self.nodes[j])
    }

    fn node(&self, class: ClassId) -> Result<usize> {
        self.node_of
            .get(&class)
            .copied()
            .ok_or(Error::UnreachableClass(class.0))
    }

    fn infinite_nodes(&self) -> Vec<bool> {
        let mut graph = DiGraph::<(), ()>::with_capacity(self.nodes.len(), 0);
        let ids: Vec<_> = (0..self.nodes.len()).map(|_| graph.add_node(())).collect();
        for (i, row) in self.succ.iter().enumerate() {
            for &j in row {
                graph.add_edge(ids[i], ids[j], ());
            }
        }
        let mut infinite = vec![false; self.nodes.len()];
        let mut stack = Vec::new();
        for scc in tarjan_scc(&graph) {
            let cyclic = scc.len() > 1 || {
                let i = scc[0].index();
                self.succ[i].contains(&i)
            };
            if cyclic {
                for v in scc {
                    if !infinite[v.index()] {
                        infinite[v.index()] = true;
                        stack.push(v.index());
                    }
                }
            }
        }
        while let Some(i) = stack.pop() {
            for &j in &self.succ[i] {
                if !infinite[j] {
                    infinite[j] = true;
                    stack.push(j);
                }
            }
        }
        infinite
    }

    /// Whether infinitely many words reach `class`: it is reachable from a
    /// class lying on a cycle.
    pub fn is_infinite(&self, class: ClassId) -> Result<bool> {
        let infinite = self.infinite.as_ref().ok_or(Error::IncompleteEnumeration)?;
        Ok(infinite[self.node(class)?])
    }

    pub fn infinite_classes(&self) -> Result<Vec<ClassId>> {
        let infinite = self.infinite.as_ref().ok_or(Error::IncompleteEnumeration)?;
        Ok(self
            .nodes
            .iter()
            .zip(infinite)
            .filter(|(_, &inf)| inf)
            .map(|(&c, _)| c)
            .collect())
    }

    /// Shortlex-least word reaching `class`.
    pub fn shortest_representative(&self, class: ClassId) -> Result<Word> {
        let mut i = self.node(class)?;
        let mut word = Vec::new();
        while let Some((p, a)) = self.parent[i] {
            word.push(a);
            i = p;
        }
        word.reverse();
        Ok(word)
    }

    /// Least `d` such that every word of length at least `d` reaches an
    /// infinite class: one more than the longest word reaching a finite
    /// class, or 0 when all classes are infinite.
    pub fn threshold(&self) -> Result<u64> {
        let infinite = self.infinite.as_ref().ok_or(Error::IncompleteEnumeration)?;
        if infinite[0] {
            return Ok(0);
        }
        // Finite classes only have finite predecessors, so they form a DAG
        // rooted at the initial class.
        let n = self.nodes.len();
        let mut indegree = vec![0usize; n];
        for (i, row) in self.succ.iter().enumerate() {
            if infinite[i] {
                continue;
            }
            for &j in row {
                if !infinite[j] {
                    indegree[j] += 1;
                }
            }
        }
        let mut longest: Vec<Option<u64>> = vec![None; n];
        longest[0] = Some(0);
        let mut queue = VecDeque::from([0usize]);
        let mut best = 0;
        while let Some(i) = queue.pop_front() {
            let here = longest[i].expect("processed nodes are reachable");
            best = best.max(here);
            for &j in &self.succ[i] {
                if infinite[j] {
                    continue;
                }
                longest[j] = Some(longest[j].map_or(here + 1, |l| l.max(here + 1)));
                indegree[j] -= 1;
                if indegree[j] == 0 {
                    queue.push_back(j);
                }
            }
        }
        Ok(best + 1)
    }
}
