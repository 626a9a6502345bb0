//! Qubit-dependency DAG view of a composite.
//!
//! Node 0 is a synthetic entry, node `n + 1` a synthetic exit, and nodes
//! `1..=n` are the enabled leaf instructions in execution order. An edge
//! `u -> v` means `v` is the next instruction after `u` on at least one
//! shared qubit, so every path from entry to exit follows one qubit's
//! timeline and the longest instruction chain is the circuit depth.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use super::{Composite, Instruction};

#[derive(Clone, Debug, PartialEq)]
pub struct InstrGraph {
    n_instructions: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl InstrGraph {
    /// Build the graph over the enabled leaves of `composite`.
    pub fn from_composite(composite: &Composite) -> InstrGraph {
        InstrGraph::from_instructions(&composite.enabled_leaves())
    }

    pub fn from_instructions(instructions: &[&Instruction]) -> InstrGraph {
        let n = instructions.len();
        let exit = n + 1;
        let mut edges = BTreeSet::new();
        let mut last_on: BTreeMap<usize, usize> = BTreeMap::new();
        for (idx, instr) in instructions.iter().enumerate() {
            let id = idx + 1;
            for &bit in instr.bits() {
                let from = last_on.get(&bit).copied().unwrap_or(0);
                edges.insert((from, id));
                last_on.insert(bit, id);
            }
        }
        for (_, &last) in last_on.iter() {
            edges.insert((last, exit));
        }
        if n == 0 {
            edges.insert((0, exit));
        }
        InstrGraph { n_instructions: n, edges }
    }

    pub fn entry(&self) -> usize {
        0
    }

    pub fn exit(&self) -> usize {
        self.n_instructions + 1
    }

    /// Total node count including entry and exit.
    pub fn n_nodes(&self) -> usize {
        self.n_instructions + 2
    }

    pub fn n_instructions(&self) -> usize {
        self.n_instructions
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.edges.contains(&(from, to))
    }

    pub fn successors(&self, node: usize) -> Vec<usize> {
        self.edges
            .range((node, 0)..(node + 1, 0))
            .map(|&(_, to)| to)
            .collect()
    }

    /// Longest chain of dependent instructions (the dependency-depth of
    /// the circuit). Entry and exit do not count.
    pub fn depth(&self) -> usize {
        // Node ids are already topologically ordered: every edge points
        // forward in execution order.
        let mut dist = vec![0usize; self.n_nodes()];
        for &(from, to) in &self.edges {
            let weight = usize::from(to != self.exit());
            dist[to] = dist[to].max(dist[from] + weight);
        }
        dist[self.exit()]
    }
}
