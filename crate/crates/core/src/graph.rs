//! Induced preference graph, consistency and dominance.

use alloc::{collections::VecDeque, vec, vec::Vec};

use crate::error::{Error, Result};
use crate::model::{order_prefers, CpNet, Outcome, Value};

/// Default vertex limit for explicit graphs.
pub const DEFAULT_VERTEX_BUDGET: usize = 1 << 20;

/// Graph on all `m^n` outcomes with an edge from `worse` to `better` for every
/// entailed swap. Vertices are outcome indices in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedGraph {
    n: usize,
    m: usize,
    succ: Vec<Vec<usize>>,
}

impl InducedGraph {
    pub fn vertex_count(&self) -> usize {
        self.succ.len()
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn outcome(&self, index: usize) -> Outcome {
        Outcome::from_index(self.n, self.m, index)
    }

    /// Improving flips out of `index`.
    pub fn successors(&self, index: usize) -> &[usize] {
        &self.succ[index]
    }

    /// All edges `(worse, better)` as outcome indices.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.succ.iter().enumerate().flat_map(|(u, s)| s.iter().map(move |&v| (u, v))).collect()
    }

    pub fn has_edge(&self, from: &Outcome, to: &Outcome) -> bool {
        self.succ[from.index(self.m)].contains(&to.index(self.m))
    }

    pub fn is_acyclic(&self) -> bool {
        let mut indeg = vec![0usize; self.succ.len()];
        for s in &self.succ {
            for &v in s {
                indeg[v] += 1;
            }
        }
        let mut stack: Vec<usize> = (0..indeg.len()).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(u) = stack.pop() {
            seen += 1;
            for &v in &self.succ[u] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    stack.push(v);
                }
            }
        }
        seen == self.succ.len()
    }

    /// Whether a directed path leads from `from` to `to` (at least one edge).
    pub fn reaches(&self, from: usize, to: usize) -> bool {
        let mut seen = vec![false; self.succ.len()];
        let mut queue: VecDeque<usize> = self.succ[from].iter().copied().collect();
        while let Some(u) = queue.pop_front() {
            if u == to {
                return true;
            }
            if core::mem::replace(&mut seen[u], true) {
                continue;
            }
            queue.extend(self.succ[u].iter().copied());
        }
        false
    }
}

pub fn induced_preference_graph(net: &CpNet) -> Result<InducedGraph> {
    induced_preference_graph_with_budget(net, DEFAULT_VERTEX_BUDGET)
}

pub fn induced_preference_graph_with_budget(net: &CpNet, budget: usize) -> Result<InducedGraph> {
    let (n, m) = (net.n(), net.m());
    let exceeded = Error::BudgetExceeded { what: "induced graph vertices", limit: budget as u64 };
    let count = net.spec().outcome_count().ok_or(exceeded.clone())?;
    if count > budget {
        return Err(exceeded);
    }
    let mut succ = vec![Vec::new(); count];
    for (idx, out) in succ.iter_mut().enumerate() {
        let o = Outcome::from_index(n, m, idx);
        for v in 0..n {
            let Some(order) = net.cpt(v).row_for(o.values()) else { continue };
            let cur = o.get(v);
            for better in 0..m as Value {
                if better != cur && order_prefers(order, better, cur) {
                    out.push(o.with(v, better).index(m));
                }
            }
        }
    }
    Ok(InducedGraph { n, m, succ })
}

/// True iff no outcome is preferred to itself.
pub fn is_consistent(net: &CpNet) -> Result<bool> {
    Ok(induced_preference_graph(net)?.is_acyclic())
}

/// True iff `o ≻ o2`, i.e. a sequence of improving flips leads from `o2` to `o`.
pub fn dominates(net: &CpNet, o: &Outcome, o2: &Outcome) -> Result<bool> {
    let g = induced_preference_graph(net)?;
    dominates_in(&g, o, o2)
}

pub fn dominates_in(graph: &InducedGraph, o: &Outcome, o2: &Outcome) -> Result<bool> {
    let m = graph.m;
    if o.len() != graph.n || o2.len() != graph.n {
        return Err(Error::InvalidOutcome("length differs from the net".into()));
    }
    Ok(graph.reaches(o2.index(m), o.index(m)))
}
