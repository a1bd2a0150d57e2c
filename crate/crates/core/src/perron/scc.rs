//! Strongly connected components of the off-diagonal sparsity graph.

use crate::matrix::SquareMatrix;

/// Partition of `0..n` into strongly connected components of the digraph
/// with an edge `i → j` whenever `i ≠ j` and `M[i][j] ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccDecomposition {
    /// Component id of every vertex.
    pub component_id: Vec<usize>,
    pub component_count: usize,
    /// Components in topological order of the condensation: edges only go
    /// from earlier to later components.
    pub topological_order: Vec<usize>,
}

impl SccDecomposition {
    pub fn of(m: &SquareMatrix) -> Self {
        let n = m.n();
        let adjacency: Vec<Vec<usize>> = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| j != i && m[(i, j)] != 0.0)
                    .collect()
            })
            .collect();
        tarjan(&adjacency)
    }

    /// Vertices of component `c`, ascending.
    pub fn members(&self, c: usize) -> Vec<usize> {
        self.component_id
            .iter()
            .enumerate()
            .filter(|(_, &id)| id == c)
            .map(|(v, _)| v)
            .collect()
    }

    pub fn is_single(&self) -> bool {
        self.component_count == 1
    }
}

// Iterative Tarjan. Components are numbered in completion order, which is a
// reverse topological order of the condensation.
fn tarjan(adj: &[Vec<usize>]) -> SccDecomposition {
    let n = adj.len();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut component_id = vec![UNSEEN; n];
    let mut count = 0;
    let mut next_index = 0;
    // (vertex, position in its adjacency list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(&w) = adj[v].get(*pos) {
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    component_id[w] = count;
                    if w == v {
                        break;
                    }
                }
                count += 1;
            }
        }
    }

    SccDecomposition {
        component_id,
        component_count: count,
        topological_order: (0..count).rev().collect(),
    }
}
