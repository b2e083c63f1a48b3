//! Min-cost flow whose costs live in `Z^depth` under lexicographic order.
//!
//! Every arc costs either nothing or plus/minus one unit on a single axis, which
//! is all the fair solver needs: the `r`-th game of a player earns `-e_r`, and
//! `-e_1 < -e_2 < ...` lexicographically, so cheaper games are always taken
//! first and the minimum cost flow maximises the G-vector lexicographically.
//! Axes at or beyond `depth` are ignored, which gives the truncated objectives
//! used by the staged solve.

use std::collections::VecDeque;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ArcCost {
    Zero,
    /// `sign * e_axis`, with `sign` either -1 or +1.
    Unit {
        axis: usize,
        sign: i32,
    },
}

impl ArcCost {
    fn negated(self) -> Self {
        match self {
            ArcCost::Zero => ArcCost::Zero,
            ArcCost::Unit { axis, sign } => ArcCost::Unit { axis, sign: -sign },
        }
    }
}

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: i32,
    cost: ArcCost,
    frozen: bool,
}

/// Residual graph. Arc `e` and `e ^ 1` are a forward/backward pair.
#[derive(Debug, Clone)]
pub(crate) struct LexFlowGraph {
    depth: usize,
    adjacency: Vec<Vec<usize>>,
    arcs: Vec<Arc>,
}

/// Shortest path tree from one root.
pub(crate) struct PathTree {
    depth: usize,
    dist: Vec<i64>,
    reached: Vec<bool>,
    parent: Vec<usize>,
}

impl PathTree {
    pub(crate) fn reached(&self, node: usize) -> bool {
        self.reached[node]
    }

    /// True when the node was reached with the zero cost vector.
    pub(crate) fn is_zero(&self, node: usize) -> bool {
        self.reached[node]
            && self.dist[node * self.depth..(node + 1) * self.depth]
                .iter()
                .all(|&c| c == 0)
    }
}

impl LexFlowGraph {
    pub(crate) fn new(nodes: usize, depth: usize) -> Self {
        Self {
            depth,
            adjacency: vec![Vec::new(); nodes],
            arcs: Vec::new(),
        }
    }

    pub(crate) fn add_arc(&mut self, from: usize, to: usize, cap: i32, cost: ArcCost) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc {
            to,
            cap,
            cost,
            frozen: false,
        });
        self.arcs.push(Arc {
            to: from,
            cap: 0,
            cost: cost.negated(),
            frozen: false,
        });
        self.adjacency[from].push(id);
        self.adjacency[to].push(id + 1);
        id
    }

    /// Units of flow currently on the forward arc `id`.
    pub(crate) fn flow(&self, id: usize) -> i32 {
        self.arcs[id ^ 1].cap
    }

    /// Excludes an arc pair from every later path search.
    pub(crate) fn freeze(&mut self, id: usize) {
        self.arcs[id].frozen = true;
        self.arcs[id ^ 1].frozen = true;
    }

    #[inline]
    fn delta(&self, cost: ArcCost, axis: usize) -> i64 {
        match cost {
            ArcCost::Unit { axis: a, sign } if a == axis && a < self.depth => i64::from(sign),
            _ => 0,
        }
    }

    /// Lexicographic label-correcting shortest paths over residual arcs.
    ///
    /// The residual graph of a min-cost flow has no negative cycle, so this
    /// terminates.
    pub(crate) fn shortest_paths(&self, root: usize) -> PathTree {
        let n = self.adjacency.len();
        let d = self.depth;
        let mut tree = PathTree {
            depth: d,
            dist: vec![0; n * d],
            reached: vec![false; n],
            parent: vec![usize::MAX; n],
        };
        let mut queued = vec![false; n];
        let mut queue = VecDeque::new();
        tree.reached[root] = true;
        queue.push_back(root);
        queued[root] = true;
        while let Some(u) = queue.pop_front() {
            queued[u] = false;
            for &e in &self.adjacency[u] {
                let arc = &self.arcs[e];
                if arc.cap <= 0 || arc.frozen {
                    continue;
                }
                let v = arc.to;
                if tree.reached[v] && !self.improves(&tree, u, arc.cost, v) {
                    continue;
                }
                for axis in 0..d {
                    tree.dist[v * d + axis] = tree.dist[u * d + axis] + self.delta(arc.cost, axis);
                }
                tree.reached[v] = true;
                tree.parent[v] = e;
                if !queued[v] {
                    queued[v] = true;
                    queue.push_back(v);
                }
            }
        }
        tree
    }

    fn improves(&self, tree: &PathTree, u: usize, cost: ArcCost, v: usize) -> bool {
        let d = self.depth;
        for axis in 0..d {
            let cand = tree.dist[u * d + axis] + self.delta(cost, axis);
            let cur = tree.dist[v * d + axis];
            if cand != cur {
                return cand < cur;
            }
        }
        false
    }

    /// Pushes one unit along the tree path from its root to `target`.
    pub(crate) fn augment(&mut self, tree: &PathTree, root: usize, target: usize) {
        let mut v = target;
        while v != root {
            let e = tree.parent[v];
            self.arcs[e].cap -= 1;
            self.arcs[e ^ 1].cap += 1;
            v = self.arcs[e ^ 1].to;
        }
    }

    /// Pushes one unit directly on arc `id` (negative `units` cancels flow).
    pub(crate) fn push(&mut self, id: usize, units: i32) {
        self.arcs[id].cap -= units;
        self.arcs[id ^ 1].cap += units;
    }

    /// Successive shortest paths from `source` to `sink`, one unit at a time,
    /// until `required` units flow or the sink becomes unreachable. Returns the
    /// number of units pushed.
    pub(crate) fn min_cost_flow(&mut self, source: usize, sink: usize, required: usize) -> usize {
        let mut pushed = 0;
        while pushed < required {
            let tree = self.shortest_paths(source);
            if !tree.reached(sink) {
                break;
            }
            self.augment(&tree, source, sink);
            pushed += 1;
        }
        pushed
    }
}
