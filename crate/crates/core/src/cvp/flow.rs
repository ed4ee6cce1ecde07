//! Undirected capacitated graphs and Edmonds-Karp maximum flow.

use std::collections::VecDeque;

/// An undirected edge `{u, v}` of capacity `c` is stored as the two arcs
/// `u -> v` and `v -> u`, each of capacity `c` and each the residual reverse
/// of the other. Pushing `f` along one arc adds `f` to its partner, which is
/// the `f(u,v) = -f(v,u)` bookkeeping of the undirected residual network.
#[derive(Clone, Debug, Default)]
pub struct FlowNetwork {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    residual: Vec<i64>,
}

impl FlowNetwork {
    pub fn new(vertices: usize) -> Self {
        Self {
            adj: vec![Vec::new(); vertices],
            to: Vec::new(),
            residual: Vec::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.to.len() / 2
    }

    /// Adds the undirected edge `{u, v}` with capacity `cap >= 0`.
    pub fn add_edge(&mut self, u: usize, v: usize, cap: i64) {
        assert!(cap >= 0, "negative capacity {cap}");
        assert!(u != v, "self-loop at {u}");
        let a = self.to.len();
        self.to.extend([v, u]);
        self.residual.extend([cap, cap]);
        self.adj[u].push(a);
        self.adj[v].push(a + 1);
    }

    /// Breadth-first search from `s` over arcs with positive residual
    /// capacity. Returns the arc used to reach each vertex (`s` maps to
    /// itself via `usize::MAX`), stopping early once `stop` is reached.
    fn bfs(&self, s: usize, stop: Option<usize>) -> Vec<Option<usize>> {
        let mut via = vec![None; self.vertex_count()];
        via[s] = Some(usize::MAX);
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &a in &self.adj[x] {
                let y = self.to[a];
                if via[y].is_none() && self.residual[a] > 0 {
                    via[y] = Some(a);
                    if Some(y) == stop {
                        return via;
                    }
                    queue.push_back(y);
                }
            }
        }
        via
    }

    /// Maximum `s-t` flow by shortest augmenting paths. The network is left
    /// in its final residual state, so [`FlowNetwork::source_side`] can read
    /// off a minimum cut afterwards.
    pub fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        assert!(s != t, "source equals sink");
        let mut total = 0;
        loop {
            let via = self.bfs(s, Some(t));
            if via[t].is_none() {
                return total;
            }
            let mut bottleneck = i64::MAX;
            let mut x = t;
            while x != s {
                let a = via[x].expect("on path");
                bottleneck = bottleneck.min(self.residual[a]);
                x = self.to[a ^ 1];
            }
            let mut x = t;
            while x != s {
                let a = via[x].expect("on path");
                self.residual[a] -= bottleneck;
                self.residual[a ^ 1] += bottleneck;
                x = self.to[a ^ 1];
            }
            total += bottleneck;
        }
    }

    /// Vertices reachable from `s` in the residual network. After a maximum
    /// flow this is the source side of the inclusion-minimal minimum cut.
    pub fn source_side(&self, s: usize) -> Vec<bool> {
        self.bfs(s, None).into_iter().map(|v| v.is_some()).collect()
    }
}
