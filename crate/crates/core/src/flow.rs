//! Uncapacitated min-cost flow by successive shortest augmenting paths with
//! node potentials.

use crate::error::{Error, Result};

/// Relative tolerance on the divergence balance.
pub const BALANCE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowNetwork {
    /// Positive entries are supplies, negative entries are demands.
    pub divergence: Vec<f64>,
    pub arcs: Vec<Arc>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowSolution {
    pub cost: f64,
    pub flow: Vec<f64>,
}

impl FlowNetwork {
    pub fn new(divergence: Vec<f64>) -> Self {
        FlowNetwork {
            divergence,
            arcs: Vec::new(),
        }
    }

    pub fn add_arc(&mut self, tail: usize, head: usize, cost: f64) -> &mut Self {
        self.arcs.push(Arc { tail, head, cost });
        self
    }

    /// Complete directed graph with `cost(i, j)` on every ordered pair.
    pub fn complete(divergence: Vec<f64>, cost: impl Fn(usize, usize) -> f64) -> Self {
        let n = divergence.len();
        let mut net = FlowNetwork::new(divergence);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    net.add_arc(i, j, cost(i, j));
                }
            }
        }
        net
    }
}

pub fn min_cost_flow(net: &FlowNetwork) -> Result<FlowSolution> {
    let n = net.divergence.len();
    for a in &net.arcs {
        if a.tail >= n || a.head >= n {
            return Err(Error::Malformed("arc endpoint out of range".into()));
        }
        if !(a.cost >= 0.0) || !a.cost.is_finite() {
            return Err(Error::Malformed("arc costs must be finite and nonnegative".into()));
        }
    }
    let total: f64 = net.divergence.iter().sum();
    let mass: f64 = net.divergence.iter().map(|v| v.abs()).sum();
    if total.abs() > BALANCE_TOL * mass.max(1.0) {
        return Err(Error::Unbalanced(total));
    }
    let stop = BALANCE_TOL * mass.max(1.0);

    let mut supply: Vec<f64> = net.divergence.iter().map(|&v| v.max(0.0)).collect();
    let mut demand: Vec<f64> = net.divergence.iter().map(|&v| (-v).max(0.0)).collect();
    let mut flow = vec![0.0; net.arcs.len()];
    let mut potential = vec![0.0; n];

    // Residual edges: 2k is arc k forward, 2k+1 is its reverse.
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, a) in net.arcs.iter().enumerate() {
        out[a.tail].push(2 * k);
        out[a.head].push(2 * k + 1);
    }
    let endpoint = |e: usize| -> (usize, usize) {
        let a = &net.arcs[e / 2];
        if e % 2 == 0 {
            (a.tail, a.head)
        } else {
            (a.head, a.tail)
        }
    };
    let edge_cost = |e: usize| -> f64 {
        let c = net.arcs[e / 2].cost;
        if e % 2 == 0 {
            c
        } else {
            -c
        }
    };

    loop {
        if !supply.iter().any(|&s| s > stop) {
            break;
        }
        // Dijkstra on reduced costs from every node with remaining supply.
        let mut dist = vec![f64::INFINITY; n];
        let mut parent: Vec<Option<usize>> = vec![None; n];
        let mut done = vec![false; n];
        for v in 0..n {
            if supply[v] > stop {
                dist[v] = 0.0;
            }
        }
        loop {
            let u = (0..n)
                .filter(|&v| !done[v] && dist[v].is_finite())
                .min_by(|&a, &b| dist[a].total_cmp(&dist[b]));
            let Some(u) = u else { break };
            done[u] = true;
            for &e in &out[u] {
                if e % 2 == 1 && flow[e / 2] <= 0.0 {
                    continue;
                }
                let (_, v) = endpoint(e);
                let reduced = (edge_cost(e) + potential[u] - potential[v]).max(0.0);
                let nd = dist[u] + reduced;
                if nd < dist[v] {
                    dist[v] = nd;
                    parent[v] = Some(e);
                }
            }
        }
        let sink = (0..n)
            .filter(|&v| demand[v] > stop && dist[v].is_finite())
            .min_by(|&a, &b| dist[a].total_cmp(&dist[b]).then(a.cmp(&b)));
        let Some(sink) = sink else {
            let left: f64 = supply.iter().sum();
            return Err(Error::NumericalFailure(format!(
                "no augmenting path for remaining supply {left:e}"
            )));
        };
        let reach = dist[sink];
        for v in 0..n {
            potential[v] += dist[v].min(reach);
        }

        let mut path = Vec::new();
        let mut v = sink;
        while let Some(e) = parent[v] {
            path.push(e);
            v = endpoint(e).0;
        }
        let source = v;
        let mut push = supply[source].min(demand[sink]);
        for &e in &path {
            if e % 2 == 1 {
                push = push.min(flow[e / 2]);
            }
        }
        for &e in &path {
            if e % 2 == 0 {
                flow[e / 2] += push;
            } else {
                flow[e / 2] -= push;
            }
        }
        supply[source] -= push;
        demand[sink] -= push;
    }

    let cost = net.arcs.iter().zip(&flow).map(|(a, f)| a.cost * f).sum();
    Ok(FlowSolution { cost, flow })
}
