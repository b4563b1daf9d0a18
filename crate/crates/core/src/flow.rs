//! Global data association as a minimum-cost network flow.
//!
//! Every observation i becomes a pair of nodes u_i -> v_i whose connecting
//! edge carries the observation cost (negative for confident detections).
//! The source feeds every u_i at the entry cost, every v_i reaches the sink
//! at the exit cost, and v_i -> u_j transition edges link observations at
//! most `max_gap` frames apart. All capacities are one, so each unit of
//! flow is one identity trajectory and flows never share a detection.
//!
//! The solver pushes augmenting paths in cost order (successive shortest
//! paths with node potentials) and stops as soon as the cheapest path no
//! longer lowers the objective; the objective is convex in the number of
//! paths, so nothing better lies beyond that point.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;

use crate::cost::{cue_vector, AssociationCosts, CostError};
use crate::model::{Observation, Trajectory};

/// Association settings: the trained cost models plus the largest frame gap
/// a single transition edge may bridge.
#[derive(Debug, Clone, PartialEq)]
pub struct AssociationConfig {
    pub max_gap: u64,
    pub costs: AssociationCosts,
}

impl Default for AssociationConfig {
    fn default() -> Self {
        AssociationConfig {
            max_gap: 30,
            costs: AssociationCosts::default(),
        }
    }
}

/// Errors from graph construction and solution extraction.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FlowError {
    #[error(transparent)]
    Cue(#[from] CostError),
    #[error("flow solution violates conservation at observation {index}")]
    Conservation { index: usize },
    #[error("{count} observations exceed the exhaustive-search limit of {limit}")]
    TooLarge { count: usize, limit: usize },
}

const SOURCE: usize = 0;
const SINK: usize = 1;

/// Most observations [`brute_force_associate`] will accept; the partition
/// count explodes beyond this.
pub const BRUTE_FORCE_LIMIT: usize = 10;

#[derive(Debug, Clone, Copy)]
struct Edge {
    to: u32,
    cap: u8,
    cost: f64,
}

/// The association network for one observation list.
#[derive(Debug, Clone)]
pub struct FlowGraph {
    n_obs: usize,
    adj: Vec<Vec<u32>>,
    /// Edges in forward/reverse pairs; even indices are the original arcs.
    edges: Vec<Edge>,
    /// (from, to) observation pairs, aligned with the transition flags of a
    /// solution.
    transitions: Vec<(usize, usize)>,
    c_entr: Vec<f64>,
    c_exit: Vec<f64>,
    c_obsv: Vec<f64>,
    c_tran: Vec<f64>,
    /// Edge index (even) of each kind, for flow extraction.
    entry_edges: Vec<u32>,
    obsv_edges: Vec<u32>,
    exit_edges: Vec<u32>,
    tran_edges: Vec<u32>,
    frames: Vec<u64>,
}

/// Which original edges carry one unit of flow, plus the objective value.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowSolution {
    pub f_entr: Vec<bool>,
    pub f_obsv: Vec<bool>,
    pub f_exit: Vec<bool>,
    /// Aligned with [`FlowGraph::transitions`].
    pub f_tran: Vec<bool>,
    pub total_cost: f64,
    /// Number of unit paths pushed, i.e. trajectories selected.
    pub paths: usize,
}

fn node_u(i: usize) -> usize {
    2 + 2 * i
}

fn node_v(i: usize) -> usize {
    3 + 2 * i
}

impl FlowGraph {
    pub fn n_observations(&self) -> usize {
        self.n_obs
    }

    pub fn transitions(&self) -> &[(usize, usize)] {
        &self.transitions
    }

    fn add_edge(&mut self, from: usize, to: usize, cost: f64) -> u32 {
        let idx = self.edges.len() as u32;
        self.edges.push(Edge {
            to: to as u32,
            cap: 1,
            cost,
        });
        self.edges.push(Edge {
            to: from as u32,
            cap: 0,
            cost: -cost,
        });
        self.adj[from].push(idx);
        self.adj[to].push(idx + 1);
        idx
    }
}

/// Builds the association network over validated observations. Entry and
/// exit costs are stored per edge, so variants with non-constant
/// birth/death pricing only need a different constructor.
pub fn build_graph(
    observations: &[Observation],
    config: &AssociationConfig,
) -> Result<FlowGraph, FlowError> {
    let n = observations.len();
    let mut g = FlowGraph {
        n_obs: n,
        adj: vec![Vec::new(); 2 + 2 * n],
        edges: Vec::new(),
        transitions: Vec::new(),
        c_entr: vec![config.costs.c_entr; n],
        c_exit: vec![config.costs.c_exit; n],
        c_obsv: Vec::with_capacity(n),
        c_tran: Vec::new(),
        entry_edges: Vec::with_capacity(n),
        obsv_edges: Vec::with_capacity(n),
        exit_edges: Vec::with_capacity(n),
        tran_edges: Vec::new(),
        frames: observations.iter().map(|o| o.frame).collect(),
    };

    for (i, obs) in observations.iter().enumerate() {
        g.c_obsv.push(config.costs.observation_cost(obs.det_score));
        let e = g.add_edge(SOURCE, node_u(i), g.c_entr[i]);
        g.entry_edges.push(e);
        let e = g.add_edge(node_u(i), node_v(i), g.c_obsv[i]);
        g.obsv_edges.push(e);
        let e = g.add_edge(node_v(i), SINK, g.c_exit[i]);
        g.exit_edges.push(e);
    }

    for (i, a) in observations.iter().enumerate() {
        for (j, b) in observations.iter().enumerate() {
            if b.frame > a.frame && b.frame - a.frame <= config.max_gap {
                let cost = config.costs.transition_cost(&cue_vector(a, b)?);
                g.transitions.push((i, j));
                g.c_tran.push(cost);
                let e = g.add_edge(node_v(i), node_u(j), cost);
                g.tran_edges.push(e);
            }
        }
    }
    Ok(g)
}

#[derive(Debug, Clone, Copy)]
struct HeapItem {
    dist: f64,
    node: u32,
}

impl PartialEq for HeapItem {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == core::cmp::Ordering::Equal
    }
}
impl Eq for HeapItem {}
impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapItem {
    /// Reversed so the std max-heap pops the smallest distance; equal
    /// distances pop the lowest node id for determinism.
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// Runs successive shortest paths on a copy of the graph's residual state.
pub fn solve_min_cost_flow(graph: &FlowGraph) -> FlowSolution {
    let n_nodes = graph.adj.len();
    let mut caps: Vec<u8> = graph.edges.iter().map(|e| e.cap).collect();
    let mut paths = 0usize;

    if graph.n_obs > 0 {
        // Initial potentials: exact shortest distances from the source on
        // the yet-unaugmented graph, which is acyclic. Relaxing nodes in
        // frame order is a topological sweep, so one pass suffices.
        let mut order: Vec<usize> = (0..graph.n_obs).collect();
        order.sort_unstable_by_key(|&i| (graph.frames[i], i));
        let mut topo = Vec::with_capacity(n_nodes);
        topo.push(SOURCE);
        for &i in &order {
            topo.push(node_u(i));
            topo.push(node_v(i));
        }
        topo.push(SINK);

        let mut pi = vec![f64::INFINITY; n_nodes];
        pi[SOURCE] = 0.0;
        for &from in &topo {
            if pi[from].is_infinite() {
                continue;
            }
            for &e in &graph.adj[from] {
                let edge = &graph.edges[e as usize];
                if caps[e as usize] > 0 && pi[from] + edge.cost < pi[edge.to as usize] {
                    pi[edge.to as usize] = pi[from] + edge.cost;
                }
            }
        }

        let mut dist = vec![f64::INFINITY; n_nodes];
        let mut parent = vec![u32::MAX; n_nodes];
        loop {
            // Dijkstra over reduced costs.
            dist.fill(f64::INFINITY);
            parent.fill(u32::MAX);
            dist[SOURCE] = 0.0;
            let mut heap = BinaryHeap::new();
            heap.push(HeapItem {
                dist: 0.0,
                node: SOURCE as u32,
            });
            while let Some(HeapItem { dist: d, node }) = heap.pop() {
                let from = node as usize;
                if d > dist[from] {
                    continue;
                }
                for &e in &graph.adj[from] {
                    if caps[e as usize] == 0 {
                        continue;
                    }
                    let edge = &graph.edges[e as usize];
                    let to = edge.to as usize;
                    if pi[to].is_infinite() {
                        continue;
                    }
                    let reduced = (edge.cost + pi[from] - pi[to]).max(0.0);
                    let nd = d + reduced;
                    if nd < dist[to] {
                        dist[to] = nd;
                        parent[to] = e;
                        heap.push(HeapItem {
                            dist: nd,
                            node: to as u32,
                        });
                    }
                }
            }
            if dist[SINK].is_infinite() {
                break;
            }

            // True path cost decides the stop: one more unit of flow only
            // helps while the cheapest source-sink path is negative.
            let mut path_cost = 0.0;
            let mut at = SINK;
            while at != SOURCE {
                let e = parent[at] as usize;
                path_cost += graph.edges[e].cost;
                at = graph.edges[e ^ 1].to as usize;
            }
            if path_cost >= 0.0 {
                break;
            }

            let mut at = SINK;
            while at != SOURCE {
                let e = parent[at] as usize;
                caps[e] -= 1;
                caps[e ^ 1] += 1;
                at = graph.edges[e ^ 1].to as usize;
            }
            paths += 1;
            for v in 0..n_nodes {
                if dist[v].is_finite() {
                    pi[v] += dist[v];
                }
            }
        }
    }

    let used = |e: u32| caps[e as usize] == 0;
    let f_entr: Vec<bool> = graph.entry_edges.iter().map(|&e| used(e)).collect();
    let f_obsv: Vec<bool> = graph.obsv_edges.iter().map(|&e| used(e)).collect();
    let f_exit: Vec<bool> = graph.exit_edges.iter().map(|&e| used(e)).collect();
    let f_tran: Vec<bool> = graph.tran_edges.iter().map(|&e| used(e)).collect();

    // The objective, recomputed term by term from the indicators.
    let mut total_cost = 0.0;
    for i in 0..graph.n_obs {
        if f_entr[i] {
            total_cost += graph.c_entr[i];
        }
        if f_obsv[i] {
            total_cost += graph.c_obsv[i];
        }
        if f_exit[i] {
            total_cost += graph.c_exit[i];
        }
    }
    for (k, &t) in f_tran.iter().enumerate() {
        if t {
            total_cost += graph.c_tran[k];
        }
    }

    FlowSolution {
        f_entr,
        f_obsv,
        f_exit,
        f_tran,
        total_cost,
        paths,
    }
}

/// Turns a flow solution into trajectories. Ids are assigned in order of
/// first frame, ties broken toward the smaller observation index.
pub fn extract_trajectories(
    graph: &FlowGraph,
    solution: &FlowSolution,
) -> Result<Vec<Trajectory>, FlowError> {
    let n = graph.n_obs;
    let mut succ: Vec<Option<usize>> = vec![None; n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    for (k, &(a, b)) in graph.transitions.iter().enumerate() {
        if solution.f_tran[k] {
            if succ[a].replace(b).is_some() {
                return Err(FlowError::Conservation { index: a });
            }
            if pred[b].replace(a).is_some() {
                return Err(FlowError::Conservation { index: b });
            }
        }
    }
    for i in 0..n {
        let in_units = solution.f_entr[i] as u8 + pred[i].is_some() as u8;
        let out_units = solution.f_exit[i] as u8 + succ[i].is_some() as u8;
        let through = solution.f_obsv[i] as u8;
        if in_units != through || out_units != through {
            return Err(FlowError::Conservation { index: i });
        }
    }

    let mut starts: Vec<usize> = (0..n)
        .filter(|&i| solution.f_obsv[i] && solution.f_entr[i])
        .collect();
    starts.sort_unstable_by_key(|&i| (graph.frames[i], i));

    let mut trajectories = Vec::with_capacity(starts.len());
    for (id, &start) in starts.iter().enumerate() {
        let mut traj = Trajectory::new(id as u64 + 1);
        let mut at = Some(start);
        while let Some(i) = at {
            traj.push(i, graph.frames[i])
                .map_err(|_| FlowError::Conservation { index: i })?;
            at = succ[i];
        }
        trajectories.push(traj);
    }
    Ok(trajectories)
}

/// Convenience pipeline: build the graph, solve, extract. Returns the
/// trajectories and the objective value.
pub fn associate(
    observations: &[Observation],
    config: &AssociationConfig,
) -> Result<(Vec<Trajectory>, f64), FlowError> {
    let graph = build_graph(observations, config)?;
    let solution = solve_min_cost_flow(&graph);
    let trajectories = extract_trajectories(&graph, &solution)?;
    Ok((trajectories, solution.total_cost))
}

/// Exhaustive reference for tiny instances: enumerates every partition of
/// the observations into gap-respecting chains plus unused leftovers and
/// returns the minimizer of the same objective. Rejects more than
/// `BRUTE_FORCE_LIMIT` observations.
pub fn brute_force_associate(
    observations: &[Observation],
    config: &AssociationConfig,
) -> Result<(Vec<Trajectory>, f64), FlowError> {
    let n = observations.len();
    if n > BRUTE_FORCE_LIMIT {
        return Err(FlowError::TooLarge {
            count: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }

    let c_obsv: Vec<f64> = observations
        .iter()
        .map(|o| config.costs.observation_cost(o.det_score))
        .collect();
    // Pairwise transition costs for valid hops, indexed [from][to].
    let mut c_tran: Vec<Vec<Option<f64>>> = vec![vec![None; n]; n];
    for (i, a) in observations.iter().enumerate() {
        for (j, b) in observations.iter().enumerate() {
            if b.frame > a.frame && b.frame - a.frame <= config.max_gap {
                c_tran[i][j] = Some(config.costs.transition_cost(&cue_vector(a, b)?));
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by_key(|&i| (observations[i].frame, i));

    struct Search<'a> {
        order: &'a [usize],
        c_obsv: &'a [f64],
        c_tran: &'a [Vec<Option<f64>>],
        entry_exit: f64,
        chains: Vec<Vec<usize>>,
        best_cost: f64,
        best: Vec<Vec<usize>>,
    }

    impl Search<'_> {
        fn cost(&self) -> f64 {
            let mut total = 0.0;
            for chain in &self.chains {
                total += self.entry_exit;
                for (k, &i) in chain.iter().enumerate() {
                    total += self.c_obsv[i];
                    if k > 0 {
                        total += self.c_tran[chain[k - 1]][i].unwrap();
                    }
                }
            }
            total
        }

        fn step(&mut self, k: usize) {
            if k == self.order.len() {
                let cost = self.cost();
                if cost < self.best_cost {
                    self.best_cost = cost;
                    self.best = self.chains.clone();
                }
                return;
            }
            let i = self.order[k];
            // Leave the observation unused.
            self.step(k + 1);
            // Open a chain with it.
            self.chains.push(vec![i]);
            self.step(k + 1);
            self.chains.pop();
            // Or append it to any chain that can still reach it.
            for c in 0..self.chains.len() {
                let last = *self.chains[c].last().unwrap();
                if self.c_tran[last][i].is_some() {
                    self.chains[c].push(i);
                    self.step(k + 1);
                    self.chains[c].pop();
                }
            }
        }
    }

    let mut search = Search {
        order: &order,
        c_obsv: &c_obsv,
        c_tran: &c_tran,
        entry_exit: config.costs.c_entr + config.costs.c_exit,
        chains: Vec::new(),
        best_cost: 0.0, // the empty selection is always feasible
        best: Vec::new(),
    };
    search.step(0);

    let mut chains = search.best;
    chains.sort_unstable_by_key(|c| (observations[c[0]].frame, c[0]));
    let mut trajectories = Vec::with_capacity(chains.len());
    for (id, chain) in chains.iter().enumerate() {
        let mut traj = Trajectory::new(id as u64 + 1);
        for &i in chain {
            traj.push(i, observations[i].frame).expect("chains are frame-ordered");
        }
        trajectories.push(traj);
    }
    Ok((trajectories, search.best_cost))
}
