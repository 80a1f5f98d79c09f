//! Immutable network representation and basic structural measures.
//!
//! A [`Network`] is a simple graph (no self-loops, no duplicate edges) over
//! string-keyed nodes, either directed or undirected. Networks are immutable
//! after construction, so they can be shared freely across threads.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Opaque node identifier (a student ID or synthetic label).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(id: impl Into<String>) -> Self {
        NodeId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId(s.to_owned())
    }
}

impl From<String> for NodeId {
    fn from(s: String) -> Self {
        NodeId(s)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Which degree to read off a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeMode {
    /// Undirected degree; for directed networks, in-degree + out-degree.
    Total,
    /// Incoming edges only (directed networks).
    In,
    /// Outgoing edges only (directed networks).
    Out,
}

impl fmt::Display for DegreeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegreeMode::Total => f.write_str("total"),
            DegreeMode::In => f.write_str("in"),
            DegreeMode::Out => f.write_str("out"),
        }
    }
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("node id must be non-empty")]
    EmptyNodeId,
    #[error("duplicate node id {0}")]
    DuplicateNode(NodeId),
    #[error("self-loop on node {0} is not allowed")]
    SelfLoop(NodeId),
    #[error("edge endpoint {0} is not a node of the network")]
    UnknownEndpoint(NodeId),
    #[error("degree mode {0} is only defined for directed networks")]
    InvalidMode(DegreeMode),
    #[error("operation requires at least {required} nodes, network has {actual}")]
    DegenerateNetwork { required: usize, actual: usize },
    #[error("network is already undirected")]
    AlreadyUndirected,
    #[error("relabeling map is not a bijection on the node set: {0}")]
    InvalidRelabeling(String),
}

/// An immutable simple graph over [`NodeId`]s.
///
/// For undirected networks an edge {a, b} is stored once; for directed
/// networks (a, b) and (b, a) are distinct edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    directed: bool,
    /// Node ids in ascending order; all index-based accessors use positions
    /// into this vector.
    ids: Vec<NodeId>,
    index: BTreeMap<NodeId, usize>,
    /// Out-neighbors for directed networks, neighbors for undirected.
    adj: Vec<BTreeSet<usize>>,
    /// In-neighbors; empty sets when undirected.
    radj: Vec<BTreeSet<usize>>,
    edge_count: usize,
}

impl Network {
    /// Build an undirected network. Edges are deduplicated ({a,b} and {b,a}
    /// collapse to one), self-loops and unknown endpoints are rejected.
    pub fn undirected<N, E>(nodes: N, edges: E) -> Result<Self, GraphError>
    where
        N: IntoIterator,
        N::Item: Into<NodeId>,
        E: IntoIterator,
        E::Item: Into<(NodeId, NodeId)>,
    {
        Self::build(false, nodes, edges)
    }

    /// Build a directed network.
    pub fn directed<N, E>(nodes: N, edges: E) -> Result<Self, GraphError>
    where
        N: IntoIterator,
        N::Item: Into<NodeId>,
        E: IntoIterator,
        E::Item: Into<(NodeId, NodeId)>,
    {
        Self::build(true, nodes, edges)
    }

    fn build<N, E>(directed: bool, nodes: N, edges: E) -> Result<Self, GraphError>
    where
        N: IntoIterator,
        N::Item: Into<NodeId>,
        E: IntoIterator,
        E::Item: Into<(NodeId, NodeId)>,
    {
        let mut ids: Vec<NodeId> = Vec::new();
        let mut index = BTreeMap::new();
        for node in nodes {
            let id: NodeId = node.into();
            if id.as_str().is_empty() {
                return Err(GraphError::EmptyNodeId);
            }
            if index.contains_key(&id) {
                return Err(GraphError::DuplicateNode(id));
            }
            ids.push(id);
            index.insert(ids.last().unwrap().clone(), 0);
        }
        ids.sort();
        for (pos, id) in ids.iter().enumerate() {
            *index.get_mut(id).unwrap() = pos;
        }

        let n = ids.len();
        let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        let mut radj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        let mut edge_count = 0;
        for edge in edges {
            let (a, b): (NodeId, NodeId) = edge.into();
            let &ai = index.get(&a).ok_or(GraphError::UnknownEndpoint(a.clone()))?;
            let &bi = index.get(&b).ok_or(GraphError::UnknownEndpoint(b.clone()))?;
            if ai == bi {
                return Err(GraphError::SelfLoop(a));
            }
            if directed {
                if adj[ai].insert(bi) {
                    radj[bi].insert(ai);
                    edge_count += 1;
                }
            } else if adj[ai].insert(bi) {
                adj[bi].insert(ai);
                edge_count += 1;
            }
        }

        Ok(Network {
            directed,
            ids,
            index,
            adj,
            radj,
            edge_count,
        })
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Node ids in ascending order.
    pub fn node_ids(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn contains_node(&self, id: &NodeId) -> bool {
        self.index.contains_key(id)
    }

    /// Position of `id` in [`Self::node_ids`].
    pub fn node_index(&self, id: &NodeId) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn node_id(&self, idx: usize) -> &NodeId {
        &self.ids[idx]
    }

    /// True if edge (a, b) exists; for undirected networks order is immaterial.
    pub fn contains_edge(&self, a: &NodeId, b: &NodeId) -> bool {
        match (self.index.get(a), self.index.get(b)) {
            (Some(&ai), Some(&bi)) => self.adj[ai].contains(&bi),
            _ => false,
        }
    }

    /// Edges in canonical order: (source, target) for directed networks,
    /// lexicographically sorted pairs for undirected ones.
    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (ai, nbrs) in self.adj.iter().enumerate() {
            for &bi in nbrs {
                if self.directed || ai < bi {
                    out.push((self.ids[ai].clone(), self.ids[bi].clone()));
                }
            }
        }
        out
    }

    pub(crate) fn out_neighbors(&self, idx: usize) -> &BTreeSet<usize> {
        &self.adj[idx]
    }

    pub(crate) fn in_neighbors(&self, idx: usize) -> &BTreeSet<usize> {
        &self.radj[idx]
    }

    /// Degree of the node at `idx` under `mode`, panicking on mode misuse;
    /// public callers go through [`Self::degrees`] which validates the mode.
    pub(crate) fn degree_at(&self, idx: usize, mode: DegreeMode) -> usize {
        match (mode, self.directed) {
            (DegreeMode::Total, false) => self.adj[idx].len(),
            (DegreeMode::Total, true) => self.adj[idx].len() + self.radj[idx].len(),
            (DegreeMode::In, true) => self.radj[idx].len(),
            (DegreeMode::Out, true) => self.adj[idx].len(),
            _ => panic!("in/out degree requested on an undirected network"),
        }
    }

    fn check_mode(&self, mode: DegreeMode) -> Result<(), GraphError> {
        if !self.directed && mode != DegreeMode::Total {
            return Err(GraphError::InvalidMode(mode));
        }
        Ok(())
    }

    /// Degree vector in node-index order.
    pub fn degree_vector(&self, mode: DegreeMode) -> Result<Vec<usize>, GraphError> {
        self.check_mode(mode)?;
        Ok((0..self.node_count())
            .map(|i| self.degree_at(i, mode))
            .collect())
    }

    /// Per-node degree. Every node is present; isolated nodes map to 0.
    pub fn degrees(&self, mode: DegreeMode) -> Result<BTreeMap<NodeId, usize>, GraphError> {
        let vec = self.degree_vector(mode)?;
        Ok(self
            .ids
            .iter()
            .cloned()
            .zip(vec)
            .collect())
    }

    /// Ratio of present connections to possible connections. Edge direction
    /// is ignored: a directed network has the density of its undirected
    /// collapse.
    pub fn density(&self) -> Result<f64, GraphError> {
        let n = self.node_count();
        if n < 2 {
            return Err(GraphError::DegenerateNetwork {
                required: 2,
                actual: n,
            });
        }
        let pairs = if self.directed {
            let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
            for (ai, nbrs) in self.adj.iter().enumerate() {
                for &bi in nbrs {
                    seen.insert((ai.min(bi), ai.max(bi)));
                }
            }
            seen.len()
        } else {
            self.edge_count
        };
        Ok(2.0 * pairs as f64 / (n as f64 * (n as f64 - 1.0)))
    }

    /// Neighbor sets of the undirected view, regardless of directedness.
    fn undirected_adjacency(&self) -> Vec<BTreeSet<usize>> {
        if !self.directed {
            return self.adj.clone();
        }
        let mut merged = self.adj.clone();
        for (i, ins) in self.radj.iter().enumerate() {
            merged[i].extend(ins.iter().copied());
        }
        merged
    }

    /// Longest shortest path over reachable pairs, ignoring edge direction.
    /// Unreachable pairs do not count; an edgeless network reports 0.
    pub fn diameter(&self) -> usize {
        let n = self.node_count();
        let adj = self.undirected_adjacency();
        let mut best = 0usize;
        let mut dist = vec![usize::MAX; n];
        let mut queue = std::collections::VecDeque::new();
        for start in 0..n {
            if adj[start].is_empty() {
                continue;
            }
            dist.fill(usize::MAX);
            dist[start] = 0;
            queue.clear();
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        best = best.max(dist[v]);
                        queue.push_back(v);
                    }
                }
            }
        }
        best
    }

    /// Degree counts binned from 0 to the maximum degree, zero-count bins
    /// included; counts sum to the node count.
    pub fn degree_histogram(&self, mode: DegreeMode) -> Result<Vec<(usize, usize)>, GraphError> {
        let degs = self.degree_vector(mode)?;
        let max = degs.iter().copied().max().unwrap_or(0);
        let mut counts = vec![0usize; max + 1];
        for d in degs {
            counts[d] += 1;
        }
        Ok(counts.into_iter().enumerate().collect())
    }

    /// Collapse a directed network into an undirected one: {a, b} is present
    /// iff (a, b) or (b, a) is. Errors when the network is already undirected.
    pub fn undirected_collapse(&self) -> Result<Network, GraphError> {
        if !self.directed {
            return Err(GraphError::AlreadyUndirected);
        }
        let edges: Vec<(NodeId, NodeId)> = self.edges();
        Network::undirected(self.ids.clone(), edges)
    }

    /// The undirected view: a borrow for undirected networks, a collapse for
    /// directed ones.
    pub(crate) fn undirected_view(&self) -> std::borrow::Cow<'_, Network> {
        if self.directed {
            std::borrow::Cow::Owned(self.undirected_collapse().expect("directed input"))
        } else {
            std::borrow::Cow::Borrowed(self)
        }
    }

    /// Rebuild the network with every node renamed through `map`, which must
    /// be a bijection on the node set.
    pub fn relabel(&self, map: &BTreeMap<NodeId, NodeId>) -> Result<Network, GraphError> {
        if map.len() != self.node_count() {
            return Err(GraphError::InvalidRelabeling(format!(
                "map has {} entries, network has {} nodes",
                map.len(),
                self.node_count()
            )));
        }
        let mut targets: BTreeSet<&NodeId> = BTreeSet::new();
        for (from, to) in map {
            if !self.contains_node(from) {
                return Err(GraphError::InvalidRelabeling(format!(
                    "{from} is not a node of the network"
                )));
            }
            if !self.contains_node(to) {
                return Err(GraphError::InvalidRelabeling(format!(
                    "{to} is not a node of the network"
                )));
            }
            if !targets.insert(to) {
                return Err(GraphError::InvalidRelabeling(format!(
                    "{to} is mapped to twice"
                )));
            }
        }
        let edges: Vec<(NodeId, NodeId)> = self
            .edges()
            .into_iter()
            .map(|(a, b)| (map[&a].clone(), map[&b].clone()))
            .collect();
        let build = if self.directed {
            Network::directed(self.ids.clone(), edges)
        } else {
            Network::undirected(self.ids.clone(), edges)
        };
        build
    }

    /// All headline measures in one pass.
    pub fn summarize(&self) -> Result<NetworkSummary, GraphError> {
        let n = self.node_count();
        let density = self.density()?;
        let diameter = self.diameter();
        let degree_stats = if self.directed {
            let ins = self.degree_vector(DegreeMode::In)?;
            let outs = self.degree_vector(DegreeMode::Out)?;
            DegreeStats::Directed {
                avg_in: ins.iter().sum::<usize>() as f64 / n as f64,
                avg_out: outs.iter().sum::<usize>() as f64 / n as f64,
                max_in: ins.iter().copied().max().unwrap_or(0),
                max_out: outs.iter().copied().max().unwrap_or(0),
            }
        } else {
            let degs = self.degree_vector(DegreeMode::Total)?;
            let avg = degs.iter().sum::<usize>() as f64 / n as f64;
            DegreeStats::Undirected {
                avg,
                avg_pct: 100.0 * avg / n as f64,
                max: degs.iter().copied().max().unwrap_or(0),
            }
        };
        Ok(NetworkSummary {
            size: n,
            diameter,
            edgeless: self.edge_count == 0,
            density,
            degree_stats,
        })
    }
}

/// Degree side of a [`NetworkSummary`], split by directedness.
#[derive(Debug, Clone, PartialEq)]
pub enum DegreeStats {
    Undirected { avg: f64, avg_pct: f64, max: usize },
    Directed {
        avg_in: f64,
        avg_out: f64,
        max_in: usize,
        max_out: usize,
    },
}

/// Headline structural measures of a network.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSummary {
    pub size: usize,
    /// 0 when the network has no edges (see `edgeless`).
    pub diameter: usize,
    pub edgeless: bool,
    pub density: f64,
    pub degree_stats: DegreeStats,
}
