//! Social role extraction: clique members, liaisons, isolators, and degree
//! scores, plus k-core peeling.
//!
//! All roles are computed on the undirected view of the input; directed
//! networks are collapsed first. Results are deterministic sets.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::{DegreeMode, GraphError, Network, NodeId};

#[derive(Debug, Error)]
pub enum RoleError {
    #[error("clique size must be at least 3, got {0}")]
    CliqueSizeTooSmall(usize),
    #[error("k-core requires k >= 1, got {0}")]
    KTooSmall(usize),
    #[error("role parameters invalid: {0}")]
    BadParams(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A complete subgraph; `members` are pairwise adjacent in the undirected
/// view of the network they came from.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Clique {
    pub members: BTreeSet<NodeId>,
}

impl Clique {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Which way the clique-member tie ratio is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatioDirection {
    /// outside-clique ties / within-clique ties (the default).
    OutsideOverWithin,
    /// within-clique ties / outside-clique ties (the literal alternative;
    /// a member with no outside ties gets an infinite ratio here).
    WithinOverOutside,
}

/// Tunables for role extraction.
#[derive(Debug, Clone, PartialEq)]
pub struct RoleParams {
    /// Clique sizes that confer clique membership.
    pub member_clique_sizes: BTreeSet<usize>,
    /// Clique sizes whose members anchor the liaison rule.
    pub liaison_clique_sizes: BTreeSet<usize>,
    pub ratio_threshold: f64,
    pub ratio_filter_enabled: bool,
    pub ratio_direction: RatioDirection,
    pub min_connections_for_liaison: usize,
    /// Cap on liaison closure rounds; `None` runs to the fixed point.
    pub max_liaison_rounds: Option<usize>,
}

impl Default for RoleParams {
    fn default() -> Self {
        RoleParams {
            member_clique_sizes: BTreeSet::from([4]),
            liaison_clique_sizes: BTreeSet::from([3, 4]),
            ratio_threshold: 0.5,
            ratio_filter_enabled: true,
            ratio_direction: RatioDirection::OutsideOverWithin,
            min_connections_for_liaison: 2,
            max_liaison_rounds: None,
        }
    }
}

impl RoleParams {
    pub fn validate(&self) -> Result<(), RoleError> {
        if self.member_clique_sizes.is_empty() {
            return Err(RoleError::BadParams(
                "member_clique_sizes must not be empty".into(),
            ));
        }
        if let Some(&s) = self.member_clique_sizes.iter().next() {
            if s < 3 {
                return Err(RoleError::CliqueSizeTooSmall(s));
            }
        }
        if let Some(&s) = self.liaison_clique_sizes.iter().next() {
            if s < 3 {
                return Err(RoleError::CliqueSizeTooSmall(s));
            }
        }
        if !(self.ratio_threshold > 0.0) {
            return Err(RoleError::BadParams(
                "ratio_threshold must be positive".into(),
            ));
        }
        if self.min_connections_for_liaison < 1 {
            return Err(RoleError::BadParams(
                "min_connections_for_liaison must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Role facts for one node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeRoles {
    /// Total degree in the original network (in + out for directed).
    pub degree_score: usize,
    pub is_clique_member: bool,
    /// Indices into [`RoleAssignment::cliques`] of the member-size cliques
    /// containing this node, whether or not the ratio filter admitted it.
    pub clique_ids: Vec<usize>,
    pub is_liaison: bool,
    pub is_isolator: bool,
}

/// Consistent per-node role assignment for a whole network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoleAssignment {
    pub nodes: BTreeMap<NodeId, NodeRoles>,
    /// Cliques of the member sizes, sorted; `clique_ids` index into this.
    pub cliques: Vec<Clique>,
}

impl RoleAssignment {
    pub fn clique_members(&self) -> BTreeSet<NodeId> {
        self.filter(|r| r.is_clique_member)
    }

    pub fn liaisons(&self) -> BTreeSet<NodeId> {
        self.filter(|r| r.is_liaison)
    }

    pub fn isolators(&self) -> BTreeSet<NodeId> {
        self.filter(|r| r.is_isolator)
    }

    fn filter(&self, pred: impl Fn(&NodeRoles) -> bool) -> BTreeSet<NodeId> {
        self.nodes
            .iter()
            .filter(|(_, r)| pred(r))
            .map(|(id, _)| id.clone())
            .collect()
    }

    /// Nodes attaining the maximum degree score.
    pub fn max_degree_nodes(&self) -> BTreeSet<NodeId> {
        let max = self
            .nodes
            .values()
            .map(|r| r.degree_score)
            .max()
            .unwrap_or(0);
        self.filter(|r| r.degree_score == max)
    }
}

/// All complete subgraphs of exactly `size` nodes, deduplicated. Not just
/// maximal ones: every size-k subset of a larger clique is listed too.
pub fn enumerate_cliques(net: &Network, size: usize) -> Result<BTreeSet<Clique>, RoleError> {
    if size < 3 {
        return Err(RoleError::CliqueSizeTooSmall(size));
    }
    let view = net.undirected_view();
    let n = view.node_count();
    let adj: Vec<&BTreeSet<usize>> = (0..n).map(|i| view.out_neighbors(i)).collect();

    // Ordered extension: grow index-increasing cliques so each k-subset is
    // emitted exactly once.
    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut current: Vec<usize> = Vec::with_capacity(size);
    for start in 0..n {
        current.push(start);
        let candidates: Vec<usize> = adj[start].iter().copied().filter(|&v| v > start).collect();
        extend_cliques(&adj, size, &mut current, &candidates, &mut found);
        current.pop();
    }

    Ok(found
        .into_iter()
        .map(|members| Clique {
            members: members.iter().map(|&i| view.node_id(i).clone()).collect(),
        })
        .collect())
}

fn extend_cliques(
    adj: &[&BTreeSet<usize>],
    size: usize,
    current: &mut Vec<usize>,
    candidates: &[usize],
    found: &mut Vec<Vec<usize>>,
) {
    if current.len() == size {
        found.push(current.clone());
        return;
    }
    // Prune: not enough candidates left to reach the target size.
    if current.len() + candidates.len() < size {
        return;
    }
    for (pos, &v) in candidates.iter().enumerate() {
        current.push(v);
        let narrowed: Vec<usize> = candidates[pos + 1..]
            .iter()
            .copied()
            .filter(|u| adj[v].contains(u))
            .collect();
        extend_cliques(adj, size, current, &narrowed, found);
        current.pop();
    }
}

/// Nodes of all cliques whose size is in `sizes`, as indices of `view`.
fn clique_node_indices(
    view: &Network,
    sizes: &BTreeSet<usize>,
) -> Result<(Vec<Clique>, BTreeSet<usize>), RoleError> {
    let mut cliques = BTreeSet::new();
    for &s in sizes {
        cliques.extend(enumerate_cliques(view, s)?);
    }
    let cliques: Vec<Clique> = cliques.into_iter().collect();
    let mut members = BTreeSet::new();
    for c in &cliques {
        for id in &c.members {
            members.insert(view.node_index(id).expect("clique member is a node"));
        }
    }
    Ok((cliques, members))
}

/// Clique members under `params`: in at least one clique of the member sizes
/// and, when the ratio filter is on, with few enough ties outside the clique
/// relative to ties within it.
pub fn clique_members(net: &Network, params: &RoleParams) -> Result<BTreeSet<NodeId>, RoleError> {
    params.validate()?;
    let view = net.undirected_view();
    let (cliques, _) = clique_node_indices(&view, &params.member_clique_sizes)?;
    Ok(filter_members(&view, &cliques, params))
}

fn filter_members(view: &Network, cliques: &[Clique], params: &RoleParams) -> BTreeSet<NodeId> {
    // Within-clique neighbors of each node: union of co-members over every
    // clique containing it.
    let mut within: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for c in cliques {
        let idxs: Vec<usize> = c
            .members
            .iter()
            .map(|id| view.node_index(id).expect("clique member is a node"))
            .collect();
        for &i in &idxs {
            let entry = within.entry(i).or_default();
            entry.extend(idxs.iter().copied().filter(|&j| j != i));
        }
    }

    let mut out = BTreeSet::new();
    for (&i, co) in &within {
        if !params.ratio_filter_enabled {
            out.insert(view.node_id(i).clone());
            continue;
        }
        let degree = view.out_neighbors(i).len();
        let within_ties = co.len();
        let outside_ties = degree - within_ties;
        let ratio = match params.ratio_direction {
            RatioDirection::OutsideOverWithin => outside_ties as f64 / within_ties as f64,
            RatioDirection::WithinOverOutside => within_ties as f64 / outside_ties as f64,
        };
        if ratio < params.ratio_threshold {
            out.insert(view.node_id(i).clone());
        }
    }
    out
}

/// Liaisons: nodes in no clique of the configured sizes that have at least
/// `min_connections_for_liaison` ties to clique members or other liaisons.
/// The "other liaisons" clause is resolved as a least fixed point, seeded
/// from clique-member anchors and grown until stable.
pub fn liaisons(net: &Network, params: &RoleParams) -> Result<BTreeSet<NodeId>, RoleError> {
    params.validate()?;
    let view = net.undirected_view();
    let (_, clique_nodes) = clique_node_indices(&view, &params.liaison_clique_sizes)?;

    let n = view.node_count();
    let mut liaison: BTreeSet<usize> = BTreeSet::new();
    let mut round = 0usize;
    loop {
        let mut next = BTreeSet::new();
        for i in 0..n {
            if clique_nodes.contains(&i) {
                continue;
            }
            let anchored = view
                .out_neighbors(i)
                .iter()
                .filter(|j| clique_nodes.contains(j) || liaison.contains(j))
                .count();
            if anchored >= params.min_connections_for_liaison {
                next.insert(i);
            }
        }
        round += 1;
        let stable = next == liaison;
        liaison = next;
        if stable || params.max_liaison_rounds.is_some_and(|cap| round >= cap) {
            break;
        }
    }

    Ok(liaison.into_iter().map(|i| view.node_id(i).clone()).collect())
}

/// Nodes with no connections at all (total degree zero; in + out for
/// directed networks).
pub fn isolators(net: &Network) -> BTreeSet<NodeId> {
    (0..net.node_count())
        .filter(|&i| net.degree_at(i, DegreeMode::Total) == 0)
        .map(|i| net.node_id(i).clone())
        .collect()
}

/// Maximal node set in which every node has at least `k` neighbors inside
/// the set, by iterative peeling of low-degree nodes.
pub fn kcore(net: &Network, k: usize) -> Result<BTreeSet<NodeId>, RoleError> {
    if k < 1 {
        return Err(RoleError::KTooSmall(k));
    }
    let view = net.undirected_view();
    let n = view.node_count();
    let mut alive = vec![true; n];
    let mut degree: Vec<usize> = (0..n).map(|i| view.out_neighbors(i).len()).collect();
    let mut queue: Vec<usize> = (0..n).filter(|&i| degree[i] < k).collect();
    while let Some(i) = queue.pop() {
        if !alive[i] {
            continue;
        }
        alive[i] = false;
        for &j in view.out_neighbors(i) {
            if alive[j] {
                degree[j] -= 1;
                if degree[j] < k {
                    queue.push(j);
                }
            }
        }
    }
    Ok((0..n)
        .filter(|&i| alive[i])
        .map(|i| view.node_id(i).clone())
        .collect())
}

/// Combine degree scores, clique membership, liaisons, and isolators into
/// one consistent per-node assignment.
pub fn assign_roles(net: &Network, params: &RoleParams) -> Result<RoleAssignment, RoleError> {
    params.validate()?;
    let view = net.undirected_view();
    let (cliques, _) = clique_node_indices(&view, &params.member_clique_sizes)?;
    let members = filter_members(&view, &cliques, params);
    let liaison_set = liaisons(net, params)?;
    let isolator_set = isolators(net);

    let mut clique_ids: BTreeMap<NodeId, Vec<usize>> = BTreeMap::new();
    for (ci, c) in cliques.iter().enumerate() {
        for id in &c.members {
            clique_ids.entry(id.clone()).or_default().push(ci);
        }
    }

    let mut nodes = BTreeMap::new();
    for (i, id) in net.node_ids().iter().enumerate() {
        nodes.insert(
            id.clone(),
            NodeRoles {
                degree_score: net.degree_at(i, DegreeMode::Total),
                is_clique_member: members.contains(id),
                clique_ids: clique_ids.get(id).cloned().unwrap_or_default(),
                is_liaison: liaison_set.contains(id),
                is_isolator: isolator_set.contains(id),
            },
        );
    }

    debug_assert!(nodes.values().all(|r| {
        (!r.is_isolator || (r.degree_score == 0 && !r.is_clique_member && !r.is_liaison))
            && (!r.is_liaison || !r.is_clique_member)
    }));

    Ok(RoleAssignment { nodes, cliques })
}
