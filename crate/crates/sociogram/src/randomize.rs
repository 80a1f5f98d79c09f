//! Null-model generators for permutation testing: uniform node-label
//! permutation and degree-preserving double-edge rewiring.
//!
//! Both are driven by an explicit random stream. Replicate streams are
//! derived from (seed, replicate index) so parallel replication is
//! order-independent and reproducible.

use std::collections::{BTreeMap, HashSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{Network, NodeId};

/// Which null model generates randomized networks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    /// Uniformly random relabeling of the nodes; preserves the structure,
    /// permutes which node carries which attributes. This is the meaningful
    /// exchangeability for attribute statistics.
    #[default]
    LabelPermutation,
    /// Double-edge swaps preserving every node's degree (in/out degrees for
    /// directed networks). Degree-based statistics are constant under this
    /// backend; use it for structure-sensitive statistics.
    EdgeRewiring,
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Backend::LabelPermutation => f.write_str("label"),
            Backend::EdgeRewiring => f.write_str("rewire"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomizerConfig {
    pub backend: Backend,
    /// Attempted swaps per edge for the rewiring backend.
    pub swap_multiplier: usize,
    pub seed: u64,
}

impl Default for RandomizerConfig {
    fn default() -> Self {
        RandomizerConfig {
            backend: Backend::default(),
            swap_multiplier: 10,
            seed: 0,
        }
    }
}

/// Independent random stream for one replicate, derived from the base seed.
/// Same (seed, replicate) always yields the same stream, whatever order or
/// thread replicates run in.
pub fn replicate_rng(seed: u64, replicate: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate);
    rng
}

/// Uniformly random permutation of 0..n (Fisher–Yates).
pub fn random_permutation(n: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    perm
}

/// Uniformly random bijection on the node set. Applying it via
/// [`Network::relabel`] yields an isomorphic network.
pub fn permute_labels(net: &Network, rng: &mut impl Rng) -> BTreeMap<NodeId, NodeId> {
    let ids = net.node_ids();
    let perm = random_permutation(ids.len(), rng);
    ids.iter()
        .enumerate()
        .map(|(i, id)| (id.clone(), ids[perm[i]].clone()))
        .collect()
}

/// Randomize topology with `swap_multiplier * |E|` attempted double-edge
/// swaps: pick edges (a,b) and (c,d), rewire to (a,d) and (c,b) unless that
/// would create a self-loop or duplicate. Every node keeps its exact degree
/// (in- and out-degree for directed networks) and the result stays simple.
/// Failed attempts are skipped, not errors.
pub fn rewire_degree_preserving(
    net: &Network,
    cfg: &RandomizerConfig,
    rng: &mut impl Rng,
) -> Network {
    let mut edges: Vec<(usize, usize)> = net
        .edges()
        .iter()
        .map(|(a, b)| {
            (
                net.node_index(a).expect("edge endpoint"),
                net.node_index(b).expect("edge endpoint"),
            )
        })
        .collect();
    let m = edges.len();
    if m >= 2 {
        let directed = net.is_directed();
        let canon = |a: usize, b: usize| if directed { (a, b) } else { (a.min(b), a.max(b)) };
        let mut present: HashSet<(usize, usize)> =
            edges.iter().map(|&(a, b)| canon(a, b)).collect();

        for _ in 0..cfg.swap_multiplier * m {
            let i = rng.gen_range(0..m);
            let j = rng.gen_range(0..m);
            if i == j {
                continue;
            }
            let (a, b) = edges[i];
            let (mut c, mut d) = edges[j];
            // For undirected edges the stored orientation is arbitrary;
            // flip half the time so all pairings are reachable.
            if !directed && rng.gen_bool(0.5) {
                std::mem::swap(&mut c, &mut d);
            }
            // Proposed replacement: (a,d) and (c,b).
            if a == d || c == b {
                continue;
            }
            let e1 = canon(a, d);
            let e2 = canon(c, b);
            if e1 == e2 || present.contains(&e1) || present.contains(&e2) {
                continue;
            }
            present.remove(&canon(a, b));
            present.remove(&canon(c, d));
            present.insert(e1);
            present.insert(e2);
            edges[i] = (a, d);
            edges[j] = (c, b);
        }
    }

    let ids = net.node_ids().to_vec();
    let edge_ids: Vec<(NodeId, NodeId)> = edges
        .into_iter()
        .map(|(a, b)| (net.node_id(a).clone(), net.node_id(b).clone()))
        .collect();
    let rebuilt = if net.is_directed() {
        Network::directed(ids, edge_ids)
    } else {
        Network::undirected(ids, edge_ids)
    };
    rebuilt.expect("swaps preserve simplicity")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::DegreeMode;

    fn cycle4() -> Network {
        Network::undirected(
            ["a", "b", "c", "d"],
            [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]
                .map(|(x, y)| (NodeId::from(x), NodeId::from(y))),
        )
        .unwrap()
    }

    #[test]
    fn single_node_permutation_is_identity() {
        let net = Network::undirected(["only"], Vec::<(NodeId, NodeId)>::new()).unwrap();
        let mut rng = replicate_rng(1, 0);
        let map = permute_labels(&net, &mut rng);
        assert_eq!(map[&NodeId::from("only")], NodeId::from("only"));
    }

    #[test]
    fn relabeled_copy_is_isomorphic() {
        let net = crate::samples::club_network();
        let mut rng = replicate_rng(7, 0);
        let map = permute_labels(&net, &mut rng);
        let relabeled = net.relabel(&map).unwrap();
        assert_eq!(net.edge_count(), relabeled.edge_count());
        assert_eq!(net.diameter(), relabeled.diameter());
        assert_eq!(
            net.density().unwrap(),
            relabeled.density().unwrap()
        );
        let mut degs_a: Vec<usize> = net.degree_vector(DegreeMode::Total).unwrap();
        let mut degs_b: Vec<usize> = relabeled.degree_vector(DegreeMode::Total).unwrap();
        degs_a.sort_unstable();
        degs_b.sort_unstable();
        assert_eq!(degs_a, degs_b);
    }

    #[test]
    fn permutations_are_uniform() {
        // 3 nodes, 6 bijections; each should appear with frequency 1/6 ± 0.02.
        let net = Network::undirected(["a", "b", "c"], Vec::<(NodeId, NodeId)>::new()).unwrap();
        let draws = 10_000;
        let mut counts: BTreeMap<Vec<NodeId>, usize> = BTreeMap::new();
        for rep in 0..draws {
            let mut rng = replicate_rng(11, rep);
            let map = permute_labels(&net, &mut rng);
            let key: Vec<NodeId> = net.node_ids().iter().map(|id| map[id].clone()).collect();
            *counts.entry(key).or_insert(0) += 1;
        }
        assert_eq!(counts.len(), 6);
        for &count in counts.values() {
            let freq = count as f64 / draws as f64;
            assert!(
                (freq - 1.0 / 6.0).abs() < 0.02,
                "bijection frequency {freq} strays from uniform"
            );
        }
    }

    #[test]
    fn rewiring_preserves_degree_vector() {
        let net = cycle4();
        for seed in 0..20 {
            let mut rng = replicate_rng(seed, 0);
            let rewired = rewire_degree_preserving(&net, &RandomizerConfig::default(), &mut rng);
            assert_eq!(
                rewired.degree_vector(DegreeMode::Total).unwrap(),
                vec![2, 2, 2, 2]
            );
            assert_eq!(rewired.edge_count(), 4);
        }
    }

    #[test]
    fn single_edge_network_is_returned_unchanged() {
        let net = Network::undirected(
            ["a", "b", "c"],
            [(NodeId::from("a"), NodeId::from("b"))],
        )
        .unwrap();
        let mut rng = replicate_rng(3, 0);
        let rewired = rewire_degree_preserving(&net, &RandomizerConfig::default(), &mut rng);
        assert_eq!(rewired, net);
    }

    #[test]
    fn directed_rewiring_preserves_in_and_out_degrees() {
        let net = Network::directed(
            ["a", "b", "c", "d", "e"],
            [
                ("a", "b"),
                ("b", "c"),
                ("c", "d"),
                ("d", "e"),
                ("e", "a"),
                ("a", "c"),
                ("b", "d"),
            ]
            .map(|(x, y)| (NodeId::from(x), NodeId::from(y))),
        )
        .unwrap();
        for seed in 0..20 {
            let mut rng = replicate_rng(seed, 1);
            let rewired = rewire_degree_preserving(&net, &RandomizerConfig::default(), &mut rng);
            assert_eq!(
                rewired.degree_vector(DegreeMode::In).unwrap(),
                net.degree_vector(DegreeMode::In).unwrap()
            );
            assert_eq!(
                rewired.degree_vector(DegreeMode::Out).unwrap(),
                net.degree_vector(DegreeMode::Out).unwrap()
            );
        }
    }

    #[test]
    fn same_seed_same_output() {
        let net = crate::samples::club_network();
        let cfg = RandomizerConfig::default();
        let a = rewire_degree_preserving(&net, &cfg, &mut replicate_rng(99, 5));
        let b = rewire_degree_preserving(&net, &cfg, &mut replicate_rng(99, 5));
        assert_eq!(a, b);
        let pa = permute_labels(&net, &mut replicate_rng(99, 6));
        let pb = permute_labels(&net, &mut replicate_rng(99, 6));
        assert_eq!(pa, pb);
    }
}
