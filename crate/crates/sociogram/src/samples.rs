//! Small hand-built networks used by docs, examples, and tests.

use crate::graph::{Network, NodeId};

/// An 11-member undirected friendship network with one of everything:
/// a 4-clique {A,B,C,D}, a triangle {F,H,I}, a liaison E bridging them,
/// pendants G and J on the hub F (degree 5, the maximum), and an isolated
/// member K.
pub fn club_network() -> Network {
    let nodes = ["A", "B", "C", "D", "E", "F", "G", "H", "I", "J", "K"];
    let edges = [
        ("A", "B"),
        ("A", "C"),
        ("A", "D"),
        ("B", "C"),
        ("B", "D"),
        ("C", "D"),
        ("F", "H"),
        ("F", "I"),
        ("H", "I"),
        ("E", "B"),
        ("E", "F"),
        ("F", "G"),
        ("F", "J"),
    ];
    Network::undirected(
        nodes.into_iter().map(NodeId::from),
        edges
            .into_iter()
            .map(|(a, b)| (NodeId::from(a), NodeId::from(b))),
    )
    .expect("static edge list is valid")
}

/// A 4-member directed advice network: A asks B, B asks D, and A and C ask
/// each other.
pub fn advice_network() -> Network {
    let nodes = ["A", "B", "C", "D"];
    let edges = [("A", "B"), ("B", "D"), ("A", "C"), ("C", "A")];
    Network::directed(
        nodes.into_iter().map(NodeId::from),
        edges
            .into_iter()
            .map(|(a, b)| (NodeId::from(a), NodeId::from(b))),
    )
    .expect("static edge list is valid")
}
