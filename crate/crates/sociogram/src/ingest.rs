//! Roster and nomination file parsing, and network construction.
//!
//! File formats (comma-separated, UTF-8, header row mandatory):
//!
//! ```text
//! roster.csv:       student_id,school,gpax
//! nominations.csv:  source_id,target_id,relation      relation in {friend, helper}
//! ```
//!
//! All parse errors carry the offending line number.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::graph::{GraphError, Network, NodeId};

pub const ROSTER_HEADER: [&str; 3] = ["student_id", "school", "gpax"];
pub const NOMINATION_HEADER: [&str; 3] = ["source_id", "target_id", "relation"];

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{path}: expected header '{expected}', found '{found}'")]
    Header {
        path: PathBuf,
        expected: String,
        found: String,
    },
    #[error("{path}:{line}: {message}")]
    MalformedRow {
        path: PathBuf,
        line: u64,
        message: String,
    },
    #[error("{path}:{line}: duplicate student id {id}")]
    DuplicateId {
        path: PathBuf,
        line: u64,
        id: String,
    },
    #[error("{path}:{line}: gpax {value} outside [0.00, 4.00]")]
    GpaxOutOfRange {
        path: PathBuf,
        line: u64,
        value: String,
    },
    #[error("{path}:{line}: id {id} does not resolve against the roster")]
    UnknownId {
        path: PathBuf,
        line: u64,
        id: String,
    },
    #[error("{path}:{line}: student {id} nominated themselves")]
    SelfNomination {
        path: PathBuf,
        line: u64,
        id: String,
    },
}

/// One roster row: identity, school label, and performance attribute.
#[derive(Debug, Clone, PartialEq)]
pub struct StudentRecord {
    pub student_id: String,
    pub school: String,
    /// Grade point average in [0.00, 4.00], two decimal places.
    pub gpax: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Friend,
    Helper,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::Friend => f.write_str("friend"),
            Relation::Helper => f.write_str("helper"),
        }
    }
}

/// One survey nomination: source names target as friend or study helper.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nomination {
    pub source_id: String,
    pub target_id: String,
    pub relation: Relation,
}

/// Nominations plus warnings for rows that were dropped as exact duplicates.
#[derive(Debug, Clone)]
pub struct NominationLoad {
    pub nominations: Vec<Nomination>,
    pub warnings: Vec<String>,
}

fn open_reader(path: &Path) -> Result<csv::Reader<std::fs::File>, IngestError> {
    let file = std::fs::File::open(path).map_err(|source| IngestError::Io {
        path: path.to_owned(),
        source,
    })?;
    Ok(csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(file))
}

fn check_header(
    reader: &mut csv::Reader<std::fs::File>,
    path: &Path,
    expected: &[&str],
) -> Result<(), IngestError> {
    let headers = reader.headers().map_err(|source| IngestError::Csv {
        path: path.to_owned(),
        source,
    })?;
    let found: Vec<&str> = headers.iter().collect();
    if found != expected {
        return Err(IngestError::Header {
            path: path.to_owned(),
            expected: expected.join(","),
            found: found.join(","),
        });
    }
    Ok(())
}

fn row_line(record: &csv::StringRecord) -> u64 {
    record.position().map(|p| p.line()).unwrap_or(0)
}

/// Parse a gpax field: a decimal in [0.00, 4.00] with at most two decimal
/// places.
fn parse_gpax(raw: &str, path: &Path, line: u64) -> Result<f64, IngestError> {
    let value: f64 = raw.parse().map_err(|_| IngestError::MalformedRow {
        path: path.to_owned(),
        line,
        message: format!("gpax '{raw}' is not a number"),
    })?;
    if !(0.0..=4.0).contains(&value) {
        return Err(IngestError::GpaxOutOfRange {
            path: path.to_owned(),
            line,
            value: raw.to_owned(),
        });
    }
    let scaled = value * 100.0;
    if (scaled - scaled.round()).abs() > 1e-6 {
        return Err(IngestError::MalformedRow {
            path: path.to_owned(),
            line,
            message: format!("gpax '{raw}' has more than two decimal places"),
        });
    }
    Ok(scaled.round() / 100.0)
}

/// Load and validate a roster file.
pub fn load_roster(path: &Path) -> Result<Vec<StudentRecord>, IngestError> {
    let mut reader = open_reader(path)?;
    check_header(&mut reader, path, &ROSTER_HEADER)?;

    let mut records = Vec::new();
    let mut seen: BTreeMap<String, u64> = BTreeMap::new();
    for row in reader.records() {
        let row = row.map_err(|source| IngestError::Csv {
            path: path.to_owned(),
            source,
        })?;
        let line = row_line(&row);
        if row.len() != 3 {
            return Err(IngestError::MalformedRow {
                path: path.to_owned(),
                line,
                message: format!("expected 3 fields, found {}", row.len()),
            });
        }
        let student_id = row[0].to_owned();
        if student_id.is_empty() {
            return Err(IngestError::MalformedRow {
                path: path.to_owned(),
                line,
                message: "empty student_id".into(),
            });
        }
        if seen.insert(student_id.clone(), line).is_some() {
            return Err(IngestError::DuplicateId {
                path: path.to_owned(),
                line,
                id: student_id,
            });
        }
        let gpax = parse_gpax(&row[2], path, line)?;
        records.push(StudentRecord {
            student_id,
            school: row[1].to_owned(),
            gpax,
        });
    }
    Ok(records)
}

/// Load nominations, resolving every id against the roster. Self-nominations
/// and unknown ids are errors; exact duplicate rows are dropped with a
/// warning.
pub fn load_nominations(path: &Path, roster: &[StudentRecord]) -> Result<NominationLoad, IngestError> {
    let ids: BTreeSet<&str> = roster.iter().map(|r| r.student_id.as_str()).collect();
    let mut reader = open_reader(path)?;
    check_header(&mut reader, path, &NOMINATION_HEADER)?;

    let mut nominations = Vec::new();
    let mut warnings = Vec::new();
    let mut seen: BTreeSet<(String, String, Relation)> = BTreeSet::new();
    for row in reader.records() {
        let row = row.map_err(|source| IngestError::Csv {
            path: path.to_owned(),
            source,
        })?;
        let line = row_line(&row);
        if row.len() != 3 {
            return Err(IngestError::MalformedRow {
                path: path.to_owned(),
                line,
                message: format!("expected 3 fields, found {}", row.len()),
            });
        }
        let source_id = row[0].to_owned();
        let target_id = row[1].to_owned();
        let relation = match &row[2] {
            "friend" => Relation::Friend,
            "helper" => Relation::Helper,
            other => {
                return Err(IngestError::MalformedRow {
                    path: path.to_owned(),
                    line,
                    message: format!("relation '{other}' is not 'friend' or 'helper'"),
                })
            }
        };
        for id in [&source_id, &target_id] {
            if !ids.contains(id.as_str()) {
                return Err(IngestError::UnknownId {
                    path: path.to_owned(),
                    line,
                    id: id.clone(),
                });
            }
        }
        if source_id == target_id {
            return Err(IngestError::SelfNomination {
                path: path.to_owned(),
                line,
                id: source_id,
            });
        }
        if !seen.insert((source_id.clone(), target_id.clone(), relation)) {
            warnings.push(format!(
                "{}:{line}: duplicate nomination {source_id} -> {target_id} ({relation}) dropped",
                path.display()
            ));
            continue;
        }
        nominations.push(Nomination {
            source_id,
            target_id,
            relation,
        });
    }
    Ok(NominationLoad {
        nominations,
        warnings,
    })
}

impl std::cmp::Ord for Relation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (*self as u8).cmp(&(*other as u8))
    }
}

impl std::cmp::PartialOrd for Relation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Undirected friend network over the full roster. A single nomination in
/// either direction creates the edge; with `require_reciprocity` only
/// mutual nominations do. Students who neither nominated nor were nominated
/// appear as isolated nodes.
pub fn build_friend_network(
    nominations: &[Nomination],
    roster: &[StudentRecord],
    require_reciprocity: bool,
) -> Result<Network, GraphError> {
    let pairs: BTreeSet<(String, String)> = nominations
        .iter()
        .filter(|n| n.relation == Relation::Friend)
        .map(|n| (n.source_id.clone(), n.target_id.clone()))
        .collect();
    let edges: Vec<(NodeId, NodeId)> = pairs
        .iter()
        .filter(|(s, t)| !require_reciprocity || pairs.contains(&(t.clone(), s.clone())))
        .map(|(s, t)| (NodeId::from(s.as_str()), NodeId::from(t.as_str())))
        .collect();
    Network::undirected(roster.iter().map(|r| NodeId::from(r.student_id.as_str())), edges)
}

/// Directed study-helper network over the full roster: an edge from A to B
/// means A asks B for help; opposite orientations stay distinct.
pub fn build_helper_network(
    nominations: &[Nomination],
    roster: &[StudentRecord],
) -> Result<Network, GraphError> {
    let edges: Vec<(NodeId, NodeId)> = nominations
        .iter()
        .filter(|n| n.relation == Relation::Helper)
        .map(|n| (NodeId::from(n.source_id.as_str()), NodeId::from(n.target_id.as_str())))
        .collect();
    Network::directed(roster.iter().map(|r| NodeId::from(r.student_id.as_str())), edges)
}

/// Attribute map (node id -> gpax) for a roster.
pub fn gpax_attributes(roster: &[StudentRecord]) -> BTreeMap<NodeId, f64> {
    roster
        .iter()
        .map(|r| (NodeId::from(r.student_id.as_str()), r.gpax))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn roster_parses_valid_rows() {
        let f = write_temp("student_id,school,gpax\ns001,EN,3.25\ns002,EN,2.00\n");
        let roster = load_roster(f.path()).unwrap();
        assert_eq!(roster.len(), 2);
        assert_eq!(roster[0].student_id, "s001");
        assert_eq!(roster[0].school, "EN");
        assert!((roster[0].gpax - 3.25).abs() < 1e-12);
    }

    #[test]
    fn roster_rejects_out_of_range_gpax() {
        let f = write_temp("student_id,school,gpax\ns001,EN,4.50\n");
        let err = load_roster(f.path()).unwrap_err();
        assert!(matches!(err, IngestError::GpaxOutOfRange { line: 2, .. }));
    }

    #[test]
    fn roster_rejects_duplicate_ids() {
        let f = write_temp("student_id,school,gpax\ns001,EN,3.25\ns001,EN,2.75\n");
        let err = load_roster(f.path()).unwrap_err();
        assert!(matches!(err, IngestError::DuplicateId { line: 3, .. }));
    }

    #[test]
    fn roster_rejects_overlong_decimals_and_bad_header() {
        let f = write_temp("student_id,school,gpax\ns001,EN,3.256\n");
        assert!(matches!(
            load_roster(f.path()).unwrap_err(),
            IngestError::MalformedRow { line: 2, .. }
        ));
        let f = write_temp("id,school,gpa\ns001,EN,3.25\n");
        assert!(matches!(
            load_roster(f.path()).unwrap_err(),
            IngestError::Header { .. }
        ));
    }

    fn roster3() -> Vec<StudentRecord> {
        [("s001", 3.25), ("s002", 2.5), ("s003", 3.0)]
            .iter()
            .map(|(id, g)| StudentRecord {
                student_id: (*id).to_owned(),
                school: "EN".to_owned(),
                gpax: *g,
            })
            .collect()
    }

    #[test]
    fn nominations_parse_and_resolve() {
        let f = write_temp(
            "source_id,target_id,relation\ns001,s002,friend\ns001,s003,helper\n",
        );
        let load = load_nominations(f.path(), &roster3()).unwrap();
        assert_eq!(load.nominations.len(), 2);
        assert_eq!(load.nominations[0].relation, Relation::Friend);
        assert!(load.warnings.is_empty());
    }

    #[test]
    fn nominations_reject_self_and_unknown() {
        let f = write_temp("source_id,target_id,relation\ns001,s001,helper\n");
        assert!(matches!(
            load_nominations(f.path(), &roster3()).unwrap_err(),
            IngestError::SelfNomination { line: 2, .. }
        ));
        let f = write_temp("source_id,target_id,relation\ns001,s999,friend\n");
        assert!(matches!(
            load_nominations(f.path(), &roster3()).unwrap_err(),
            IngestError::UnknownId { line: 2, .. }
        ));
    }

    #[test]
    fn duplicate_nominations_warn_and_dedupe() {
        let f = write_temp(
            "source_id,target_id,relation\ns001,s002,friend\ns001,s002,friend\n",
        );
        let load = load_nominations(f.path(), &roster3()).unwrap();
        assert_eq!(load.nominations.len(), 1);
        assert_eq!(load.warnings.len(), 1);
        assert!(load.warnings[0].contains(":3:"));
    }

    fn nom(s: &str, t: &str, relation: Relation) -> Nomination {
        Nomination {
            source_id: s.to_owned(),
            target_id: t.to_owned(),
            relation,
        }
    }

    #[test]
    fn friend_network_symmetrizes() {
        let noms = [
            nom("s001", "s002", Relation::Friend),
            nom("s002", "s001", Relation::Friend),
        ];
        let net = build_friend_network(&noms, &roster3(), false).unwrap();
        assert_eq!(net.edge_count(), 1);
        assert_eq!(net.node_count(), 3);
    }

    #[test]
    fn friend_network_keeps_non_participants_as_isolators() {
        let net = build_friend_network(&[], &roster3(), false).unwrap();
        assert_eq!(net.node_count(), 3);
        assert_eq!(net.edge_count(), 0);
    }

    #[test]
    fn friend_network_one_sided_vs_reciprocal() {
        let noms = [
            nom("s001", "s002", Relation::Friend),
            nom("s001", "s003", Relation::Friend),
            nom("s003", "s001", Relation::Friend),
        ];
        let lenient = build_friend_network(&noms, &roster3(), false).unwrap();
        assert_eq!(lenient.edge_count(), 2);
        let strict = build_friend_network(&noms, &roster3(), true).unwrap();
        assert_eq!(strict.edge_count(), 1);
        assert!(strict.contains_edge(&NodeId::from("s001"), &NodeId::from("s003")));
    }

    #[test]
    fn helper_network_keeps_direction() {
        let noms = [nom("s001", "s002", Relation::Helper)];
        let net = build_helper_network(&noms, &roster3()).unwrap();
        assert!(net.is_directed());
        assert!(net.contains_edge(&NodeId::from("s001"), &NodeId::from("s002")));
        assert!(!net.contains_edge(&NodeId::from("s002"), &NodeId::from("s001")));
    }

    #[test]
    fn node_universes_match_across_networks() {
        let noms = [
            nom("s001", "s002", Relation::Friend),
            nom("s002", "s003", Relation::Helper),
        ];
        let friend = build_friend_network(&noms, &roster3(), false).unwrap();
        let helper = build_helper_network(&noms, &roster3()).unwrap();
        assert_eq!(friend.node_ids(), helper.node_ids());
    }
}
