//! Combinatorial obstruction to a braid being generated by an autonomous flow.
//!
//! A subset `S` of at least three strands certifies non-autonomy when
//! 1. every pair in `S` has non-zero winding, and
//! 2. no strand is maximal: for each `s₁ ∈ S` the row `s₂ ↦ w(s₁, s₂)` is
//!    not constant over `S \ {s₁}`.

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braids::{NestingOrder, WindingMatrix};

/// Largest strand count accepted by the exhaustive search.
pub const MAX_STRANDS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObstructionError {
    #[error("exhaustive search supports at most {max} strands, got {got}")]
    TooManyStrands { max: usize, got: usize },
    #[error("winding matrix is not symmetric")]
    NotSymmetric,
}

/// Two partners whose windings with `strand` differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonMaximalEvidence {
    pub strand: String,
    pub first: (String, i64),
    pub second: (String, i64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionCertificate {
    /// Strand labels in matrix order.
    pub subset: Vec<String>,
    pub evidence: Vec<NonMaximalEvidence>,
}

fn evidence_for(w: &WindingMatrix, subset: &[usize]) -> Option<Vec<NonMaximalEvidence>> {
    if subset.len() < 3 {
        return None;
    }
    for (a, &i) in subset.iter().enumerate() {
        for &j in &subset[a + 1..] {
            if w.w(i, j) == 0 {
                return None;
            }
        }
    }
    let labels = w.labels();
    subset
        .iter()
        .map(|&i| {
            let mut others = subset.iter().copied().filter(|&j| j != i);
            let first = others.next()?;
            let second = others.find(|&j| w.w(i, j) != w.w(i, first))?;
            Some(NonMaximalEvidence {
                strand: labels[i].clone(),
                first: (labels[first].clone(), w.w(i, first)),
                second: (labels[second].clone(), w.w(i, second)),
            })
        })
        .collect()
}

/// First qualifying subset in order of increasing size, then lexicographic
/// order of strand indices. `None` means no obstruction was found, which
/// does not imply that the braid is autonomous.
pub fn find_obstruction(w: &WindingMatrix) -> Result<Option<ObstructionCertificate>, ObstructionError> {
    let k = w.size();
    if k > MAX_STRANDS {
        return Err(ObstructionError::TooManyStrands { max: MAX_STRANDS, got: k });
    }
    if !w.is_symmetric() {
        return Err(ObstructionError::NotSymmetric);
    }
    for size in 3..=k {
        for subset in (0..k).combinations(size) {
            if let Some(evidence) = evidence_for(w, &subset) {
                let labels = w.labels();
                return Ok(Some(ObstructionCertificate {
                    subset: subset.iter().map(|&i| labels[i].clone()).collect(),
                    evidence,
                }));
            }
        }
    }
    Ok(None)
}

/// Re-checks both conditions for the labels in `subset`.
pub fn verify_certificate(w: &WindingMatrix, subset: &[String]) -> bool {
    let Some(idx) = subset.iter().map(|l| w.index_of(l)).collect::<Option<Vec<usize>>>() else {
        return false;
    };
    if idx.len() < 3 || idx.iter().unique().count() != idx.len() {
        return false;
    }
    let all_nonzero = idx.iter().tuple_combinations().all(|(&i, &j)| w.w(i, j) != 0);
    let none_maximal = idx.iter().all(|&i| {
        let row: Vec<i64> = idx.iter().filter(|&&j| j != i).map(|&j| w.w(i, j)).collect();
        row.iter().any(|&v| v != row[0])
    });
    all_nonzero && none_maximal
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "kebab-case")]
pub enum ConsistencyViolation {
    /// Zero winding for comparable strands, or non-zero for incomparable ones.
    ZeroIffIncomparable { p: String, q: String, winding: i64, comparable: bool },
    /// Two strands below a common strand wind differently around it.
    CommonParent { parent: String, q: String, q2: String, w_q: i64, w_q2: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub pairs_checked: usize,
    pub triples_checked: usize,
    pub violations: Vec<ConsistencyViolation>,
}

impl ConsistencyReport {
    pub fn is_consistent(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the two laws satisfied by windings of autonomous flows against a
/// nesting order over the same labels. Strands on a common trajectory are
/// comparable, so the first law expects them to wind non-trivially.
pub fn autonomous_consistency(w: &WindingMatrix, order: &NestingOrder) -> Result<ConsistencyReport, String> {
    if w.labels() != order.labels() {
        return Err("winding matrix and nesting order have different labels".into());
    }
    let k = w.size();
    let labels = w.labels();
    let mut report = ConsistencyReport::default();
    for (i, j) in (0..k).tuple_combinations() {
        report.pairs_checked += 1;
        let comparable = order.comparable(i, j);
        let winding = w.w(i, j);
        if (winding == 0) == comparable {
            report.violations.push(ConsistencyViolation::ZeroIffIncomparable {
                p: labels[i].clone(),
                q: labels[j].clone(),
                winding,
                comparable,
            });
        }
    }
    for p in 0..k {
        let below: Vec<usize> = (0..k).filter(|&q| q != p && order.leq(q, p)).collect();
        for (&q, &q2) in below.iter().tuple_combinations() {
            report.triples_checked += 1;
            if w.w(p, q) != w.w(p, q2) {
                report.violations.push(ConsistencyViolation::CommonParent {
                    parent: labels[p].clone(),
                    q: labels[q].clone(),
                    q2: labels[q2].clone(),
                    w_q: w.w(p, q),
                    w_q2: w.w(p, q2),
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn b_na() -> WindingMatrix {
        WindingMatrix::from_pairs(
            labels(&["s", "p1", "p2", "m"]),
            &[(0, 1, 2), (0, 2, 1), (1, 2, 1), (0, 3, 1), (1, 3, 1), (2, 3, 3)],
        )
        .unwrap()
    }

    #[test]
    fn b_na_certificate_uses_all_strands() {
        let cert = find_obstruction(&b_na()).unwrap().unwrap();
        assert_eq!(cert.subset, labels(&["s", "p1", "p2", "m"]));
        assert!(verify_certificate(&b_na(), &cert.subset));
        assert_eq!(cert.evidence.len(), 4);
        for e in &cert.evidence {
            assert_ne!(e.first.1, e.second.1);
        }
    }

    #[test]
    fn three_strand_subset_of_b_na_fails() {
        assert!(!verify_certificate(&b_na(), &labels(&["s", "p1", "p2"])));
    }

    #[test]
    fn windings_one_two_three_certify() {
        let w = WindingMatrix::from_pairs(labels(&["a", "b", "c"]), &[(0, 1, 1), (0, 2, 2), (1, 2, 3)]).unwrap();
        let cert = find_obstruction(&w).unwrap().unwrap();
        assert_eq!(cert.subset.len(), 3);
    }

    #[test]
    fn zero_pair_blocks_certificate() {
        let w = WindingMatrix::from_pairs(labels(&["a", "b", "c"]), &[(0, 1, 1), (0, 2, 2), (1, 2, 0)]).unwrap();
        assert!(!verify_certificate(&w, &labels(&["a", "b", "c"])));
        assert_eq!(find_obstruction(&w).unwrap(), None);
    }

    #[test]
    fn too_many_strands() {
        let w = WindingMatrix::zeros((0..21).map(|i| i.to_string()).collect());
        assert!(matches!(find_obstruction(&w), Err(ObstructionError::TooManyStrands { .. })));
    }

    #[test]
    fn b_na_violates_every_total_order() {
        let w = b_na();
        for perm in (0..4).permutations(4) {
            let order = NestingOrder::chain(w.labels().to_vec(), &perm).unwrap();
            assert!(!autonomous_consistency(&w, &order).unwrap().is_consistent(), "{perm:?}");
        }
    }

    #[test]
    fn zero_matrix_with_antichain_is_consistent() {
        let l = labels(&["a", "b", "c"]);
        let r = autonomous_consistency(&WindingMatrix::zeros(l.clone()), &NestingOrder::antichain(l)).unwrap();
        assert!(r.is_consistent());
        assert_eq!(r.pairs_checked, 3);
    }
}
