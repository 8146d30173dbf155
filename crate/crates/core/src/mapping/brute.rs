//! Exact optimum by exhaustive enumeration, for verifying the heuristics on
//! small instances.

use alloc::vec::Vec;

use super::MappingError;
use crate::graph::{partition_weight, MappingGraph, Partition, VertexId};

/// Default cap on the number of orthogonal partitions the oracle may visit.
pub const DEFAULT_PARTITION_CAP: u64 = 1_000_000;

/// Exhaustively maximizes the partition objective. The graph is padded to
/// balance internally; with `C = max part size` and `K` parts there are
/// `(C!)^(K-1)` covering orthogonal partitions to visit (part 0 can be fixed
/// by symmetry), so the call fails with [`MappingError::TooManyPartitions`]
/// when that exceeds `cap`.
///
/// Returns a maximizer restricted to the real vertices of the input graph,
/// together with its weight. Ties resolve toward the first maximizer in
/// enumeration order (ascending per-part permutation index).
pub fn brute_force_optimum(
    graph: &MappingGraph,
    cap: u64,
) -> Result<(Partition, f64), MappingError> {
    let padded = graph.pad_to_complete();
    let k = padded.part_count();
    let c = padded.max_part_size();

    let perms = permutations(c);
    let candidates = (perms.len() as u128).checked_pow((k - 1) as u32);
    match candidates {
        Some(n) if n <= cap as u128 => {}
        _ => {
            return Err(MappingError::TooManyPartitions {
                candidates: candidates.unwrap_or(u128::MAX),
                cap,
            })
        }
    }

    // assignment[part][clique] = member placed in that clique; part 0 fixed
    let mut assignment: Vec<&[usize]> = Vec::with_capacity(k);
    let identity: Vec<usize> = (0..c).collect();
    for _ in 0..k {
        assignment.push(&identity);
    }

    let mut cursor = alloc::vec![0usize; k]; // cursor[0] never advances
    let mut best_weight = f64::NEG_INFINITY;
    let mut best_cursor = cursor.clone();
    loop {
        for part in 1..k {
            assignment[part] = &perms[cursor[part]];
        }
        let mut weight = 0.0;
        for clique in 0..c {
            for part in 0..k {
                let u = VertexId::new(part, assignment[part][clique]);
                for (other, members) in assignment.iter().enumerate().skip(part + 1) {
                    let v = VertexId::new(other, members[clique]);
                    weight += padded.weight(u, v);
                }
            }
        }
        if weight > best_weight {
            best_weight = weight;
            best_cursor.copy_from_slice(&cursor);
        }

        let mut part = k;
        loop {
            if part == 1 {
                // cursor exhausted
                let cliques: Vec<Vec<VertexId>> = (0..c)
                    .map(|clique| {
                        (0..k)
                            .map(|p| {
                                let perm = if p == 0 { &identity } else { &perms[best_cursor[p]] };
                                VertexId::new(p, perm[clique])
                            })
                            .collect()
                    })
                    .collect();
                let best = Partition::new(cliques).restrict_to_real(graph);
                let weight = partition_weight(graph, &best)?;
                return Ok((best, weight));
            }
            part -= 1;
            cursor[part] += 1;
            if cursor[part] < perms.len() {
                break;
            }
            cursor[part] = 0;
        }
    }
}

/// All permutations of `0..n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        // next_permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutations_are_lexicographic_and_complete() {
        let perms = permutations(3);
        assert_eq!(perms.len(), 6);
        assert_eq!(perms[0], alloc::vec![0, 1, 2]);
        assert_eq!(perms[5], alloc::vec![2, 1, 0]);
    }

    #[test]
    fn finds_the_cross_matching_on_the_greedy_trap() {
        let g = MappingGraph::from_weight_fn(&[2, 2], |u, v| match (u.member, v.member) {
            (0, 0) => 0.6,
            (1, 1) => 0.0,
            _ => 0.5,
        })
        .unwrap();
        // only two candidate matchings: 0.6 + 0.0 vs 0.5 + 0.5
        let (partition, weight) = brute_force_optimum(&g, 100).unwrap();
        assert_eq!(weight, 1.0);
        assert_eq!(
            partition.cliques(),
            &[
                alloc::vec![VertexId::new(0, 0), VertexId::new(1, 1)],
                alloc::vec![VertexId::new(0, 1), VertexId::new(1, 0)],
            ]
        );
    }

    #[test]
    fn zero_weights_give_zero() {
        let g = MappingGraph::from_weight_fn(&[2, 2, 2], |_, _| 0.0).unwrap();
        let (partition, weight) = brute_force_optimum(&g, 100).unwrap();
        assert_eq!(weight, 0.0);
        partition.validate(&g).unwrap();
    }

    #[test]
    fn three_parts_two_speakers_enumerates_four_candidates() {
        // hand enumeration: (2!)^2 = 4 partitions; weights below make the
        // double-swap partition optimal with 2.4
        let g = MappingGraph::from_weight_fn(&[2, 2, 2], |u, v| {
            match ((u.part, u.member), (v.part, v.member)) {
                ((0, 0), (1, 1)) | ((0, 1), (1, 0)) => 0.9,
                ((0, 0), (2, 1)) | ((0, 1), (2, 0)) => 0.3,
                ((1, 1), (2, 1)) | ((1, 0), (2, 0)) => 0.0,
                _ => 0.1,
            }
        })
        .unwrap();
        // candidates (clique pairing of part1/part2 members with part0):
        //   id/id:     0.1+0.1+0.0  + 0.1+0.1+0.0  = 0.4
        //   swap1/id:  0.9+0.1+0.1  + 0.9+0.1+0.1  = 2.2
        //   id/swap2:  0.1+0.3+0.1  + 0.1+0.3+0.1  = 1.0
        //   swap both: 0.9+0.3+0.0  + 0.9+0.3+0.0  = 2.4  <- optimum
        let (_, weight) = brute_force_optimum(&g, 100).unwrap();
        assert!((weight - 2.4).abs() < 1e-12);
    }

    #[test]
    fn cap_guard() {
        let g = MappingGraph::from_weight_fn(&[3, 3, 3], |_, _| 1.0).unwrap();
        // (3!)^2 = 36 candidates
        assert!(matches!(
            brute_force_optimum(&g, 35),
            Err(MappingError::TooManyPartitions { candidates: 36, cap: 35 })
        ));
        assert!(brute_force_optimum(&g, 36).is_ok());
    }

    #[test]
    fn unbalanced_graphs_are_padded_then_stripped() {
        let g = MappingGraph::from_weight_fn(&[2, 1], |u, v| {
            if u.member == 1 && v.member == 0 {
                0.7
            } else {
                0.2
            }
        })
        .unwrap();
        let (partition, weight) = brute_force_optimum(&g, 100).unwrap();
        assert_eq!(weight, 0.7);
        partition.validate(&g).unwrap();
        assert!(partition
            .cliques()
            .iter()
            .all(|c| c.iter().all(|&v| g.contains(v))));
    }
}
