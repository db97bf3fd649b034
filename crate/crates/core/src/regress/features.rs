//! Tug-of-war hashed features.
//!
//! States that share an action label form one group per player. For each of
//! `n` partitions the group is shuffled and dealt round-robin into `m`
//! buckets, and each state gets an independent random sign per partition.
//! A state's feature vector has one `±1` entry per partition, at index
//! `k * m + bucket`.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::efg::{GameTree, Player};
use crate::error::{Error, Result};

/// Sparse feature row: `(column, sign)` pairs, one per partition.
pub type SparseRow = Vec<(usize, f64)>;

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureGroup {
    pub label: String,
    /// `(info state, action position)` for each row of the design matrix.
    pub rows: Vec<(usize, usize)>,
    pub features: Vec<SparseRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMap {
    player: Player,
    partitions: usize,
    buckets: usize,
    seed: u64,
    groups: Vec<FeatureGroup>,
    /// Per sequence: `(group, row)` for sequences of `player`.
    lookup: Vec<Option<(usize, usize)>>,
}

impl FeatureMap {
    pub fn player(&self) -> Player {
        self.player
    }

    pub fn partitions(&self) -> usize {
        self.partitions
    }

    pub fn buckets(&self) -> usize {
        self.buckets
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Feature dimension `n * m`, shared by every group.
    pub fn dim(&self) -> usize {
        self.partitions * self.buckets
    }

    pub fn groups(&self) -> &[FeatureGroup] {
        &self.groups
    }

    /// `(group, row)` of a sequence index, if it belongs to this player.
    pub fn locate(&self, sequence: usize) -> Option<(usize, usize)> {
        self.lookup.get(sequence).copied().flatten()
    }

    /// Dense feature vector of a sequence.
    pub fn dense(&self, sequence: usize) -> Option<Vec<f64>> {
        let (g, r) = self.locate(sequence)?;
        let mut v = vec![0.0; self.dim()];
        for &(j, sign) in &self.groups[g].features[r] {
            v[j] = sign;
        }
        Some(v)
    }
}

pub fn build_features(
    tree: &GameTree,
    player: Player,
    partitions: usize,
    buckets: usize,
    seed: u64,
) -> Result<FeatureMap> {
    if partitions < 1 {
        return Err(Error::InvalidFeatures("need at least one partition".into()));
    }
    if buckets < 2 {
        return Err(Error::InvalidFeatures("need at least two buckets".into()));
    }
    let states = tree.player_infosets(player);
    if states.is_empty() {
        return Err(Error::InvalidFeatures(format!("player {player} has no information states")));
    }

    let mut by_label: BTreeMap<&str, Vec<(usize, usize)>> = BTreeMap::new();
    for &s in states {
        for (a, label) in tree.infoset(s).actions.iter().enumerate() {
            by_label.entry(label).or_default().push((s, a));
        }
    }

    let mut lookup = vec![None; tree.num_sequences()];
    let mut groups = Vec::with_capacity(by_label.len());
    for (g, (label, rows)) in by_label.into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(((player.index() as u64) << 32) | g as u64);
        let mut features = vec![Vec::with_capacity(partitions); rows.len()];
        let mut order: Vec<usize> = (0..rows.len()).collect();
        for k in 0..partitions {
            order.shuffle(&mut rng);
            for (position, &r) in order.iter().enumerate() {
                features[r].push((k * buckets + position % buckets, 0.0));
            }
            for row in features.iter_mut() {
                row[k].1 = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            }
        }
        for (r, &(s, a)) in rows.iter().enumerate() {
            lookup[tree.infoset(s).offset + a] = Some((g, r));
        }
        groups.push(FeatureGroup {
            label: label.to_string(),
            rows,
            features,
        });
    }

    Ok(FeatureMap {
        player,
        partitions,
        buckets,
        seed,
        groups,
        lookup,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::GameSpec;

    fn leduc() -> GameTree {
        GameSpec::leduc().build_tree().unwrap()
    }

    #[test]
    fn shape_and_sparsity() {
        let tree = leduc();
        let map = build_features(&tree, Player::One, 3, 10, 7).unwrap();
        assert_eq!(map.dim(), 30);
        for group in map.groups() {
            for row in &group.features {
                assert_eq!(row.len(), 3);
                for (k, &(j, sign)) in row.iter().enumerate() {
                    assert!(j / 10 == k);
                    assert_eq!(sign.abs(), 1.0);
                }
            }
        }
    }

    #[test]
    fn buckets_are_near_even() {
        let tree = leduc();
        let map = build_features(&tree, Player::Two, 2, 7, 3).unwrap();
        for group in map.groups() {
            let mut counts = vec![0usize; map.dim()];
            for row in &group.features {
                for &(j, _) in row {
                    counts[j] += 1;
                }
            }
            for k in 0..2 {
                let slice = &counts[k * 7..(k + 1) * 7];
                let lo = *slice.iter().min().unwrap();
                let hi = *slice.iter().max().unwrap();
                assert!(hi - lo <= 1);
                assert!(slice.windows(2).all(|w| w[0] >= w[1]));
            }
        }
    }

    #[test]
    fn one_partition_with_enough_buckets_is_injective() {
        let tree = leduc();
        let map = build_features(&tree, Player::One, 1, 500, 1).unwrap();
        for group in map.groups() {
            let mut cols: Vec<usize> = group.features.iter().map(|r| r[0].0).collect();
            cols.sort_unstable();
            cols.dedup();
            assert_eq!(cols.len(), group.rows.len());
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let tree = leduc();
        let a = build_features(&tree, Player::One, 4, 10, 99).unwrap();
        let b = build_features(&tree, Player::One, 4, 10, 99).unwrap();
        let c = build_features(&tree, Player::One, 4, 10, 100).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn rejects_bad_parameters() {
        let tree = leduc();
        assert!(build_features(&tree, Player::One, 0, 10, 0).is_err());
        assert!(build_features(&tree, Player::One, 1, 1, 0).is_err());
    }

    #[test]
    fn cross_talk_has_zero_mean() {
        // Inner product between two fixed distinct states over many seeds.
        let tree = GameSpec::kuhn().build_tree().unwrap();
        let rows = build_features(&tree, Player::One, 1, 2, 0).unwrap().groups()[0].rows.clone();
        let seq = |(s, a): (usize, usize)| tree.infoset(s).offset + a;
        let (x, y) = (seq(rows[0]), seq(rows[1]));
        let samples: Vec<f64> = (0..1000)
            .map(|seed| {
                let map = build_features(&tree, Player::One, 3, 2, seed).unwrap();
                let a = map.dense(x).unwrap();
                let b = map.dense(y).unwrap();
                a.iter().zip(&b).map(|(p, q)| p * q).sum()
            })
            .collect();
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let var = samples.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let se = (var / n).sqrt();
        assert!(mean.abs() <= 3.0 * se, "mean {mean}, se {se}");
    }
}
