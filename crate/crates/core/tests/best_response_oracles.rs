//! Best responses checked against two independent computations: a
//! level-by-level pass over the responder's information states, and brute
//! force over every pure strategy on small games.

use frcfr::efg::{
    best_response, best_response_value, build_tree, expected_utility, exploitability, BehaviorProfile,
    GameTree, NodeKind, Player,
};
use frcfr::games::{GameSpec, Leduc, LeducConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Number of the responder's own decisions above each node.
fn own_depths(tree: &GameTree, player: Player) -> Vec<usize> {
    let mut depth = vec![0; tree.nodes().len()];
    for (h, node) in tree.nodes().iter().enumerate() {
        let own = matches!(node.kind, NodeKind::Decision { player: p, .. } if p == player);
        for &c in node.children() {
            depth[c] = depth[h] + usize::from(own);
        }
    }
    depth
}

/// Fixes the responder's choices deepest level first; each level runs a
/// full bottom-up evaluation with all deeper choices already fixed.
fn layered_best_response(tree: &GameTree, profile: &BehaviorProfile, player: Player) -> f64 {
    let depth = own_depths(tree, player);
    let n = tree.nodes().len();
    // Opponent-and-chance reach, by a forward pass of its own.
    let mut reach = vec![1.0; n];
    for (h, node) in tree.nodes().iter().enumerate() {
        match &node.kind {
            NodeKind::Terminal { .. } => {}
            NodeKind::Chance { children, probs } => {
                for (&c, &p) in children.iter().zip(probs) {
                    reach[c] = reach[h] * p;
                }
            }
            NodeKind::Decision { player: q, infoset, children } => {
                let policy = profile.policy(tree.infoset(*infoset));
                for (&c, &p) in children.iter().zip(policy) {
                    reach[c] = if *q == player { reach[h] } else { reach[h] * p };
                }
            }
        }
    }
    let mut choice: Vec<Option<usize>> = vec![None; tree.num_infosets()];
    let max_depth = tree
        .player_infosets(player)
        .iter()
        .map(|&s| depth[tree.infoset(s).nodes[0]])
        .max()
        .unwrap_or(0);
    let values = |choice: &[Option<usize>]| {
        let mut v = vec![0.0; n];
        for h in (0..n).rev() {
            v[h] = match &tree.node(h).kind {
                NodeKind::Terminal { utility } => player.sign() * utility,
                NodeKind::Chance { children, probs } => {
                    children.iter().zip(probs).map(|(&c, &p)| p * v[c]).sum()
                }
                NodeKind::Decision { player: q, infoset, children } if *q == player => {
                    match choice[*infoset] {
                        Some(a) => v[children[a]],
                        None => 0.0,
                    }
                }
                NodeKind::Decision { infoset, children, .. } => children
                    .iter()
                    .zip(profile.policy(tree.infoset(*infoset)))
                    .map(|(&c, &p)| p * v[c])
                    .sum(),
            };
        }
        v
    };
    for level in (0..=max_depth).rev() {
        let v = values(&choice);
        for &s in tree.player_infosets(player) {
            let info = tree.infoset(s);
            if depth[info.nodes[0]] != level {
                continue;
            }
            let mut totals = vec![0.0; info.num_actions()];
            for &h in &info.nodes {
                for (a, &c) in tree.node(h).children().iter().enumerate() {
                    totals[a] += reach[h] * v[c];
                }
            }
            let best = (0..totals.len())
                .max_by(|&a, &b| totals[a].total_cmp(&totals[b]))
                .unwrap();
            choice[s] = Some(best);
        }
    }
    values(&choice)[0]
}

/// Maximum over all pure strategies of the responder.
fn enumerated_best_response(tree: &GameTree, profile: &BehaviorProfile, player: Player) -> f64 {
    let states = tree.player_infosets(player);
    let radix: Vec<usize> = states.iter().map(|&s| tree.infoset(s).num_actions()).collect();
    let mut digits = vec![0usize; states.len()];
    let mut best = f64::NEG_INFINITY;
    loop {
        let mut candidate = profile.clone();
        for (k, &s) in states.iter().enumerate() {
            let row = candidate.policy_mut(tree.infoset(s));
            row.iter_mut().for_each(|x| *x = 0.0);
            row[digits[k]] = 1.0;
        }
        best = best.max(player.sign() * expected_utility(tree, &candidate));
        let mut k = 0;
        while k < digits.len() {
            digits[k] += 1;
            if digits[k] < radix[k] {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
        if k == digits.len() {
            return best;
        }
    }
}

fn truncated_leduc() -> GameTree {
    let config = LeducConfig {
        ranks: 3,
        suits: 1,
        rounds: 1,
        max_raises: 2,
        bets: vec![2.0],
        ante: 1.0,
    };
    build_tree(&Leduc::new(config).unwrap()).unwrap()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

#[test]
fn truncated_leduc_matches_pure_strategy_enumeration() {
    let tree = truncated_leduc();
    assert_eq!(tree.player_infosets(Player::One).len(), 9);
    let uniform = BehaviorProfile::uniform(&tree);
    let random = BehaviorProfile::random(&tree, &mut ChaCha8Rng::seed_from_u64(3));
    for profile in [&uniform, &random] {
        for player in Player::BOTH {
            let fast = best_response_value(&tree, profile, player);
            let brute = enumerated_best_response(&tree, profile, player);
            assert!(close(fast, brute), "{player}: {fast} vs {brute}");
        }
    }
}

#[test]
fn kuhn_matches_pure_strategy_enumeration() {
    let tree = GameSpec::kuhn().build_tree().unwrap();
    let profile = BehaviorProfile::random(&tree, &mut ChaCha8Rng::seed_from_u64(4));
    for player in Player::BOTH {
        assert!(close(
            best_response_value(&tree, &profile, player),
            enumerated_best_response(&tree, &profile, player)
        ));
    }
}

#[test]
fn two_implementations_agree_on_full_games() {
    for spec in [GameSpec::leduc(), GameSpec::goofspiel(4), GameSpec::random_goofspiel(3)] {
        let tree = spec.build_tree().unwrap();
        let uniform = BehaviorProfile::uniform(&tree);
        let random = BehaviorProfile::random(&tree, &mut ChaCha8Rng::seed_from_u64(5));
        for profile in [&uniform, &random] {
            for player in Player::BOTH {
                let fast = best_response_value(&tree, profile, player);
                let layered = layered_best_response(&tree, profile, player);
                assert!(close(fast, layered), "{} {player}: {fast} vs {layered}", tree.name());
            }
        }
    }
}

#[test]
fn leduc_uniform_exploitability_is_positive_and_reproduced() {
    let tree = GameSpec::leduc().build_tree().unwrap();
    let uniform = BehaviorProfile::uniform(&tree);
    let milli = exploitability(&tree, &uniform);
    let oracle = 1000.0
        * (layered_best_response(&tree, &uniform, Player::One)
            + layered_best_response(&tree, &uniform, Player::Two))
        / 2.0;
    assert!(milli > 0.0);
    assert!(close(milli, oracle));
}

#[test]
fn best_response_beats_every_sampled_strategy() {
    let tree = GameSpec::leduc().build_tree().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let base = BehaviorProfile::random(&tree, &mut rng);
    for player in Player::BOTH {
        let b = best_response_value(&tree, &base, player);
        for _ in 0..20 {
            let other = BehaviorProfile::random(&tree, &mut rng);
            let mut mixed = base.clone();
            mixed.splice(&tree, player, &other);
            assert!(b >= player.sign() * expected_utility(&tree, &mixed) - 1e-12);
        }
        // The returned pure strategy attains the value.
        let br = best_response(&tree, &base, player);
        let mut pure = base.clone();
        for (&s, &a) in tree.player_infosets(player).iter().zip(&br.actions) {
            let row = pure.policy_mut(tree.infoset(s));
            row.iter_mut().for_each(|x| *x = 0.0);
            row[a] = 1.0;
        }
        assert!(close(player.sign() * expected_utility(&tree, &pure), b));
    }
}

#[test]
fn known_equilibria_have_zero_exploitability() {
    let rps = GameSpec::rps().build_tree().unwrap();
    assert_eq!(exploitability(&rps, &BehaviorProfile::uniform(&rps)), 0.0);

    let mp = GameSpec::biased_matching_pennies().build_tree().unwrap();
    let eq = BehaviorProfile::from_fn(&mp, |_, _| vec![0.4, 0.6]).unwrap();
    assert!(exploitability(&mp, &eq).abs() <= 1e-12);
    assert!((expected_utility(&mp, &eq) - 0.2).abs() <= 1e-15);
    let off = BehaviorProfile::from_fn(&mp, |_, _| vec![0.5, 0.5]).unwrap();
    assert!(exploitability(&mp, &off) > 0.0);

    let dom = GameSpec::dominance().build_tree().unwrap();
    let pure = BehaviorProfile::from_fn(&dom, |_, _| vec![1.0, 0.0]).unwrap();
    assert_eq!(exploitability(&dom, &pure), 0.0);
}

#[test]
fn exploitability_is_never_negative() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for spec in [GameSpec::kuhn(), GameSpec::leduc(), GameSpec::biased_matching_pennies()] {
        let tree = spec.build_tree().unwrap();
        for _ in 0..10 {
            let p = BehaviorProfile::random(&tree, &mut rng);
            assert!(exploitability(&tree, &p) >= -1e-9);
        }
    }
}
