mod common;

use common::*;
use cpnet_core::generate::random_net;
use cpnet_core::graph::is_consistent;
use cpnet_core::learners::{learn_kbounded_complete, learn_kbounded_incomplete, learn_tree_complete};
use cpnet_core::oracles::OracleSession;
use cpnet_core::teaching::find_conflict_pair;
use cpnet_core::universal::construct_product;
use cpnet_core::{instance_space, ClassSpec, CpNet};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn net(n: usize, k: usize, complete: bool, seed: u64) -> CpNet {
    let spec = if complete { ClassSpec::complete(n, 2, k) } else { ClassSpec::incomplete(n, 2, k) }.unwrap();
    random_net(&spec, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn complete_labels_are_complementary(n in 2usize..6, seed in any::<u64>()) {
        let net = net(n, n - 1, true, seed);
        for x in instance_space(net.spec(), false) {
            prop_assert_ne!(net.evaluate(&x), net.evaluate(&x.reversed()));
        }
    }

    #[test]
    fn acyclic_nets_are_consistent(n in 2usize..6, seed in any::<u64>(), complete in any::<bool>()) {
        prop_assert!(is_consistent(&net(n, n - 1, complete, seed)).unwrap());
    }

    #[test]
    fn conflict_pairs_mark_parents(n in 2usize..6, seed in any::<u64>(), complete in any::<bool>()) {
        let net = net(n, 2.min(n - 1), complete, seed);
        for child in 0..n {
            for parent in (0..n).filter(|&p| p != child) {
                let pair = find_conflict_pair(&net, child, parent);
                prop_assert_eq!(pair.is_some(), net.parents(child).contains(&parent));
                if let Some(p) = pair {
                    prop_assert_ne!(net.evaluate(&p.x), net.evaluate(&p.x2));
                }
            }
        }
    }

    #[test]
    fn complement_reverses_every_label(n in 2usize..6, seed in any::<u64>()) {
        let net = net(n, 2.min(n - 1), true, seed);
        let c = net.complement();
        for x in instance_space(net.spec(), false) {
            prop_assert_eq!(net.evaluate(&x), c.evaluate(&x.reversed()));
        }
    }

    #[test]
    fn learners_recover_random_nets(n in 3usize..8, seed in any::<u64>()) {
        let k = 2;
        let u = construct_product(2, n - 1, k).unwrap();
        let target = net(n, k, true, seed);
        let r = learn_kbounded_complete(&mut OracleSession::perfect(target.clone()), target.spec(), &u).unwrap();
        prop_assert!(same_concept(&r.net, &target));
        let target = net(n, k, false, seed);
        let r = learn_kbounded_incomplete(&mut OracleSession::perfect(target.clone()), target.spec(), &u).unwrap();
        prop_assert!(same_concept(&r.net, &target));
        let tree = cpnet_core::generate::random_tree(n, 2, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let r = learn_tree_complete(&mut OracleSession::perfect(tree.clone()), tree.spec()).unwrap();
        prop_assert!(same_concept(&r.net, &tree));
    }
}
