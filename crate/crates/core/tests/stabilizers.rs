//! Invariant dimensions for the stabilizers of unit and matrix
//! multiplication tensors.

use gct::invariants::{
    barrier_bound, barrier_lift, in_so_unit, matmul_invariant_dim, stab_alpha_invariant_dim, unit_invariant_dim,
    unit_invariant_dim_bruteforce, unit_invariant_terms, MatmulFormat,
};
use gct::kronecker::WeightTriple;
use gct::partitions::{enumerate_dominated, enumerate_partitions, is_regular, meet_all, BoundedPartitionView};
use gct::Partition;
use num_bigint::BigInt;
use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn triples(d: usize, m: usize) -> Vec<WeightTriple> {
    let parts = enumerate_partitions(d, m);
    let mut out = Vec::new();
    for a in &parts {
        for b in &parts {
            for c in &parts {
                out.push(WeightTriple::cubic(a.clone(), b.clone(), c.clone(), m).unwrap());
            }
        }
    }
    out
}

#[test]
fn unit_dimension_matches_the_bruteforce_oracle() {
    for m in 1..=3 {
        for d in 1..=5 {
            for t in triples(d, m) {
                assert_eq!(unit_invariant_dim(&t, m).unwrap(), unit_invariant_dim_bruteforce(&t, m).unwrap(), "{t}, m = {m}");
            }
        }
    }
}

#[test]
fn unit_dimension_matches_the_bruteforce_oracle_on_samples_at_four() {
    let mut all = triples(6, 4);
    all.shuffle(&mut ChaCha8Rng::seed_from_u64(4));
    for t in all.iter().take(6) {
        assert_eq!(unit_invariant_dim(t, 4).unwrap(), unit_invariant_dim_bruteforce(t, 4).unwrap(), "{t}");
    }
}

#[test]
fn alpha_summands_are_nonnegative() {
    for d in 1..=6 {
        for t in triples(d, 3) {
            let meet = meet_all(t.lambda.iter()).unwrap();
            for alpha in enumerate_dominated(&meet, 3) {
                assert!(!stab_alpha_invariant_dim(&t, &alpha, 3).unwrap().is_negative());
            }
        }
    }
}

#[test]
fn alpha_sum_runs_below_the_meet() {
    let t = WeightTriple::cubic("4,2".parse().unwrap(), "3,3".parse().unwrap(), "4,1,1".parse().unwrap(), 3).unwrap();
    let meet = meet_all(t.lambda.iter()).unwrap();
    let alphas: Vec<Partition> = unit_invariant_terms(&t, 3).unwrap().into_iter().map(|x| x.alpha).collect();
    assert_eq!(alphas, enumerate_dominated(&meet, 3));
}

#[test]
fn regular_triples_lie_in_the_orbit_semigroup() {
    for m in 1..=4 {
        for d in 1..=10 {
            let regular: Vec<Partition> = enumerate_partitions(d, m)
                .into_iter()
                .filter(|p| is_regular(&BoundedPartitionView::new(p.clone(), m).unwrap()))
                .collect();
            for a in &regular {
                for b in &regular {
                    for c in &regular {
                        let t = WeightTriple::cubic(a.clone(), b.clone(), c.clone(), m).unwrap();
                        assert!(in_so_unit(&t, m).unwrap(), "{t}");
                    }
                }
            }
        }
    }
}

#[test]
fn membership_agrees_with_the_dimension() {
    for d in 1..=5 {
        for t in triples(d, 3) {
            let dim = unit_invariant_dim(&t, 3).unwrap();
            assert_eq!(in_so_unit(&t, 3).unwrap(), dim > BigInt::from(0), "{t}");
        }
    }
}

#[test]
fn every_small_weight_lifts_past_the_barrier() {
    for d in 1..=6 {
        for t in triples(d, 3) {
            let (k, lifted) = barrier_lift(&t, 3).unwrap();
            assert!(k <= barrier_bound(3));
            assert!(in_so_unit(&lifted, 4).unwrap(), "{t} lifted by {k}");
        }
    }
}

#[test]
fn each_m_is_tested_independently() {
    // membership in S°(⟨m⟩) is not monotone in m: this weight is out at
    // m = 2 and in at m = 3 (g = 0 here, S° is not bounded by the
    // Kronecker semigroup)
    let t = |m| WeightTriple::cubic("4".parse().unwrap(), "3,1".parse().unwrap(), "2,2".parse().unwrap(), m).unwrap();
    assert!(!in_so_unit(&t(2), 2).unwrap());
    assert_eq!(unit_invariant_dim(&t(2), 2).unwrap(), BigInt::from(0));
    assert!(in_so_unit(&t(3), 3).unwrap());
}

#[test]
fn matmul_dimension_is_invariant_under_rotation() {
    for d in 1..=4 {
        for n1 in 1..=2 {
            for n2 in 1..=2 {
                for n3 in 1..=2 {
                    let f = MatmulFormat::new(n1, n2, n3).unwrap();
                    let [c12, c23, c31] = f.tensor_format();
                    for a in enumerate_partitions(d, c12) {
                        for b in enumerate_partitions(d, c23) {
                            for c in enumerate_partitions(d, c31) {
                                let x = matmul_invariant_dim(&a, &b, &c, f).unwrap();
                                let y = matmul_invariant_dim(&b, &c, &a, f.rotate()).unwrap();
                                assert_eq!(x, y, "{a}; {b}; {c} at {f}");
                            }
                        }
                    }
                }
            }
        }
    }
}
