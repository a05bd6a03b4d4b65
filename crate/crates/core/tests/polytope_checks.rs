//! Exact hull membership, normalization and the density checks for the
//! moment polytope of the unit tensor.

use gct::hwv::{certify_in_s, verify_certificate, CertifyOptions};
use gct::invariants::in_so_unit;
use gct::kronecker::{kronecker, WeightTriple};
use gct::partitions::enumerate_partitions;
use gct::polytopes::{
    check_witness, hull_membership, kronecker_generators, normalize, uniform_point, verify_lemma82,
    verify_theorem84_unit, GeneratorSet,
};
use gct::tensors::unit_tensor;
use num_traits::Zero;

fn triples(d: usize, format: [usize; 3]) -> Vec<WeightTriple> {
    let mut out = Vec::new();
    for a in enumerate_partitions(d, format[0]) {
        for b in enumerate_partitions(d, format[1]) {
            for c in enumerate_partitions(d, format[2]) {
                out.push(WeightTriple::new(a.clone(), b.clone(), c.clone(), format).unwrap());
            }
        }
    }
    out
}

#[test]
fn normalization_ignores_scaling() {
    for d in 1..=4 {
        for t in triples(d, [2, 2, 3]) {
            for k in 2..=3 {
                let [a, b, c] = t.lambda.clone().map(|l| l.scale(k));
                let scaled = WeightTriple::new(a, b, c, t.format).unwrap();
                assert_eq!(normalize(&scaled).unwrap(), normalize(&t).unwrap(), "{t} times {k}");
            }
        }
    }
}

#[test]
fn generators_and_midpoints_are_members() {
    let gens = kronecker_generators([2, 2, 2], 4).unwrap();
    assert!(!gens.is_empty());
    for (i, x) in gens.points.iter().enumerate() {
        let coeffs = hull_membership(&x.point, &gens).unwrap().expect("generator is a member");
        assert!(check_witness(&x.point, &gens, &coeffs));
        for y in gens.points.iter().skip(i + 1).step_by(3) {
            let mid = x.point.midpoint(&y.point).unwrap();
            let coeffs = hull_membership(&mid, &gens).unwrap().expect("midpoint is a member");
            assert!(check_witness(&mid, &gens, &coeffs), "midpoint of {} and {}", x.point, y.point);
        }
    }
}

#[test]
fn uniform_point_is_a_single_generator() {
    let gens = kronecker_generators([2, 2, 2], 4).unwrap();
    let u = uniform_point([2, 2, 2]).unwrap();
    let coeffs = hull_membership(&u, &gens).unwrap().unwrap();
    assert!(check_witness(&u, &gens, &coeffs));
    assert!(gens.points.iter().any(|g| g.point == u));
}

#[test]
fn certified_weights_lie_in_the_kronecker_hull() {
    // a certificate for S(w) forces g > 0, so these points are generators
    let opts = CertifyOptions { trials: 60, seed: 3, random_g: Some(2), ..Default::default() };
    for m in 2..=3 {
        let max_degree = 4;
        let gens = kronecker_generators([m; 3], max_degree).unwrap();
        let w = unit_tensor(m);
        let mut certified = 0;
        for d in 1..=3 {
            for t in triples(d, [m; 3]) {
                let Some(cert) = certify_in_s(&t, &w, &opts).unwrap().certificate else {
                    continue;
                };
                assert!(verify_certificate(&cert, &w).unwrap());
                certified += 1;
                let p = normalize(&t).unwrap();
                let coeffs = hull_membership(&p, &gens).unwrap().unwrap_or_else(|| panic!("{t} outside"));
                assert!(check_witness(&p, &gens, &coeffs));
            }
        }
        assert!(certified > 0, "m = {m}");
    }
}

#[test]
fn open_orbit_semigroup_escapes_the_kronecker_hull() {
    // ((3),(3),(2,1)) has invariants under the stabilizer of ⟨2⟩ but g = 0;
    // its point ((1,0),(1,0),(2/3,1/3)) violates the rule that two pure
    // marginals force a pure third one
    let t = WeightTriple::cubic("3".parse().unwrap(), "3".parse().unwrap(), "2,1".parse().unwrap(), 2).unwrap();
    assert!(in_so_unit(&t, 2).unwrap());
    assert!(kronecker(&t.lambda[0], &t.lambda[1], &t.lambda[2]).unwrap().is_zero());
    let gens = kronecker_generators([2, 2, 2], 6).unwrap();
    assert!(hull_membership(&normalize(&t).unwrap(), &gens).unwrap().is_none());
    let opts = CertifyOptions { trials: 40, random_g: Some(2), ..Default::default() };
    assert!(certify_in_s(&t, &unit_tensor(2), &opts).unwrap().certificate.is_none());
}

#[test]
fn vertices_are_not_interior_combinations() {
    let interior: Vec<WeightTriple> = triples(4, [2, 2, 2])
        .into_iter()
        .filter(|t| t.lambda.iter().all(|l| l.len() == 2))
        .collect();
    let gens = GeneratorSet::from_weights(&interior).unwrap();
    let vertex = normalize(&WeightTriple::cubic("1".parse().unwrap(), "1".parse().unwrap(), "1".parse().unwrap(), 2).unwrap()).unwrap();
    assert!(hull_membership(&vertex, &gens).unwrap().is_none());
}

#[test]
fn regular_points_are_dense_in_the_simplex() {
    assert!(verify_theorem84_unit(1, 4, 3, 0).unwrap());
    assert!(verify_theorem84_unit(2, 6, 10, 1).unwrap());
}

#[test]
fn uniform_multiples_are_certified() {
    let opts = CertifyOptions { trials: 200, random_g: Some(2), ..Default::default() };
    let one = verify_lemma82(1, 4, &opts).unwrap().unwrap();
    assert_eq!(one.ell, 1);
    let two = verify_lemma82(2, 8, &opts).unwrap().unwrap();
    assert_eq!(two.ell, 2);
    assert!(verify_certificate(&two.certificate, &unit_tensor(2)).unwrap());
}
