//! The end to end obstruction: `λ⃗ ∉ S°(⟨5⟩)` and `λ⃗ ∈ S(⟨2,2,2⟩)`.

use gct::hwv::{evaluate, verify_certificate, CertifyOptions};
use gct::invariants::{unit_invariant_dim, unit_invariant_terms, MatmulFormat};
use gct::obstructions::{lemma61_weight, remark62_check, remark62_factors, run_obstruction, ObstructionReport};
use gct::tensors::{apply_group, matmul_tensor, strassen_decomposition, unit_tensor};
use gct::Partition;
use num_bigint::BigInt;
use num_traits::Zero;

fn opts() -> CertifyOptions {
    CertifyOptions { trials: 10_000, seed: 0, random_g: Some(2), ..Default::default() }
}

#[test]
fn lemma61_weight_avoids_the_unit_orbit_closure() {
    let w = lemma61_weight(2).unwrap();
    let padded = w.with_format([5; 3]).unwrap();
    assert_eq!(unit_invariant_dim(&padded, 5).unwrap(), BigInt::zero());
    let terms = unit_invariant_terms(&padded, 5).unwrap();
    let alphas: Vec<Partition> = terms.iter().map(|t| t.alpha.clone()).collect();
    assert_eq!(alphas.len(), 2);
    assert!(alphas.contains(&"2,2,2,2".parse().unwrap()));
    assert!(alphas.contains(&"2,2,2,1,1".parse().unwrap()));
    assert!(terms.iter().all(|t| t.dim.is_zero()));
}

#[test]
fn lemma61_concludes_on_both_decompositions() {
    let lambda = lemma61_weight(2).unwrap();
    let naive = matmul_tensor(MatmulFormat::new(2, 2, 2).unwrap());
    let strassen = strassen_decomposition().unwrap();
    for w in [&strassen, &naive] {
        let report = run_obstruction(&lambda, w, 5, &opts()).unwrap();
        assert!(report.is_conclusive());
        assert_eq!(report.conclusion.as_deref(), Some("R̲(w) > 5"));
        assert!(report.terms <= 100_000_000);
        let cert = report.membership.clone().unwrap();
        assert!(verify_certificate(&cert, w).unwrap());

        // the same point evaluated on the other decomposition
        let other = if std::ptr::eq(w, &strassen) { &naive } else { &strassen };
        let g = cert.group_element.as_ref().unwrap();
        let again = evaluate(&cert.weight, &cert.perms, &apply_group(g, other).unwrap()).unwrap();
        assert_eq!(again, cert.value);

        let json = serde_json::to_string(&report).unwrap();
        let back: ObstructionReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
    }
}

#[test]
fn no_conclusion_without_the_invariant_half() {
    // ((2,2),(2,2),(2,2)) is certified in S(⟨2⟩) but also lies in S°(⟨2⟩)
    let lambda = gct::kronecker::WeightTriple::cubic(
        "2,2".parse().unwrap(),
        "2,2".parse().unwrap(),
        "2,2".parse().unwrap(),
        2,
    )
    .unwrap();
    let report = run_obstruction(&lambda, &unit_tensor(2), 2, &opts()).unwrap();
    assert!(!report.not_in_so);
    assert!(report.so_dimension > BigInt::zero());
    assert!(report.membership.is_none());
    assert!(!report.is_conclusive());
}

#[test]
fn lemma61_weight_is_in_the_matmul_orbit_closure() {
    let f = remark62_factors(2).unwrap();
    assert!(f.iter().all(|x| *x >= BigInt::from(1)));
    assert!(remark62_check(2).unwrap());
}
