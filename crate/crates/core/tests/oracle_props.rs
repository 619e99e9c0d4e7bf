use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scd_stability::fixtures::{random_suite_instance, two_branch, two_branch_solutions};
use scd_stability::oracle::{build_solution_graph, OracleConfig, OracleVerdict};
use scd_stability::rational::{qf, Q};
use scd_stability::stability::{check_face, Verdict};

#[test]
fn pieces_match_the_closed_form_on_a_grid() {
    let g = build_solution_graph(&two_branch()).unwrap();
    for x in [qf(-2, 1), qf(-1, 1), qf(-1, 2), qf(0, 1), qf(1, 2), qf(1, 1)] {
        let mut ys: Vec<Q> =
            g.slice(std::slice::from_ref(&x)).iter().map(|s| s.feasible_point().unwrap()[0].clone()).collect();
        ys.sort();
        ys.dedup();
        assert_eq!(ys, two_branch_solutions(&x), "x = {x}");
    }
}

/// Random points of every piece solve the problem exactly.
#[test]
fn graph_soundness() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for i in 0..40 {
        let p = random_suite_instance(31, i);
        let g = build_solution_graph(&p).unwrap();
        for piece in g.pieces() {
            let base = piece.set.feasible_point().unwrap();
            for _ in 0..5 {
                // shift towards the reference by a random convex combination
                let t = qf(rng.random_range(0..=8), 8);
                let z: Vec<Q> = base
                    .iter()
                    .zip(p.xbar().iter().chain(p.ybar()))
                    .map(|(b, r)| b + (r - b) * &t)
                    .collect();
                if piece.set.contains(&z) {
                    let (x, y) = z.split_at(p.l());
                    assert_eq!(p.is_solution(x, y), Some(true), "instance {i}");
                }
            }
            let (x, y) = base.split_at(p.l());
            assert_eq!(p.is_solution(x, y), Some(true), "instance {i}");
        }
    }
}

#[test]
fn face_condition_and_oracle_agree() {
    let cfg = OracleConfig { radius: 0.1, kappa: 1e6, samples: 400, seed: 8 };
    let mut violated = 0;
    for i in 0..60 {
        let p = random_suite_instance(404, i);
        let face = check_face(&p).unwrap().verdict;
        let report = build_solution_graph(&p).unwrap().verify_isolated_calmness_around(&cfg).unwrap();
        if report.verdict == OracleVerdict::Violated {
            violated += 1;
            assert_eq!(face, Verdict::Fails, "instance {i}");
        }
    }
    assert!(violated > 0);
}

#[test]
fn aubin_failure_shows_as_empty_slices() {
    let g = build_solution_graph(&two_branch()).unwrap();
    let rho = qf(1, 100);
    assert!(g.meets_box(&[qf(0, 1)], &[qf(0, 1)], &rho));
    for n in [10, 1000, 100_000] {
        assert!(!g.meets_box(&[qf(1, n)], &[qf(0, 1)], &rho));
    }
}
