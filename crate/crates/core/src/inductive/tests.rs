use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;

use super::*;
use crate::graph::{library, InfinitePathSpec};

fn one_vertex() -> KGraph {
    KGraph::from_spec(&library::one_vertex_fefe()).unwrap()
}

fn ex34() -> KGraph {
    KGraph::from_spec(&library::three_vertex_eight_edge()).unwrap()
}

fn path(g: &KGraph, names: &[&str]) -> Path {
    g.path_from_names(names, None).unwrap()
}

fn ef1(g: &KGraph) -> InfinitePath {
    InfinitePath::from_spec(g, &InfinitePathSpec { prefix: vec![], cycle: vec!["e".into(), "f1".into()] }).unwrap()
}

fn b(stage: usize, mu: Path) -> Basis {
    Basis { stage, mu }
}

#[test]
fn canonical_reps() {
    let g = one_vertex();
    let h = Inductive::new(&g, ef1(&g));
    let v = g.vertex_path(g.vertex_id("v").unwrap());
    let x12 = h.path().prefix_path(&g, 2);
    assert_eq!(h.canonical_rep(3, &x12).unwrap(), b(1, v.clone()));
    let lam = path(&g, &["f1"]);
    let lx1 = g.compose(&lam, h.path().block(1)).unwrap();
    assert_eq!(h.canonical_rep(2, &lx1).unwrap(), b(1, lam.clone()));
    assert_eq!(h.canonical_rep(2, &lam).unwrap(), b(2, lam.clone()));
    assert!(matches!(h.canonical_rep(0, &lam), Err(Error::InvalidInput(_))));

    let g = ex34();
    let x = InfinitePath::default_from(&g, g.vertex_id("u").unwrap()).unwrap();
    let h = Inductive::new(&g, x);
    let w = g.vertex_path(g.vertex_id("w").unwrap());
    let wrong = if h.path().stage_vertex(1) == w.range() { g.vertex_path(g.vertex_id("u").unwrap()) } else { w };
    assert!(matches!(h.canonical_rep(1, &wrong), Err(Error::SourceMismatch(_))));
}

#[test]
fn operators_on_basis() {
    let g = one_vertex();
    let h = Inductive::new(&g, ef1(&g));
    let v = g.vertex_path(g.vertex_id("v").unwrap());
    let f1 = path(&g, &["f1"]);
    let f2 = path(&g, &["f2"]);
    let start = basis_vector(b(1, v.clone()));
    assert_eq!(h.apply_t(&f1, &start), basis_vector(b(1, f1.clone())));
    assert_eq!(h.apply_t(&v, &start), start);
    // x_1 = f2 e: f2 is a prefix, so T_f2^* moves to stage 2
    let e = path(&g, &["e"]);
    assert_eq!(h.apply_t_adjoint(&f2, &start), basis_vector(b(2, e.clone())));
    assert!(h.apply_t_adjoint(&f1, &start).is_empty());
    // T_{f2 e}^* recovers [ξ^2_v] = [ξ^1_{x_1}] exactly
    let x1 = h.path().block(1).clone();
    assert_eq!(h.apply_t_adjoint(&x1, &start), basis_vector(b(2, v)));
}

#[test]
fn sbfs_maps_on_one_vertex() {
    let g = one_vertex();
    let h = Inductive::new(&g, ef1(&g));
    let v = g.vertex_path(g.vertex_id("v").unwrap());
    let x1 = h.path().block(1).clone();
    let got = h.tau(&x1, &b(2, v.clone())).unwrap();
    assert_eq!(got, h.canonical_rep(2, &x1).unwrap());
    // x_1 at stage 1 is not stripped: there is no x_0
    assert_eq!(h.tau(&x1, &b(1, v.clone())).unwrap(), b(1, x1.clone()));
    let n = x1.degree().clone();
    let back = h.coding_map(&n, &b(1, x1)).unwrap();
    assert_eq!(back, b(1, v));
}

#[test]
fn ck_exact_one_vertex() {
    let g = one_vertex();
    let r = verify_ck_inductive(&Inductive::new(&g, ef1(&g)), 2, 3).unwrap();
    assert!(r.exact);
    for rel in &r.relations {
        assert!(rel.pass && rel.max_defect == 0.0 && rel.cases > 0, "{rel:?}");
    }
    assert_eq!(r.relations.len(), 8);
}

#[test]
fn ck_exact_ex34() {
    let g = ex34();
    let x = InfinitePath::default_from(&g, g.vertex_id("v").unwrap()).unwrap();
    let r = verify_ck_inductive(&Inductive::new(&g, x), 2, 3).unwrap();
    for rel in &r.relations {
        assert!(rel.pass && rel.max_defect == 0.0 && rel.cases > 0, "{rel:?}");
    }
}

#[test]
fn ck_exact_with_prefix() {
    let g = ex34();
    let y = InfinitePath::default_from(&g, g.vertex_id("v").unwrap()).unwrap();
    let y = y.shift_blocks(y.prefix_len());
    let cycle = y.prefix_path(&g, y.period());
    let one = Degree::square(2, 1);
    let prefix = g.paths_from(cycle.range(), &one).into_iter().find(|p| p != y.block(y.period())).unwrap();
    let x = InfinitePath::new(&g, &prefix, &cycle).unwrap();
    assert_eq!(x.prefix_len(), 1);
    let r = verify_ck_inductive(&Inductive::new(&g, x), 1, 3).unwrap();
    assert!(r.passed(), "{r:?}");
}

#[test]
fn rejects_zero_bounds() {
    let g = one_vertex();
    assert!(verify_ck_inductive(&Inductive::new(&g, ef1(&g)), 0, 3).is_err());
}

#[test]
fn broken_adjoint_is_noticed() {
    // T_{f1} against T_{f2}^*: the adjoint pairing must fail somewhere
    let g = one_vertex();
    let h = Inductive::new(&g, ef1(&g));
    let f1 = path(&g, &["f1"]);
    let f2 = path(&g, &["f2"]);
    let basis = h.probe_basis(1, 2);
    let mismatch = basis.iter().any(|u| basis.iter().any(|w| (h.t_star_basis(&f2, u).as_ref() == Some(w)) != (h.t_basis(&f1, w).as_ref() == Some(u))));
    assert!(mismatch);
}

#[test]
fn gauge_roots_of_unity() {
    for g in [one_vertex(), ex34()] {
        let v = g.vertex_ids().next().unwrap();
        let h = Inductive::new(&g, InfinitePath::default_from(&g, v).unwrap());
        for z in GaugePoint::samples(2) {
            let r = gauge_check(&h, &z, 2, 3).unwrap();
            assert!(r.passed() && r.exact, "{r:?}");
        }
    }
}

#[test]
fn gauge_float_and_errors() {
    use num_complex::Complex64;
    let g = one_vertex();
    let h = Inductive::new(&g, ef1(&g));
    let z = GaugePoint::new_float(vec![Complex64::new(0.0, 1.0), Complex64::new(1.0, 0.0)]).unwrap();
    let r = gauge_check(&h, &z, 2, 3).unwrap();
    assert!(r.passed() && !r.exact);
    assert!(matches!(GaugePoint::new_float(vec![Complex64::new(1.1, 0.0), Complex64::new(1.0, 0.0)]), Err(Error::NotUnimodular(_))));
    let z = GaugePoint::Root { order: 8, exps: vec![1] };
    assert!(gauge_check(&h, &z, 1, 1).is_err());
    // z = (i, 1) multiplies T_f1 by i
    let z = GaugePoint::Root { order: 4, exps: vec![1, 0] };
    let f1 = path(&g, &["f1"]);
    let base = b(1, g.vertex_path(f1.source()));
    let r = h.t_basis(&f1, &base).unwrap();
    assert_eq!(z.power(&exponent(&r)).distance(z.power(&exponent(&base)).mul(Phase::Root(1, 4))), 0.0);
}

#[test]
fn identity_intertwiner() {
    let g = one_vertex();
    let h = Inductive::new(&g, ef1(&g));
    let zero = Degree::zero(2);
    let phi = Intertwiner::new(&h, &h, zero.clone(), zero, 8).unwrap();
    for e in h.probe_basis(2, 3) {
        assert_eq!(phi.apply(&e), e);
    }
    assert!(shift_tail_intertwiner(&phi, 2, 3).unwrap().passed());
}

#[test]
fn shifted_tail_intertwiner() {
    for g in [one_vertex(), ex34()] {
        let v = g.vertex_ids().next().unwrap();
        let x = InfinitePath::default_from(&g, v).unwrap();
        let y = x.shift_blocks(1);
        let (hx, hy) = (Inductive::new(&g, x), Inductive::new(&g, y));
        let phi = Intertwiner::new(&hx, &hy, Degree::square(2, 1), Degree::zero(2), 8).unwrap();
        let r = shift_tail_intertwiner(&phi, 2, 3).unwrap();
        for rel in &r.relations {
            assert!(rel.pass && rel.cases > 0, "{rel:?}");
        }
    }
}

#[test]
fn mismatched_tails() {
    let g = one_vertex();
    let x = ef1(&g);
    let y = InfinitePath::from_spec(&g, &InfinitePathSpec { prefix: vec![], cycle: vec!["e".into(), "f2".into()] }).unwrap();
    let (hx, hy) = (Inductive::new(&g, x), Inductive::new(&g, y));
    let z = Degree::zero(2);
    assert!(matches!(Intertwiner::new(&hx, &hy, z.clone(), z, 4), Err(Error::TailMismatch(_))));
}

#[test]
fn direct_sum_all_nonzero() {
    let g = ex34();
    let choice: Vec<InfinitePath> = g.vertex_ids().map(|v| InfinitePath::default_from(&g, v).unwrap()).collect();
    let r = direct_sum_nonzero_check(&g, &choice, 2).unwrap();
    assert!(r.passed(), "{r:?}");
    assert!(r.relations[0].cases > 0);
    let mut bad = choice.clone();
    bad.swap(0, 1);
    assert!(matches!(direct_sum_nonzero_check(&g, &bad, 2), Err(Error::BadChoice(_))));
    assert!(matches!(direct_sum_nonzero_check(&g, &choice[..1], 2), Err(Error::BadChoice(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn canonical_rep_respects_lifting(names in prop::collection::vec(0usize..3, 0..5), stage in 1usize..4) {
        let g = one_vertex();
        let h = Inductive::new(&g, ef1(&g));
        let all = ["f1", "f2", "e"];
        let mu = if names.is_empty() {
            g.vertex_path(g.vertex_id("v").unwrap())
        } else {
            path(&g, &names.iter().map(|&i| all[i]).collect::<Vec<_>>())
        };
        let c = h.canonical_rep(stage, &mu).unwrap();
        prop_assert_eq!(h.canonical_rep(c.stage, &c.mu).unwrap(), c.clone());
        let lifted = g.compose(&mu, h.path().block(stage)).unwrap();
        prop_assert_eq!(h.canonical_rep(stage + 1, &lifted).unwrap(), c);
    }

    #[test]
    fn t_star_t_is_identity(names in prop::collection::vec(0usize..3, 1..4), stage in 1usize..4, base in 0usize..6) {
        let g = one_vertex();
        let h = Inductive::new(&g, ef1(&g));
        let all = ["f1", "f2", "e"];
        let lam = path(&g, &names.iter().map(|&i| all[i]).collect::<Vec<_>>());
        let basis = h.probe_basis(1, stage);
        let e = &basis[base % basis.len()];
        let up = h.t_basis(&lam, e).unwrap();
        prop_assert_eq!(h.t_star_basis(&lam, &up).unwrap(), e.clone());
    }
}
