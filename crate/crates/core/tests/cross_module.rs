//! Checks that cross module boundaries: graphs built one way and consumed
//! by another module.

use kgraph::exact::Real;
use kgraph::geometric::{binary_system, ex34_system, product_sbfs, q, rn_derivative_exact, validate_sbfs_conditions};
use kgraph::graph::{library, product_graph};
use kgraph::inductive::{verify_ck_inductive, Inductive};
use kgraph::l2::verify_ck_l2;
use kgraph::measures::{equivalence_verdict, pf_data, CylinderMeasure, MarkovSpec, Verdict};
use kgraph::{Degree, InfinitePath, KGraph};
use proptest::prelude::*;

fn graph(name: &str) -> KGraph {
    KGraph::from_spec(&library::standard_library(name, None, None).unwrap()).unwrap()
}

#[test]
fn product_graph_pf_data_multiplies() {
    let p = product_graph(&graph("two_loops"), &graph("three_vertex_eight_edge"));
    assert_eq!(p.k(), 3);
    let pf = pf_data(&p).unwrap();
    assert!((pf.rho[0].approx - 2.0).abs() < 1e-10);
    for r in &pf.rho[1..] {
        assert!((r.approx - 2f64.sqrt()).abs() < 1e-10);
    }
    let m = CylinderMeasure::pf(&p).unwrap();
    assert!(m.check_kolmogorov(2).unwrap().passed);
}

#[test]
fn inductive_limit_on_the_star_graph() {
    let g = graph("lambda_2N");
    for v in g.vertex_ids() {
        let x = InfinitePath::default_from(&g, v).unwrap();
        let r = verify_ck_inductive(&Inductive::new(&g, x), 1, 2).unwrap();
        assert!(r.passed() && r.max_defect() == 0.0, "{r:?}");
    }
}

#[test]
fn star_graph_pf_ck_on_l2() {
    let m = CylinderMeasure::pf(&graph("lambda_2N")).unwrap();
    let r = verify_ck_l2(&m, 1, &Degree(vec![1, 1]), None).unwrap();
    assert!(r.passed(), "{r:?}");
}

#[test]
fn product_system_rn_is_the_factor_rn() {
    let (a, b) = (ex34_system(), binary_system());
    let p = product_sbfs(&a, &b).unwrap();
    assert!(validate_sbfs_conditions(&p).unwrap().passed());
    // λ|p acts as τ_λ on x, so Φ is Φ_λ(x)
    for name in ["a0", "b1", "c0", "d1"] {
        let g = a.graph();
        let dom = a.domain(g.edge(g.edge_id(name).unwrap()).source);
        let kgraph::geometric::Region::Line(parts) = dom else { panic!() };
        let x = (parts[0].lo.clone() + parts[0].hi.clone()) * q(1, 2);
        let want = rn_derivative_exact(a.map_by_name(name).unwrap(), std::slice::from_ref(&x)).unwrap();
        let got = rn_derivative_exact(p.map_by_name(&format!("{name}|p")).unwrap(), &[x, q(1, 3)]).unwrap();
        assert_eq!(got, want, "{name}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn markov_ck_exact_for_any_rational_x(n in 1i64..20) {
        let g = graph("one_vertex_fefe");
        let m = CylinderMeasure::markov(&g, MarkovSpec::symmetric(Real::ratio(n, 20))).unwrap();
        let r = verify_ck_l2(&m, 1, &Degree(vec![1, 1]), None).unwrap();
        prop_assert!(r.exact && r.passed() && r.max_defect() == 0.0);
    }

    #[test]
    fn markov_singular_unless_half(n in 1i64..20) {
        let g = graph("one_vertex_fefe");
        let m = CylinderMeasure::markov(&g, MarkovSpec::symmetric(Real::ratio(n, 20))).unwrap();
        let pf = CylinderMeasure::pf(&g).unwrap();
        let v = equivalence_verdict(&m, &pf, 200).unwrap().verdict;
        if n == 10 {
            prop_assert_eq!(v, Verdict::Equivalent);
        } else if (n - 10).abs() >= 2 {
            prop_assert_eq!(v, Verdict::Singular);
        }
    }
}
