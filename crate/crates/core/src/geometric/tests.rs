use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;

use super::*;
use crate::geometric::poly::q;
use num_traits::One;

fn assert_all_pass(r: &ConditionReport) {
    for c in &r.checks {
        // (ii) is vacuous with one vertex, (iii) and (iv) with one color
        assert!(c.passed && (c.cases > 0 || ["(ii)", "(iii)", "(iv)"].contains(&c.name.as_str())), "{c:?}");
    }
}

#[test]
fn ex34_passes_exactly() {
    let r = validate_sbfs_conditions(&ex34_system()).unwrap();
    assert_all_pass(&r);
    for name in ConditionReport::CONDITIONS {
        let c = r.check(name).unwrap();
        assert!(!c.sampled && c.max_defect == 0.0, "{c:?}");
    }
}

#[test]
fn ex34_rn_values() {
    let s = ex34_system();
    for (e, want) in [("a0", q(1, 1)), ("a1", q(1, 1)), ("c0", q(1, 2)), ("c1", q(1, 2)), ("d0", q(1, 1)), ("d1", q(1, 1)), ("b0", q(1, 2)), ("b1", q(1, 2))] {
        let m = s.map_by_name(e).unwrap();
        let d = m.pieces()[0].domain();
        for p in d.sample(7) {
            assert_eq!(rn_derivative_geometric(m, &p[..1]).unwrap(), q_to_f64(&want));
        }
        let mid = match d {
            Region::Line(v) => (&v[0].lo + &v[0].hi) / q(2, 1),
            Region::Plane(_) => unreachable!(),
        };
        assert_eq!(rn_derivative_exact(m, &[mid]).unwrap(), want);
    }
}

#[test]
fn ex35_passes() {
    let r = validate_sbfs_conditions(&ex35_system()).unwrap();
    assert_all_pass(&r);
    assert!(r.check("(iv)").unwrap().sampled);
}

#[test]
fn ex35_rn_polynomials() {
    let s = ex35_system();
    let one = Poly2::constant(Q::one());
    let rn = |e: &str| s.map_by_name(e).unwrap().pieces()[0].rn_polynomial().unwrap();
    assert_eq!(rn("f1"), one.clone() - Poly2::x());
    assert_eq!(rn("f2"), Poly2::x());
    assert_eq!(rn("e"), one);
    let f1 = s.map_by_name("f1").unwrap();
    assert_eq!(rn_derivative_exact(f1, &[q(1, 4), q(2, 3)]).unwrap(), q(3, 4));
    assert!((rn_derivative_geometric(f1, &[0.3, 0.9]).unwrap() - 0.7).abs() < 1e-15);
}

#[test]
fn rn_errors() {
    let s = ex34_system();
    let m = s.map_by_name("c0").unwrap();
    assert_eq!(rn_derivative_geometric(m, &[0.0]), Err(Error::OnBoundary));
    assert_eq!(rn_derivative_geometric(m, &[0.5]), Err(Error::OutOfDomain));
    assert!(rn_derivative_geometric(m, &[0.1, 0.1]).is_err());
    let flat = Piece::affine(Interval::new(q(0, 1), q(1, 1)).unwrap(), q(0, 1), q(1, 2)).unwrap();
    assert_eq!(rn_derivative_geometric(&PiecewiseMap::single(flat.clone()), &[0.5]), Err(Error::DegeneratePiece));
    assert_eq!(flat.rn_polynomial(), Err(Error::DegeneratePiece));
}

#[test]
fn overlapping_domains_fail_ii() {
    let s = ex34_system();
    let g = s.graph().clone();
    let mut domains = vec![];
    let mut maps = vec![];
    let mut ranges = vec![];
    for v in g.vertex_ids() {
        let mut d = s.domain(v).clone();
        if g.vertex_name(v) == "u" {
            d = Region::interval(q(0, 1), q(1, 2)).unwrap();
        }
        domains.push((g.vertex_name(v).into(), d));
    }
    for e in g.edge_ids() {
        maps.push((g.edge(e).name.clone(), s.map(e).clone()));
        ranges.push((g.edge(e).name.clone(), s.range(e).clone()));
    }
    let bad = GeometricSBFS::new(g, domains, maps, ranges).unwrap();
    let r = validate_sbfs_conditions(&bad).unwrap();
    let ii = r.check("(ii)").unwrap();
    assert!(!ii.passed);
    assert!((ii.max_defect - 1.0 / 6.0).abs() < 1e-15);
}

#[test]
fn broken_square_fails_iii() {
    // swapping the two red maps on v breaks a0 b0 = d0 c0
    let s = ex34_system();
    let g = s.graph().clone();
    fn swap(n: &str) -> &str {
        match n {
            "d0" => "d1",
            "d1" => "d0",
            other => other,
        }
    }
    let maps = g.edge_ids().map(|e| (g.edge(e).name.clone(), s.map_by_name(swap(&g.edge(e).name)).unwrap().clone())).collect();
    let ranges = g.edge_ids().map(|e| (g.edge(e).name.clone(), s.range(g.edge_id(swap(&g.edge(e).name)).unwrap()).clone())).collect();
    let domains = g.vertex_ids().map(|v| (g.vertex_name(v).into(), s.domain(v).clone())).collect();
    let r = validate_sbfs_conditions(&GeometricSBFS::new(g, domains, maps, ranges).unwrap()).unwrap();
    assert!(!r.check("(iii)").unwrap().passed);
    assert!(!r.passed());
}

#[test]
fn missing_range_fails_v() {
    // drop f2's share of the square by declaring R_f1 as a quarter
    let s = ex35_system();
    let g = s.graph().clone();
    let unit = || Interval::new(q(0, 1), q(1, 1)).unwrap();
    let mut ranges: Vec<(String, Region)> = g.edge_ids().map(|e| (g.edge(e).name.clone(), s.range(e).clone())).collect();
    ranges[0].1 = Region::Plane(vec![Cell::cut(unit(), unit(), vec![Poly2::y() - Poly2::x()], q(1, 4))]);
    let maps = g.edge_ids().map(|e| (g.edge(e).name.clone(), s.map(e).clone())).collect();
    let bad = GeometricSBFS::new(g, vec![("v".into(), s.domain(crate::VertexId(0)).clone())], maps, ranges).unwrap();
    let r = validate_sbfs_conditions(&bad).unwrap();
    assert!(!r.check("(v)").unwrap().passed);
    assert!(!r.check("ranges").unwrap().passed);
}

#[test]
fn construction_errors() {
    let s = binary_system();
    let g = s.graph().clone();
    let map = s.map_by_name("a").unwrap().clone();
    let d = s.domain(crate::VertexId(0)).clone();
    let r = GeometricSBFS::new(g.clone(), vec![("nope".into(), d.clone())], vec![], vec![]);
    assert!(matches!(r, Err(Error::DanglingReference { .. })));
    let r = GeometricSBFS::new(g.clone(), vec![("p".into(), d.clone())], vec![("a".into(), map.clone())], vec![]);
    assert!(matches!(r, Err(Error::InvalidInput(_))));
    let plane = Region::rect((q(0, 1), q(1, 1)), (q(0, 1), q(1, 1))).unwrap();
    let r = GeometricSBFS::new(
        g,
        vec![("p".into(), plane)],
        vec![("a".into(), map.clone()), ("b".into(), map)],
        vec![("a".into(), d.clone()), ("b".into(), d)],
    );
    assert!(matches!(r, Err(Error::MalformedRegion(_))));
    assert!(Piece::new(Region::interval(q(0, 1), q(1, 1)).unwrap(), &Poly2::x() * &Poly2::x(), None).is_err());
    assert!(matches!(standard_system("nope"), Err(Error::UnknownLibraryGraph(_))));
}

#[test]
fn binary_product_passes() {
    let s = binary_system();
    assert_all_pass(&validate_sbfs_conditions(&s).unwrap());
    let p = product_sbfs(&s, &s).unwrap();
    assert_eq!(p.graph().k(), 2);
    assert_eq!(p.dimension(), 2);
    let r = validate_sbfs_conditions(&p).unwrap();
    assert_all_pass(&r);
    assert_eq!(r.check("(iii)").unwrap().cases, 3 * 4);
    assert!(r.check("(iv)").unwrap().cases > 0);
    assert!(!r.check("(iii)").unwrap().sampled);
    assert_eq!(p.domain(crate::VertexId(0)).measure().unwrap(), q(1, 1));
    // Φ of a product edge is Φ of the acting factor
    let a1 = p.map_by_name("a|p").unwrap();
    let a2 = p.map_by_name("p|a").unwrap();
    assert_eq!(rn_derivative_exact(a1, &[q(1, 3), q(1, 5)]).unwrap(), q(1, 2));
    assert_eq!(rn_derivative_exact(a2, &[q(1, 3), q(1, 5)]).unwrap(), q(1, 2));
}

#[test]
fn ex34_times_binary() {
    let p = product_sbfs(&ex34_system(), &binary_system()).unwrap();
    let r = validate_sbfs_conditions(&p).unwrap();
    assert_all_pass(&r);
    let d = p.domain(p.graph().vertex_id("v|p").unwrap());
    assert_eq!(d.measure().unwrap(), q(1, 3));
}

#[test]
fn product_rejects_bad_factor() {
    assert!(matches!(product_sbfs(&ex35_system(), &binary_system()), Err(Error::InvalidInput(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coding_undoes_prefixing_ex35(x in 0.001f64..0.999, y in 0.001f64..0.999, which in 0usize..3) {
        let s = ex35_system();
        let e = ["f1", "f2", "e"][which];
        let m = s.map_by_name(e).unwrap();
        let t = m.apply([x, y]).unwrap();
        let back = m.invert(t).unwrap();
        prop_assert!((back[0] - x).abs() + (back[1] - y).abs() < 1e-9);
    }

    #[test]
    fn rn_positive_on_ex35(x in 0.001f64..0.999, y in 0.001f64..0.999) {
        let s = ex35_system();
        for e in ["f1", "f2", "e"] {
            prop_assert!(rn_derivative_geometric(s.map_by_name(e).unwrap(), &[x, y]).unwrap() > 0.0);
        }
    }
}

#[test]
fn noncommuting_coding_maps_fail_iv() {
    // a vertical flip for e no longer commutes with the blue coding map
    let s = ex35_system();
    let g = s.graph().clone();
    let square = s.domain(crate::VertexId(0)).clone();
    let flip = PiecewiseMap::single(Piece::new(square.clone(), Poly2::x(), Some(Poly2::constant(Q::one()) - Poly2::y())).unwrap());
    let maps = g.edge_ids().map(|e| {
        let n = g.edge(e).name.clone();
        let m = if n == "e" { flip.clone() } else { s.map(e).clone() };
        (n, m)
    }).collect();
    let ranges = g.edge_ids().map(|e| (g.edge(e).name.clone(), s.range(e).clone())).collect();
    let r = validate_sbfs_conditions(&GeometricSBFS::new(g, vec![("v".into(), square)], maps, ranges).unwrap()).unwrap();
    let iv = r.check("(iv)").unwrap();
    assert!(!iv.passed && iv.max_defect > 0.1, "{iv:?}");
    assert!(r.check("(i)").unwrap().passed);
}
