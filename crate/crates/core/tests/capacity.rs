use std::f64::consts::{E, PI};

use qrbound::capacity::{
    capacity_estimate, capacity_estimate_with, cap_density_profile, ring_capacity_exact, CellClass, CondenserGrid,
    CondenserSet, SolverConfig,
};
use qrbound::geometry::{sample_region, Ball, ConeSpec, Point};

/// Grid-aligned condenser: C = {|x_k| ≤ c_k}, A bounded by the box of half-width `a`.
fn boxed(n: usize, h: f64, c: &[f64], a: f64) -> CondenserGrid {
    let half = (a / h).round() as usize + 1;
    let origin = vec![-(half as f64) * h; n];
    CondenserGrid::from_fn(n, h, vec![2 * half + 1; n], &origin, |x| {
        if x.iter().zip(c).all(|(xi, ci)| xi.abs() <= ci + 1e-9) {
            CellClass::InC
        } else if x.iter().any(|xi| xi.abs() >= a - 1e-9) {
            CellClass::Outside
        } else {
            CellClass::InA
        }
    })
    .unwrap()
}

#[test]
fn refinement_is_monotone_on_five_condensers() {
    let cases: [(usize, &[f64], f64); 5] = [
        (2, &[0.5, 0.5], 1.0),
        (2, &[0.25, 0.25], 1.0),
        (2, &[0.5, 0.25], 1.0),
        (2, &[0.5, 0.0], 1.5),
        (3, &[0.5, 0.5, 0.5], 1.0),
    ];
    for (n, c, a) in cases {
        let hs: &[f64] = if n == 2 { &[0.25, 0.125, 0.0625, 0.03125] } else { &[0.25, 0.125] };
        let mut prev = f64::INFINITY;
        for &h in hs {
            let v = capacity_estimate(&boxed(n, h, c, a), 1e-11).unwrap();
            assert!(v >= 0.0);
            assert!(v <= prev + 1e-6, "n {n} c {c:?} h {h}: {v} > {prev}");
            prev = v;
        }
    }
}

#[test]
fn enlarging_c_on_a_shared_grid() {
    for n in [2, 3] {
        let h = 0.125;
        let small = capacity_estimate(&boxed(n, h, &vec![0.25; n], 1.0), 1e-11).unwrap();
        let mut wide = vec![0.25; n];
        wide[0] = 0.5;
        let big = capacity_estimate(&boxed(n, h, &wide, 1.0), 1e-11).unwrap();
        assert!(small <= big + 1e-6, "n {n}: {small} > {big}");
    }
}

#[test]
fn planar_ring_within_five_percent() {
    let g = CondenserGrid::ring(2, 1.0, E, E / 64.0).unwrap();
    let v = capacity_estimate(&g, 1e-7).unwrap();
    let rel = v / (2.0 * PI) - 1.0;
    assert!(rel.abs() <= 0.05, "rel {rel}");
    assert!((ring_capacity_exact(2, 1.0, E).unwrap() - 2.0 * PI).abs() < 1e-12);
}

#[test]
fn ring_is_scale_free() {
    let a = capacity_estimate(&CondenserGrid::ring(2, 1.0, E, E / 32.0).unwrap(), 1e-9).unwrap();
    let b = capacity_estimate(&CondenserGrid::ring(2, 0.5, E / 2.0, E / 64.0).unwrap(), 1e-9).unwrap();
    assert!((a - b).abs() < 1e-6 * a, "{a} vs {b}");
}

#[test]
fn text_round_trip_keeps_capacity() {
    let g = boxed(2, 0.125, &[0.25, 0.5], 1.0);
    let back = CondenserGrid::from_text(&g.to_text()).unwrap();
    let cfg = SolverConfig { tol: 1e-10, ..SolverConfig::default() };
    let a = capacity_estimate_with(&g, &cfg).unwrap();
    let b = capacity_estimate_with(&back, &cfg).unwrap();
    assert_eq!(a.capacity, b.capacity);
}

#[test]
fn density_profile_of_a_cone() {
    let b = Point::e1(2, 1.0);
    let cone = ConeSpec::new(b.clone(), 0.6).unwrap();
    let p = cap_density_profile(CondenserSet::Region(&cone), &b, &[0.2, 0.1], 32).unwrap();
    assert_eq!(p.empty, vec![false, false]);
    for v in &p.values {
        assert!(*v > 0.0 && v.is_finite());
    }
    // far from b the set is invisible
    let pts = sample_region(&Ball::new(Point::new(vec![-0.5, 0.0]).unwrap(), 0.1).unwrap(), 20, 3).unwrap();
    let far = cap_density_profile(CondenserSet::Points(&pts), &b, &[0.1], 16).unwrap();
    assert_eq!(far.empty, vec![true]);
    assert_eq!(far.values, vec![0.0]);
}
