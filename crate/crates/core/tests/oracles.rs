//! Small instances whose answers are known by hand: ranks from explicit row
//! reduction, Hilbert functions from monomial counts, Betti numbers from
//! closed-form resolutions.

use qci_core::e_resolution::{build_ue, check_lemma_equality, solve_dg_structure};
use qci_core::graded::{parse_poly, GradedRing, HomogeneousIdeal, Poly};
use qci_core::harness::battery::certify;
use qci_core::koszul::{build_tate_two_step, gamma_hilbert, koszul_homology};
use qci_core::resolution::{depth, grade};
use qci_core::{
    minimal_e_resolution, minimal_free_resolution, oracle_resolution, Caps, FMatrix, KoszulAlgebra, PoincareSeries,
    PresentedModule, PrimeField,
};
use std::sync::Arc;

fn f(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

fn ring(vars: &[&str], rels: &[&str]) -> Arc<GradedRing> {
    let v: Vec<(&str, u32)> = vars.iter().map(|&n| (n, 1)).collect();
    GradedRing::parse(f(101), &v, rels)
}

fn polys(q: &GradedRing, ps: &[&str]) -> Vec<Poly> {
    ps.iter().map(|p| parse_poly(p, &q.var_names()).unwrap()).collect()
}

fn ideal(q: &Arc<GradedRing>, gens: &[&str]) -> HomogeneousIdeal {
    HomogeneousIdeal::new(q.clone(), polys(q, gens)).unwrap()
}

fn coeffs(cs: &[i64], order: usize) -> PoincareSeries {
    PoincareSeries::from_i64s(cs, order)
}

#[test]
fn linear_algebra_by_hand() {
    let m = FMatrix::from_rows(f(101), &[vec![1, 2], vec![2, 4]]).unwrap();
    assert_eq!(m.rank(), 1);

    // every kernel vector of [1 1] over F_5 is a multiple of (4, 1)
    let m = FMatrix::from_rows(f(5), &[vec![1, 1]]).unwrap();
    let k = m.kernel_basis();
    assert_eq!(k.cols(), 1);
    let v = k.column(0);
    let all: Vec<(u32, u32)> = (0..5).flat_map(|a| (0..5).map(move |b| (a, b))).filter(|(a, b)| (a + b) % 5 == 0).collect();
    assert_eq!(all.len(), 5);
    assert!(all.contains(&(v[0], v[1])));
    assert!((0..5).any(|c| (4 * c % 5, c) == (v[0], v[1]) && c != 0));

    let m = FMatrix::from_rows(f(5), &[vec![2]]).unwrap();
    assert_eq!(m.solve(&[1]).unwrap(), Some(vec![3]));
}

#[test]
fn hilbert_functions_by_monomial_count() {
    let q = ring(&["x"], &["x^3"]);
    assert_eq!((0..5).map(|d| q.dim(d)).collect::<Vec<_>>(), vec![1, 1, 1, 0, 0]);
    let r = ideal(&ring(&["x", "y"], &[]), &["x*y"]).quotient_ring();
    assert_eq!(r.dim(2), 2);
    let r = ideal(&q, &["x^2"]).quotient_ring();
    assert_eq!((0..4).map(|d| r.dim(d)).collect::<Vec<_>>(), vec![1, 1, 0, 0]);
    let x = q.var(0);
    let x2 = q.multiply(&x, &x);
    assert!(q.multiply(&x, &x2).is_zero());
}

#[test]
fn ideal_conditions_by_hand() {
    let q = ring(&["x", "y"], &[]);
    // m = (x, y) as Q(-1)² modulo the Koszul syzygy (y, -x)
    let xy = polys(&q, &["y", "-x"]);
    let mm = PresentedModule::new(q.clone(), vec![1, 1], vec![vec![xy[0].clone()], vec![xy[1].clone()]]).unwrap();
    assert_eq!(mm.minimal_generators().len(), 2);
    assert_eq!((0..4).map(|d| mm.dim(d)).collect::<Vec<_>>(), vec![0, 2, 3, 4]);

    let min = ideal(&q, &["x^2", "x^3"]).check_minimality();
    assert!(!min.minimal);
    assert_eq!(min.witness, Some(1));
    assert!(ideal(&q, &["x", "y"]).check_minimality().minimal);

    let k = PresentedModule::residue_field(q.clone());
    assert_eq!(ideal(&q, &["x^2"]).check_shamash_condition(&k), Ok(true));
    assert_eq!(ideal(&q, &["x"]).check_shamash_condition(&k), Ok(false));
    assert!(ideal(&q, &["x"]).check_nagata_condition());
    assert!(!ideal(&q, &["x^2"]).check_nagata_condition());

    assert_eq!(ring(&["x"], &["x^3"]).edim(), 1);
    assert_eq!(ring(&["x", "y"], &["x"]).edim(), 1);
}

#[test]
fn betti_numbers_by_closed_form() {
    let q = ring(&["x", "y"], &[]);
    let k = PresentedModule::residue_field(q.clone());
    assert_eq!(minimal_free_resolution(&k, Caps::new(4, 20)).betti().total, vec![1, 2, 1, 0, 0]);

    let r = ring(&["x"], &["x^2"]);
    let kr = PresentedModule::residue_field(r);
    assert_eq!(minimal_free_resolution(&kr, Caps::new(10, 30)).betti().total, vec![1; 11]);

    let r3 = ring(&["x"], &["x^3"]);
    let p = minimal_free_resolution(&PresentedModule::residue_field(r3), Caps::new(10, 30)).poincare();
    assert_eq!(p, coeffs(&[1; 11], 10));

    let oracle = oracle_resolution(&k, Caps::new(3, 20));
    assert_eq!(&oracle.complex.tor_ranks()[..3], &[1, 2, 1]);
    assert!(oracle.complex.ranks()[..3].iter().zip([1, 2, 1]).all(|(&a, b)| a >= b));

    let m = PresentedModule::cyclic(q.clone(), &polys(&q, &["x"])).unwrap();
    let oracle = oracle_resolution(&m, Caps::new(3, 20));
    assert_eq!(&oracle.complex.tor_ranks()[..3], &[1, 1, 0]);
}

#[test]
fn depth_and_grade_by_hand() {
    assert_eq!(depth(&ring(&["x", "y"], &[]), 40), 2);
    assert_eq!(depth(&ring(&["x"], &["x^3"]), 40), 0);
    assert_eq!(depth(&ring(&["x", "y"], &["x*y"]), 40), 1);
    assert_eq!(grade(&ideal(&ring(&["x", "y"], &[]), &["x*y"]), 40), 1);
    assert_eq!(grade(&ideal(&ring(&["x"], &["x^3"]), &["x^2"]), 40), 0);
}

#[test]
fn koszul_algebra_by_hand() {
    let q = ring(&["x", "y"], &[]);
    let e = KoszulAlgebra::new(&ideal(&q, &["x^2", "x*y"])).unwrap();
    assert_eq!(e.complex().ranks(), vec![1, 2, 1]);
    // ∂(e1 e2) = x² e2 − xy e1
    let top = e.complex().boundary(2, 0);
    let as_poly: Vec<(usize, Poly)> = top.iter().map(|(i, c)| (*i, q.elem_to_poly(c))).collect();
    assert!(as_poly.contains(&(0, Poly::monomial(vec![1, 1], -1))));
    assert!(as_poly.contains(&(1, Poly::monomial(vec![2, 0], 1))));
    assert!(e.check_leibniz().is_ok());

    // x² in k[x]/(x³): H_1 is free of rank one on x·e
    let q3 = ring(&["x"], &["x^3"]);
    let e = KoszulAlgebra::new(&ideal(&q3, &["x^2"])).unwrap();
    let r = e.ideal().quotient_ring();
    let h = koszul_homology(&e, &r, 2, 10);
    assert_eq!(h.m(), 1);
    assert_eq!(h.h1_twists(), vec![3]);
    assert!(h.h1_free());
    let cert = certify(&e, Caps::new(6, 20));
    assert!(cert.a.holds && cert.b.holds);
    assert_eq!(cert.a.m, 1);
    let t = build_tate_two_step(&e, &h, 6);
    assert_eq!(t.complex.ranks(), vec![1; 8]);

    let cert = certify(&KoszulAlgebra::new(&ideal(&q, &["x^2", "x*y"])).unwrap(), Caps::new(6, 20));
    assert!(!cert.a.holds && !cert.b.holds);

    assert_eq!(gamma_hilbert(2, 4).coeff(4), 3);
}

#[test]
fn e_resolutions_by_hand() {
    let q = ring(&["x", "y"], &[]);
    let k = PresentedModule::residue_field(q.clone());
    let e = KoszulAlgebra::new(&ideal(&q, &["x"])).unwrap();
    let u = minimal_e_resolution(&k, &e, Caps::new(5, 20)).unwrap();
    assert_eq!(u.betti(), vec![1, 1, 0, 0, 0, 0]);

    let e2 = KoszulAlgebra::new(&ideal(&q, &["x^2"])).unwrap();
    let u = minimal_e_resolution(&k, &e2, Caps::new(8, 30)).unwrap();
    assert_eq!(u.poincare(), coeffs(&[1, 2, 2, 2, 2, 2, 2, 2, 2], 8));
    let lemma = check_lemma_equality(&k, &e2, Caps::new(8, 30)).unwrap();
    assert_eq!(lemma.p_e, lemma.p_q_gamma);

    let q3 = ring(&["x"], &["x^3"]);
    let i = ideal(&q3, &["x^2"]);
    let e3 = KoszulAlgebra::new(&i).unwrap();
    let rm = PresentedModule::cyclic(q3.clone(), i.gens()).unwrap();
    let u = minimal_e_resolution(&rm, &e3, Caps::new(8, 30)).unwrap();
    assert_eq!(u.poincare(), PoincareSeries::one_minus_t2_pow(8, -1));
    // 1/((1-t)(1-t²)) on both sides
    let k3 = PresentedModule::residue_field(q3.clone());
    let lemma = check_lemma_equality(&k3, &e3, Caps::new(8, 30)).unwrap();
    let closed = PoincareSeries::one_minus_t_pow(8, -1).mul(&PoincareSeries::one_minus_t2_pow(8, -1));
    assert_eq!(lemma.p_e, closed);
    assert_eq!(lemma.p_q_gamma, closed);
}

#[test]
fn dg_structure_on_koszul_of_x() {
    let q = ring(&["x", "y"], &[]);
    let k = PresentedModule::residue_field(q.clone());
    let f = minimal_free_resolution(&k, Caps::new(2, 20));
    let e = KoszulAlgebra::new(&ideal(&q, &["x"])).unwrap();
    let st = solve_dg_structure(&f.complex, &e, 2, 8, 7).expect("exists: Koszul on x, y is a dg module");
    assert!(st.verify().is_ok());
    let ue = build_ue(&st, &e, 4);
    assert!(ue.complex.d_squared_zero().is_ok());
    assert!(ue.verify_resolves(&k, 8).is_ok());
}
