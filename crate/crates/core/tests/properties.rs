use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};

use hh2_core::clubsuit::{build_club_window, ClubWindow};
use hh2_core::koszulhh::{build_model, cup, homology_named, CoefficientKind, HHModule, Pairing};
use hh2_core::operators::{build_hhl, build_hhl_iterated, Based};
use hh2_core::quiver::Coefficients;
use hh2_core::spadesuit::{build_spade, CupOracle, SpadeAlgebra};
use hh2_core::{sparse, Field};
use proptest::prelude::*;

fn coefficients(p: u32) -> &'static Coefficients {
    static CACHE: OnceLock<BTreeMap<u32, &'static Coefficients>> = OnceLock::new();
    CACHE.get_or_init(|| [3u32, 5, 7].into_iter().map(|p| (p, &*Box::leak(Box::new(Coefficients::new(p).unwrap())))).collect())[&p]
}

fn chi7() -> &'static HHModule {
    static CHI: OnceLock<HHModule> = OnceLock::new();
    CHI.get_or_init(|| {
        let co = coefficients(7);
        homology_named(build_model(&co.c, &co.omega, &co.omega_mod, 0).unwrap(), CoefficientKind::Omega).unwrap()
    })
}

fn club5() -> &'static ClubWindow {
    static W: OnceLock<ClubWindow> = OnceLock::new();
    W.get_or_init(|| build_club_window(5, -2, 3).unwrap())
}

fn spade7() -> &'static (SpadeAlgebra, Mutex<CupOracle>) {
    static S: OnceLock<(SpadeAlgebra, Mutex<CupOracle>)> = OnceLock::new();
    S.get_or_init(|| (build_spade(7, (-1, 2), (-2, 2)).unwrap(), Mutex::new(CupOracle::new(7, -3, 5).unwrap())))
}

fn prime() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![3u32, 5, 7])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_inverses(p in prime(), a in 1u32..1000) {
        let f = Field::new(p).unwrap();
        let a = f.from_i64(a as i64);
        prop_assume!(a != 0);
        prop_assert_eq!(f.mul(a, f.inv(a)), 1);
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        prop_assert_eq!(f.mul(2, f.half()), 1);
    }

    #[test]
    fn omega_and_c_are_associative(p in prime(), x in any::<prop::sample::Index>(), y in any::<prop::sample::Index>(), z in any::<prop::sample::Index>()) {
        let co = coefficients(p);
        for a in [&co.omega, &co.c] {
            let (x, y, z) = (x.index(a.dim()), y.index(a.dim()), z.index(a.dim()));
            let left = a.mul_lin(a.mul(x, y), &sparse::unit(z));
            let right = a.mul_lin(&sparse::unit(x), a.mul(y, z));
            prop_assert_eq!(&left, &right);
            for &(t, _) in a.mul(x, y) {
                prop_assert_eq!(a.element(t).deg, a.element(x).deg + a.element(y).deg);
            }
        }
    }

    #[test]
    fn bimodule_actions_commute(p in prime(), a in any::<prop::sample::Index>(), m in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let co = coefficients(p);
        for x in [&co.theta, &co.theta_sigma, &co.omega_dual, &co.epep] {
            if x.dim() == 0 { continue; }
            let (a, m, b) = (a.index(co.omega.dim()), m.index(x.dim()), b.index(co.omega.dim()));
            let left = x.act_right_lin(x.act_left(a, m), b);
            let right = x.act_left_lin(a, x.act_right(m, b));
            prop_assert_eq!(left, right);
        }
    }

    #[test]
    fn model_differential_squares_to_zero(p in prime(), cells in prop::collection::vec((any::<prop::sample::Index>(), 1u32..7), 1..6)) {
        let co = coefficients(p);
        let m = build_model(&co.c, &co.omega, &co.theta_sigma, 0).unwrap();
        let f = m.field();
        let v: Vec<(usize, u32)> = cells.iter().map(|(i, c)| (i.index(m.dim()), f.from_i64(*c as i64))).collect();
        let mut lb = sparse::LinBuilder::new();
        for (i, c) in v { lb.push(i, c); }
        let v = lb.finish(f);
        prop_assert!(m.differential(&m.differential(&v)).is_empty());
    }

    #[test]
    fn chi_cup_is_graded_and_super_commutative(a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let chi = chi7();
        let co = coefficients(7);
        let f = co.omega.field();
        let alg = Pairing::algebra(&co.omega);
        let (a, b) = (a.index(chi.dim()), b.index(chi.dim()));
        let ab = cup(chi, &sparse::unit(a), chi, &sparse::unit(b), &alg, chi).unwrap();
        let ba = cup(chi, &sparse::unit(b), chi, &sparse::unit(a), &alg, chi).unwrap();
        let (ca, cb) = (&chi.classes[a], &chi.classes[b]);
        prop_assert_eq!(&ab, &sparse::scale(f, &ba, f.sign(ca.deg.k * cb.deg.k)));
        for &(t, _) in &ab {
            prop_assert_eq!(chi.classes[t].deg, ca.deg + cb.deg);
            prop_assert_eq!(chi.classes[t].h, ca.h + cb.h);
        }
    }

    #[test]
    fn club_products_add_rows_and_degrees(a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let w = club5();
        let (a, b) = (a.index(w.dim()), b.index(w.dim()));
        prop_assume!((-2..=3).contains(&(w.row_of(a) + w.row_of(b))));
        for (t, _) in w.mul(&sparse::unit(a), &sparse::unit(b)) {
            prop_assert_eq!(w.row_of(t), w.row_of(a) + w.row_of(b));
            prop_assert_eq!(w.degree(t), w.degree(a) + w.degree(b));
        }
    }

    #[test]
    fn spade_closed_form_matches_cup_at_7(m in any::<prop::sample::Index>(), n in any::<prop::sample::Index>()) {
        let (alg, oracle) = spade7();
        let (m, n) = (m.index(alg.dim()), n.index(alg.dim()));
        let (em, en) = (&alg.basis[m], &alg.basis[n]);
        prop_assume!(alg.in_window(em.a + en.a, em.b + en.b));
        let closed: BTreeMap<(i64, i64, String), u32> = alg.product(m, n).unwrap().into_iter().map(|(t, c)| {
            let e = &alg.basis[t];
            ((e.a, e.b, e.class.clone()), c)
        }).collect();
        let cupped = oracle.lock().unwrap().spade_product(alg, m, n).unwrap();
        prop_assert_eq!(closed, cupped);
    }

    #[test]
    fn spade_products_are_degree_additive(p in prime(), m in any::<prop::sample::Index>(), n in any::<prop::sample::Index>()) {
        let alg = build_spade(p, (-3, 4), (-3, 3)).unwrap();
        let (m, n) = (m.index(alg.dim()), n.index(alg.dim()));
        if let Ok(v) = alg.product(m, n) {
            for (t, _) in v {
                let (e, a, b) = (&alg.basis[t], &alg.basis[m], &alg.basis[n]);
                prop_assert_eq!((e.a, e.b, e.i, e.j, e.k, e.h), (a.a + b.a, a.b + b.b, a.i + b.i, a.j + b.j, a.k + b.k, a.h + b.h));
            }
        }
    }

    #[test]
    fn tower_constructions_agree(p in prime(), l in 0usize..=2, k_max in 0i64..20) {
        prop_assume!(p < 7 || l < 2);
        let direct = build_hhl(p, l, (0, k_max)).unwrap();
        let iterated = build_hhl_iterated(p, l, (0, k_max)).unwrap();
        prop_assert_eq!(direct.dim(), iterated.dim());
        prop_assert!(direct.basis.iter().all(|m| (0..=k_max).contains(&m.k)));
    }
}
