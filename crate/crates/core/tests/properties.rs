use std::sync::OnceLock;

use gwdesc::fixtures::{load_fixture, projective_space};
use gwdesc::geometry::symmetric::{chern_symmetric, elementary_product, monomial_symmetric, to_elementary, Poly};
use gwdesc::moduli::psi_integral_genus0;
use gwdesc::phase::{PhaseIndex, PhaseSpace, PotentialSeries};
use gwdesc::rational::{q, qf};
use gwdesc::{CohClass, CurveClass, Engine, EngineConfig, GeometryModel, Insertion, NovikovSeries, QBound, TruncationPolicy, Q};
use proptest::prelude::*;

fn small_q() -> impl Strategy<Value = Q> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| qf(n, d))
}

fn bound2(max: u64) -> QBound {
    QBound::new(vec![1, 2], max).unwrap()
}

fn series(max: u64) -> impl Strategy<Value = NovikovSeries> {
    prop::collection::vec(((0u32..=3, 0u32..=2), small_q()), 0..6).prop_map(move |terms| {
        let b = bound2(max);
        let mut s = NovikovSeries::zero(&b);
        for ((x, y), c) in terms {
            s.add_term(CurveClass(vec![x, y]), c);
        }
        s
    })
}

fn pairing(b: &CurveClass) -> i64 {
    i64::from(b.0[0]) + 2 * i64::from(b.0[1])
}

proptest! {
    #[test]
    fn novikov_ring_axioms(a in series(3), b in series(3), c in series(3)) {
        prop_assert_eq!(a.try_mul(&b).unwrap(), b.try_mul(&a).unwrap());
        prop_assert_eq!(
            a.try_mul(&b).unwrap().try_mul(&c).unwrap(),
            a.try_mul(&b.try_mul(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(
            a.try_mul(&(&b + &c)).unwrap(),
            &a.try_mul(&b).unwrap() + &a.try_mul(&c).unwrap()
        );
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn truncation_is_a_ring_map(a in series(4), b in series(4), cut in 0u64..=4) {
        let small = bound2(cut);
        let lhs = a.try_mul(&b).unwrap().truncated(&small).unwrap();
        let rhs = a.truncated(&small).unwrap().try_mul(&b.truncated(&small).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn antiderivative_inverts_derivative(a in series(3)) {
        let a = a.without_constant();
        prop_assert_eq!(a.antiderivative(pairing).unwrap().derivative(pairing), a.clone());
        prop_assert_eq!(a.derivative(pairing).antiderivative(pairing).unwrap(), a);
    }
}

fn models() -> &'static [GeometryModel] {
    static M: OnceLock<Vec<GeometryModel>> = OnceLock::new();
    M.get_or_init(|| (0..=3).map(|n| projective_space(n).unwrap()).collect())
}

fn class_of(model: &GeometryModel, coeffs: &[Q]) -> CohClass {
    CohClass(coeffs.iter().take(model.rank()).cloned().collect())
}

proptest! {
    #[test]
    fn pairing_is_frobenius(n in 0usize..=3, x in prop::collection::vec(small_q(), 4), y in prop::collection::vec(small_q(), 4), z in prop::collection::vec(small_q(), 4)) {
        let m = &models()[n];
        let (x, y, z) = (class_of(m, &x), class_of(m, &y), class_of(m, &z));
        prop_assert_eq!(m.pairing(&m.cup(&x, &y), &z), m.pairing(&x, &m.cup(&y, &z)));
        prop_assert_eq!(m.cup(&x, &y), m.cup(&y, &x));
        let duals = m.dual_bases().unwrap();
        let mut back = CohClass::zero(m.rank());
        for a in 0..m.rank() {
            back.add_scaled(&duals.delta[a], &m.pairing(&duals.delta_dual[a], &x));
        }
        prop_assert_eq!(back, x);
    }

    #[test]
    fn elementary_expansion_round_trips(alpha in prop::collection::vec(0u32..=3, 1..=3)) {
        let n = alpha.len();
        let m = monomial_symmetric(&alpha);
        let in_e = to_elementary(&m, n).unwrap();
        let mut back = Poly::new();
        for (powers, c) in &in_e {
            for (e, v) in elementary_product(powers) {
                let entry = back.entry(e).or_insert_with(|| q(0));
                *entry += &v * c;
            }
        }
        back.retain(|_, v| *v != q(0));
        prop_assert_eq!(back, m);
    }

    #[test]
    fn power_sums_follow_newton(n in 1usize..=3, k in 1u32..=3) {
        // one nonzero exponent k: the power sum p_k of the roots -v_j,
        // from p_k = sum_{i<k} (-1)^{i-1} e_i p_{k-i} + (-1)^{k-1} k e_k
        let m = &models()[n];
        let e = |j: usize| -> CohClass {
            if j > n { return CohClass::zero(m.rank()); }
            let c = m.chern(j);
            if j % 2 == 1 { -&c } else { c }
        };
        let mut p: Vec<CohClass> = vec![CohClass::zero(m.rank())];
        for kk in 1..=k as usize {
            let mut s = e(kk).scale(&q(if kk % 2 == 1 { kk as i64 } else { -(kk as i64) }));
            for i in 1..kk {
                let t = m.cup(&e(i), &p[kk - i]);
                s.add_scaled(&t, &q(if i % 2 == 1 { 1 } else { -1 }));
            }
            p.push(s);
        }
        let g = k;
        let mut idx = vec![g; n];
        idx[0] = 0;
        idx.sort_unstable();
        prop_assert_eq!(chern_symmetric(m, &idx, g).unwrap(), p[k as usize].clone());
    }

    #[test]
    fn psi_integrals_are_symmetric_and_satisfy_string_and_dilaton(d in prop::collection::vec(0u32..=3, 3..=7), seed in any::<u64>()) {
        let v = psi_integral_genus0(&d);
        let mut r = d.clone();
        r.rotate_left((seed as usize) % d.len());
        prop_assert_eq!(psi_integral_genus0(&r), v.clone());
        // string: <tau_0 prod tau_{d_i}> = sum_j <... tau_{d_j - 1} ...>
        let mut with0 = vec![0];
        with0.extend_from_slice(&d);
        let mut s = q(0);
        for j in 0..d.len() {
            if d[j] > 0 {
                let mut e = d.clone();
                e[j] -= 1;
                s += psi_integral_genus0(&e);
            }
        }
        prop_assert_eq!(psi_integral_genus0(&with0), s);
        let mut with1 = vec![1];
        with1.extend_from_slice(&d);
        prop_assert_eq!(psi_integral_genus0(&with1), q(d.len() as i64 - 2) * v);
    }
}

fn engines() -> &'static [Engine] {
    static E: OnceLock<Vec<Engine>> = OnceLock::new();
    E.get_or_init(|| {
        ["P1", "P2"]
            .into_iter()
            .map(|n| {
                let f = load_fixture(n).unwrap();
                Engine::new(f.model, f.table, EngineConfig::default()).unwrap()
            })
            .collect()
    })
}

fn cold_engines() -> &'static [Engine] {
    static E: OnceLock<Vec<Engine>> = OnceLock::new();
    E.get_or_init(|| {
        ["P1", "P2"]
            .into_iter()
            .map(|n| {
                let f = load_fixture(n).unwrap();
                Engine::new(f.model, f.table, EngineConfig { use_cache: false, ..EngineConfig::default() }).unwrap()
            })
            .collect()
    })
}

fn insertions(rank: usize) -> impl Strategy<Value = Vec<Insertion>> {
    prop::collection::vec((0u32..=2, 0u32..=1, 0..rank), 3..=4)
        .prop_map(|v| v.into_iter().map(|(d, e, a)| Insertion::new(d, e, a)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn correlators_ignore_order_and_cache(which in 0usize..2, beta in 0u32..=2, seed in any::<u64>(), raw in insertions(3)) {
        let e = &engines()[which];
        let rank = e.model().rank();
        let ins: Vec<Insertion> = raw.into_iter().map(|x| Insertion::new(x.d, x.e, x.a % rank)).collect();
        let b = CurveClass(vec![beta]);
        let v = e.generalized_correlator(&b, &ins).unwrap();
        let mut shuffled = ins.clone();
        shuffled.rotate_left((seed as usize) % ins.len());
        prop_assert_eq!(e.evaluate_in_order(&b, &shuffled).unwrap(), v.clone());
        prop_assert_eq!(cold_engines()[which].generalized_correlator(&b, &ins).unwrap(), v);
    }

    #[test]
    fn string_equation(which in 0usize..2, beta in 0u32..=2, raw in prop::collection::vec((0u32..=3, 0usize..3), 2..=4)) {
        let e = &engines()[which];
        let rank = e.model().rank();
        let ins: Vec<(u32, usize)> = raw.into_iter().map(|(d, a)| (d, a % rank)).collect();
        let b = CurveClass(vec![beta]);
        prop_assume!(beta > 0 || ins.len() >= 3);
        let mut with = vec![(0, e.model().identity())];
        with.extend(ins.iter().copied());
        let lhs = e.descendant_correlator(0, &b, &with).unwrap();
        let mut rhs = q(0);
        for j in 0..ins.len() {
            if ins[j].0 > 0 {
                let mut lowered = ins.clone();
                lowered[j].0 -= 1;
                rhs += e.descendant_correlator(0, &b, &lowered).unwrap();
            }
        }
        prop_assert_eq!(lhs, rhs);
    }
}

type Terms = Vec<(Vec<PhaseIndex>, NovikovSeries)>;

fn line_space_terms() -> &'static (PotentialSeries, Terms) {
    static P: OnceLock<(PotentialSeries, Terms)> = OnceLock::new();
    P.get_or_init(|| {
        let e = &engines()[0];
        let policy = TruncationPolicy { max_beta_degree: 2, max_x_degree: 4, max_descendant: 2 };
        let f = PhaseSpace::new(e, policy).unwrap().potential_f_st().unwrap();
        let terms = f.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        (f, terms)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn potential_assembly_order_is_irrelevant(seed in any::<u64>()) {
        let (f, terms) = line_space_terms();
        let mut order: Vec<usize> = (0..terms.len()).collect();
        let mut state = seed;
        for i in (1..order.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (state >> 33) as usize % (i + 1));
        }
        let mut rebuilt = PotentialSeries::zero(f.bound(), f.max_x_degree());
        for &k in &order {
            let (m, c) = &terms[k];
            let mut reversed = m.clone();
            reversed.reverse();
            rebuilt.add_term(reversed, c);
        }
        prop_assert_eq!(&rebuilt, f);
    }

    #[test]
    fn transform_is_triangular(which in 0usize..2, qmax in 0u64..=2, dmax in 0u32..=3) {
        let e = &engines()[which];
        let policy = TruncationPolicy { max_beta_degree: qmax, max_x_degree: 3, max_descendant: dmax };
        let space = PhaseSpace::new(e, policy).unwrap();
        let t = space.build_t().unwrap();
        prop_assert!(t.is_weight_raising());
        let inv = t.invert().unwrap();
        prop_assert!(t.try_mul(&inv).unwrap().is_identity());
        prop_assert!(inv.try_mul(&t).unwrap().is_identity());
        if qmax == 0 {
            prop_assert!(t.is_identity());
        }
    }
}
