use polylie::checks::{
    all_correlators, cobracket_twice, cross_ratio_sign_defect, nondecreasing_sum_symbol, permutations4, random_correlator, specialization_case,
};
use polylie::corr::{b2_vector, cor, delta_bar_iterated, li, multiple_li, symbol, B2Letter, CorVec, Point};
use polylie::exactalg::SparseVec;
use polylie::words::{colie_project, TenVec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn specialization_commutes_with_cobracket() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for weight in 2..=5 {
        for _ in 0..100 {
            let (c, ok) = specialization_case(&mut rng, weight).unwrap();
            assert!(ok, "{c:?}");
        }
    }
}

#[test]
fn nondecreasing_sums_vanish() {
    for (m, n) in [(0, 2), (0, 3), (1, 3), (1, 4)] {
        assert!(nondecreasing_sum_symbol(m, n).unwrap().is_zero(), "m={m} n={n}");
    }
}

#[test]
fn cojacobi_exhaustive_low_weight() {
    for (weight, points) in [(2, 3), (3, 3), (3, 4), (4, 3)] {
        for t in all_correlators(weight, points) {
            assert!(cobracket_twice(&CorVec::unit(t.clone())).is_empty(), "{t:?}");
        }
    }
}

#[test]
fn cojacobi_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for weight in 2..=6 {
        for _ in 0..25 {
            let c = random_correlator(&mut rng, weight, 5);
            assert!(cobracket_twice(&c).is_empty(), "{c:?}");
        }
    }
}

#[test]
fn cross_ratio_permutations_act_by_sign() {
    let perms = permutations4();
    assert_eq!(perms.len(), 24);
    for s in perms {
        assert!(cross_ratio_sign_defect(s).unwrap().is_zero(), "{s:?}");
    }
}

fn b2(a: &Point) -> SparseVec<B2Letter> {
    b2_vector(&symbol(&li(2, a).unwrap()).unwrap())
}

/// `Li2(a1)⊗…⊗Li2(ak)` projected to the Lie coalgebra.
fn li2_tensor(args: &[Point]) -> TenVec<B2Letter> {
    let mut t = TenVec::unit(Vec::new());
    for a in args {
        let mut next = TenVec::new();
        for (w, c) in &t {
            for (l, d) in &b2(a) {
                let mut w2 = w.clone();
                w2.push(l.clone());
                next.add_term(w2, c * d);
            }
        }
        t = next;
    }
    t
}

/// Computed: `Δ̄^{[k−1]} Li_{k;1,…,1}(a1,…,ak) = −Li2(a1)⊗…⊗Li2(ak)` for
/// k = 2, 3. The sign is the same for both k, so it cannot be absorbed by
/// the wedge order, the reading order of the tensor, or the overall sign
/// of the iterated integral, which all contribute `(−1)^(k+1)`.
#[test]
fn iterated_truncated_coproduct_of_depth_k() {
    for k in 2..=3 {
        let args: Vec<Point> = (1..=k).map(|i| Point::param(&format!("a{i}"))).collect();
        let m = multiple_li(k as i64, &vec![1; k], &args).unwrap();
        assert_eq!(m.weight, 2 * k);
        let lhs = delta_bar_iterated(&m.value, k).unwrap();
        let rhs = colie_project(&li2_tensor(&args)).unwrap();
        assert!(!rhs.is_zero());
        assert_eq!(lhs, -&rhs, "k={k}");
    }
}

#[test]
fn truncated_coproduct_of_li4_vanishes() {
    let d = delta_bar_iterated(&li(4, &Point::param("a")).unwrap(), 2).unwrap();
    assert!(d.is_zero());
}

#[test]
fn truncated_coproduct_weight_two_is_the_symbol() {
    let x: Vec<Point> = (0..3).map(Point::var).collect();
    let c = cor(&x).unwrap();
    let d = delta_bar_iterated(&c, 1).unwrap();
    let s = b2_vector(&symbol(&c).unwrap());
    assert_eq!(d.normal_form(), &s.iter().map(|(l, c)| (vec![l.clone()], c.clone())).collect::<TenVec<_>>());
    assert!(delta_bar_iterated(&c, 2).is_err());
}
