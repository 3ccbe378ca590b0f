use polylie::checks::projection_idempotent;
use polylie::exactalg::{rank, reduce, Rat, SparseVec};
use polylie::words::{colie_project, is_lyndon, shuffle, TenVec};
use proptest::prelude::*;

fn rat() -> impl Strategy<Value = Rat> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| Rat::new(n, d))
}

fn sparse(len: usize) -> impl Strategy<Value = SparseVec<u8>> {
    prop::collection::vec((0u8..12, rat()), 0..len).prop_map(SparseVec::from_terms)
}

fn word(max: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..3, 1..=max)
}

fn tensor(weight: usize) -> impl Strategy<Value = TenVec<u8>> {
    prop::collection::vec((prop::collection::vec(0u8..3, weight), -3i64..=3), 0..10)
        .prop_map(|terms| SparseVec::from_terms(terms.into_iter().map(|(w, c)| (w, Rat::from_int(c)))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn addition_is_commutative(a in sparse(8), b in sparse(8)) {
        prop_assert_eq!(&a + &b, &b + &a);
    }

    #[test]
    fn subtraction_inverts_addition(a in sparse(8), b in sparse(8)) {
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn no_zero_coefficients_are_stored(a in sparse(8), b in sparse(8), c in rat()) {
        let mut s = a.clone();
        s.add_scaled(&b, &c);
        prop_assert!(s.iter().all(|(_, x)| !x.is_zero()));
    }

    #[test]
    fn scaling_round_trips(a in sparse(8), c in rat()) {
        prop_assume!(!c.is_zero());
        prop_assert_eq!(a.scaled(&c).scaled(&c.recip()), a);
    }

    #[test]
    fn reduce_is_idempotent(rows in prop::collection::vec(sparse(6), 0..8)) {
        let s = reduce(&rows);
        let again: Vec<_> = s.rows().cloned().collect();
        prop_assert_eq!(reduce(&again), s.clone());
        prop_assert_eq!(s.rank(), rank(&rows));
        prop_assert!(rows.iter().all(|r| s.contains(r)));
    }

    #[test]
    fn reduce_ignores_row_order(mut rows in prop::collection::vec(sparse(6), 0..8), shift in 0usize..8) {
        let s = reduce(&rows);
        if !rows.is_empty() {
            let k = shift % rows.len();
            rows.rotate_left(k);
            rows.reverse();
        }
        prop_assert_eq!(reduce(&rows), s);
    }

    #[test]
    fn shuffle_is_commutative(u in word(4), v in word(4)) {
        prop_assert_eq!(shuffle(&u, &v), shuffle(&v, &u));
    }

    #[test]
    fn shuffle_counts_interleavings(u in word(4), v in word(4)) {
        let total = shuffle(&u, &v).iter().fold(Rat::zero(), |acc, (_, c)| &acc + c);
        let n = u.len() + v.len();
        let mut expected = 1i64;
        for i in 0..u.len() {
            expected = expected * (n - i) as i64 / (i + 1) as i64;
        }
        prop_assert_eq!(total, Rat::from_int(expected));
    }

    #[test]
    fn shuffles_project_to_zero(u in word(3), v in word(3)) {
        prop_assert!(colie_project(&shuffle(&u, &v)).unwrap().is_zero());
    }

    #[test]
    fn projection_is_idempotent(weight in 1usize..=5, seed in any::<u64>()) {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        let t = polylie::checks::random_tensor(&mut rng, weight, 3, 8);
        prop_assert!(projection_idempotent(&t));
    }

    #[test]
    fn normal_form_is_lyndon_supported(t in tensor(4)) {
        let p = colie_project(&t).unwrap();
        prop_assert!(p.normal_form().keys().all(|w| is_lyndon(w)));
    }
}
