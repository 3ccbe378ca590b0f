use std::collections::BTreeMap;

use polylie::confspace::{
    a_elem, a_tensor, act_indices, codegeneracy, integrable_conf_colie, inv_space, nondecreasing_words, project_pr, to_omega, translate,
    translated_a_expansion, FLetter,
};
use polylie::corr::{iterated_integral, symbol};
use polylie::exactalg::{kernel, rank, SparseVec};
use polylie::quad::vars;
use polylie::words::{colie_project, TenVec};

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn mobius(n: usize) -> i64 {
    let (mut n, mut sign, mut p) = (n, 1, 2);
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Dimension of the weight-`n` part of the free Lie algebra on `k`
/// generators.
fn witt(n: usize, k: usize) -> usize {
    let s: i64 = (1..=n).filter(|d| n % d == 0).map(|d| mobius(d) * (k as i64).pow((n / d) as u32)).sum();
    (s / n as i64) as usize
}

#[test]
fn witt_small_values() {
    assert_eq!(witt(2, 3), 3);
    assert_eq!(witt(3, 2), 2);
    assert_eq!(witt(4, 2), 3);
}

#[test]
fn translation_invariant_dimensions() {
    for n in 2..=5 {
        for m in 0..=4 {
            let expected: usize = (2..=n).map(|j| binomial(m, j)).sum();
            assert_eq!(inv_space(n, m).unwrap().rank(), expected, "n={n} m={m}");
        }
    }
}

/// Symbols of all `I(x_a; x_b1,…,x_bn; x_c)` on `points` points, over `ω_ij`.
fn conf_symbols(points: usize, n: usize) -> Vec<TenVec<polylie::confspace::Omega>> {
    let x = vars(points);
    let mut out = Vec::new();
    for mut code in 0..points.pow(n as u32 + 2) {
        let mut idx = Vec::with_capacity(n + 2);
        for _ in 0..n + 2 {
            idx.push(code % points);
            code /= points;
        }
        if idx[0] == idx[n + 1] {
            continue;
        }
        let mid: Vec<_> = idx[1..=n].iter().map(|&i| x[i].clone()).collect();
        let s = symbol(&iterated_integral(&x[idx[0]], &mid, &x[idx[n + 1]]).unwrap()).unwrap();
        if !s.is_zero() {
            out.push(to_omega(&s).unwrap().into_normal_form());
        }
    }
    out
}

/// The span of iterated integral symbols on `N` points has the dimension
/// of the sum of free Lie coalgebras on `1,…,N−1` generators, and `pr_i`
/// maps it onto the free part with kernel the span on `N−1` points.
#[test]
fn split_exact_sequence_ranks() {
    for (points, n) in [(3, 2), (4, 2), (4, 3), (5, 2), (5, 3), (5, 4), (6, 2), (6, 3)] {
        let syms = conf_symbols(points, n);
        let total: usize = (1..points).map(|k| witt(n, k)).sum();
        assert_eq!(rank(&syms), total, "points={points} n={n}");
        for s in syms.iter().step_by(97) {
            assert!(integrable_conf_colie(&polylie::words::CoLieVec::from_normal_form(s.clone())).unwrap());
        }
        for i in [0, points - 1] {
            let images: Vec<_> = syms
                .iter()
                .map(|s| project_pr(i, &polylie::words::CoLieVec::from_normal_form(s.clone())).into_normal_form())
                .collect();
            let image_rank = rank(&images);
            assert_eq!(image_rank, witt(n, points - 1), "pr_{i} points={points} n={n}");
            let smaller: usize = (1..points - 1).map(|k| witt(n, k)).sum();
            assert_eq!(total - image_rank, smaller, "ker pr_{i} points={points} n={n}");
        }
    }
}

type Poly = BTreeMap<Vec<usize>, i64>;

/// Nondecreasing words become commutative monomials `t_i1⋯t_in`.
fn to_poly(t: &TenVec<FLetter>, m: usize) -> Poly {
    let mut out = Poly::new();
    for (w, c) in t {
        let mut e = vec![0; m + 1];
        for l in w {
            let FLetter::F(i) = l else { panic!("shift letter") };
            e[*i as usize] += 1;
        }
        *out.entry(e).or_insert(0) += c.to_i64().expect("integer coefficient");
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Substitutes `t_(i+1) = t_i`.
fn merge(p: &Poly, i: usize) -> Poly {
    let mut out = Poly::new();
    for (e, c) in p {
        let mut e2 = e.clone();
        e2[i] += e2[i + 1];
        e2[i + 1] = 0;
        *out.entry(e2).or_insert(0) += c;
    }
    out.retain(|_, c| *c != 0);
    out
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (e1, c1) in a {
        for (e2, c2) in b {
            let e: Vec<usize> = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert(0) += c1 * c2;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn complete_homogeneous(deg: usize, m: usize) -> Poly {
    let mut out = Poly::new();
    for w in nondecreasing_words(deg, m) {
        let mut e = vec![0; m + 1];
        for l in &w {
            let FLetter::F(i) = l else { unreachable!() };
            e[*i as usize] += 1;
        }
        out.insert(e, 1);
    }
    out
}

/// Words killed by every codegeneracy are the polynomials divisible by
/// `(t0−t1)⋯(t(m−1)−tm)`: the kernel has dimension `C(n, m)` and each of
/// its elements vanishes on every diagonal.
#[test]
fn codegeneracy_kernel_is_divisible() {
    for n in 1..=5 {
        for m in 0..=3 {
            let words = nondecreasing_words(n, m);
            let rows: Vec<SparseVec<(usize, Vec<FLetter>)>> = words
                .iter()
                .map(|w| {
                    let mut r = SparseVec::new();
                    for i in 0..m {
                        for (img, c) in &codegeneracy(i, &TenVec::unit(w.clone())) {
                            r.add_term((i, img.clone()), c.clone());
                        }
                    }
                    r
                })
                .collect();
            let ker = kernel(&rows);
            assert_eq!(ker.rank(), binomial(n, m), "n={n} m={m}");
            for r in ker.rows() {
                let t: TenVec<FLetter> = r.iter().map(|(i, c)| (words[*i].clone(), c.clone())).collect();
                let scale = t.iter().map(|(_, c)| c.denom().to_string().parse::<i64>().unwrap()).fold(1, num_lcm);
                let t = t.scaled(&polylie::exactalg::Rat::from_int(scale));
                let p = to_poly(&t, m);
                for i in 0..m {
                    assert!(merge(&p, i).is_empty(), "n={n} m={m}");
                }
            }
        }
    }
}

fn num_lcm(a: i64, b: i64) -> i64 {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// `a_n(m)` is `(t0−t1)⋯(t(m−1)−tm)·h_(n−m)(t0,…,tm)`.
#[test]
fn a_tensor_polynomial() {
    for n in 1..=5 {
        for m in 1..=n.min(4) {
            let mut prod: Poly = [(vec![0; m + 1], 1)].into_iter().collect();
            for i in 0..m {
                let mut e1 = vec![0; m + 1];
                e1[i] = 1;
                let mut e2 = vec![0; m + 1];
                e2[i + 1] = 1;
                prod = poly_mul(&prod, &[(e1, 1), (e2, -1)].into_iter().collect());
            }
            let expected = poly_mul(&prod, &complete_homogeneous(n - m, m));
            assert_eq!(to_poly(&a_tensor(n, m).unwrap(), m), expected, "n={n} m={m}");
        }
    }
}

#[test]
fn a_tensor_translation_expansion() {
    for n in 2..=5 {
        for m in 1..=n {
            assert_eq!(translate(&a_tensor(n, m).unwrap()), translated_a_expansion(n, m).unwrap(), "n={n} m={m}");
        }
    }
}

fn increasing_maps(k: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..=m {
            cur.push(i);
            rec(i + 1, m, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, k + 1, &mut Vec::new(), &mut out);
    out
}

/// The images of `a_n(k)`, `2 ≤ k ≤ min(n, m)`, under all injections
/// `[k] → [m]` lie in `Inv_n(m)` and span it.
#[test]
fn coface_images_span_inv() {
    for n in 2..=5 {
        for m in 2..=4 {
            let inv = inv_space(n, m).unwrap();
            let mut imgs = Vec::new();
            for k in 2..=n.min(m) {
                let a = a_elem(n, k).unwrap();
                for map in increasing_maps(k, m) {
                    let moved = act_indices(a.normal_form(), |j| Some(map[j]));
                    let v = colie_project(&moved).unwrap().into_normal_form();
                    assert!(inv.contains(&v), "n={n} m={m} k={k} {map:?}");
                    imgs.push(v);
                }
            }
            assert_eq!(rank(&imgs), inv.rank(), "n={n} m={m}");
        }
    }
}
