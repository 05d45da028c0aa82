//! Property tests for the arithmetic layers and the complex builders.

use detres_core::chern::{chern_closed_form, chern_from_sequence, exclude_cases, ChowElement, Q};
use detres_core::complex::{build_d, hilbert_from_betti, minimize, BettiTable};
use detres_core::det::{DegreeMatrix, DetScheme};
use detres_core::poly::{binomial, random_form};
use detres_core::strand::Ring;
use detres_core::{Field, Fp, Poly, Rationals};
use proptest::prelude::*;

fn fp() -> Fp {
    Fp::default_prime()
}

fn small_poly(nvars: usize, d: i64, seed: u64) -> Poly<Fp> {
    random_form(&fp(), nvars, d, seed).unwrap()
}

fn chow() -> impl Strategy<Value = ChowElement> {
    prop::array::uniform6(-5i64..=5).prop_map(|c| {
        let mut e = ChowElement::zero();
        for (k, v) in c.into_iter().enumerate() {
            e.coeffs[k] = Q::from_integer(v);
        }
        e
    })
}

/// `Σ_i (-1)^i β_{i,d}` for each degree `d` in the table.
fn euler(b: &BettiTable) -> std::collections::BTreeMap<i32, i64> {
    let mut out = std::collections::BTreeMap::new();
    for (&(i, j), &v) in &b.entries {
        let s = if i % 2 == 0 { 1 } else { -1 };
        *out.entry(j).or_insert(0) += s * v as i64;
    }
    out.retain(|_, v| *v != 0);
    out
}

fn scheme(t: usize, c: usize, extra: usize, heavy: bool, seed: u64) -> DetScheme<Fp> {
    let n = c + extra;
    let dm = if heavy {
        let m = t + c - 1;
        let row: Vec<i32> = (0..m).map(|j| if j + 1 == m { 2 } else { 1 }).collect();
        DegreeMatrix::from_entry_degrees(n, &vec![row; t]).unwrap()
    } else {
        DegreeMatrix::linear(t, c, n).unwrap()
    };
    DetScheme::generic(&fp(), dm, seed).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prime_field_axioms(a in 0u32..32003, b in 0u32..32003, c in 1u32..32003) {
        let f = fp();
        let (a, b, c) = (f.from_i64(a as i64), f.from_i64(b as i64), f.from_i64(c as i64));
        prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
        prop_assert_eq!(f.add(&a, &f.neg(&a)), f.zero());
        prop_assert_eq!(f.mul(&c, &f.inv(&c).unwrap()), f.one());
        prop_assert_eq!(f.sub(&a, &b), f.add(&a, &f.neg(&b)));
    }

    #[test]
    fn render_then_parse_is_identity(nvars in 1usize..5, d in 1i64..4, seed in any::<u64>()) {
        let p = small_poly(nvars, d, seed);
        prop_assert_eq!(Poly::parse(&fp(), nvars, &p.render()).unwrap(), p);
    }

    #[test]
    fn rational_render_then_parse_is_identity(d in 1i64..3, seed in any::<u64>()) {
        let q = Rationals;
        let p = random_form(&q, 3, d, seed).unwrap().scale(&q.inv(&q.from_i64(6)).unwrap());
        prop_assert_eq!(Poly::parse(&q, 3, &p.render()).unwrap(), p);
    }

    #[test]
    fn polynomial_ring_laws(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let (p, q, r) = (small_poly(3, 2, s1), small_poly(3, 1, s2), small_poly(3, 1, s3));
        prop_assert_eq!(p.mul(&q), q.mul(&p));
        prop_assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
        prop_assert_eq!(p.mul(&q.add(&r)), p.mul(&q).add(&p.mul(&r)));
        prop_assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn evaluation_is_a_ring_map(s1 in any::<u64>(), s2 in any::<u64>(), pt in prop::array::uniform3(0u32..32003)) {
        let f = fp();
        let pt: Vec<u32> = pt.to_vec();
        let (p, q) = (small_poly(3, 2, s1), small_poly(3, 2, s2));
        let lhs = p.mul(&q).eval(&pt).unwrap();
        prop_assert_eq!(lhs, f.mul(&p.eval(&pt).unwrap(), &q.eval(&pt).unwrap()));
    }

    #[test]
    fn chow_ring_is_commutative_and_associative(x in chow(), y in chow(), z in chow()) {
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
    }

    #[test]
    fn units_invert(x in chow()) {
        let mut u = x.clone();
        u.coeffs[0] = Q::from_integer(1);
        prop_assert_eq!(u.mul(&u.inverse().unwrap()), ChowElement::one());
    }

    #[test]
    fn chern_formulas_agree_for_large_ranks(t in 2u32..40) {
        prop_assert_eq!(chern_from_sequence(t).unwrap(), chern_closed_form(t));
        prop_assert!(exclude_cases(t).unwrap().all_excluded);
    }

    #[test]
    fn free_module_hilbert_function(n in 1usize..6, twist in 0i32..4, bound in 0i32..8) {
        let mut b = BettiTable::default();
        b.entries.insert((0, twist), 1);
        let h = hilbert_from_betti(&b, n, bound);
        for d in 0..=bound {
            let want = if d < twist { 0 } else { binomial((d - twist) as u64 + n as u64 - 1, n as u64 - 1) };
            prop_assert_eq!(h.value(d), want as i64);
        }
    }

    #[test]
    fn degree_matrix_rows_sorted(a in prop::collection::vec(1i32..4, 3), b in prop::collection::vec(-1i32..1, 2)) {
        let dm = DegreeMatrix::new(2, 2, 4, a.clone(), b.clone()).unwrap();
        let mut sa = a;
        sa.sort();
        let mut sb = b;
        sb.sort();
        prop_assert_eq!(dm.a, sa);
        prop_assert_eq!(dm.b, sb);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn d_complexes_square_to_zero_and_minimize_keeps_euler(
        t in 2usize..4, c in 1usize..4, heavy in any::<bool>(), seed in any::<u64>(),
    ) {
        let s = scheme(t, c, 1, heavy, seed);
        for i in -1..=c as i32 {
            let d = build_d(i, &s.phi).unwrap();
            prop_assert!(d.check_d2().is_ok(), "D_{} fails d^2 = 0", i);
            let m = minimize(&d);
            prop_assert!(m.check_d2().is_ok());
            prop_assert_eq!(euler(&d.betti()), euler(&m.betti()));
        }
    }

    #[test]
    fn ideal_resolution_is_cohen_macaulay_and_counts_monomials(
        t in 2usize..4, c in 1usize..4, heavy in any::<bool>(), seed in any::<u64>(),
    ) {
        let s = scheme(t, c, 1, heavy, seed);
        let m = minimize(&build_d(0, &s.phi).unwrap()).trimmed();
        prop_assert_eq!(m.hi() - m.lo(), c as i32);
        prop_assert_eq!(m.betti().total(0), 1);
        let ring = Ring::quotient(&fp(), s.nvars(), s.minors.clone());
        let h = hilbert_from_betti(&m.betti(), s.nvars(), 8);
        for d in 0..=8 {
            prop_assert_eq!(h.value(d), ring.dim(d) as i64, "degree {}", d);
        }
    }
}
