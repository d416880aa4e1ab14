#![allow(clippy::needless_range_loop)]

mod common;

use fpmc::ample::{canonical_form, make_ample, make_ample_minimal, AmpleCertificate};
use fpmc::blowup::{run_script, BlowupScript};
use fpmc::cone::certify_fpmc;
use fpmc::config::CurveConfiguration;
use fpmc::io::{parse_config, serialize_config};
use fpmc::lattice::{enumerate_bounded_classes, Lattice};
use fpmc::linalg::{rat, smith_normal_form, IntSymMatrix, Signature};
use fpmc::roots::{fiber_root_lattice, mw_group, FiberTypeList};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::*;

fn curve_config(g: &IntSymMatrix, genera: &[u64]) -> CurveConfiguration {
    CurveConfiguration::new(
        "prop",
        (0..g.dim()).map(|i| (format!("E{i}"), genera[i])).collect(),
        g.rows(),
        None,
    )
    .unwrap()
}

fn connected_hyperbolic_curves(rng: &mut StdRng, n: usize) -> IntSymMatrix {
    loop {
        let mut rows = vec![vec![0i64; n]; n];
        for i in 0..n {
            rows[i][i] = -rng.gen_range(1..=3);
            for j in (i + 1)..n {
                let v = rng.gen_range(0..=4);
                rows[i][j] = v;
                rows[j][i] = v;
            }
        }
        let g = IntSymMatrix::new(rows).unwrap();
        let connected = fpmc::config::connected_components(&g, &(0..n).collect::<Vec<_>>()).len() == 1;
        if connected && g.signature() == Signature::new(1, n - 1, 0) {
            return g;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn signature_is_congruence_invariant(seed in any::<u64>(), n in 2usize..6) {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = random_symmetric(&mut rng, n, -5, 5);
        let u = random_unimodular(&mut rng, n, 8);
        if let Some(h) = congruent(&g, &u) {
            prop_assert_eq!(g.signature(), h.signature());
            prop_assert_eq!(g.det(), h.det());
        }
    }

    #[test]
    fn smith_form_is_exact(seed in any::<u64>(), r in 1usize..5, c in 1usize..5) {
        let mut rng = StdRng::seed_from_u64(seed);
        let m = fpmc::linalg::IntMatrix::from_fn(r, c, |_, _| BigInt::from(rng.gen_range(-6i64..=6)));
        let s = smith_normal_form(&m);
        prop_assert!(s.u.mul(&m).mul(&s.v) == s.s);
        prop_assert!(s.u.det().abs() == BigInt::from(1));
        prop_assert!(s.v.det().abs() == BigInt::from(1));
        let d = s.invariant_factors();
        for w in d.windows(2) {
            prop_assert!(!w[0].is_negative());
            if w[0].is_zero() {
                prop_assert!(w[1].is_zero());
            } else {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
        }
        for i in 0..r {
            for j in 0..c {
                if i != j {
                    prop_assert!(s.s.get(i, j).is_zero());
                }
            }
        }
    }

    #[test]
    fn certification_ignores_curve_order(seed in any::<u64>(), n in 3usize..5) {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = connected_hyperbolic_curves(&mut rng, n);
        let cfg = curve_config(&g, &vec![0; n]);
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let a = certify_fpmc(&cfg).unwrap();
        let b = certify_fpmc(&cfg.permuted(&perm)).unwrap();
        prop_assert_eq!(a.status, b.status);
        prop_assert_eq!(a.rays.len(), b.rays.len());
        let mut sa: Vec<BigInt> = a.rays.squares.clone();
        let mut sb: Vec<BigInt> = b.rays.squares.clone();
        sa.sort();
        sb.sort();
        prop_assert_eq!(sa, sb);
        prop_assert!(canonical_form(&g) == canonical_form(&g.permuted(&perm)));
    }

    #[test]
    fn ample_certificates_verify(seed in any::<u64>(), n in 2usize..5) {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = connected_hyperbolic_curves(&mut rng, n);
        let cert = make_ample(&g).unwrap();
        prop_assert!(cert.verify(&g));
        let min = make_ample_minimal(&g).unwrap();
        prop_assert!(min.verify(&g));
        prop_assert!(min.square <= cert.square);
        // nothing in a small box beats the minimal square
        if n <= 3 {
            for code in 0..6usize.pow(n as u32) {
                let v: Vec<BigInt> = (0..n).map(|i| BigInt::from(code / 6usize.pow(i as u32) % 6 + 1)).collect();
                if let Some(c) = AmpleCertificate::certify(&g, v, "box") {
                    prop_assert!(c.square >= min.square);
                }
            }
        }
    }

    #[test]
    fn blowup_drops_k_square(seed in any::<u64>(), steps in 1usize..7) {
        let mut rng = StdRng::seed_from_u64(seed);
        let script = random_script(&mut rng, steps);
        let seed_only = BlowupScript { steps: Vec::new(), ..script.clone() };
        let k0 = run_script(&seed_only).unwrap().k_square;
        let r = run_script(&script).unwrap();
        prop_assert_eq!(r.k_square, k0 - steps as i64);
        prop_assert_eq!(r.state.rank(), run_script(&seed_only).unwrap().state.rank() + steps);
        let k = r.config.canonical_class().unwrap();
        let want: Vec<_> = r.canonical_products.iter().map(|&x| rat(x)).collect();
        prop_assert_eq!(k.products, want);
        let back = BlowupScript::from_json(&script.to_json()).unwrap();
        prop_assert_eq!(back, script);
    }

    #[test]
    fn bounded_classes_match_box(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let n = rng.gen_range(2..=3);
        let (g, k) = loop {
            let g = random_symmetric(&mut rng, n, -3, 3);
            if g.signature() != Signature::new(1, n - 1, 0) {
                continue;
            }
            let k: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
            let kb: Vec<BigInt> = k.iter().map(|&x| BigInt::from(x)).collect();
            if g.bilinear(&kb, &kb).is_positive() {
                break (g, k);
            }
        };
        let kr: Vec<_> = k.iter().map(|&x| rat(x)).collect();
        let l = Lattice::from_gram(g.clone()).unwrap();
        let lib: Vec<Vec<i64>> = enumerate_bounded_classes(&l, &kr, 1, 1).unwrap().iter().map(|v| to_i64s(v)).collect();
        let r = if n == 2 { 30 } else { 10 };
        let inside: Vec<Vec<i64>> = lib.iter().filter(|v| v.iter().all(|x| x.abs() <= r)).cloned().collect();
        prop_assert_eq!(inside, bounded_classes_box(&g, &kr, 1, 1, r));
    }

    #[test]
    fn config_json_round_trip(seed in any::<u64>(), n in 2usize..6) {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = connected_hyperbolic_curves(&mut rng, n);
        let genera: Vec<u64> = (0..n).map(|_| rng.gen_range(0..3)).collect();
        let cfg = curve_config(&g, &genera);
        let back = parse_config(&serialize_config(&cfg)).unwrap();
        prop_assert_eq!(back.gram(), cfg.gram());
        prop_assert_eq!(back.genera(), genera);
        prop_assert_eq!(back.names(), cfg.names());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn mw_order_squares_to_determinant(pick in proptest::sample::subsequence(
        vec!["A1~", "A2~", "A3~", "A4~", "D4~", "E6~", "A1~", "A2~"], 1..4)) {
        let list: FiberTypeList = pick.join("+").parse().unwrap();
        if list.total_rank() == 8 {
            if let Ok(g) = mw_group(&list) {
                let det = fiber_root_lattice(&list).det().abs();
                prop_assert_eq!(BigInt::from(g.order) * BigInt::from(g.order), det);
            }
        }
    }
}
