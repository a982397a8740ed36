use linksig_core::hermitian::{inertia, integer_inertia, solve, ComplexMatrix, Solution};
use num_complex::Complex64;
use proptest::prelude::*;

const TAU: f64 = 1e-9;

fn c(re: i32, im: i32) -> Complex64 {
    Complex64::new(re as f64, im as f64)
}

fn hermitian(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    proptest::collection::vec((-9i32..=9, -9i32..=9), n * n).prop_map(move |v| {
        let mut rows = vec![vec![c(0, 0); n]; n];
        for i in 0..n {
            rows[i][i] = c(v[i * n + i].0, 0);
            for j in (i + 1)..n {
                let (re, im) = v[i * n + j];
                rows[i][j] = c(re, im);
                rows[j][i] = c(re, -im);
            }
        }
        ComplexMatrix::from_rows(&rows).unwrap()
    })
}

fn unit_upper(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    proptest::collection::vec((-2i32..=2, -2i32..=2), n * n).prop_map(move |v| {
        let mut rows = vec![vec![c(0, 0); n]; n];
        for i in 0..n {
            rows[i][i] = c(1, 0);
            for j in (i + 1)..n {
                rows[i][j] = c(v[i * n + j].0, v[i * n + j].1);
            }
        }
        ComplexMatrix::from_rows(&rows).unwrap()
    })
}

fn sym_int(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    proptest::collection::vec(-5i64..=5, n * n).prop_map(move |v| {
        let mut m = vec![vec![0; n]; n];
        for i in 0..n {
            for j in i..n {
                m[i][j] = v[i * n + j];
                m[j][i] = v[i * n + j];
            }
        }
        m
    })
}

fn sig(m: &ComplexMatrix) -> (i64, usize, bool) {
    let r = inertia(m, TAU).unwrap();
    (r.signature, r.nullity, r.certified)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, ..ProptestConfig::default() })]

    #[test]
    fn congruence_preserves_inertia((m, p) in (1usize..=5).prop_flat_map(|n| (hermitian(n), unit_upper(n)))) {
        let cm = p.conj_transpose().matmul(&m).unwrap().matmul(&p).unwrap();
        let (a, b) = (sig(&m), sig(&cm));
        if a.2 && b.2 {
            prop_assert_eq!((a.0, a.1), (b.0, b.1));
        }
    }

    #[test]
    fn direct_sum_adds(a in hermitian(3), b in hermitian(2)) {
        let (x, y, z) = (sig(&a), sig(&b), sig(&a.direct_sum(&b)));
        if x.2 && y.2 && z.2 {
            prop_assert_eq!((z.0, z.1), (x.0 + y.0, x.1 + y.1));
        }
    }

    #[test]
    fn negation_flips_signature(a in (1usize..=5).prop_flat_map(hermitian)) {
        let (x, n) = (sig(&a), sig(&a.scale(c(-1, 0))));
        prop_assert_eq!((n.0, n.1), (-x.0, x.1));
    }

    #[test]
    fn diagonal_counts_signs(d in proptest::collection::vec(-4i32..=4, 0..8)) {
        let m = ComplexMatrix::diagonal(&d.iter().map(|&x| x as f64).collect::<Vec<_>>());
        let r = inertia(&m, TAU).unwrap();
        let count = |f: fn(i32) -> bool| d.iter().filter(|&&x| f(x)).count();
        prop_assert_eq!(r.signature, count(|x| x > 0) as i64 - count(|x| x < 0) as i64);
        prop_assert_eq!(r.nullity, count(|x| x == 0));
        prop_assert!(r.certified);
    }

    #[test]
    fn exact_and_float_inertia_agree(m in (1usize..=5).prop_flat_map(sym_int)) {
        let (s, z) = integer_inertia(&m).unwrap();
        let f = m.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect::<Vec<Vec<f64>>>();
        let r = inertia(&ComplexMatrix::from_real(&f).unwrap(), TAU).unwrap();
        if r.certified {
            prop_assert_eq!((r.signature, r.nullity), (s, z));
        }
    }

    #[test]
    fn solutions_satisfy_the_system(m in (1usize..=4).prop_flat_map(hermitian), seed in proptest::collection::vec(-3i32..=3, 4)) {
        let n = m.rows();
        let x: Vec<Complex64> = seed.iter().take(n).map(|&v| c(v, 1)).collect();
        let b = m.mul_vec(&x).unwrap();
        let check = |y: &[Complex64]| {
            let r = m.mul_vec(y).unwrap();
            r.iter().zip(&b).all(|(u, v)| (u - v).norm() <= 1e-8 * (1.0 + m.norm_inf() * 10.0))
        };
        match solve(&m, &b, TAU).unwrap() {
            Solution::Unique(y) => prop_assert!(check(&y)),
            Solution::NonUnique { particular, kernel } => {
                prop_assert!(check(&particular));
                for k in kernel {
                    let r = m.mul_vec(&k).unwrap();
                    prop_assert!(r.iter().all(|z| z.norm() <= 1e-8 * (1.0 + m.norm_inf())));
                }
            }
            Solution::NoSolution => prop_assert!(false, "consistent system reported unsolvable"),
        }
    }
}
