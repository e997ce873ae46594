use paragrassmann::kernel::{kernel_ah, kernel_bh, kernel_pg, kernel_pg_from, reproduce_pg};
use paragrassmann::pg::basis_order;
use paragrassmann::{random, GaussianRational, GramMatrix, PgElement, QMode, Ring, Scalar, TensorElement, Var, WeightSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rings(l: usize) -> Vec<Ring> {
    vec![
        Ring::symbolic(l).unwrap(),
        Ring::symbolic(l).unwrap().with_q_mode(QMode::Real).unwrap(),
        Ring::symbolic(l).unwrap().with_q_mode(QMode::Numeric(GaussianRational::from_parts((1, 2), (1, 3)))).unwrap(),
    ]
}

fn q_free(t: &TensorElement) -> bool {
    t.terms().all(|(_, _, c)| c.terms().all(|(m, _)| m.q() == 0 && m.qb() == 0))
}

#[test]
fn only_the_top_weight_divides() {
    for l in 2..=5 {
        let r = Ring::symbolic(l).unwrap();
        let k = kernel_pg(&r).unwrap();
        for (_, _, c) in k.terms() {
            for (m, _) in c.terms() {
                for n in 0..l - 1 {
                    assert!(m.w(n) >= 0, "l={l}: w{n} in a denominator of {c}");
                }
                assert!(m.u_exponents().iter().all(|&e| e == 0));
            }
        }
    }
}

#[test]
fn kernels_never_involve_q() {
    for l in 2..=4 {
        for r in rings(l) {
            let k = kernel_pg(&r).unwrap();
            assert!(q_free(&k));
            assert!(q_free(&kernel_bh(&r).unwrap()) && q_free(&kernel_ah(&r).unwrap()));
            // same coefficients in every q mode
            let sym = kernel_pg(&Ring::symbolic(l).unwrap()).unwrap();
            assert_eq!(k.n_terms(), sym.n_terms());
        }
    }
}

#[test]
fn full_space_kernel_is_unique() {
    for l in 2..=5 {
        let g = GramMatrix::new(&Ring::symbolic(l).unwrap());
        assert_eq!(g.entries().rank().unwrap(), l * l);
    }
    for l in 2..=3 {
        let r = Ring::symbolic(l).unwrap();
        let k = kernel_pg(&r).unwrap();
        let basis: Vec<PgElement> =
            basis_order(l).into_iter().map(|(i, j)| PgElement::basis(&r, i, j).unwrap()).collect();
        for &left in &basis_order(l) {
            for &right in &basis_order(l) {
                let mut bad = k.clone();
                bad.add_term(left, right, Scalar::one(&r)).unwrap();
                assert!(basis.iter().any(|f| reproduce_pg(&bad, f).unwrap() != *f), "perturbing {left:?} (x) {right:?}");
            }
        }
    }
}

#[test]
fn reproduces_random_elements() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for l in 2..=4 {
        for r in rings(l) {
            let k = kernel_pg(&r).unwrap();
            for _ in 0..10 {
                let f = random::element(&mut rng, &r);
                assert_eq!(reproduce_pg(&k, &f.clone().with_var(Var::eta())).unwrap(), f);
            }
        }
    }
}

#[test]
fn numeric_weights_of_either_sign() {
    // the kernel exists whenever w_{l-1} != 0, including indefinite weights
    for ws in [[1, 2, 3], [-1, 2, 3], [4, -5, 2], [3, 7, -2]] {
        let r = Ring::new(QMode::Real, WeightSpec::from_ints(&ws).unwrap()).unwrap();
        let g = GramMatrix::new(&r);
        let k = kernel_pg_from(&g, true).unwrap();
        assert_eq!(k, kernel_pg(&r).unwrap());
        for (i, j) in basis_order(3) {
            let f = PgElement::basis(&r, i, j).unwrap();
            assert_eq!(reproduce_pg(&k, &f).unwrap(), f);
        }
    }
}
