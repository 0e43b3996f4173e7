use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tdinv::algebras::Algebra;
use tdinv::fields::{Elem, Field, Place};
use tdinv::forms::invariants::{arf, signed_discriminant};
use tdinv::forms::{diagonal_bilinear, invariants, isometric, tensor, witt_index, QuadraticForm};
use tdinv::hermitian::{from_diagonal, tensor_bh};
use tdinv::linalg::{self, Matrix};

fn small(f: &Field, rng: &mut ChaCha8Rng) -> Elem {
    match f.elements() {
        Some(all) => all[rng.gen_range(0..all.len())].clone(),
        None => f.from_i64(rng.gen_range(-3..=3)),
    }
}

fn nonzero(f: &Field, rng: &mut ChaCha8Rng) -> Elem {
    loop {
        let x = small(f, rng);
        if !f.is_zero(&x) {
            return x;
        }
    }
}

/// Product of random transvections and a random transposition: det ±1.
fn unimodular(f: &Field, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let mut t = linalg::identity(f, n);
    if n < 2 {
        return t;
    }
    for _ in 0..3 * n {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let mut e = linalg::identity(f, n);
        e[i][j] = small(f, rng);
        t = linalg::mul(f, &t, &e);
    }
    let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
    for row in t.iter_mut() {
        row.swap(i, j);
    }
    t
}

fn random_form(f: &Field, n: usize, rng: &mut ChaCha8Rng) -> QuadraticForm {
    loop {
        let mut m = linalg::zeros(f, n, n);
        for i in 0..n {
            for j in i..n {
                m[i][j] = if i == j { nonzero(f, rng) } else { small(f, rng) };
            }
        }
        let q = QuadraticForm::new(f, m).unwrap();
        if q.is_nonsingular() {
            return q;
        }
    }
}

fn hasse_map(q: &QuadraticForm) -> BTreeMap<Place, i32> {
    invariants(q).unwrap().hasse_profile.into_iter().collect()
}

#[test]
fn invariants_survive_basis_change() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let fields = [
        Field::rationals(),
        Field::gf(5).unwrap(),
        Field::gf(9).unwrap(),
        Field::gf(4).unwrap(),
        Field::gf(2).unwrap(),
        Field::rational_functions(3).unwrap(),
    ];
    for f in &fields {
        for fixture in 0..6 {
            let n = if f.characteristic() == 2 { 2 + 2 * (fixture % 2) } else { 1 + fixture % 4 };
            let q = random_form(f, n, &mut rng);
            let inv = invariants(&q).unwrap();
            let index = witt_index(&q).unwrap();
            let hasse = hasse_map(&q);
            for _ in 0..20 {
                let p = q.transform(&unimodular(f, n, &mut rng));
                let pinv = invariants(&p).unwrap();
                assert_eq!(
                    (pinv.dim, pinv.kind, pinv.trivial, pinv.signature),
                    (inv.dim, inv.kind, inv.trivial, inv.signature)
                );
                assert_eq!(witt_index(&p).unwrap(), index, "{}", f.name());
                assert!(isometric(&q, &p).unwrap());
                if f.characteristic() == 2 {
                    let d = f.sub(&arf(&q).unwrap(), &arf(&p).unwrap());
                    assert_eq!(f.in_artin_schreier_image(&d), Some(true));
                } else {
                    let r = f.div(&signed_discriminant(&q).unwrap(), &signed_discriminant(&p).unwrap()).unwrap();
                    assert!(f.is_square(&r));
                    let other = hasse_map(&p);
                    for place in hasse.keys().chain(other.keys()) {
                        assert_eq!(hasse.get(place).unwrap_or(&1), other.get(place).unwrap_or(&1), "{place:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn arf_is_scale_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let fields =
        [Field::gf(2).unwrap(), Field::gf(4).unwrap(), Field::gf(8).unwrap(), Field::rational_functions(2).unwrap()];
    for f in &fields {
        for k in 0..10 {
            let q = random_form(f, 2 + 2 * (k % 2), &mut rng);
            let c = if f.is_finite() {
                nonzero(f, &mut rng)
            } else {
                let t = f.generator().unwrap();
                f.add(&f.pow(&t, rng.gen_range(1..3)), &f.from_i64(rng.gen_range(0..2)))
            };
            let d = f.sub(&arf(&q).unwrap(), &arf(&q.scale(&c).unwrap()).unwrap());
            // finite fields decide membership in ℘(F); over F_2(t) the
            // difference must at least not be refuted
            match f.in_artin_schreier_image(&d) {
                Some(v) => assert!(v, "{} scale by {}", f.name(), f.format(&c)),
                None => assert!(!f.is_finite()),
            }
        }
    }
}

#[test]
fn trace_form_is_functorial_under_tensor() {
    let qq = Field::rationals();
    let f3 = Field::gf(3).unwrap();
    let f2 = Field::gf(2).unwrap();
    let bases = [
        Algebra::quaternion(&qq, &qq.from_i64(-1), &qq.from_i64(2)).unwrap(),
        Algebra::etale(&qq, &qq.from_i64(-1)).unwrap(),
        Algebra::etale(&f3, &f3.one()).unwrap(),
        Algebra::quaternion(&f3, &f3.one(), &f3.one()).unwrap(),
        Algebra::etale(&f2, &f2.one()).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for d in &bases {
        let f = d.field();
        for _ in 0..6 {
            let h_entries: Vec<Elem> = (0..rng.gen_range(1..=2)).map(|_| nonzero(f, &mut rng)).collect();
            let p_entries: Vec<Elem> = (0..rng.gen_range(1..=2)).map(|_| nonzero(f, &mut rng)).collect();
            let h = from_diagonal(d, &h_entries).unwrap();
            let phi = diagonal_bilinear(f, &p_entries).unwrap();
            let lhs = tensor_bh(&phi, &h).unwrap().trace_form().unwrap();
            let rhs = tensor(&phi, &h.trace_form().unwrap()).unwrap();
            assert!(isometric(&lhs, &rhs).unwrap(), "{}", d.name());
        }
    }
}
