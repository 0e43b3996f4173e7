use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use tdinv::algebras::Algebra;
use tdinv::cli::grammar::{parse_literal, AlgLit, Expr, FieldLit, FormExpr, Literal, ShapeLit};
use tdinv::fields::hilbert::hilbert_rat;
use tdinv::fields::oracle::decide_isotropic;
use tdinv::fields::{Elem, Field, Place};
use tdinv::forms::QuadraticForm;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

fn nonzero_small() -> impl Strategy<Value = i64> {
    (-40i64..=40).prop_filter("nonzero", |x| *x != 0)
}

fn places_of(nums: &[i64]) -> Vec<Place> {
    let mut out = vec![Place::Real];
    for p in PRIMES {
        out.push(Place::prime(p).unwrap());
    }
    for n in nums {
        let mut m = n.unsigned_abs();
        let mut d = 2;
        while m > 1 {
            if m % d == 0 {
                let pl = Place::prime(d).unwrap();
                if !out.contains(&pl) {
                    out.push(pl);
                }
                m /= d;
            } else {
                d += 1;
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hilbert_symmetric_and_bimultiplicative(a in nonzero_small(), b in nonzero_small(), c in nonzero_small()) {
        for v in places_of(&[a, b, c]) {
            let ab = hilbert_rat(&rat(a), &rat(b), &v).unwrap();
            prop_assert_eq!(ab, hilbert_rat(&rat(b), &rat(a), &v).unwrap());
            let ac = hilbert_rat(&rat(a), &rat(c), &v).unwrap();
            let abc = hilbert_rat(&rat(a), &rat(b * c), &v).unwrap();
            prop_assert_eq!(abc, ab * ac, "({},{}·{}) at {}", a, b, c, v.label());
            // (a, −a) = 1
            prop_assert_eq!(hilbert_rat(&rat(a), &rat(-a), &v).unwrap(), 1);
        }
    }

    #[test]
    fn hilbert_product_formula(a in nonzero_small(), b in nonzero_small()) {
        let prod: i32 = places_of(&[a, b]).iter().map(|v| hilbert_rat(&rat(a), &rat(b), v).unwrap()).product();
        prop_assert_eq!(prod, 1);
    }

    #[test]
    fn hilbert_at_odd_prime_matches_euler_criterion(p_idx in 1usize..6, u in 1i64..200) {
        // (p, u)_p = (u/p) for a unit u
        let p = PRIMES[p_idx];
        prop_assume!(u as u64 % p != 0);
        let euler = {
            let mut r = 1u64;
            let mut base = (u as u64) % p;
            let mut e = (p - 1) / 2;
            while e > 0 {
                if e & 1 == 1 { r = r * base % p; }
                base = base * base % p;
                e >>= 1;
            }
            if r == 1 { 1 } else { -1 }
        };
        let v = Place::prime(p).unwrap();
        prop_assert_eq!(hilbert_rat(&rat(p as i64), &rat(u), &v).unwrap(), euler);
        prop_assert_eq!(hilbert_rat(&rat(u), &rat(u + p as i64 * 7), &v).unwrap(), 1);
    }
}

fn field_strategy() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9])
}

fn brute_isotropic(q: &QuadraticForm) -> bool {
    let f = q.field();
    let elems = f.elements().unwrap();
    let n = q.dim();
    let mut idx = vec![0usize; n];
    loop {
        let x: Vec<Elem> = idx.iter().map(|i| elems[*i].clone()).collect();
        if x.iter().any(|e| !f.is_zero(e)) && f.is_zero(&q.eval(&x)) {
            return true;
        }
        let mut k = 0;
        loop {
            if k == n {
                return false;
            }
            idx[k] += 1;
            if idx[k] < elems.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn upper(f: &Field, n: usize, raw: &[u64]) -> Vec<Vec<Elem>> {
    let q = f.cardinality().unwrap();
    let elems = f.elements().unwrap();
    let mut m = vec![vec![f.zero(); n]; n];
    let mut it = raw.iter();
    for i in 0..n {
        for j in i..n {
            m[i][j] = elems[(*it.next().unwrap() % q) as usize].clone();
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn finite_oracle_matches_enumeration(q in field_strategy(), n in 1usize..=4, raw in prop::collection::vec(0u64..1000, 10)) {
        let f = Field::gf(q).unwrap();
        prop_assume!(f.cardinality().unwrap().pow(n as u32) <= 6600);
        let form = QuadraticForm::new(&f, upper(&f, n, &raw)).unwrap();
        prop_assume!(form.is_nonsingular());
        prop_assert_eq!(decide_isotropic(&form).unwrap(), Some(brute_isotropic(&form)));
    }

    #[test]
    fn polar_identity(q in field_strategy(), n in 1usize..=4, raw in prop::collection::vec(0u64..1000, 10), xs in prop::collection::vec(0u64..1000, 8)) {
        let f = Field::gf(q).unwrap();
        let form = QuadraticForm::new(&f, upper(&f, n, &raw)).unwrap();
        let elems = f.elements().unwrap();
        let pick = |k: usize| elems[(xs[k] % elems.len() as u64) as usize].clone();
        let x: Vec<Elem> = (0..n).map(pick).collect();
        let y: Vec<Elem> = (0..n).map(|i| pick(4 + i)).collect();
        let s: Vec<Elem> = x.iter().zip(&y).map(|(a, b)| f.add(a, b)).collect();
        let expected = f.sub(&f.sub(&form.eval(&s), &form.eval(&x)), &form.eval(&y));
        prop_assert_eq!(form.polar(&x, &y), expected);
        // b(x, x) = 2 q(x)
        prop_assert_eq!(form.polar(&x, &x), f.add(&form.eval(&x), &form.eval(&x)));
    }

    #[test]
    fn polar_identity_rationals(diag in prop::collection::vec(-9i64..9, 3), off in prop::collection::vec(-9i64..9, 3), x in prop::collection::vec(-9i64..9, 3), y in prop::collection::vec(-9i64..9, 3)) {
        let f = Field::rationals();
        let e = |v: i64| f.from_i64(v);
        let m = vec![
            vec![e(diag[0]), e(off[0]), e(off[1])],
            vec![f.zero(), e(diag[1]), e(off[2])],
            vec![f.zero(), f.zero(), e(diag[2])],
        ];
        let form = QuadraticForm::new(&f, m).unwrap();
        let xv: Vec<Elem> = x.iter().map(|v| e(*v)).collect();
        let yv: Vec<Elem> = y.iter().map(|v| e(*v)).collect();
        let s: Vec<Elem> = x.iter().zip(&y).map(|(a, b)| e(a + b)).collect();
        let expected = f.sub(&f.sub(&form.eval(&s), &form.eval(&xv)), &form.eval(&yv));
        prop_assert_eq!(form.polar(&xv, &yv), expected);
    }
}

/// Integer zero of Σ a_i x_i² with |x_i| ≤ h, found by enumeration.
fn brute_rational_zero(a: &[i64], h: i64) -> bool {
    let n = a.len();
    let mut x = vec![-h; n];
    loop {
        if x.iter().any(|v| *v != 0) && a.iter().zip(&x).map(|(c, v)| c * v * v).sum::<i64>() == 0 {
            return true;
        }
        let mut k = 0;
        loop {
            if k == n {
                return false;
            }
            x[k] += 1;
            if x[k] <= h {
                break;
            }
            x[k] = -h;
            k += 1;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn rational_oracle_against_bounded_search(a in prop::collection::vec((-12i64..=12).prop_filter("nonzero", |x| *x != 0), 2..=4)) {
        let f = Field::rationals();
        let entries: Vec<Elem> = a.iter().map(|v| f.from_i64(*v)).collect();
        let q = QuadraticForm::diagonal(&f, &entries).unwrap();
        let decided = decide_isotropic(&q).unwrap().expect("decided over QQ");
        let found = brute_rational_zero(&a, 12);
        // a small zero proves isotropy; anisotropy forbids any zero
        if found {
            prop_assert!(decided, "{:?}: brute force found a zero", a);
        }
        if !decided {
            prop_assert!(!found);
        }
        // definite forms are anisotropic
        if a.iter().all(|v| *v > 0) || a.iter().all(|v| *v < 0) {
            prop_assert!(!decided);
        }
    }

    #[test]
    fn binary_rational_isotropy_is_square_test(a in 1i64..60, b in 1i64..60) {
        // ⟨a, −b⟩ is isotropic iff ab is a square
        let f = Field::rationals();
        let q = QuadraticForm::diagonal(&f, &[f.from_i64(a), f.from_i64(-b)]).unwrap();
        let ab = a * b;
        let r = (ab as f64).sqrt().round() as i64;
        prop_assert_eq!(decide_isotropic(&q).unwrap(), Some(r * r == ab));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reduced_norm_is_multiplicative(
        field in prop::sample::select(vec![0u64, 5, 9]),
        a in -6i64..6, b in prop::sample::select(vec![-7i64, -3, -2, -1, 1, 2, 3, 5]),
        x in prop::collection::vec(-9i64..9, 4), y in prop::collection::vec(-9i64..9, 4),
    ) {
        let f = if field == 0 { Field::rationals() } else { Field::gf(field).unwrap() };
        let alg = match Algebra::quaternion(&f, &f.from_i64(a), &f.from_i64(b)) {
            Ok(q) => q,
            Err(_) => return Ok(()),
        };
        let ex = alg.element(x.iter().map(|v| f.from_i64(*v)).collect()).unwrap();
        let ey = alg.element(y.iter().map(|v| f.from_i64(*v)).collect()).unwrap();
        let lhs = ex.mul(&ey).unwrap().nrd().unwrap();
        prop_assert_eq!(lhs, f.mul(&ex.nrd().unwrap(), &ey.nrd().unwrap()));
        // Nrd agrees with the norm form
        let n = alg.norm_form();
        prop_assert_eq!(n.eval(ex.coords()), ex.nrd().unwrap());
    }
}

fn expr_strategy() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0u32..30).prop_map(|n| Expr::Int(BigInt::from(n))),
        prop::sample::select(vec!['z', 't', 'u', 'v', 'w']).prop_map(Expr::Var),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
            (inner, 0u32..5).prop_map(|(a, k)| Expr::Pow(Box::new(a), k)),
        ]
    })
}

fn field_lit() -> impl Strategy<Value = FieldLit> {
    prop_oneof![(2u64..200).prop_map(FieldLit::Gf), Just(FieldLit::Rationals), (2u32..20).prop_map(FieldLit::FpT),]
}

fn shape_lit() -> impl Strategy<Value = ShapeLit> {
    prop_oneof![
        (expr_strategy(), expr_strategy()).prop_map(|(a, b)| ShapeLit::Quat { a, b }),
        expr_strategy().prop_map(|a| ShapeLit::Etale { a }),
        Just(ShapeLit::Split),
    ]
}

fn exprs(max: usize) -> impl Strategy<Value = Vec<Expr>> {
    prop::collection::vec(expr_strategy(), 0..max)
}

fn form_strategy() -> impl Strategy<Value = FormExpr> {
    let leaf = prop_oneof![
        exprs(4).prop_map(FormExpr::Diag),
        (0usize..4).prop_map(FormExpr::Hyp),
        (expr_strategy(), expr_strategy()).prop_map(|(a, c)| FormExpr::Binq(a, c)),
        (expr_strategy(), exprs(3)).prop_map(|(a, s)| FormExpr::PfisterQ(a, s)),
        exprs(3).prop_map(FormExpr::PfisterB),
        shape_lit().prop_map(FormExpr::Norm),
        (0usize..3)
            .prop_flat_map(|n| prop::collection::vec(prop::collection::vec(expr_strategy(), n), n))
            .prop_map(FormExpr::Gram),
    ];
    leaf.prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| FormExpr::Tensor(Box::new(a), Box::new(b))),
            prop::collection::vec(inner.clone(), 1..3).prop_map(FormExpr::Sum),
            (expr_strategy(), inner).prop_map(|(c, q)| FormExpr::Scale(c, Box::new(q))),
        ]
    })
}

fn literal_strategy() -> impl Strategy<Value = Literal> {
    prop_oneof![
        field_lit().prop_map(Literal::Field),
        (shape_lit(), field_lit()).prop_map(|(shape, field)| Literal::Algebra(AlgLit { shape, field })),
        (form_strategy(), field_lit()).prop_map(|(q, k)| Literal::QForm(q, k)),
        (form_strategy(), shape_lit(), field_lit())
            .prop_map(|(h, shape, field)| Literal::Herm(h, AlgLit { shape, field })),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn grammar_round_trip(lit in literal_strategy()) {
        let text = lit.to_string();
        let back = parse_literal(&text).unwrap();
        prop_assert_eq!(&back, &lit, "{}", text);
        prop_assert_eq!(back.to_string(), text);
    }
}
