use dirac_core::rothstein::{bracket, bracket_curved, to_curved, to_darboux, ConnectionData};
use dirac_core::sample::{random_function, random_homogeneous, Shape};
use dirac_core::{Bidegree, Element, GeneratorSet, Rational};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn parity(b: (u32, u32)) -> bool {
    (b.0 + b.1) % 2 == 1
}

fn signed(sign: bool, x: Element) -> Element {
    if sign {
        -x
    } else {
        x
    }
}

fn small_bidegree() -> impl Strategy<Value = (u32, u32)> {
    (0u32..=2, 0u32..=2)
}

fn sample(rng: &mut ChaCha8Rng, g: GeneratorSet, b: (u32, u32)) -> Element {
    random_homogeneous(rng, g, Shape::new(b.0, b.1).q_degree(2).terms(2))
}

fn random_connection(rng: &mut ChaCha8Rng, n: usize, k: usize) -> ConnectionData {
    let g = GeneratorSet::darboux(n, k);
    let mut conn = ConnectionData::zero(n, k);
    for i in 0..n {
        for a in 0..k {
            for b in 0..k {
                if rng.gen_bool(0.5) {
                    conn.set(i, a, b, random_function(rng, g, 1)).unwrap();
                }
            }
        }
    }
    conn
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn graded_antisymmetry(seed in any::<u64>(), n in 0usize..=2, k in 1usize..=2,
                           b1 in small_bidegree(), b2 in small_bidegree()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = GeneratorSet::darboux(n, k);
        let (x, y) = (sample(&mut rng, g, b1), sample(&mut rng, g, b2));
        let xy = bracket(&x, &y).unwrap();
        let yx = bracket(&y, &x).unwrap();
        prop_assert_eq!(xy, signed(!(parity(b1) && parity(b2)), yx));
    }

    #[test]
    fn graded_leibniz(seed in any::<u64>(), n in 0usize..=2, k in 1usize..=2,
                      b1 in small_bidegree(), b2 in small_bidegree(), b3 in small_bidegree()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = GeneratorSet::darboux(n, k);
        let (x, y, z) = (sample(&mut rng, g, b1), sample(&mut rng, g, b2), sample(&mut rng, g, b3));
        let lhs = bracket(&x, &(&y * &z)).unwrap();
        let rhs = &(&bracket(&x, &y).unwrap() * &z)
            + &signed(parity(b1) && parity(b2), &y * &bracket(&x, &z).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn graded_jacobi(seed in any::<u64>(), n in 0usize..=2, k in 1usize..=2,
                     b1 in small_bidegree(), b2 in small_bidegree(), b3 in small_bidegree()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = GeneratorSet::darboux(n, k);
        let (x, y, z) = (sample(&mut rng, g, b1), sample(&mut rng, g, b2), sample(&mut rng, g, b3));
        let lhs = bracket(&x, &bracket(&y, &z).unwrap()).unwrap();
        let rhs = &bracket(&bracket(&x, &y).unwrap(), &z).unwrap()
            + &signed(parity(b1) && parity(b2), bracket(&y, &bracket(&x, &z).unwrap()).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bracket_has_bidegree_minus_one_minus_one(seed in any::<u64>(), n in 0usize..=2, k in 1usize..=2,
                                                b1 in small_bidegree(), b2 in small_bidegree()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = GeneratorSet::darboux(n, k);
        let (x, y) = (sample(&mut rng, g, b1), sample(&mut rng, g, b2));
        let xy = bracket(&x, &y).unwrap();
        if !xy.is_zero() {
            prop_assert_eq!(xy.bidegree(), Bidegree::Pure(b1.0 + b2.0 - 1, b1.1 + b2.1 - 1));
            prop_assert!(xy.has_total_degree(b1.0 + b1.1 + b2.0 + b2.1 - 2));
        }
    }

    #[test]
    fn curved_bracket_matches_darboux_bracket(seed in any::<u64>(), n in 0usize..=2, k in 1usize..=2,
                                              b1 in small_bidegree(), b2 in small_bidegree()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let conn = random_connection(&mut rng, n, k);
        let c = GeneratorSet::curved(n, k);
        let (x, y) = (sample(&mut rng, c, b1), sample(&mut rng, c, b2));
        let curved = bracket_curved(&x, &y, &conn).unwrap();
        let xd = to_darboux(&x, &conn).unwrap();
        let yd = to_darboux(&y, &conn).unwrap();
        prop_assert_eq!(to_darboux(&curved, &conn).unwrap(), bracket(&xd, &yd).unwrap());
    }

    #[test]
    fn basis_change_round_trip(seed in any::<u64>(), n in 0usize..=2, k in 1usize..=2, b in small_bidegree()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let conn = random_connection(&mut rng, n, k);
        let x = sample(&mut rng, GeneratorSet::curved(n, k), b);
        prop_assert_eq!(to_curved(&to_darboux(&x, &conn).unwrap(), &conn).unwrap(), x.clone());
        let y = sample(&mut rng, GeneratorSet::darboux(n, k), b);
        prop_assert_eq!(to_darboux(&to_curved(&y, &conn).unwrap(), &conn).unwrap(), y);
    }

    #[test]
    fn bracket_of_sections_is_the_pairing(seed in any::<u64>(), k in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = GeneratorSet::darboux(0, k);
        let coeffs = |rng: &mut ChaCha8Rng| -> Vec<i64> { (0..2 * k).map(|_| rng.gen_range(-3..=3)).collect() };
        let (u, v) = (coeffs(&mut rng), coeffs(&mut rng));
        let section = |c: &[i64]| {
            let mut e = Element::zero(g);
            for a in 0..k {
                e += &Element::lower(g, a).scale_int(c[a]);
                e += &Element::upper(g, a).scale_int(c[k + a]);
            }
            e
        };
        let pairing: i64 = (0..k).map(|a| u[a] * v[k + a] + u[k + a] * v[a]).sum();
        let got = bracket(&section(&u), &section(&v)).unwrap();
        prop_assert_eq!(got, Element::constant(g, Rational::from_integer(pairing.into())));
    }
}

#[test]
fn flat_curved_bracket_is_the_darboux_bracket() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let c = GeneratorSet::curved(2, 2);
    let d = GeneratorSet::darboux(2, 2);
    let flat = ConnectionData::zero(2, 2);
    for _ in 0..50 {
        let x = sample(&mut rng, c, (1, 2));
        let y = sample(&mut rng, c, (2, 1));
        let curved = bracket_curved(&x, &y, &flat).unwrap();
        let xd = to_darboux(&x, &flat).unwrap();
        let yd = to_darboux(&y, &flat).unwrap();
        assert_eq!(to_darboux(&curved, &flat).unwrap(), bracket(&xd, &yd).unwrap());
        assert_eq!(xd.gens(), d);
    }
}
