//! Seeded random elements for randomized checks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::superalg::{rat, Element, GeneratorSet, Monomial};

/// Shape of a random homogeneous element.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub bidegree: (u32, u32),
    /// Largest total degree of the base-coordinate factor.
    pub max_q_degree: u32,
    pub max_terms: usize,
    /// Numerators are drawn from `-max_coeff..=max_coeff`.
    pub max_coeff: i64,
    /// Allow denominators 1..=max_den.
    pub max_den: i64,
}

impl Shape {
    pub fn new(r: u32, s: u32) -> Self {
        Shape { bidegree: (r, s), max_q_degree: 2, max_terms: 3, max_coeff: 3, max_den: 2 }
    }

    pub fn q_degree(mut self, d: u32) -> Self {
        self.max_q_degree = d;
        self
    }

    pub fn terms(mut self, t: usize) -> Self {
        self.max_terms = t;
        self
    }
}

fn random_composition<R: Rng>(rng: &mut R, slots: usize, total: u32) -> Vec<u32> {
    let mut v = vec![0u32; slots];
    if slots == 0 {
        return v;
    }
    for _ in 0..total {
        v[rng.gen_range(0..slots)] += 1;
    }
    v
}

fn random_subset<R: Rng>(rng: &mut R, size: usize, count: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..size).collect();
    idx.shuffle(rng);
    idx.truncate(count);
    idx
}

/// A random element of the given bidegree. Returns zero when no monomial of
/// that bidegree exists over `gens`.
pub fn random_homogeneous<R: Rng>(rng: &mut R, gens: GeneratorSet, shape: Shape) -> Element {
    let (r, s) = shape.bidegree;
    let (n, k) = (gens.n(), gens.k());
    let feasible: Vec<u32> = (0..=r.min(s))
        .filter(|&m| (m == 0 || n > 0) && (r - m) as usize <= k && (s - m) as usize <= k)
        .collect();
    if feasible.is_empty() {
        return Element::zero(gens);
    }
    let terms = rng.gen_range(1..=shape.max_terms.max(1));
    let mut out = Element::zero(gens);
    for _ in 0..terms {
        let m = *feasible.choose(rng).expect("nonempty");
        let lower = random_subset(rng, k, (r - m) as usize);
        let upper = random_subset(rng, k, (s - m) as usize);
        let mut word = 0u64;
        for a in lower {
            word |= 1 << a;
        }
        for a in upper {
            word |= 1 << (k + a);
        }
        let qdeg = if n == 0 { 0 } else { rng.gen_range(0..=shape.max_q_degree) };
        let q = random_composition(rng, n, qdeg);
        let p = random_composition(rng, n, m);
        let num = loop {
            let c = rng.gen_range(-shape.max_coeff..=shape.max_coeff);
            if c != 0 {
                break c;
            }
        };
        let den = rng.gen_range(1..=shape.max_den.max(1));
        out += &Element::monomial(gens, Monomial::new(&q, &p, word), rat(num, den));
    }
    out
}

/// A random polynomial in the base coordinates.
pub fn random_function<R: Rng>(rng: &mut R, gens: GeneratorSet, max_q_degree: u32) -> Element {
    random_homogeneous(rng, gens, Shape::new(0, 0).q_degree(max_q_degree))
}

/// A random section of `E = L ⊕ L*` (total degree one).
pub fn random_section<R: Rng>(rng: &mut R, gens: GeneratorSet, max_q_degree: u32) -> Element {
    let a = random_homogeneous(rng, gens, Shape::new(1, 0).q_degree(max_q_degree));
    let b = random_homogeneous(rng, gens, Shape::new(0, 1).q_degree(max_q_degree));
    &a + &b
}
