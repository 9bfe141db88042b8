//! Reproducible random germs and map germs for the property checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::bipoly::BiPoly;
use crate::discriminant::{jacobian, MapGerm};
use crate::local::{intersection_multiplicity, IntersectionNumber};

/// Shape of generated polynomials: exponents with `1 <= i + j <= max_degree`, at most
/// `max_terms` terms, integer coefficients in `[-height, height] \ {0}`.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub max_degree: u32,
    pub max_terms: usize,
    pub height: i64,
}

impl Shape {
    pub const fn new(max_degree: u32, max_terms: usize, height: i64) -> Shape {
        Shape { max_degree, max_terms, height }
    }
}

pub struct Corpus {
    rng: ChaCha8Rng,
}

impl Corpus {
    pub fn new(seed: u64) -> Corpus {
        Corpus { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    fn coefficient(&mut self, height: i64) -> i64 {
        let c = self.rng.gen_range(1..=height);
        if self.rng.gen_bool(0.5) { c } else { -c }
    }

    /// A nonzero polynomial vanishing at the origin.
    pub fn germ(&mut self, shape: Shape) -> BiPoly {
        let mut exps: Vec<(u32, u32)> = (1..=shape.max_degree)
            .flat_map(|d| (0..=d).map(move |i| (i, d - i)))
            .collect();
        exps.shuffle(&mut self.rng);
        let n = self.rng.gen_range(1..=shape.max_terms.min(exps.len()));
        let terms: Vec<(u32, u32, i64)> = exps[..n].iter().map(|&(i, j)| (i, j, self.coefficient(shape.height))).collect();
        BiPoly::from_int_terms(&terms)
    }

    /// `1 + w` with `w` a random germ.
    pub fn unit(&mut self, shape: Shape) -> BiPoly {
        BiPoly::one(&crate::algebra::field::Field::rationals()).add(&self.germ(shape))
    }

    /// A pair of germs meeting in an isolated point: `i_0` finite.
    pub fn coprime_pair(&mut self, shape: Shape) -> (BiPoly, BiPoly) {
        loop {
            let (f, g) = (self.germ(shape), self.germ(shape));
            if matches!(intersection_multiplicity(&f, &g), Ok(IntersectionNumber::Finite(_))) {
                return (f, g);
            }
        }
    }

    /// A finite map germ with nonzero Jacobian, accepted by `keep`.
    pub fn map_germ(&mut self, f_shape: Shape, g_shape: Shape, keep: impl Fn(&MapGerm) -> bool) -> MapGerm {
        loop {
            let f = self.germ(f_shape);
            let g = self.germ(g_shape);
            let Ok(phi) = MapGerm::new(f, g) else { continue };
            if jacobian(&phi).is_ok() && keep(&phi) {
                return phi;
            }
        }
    }

    pub fn gen_range(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_and_reproducible() {
        let s = Shape::new(4, 3, 3);
        let a: Vec<BiPoly> = { let mut c = Corpus::new(0); (0..5).map(|_| c.germ(s)).collect() };
        let b: Vec<BiPoly> = { let mut c = Corpus::new(0); (0..5).map(|_| c.germ(s)).collect() };
        assert_eq!(a, b);
        for p in &a {
            assert!(p.constant_term().is_zero() && !p.is_zero());
            assert!(p.total_degree().unwrap() <= 4 && p.len() <= 3);
        }
    }

    #[test]
    fn pairs_are_coprime() {
        let mut c = Corpus::new(7);
        for _ in 0..5 {
            let (f, g) = c.coprime_pair(Shape::new(3, 3, 3));
            assert!(intersection_multiplicity(&f, &g).unwrap().finite().is_some());
        }
    }
}
