//! Seeded random generators for arrangements and polynomials. Everything is
//! deterministic in the seed, so any randomized verdict can be reproduced.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arrangement::{Arrangement, CheckMode};
use crate::exactalg::{rat, Rational, Rationals};
use crate::mpoly::{MPoly, Monomial, Var};

fn random_covector(n: usize, rng: &mut ChaCha8Rng) -> Vec<Rational> {
    loop {
        let v: Vec<Rational> = (0..=n).map(|_| rat(rng.gen_range(-9..=9), 1)).collect();
        if v.iter().any(|x| !num_traits::Zero::is_zero(x)) {
            return v;
        }
    }
}

fn random_arrangement_where(
    n: usize,
    d: usize,
    seed: u64,
    accept: impl Fn(&Arrangement) -> bool,
) -> Arrangement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let covs: Vec<Vec<Rational>> = (0..d).map(|_| random_covector(n, &mut rng)).collect();
        if let Ok(arr) = Arrangement::new(n, covs, None) {
            if accept(&arr) {
                return arr;
            }
        }
    }
}

/// A random rational arrangement in linear general position (rejection
/// sampled; degenerate draws are rare for integer entries in a box).
pub fn random_linear_general_arrangement(n: usize, d: usize, seed: u64) -> Arrangement {
    random_arrangement_where(n, d, seed, |arr| {
        arr.check_linear_general_position(CheckMode::Exhaustive).passed()
    })
}

/// A random rational arrangement in general position with respect to both
/// hyperplanes and quadrics.
pub fn random_quadric_general_arrangement(n: usize, d: usize, seed: u64) -> Arrangement {
    random_arrangement_where(n, d, seed, |arr| {
        arr.check_linear_general_position(CheckMode::Exhaustive).passed()
            && arr.check_quadric_general_position().passed()
    })
}

/// Random sparse polynomials in the variables of one chart of a cover with
/// parameters (n, k), for the rewriting property tests.
pub fn random_polynomials(
    n: usize,
    k: usize,
    chart: usize,
    count: usize,
    seed: u64,
) -> Vec<MPoly<Rationals>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nn = n + k;
    let vars: Vec<Var> = (0..=nn)
        .filter(|&i| i != chart)
        .flat_map(|i| [Var::base(i), Var::fiber(i)])
        .collect();
    (0..count)
        .map(|_| {
            let mut f = MPoly::zero(Rationals);
            let terms = rng.gen_range(1..=6);
            for _ in 0..terms {
                let nfac = rng.gen_range(0..=3);
                let factors: Vec<(Var, u32)> = (0..nfac)
                    .map(|_| {
                        let v = vars[rng.gen_range(0..vars.len())];
                        (v, rng.gen_range(1..=8u32))
                    })
                    .collect();
                let coeff = rat(rng.gen_range(-9..=9), 1);
                f.add_term(Monomial::from_factors(factors), coeff);
            }
            f
        })
        .collect()
}
