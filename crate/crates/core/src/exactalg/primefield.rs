//! Word-size prime fields, used as the sampling backend for all randomized
//! verification. Roots of unity and m-th roots are extracted by discrete
//! logarithm against a fixed generator (baby-step giant-step), which keeps
//! every answer deterministic for a given prime.

use std::collections::HashMap;

use crate::error::{Error, Result};

use super::Field;

/// The field `F_p` for a word-size prime `p`.
///
/// Elements are plain `u64` values in `[0, p)`; the field object carries the
/// modulus.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Precondition(format!("{p} is not prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn elem(&self, v: i64) -> u64 {
        let p = self.p as i128;
        let r = (v as i128).rem_euclid(p);
        r as u64
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    /// Smallest generator of the cyclic group `F_p^*`.
    pub fn generator(&self) -> u64 {
        let factors = prime_factors(self.p - 1);
        'next: for g in 2..self.p {
            for q in &factors {
                if self.pow(g, (self.p - 1) / q) == 1 {
                    continue 'next;
                }
            }
            return g;
        }
        unreachable!("F_p^* is cyclic for prime p");
    }

    /// Whether `a` is an m-th power residue: `a^((p-1)/m) = 1`.
    ///
    /// Requires `m | p-1`.
    pub fn is_mth_power_residue(&self, a: u64, m: u64) -> Result<bool> {
        if (self.p - 1) % m != 0 {
            return Err(Error::Precondition(format!(
                "m = {m} does not divide p-1 = {}",
                self.p - 1
            )));
        }
        Ok(self.pow(a, (self.p - 1) / m) == 1)
    }

    /// Deterministic m-th root: some `x` with `x^m = a`, or `None` when `a`
    /// is not an m-th power residue.
    ///
    /// Writes `a = g^t` for the smallest generator `g` (discrete log by
    /// baby-step giant-step) and returns `g^(t/m)`; the residue test is
    /// `a^((p-1)/m) = 1`, equivalently `m | t`.
    pub fn mth_root(&self, a: u64, m: u64) -> Result<Option<u64>> {
        if m == 0 {
            return Err(Error::Precondition("m must be >= 1".into()));
        }
        if (self.p - 1) % m != 0 {
            return Err(Error::Precondition(format!(
                "m = {m} does not divide p-1 = {}",
                self.p - 1
            )));
        }
        let a = a % self.p;
        if a == 0 {
            return Ok(Some(0));
        }
        if !self.is_mth_power_residue(a, m)? {
            return Ok(None);
        }
        let g = self.generator();
        let t = self.discrete_log(g, a);
        debug_assert_eq!(t % m, 0);
        Ok(Some(self.pow(g, t / m)))
    }

    /// Discrete logarithm of `a` base `g` (both nonzero), by BSGS.
    fn discrete_log(&self, g: u64, a: u64) -> u64 {
        let order = self.p - 1;
        let s = (order as f64).sqrt().ceil() as u64 + 1;
        let mut baby = HashMap::with_capacity(s as usize);
        let mut cur = 1u64;
        for j in 0..s {
            baby.entry(cur).or_insert(j);
            cur = self.mul(&cur, &g);
        }
        // giant step factor g^{-s}
        let giant = self
            .inv(&self.pow(g, s))
            .expect("generator is invertible");
        let mut gamma = a;
        for i in 0..=s {
            if let Some(j) = baby.get(&gamma) {
                return (i * s + j) % order;
            }
            gamma = self.mul(&gamma, &giant);
        }
        unreachable!("BSGS covers the whole group");
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        a % self.p == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        let b = b % self.p;
        ((*a as u128 + (self.p - b) as u128) % self.p as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        let a = a % self.p;
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        let a = a % self.p;
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.p - 2))
        }
    }
    fn from_i64(&self, v: i64) -> u64 {
        self.elem(v)
    }
}

/// True iff m-th roots of unity exist in `F_p`, i.e. `m | p-1`.
pub fn root_of_unity_order(p: u64, m: u64) -> bool {
    m >= 1 && (p - 1) % m == 0
}

/// Deterministic primality test by trial division (word-size inputs only).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// The default sampling prime: smallest prime `p >= 2^20` with `p = 1 mod m`,
/// so that m-th roots are guaranteed to exist.
pub fn default_prime(m: u64) -> u64 {
    let lo = 1u64 << 20;
    let mut p = lo + ((m + 1 - lo % m) % m); // first candidate = 1 mod m
    loop {
        if is_prime(p) {
            return p;
        }
        p += m;
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_of_unity_order_examples() {
        assert!(root_of_unity_order(7, 3)); // 3 | 6
        assert!(!root_of_unity_order(7, 4));
        assert!(root_of_unity_order(13, 6)); // 6 | 12
    }

    #[test]
    fn mth_root_of_one() {
        let fp = PrimeField::new(13).unwrap();
        for m in [1, 2, 3, 4, 6, 12] {
            let x = fp.mth_root(1, m).unwrap().expect("1 is always a residue");
            assert_eq!(fp.pow(x, m), 1);
        }
    }

    #[test]
    fn mth_root_postcondition_on_constructed_powers() {
        let fp = PrimeField::new(default_prime(6)).unwrap();
        for g in [2u64, 3, 5, 1234, 99999] {
            let a = fp.pow(g, 6);
            let x = fp.mth_root(a, 6).unwrap().expect("a = g^6 is a residue");
            assert_eq!(fp.pow(x, 6), a);
        }
    }

    #[test]
    fn mth_root_none_matches_exhaustive_cubes_in_f7() {
        // oracle: the set of cubes in F_7
        let fp = PrimeField::new(7).unwrap();
        let cubes: std::collections::BTreeSet<u64> = (1..7).map(|x| fp.pow(x, 3)).collect();
        assert!(!cubes.contains(&3)); // 3^2 = 2 != 1
        assert_eq!(fp.mth_root(3, 3).unwrap(), None);
        for a in 1..7 {
            match fp.mth_root(a, 3).unwrap() {
                Some(x) => {
                    assert_eq!(fp.pow(x, 3), a);
                    assert!(cubes.contains(&a));
                }
                None => assert!(!cubes.contains(&a)),
            }
        }
    }

    #[test]
    fn default_prime_is_one_mod_m() {
        for m in [2u64, 3, 5, 6, 7, 8, 12] {
            let p = default_prime(m);
            assert!(p >= 1 << 20);
            assert!(is_prime(p));
            assert_eq!(p % m, 1);
        }
    }

    #[test]
    fn generator_has_full_order() {
        let fp = PrimeField::new(default_prime(6)).unwrap();
        let g = fp.generator();
        for q in prime_factors(fp.p() - 1) {
            assert_ne!(fp.pow(g, (fp.p() - 1) / q), 1);
        }
    }
}
