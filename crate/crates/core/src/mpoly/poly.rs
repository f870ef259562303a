use std::collections::BTreeMap;
use std::fmt;

use num_traits::Signed;

use crate::error::Result;
use crate::exactalg::{rational_mod_p, rational_to_string, Field, PrimeField, Rationals};

use super::monomial::{Monomial, Var};

/// A sparse multivariate polynomial over one field: a map from monomials to
/// nonzero coefficients. The zero polynomial has no terms.
#[derive(Clone, PartialEq, Debug)]
pub struct MPoly<F: Field> {
    field: F,
    terms: BTreeMap<Monomial, F::Elem>,
}

impl<F: Field> MPoly<F> {
    pub fn zero(field: F) -> Self {
        MPoly {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: F, c: F::Elem) -> Self {
        let mut p = Self::zero(field);
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn one(field: F) -> Self {
        let c = field.one();
        Self::constant(field, c)
    }

    pub fn var(field: F, v: Var) -> Self {
        let c = field.one();
        Self::monomial(field, Monomial::var(v, 1), c)
    }

    pub fn monomial(field: F, m: Monomial, c: F::Elem) -> Self {
        let mut p = Self::zero(field);
        p.add_term(m, c);
        p
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F::Elem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c * m` in place, dropping the term if the coefficient cancels.
    pub fn add_term(&mut self, m: Monomial, c: F::Elem) {
        if self.field.is_zero(&c) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = self.field.add(e.get(), &c);
                if self.field.is_zero(&sum) {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn assert_same_field(&self, other: &Self) {
        assert!(
            self.field == other.field,
            "field mismatch in polynomial arithmetic"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_field(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.field.clone());
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), self.field.neg(c));
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_field(other);
        let mut out = Self::zero(self.field.clone());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), self.field.mul(c1, c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let mut out = Self::zero(self.field.clone());
        if self.field.is_zero(c) {
            return out;
        }
        for (m, k) in &self.terms {
            out.add_term(m.clone(), self.field.mul(k, c));
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        let mut out = Self::zero(self.field.clone());
        for (m1, c) in &self.terms {
            out.terms.insert(m1.mul(m), c.clone());
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.field.clone());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitutes a polynomial for a variable, exactly.
    pub fn substitute(&self, v: Var, value: &Self) -> Self {
        self.assert_same_field(value);
        let mut out = Self::zero(self.field.clone());
        let mut pow_cache: Vec<Self> = vec![Self::one(self.field.clone())];
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e == 0 {
                out.add_term(m.clone(), c.clone());
                continue;
            }
            while pow_cache.len() <= e as usize {
                let next = pow_cache.last().unwrap().mul(value);
                pow_cache.push(next);
            }
            let rest = m
                .div(&Monomial::var(v, e))
                .expect("v^e divides its own monomial");
            for (m2, c2) in &pow_cache[e as usize].terms {
                out.add_term(rest.mul(m2), self.field.mul(c, c2));
            }
        }
        out
    }

    /// Exact division of every term by a monomial; `None` if any term is not
    /// divisible.
    pub fn div_monomial(&self, m: &Monomial) -> Option<Self> {
        let mut out = Self::zero(self.field.clone());
        for (m1, c) in &self.terms {
            out.terms.insert(m1.div(m)?, c.clone());
        }
        Some(out)
    }

    /// Largest `e` such that `v^e` divides every term; `None` for the zero
    /// polynomial (the +infinity sentinel).
    pub fn valuation(&self, v: Var) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        Some(self.terms.keys().map(|m| m.exp(v)).min().unwrap())
    }

    /// The set of variables appearing with positive exponent.
    pub fn variables(&self) -> std::collections::BTreeSet<Var> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|&(v, _)| v))
            .collect()
    }

    /// Leading term in the canonical monomial order.
    pub fn leading(&self) -> Option<(&Monomial, &F::Elem)> {
        self.terms.iter().next_back()
    }
}

impl MPoly<Rationals> {
    pub fn from_int(c: i64) -> Self {
        Self::constant(Rationals, Rationals.from_i64(c))
    }

    /// Evaluates the polynomial in `F_p` at a full variable assignment.
    pub fn eval_mod_p(&self, fp: &PrimeField, assign: &dyn Fn(Var) -> u64) -> Result<u64> {
        let mut acc: u64 = 0;
        for (m, c) in &self.terms {
            let mut val = rational_mod_p(c, fp)?;
            for &(v, e) in m.factors() {
                val = fp.mul(&val, &fp.pow(assign(v), e as u64));
            }
            acc = fp.add(&acc, &val);
        }
        Ok(acc)
    }
}

impl fmt::Display for MPoly<Rationals> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        // leading term first
        for (m, c) in self.terms.iter().rev() {
            let mag = rational_to_string(&c.abs());
            let sign = c.is_negative();
            if first {
                if sign {
                    write!(f, "-")?;
                }
                first = false;
            } else if sign {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag == "1" {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

/// Determinant of a square matrix of polynomials by cofactor expansion along
/// the first row. Sizes here are at most n+1 for desk-scale n, so the n!
/// growth is irrelevant.
pub fn poly_det(rows: &[Vec<MPoly<Rationals>>]) -> MPoly<Rationals> {
    let n = rows.len();
    assert!(rows.iter().all(|r| r.len() == n), "poly_det needs a square matrix");
    if n == 0 {
        return MPoly::one(Rationals);
    }
    if n == 1 {
        return rows[0][0].clone();
    }
    let mut acc = MPoly::zero(Rationals);
    for j in 0..n {
        if rows[0][j].is_zero() {
            continue;
        }
        let sub: Vec<Vec<MPoly<Rationals>>> = rows[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let term = rows[0][j].mul(&poly_det(&sub));
        acc = if j % 2 == 0 {
            acc.add(&term)
        } else {
            acc.sub(&term)
        };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    fn z(i: usize) -> MPoly<Rationals> {
        MPoly::var(Rationals, Var::base(i))
    }
    fn zp(i: usize) -> MPoly<Rationals> {
        MPoly::var(Rationals, Var::fiber(i))
    }

    /// w_{i,j} = z_i z_j' - z_i' z_j
    fn w(i: usize, j: usize) -> MPoly<Rationals> {
        z(i).mul(&zp(j)).sub(&zp(i).mul(&z(j)))
    }

    #[test]
    fn product_of_sum_and_difference() {
        let lhs = z(1).add(&z(2)).mul(&z(1).sub(&z(2)));
        let rhs = z(1).mul(&z(1)).sub(&z(2).mul(&z(2)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitute_kills_base_variable() {
        // substitute z_1 -> 0 in w_{1,2} leaves -z_1' z_2
        let got = w(1, 2).substitute(Var::base(1), &MPoly::zero(Rationals));
        let expected = zp(1).mul(&z(2)).neg();
        assert_eq!(got, expected);
    }

    #[test]
    fn w_is_antisymmetric() {
        for (p, q) in [(0, 1), (1, 2), (2, 5)] {
            assert!(w(p, q).add(&w(q, p)).is_zero());
        }
    }

    #[test]
    fn valuation_examples() {
        let m = 6u32;
        let g = z(1).add(&MPoly::from_int(1));
        let f = MPoly::monomial(Rationals, Monomial::var(Var::base(0), m - 1), rat(1, 1)).mul(&g);
        assert_eq!(f.valuation(Var::base(0)), Some(m - 1));
        assert_eq!(MPoly::from_int(1).valuation(Var::base(0)), Some(0));
        assert_eq!(MPoly::zero(Rationals).valuation(Var::base(0)), None);
    }

    #[test]
    fn eval_mod_p_matches_direct_arithmetic() {
        let fp = PrimeField::new(101).unwrap();
        // f = 3/2 z1^2 z2' - z2
        let f = z(1)
            .mul(&z(1))
            .mul(&zp(2))
            .scale(&rat(3, 2))
            .sub(&z(2));
        let assign = |v: Var| match (v.flavor, v.index) {
            (super::super::monomial::Flavor::Base, 1) => 5,
            (super::super::monomial::Flavor::Base, 2) => 7,
            (super::super::monomial::Flavor::Fiber, 2) => 11,
            _ => 0,
        };
        let got = f.eval_mod_p(&fp, &assign).unwrap();
        // 3/2 = 3*51 = 153 = 52; 52*25*11 - 7 mod 101
        let expect = {
            let threehalf = fp.mul(&3, &fp.inv(&2).unwrap());
            let t = fp.mul(&threehalf, &fp.mul(&fp.pow(5, 2), &11));
            fp.sub(&t, &7)
        };
        assert_eq!(got, expect);
    }

    #[test]
    fn poly_det_matches_scalar_det() {
        let rows = vec![
            vec![MPoly::from_int(1), MPoly::from_int(2)],
            vec![MPoly::from_int(3), MPoly::from_int(4)],
        ];
        assert_eq!(poly_det(&rows), MPoly::from_int(-2));
        // determinant with a repeated polynomial row is zero
        let rows = vec![
            vec![w(0, 1), w(1, 2)],
            vec![w(0, 1), w(1, 2)],
        ];
        assert!(poly_det(&rows).is_zero());
    }

    #[test]
    fn display_is_leading_term_first() {
        let f = z(1).mul(&z(1)).sub(&zp(2).scale(&rat(3, 2)));
        assert_eq!(f.to_string(), "z1^2 - 3/2*z2'");
    }
}
