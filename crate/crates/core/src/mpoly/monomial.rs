use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Variable flavor: `Base` is an affine coordinate `z_i`, `Fiber` is the
/// corresponding tangent coordinate `z_i'`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Flavor {
    Base,
    Fiber,
}

/// A variable of the polynomial ring: `z_i` or `z_i'`.
///
/// The derived order (base before fiber, ascending index) is the canonical
/// variable order of the toolkit.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Var {
    pub flavor: Flavor,
    pub index: usize,
}

impl Var {
    pub fn base(index: usize) -> Self {
        Var {
            flavor: Flavor::Base,
            index,
        }
    }
    pub fn fiber(index: usize) -> Self {
        Var {
            flavor: Flavor::Fiber,
            index,
        }
    }

    pub fn name(&self) -> String {
        match self.flavor {
            Flavor::Base => format!("z{}", self.index),
            Flavor::Fiber => format!("z{}'", self.index),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let body = s
            .strip_prefix('z')
            .ok_or_else(|| Error::Parse(format!("invalid variable {s:?}")))?;
        let (digits, flavor) = match body.strip_suffix('\'') {
            Some(d) => (d, Flavor::Fiber),
            None => (body, Flavor::Base),
        };
        let index = digits
            .parse::<usize>()
            .map_err(|_| Error::Parse(format!("invalid variable {s:?}")))?;
        Ok(Var { flavor, index })
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// A monomial: a finite map variable -> positive exponent, kept sorted by
/// variable. The empty monomial is 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    factors: Vec<(Var, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: Var, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial {
                factors: vec![(v, e)],
            }
        }
    }

    pub fn from_factors(mut factors: Vec<(Var, u32)>) -> Self {
        factors.retain(|&(_, e)| e > 0);
        factors.sort_by_key(|&(v, _)| v);
        let mut merged: Vec<(Var, u32)> = Vec::with_capacity(factors.len());
        for (v, e) in factors {
            match merged.last_mut() {
                Some((lv, le)) if *lv == v => *le += e,
                _ => merged.push((v, e)),
            }
        }
        Monomial { factors: merged }
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.factors
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        Monomial::from_factors(factors)
    }

    /// Exact division; `None` when `other` does not divide `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.factors.len());
        let mut rest = other.factors.iter().peekable();
        for &(v, e) in &self.factors {
            let mut e = e;
            while let Some(&&(w, f)) = rest.peek() {
                if w < v {
                    return None; // divisor has a variable self lacks
                }
                if w == v {
                    if f > e {
                        return None;
                    }
                    e -= f;
                    rest.next();
                }
                break;
            }
            if e > 0 {
                out.push((v, e));
            }
        }
        if rest.peek().is_some() {
            return None;
        }
        Some(Monomial { factors: out })
    }

    pub fn pow(&self, e: u32) -> Monomial {
        Monomial {
            factors: self.factors.iter().map(|&(v, x)| (v, x * e)).collect(),
        }
    }
}

/// Degree-lexicographic order: higher total degree wins; ties compare
/// exponents variable by variable in the canonical variable order, larger
/// exponent at the first difference wins.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let mut a = self.factors.iter();
        let mut b = other.factors.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                // remaining factors sit on later variables: the side that
                // exhausted first has exponent 0 at the other's variable
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    match va.cmp(&vb) {
                        // self has a positive exponent at an earlier variable
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                        Ordering::Equal => match ea.cmp(&eb) {
                            Ordering::Equal => {}
                            ord => return ord,
                        },
                    }
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(v, e)| {
                if e == 1 {
                    v.name()
                } else {
                    format!("{}^{}", v.name(), e)
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn var_order_is_base_before_fiber_ascending_index() {
        assert!(Var::base(0) < Var::base(3));
        assert!(Var::base(9) < Var::fiber(0));
        assert!(Var::fiber(1) < Var::fiber(2));
    }

    #[test]
    fn var_name_roundtrip() {
        for v in [Var::base(0), Var::base(12), Var::fiber(3)] {
            assert_eq!(Var::parse(&v.name()).unwrap(), v);
        }
        assert!(Var::parse("w3").is_err());
    }

    #[test]
    fn monomial_mul_div() {
        let a = Monomial::from_factors(vec![(Var::base(1), 2), (Var::fiber(3), 1)]);
        let b = Monomial::var(Var::base(1), 1);
        let ab = a.mul(&b);
        assert_eq!(ab.exp(Var::base(1)), 3);
        assert_eq!(ab.div(&a).unwrap(), b);
        assert_eq!(ab.div(&b).unwrap(), a);
        assert!(b.div(&a).is_none());
    }

    #[test]
    fn deglex_order() {
        let z0 = Monomial::var(Var::base(0), 1);
        let z1 = Monomial::var(Var::base(1), 1);
        let z0sq = Monomial::var(Var::base(0), 2);
        assert!(z0sq > z1); // degree first
        assert!(z0 > z1); // earlier variable with positive exponent wins
        assert!(z0sq > z0.mul(&z1)); // z0^2 > z0 z1
    }
}
