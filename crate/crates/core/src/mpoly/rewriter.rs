//! Normal forms modulo the Fermat-cover ideal.
//!
//! In the affine chart `z_c = 1, z_c' = 0` the cover is cut out by the
//! Fermat relations `z_{n+j}^m = sum_i a_i^j z_i^m` and their tangent
//! relations `z_{n+j}^{m-1} z_{n+j}' = sum_i a_i^j z_i^{m-1} z_i'`. Each
//! relation is oriented as a rewrite rule eliminating the high power on the
//! left. In a cover chart (`c > n`) the relation indexed by the chart itself
//! has no cover-variable leading monomial; it is oriented at the largest
//! base variable with nonzero coefficient instead.
//!
//! The two-rule-per-relation system is terminating but not confluent as a
//! term rewriting system, so [`CoverIdealRewriter::normal_form`] is a
//! canonical form, not a decision procedure. The membership test
//! [`CoverIdealRewriter::is_zero_mod_ideal`] first clears tangent
//! denominators by multiplying with rule-variable powers (harmless on the
//! interior `z_0 ... z_N != 0`, which is where every identity of interest
//! lives) and only then reduces; `true` answers are always sound.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactalg::{Field, Rational, Rationals};

use super::monomial::{Monomial, Var};
use super::poly::MPoly;

/// Which of the two patterns of a rule fired.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum RuleKind {
    Tangent,
    Fermat,
}

/// Rule application order, for the randomized confluence check. Both orders
/// keep the tangent pattern ahead of the Fermat pattern per variable; only
/// the variable scan direction differs.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RuleOrder {
    /// Tangent rules before Fermat rules, rule variable descending.
    Canonical,
    /// Same classes, rule variable ascending.
    Reversed,
}

#[derive(Clone, Debug)]
struct Rule {
    var: usize,
    fermat_rhs: MPoly<Rationals>,
    tangent_rhs: MPoly<Rationals>,
}

/// Rewriter for the Fermat-cover ideal of one chart.
#[derive(Clone, Debug)]
pub struct CoverIdealRewriter {
    n: usize,
    k: usize,
    m: usize,
    chart: usize,
    a: Vec<Vec<Rational>>,
    rules: Vec<Rule>,
}

/// The base coordinate `z_i` of a chart: `1` when `i` is the chart index.
pub fn chart_z(chart: usize, i: usize) -> MPoly<Rationals> {
    if i == chart {
        MPoly::one(Rationals)
    } else {
        MPoly::var(Rationals, Var::base(i))
    }
}

/// The fiber coordinate `z_i'` of a chart: `0` when `i` is the chart index.
pub fn chart_zp(chart: usize, i: usize) -> MPoly<Rationals> {
    if i == chart {
        MPoly::zero(Rationals)
    } else {
        MPoly::var(Rationals, Var::fiber(i))
    }
}

/// `w_{i,j} = z_i z_j' - z_i' z_j` in the conventions of a chart.
pub fn chart_w(chart: usize, i: usize, j: usize) -> MPoly<Rationals> {
    chart_z(chart, i)
        .mul(&chart_zp(chart, j))
        .sub(&chart_zp(chart, i).mul(&chart_z(chart, j)))
}

impl CoverIdealRewriter {
    /// Builds the rewriter for chart `chart` of the cover with coefficient
    /// matrix `a` (`k` rows of length `n+1`) and ramification `m >= 2`.
    pub fn new(n: usize, k: usize, m: usize, a: Vec<Vec<Rational>>, chart: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::Precondition(format!("m = {m} must be >= 2")));
        }
        if a.len() != k || a.iter().any(|row| row.len() != n + 1) {
            return Err(Error::Shape(format!(
                "coefficient matrix must be {k} x {}",
                n + 1
            )));
        }
        if chart > n + k {
            return Err(Error::Index(format!(
                "chart {chart} out of range 0..={}",
                n + k
            )));
        }

        let mut rules = Vec::with_capacity(k);
        // cover-variable rules, j descending
        for j in (1..=k).rev() {
            let v = n + j;
            if v == chart {
                continue;
            }
            let row = &a[j - 1];
            let mut fermat_rhs = MPoly::zero(Rationals);
            let mut tangent_rhs = MPoly::zero(Rationals);
            for i in 0..=n {
                if row[i].is_zero() {
                    continue;
                }
                fermat_rhs = fermat_rhs.add(
                    &chart_z(chart, i)
                        .pow(m as u32)
                        .scale(&row[i]),
                );
                if i != chart {
                    tangent_rhs = tangent_rhs.add(
                        &chart_z(chart, i)
                            .pow(m as u32 - 1)
                            .mul(&chart_zp(chart, i))
                            .scale(&row[i]),
                    );
                }
            }
            rules.push(Rule {
                var: v,
                fermat_rhs,
                tangent_rhs,
            });
        }
        // in a cover chart the chart's own relation is oriented at a base
        // variable: pick the largest index with nonzero coefficient
        if chart > n {
            let jc = chart - n;
            let row = &a[jc - 1];
            let pivot = (0..=n)
                .rev()
                .find(|&i| !row[i].is_zero())
                .ok_or_else(|| Error::Degenerate(format!("relation {jc} has a zero row")))?;
            let inv = Rationals.inv(&row[pivot]).expect("pivot is nonzero");
            let mut fermat_rhs = MPoly::one(Rationals);
            let mut tangent_rhs = MPoly::zero(Rationals);
            for i in 0..=n {
                if i == pivot || row[i].is_zero() {
                    continue;
                }
                fermat_rhs = fermat_rhs.sub(&chart_z(chart, i).pow(m as u32).scale(&row[i]));
                tangent_rhs = tangent_rhs.sub(
                    &chart_z(chart, i)
                        .pow(m as u32 - 1)
                        .mul(&chart_zp(chart, i))
                        .scale(&row[i]),
                );
            }
            rules.push(Rule {
                var: pivot,
                fermat_rhs: fermat_rhs.scale(&inv),
                tangent_rhs: tangent_rhs.scale(&inv),
            });
        }

        Ok(CoverIdealRewriter {
            n,
            k,
            m,
            chart,
            a,
            rules,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn m(&self) -> usize {
        self.m
    }
    pub fn chart(&self) -> usize {
        self.chart
    }
    pub fn coefficients(&self) -> &[Vec<Rational>] {
        &self.a
    }

    fn first_applicable(&self, mono: &Monomial, order: RuleOrder) -> Option<(usize, RuleKind)> {
        let m = self.m as u32;
        let indices: Vec<usize> = match order {
            RuleOrder::Canonical => (0..self.rules.len()).collect(),
            RuleOrder::Reversed => (0..self.rules.len()).rev().collect(),
        };
        for &idx in &indices {
            let v = self.rules[idx].var;
            if mono.exp(Var::base(v)) >= m - 1 && mono.exp(Var::fiber(v)) >= 1 {
                return Some((idx, RuleKind::Tangent));
            }
        }
        for &idx in &indices {
            let v = self.rules[idx].var;
            if mono.exp(Var::base(v)) >= m {
                return Some((idx, RuleKind::Fermat));
            }
        }
        None
    }

    /// Canonical-order normal form: tangent rules before Fermat rules, rule
    /// variable descending, until no pattern is left. Terminates because
    /// every rewrite strictly decreases the combined degree in the rule
    /// variables and their fibers.
    pub fn normal_form(&self, f: &MPoly<Rationals>) -> MPoly<Rationals> {
        self.normal_form_with_order(f, RuleOrder::Canonical)
    }

    pub fn normal_form_with_order(&self, f: &MPoly<Rationals>, order: RuleOrder) -> MPoly<Rationals> {
        let m = self.m as u32;
        let mut result = MPoly::zero(Rationals);
        let mut work: Vec<(Monomial, Rational)> =
            f.terms().map(|(mo, c)| (mo.clone(), c.clone())).collect();
        while let Some((mono, coeff)) = work.pop() {
            match self.first_applicable(&mono, order) {
                None => result.add_term(mono, coeff),
                Some((idx, kind)) => {
                    let rule = &self.rules[idx];
                    let (pattern, rhs) = match kind {
                        RuleKind::Tangent => (
                            Monomial::from_factors(vec![
                                (Var::base(rule.var), m - 1),
                                (Var::fiber(rule.var), 1),
                            ]),
                            &rule.tangent_rhs,
                        ),
                        RuleKind::Fermat => {
                            (Monomial::var(Var::base(rule.var), m), &rule.fermat_rhs)
                        }
                    };
                    let quotient = mono.div(&pattern).expect("pattern divides by construction");
                    for (m2, c2) in rhs.terms() {
                        work.push((quotient.mul(m2), &coeff * c2));
                    }
                }
            }
        }
        result
    }

    /// Clears tangent denominators: multiplies `f` by rule-variable powers so
    /// that every fiber factor of a rule variable can be stripped by the
    /// tangent rule. Multiplying by coordinates is harmless for identities on
    /// the interior of the cover.
    fn saturate(&self, f: &MPoly<Rationals>) -> MPoly<Rationals> {
        let m = self.m as u32;
        let rule_vars: Vec<usize> = self.rules.iter().map(|r| r.var).collect();
        let mut debt: Vec<u32> = vec![0; rule_vars.len()];
        for (mono, _) in f.terms() {
            let total_rule_fibers: u32 = rule_vars
                .iter()
                .map(|&v| mono.exp(Var::fiber(v)))
                .sum();
            for (d, &v) in debt.iter_mut().zip(&rule_vars) {
                let need = if v <= self.n {
                    // base-variable rule of a cover chart: tangent rewrites of
                    // the other rules can convert their fibers into this one
                    total_rule_fibers
                } else {
                    mono.exp(Var::fiber(v))
                };
                *d = (*d).max(need);
            }
        }
        let multiplier = Monomial::from_factors(
            rule_vars
                .iter()
                .zip(&debt)
                .filter(|&(_, &d)| d > 0)
                .map(|(&v, &d)| (Var::base(v), d * (m - 1)))
                .collect(),
        );
        f.mul_monomial(&multiplier)
    }

    /// Sound zero test modulo the cover ideal on the interior: saturates,
    /// reduces, and checks that nothing is left. `true` implies that `f`
    /// vanishes identically on the tangent variety of the cover where all
    /// coordinates are nonzero.
    pub fn is_zero_mod_ideal(&self, f: &MPoly<Rationals>) -> bool {
        if f.is_zero() {
            return true;
        }
        self.normal_form(&self.saturate(f)).is_zero()
    }

    /// The Fermat relation polynomial `z_{n+j}^m - sum_i a_i^j z_i^m` of this
    /// chart, `j` in `1..=k`.
    pub fn fermat_relation(&self, j: usize) -> MPoly<Rationals> {
        let m = self.m as u32;
        let mut p = chart_z(self.chart, self.n + j).pow(m);
        for i in 0..=self.n {
            p = p.sub(&chart_z(self.chart, i).pow(m).scale(&self.a[j - 1][i]));
        }
        p
    }

    /// The tangent relation polynomial
    /// `z_{n+j}^{m-1} z_{n+j}' - sum_i a_i^j z_i^{m-1} z_i'` of this chart.
    pub fn tangent_relation(&self, j: usize) -> MPoly<Rationals> {
        let m = self.m as u32;
        let v = self.n + j;
        let mut p = chart_z(self.chart, v).pow(m - 1).mul(&chart_zp(self.chart, v));
        for i in 0..=self.n {
            p = p.sub(
                &chart_z(self.chart, i)
                    .pow(m - 1)
                    .mul(&chart_zp(self.chart, i))
                    .scale(&self.a[j - 1][i]),
            );
        }
        p
    }
}
