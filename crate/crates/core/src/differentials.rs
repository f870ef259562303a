//! The explicit determinantal symmetric differential on a Fermat cover, its
//! per-chart expressions, and the exact identities behind the base-locus
//! rank argument.
//!
//! For a choice of `n` distinct relation indices `j_1..j_n` the section is,
//! on the chart `Z_0 != 0`, the determinant of the `n x n` matrix with entry
//! `a_i^{j_r - n} (z_i z_{j_r}' - z_i' z_{j_r})`, twisted by `Z_0^{2n+1-m}`.
//! The other charts carry the minor- and bordered-determinant expressions of
//! the same section; all pairwise compatibilities are polynomial identities
//! modulo the cover ideal and are checked exactly here, never assumed.

use std::collections::BTreeMap;


use crate::arrangement::binom2;
use crate::error::{Error, Result};
use crate::exactalg::{Field, Matrix, PrimeField, Rational, Rationals};
use crate::fermat::{CoverPoint, CoverSampler, FermatCover};
use crate::mpoly::{chart_w, chart_z, poly_det, MPoly, Monomial, Var};

/// The matrix of the section on one chart, before taking determinants:
/// `n` rows indexed by the chosen relations, `n+1` columns indexed by the
/// base coordinates, entry `a_i^{j_r - n} w_{i, j_r}` in chart conventions.
fn section_matrix(cov: &FermatCover, rows: &[usize], chart: usize) -> Vec<Vec<MPoly<Rationals>>> {
    rows.iter()
        .map(|&jr| {
            (0..=cov.n())
                .map(|i| chart_w(chart, i, jr).scale(&cov.a()[jr - cov.n() - 1][i]))
                .collect()
        })
        .collect()
}

fn validate_rows(cov: &FermatCover, rows: &[usize]) -> Result<()> {
    let n = cov.n();
    if cov.k() < n {
        return Err(Error::Precondition(format!(
            "need k >= n to choose {n} distinct relations, k = {}",
            cov.k()
        )));
    }
    if rows.len() != n {
        return Err(Error::Shape(format!("need exactly n = {n} row indices")));
    }
    let mut sorted = rows.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Index("row indices must be distinct".into()));
    }
    if rows.iter().any(|&j| j <= n || j > cov.big_n()) {
        return Err(Error::Index(format!(
            "row indices must lie in {}..={}",
            n + 1,
            cov.big_n()
        )));
    }
    Ok(())
}

/// The chart-`c` polynomial expression of the section for the given relation
/// rows. Chart 0..n: the minor omitting column `c`, signed `(-1)^c`; chart
/// n+1..N: the bordered determinant with the chart relation on top.
pub fn generate_sigma(cov: &FermatCover, rows: &[usize], chart: usize) -> Result<MPoly<Rationals>> {
    validate_rows(cov, rows)?;
    let n = cov.n();
    if chart > cov.big_n() {
        return Err(Error::Index(format!("chart {chart} out of range")));
    }
    let m = section_matrix(cov, rows, chart);
    if chart <= n {
        let sub: Vec<Vec<MPoly<Rationals>>> = m
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(i, _)| *i != chart)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let det = poly_det(&sub);
        Ok(if chart % 2 == 0 { det } else { det.neg() })
    } else {
        let jc = chart - n;
        let mut bordered: Vec<Vec<MPoly<Rationals>>> = Vec::with_capacity(n + 1);
        bordered.push(
            (0..=n)
                .map(|i| chart_z(chart, i).scale(&cov.a()[jc - 1][i]))
                .collect(),
        );
        bordered.extend(m);
        Ok(poly_det(&bordered))
    }
}

/// The section with all of its chart expressions and the twist exponent
/// `2n+1-m` on `Z_c`.
#[derive(Clone, Debug)]
pub struct TwistedSection {
    cover: FermatCover,
    rows: Vec<usize>,
    charts: BTreeMap<usize, MPoly<Rationals>>,
    twist: i64,
}

impl TwistedSection {
    pub fn build(cov: &FermatCover, rows: &[usize]) -> Result<Self> {
        validate_rows(cov, rows)?;
        let mut charts = BTreeMap::new();
        for c in 0..=cov.big_n() {
            charts.insert(c, generate_sigma(cov, rows, c)?);
        }
        Ok(TwistedSection {
            cover: cov.clone(),
            rows: rows.to_vec(),
            charts,
            twist: (2 * cov.n() + 1) as i64 - cov.m() as i64,
        })
    }

    /// Default relation rows `{n+1, ..., 2n}`.
    pub fn default_rows(cov: &FermatCover) -> Vec<usize> {
        (cov.n() + 1..=2 * cov.n()).collect()
    }

    pub fn cover(&self) -> &FermatCover {
        &self.cover
    }
    pub fn rows(&self) -> &[usize] {
        &self.rows
    }
    /// Twist exponent `2n+1-m`; negative exactly when `m > 2n+1`.
    pub fn twist(&self) -> i64 {
        self.twist
    }
    /// Symmetric degree of the section.
    pub fn symmetric_degree(&self) -> usize {
        self.cover.n()
    }
    pub fn chart_expr(&self, c: usize) -> Result<&MPoly<Rationals>> {
        self.charts
            .get(&c)
            .ok_or_else(|| Error::Index(format!("chart {c} out of range")))
    }
}

/// Moves a chart-`c_expr` polynomial into chart `c_target`, clearing the
/// denominators `z_{c_expr}^*` that the substitution introduces. Returns the
/// cleared polynomial `P` (with its overall `z_{c_expr}` content divided
/// out) and the exponent `e` such that the original expression equals
/// `P / z_{c_expr}^e` on the overlap.
fn transport_cleared(
    expr: &MPoly<Rationals>,
    c_expr: usize,
    c_target: usize,
) -> (MPoly<Rationals>, i64) {
    assert_ne!(c_expr, c_target);
    let subst_degree = |m: &Monomial| -> u32 {
        m.factors()
            .iter()
            .map(|&(v, e)| match v.flavor {
                crate::mpoly::Flavor::Base => e,
                crate::mpoly::Flavor::Fiber => 2 * e,
            })
            .sum()
    };
    let dmax = expr.terms().map(|(m, _)| subst_degree(m)).max().unwrap_or(0);
    let mut p = MPoly::zero(Rationals);
    for (mono, coeff) in expr.terms() {
        let mut image = MPoly::constant(Rationals, coeff.clone());
        for &(v, e) in mono.factors() {
            let factor = match v.flavor {
                crate::mpoly::Flavor::Base => chart_z(c_target, v.index),
                crate::mpoly::Flavor::Fiber => chart_w(c_target, c_expr, v.index),
            };
            image = image.mul(&factor.pow(e));
        }
        let pad = dmax - subst_degree(mono);
        image = image.mul_monomial(&Monomial::var(Var::base(c_expr), pad));
        p = p.add(&image);
    }
    if p.is_zero() {
        return (p, 0);
    }
    let v = p.valuation(Var::base(c_expr)).unwrap();
    let p_tight = p
        .div_monomial(&Monomial::var(Var::base(c_expr), v))
        .expect("valuation divides");
    (p_tight, dmax as i64 - v as i64)
}

/// Exact check of the central annihilation: for each chosen relation row,
/// `sum_i a_i^{j-n} w_{i,j} z_i^{m-1}` vanishes modulo the cover ideal on
/// the chart `Z_0 != 0`.
pub fn verify_cramer_annihilation(cov: &FermatCover, rows: &[usize]) -> Result<bool> {
    validate_rows(cov, rows)?;
    let rw = cov.rewriter(0)?;
    let m = cov.m() as u32;
    for &jr in rows {
        let mut f = MPoly::zero(Rationals);
        for i in 0..=cov.n() {
            f = f.add(
                &chart_z(0, i)
                    .pow(m - 1)
                    .mul(&chart_w(0, i, jr))
                    .scale(&cov.a()[jr - cov.n() - 1][i]),
            );
        }
        if !rw.is_zero_mod_ideal(&f) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exact pairwise chart compatibility: the chart-`c2` expression, transported
/// to chart `c1` and cleared of `z_{c2}` powers and the twist factor, must
/// agree with the chart-`c1` expression modulo the cover ideal.
pub fn verify_chart_compatibility(sec: &TwistedSection, c1: usize, c2: usize) -> Result<bool> {
    if c1 == c2 {
        sec.chart_expr(c1)?;
        return Ok(true);
    }
    let e1 = sec.chart_expr(c1)?;
    let e2 = sec.chart_expr(c2)?;
    let (p2, exp2) = transport_cleared(e2, c2, c1);
    let e = exp2 - sec.twist();
    let zc2 = |e: u32| Monomial::var(Var::base(c2), e);
    let f = if e >= 0 {
        e1.mul_monomial(&zc2(e as u32)).sub(&p2)
    } else {
        e1.sub(&p2.mul_monomial(&zc2((-e) as u32)))
    };
    let rw = sec.cover().rewriter(c1)?;
    Ok(rw.is_zero_mod_ideal(&f))
}

/// The order of extra vanishing along `{Z_{c1} = 0}` carried by the
/// transition between the chart expressions: the chart-`c1` expression,
/// rewritten in chart `c2`, factors as `z_{c1}^e` times the chart-`c2`
/// expression; the returned count is the `z_{c1}`-valuation of that factor
/// (plus any residual valuation of the reduced chart-`c2` expression, zero
/// for generic covers). For base chart pairs this is exactly `m-1`.
pub fn extra_vanishing_order(sec: &TwistedSection, c1: usize, c2: usize) -> Result<u64> {
    if c1 == c2 {
        return Err(Error::Precondition(
            "extra vanishing needs two distinct charts".into(),
        ));
    }
    if !verify_chart_compatibility(sec, c1, c2)? {
        return Err(Error::Precondition(format!(
            "charts {c1} and {c2} fail the compatibility identity"
        )));
    }
    let e1 = sec.chart_expr(c1)?;
    let e2 = sec.chart_expr(c2)?;
    let rw2 = sec.cover().rewriter(c2)?;
    let (p1, exp1) = transport_cleared(e1, c1, c2);
    let e = exp1 - sec.twist();
    if e < 0 {
        return Err(Error::Degenerate(format!(
            "transition factor has negative exponent {e}"
        )));
    }
    let shifted = e2.mul_monomial(&Monomial::var(Var::base(c1), e as u32));
    if !rw2.is_zero_mod_ideal(&p1.sub(&shifted)) {
        return Err(Error::SoundnessAlarm(format!(
            "transition factor identity failed between charts {c1} and {c2}"
        )));
    }
    let nf2 = rw2.normal_form(e2);
    if nf2.is_zero() {
        return Err(Error::Degenerate("zero chart expression".into()));
    }
    Ok(e as u64 + nf2.valuation(Var::base(c1)).unwrap() as u64)
}

/// The matrices of the base-locus factorization, on the chart `Z_0 != 0`:
/// `B` is `k x (n+1)` with entry `a_i^j w_{i, n+j}`, `W` is
/// `binom(n+1,2) x (n+1)` with row `(p<q)` equal to `w_{p,q} (E_p - E_q)`,
/// and `A2` is the pair-product matrix of the coefficients.
#[derive(Clone, Debug)]
pub struct BWFactorization {
    pub b: Vec<Vec<MPoly<Rationals>>>,
    pub w: Vec<Vec<MPoly<Rationals>>>,
    pub w_pairs: Vec<(usize, usize)>,
    pub a2: Matrix<Rationals>,
}

pub fn build_bw(cov: &FermatCover) -> BWFactorization {
    let n = cov.n();
    let b: Vec<Vec<MPoly<Rationals>>> = (1..=cov.k())
        .map(|j| {
            (0..=n)
                .map(|i| chart_w(0, i, n + j).scale(&cov.a()[j - 1][i]))
                .collect()
        })
        .collect();
    let pairs: Vec<(usize, usize)> = (0..=n)
        .flat_map(|p| (p + 1..=n).map(move |q| (p, q)))
        .collect();
    let w: Vec<Vec<MPoly<Rationals>>> = pairs
        .iter()
        .map(|&(p, q)| {
            (0..=n)
                .map(|i| {
                    if i == p {
                        chart_w(0, p, q)
                    } else if i == q {
                        chart_w(0, p, q).neg()
                    } else {
                        MPoly::zero(Rationals)
                    }
                })
                .collect()
        })
        .collect();
    BWFactorization {
        b,
        w,
        w_pairs: pairs,
        a2: a2_matrix(cov),
    }
}

/// Pair-product matrix `binom(n+1,2) x k` of the cover coefficients.
pub fn a2_matrix(cov: &FermatCover) -> Matrix<Rationals> {
    let n = cov.n();
    let rows: Vec<Vec<Rational>> = (0..=n)
        .flat_map(|p| (p + 1..=n).map(move |q| (p, q)))
        .map(|(p, q)| {
            (0..cov.k())
                .map(|j| &cov.a()[j][p] * &cov.a()[j][q])
                .collect()
        })
        .collect();
    Matrix::from_rows(Rationals, rows).expect("rectangular")
}

/// Exact check of the denominator-cleared factorization of `B` through the
/// pair-product matrix: for every relation `j` and column `i1`,
///
/// `z_{n+j}^{m-1} a_{i1}^j w_{i1, n+j}  =  sum_{i2} a_{i1}^j a_{i2}^j z_{i2}^{m-1} w_{i1,i2}`
///
/// modulo the cover ideal on `Z_0 != 0`. The `z_{i2}^{m-1}` column weights
/// are forced by the tangent relations; at interior points they are the
/// invertible rescaling tying `rk B` to `rk W`.
pub fn verify_bw_factorization(cov: &FermatCover) -> Result<bool> {
    let rw = cov.rewriter(0)?;
    let n = cov.n();
    let m = cov.m() as u32;
    for j in 1..=cov.k() {
        for i1 in 0..=n {
            let lhs = chart_z(0, n + j)
                .pow(m - 1)
                .mul(&chart_w(0, i1, n + j))
                .scale(&cov.a()[j - 1][i1]);
            let mut rhs = MPoly::zero(Rationals);
            for i2 in 0..=n {
                if i2 == i1 {
                    continue;
                }
                let coeff = &cov.a()[j - 1][i1] * &cov.a()[j - 1][i2];
                rhs = rhs.add(&chart_z(0, i2).pow(m - 1).mul(&chart_w(0, i1, i2)).scale(&coeff));
            }
            if !rw.is_zero_mod_ideal(&lhs.sub(&rhs)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Numeric `W` matrix at a sampled point, over `F_p`.
pub fn w_matrix_at(cov: &FermatCover, point: &CoverPoint) -> Result<Matrix<PrimeField>> {
    let fp = PrimeField::new(point.prime)?;
    let n = cov.n();
    let wval = |p: usize, q: usize| {
        fp.sub(
            &fp.mul(&point.z[p], &point.zp[q]),
            &fp.mul(&point.zp[p], &point.z[q]),
        )
    };
    let rows: Vec<Vec<u64>> = (0..=n)
        .flat_map(|p| (p + 1..=n).map(move |q| (p, q)))
        .map(|(p, q)| {
            (0..=n)
                .map(|i| {
                    if i == p {
                        wval(p, q)
                    } else if i == q {
                        fp.neg(&wval(p, q))
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();
    Matrix::from_rows(fp, rows).map_err(Into::into)
}

/// Numeric `B` matrix at a sampled point, over `F_p`.
pub fn b_matrix_at(cov: &FermatCover, point: &CoverPoint) -> Result<Matrix<PrimeField>> {
    let fp = PrimeField::new(point.prime)?;
    let a = cov.a_mod_p(&fp)?;
    let n = cov.n();
    let wval = |p: usize, q: usize| {
        fp.sub(
            &fp.mul(&point.z[p], &point.zp[q]),
            &fp.mul(&point.zp[p], &point.z[q]),
        )
    };
    let rows: Vec<Vec<u64>> = (1..=cov.k())
        .map(|j| {
            (0..=n)
                .map(|i| fp.mul(&a[j - 1][i], &wval(i, n + j)))
                .collect()
        })
        .collect();
    Matrix::from_rows(fp, rows).map_err(Into::into)
}

/// A certified nonzero `n x n` minor of `W` at a point: rows `(0, i*)` and
/// `(star_i, i)`, columns `1..=n`, with value `+- w_{0,i*} prod w_{star,i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct WMinorWitness {
    pub rank_bound: usize,
    pub rows: Vec<(usize, usize)>,
    pub cols: Vec<usize>,
    pub value: u64,
}

/// Certifies `rank W >= n` at an interior point by exhibiting the explicit
/// triangular minor: pick `i*` with `w_{0,i*} = z_{i*}' != 0`, then for each
/// other column the identity `z_i w_{0,i*} = z_{i*} w_{0,i} - z_0 w_{i*,i}`
/// forces one of `w_{0,i}`, `w_{i*,i}` to be nonzero.
pub fn rank_w_minor(cov: &FermatCover, point: &CoverPoint) -> Result<WMinorWitness> {
    let fp = PrimeField::new(point.prime)?;
    let n = cov.n();
    if !point.is_interior() {
        return Err(Error::Precondition("point is not interior".into()));
    }
    let wval = |p: usize, q: usize| {
        fp.sub(
            &fp.mul(&point.z[p], &point.zp[q]),
            &fp.mul(&point.zp[p], &point.z[q]),
        )
    };
    let istar = (1..=n)
        .find(|&i| point.zp[i] != 0)
        .ok_or_else(|| Error::Degenerate(
            "degenerate tangent: z_1'..z_n' all vanish, which forces every derivative to vanish"
                .into(),
        ))?;
    let mut rows: Vec<(usize, usize)> = vec![(0, istar)];
    let mut value = wval(0, istar);
    for i in 1..=n {
        if i == istar {
            continue;
        }
        let star = if wval(0, i) != 0 {
            0
        } else if wval(istar, i) != 0 {
            istar
        } else {
            return Err(Error::SoundnessAlarm(format!(
                "both w_(0,{i}) and w_({istar},{i}) vanish at an interior point with \
                 w_(0,{istar}) != 0"
            )));
        };
        let (p, q) = (star.min(i), star.max(i));
        rows.push((p, q));
        value = fp.mul(&value, &wval(p, q));
    }
    rows.sort_unstable();
    let cols: Vec<usize> = (1..=n).collect();

    // cross-check: the selected minor of the actual W matrix is nonzero
    let w = w_matrix_at(cov, point)?;
    let pair_index = |pq: (usize, usize)| -> usize {
        let mut idx = 0;
        for p in 0..=n {
            for q in p + 1..=n {
                if (p, q) == pq {
                    return idx;
                }
                idx += 1;
            }
        }
        unreachable!()
    };
    let row_indices: Vec<usize> = rows.iter().map(|&pq| pair_index(pq)).collect();
    let det = w.minor(&row_indices, &cols)?;
    if det == 0 {
        return Err(Error::SoundnessAlarm(
            "witness minor evaluated to zero".into(),
        ));
    }
    Ok(WMinorWitness {
        rank_bound: n,
        rows,
        cols,
        value,
    })
}

/// Sampled evidence for the base-locus theorem: exact factorization check,
/// plus at every sampled interior (point, tangent) pair the certified bound
/// `rank W >= n` and the equalities `rank B = rank W = n` (with the minors
/// concentrated in the last `n` columns of `B`). Evidence only: a finite
/// sample never proves the theorem and every report says so.
#[derive(Clone, Debug)]
pub struct BaseLocusReport {
    pub prime: u64,
    pub seed: u64,
    pub samples: u64,
    pub twist: i64,
    pub a2_rank: usize,
    pub a2_required: usize,
    pub bw_exact: bool,
    pub rank_failures: u64,
    pub note: &'static str,
}

impl BaseLocusReport {
    pub fn passed(&self) -> bool {
        self.bw_exact && self.rank_failures == 0
    }
}

pub fn baselocus_evidence(
    cov: &FermatCover,
    prime: u64,
    samples: u64,
    seed: u64,
) -> Result<BaseLocusReport> {
    let n = cov.n();
    let m = cov.m();
    if m <= 2 * n + 1 {
        return Err(Error::Precondition(format!(
            "twist not negative: need m > 2n+1 = {}, got m = {m}",
            2 * n + 1
        )));
    }
    let a2 = a2_matrix(cov);
    let required = binom2(n + 1);
    let a2_rank = a2.rank();
    if a2_rank != required {
        return Err(Error::Precondition(format!(
            "pair-product matrix must have full row rank {required}, got {a2_rank}"
        )));
    }
    let bw_exact = verify_bw_factorization(cov)?;
    let mut sampler = CoverSampler::new(cov, prime, seed)?;
    let mut rank_failures = 0u64;
    for _ in 0..samples {
        let pt = sampler.sample()?;
        let witness = rank_w_minor(cov, &pt)?;
        let rk_w = w_matrix_at(cov, &pt)?.rank();
        let b = b_matrix_at(cov, &pt)?;
        let rk_b = b.rank();
        let b_last = Matrix::from_rows(
            PrimeField::new(pt.prime)?,
            (0..cov.k())
                .map(|j| (1..=n).map(|i| *b.at(j, i)).collect())
                .collect(),
        )?;
        let ok = witness.rank_bound == n && rk_w == n && rk_b == n && b_last.rank() == n;
        if !ok {
            rank_failures += 1;
        }
    }
    Ok(BaseLocusReport {
        prime,
        seed,
        samples,
        twist: (2 * n + 1) as i64 - m as i64,
        a2_rank,
        a2_required: required,
        bw_exact,
        rank_failures,
        note: "sampled evidence only: no counterexample found at the sampled points; \
               finite sampling does not prove base-locus avoidance",
    })
}

/// Finite-field cross-validation of the chart expressions: at sampled
/// points, the chart-0 value equals every chart-c value times the twist
/// factor `z_c^{2n+1-m}`. Returns the number of mismatches (expected 0).
pub fn sampled_chart_cross_check(
    sec: &TwistedSection,
    prime: u64,
    samples: u64,
    seed: u64,
) -> Result<u64> {
    let cov = sec.cover();
    let fp = PrimeField::new(prime)?;
    let mut sampler = CoverSampler::new(cov, prime, seed)?;
    let mut mismatches = 0u64;
    for _ in 0..samples {
        let pt = sampler.sample()?;
        let e0 = sec.chart_expr(0)?.eval_mod_p(&fp, &|v: Var| match v.flavor {
            crate::mpoly::Flavor::Base => pt.z[v.index],
            crate::mpoly::Flavor::Fiber => pt.zp[v.index],
        })?;
        for c in 1..=cov.big_n() {
            let zc_inv = fp.inv(&pt.z[c]).expect("interior point");
            let y: Vec<u64> = (0..=cov.big_n()).map(|i| fp.mul(&pt.z[i], &zc_inv)).collect();
            let yp: Vec<u64> = (0..=cov.big_n())
                .map(|i| {
                    let w = fp.sub(
                        &fp.mul(&pt.z[c], &pt.zp[i]),
                        &fp.mul(&pt.zp[c], &pt.z[i]),
                    );
                    fp.mul(&w, &fp.mul(&zc_inv, &zc_inv))
                })
                .collect();
            let ec = sec.chart_expr(c)?.eval_mod_p(&fp, &|v: Var| match v.flavor {
                crate::mpoly::Flavor::Base => y[v.index],
                crate::mpoly::Flavor::Fiber => yp[v.index],
            })?;
            let t = sec.twist();
            let factor = if t >= 0 {
                fp.pow(pt.z[c], t as u64)
            } else {
                fp.pow(zc_inv, (-t) as u64)
            };
            if e0 != fp.mul(&ec, &factor) {
                mismatches += 1;
            }
        }
    }
    Ok(mismatches)
}
