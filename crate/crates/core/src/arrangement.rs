//! Hyperplane arrangements in `P^n`: linear and quadric general-position
//! checks, normalization to coordinate form, the pair-product matrix of the
//! normalized coefficients, and stratum-wise subarrangement selection.

use itertools::Itertools;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactalg::{Matrix, Rational, Rationals};

/// Orbifold multiplicity attached to a hyperplane.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Multiplicity {
    Finite(u64),
    Infinite,
}

impl Multiplicity {
    pub fn at_least(&self, t: u64) -> bool {
        match self {
            Multiplicity::Finite(m) => *m >= t,
            Multiplicity::Infinite => true,
        }
    }

    /// The orbifold coefficient `1 - 1/m` (1 for infinite multiplicity).
    pub fn coefficient(&self) -> Rational {
        match self {
            Multiplicity::Finite(m) => {
                crate::exactalg::rat(1, 1) - crate::exactalg::rat(1, *m as i64)
            }
            Multiplicity::Infinite => crate::exactalg::rat(1, 1),
        }
    }
}

impl std::fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Multiplicity::Finite(m) => write!(f, "{m}"),
            Multiplicity::Infinite => write!(f, "inf"),
        }
    }
}

/// An arrangement of `d` hyperplanes in `P^n`, each given by a covector up to
/// scale. Covectors are stored in the canonical scale (first nonzero entry
/// is 1); repeated hyperplanes are rejected.
#[derive(Clone, PartialEq, Debug)]
pub struct Arrangement {
    n: usize,
    covectors: Vec<Vec<Rational>>,
    multiplicities: Option<Vec<Multiplicity>>,
}

/// Scales a covector so its first nonzero entry is 1.
pub fn canonical_scale(v: &[Rational]) -> Result<Vec<Rational>> {
    let lead = v
        .iter()
        .find(|x| !x.is_zero())
        .ok_or_else(|| Error::Degenerate("zero covector".into()))?
        .clone();
    Ok(v.iter().map(|x| x / &lead).collect())
}

impl Arrangement {
    pub fn new(
        n: usize,
        covectors: Vec<Vec<Rational>>,
        multiplicities: Option<Vec<Multiplicity>>,
    ) -> Result<Self> {
        if covectors.is_empty() {
            return Err(Error::Precondition("an arrangement needs d >= 1".into()));
        }
        if covectors.iter().any(|v| v.len() != n + 1) {
            return Err(Error::Shape(format!(
                "covectors must have length n+1 = {}",
                n + 1
            )));
        }
        let covectors: Vec<Vec<Rational>> = covectors
            .iter()
            .map(|v| canonical_scale(v))
            .collect::<Result<_>>()?;
        for (i, v) in covectors.iter().enumerate() {
            for (j, w) in covectors.iter().enumerate().skip(i + 1) {
                if v == w {
                    return Err(Error::Degenerate(format!(
                        "hyperplanes {i} and {j} coincide"
                    )));
                }
            }
        }
        if let Some(ms) = &multiplicities {
            if ms.len() != covectors.len() {
                return Err(Error::Shape(
                    "multiplicities must match the number of hyperplanes".into(),
                ));
            }
            if let Some(bad) = ms
                .iter()
                .position(|m| matches!(m, Multiplicity::Finite(v) if *v < 2))
            {
                return Err(Error::Precondition(format!(
                    "multiplicity of hyperplane {bad} must be >= 2 or inf"
                )));
            }
        }
        Ok(Arrangement {
            n,
            covectors,
            multiplicities,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn d(&self) -> usize {
        self.covectors.len()
    }
    pub fn covector(&self, i: usize) -> &[Rational] {
        &self.covectors[i]
    }
    pub fn covectors(&self) -> &[Vec<Rational>] {
        &self.covectors
    }
    pub fn multiplicities(&self) -> Option<&[Multiplicity]> {
        self.multiplicities.as_deref()
    }

    pub fn with_multiplicities(&self, ms: Vec<Multiplicity>) -> Result<Self> {
        Arrangement::new(self.n, self.covectors.clone(), Some(ms))
    }

    fn subset_matrix(&self, subset: &[usize]) -> Matrix<Rationals> {
        Matrix::from_rows(
            Rationals,
            subset.iter().map(|&i| self.covectors[i].clone()).collect(),
        )
        .expect("covectors are rectangular")
    }

    /// Linear general position: every `n+1` covectors are independent.
    pub fn check_linear_general_position(&self, mode: CheckMode) -> LinearVerdict {
        let n = self.n;
        let d = self.d();
        if d < n + 1 {
            return LinearVerdict::Insufficient;
        }
        match mode {
            CheckMode::Exhaustive => {
                for subset in (0..d).combinations(n + 1) {
                    if self.subset_matrix(&subset).det().unwrap().is_zero() {
                        return LinearVerdict::Fail { witness: subset };
                    }
                }
                LinearVerdict::Pass
            }
            CheckMode::Randomized { seed, trials } => {
                use rand::seq::SliceRandom;
                use rand::SeedableRng;
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                let mut indices: Vec<usize> = (0..d).collect();
                for _ in 0..trials {
                    indices.shuffle(&mut rng);
                    let mut subset: Vec<usize> = indices[..n + 1].to_vec();
                    subset.sort_unstable();
                    if self.subset_matrix(&subset).det().unwrap().is_zero() {
                        return LinearVerdict::Fail { witness: subset };
                    }
                }
                // Monte Carlo cannot certify the positive answer
                LinearVerdict::Undecided
            }
        }
    }

    /// The `d x binom(n+2,2)` evaluation matrix of all degree-2 monomials at
    /// the dual points of the arrangement, monomials `x_p x_q` (p <= q) in
    /// lexicographic order.
    pub fn veronese_matrix(&self) -> Matrix<Rationals> {
        let n = self.n;
        let pairs: Vec<(usize, usize)> = (0..=n)
            .flat_map(|p| (p..=n).map(move |q| (p, q)))
            .collect();
        let rows: Vec<Vec<Rational>> = self
            .covectors
            .iter()
            .map(|v| pairs.iter().map(|&(p, q)| &v[p] * &v[q]).collect())
            .collect();
        Matrix::from_rows(Rationals, rows).expect("rectangular")
    }

    /// Quadric general position: the dual points do not all lie on a quadric,
    /// i.e. the Veronese matrix has full column rank `binom(n+2,2)`.
    ///
    /// Callers are expected to have verified linear general position first.
    pub fn check_quadric_general_position(&self) -> QuadricVerdict {
        let required = binom2(self.n + 2);
        if self.d() < required {
            return QuadricVerdict::TooFew { required };
        }
        let rank = self.veronese_matrix().rank();
        if rank == required {
            QuadricVerdict::Pass
        } else {
            QuadricVerdict::OnQuadric { rank }
        }
    }

    /// Normalization: a coordinate change sending the pivot hyperplanes to
    /// the coordinate hyperplanes (in pivot order), and the coefficient
    /// matrix of the remaining covectors in the new coordinates.
    ///
    /// The default pivot is the lexicographically first independent
    /// `(n+1)`-subset.
    pub fn normalize(&self, pivot: Option<Vec<usize>>) -> Result<NormalizedArrangement> {
        let n = self.n;
        let d = self.d();
        if d < n + 1 {
            return Err(Error::Precondition(format!(
                "normalization needs d >= n+1 = {}",
                n + 1
            )));
        }
        let pivot = match pivot {
            Some(p) => {
                if p.len() != n + 1 {
                    return Err(Error::Shape(format!("pivot must have size n+1 = {}", n + 1)));
                }
                if p.iter().any(|&i| i >= d) {
                    return Err(Error::Index("pivot index out of range".into()));
                }
                if p.iter().duplicates().next().is_some() {
                    return Err(Error::Index("repeated pivot index".into()));
                }
                if self.subset_matrix(&p).det()?.is_zero() {
                    return Err(Error::Degenerate("dependent pivot subset".into()));
                }
                p
            }
            None => (0..d)
                .combinations(n + 1)
                .find(|s| !self.subset_matrix(s).det().unwrap().is_zero())
                .ok_or_else(|| Error::Degenerate("no independent (n+1)-subset".into()))?,
        };

        let p_matrix = self.subset_matrix(&pivot);
        let change = p_matrix
            .inverse()?
            .expect("pivot matrix is invertible by construction");
        let others: Vec<usize> = (0..d).filter(|i| !pivot.contains(i)).collect();
        let a_rows: Vec<Vec<Rational>> = others
            .iter()
            .map(|&j| canonical_scale(&change.apply_covector(&self.covectors[j]).unwrap()))
            .collect::<Result<_>>()?;
        let a = Matrix::from_rows(Rationals, a_rows)?;
        Ok(NormalizedArrangement {
            base: self.clone(),
            pivot,
            others,
            change,
            a,
        })
    }
}

/// Subset checking strategy for the linear general-position test.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CheckMode {
    Exhaustive,
    Randomized { seed: u64, trials: u64 },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LinearVerdict {
    Pass,
    Fail { witness: Vec<usize> },
    /// Randomized mode found no dependent subset; only exhaustive checks certify.
    Undecided,
    /// Fewer than n+1 hyperplanes.
    Insufficient,
}

impl LinearVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, LinearVerdict::Pass)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum QuadricVerdict {
    Pass,
    /// The dual points lie on a quadric: Veronese rank fell short.
    OnQuadric { rank: usize },
    /// Fewer than binom(n+2,2) hyperplanes.
    TooFew { required: usize },
}

impl QuadricVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, QuadricVerdict::Pass)
    }
}

pub fn binom2(n: usize) -> usize {
    n * (n - 1) / 2
}

/// An arrangement together with the coordinate change that puts its pivot
/// hyperplanes at the coordinate hyperplanes, and the coefficient matrix `A`
/// expressing every other hyperplane in the pivot basis.
#[derive(Clone, Debug)]
pub struct NormalizedArrangement {
    base: Arrangement,
    pivot: Vec<usize>,
    /// Original indices of the non-pivot hyperplanes, in original order;
    /// row `j` of `A` is the covector of `others[j]` in the new coordinates.
    others: Vec<usize>,
    change: Matrix<Rationals>,
    a: Matrix<Rationals>,
}

impl NormalizedArrangement {
    pub fn base(&self) -> &Arrangement {
        &self.base
    }
    pub fn pivot(&self) -> &[usize] {
        &self.pivot
    }
    pub fn others(&self) -> &[usize] {
        &self.others
    }
    pub fn change(&self) -> &Matrix<Rationals> {
        &self.change
    }
    pub fn n(&self) -> usize {
        self.base.n()
    }
    pub fn k(&self) -> usize {
        self.a.nrows()
    }
    /// The k x (n+1) coefficient matrix: row j holds the coefficients of the
    /// relation expressing hyperplane `others[j]` in the pivot hyperplanes.
    pub fn a(&self) -> &Matrix<Rationals> {
        &self.a
    }

    pub fn a_rows(&self) -> Vec<Vec<Rational>> {
        self.a.to_rows()
    }

    /// In linear general position every entry of `A` is nonzero; a zero entry
    /// yields the dependent `(n+1)`-subset witnessing the failure.
    pub fn verify_entries_nonzero(&self) -> std::result::Result<(), Vec<usize>> {
        for j in 0..self.a.nrows() {
            for i in 0..self.a.ncols() {
                if self.a.at(j, i).is_zero() {
                    let mut witness: Vec<usize> = self
                        .pivot
                        .iter()
                        .enumerate()
                        .filter(|&(pos, _)| pos != i)
                        .map(|(_, &orig)| orig)
                        .collect();
                    witness.push(self.others[j]);
                    witness.sort_unstable();
                    return Err(witness);
                }
            }
        }
        Ok(())
    }

    /// The `binom(n+1,2) x k` matrix of pairwise products: row `(p<q)` in
    /// lexicographic order, entry `a_p^j a_q^j` at column `j`.
    pub fn build_a2(&self) -> A2Matrix {
        let n = self.n();
        let k = self.k();
        let pairs: Vec<(usize, usize)> = (0..=n)
            .flat_map(|p| (p + 1..=n).map(move |q| (p, q)))
            .collect();
        let rows: Vec<Vec<Rational>> = pairs
            .iter()
            .map(|&(p, q)| (0..k).map(|j| self.a.at(j, p) * self.a.at(j, q)).collect())
            .collect();
        A2Matrix {
            pairs,
            entries: Matrix::from_rows(Rationals, rows).expect("rectangular"),
        }
    }
}

/// The pair-product matrix of a normalized arrangement. Its determinant (in
/// the square case `d = binom(n+2,2)`) detects quadric genericity.
#[derive(Clone, Debug)]
pub struct A2Matrix {
    pairs: Vec<(usize, usize)>,
    entries: Matrix<Rationals>,
}

impl A2Matrix {
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }
    pub fn matrix(&self) -> &Matrix<Rationals> {
        &self.entries
    }
    pub fn nrows(&self) -> usize {
        self.entries.nrows()
    }
    pub fn ncols(&self) -> usize {
        self.entries.ncols()
    }
    pub fn rank(&self) -> usize {
        self.entries.rank()
    }
}

/// Algebraic quadric-genericity test in the square case: after normalizing at
/// the first `n+1` hyperplanes, quadric general position is equivalent to
/// `det A2 != 0`. Property-tested against the Veronese rank criterion.
pub fn a2_equivalence_check(na: &NormalizedArrangement) -> Result<bool> {
    let n = na.n();
    let d = na.base().d();
    if d != binom2(n + 2) + 0 {
        // binom(n+2,2)
        return Err(Error::Precondition(format!(
            "square case needs d = binom(n+2,2) = {}, got {d}",
            binom2(n + 2)
        )));
    }
    if na.pivot() != (0..=n).collect::<Vec<_>>() {
        return Err(Error::Precondition(
            "square-case test requires pivot = first n+1 hyperplanes".into(),
        ));
    }
    if !na
        .base()
        .check_linear_general_position(CheckMode::Exhaustive)
        .passed()
    {
        return Err(Error::Precondition(
            "linear general position must hold first".into(),
        ));
    }
    let a2 = na.build_a2();
    Ok(!a2.matrix().det()?.is_zero())
}

/// A deterministic basis of the intersection `L = cap_{i in I} H_i`, as an
/// `(n+1) x (dim L + 1)` matrix whose columns span the kernel of the covector
/// matrix of `I` (reduced row echelon, free columns ascending).
pub fn stratum_basis(arr: &Arrangement, removed: &[usize]) -> Result<Matrix<Rationals>> {
    let n = arr.n();
    let rows: Vec<Vec<Rational>> = removed.iter().map(|&i| arr.covector(i).to_vec()).collect();
    let mut m = rows;
    let ncols = n + 1;
    // row reduce
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let delta = &f * &m[r][j];
                    m[i][j] = &m[i][j] - &delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if r != removed.len() {
        return Err(Error::Degenerate(
            "removed hyperplanes are not independent".into(),
        ));
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut basis_cols: Vec<Vec<Rational>> = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut col = vec![Rational::zero(); ncols];
        col[fc] = crate::exactalg::rat(1, 1);
        for (row_idx, &pc) in pivots.iter().enumerate() {
            col[pc] = -m[row_idx][fc].clone();
        }
        basis_cols.push(col);
    }
    // assemble (n+1) x (free count) matrix
    let rows: Vec<Vec<Rational>> = (0..ncols)
        .map(|i| basis_cols.iter().map(|col| col[i].clone()).collect())
        .collect();
    Matrix::from_rows(Rationals, rows)
}

/// Restriction of a covector to the stratum spanned by `basis`.
pub fn restrict_covector(v: &[Rational], basis: &Matrix<Rationals>) -> Vec<Rational> {
    (0..basis.ncols())
        .map(|j| {
            let mut acc = Rational::zero();
            for (i, vi) in v.iter().enumerate() {
                acc += vi * basis.at(i, j);
            }
            acc
        })
        .collect()
}

/// Selects, on the stratum obtained by removing the hyperplanes indexed by
/// `removed`, a subarrangement of at least `binom(n-|I|+2,2)` surviving
/// hyperplanes whose restrictions pass both general-position checks.
///
/// The search prefers candidates suggested by Laplace expansion of the
/// pair-product matrix (column subsets with a nonzero block minor), and falls
/// back to exhaustive subset search; exhausting the search on a valid input
/// contradicts the existence lemma and is reported as a soundness alarm.
pub fn select_subarrangement(arr: &Arrangement, removed: &[usize]) -> Result<Vec<usize>> {
    let n = arr.n();
    let d = arr.d();
    let mut removed = removed.to_vec();
    removed.sort_unstable();
    if removed.iter().duplicates().next().is_some() {
        return Err(Error::Index("repeated index in removed set".into()));
    }
    if removed.iter().any(|&i| i >= d) {
        return Err(Error::Index("removed index out of range".into()));
    }
    if removed.len() > n.saturating_sub(1) {
        return Err(Error::Precondition(format!(
            "|I| = {} exceeds n-1 = {}",
            removed.len(),
            n.saturating_sub(1)
        )));
    }
    if d < binom2(n + 2) {
        return Err(Error::Precondition(format!(
            "need d >= binom(n+2,2) = {}",
            binom2(n + 2)
        )));
    }
    if !arr
        .check_linear_general_position(CheckMode::Exhaustive)
        .passed()
    {
        return Err(Error::Precondition("linear general position fails".into()));
    }
    if !arr.check_quadric_general_position().passed() {
        return Err(Error::Precondition("quadric general position fails".into()));
    }
    if removed.is_empty() {
        return Ok((0..d).collect());
    }

    let np = n - removed.len(); // stratum dimension
    let target = binom2(np + 2);
    let survivors: Vec<usize> = (0..d).filter(|i| !removed.contains(i)).collect();
    let basis = stratum_basis(arr, &removed)?;

    let verify = |subset: &[usize]| -> bool {
        let covs: Vec<Vec<Rational>> = subset
            .iter()
            .map(|&s| restrict_covector(arr.covector(s), &basis))
            .collect();
        let Ok(restricted) = Arrangement::new(np, covs, None) else {
            return false;
        };
        restricted
            .check_linear_general_position(CheckMode::Exhaustive)
            .passed()
            && restricted.check_quadric_general_position().passed()
    };

    // Laplace-guided: extend the removed set to a pivot, ordered so the
    // removed hyperplanes occupy the last coordinates, then look for column
    // subsets whose restricted pair-product block has nonzero determinant.
    let mut pivot_survivors: Vec<usize> = Vec::new();
    {
        let mut chosen = removed.clone();
        for i in &survivors {
            if chosen.len() == n + 1 {
                break;
            }
            let mut trial = chosen.clone();
            trial.push(*i);
            let mrows: Vec<Vec<Rational>> =
                trial.iter().map(|&t| arr.covector(t).to_vec()).collect();
            if Matrix::from_rows(Rationals, mrows)?.rank() == trial.len() {
                chosen.push(*i);
                pivot_survivors.push(*i);
            }
        }
    }
    if pivot_survivors.len() == np + 1 {
        let mut pivot_order = pivot_survivors.clone();
        pivot_order.extend_from_slice(&removed);
        let na = arr.normalize(Some(pivot_order))?;
        let non_pivot: Vec<usize> = (0..na.others().len())
            .filter(|&j| !removed.contains(&na.others()[j]))
            .collect();
        let block = binom2(np + 1);
        for cols in non_pivot.iter().copied().combinations(block) {
            // restricted pair-product minor over surviving pivot coordinates
            let pairs: Vec<(usize, usize)> = (0..=np)
                .flat_map(|p| (p + 1..=np).map(move |q| (p, q)))
                .collect();
            let rows: Vec<Vec<Rational>> = pairs
                .iter()
                .map(|&(p, q)| {
                    cols.iter()
                        .map(|&j| na.a().at(j, p) * na.a().at(j, q))
                        .collect()
                })
                .collect();
            if Matrix::from_rows(Rationals, rows)?.det()?.is_zero() {
                continue;
            }
            let mut subset: Vec<usize> = pivot_survivors.clone();
            subset.extend(cols.iter().map(|&j| na.others()[j]));
            subset.sort_unstable();
            if verify(&subset) {
                return Ok(subset);
            }
        }
    }

    // exhaustive fallback over all subsets of the right size
    for subset in survivors.iter().copied().combinations(target) {
        if verify(&subset) {
            return Ok(subset);
        }
    }
    Err(Error::SoundnessAlarm(format!(
        "no quadric-general subarrangement of size {target} found on stratum {removed:?}; \
         this contradicts the selection lemma for valid inputs"
    )))
}
