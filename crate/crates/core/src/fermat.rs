//! Fermat covers: complete intersections `Z_{n+j}^m = sum_i a_i^j Z_i^m` in
//! `P^{n+k}`, covering `P^n` via `[Z_i] -> [Z_i^m]` with ramification `m`
//! over each hyperplane. Points and tangents are sampled over prime fields
//! with `m | p-1` so that the m-th roots needed by the fibers exist.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arrangement::NormalizedArrangement;
use crate::error::{Error, Result};
use crate::exactalg::{default_prime, rational_mod_p, Field, Matrix, PrimeField, Rational};
use crate::mpoly::CoverIdealRewriter;

/// A Fermat cover `Y` in `P^N`, `N = n+k`, determined by the `k x (n+1)`
/// coefficient matrix of a normalized arrangement and the ramification `m`.
#[derive(Clone, PartialEq, Debug)]
pub struct FermatCover {
    n: usize,
    k: usize,
    m: usize,
    a: Vec<Vec<Rational>>,
}

impl FermatCover {
    /// Builds the cover of a normalized arrangement with ramification `m >= 2`.
    pub fn build(na: &NormalizedArrangement, m: usize) -> Result<Self> {
        Self::from_matrix(na.n(), na.k(), m, na.a_rows())
    }

    pub fn from_matrix(n: usize, k: usize, m: usize, a: Vec<Vec<Rational>>) -> Result<Self> {
        if m < 2 {
            return Err(Error::Precondition(format!("m = {m} must be >= 2")));
        }
        if a.len() != k || a.iter().any(|r| r.len() != n + 1) {
            return Err(Error::Shape(format!("A must be {k} x {}", n + 1)));
        }
        Ok(FermatCover { n, k, m, a })
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
    /// Ambient projective dimension `N = n + k`.
    pub fn big_n(&self) -> usize {
        self.n + self.k
    }
    pub fn a(&self) -> &[Vec<Rational>] {
        &self.a
    }

    /// Rewriter for the cover ideal in the given chart.
    pub fn rewriter(&self, chart: usize) -> Result<CoverIdealRewriter> {
        CoverIdealRewriter::new(self.n, self.k, self.m, self.a.clone(), chart)
    }

    /// Coefficients reduced modulo a sampling prime.
    pub fn a_mod_p(&self, fp: &PrimeField) -> Result<Vec<Vec<u64>>> {
        self.a
            .iter()
            .map(|row| row.iter().map(|x| rational_mod_p(x, fp)).collect())
            .collect()
    }

    /// All coefficients nonzero, as linear general position guarantees.
    pub fn require_generic_coefficients(&self) -> Result<()> {
        use num_traits::Zero;
        for (j, row) in self.a.iter().enumerate() {
            if let Some(i) = row.iter().position(|x| x.is_zero()) {
                return Err(Error::Precondition(format!(
                    "coefficient a_{i}^{} vanishes: the arrangement is not in linear \
                     general position",
                    j + 1
                )));
            }
        }
        Ok(())
    }

    /// The default sampling prime for this cover.
    pub fn default_prime(&self) -> u64 {
        default_prime(self.m as u64)
    }
}

/// A point of the cover with a tangent vector, in the chart `z_0 = 1`,
/// `z_0' = 0`, over `F_p`. Interior means all coordinates nonzero.
#[derive(Clone, PartialEq, Debug)]
pub struct CoverPoint {
    pub prime: u64,
    /// Coordinates `z_0..z_N`, `z[0] = 1`.
    pub z: Vec<u64>,
    /// Tangent `z_0'..z_N'`, `zp[0] = 0`, not all zero.
    pub zp: Vec<u64>,
}

impl CoverPoint {
    pub fn is_interior(&self) -> bool {
        self.z.iter().all(|&x| x != 0)
    }

    /// Checks all `2k` relations of the cover exactly in `F_p`.
    pub fn verify_relations(&self, cov: &FermatCover) -> Result<()> {
        let fp = PrimeField::new(self.prime)?;
        let a = cov.a_mod_p(&fp)?;
        let m = cov.m() as u64;
        for j in 1..=cov.k() {
            let mut fermat = fp.neg(&fp.pow(self.z[cov.n() + j], m));
            let mut tangent = fp.neg(&fp.mul(
                &fp.pow(self.z[cov.n() + j], m - 1),
                &self.zp[cov.n() + j],
            ));
            for i in 0..=cov.n() {
                fermat = fp.add(&fermat, &fp.mul(&a[j - 1][i], &fp.pow(self.z[i], m)));
                let t = fp.mul(&fp.pow(self.z[i], m - 1), &self.zp[i]);
                tangent = fp.add(&tangent, &fp.mul(&a[j - 1][i], &t));
            }
            if fermat != 0 || tangent != 0 {
                return Err(Error::SoundnessAlarm(format!(
                    "cover point violates relation {j}: fermat={fermat} tangent={tangent}"
                )));
            }
        }
        Ok(())
    }

    /// The projected point `[z_i^m]` on `P^n` (base coordinates only).
    pub fn projection(&self, cov: &FermatCover) -> Vec<u64> {
        let fp = PrimeField::new(self.prime).expect("prime validated at sampling");
        (0..=cov.n())
            .map(|i| fp.pow(self.z[i], cov.m() as u64))
            .collect()
    }
}

/// Rejection sampler for interior (point, tangent) pairs on a cover.
/// Acceptance probability is about `m^-k` per trial.
pub struct CoverSampler {
    cov: FermatCover,
    fp: PrimeField,
    a: Vec<Vec<u64>>,
    rng: ChaCha8Rng,
    budget_per_point: u64,
    trials: u64,
    accepted: u64,
}

impl CoverSampler {
    pub fn new(cov: &FermatCover, prime: u64, seed: u64) -> Result<Self> {
        let fp = PrimeField::new(prime)?;
        if (prime - 1) % cov.m() as u64 != 0 {
            return Err(Error::Precondition(format!(
                "prime {prime} is not 1 mod m = {}",
                cov.m()
            )));
        }
        let a = cov.a_mod_p(&fp)?;
        Ok(CoverSampler {
            cov: cov.clone(),
            fp,
            a,
            rng: ChaCha8Rng::seed_from_u64(seed),
            budget_per_point: 10_000_000,
            trials: 0,
            accepted: 0,
        })
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget_per_point = budget;
        self
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }
    pub fn accepted(&self) -> u64 {
        self.accepted
    }

    /// One rejection trial: `Some(point)` on acceptance.
    fn try_once(&mut self) -> Option<CoverPoint> {
        let (n, k, m) = (self.cov.n(), self.cov.k(), self.cov.m() as u64);
        let fp = &self.fp;
        let p = fp.p();
        self.trials += 1;

        let mut z = vec![0u64; self.cov.big_n() + 1];
        z[0] = 1;
        for zi in z.iter_mut().take(n + 1).skip(1) {
            *zi = self.rng.gen_range(1..p);
        }
        let zm: Vec<u64> = (0..=n).map(|i| fp.pow(z[i], m)).collect();
        for j in 1..=k {
            let mut c = 0u64;
            for i in 0..=n {
                c = fp.add(&c, &fp.mul(&self.a[j - 1][i], &zm[i]));
            }
            if c == 0 || !fp.is_mth_power_residue(c, m).expect("m | p-1") {
                return None;
            }
            z[n + j] = fp
                .mth_root(c, m)
                .expect("m | p-1")
                .expect("residue test passed");
        }

        let mut zp = vec![0u64; self.cov.big_n() + 1];
        loop {
            for zpi in zp.iter_mut().take(n + 1).skip(1) {
                *zpi = self.rng.gen_range(0..p);
            }
            if zp[1..=n].iter().any(|&x| x != 0) {
                break;
            }
        }
        for j in 1..=k {
            let mut s = 0u64;
            for i in 1..=n {
                let t = fp.mul(&fp.pow(z[i], m - 1), &zp[i]);
                s = fp.add(&s, &fp.mul(&self.a[j - 1][i], &t));
            }
            let denom_inv = fp
                .inv(&fp.pow(z[n + j], m - 1))
                .expect("z_{n+j} is nonzero");
            zp[n + j] = fp.mul(&s, &denom_inv);
        }

        self.accepted += 1;
        Some(CoverPoint {
            prime: p,
            z,
            zp,
        })
    }

    /// Next interior (point, tangent) pair, verified against all relations.
    pub fn sample(&mut self) -> Result<CoverPoint> {
        for _ in 0..self.budget_per_point {
            if let Some(pt) = self.try_once() {
                pt.verify_relations(&self.cov)?;
                debug_assert!(pt.is_interior());
                return Ok(pt);
            }
        }
        Err(Error::SamplingBudget {
            trials: self.budget_per_point,
        })
    }
}

/// Samples one interior (point, tangent) pair on the cover.
pub fn sample_point(cov: &FermatCover, prime: u64, seed: u64) -> Result<CoverPoint> {
    CoverSampler::new(cov, prime, seed)?.sample()
}

/// Report of a probabilistic smoothness probe: at each sampled point the
/// `k x (N+1)` Jacobian of the defining equations has rank `k`. Evidence
/// only, never a proof.
#[derive(Clone, Debug)]
pub struct SmoothnessReport {
    pub prime: u64,
    pub seed: u64,
    pub samples: u64,
    pub singular_found: u64,
}

pub fn smoothness_probe(
    cov: &FermatCover,
    prime: u64,
    samples: u64,
    seed: u64,
) -> Result<SmoothnessReport> {
    cov.require_generic_coefficients()?;
    if cov.k() == 0 {
        return Ok(SmoothnessReport {
            prime,
            seed,
            samples: 0,
            singular_found: 0,
        });
    }
    let fp = PrimeField::new(prime)?;
    let a = cov.a_mod_p(&fp)?;
    let mut sampler = CoverSampler::new(cov, prime, seed)?;
    let (n, k, m) = (cov.n(), cov.k(), cov.m() as u64);
    let mut singular = 0u64;
    for _ in 0..samples {
        let pt = sampler.sample()?;
        // Jacobian of F_j = Z_{n+j}^m - sum_i a_i^j Z_i^m
        let rows: Vec<Vec<u64>> = (1..=k)
            .map(|j| {
                (0..=cov.big_n())
                    .map(|col| {
                        if col <= n {
                            let d = fp.mul(&(m % fp.p()), &fp.mul(&a[j - 1][col], &fp.pow(pt.z[col], m - 1)));
                            fp.neg(&d)
                        } else if col == n + j {
                            fp.mul(&(m % fp.p()), &fp.pow(pt.z[col], m - 1))
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect();
        let jac = Matrix::from_rows(fp, rows)?;
        if jac.rank() != k {
            singular += 1;
        }
    }
    Ok(SmoothnessReport {
        prime,
        seed,
        samples,
        singular_found: singular,
    })
}

/// Whether standard lines exist on a generic complete intersection of `k`
/// Fermat hypersurfaces in `P^{n+k}`: the coordinate set `{0..n+k}` must
/// admit a partition into at least two parts of size at least `k+1`, which
/// happens exactly when `k <= n-1`. Returns a witness partition when true.
pub fn standard_lines_exist(n: usize, k: usize) -> Result<(bool, Option<Vec<Vec<usize>>>)> {
    if n < 1 || k < 1 {
        return Err(Error::Precondition("need n >= 1 and k >= 1".into()));
    }
    if k <= n - 1 {
        let first: Vec<usize> = (0..=k).collect();
        let second: Vec<usize> = (k + 1..=n + k).collect();
        debug_assert!(second.len() >= k + 1);
        Ok((true, Some(vec![first, second])))
    } else {
        Ok((false, None))
    }
}
