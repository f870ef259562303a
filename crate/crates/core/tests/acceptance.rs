//! Acceptance suite: one test per criterion, each printing a single
//! PASS/FAIL line (visible with `cargo test --test acceptance -- --nocapture`)
//! and enforcing its stated wall-clock budget. Everything is exact or
//! seed-deterministic; there are no tolerances to tune.

use std::time::Instant;

use covercert::arrangement::{
    a2_equivalence_check, restrict_covector, select_subarrangement, stratum_basis, Arrangement,
    CheckMode, Multiplicity,
};
use covercert::certify::{certify_hyperbolicity, thresholds, CertifyOptions, EvidenceParams};
use covercert::differentials::{
    baselocus_evidence, extra_vanishing_order, verify_bw_factorization,
    verify_chart_compatibility, verify_cramer_annihilation, TwistedSection,
};
use covercert::error::Error;
use covercert::exactalg::{rat, Matrix, PrimeField, Rational, Rationals};
use covercert::fermat::{standard_lines_exist, FermatCover};
use covercert::mpoly::{MPoly, Var};
use covercert::random::{
    random_linear_general_arrangement, random_polynomials, random_quadric_general_arrangement,
};

struct Criterion {
    index: u32,
    name: &'static str,
    budget_secs: Option<u64>,
    start: Instant,
}

impl Criterion {
    fn start(index: u32, name: &'static str, budget_secs: Option<u64>) -> Self {
        Criterion {
            index,
            name,
            budget_secs,
            start: Instant::now(),
        }
    }

    fn finish(self, ok: bool) {
        let elapsed = self.start.elapsed();
        let within = self
            .budget_secs
            .map_or(true, |b| elapsed.as_secs_f64() < b as f64);
        println!(
            "ACCEPTANCE {} [{}]: {} ({:.2}s{})",
            self.index,
            self.name,
            if ok && within { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            self.budget_secs
                .map_or(String::new(), |b| format!(" / budget {b}s")),
        );
        assert!(ok, "criterion {} failed", self.index);
        assert!(
            within,
            "criterion {} exceeded its {}s budget ({:.2}s)",
            self.index,
            self.budget_secs.unwrap_or(0),
            elapsed.as_secs_f64()
        );
    }
}

fn noguchi_cover(seed: u64) -> (Arrangement, FermatCover) {
    let arr = random_quadric_general_arrangement(2, 6, seed);
    let na = arr.normalize(None).unwrap();
    let cov = FermatCover::build(&na, 6).unwrap();
    (arr, cov)
}

/// Six dual points on the conic x0 x2 = x1^2.
fn dual_conic_arrangement() -> Arrangement {
    let mut rows: Vec<Vec<Rational>> = (0..5)
        .map(|t: i64| vec![rat(1, 1), rat(t, 1), rat(t * t, 1)])
        .collect();
    rows.push(vec![rat(0, 1), rat(0, 1), rat(1, 1)]);
    Arrangement::new(2, rows, None).unwrap()
}

/// Criterion 1: the Noguchi instance (n=2, d=6, m=6): general position both
/// ways, then every exact identity of the explicit section.
#[test]
fn acceptance_1_noguchi_exact_identities() {
    let c = Criterion::start(1, "Noguchi instance, exact identities", Some(60));
    let (arr, cov) = noguchi_cover(20260810);
    let mut ok = arr
        .check_linear_general_position(CheckMode::Exhaustive)
        .passed();
    ok &= arr.check_quadric_general_position().passed();

    ok &= verify_cramer_annihilation(&cov, &[3, 4]).unwrap();
    let sec = TwistedSection::build(&cov, &[3, 4]).unwrap();
    for chart in [1, 2, 3] {
        ok &= verify_chart_compatibility(&sec, 0, chart).unwrap();
    }
    ok &= verify_bw_factorization(&cov).unwrap(); // all 9 (j, i1) pairs
    c.finish(ok);
}

/// Criterion 2: the determinant test on the pair-product matrix agrees with
/// the Veronese rank criterion on 150 random square-case arrangements, and
/// both reject the constructed dual-conic degeneration.
#[test]
fn acceptance_2_a2_veronese_equivalence() {
    let c = Criterion::start(2, "pair-product/Veronese equivalence", Some(300));
    let mut ok = true;
    for seed in 0..100u64 {
        let arr = random_linear_general_arrangement(2, 6, 1000 + seed);
        let na = arr.normalize(Some((0..=2).collect())).unwrap();
        let alg = a2_equivalence_check(&na).unwrap();
        let rank = arr.check_quadric_general_position().passed();
        ok &= alg == rank;
    }
    for seed in 0..50u64 {
        let arr = random_linear_general_arrangement(3, 10, 2000 + seed);
        let na = arr.normalize(Some((0..=3).collect())).unwrap();
        let alg = a2_equivalence_check(&na).unwrap();
        let rank = arr.check_quadric_general_position().passed();
        ok &= alg == rank;
    }
    let conic = dual_conic_arrangement();
    let na = conic.normalize(Some((0..=2).collect())).unwrap();
    ok &= !a2_equivalence_check(&na).unwrap();
    ok &= !conic.check_quadric_general_position().passed();
    c.finish(ok);
}

/// Criterion 3: 1000 sampled interior (point, tangent) pairs on the Noguchi
/// cover all certify rank W >= n, with rank B = rank W, zero counterexamples.
#[test]
fn acceptance_3_baselocus_rank_sampling() {
    let c = Criterion::start(3, "base-locus rank evidence, 1000 samples", Some(120));
    let (_, cov) = noguchi_cover(31);
    let report = baselocus_evidence(&cov, cov.default_prime(), 1000, 42).unwrap();
    let ok = report.bw_exact && report.rank_failures == 0 && report.samples == 1000;
    c.finish(ok);
}

/// Criterion 4: the extra vanishing order is exactly m-1 for the chart pairs
/// (0,1) and (0,n+1), on covers with (n,m) in {(2,6), (2,7), (3,8)}.
#[test]
fn acceptance_4_extra_vanishing_orders() {
    let c = Criterion::start(4, "extra vanishing m-1 across covers", None);
    let mut ok = true;
    let cases: [(usize, usize, usize, u64); 3] =
        [(2, 6, 6, 401), (2, 6, 7, 402), (3, 10, 8, 403)];
    for (n, d, m, seed) in cases {
        let arr = random_quadric_general_arrangement(n, d, seed);
        let na = arr.normalize(None).unwrap();
        let cov = FermatCover::build(&na, m).unwrap();
        let rows = TwistedSection::default_rows(&cov);
        let sec = TwistedSection::build(&cov, &rows).unwrap();
        let expected = (m - 1) as u64;
        ok &= extra_vanishing_order(&sec, 0, 1).unwrap() == expected;
        ok &= extra_vanishing_order(&sec, 0, n + 1).unwrap() == expected;
    }
    c.finish(ok);
}

/// Criterion 5: standard-line existence matches exhaustive partition
/// enumeration on all 36 cases with n, k <= 6, and is false iff k >= n.
#[test]
fn acceptance_5_standard_lines_table() {
    let c = Criterion::start(5, "standard lines vs partition oracle", None);

    // independent oracle: partition {0..n+k} into >= 2 parts of size >= k+1
    fn oracle(n: usize, k: usize) -> bool {
        fn rec(remaining: usize, min_part: usize, parts: usize) -> bool {
            if remaining == 0 {
                return parts >= 2;
            }
            for take in min_part..=remaining {
                if rec(remaining - take, min_part, parts + 1) {
                    return true;
                }
            }
            false
        }
        rec(n + k + 1, k + 1, 0)
    }

    let mut ok = true;
    for n in 1..=6 {
        for k in 1..=6 {
            let (exists, witness) = standard_lines_exist(n, k).unwrap();
            ok &= exists == oracle(n, k);
            ok &= exists == (k < n);
            if let Some(parts) = witness {
                ok &= parts.len() >= 2 && parts.iter().all(|p| p.len() >= k + 1);
                let mut all: Vec<usize> = parts.concat();
                all.sort_unstable();
                ok &= all == (0..=n + k).collect::<Vec<_>>();
            } else {
                ok &= !exists;
            }
        }
    }
    c.finish(ok);
}

/// Criterion 6: threshold values and the monotonicity of the bigness bound.
#[test]
fn acceptance_6_thresholds() {
    let c = Criterion::start(6, "threshold calculator", None);
    let mut ok = true;
    let t2 = thresholds(2, None).unwrap();
    ok &= t2.d_quadric == 6 && t2.m_min == 6;
    ok &= thresholds(3, None).unwrap().d_quadric == 10;
    ok &= thresholds(2, Some(3)).unwrap().d_big == Some(20);
    let mut prev = u64::MAX;
    for m in 3..=50 {
        let d = thresholds(2, Some(m)).unwrap().d_big.unwrap();
        ok &= d <= prev;
        prev = d;
    }
    c.finish(ok);
}

/// Criterion 7: the subarrangement-selection pipeline on 20 random n=3, d=10
/// arrangements and every |I| = 1 stratum: at least binom(4,2) = 6 survivors
/// whose restriction passes both checks in P^2; zero soundness alarms.
#[test]
fn acceptance_7_selection_pipeline() {
    let c = Criterion::start(7, "selection lemma pipeline", Some(600));
    let mut ok = true;
    let mut alarms = 0u32;
    for seed in 0..20u64 {
        let arr = random_quadric_general_arrangement(3, 10, 3000 + seed);
        for i in 0..10usize {
            match select_subarrangement(&arr, &[i]) {
                Ok(sel) => {
                    ok &= sel.len() >= 6;
                    let basis = stratum_basis(&arr, &[i]).unwrap();
                    let covs: Vec<Vec<Rational>> = sel
                        .iter()
                        .map(|&s| restrict_covector(arr.covector(s), &basis))
                        .collect();
                    let restricted = Arrangement::new(2, covs, None).unwrap();
                    ok &= restricted
                        .check_linear_general_position(CheckMode::Exhaustive)
                        .passed();
                    ok &= restricted.check_quadric_general_position().passed();
                }
                Err(Error::SoundnessAlarm(_)) => alarms += 1,
                Err(_) => ok = false,
            }
        }
    }
    c.finish(ok && alarms == 0);
}

/// Criterion 8: certification of the Noguchi instance passes; lowering one
/// multiplicity to 5 flips it to fail with the offending hyperplane as
/// witness; re-running with the same seed is byte-identical.
#[test]
fn acceptance_8_certificates() {
    let c = Criterion::start(8, "hyperbolicity certificates", None);
    let mut ok = true;
    let arr = random_quadric_general_arrangement(2, 6, 808)
        .with_multiplicities(vec![Multiplicity::Finite(6); 6])
        .unwrap();
    let cert = certify_hyperbolicity(&arr, &CertifyOptions::default()).unwrap();
    ok &= cert.passed() && cert.tree_is_consistent();
    ok &= cert.children.len() == 7; // |I| = 0 plus six |I| = 1 strata

    let mut lowered = vec![Multiplicity::Finite(6); 6];
    lowered[3] = Multiplicity::Finite(5);
    let bad = random_quadric_general_arrangement(2, 6, 808)
        .with_multiplicities(lowered)
        .unwrap();
    let bad_cert = certify_hyperbolicity(&bad, &CertifyOptions::default()).unwrap();
    ok &= !bad_cert.passed();
    let mult_node = bad_cert.children[0]
        .children
        .iter()
        .find(|n| n.name == "multiplicity-threshold")
        .unwrap();
    ok &= mult_node.witnesses.get("hyperplane").map(String::as_str) == Some("3");
    ok &= mult_node.witnesses.get("required").map(String::as_str) == Some("6");

    // byte-identical re-run with the same evidence seed
    let opts = CertifyOptions {
        evidence: Some(EvidenceParams {
            prime: None,
            samples: 25,
            seed: 4242,
        }),
        strata_cap: 10_000,
    };
    let run1 = covercert::io::canonical_json(&certify_hyperbolicity(&arr, &opts).unwrap());
    let run2 = covercert::io::canonical_json(&certify_hyperbolicity(&arr, &opts).unwrap());
    ok &= run1 == run2;
    c.finish(ok);
}

/// Criterion 9: kernel properties. Cramer-minor law on 100 random weighted
/// matrices; normal-form idempotence and alternative-order agreement on 200
/// random polynomials (plus evaluation soundness at sampled cover points);
/// m-th-root postcondition on 10^4 draws.
#[test]
fn acceptance_9_kernel_properties() {
    let c = Criterion::start(9, "kernel property suites", None);
    let mut ok = true;

    // Cramer-minor law
    {
        use num_traits::Zero;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(909);
        for _ in 0..100 {
            let n = rng.gen_range(1..5usize);
            let w: Vec<Rational> = (0..=n).map(|_| rat(rng.gen_range(1..7), 1)).collect();
            let mut cols: Vec<Vec<Rational>> = (0..n)
                .map(|_| (0..n).map(|_| rat(rng.gen_range(-5..=5), 1)).collect())
                .collect();
            let last: Vec<Rational> = (0..n)
                .map(|r| {
                    let mut acc = Rational::zero();
                    for (ci, col) in cols.iter().enumerate() {
                        acc += &col[r] * &w[ci];
                    }
                    -acc / &w[n]
                })
                .collect();
            cols.push(last);
            let rows: Vec<Vec<Rational>> = (0..n)
                .map(|r| cols.iter().map(|col| col[r].clone()).collect())
                .collect();
            let v = Matrix::from_rows(Rationals, rows).unwrap();
            let all_rows: Vec<usize> = (0..n).collect();
            let mut ratio: Option<Rational> = None;
            for col in 0..=n {
                let keep: Vec<usize> = (0..=n).filter(|&j| j != col).collect();
                let minor = v.minor(&all_rows, &keep).unwrap();
                let sign = if col % 2 == 0 { rat(1, 1) } else { rat(-1, 1) };
                let q = sign * minor / &w[col];
                match &ratio {
                    None => ratio = Some(q),
                    Some(r) => ok &= r == &q,
                }
            }
        }
    }

    // normal-form idempotence, alternative-order agreement, and evaluation
    // soundness at sampled cover points
    {
        use covercert::mpoly::RuleOrder;
        let (_, cov) = noguchi_cover(910);
        let rw = cov.rewriter(0).unwrap();
        let polys = random_polynomials(2, 3, 0, 200, 911);
        let fp = PrimeField::new(cov.default_prime()).unwrap();
        let mut sampler = covercert::fermat::CoverSampler::new(&cov, fp.p(), 912).unwrap();
        let points: Vec<_> = (0..5).map(|_| sampler.sample().unwrap()).collect();
        for f in &polys {
            let nf = rw.normal_form(f);
            ok &= rw.normal_form(&nf) == nf;
            ok &= rw.normal_form_with_order(f, RuleOrder::Reversed) == nf;
            for pt in &points {
                let assign = |v: Var| match v.flavor {
                    covercert::mpoly::Flavor::Base => pt.z[v.index],
                    covercert::mpoly::Flavor::Fiber => pt.zp[v.index],
                };
                let before = f.eval_mod_p(&fp, &assign).unwrap();
                let after = nf.eval_mod_p(&fp, &assign).unwrap();
                ok &= before == after;
            }
        }
        // is_zero_mod_ideal soundness: true implies vanishing at cover points
        for j in 1..=3 {
            let rel = rw.fermat_relation(j);
            ok &= rw.is_zero_mod_ideal(&rel);
            for pt in &points {
                let assign = |v: Var| match v.flavor {
                    covercert::mpoly::Flavor::Base => pt.z[v.index],
                    covercert::mpoly::Flavor::Fiber => pt.zp[v.index],
                };
                ok &= rel.eval_mod_p(&fp, &assign).unwrap() == 0;
            }
        }
        let _ = MPoly::zero(Rationals); // keep the import honest
    }

    // m-th root postcondition on 10^4 draws
    {
        use rand::{Rng, SeedableRng};
        let m = 6u64;
        let fp = PrimeField::new(covercert::exactalg::default_prime(m)).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(913);
        for _ in 0..10_000 {
            let a = rng.gen_range(1..fp.p());
            match fp.mth_root(a, m).unwrap() {
                Some(x) => ok &= fp.pow(x, m) == a,
                None => ok &= fp.pow(a, (fp.p() - 1) / m) != 1,
            }
        }
    }

    c.finish(ok);
}
