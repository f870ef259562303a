//! Threshold calculators and the stratified hyperbolicity certification.
//!
//! A certificate is a deterministic tree of named checks. What is verified
//! mechanically is exactly the hypotheses of the positivity theorems: degree
//! and multiplicity thresholds plus general position on every stratum. The
//! analytic conclusions are implications of those hypotheses and are labeled
//! as such; sampling nodes are evidence, never proof.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::Serialize;

use crate::arrangement::{
    binom2, restrict_covector, select_subarrangement, stratum_basis, Arrangement, CheckMode,
    LinearVerdict, Multiplicity,
};
use crate::error::{Error, Result};
use crate::exactalg::{default_prime, Rational};
use crate::fermat::FermatCover;

/// Degree and multiplicity thresholds of the positivity theorems.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Thresholds {
    pub n: u64,
    /// Hyperplane count for ampleness modulo boundary: binom(n+2,2).
    pub d_quadric: u64,
    /// Multiplicity floor for the orbifold statement: 2n+2.
    pub m_min: u64,
    /// Degree floor for bigness at multiplicity m >= 3: ceil(2n(2n/(m-2)+1)).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_big: Option<u64>,
    /// Fewer than n boundary components can never give a big log cotangent
    /// bundle; kept for context.
    pub component_floor: u64,
}

pub fn thresholds(n: u64, m: Option<u64>) -> Result<Thresholds> {
    if n < 2 {
        return Err(Error::Precondition("thresholds need n >= 2".into()));
    }
    let d_big = match m {
        None => None,
        Some(m) => {
            if m < 3 {
                return Err(Error::Precondition(
                    "the bigness bound needs multiplicity m >= 3".into(),
                ));
            }
            // exact rational 2n(2n + m - 2)/(m - 2), then ceiling
            let num = 2 * n * (2 * n + m - 2);
            let r = Rational::new((num as i64).into(), ((m - 2) as i64).into());
            let c = r.ceil().to_integer();
            Some(u64::try_from(c).expect("positive"))
        }
    };
    Ok(Thresholds {
        n,
        d_quadric: ((n + 2) * (n + 1) / 2),
        m_min: 2 * n + 2,
        d_big,
        component_floor: n,
    })
}

/// Verdict of a certificate node.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Sampling result attached for information; never upgrades to proof and
    /// never gates the parent.
    EvidenceOnly,
    /// Enumeration cap was hit; never reported as pass.
    Incomplete,
}

/// Randomness provenance of a probabilistic node.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Provenance {
    pub prime: u64,
    pub seed: u64,
    pub trials: u64,
}

/// A node of the certificate tree. Serialization is canonical (sorted keys,
/// stable child order), so identical inputs and seeds give identical bytes.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub name: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub inputs: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub witnesses: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub randomness: Option<Provenance>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<Certificate>,
}

impl Certificate {
    pub fn leaf(name: &str, verdict: Verdict) -> Self {
        Certificate {
            name: name.to_string(),
            verdict,
            inputs: BTreeMap::new(),
            witnesses: BTreeMap::new(),
            randomness: None,
            children: Vec::new(),
        }
    }

    pub fn witness(mut self, key: &str, value: impl ToString) -> Self {
        self.witnesses.insert(key.to_string(), value.to_string());
        self
    }

    pub fn input(mut self, key: &str, value: impl ToString) -> Self {
        self.inputs.insert(key.to_string(), value.to_string());
        self
    }

    /// Tree invariant: a node passes only if every non-evidence child passes.
    pub fn tree_is_consistent(&self) -> bool {
        let children_ok = self
            .children
            .iter()
            .filter(|c| c.verdict != Verdict::EvidenceOnly)
            .all(|c| c.verdict == Verdict::Pass);
        let self_ok = self.verdict != Verdict::Pass || children_ok;
        self_ok && self.children.iter().all(Certificate::tree_is_consistent)
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Aggregates child verdicts: fail dominates, then incomplete; evidence-only
/// children are ignored.
fn aggregate(children: &[Certificate]) -> Verdict {
    let mut verdict = Verdict::Pass;
    for c in children {
        match c.verdict {
            Verdict::Fail => return Verdict::Fail,
            Verdict::Incomplete => verdict = Verdict::Incomplete,
            Verdict::Pass | Verdict::EvidenceOnly => {}
        }
    }
    verdict
}

/// A stratum of the arrangement: the intersection of the removed
/// hyperplanes, with the induced arrangement of the survivors.
#[derive(Clone, Debug)]
pub struct Stratum {
    pub removed: Vec<usize>,
    pub ambient_dim: usize,
    /// Induced arrangement of the surviving hyperplanes on the stratum.
    pub arrangement: Arrangement,
    /// Original indices of the survivors backing each induced hyperplane.
    pub survivor_groups: Vec<Vec<usize>>,
    /// Groups of size > 1 were merged (cannot happen in linear general
    /// position with |I| < n); recorded as a warning.
    pub merged: bool,
}

/// Restricts the arrangement to the stratum cut out by the hyperplanes in
/// `removed`. Survivor covectors are computed exactly in a deterministic
/// basis of the intersection; survivors with coinciding restriction are
/// merged (multiplicity lowered to the minimum of the group) with a warning.
pub fn restrict_to_stratum(arr: &Arrangement, removed: &[usize]) -> Result<Stratum> {
    let n = arr.n();
    let mut removed = removed.to_vec();
    removed.sort_unstable();
    if removed.iter().duplicates().next().is_some() {
        return Err(Error::Index("repeated index in removed set".into()));
    }
    if removed.iter().any(|&i| i >= arr.d()) {
        return Err(Error::Index("removed index out of range".into()));
    }
    if removed.len() > n {
        return Err(Error::Precondition(format!(
            "|I| = {} exceeds n = {n}",
            removed.len()
        )));
    }
    let basis = stratum_basis(arr, &removed)?;
    let np = n - removed.len();

    let mut covs: Vec<Vec<Rational>> = Vec::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut mults: Vec<Multiplicity> = Vec::new();
    for s in 0..arr.d() {
        if removed.contains(&s) {
            continue;
        }
        let rv = restrict_covector(arr.covector(s), &basis);
        if rv.iter().all(num_traits::Zero::is_zero) {
            return Err(Error::Degenerate(format!(
                "hyperplane {s} contains the whole stratum"
            )));
        }
        let rv = crate::arrangement::canonical_scale(&rv)?;
        let m_s = arr
            .multiplicities()
            .map(|ms| ms[s])
            .unwrap_or(Multiplicity::Infinite);
        if let Some(pos) = covs.iter().position(|c| c == &rv) {
            groups[pos].push(s);
            let lowered = match (mults[pos], m_s) {
                (Multiplicity::Infinite, x) | (x, Multiplicity::Infinite) => x,
                (Multiplicity::Finite(a), Multiplicity::Finite(b)) => {
                    Multiplicity::Finite(a.min(b))
                }
            };
            mults[pos] = lowered;
        } else {
            covs.push(rv);
            groups.push(vec![s]);
            mults.push(m_s);
        }
    }
    let merged = groups.iter().any(|g| g.len() > 1);
    let multiplicities = arr.multiplicities().map(|_| mults);
    let arrangement = Arrangement::new(np, covs, multiplicities)?;
    Ok(Stratum {
        removed,
        ambient_dim: np,
        arrangement,
        survivor_groups: groups,
        merged,
    })
}

/// Evidence sampling parameters for `certify_hyperbolicity`.
#[derive(Clone, Debug)]
pub struct EvidenceParams {
    /// Sampling prime; defaults to the smallest prime >= 2^20 that is 1 mod m.
    pub prime: Option<u64>,
    pub samples: u64,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct CertifyOptions {
    pub evidence: Option<EvidenceParams>,
    /// Cap on the number of strata examined; breaches yield `incomplete`.
    pub strata_cap: u64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            evidence: None,
            strata_cap: 10_000,
        }
    }
}

fn multiplicity_list(arr: &Arrangement) -> Vec<Multiplicity> {
    arr.multiplicities()
        .map(|ms| ms.to_vec())
        .unwrap_or_else(|| vec![Multiplicity::Infinite; arr.d()])
}

fn min_multiplicity(ms: &[Multiplicity]) -> (Multiplicity, usize) {
    let mut best = Multiplicity::Infinite;
    let mut arg = 0;
    for (i, m) in ms.iter().enumerate() {
    if let (Multiplicity::Finite(v), cur) = (m, best) {
            let smaller = match cur {
                Multiplicity::Infinite => true,
                Multiplicity::Finite(c) => *v < c,
            };
            if smaller {
                best = Multiplicity::Finite(*v);
                arg = i;
            }
        }
    }
    (best, arg)
}

fn stratum_node(
    arr: &Arrangement,
    removed: &[usize],
    opts: &CertifyOptions,
    node_index: u64,
) -> Result<Certificate> {
    let n = arr.n();
    let np = n - removed.len();
    let name = format!(
        "stratum I={{{}}}",
        removed.iter().map(ToString::to_string).join(",")
    );
    let mut children: Vec<Certificate> = Vec::new();

    // (a) subarrangement selection per the existence lemma
    let selection = select_subarrangement(arr, removed);
    let selection_node = match &selection {
        Ok(sel) => Certificate::leaf("subarrangement-selection", Verdict::Pass)
            .witness("selected", sel.iter().map(ToString::to_string).join(","))
            .witness("size", sel.len())
            .witness("required", binom2(np + 2)),
        Err(e) => Certificate::leaf("subarrangement-selection", Verdict::Fail)
            .witness("error", e),
    };
    children.push(selection_node);

    // (b) thresholds of the induced arrangement on the stratum
    let stratum = restrict_to_stratum(arr, removed)?;
    let induced_d = stratum.arrangement.d();
    let need_d = binom2(np + 2);
    let mut degree_node = Certificate::leaf(
        "degree-threshold",
        if induced_d >= need_d {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
    )
    .witness("induced_d", induced_d)
    .witness("required", need_d);
    if stratum.merged {
        degree_node = degree_node.witness("warning", "coinciding restrictions were merged");
    }
    children.push(degree_node);

    let ms = multiplicity_list(&stratum.arrangement);
    let (min_m, argmin) = min_multiplicity(&ms);
    let need_m = 2 * np as u64 + 2;
    let mult_ok = min_m.at_least(need_m);
    let mut mult_node = Certificate::leaf(
        "multiplicity-threshold",
        if mult_ok { Verdict::Pass } else { Verdict::Fail },
    )
    .witness("min_multiplicity", min_m)
    .witness("required", need_m);
    if !mult_ok {
        // original index of the offending hyperplane
        let orig = stratum.survivor_groups[argmin][0];
        mult_node = mult_node
            .witness("hyperplane", orig)
            .witness("multiplicity", min_m);
    }
    children.push(mult_node);

    // (c) general position of the selected subarrangement on the stratum
    if let Ok(sel) = &selection {
        let basis = stratum_basis(arr, removed)?;
        let covs: Vec<Vec<Rational>> = sel
            .iter()
            .map(|&s| restrict_covector(arr.covector(s), &basis))
            .collect();
        match Arrangement::new(np, covs, None) {
            Ok(restricted) => {
                let lin = restricted.check_linear_general_position(CheckMode::Exhaustive);
                let lin_node = match &lin {
                    LinearVerdict::Pass => {
                        Certificate::leaf("linear-general-position", Verdict::Pass)
                    }
                    LinearVerdict::Fail { witness } => {
                        Certificate::leaf("linear-general-position", Verdict::Fail).witness(
                            "dependent_subset",
                            witness.iter().map(ToString::to_string).join(","),
                        )
                    }
                    _ => Certificate::leaf("linear-general-position", Verdict::Fail)
                        .witness("error", format!("{lin:?}")),
                };
                children.push(lin_node);
                let quad = restricted.check_quadric_general_position();
                let quad_node = if quad.passed() {
                    Certificate::leaf("quadric-general-position", Verdict::Pass)
                } else {
                    Certificate::leaf("quadric-general-position", Verdict::Fail)
                        .witness("verdict", format!("{quad:?}"))
                };
                children.push(quad_node);
            }
            Err(e) => {
                children.push(
                    Certificate::leaf("linear-general-position", Verdict::Fail)
                        .witness("error", e),
                );
            }
        }
    }

    let verdict = aggregate(&children);

    // (d) advisory base-locus evidence on the stratum's Fermat cover
    if let (Some(params), Ok(sel), Verdict::Pass) = (&opts.evidence, &selection, verdict) {
        let node = match evidence_node(arr, removed, sel, params, node_index) {
            Ok(node) => node,
            Err(e) => Certificate::leaf("base-locus-evidence", Verdict::EvidenceOnly)
                .witness("skipped", e),
        };
        children.push(node);
    }

    Ok(Certificate {
        name,
        verdict,
        inputs: BTreeMap::new(),
        witnesses: BTreeMap::new(),
        randomness: None,
        children,
    })
}

fn evidence_node(
    arr: &Arrangement,
    removed: &[usize],
    selected: &[usize],
    params: &EvidenceParams,
    node_index: u64,
) -> Result<Certificate> {
    let stratum = restrict_to_stratum(arr, removed)?;
    let ms = multiplicity_list(&stratum.arrangement);
    let (min_m, _) = min_multiplicity(&ms);
    let m = match min_m {
        Multiplicity::Finite(v) => v as usize,
        Multiplicity::Infinite => {
            return Ok(
                Certificate::leaf("base-locus-evidence", Verdict::EvidenceOnly).witness(
                    "skipped",
                    "all multiplicities infinite: no Fermat cover to sample",
                ),
            )
        }
    };
    let np = arr.n() - removed.len();
    let basis = stratum_basis(arr, removed)?;
    let covs: Vec<Vec<Rational>> = selected
        .iter()
        .map(|&s| restrict_covector(arr.covector(s), &basis))
        .collect();
    let restricted = Arrangement::new(np, covs, None)?;
    let na = restricted.normalize(None)?;
    let cov = FermatCover::build(&na, m)?;
    let prime = params.prime.unwrap_or_else(|| default_prime(m as u64));
    let seed = params.seed.wrapping_add(node_index);
    let report = crate::differentials::baselocus_evidence(&cov, prime, params.samples, seed)?;
    let mut node = Certificate::leaf("base-locus-evidence", Verdict::EvidenceOnly)
        .witness("bw_factorization_exact", report.bw_exact)
        .witness("rank_failures", report.rank_failures)
        .witness("samples", report.samples)
        .witness("note", report.note);
    node.randomness = Some(Provenance {
        prime,
        seed,
        trials: params.samples,
    });
    if !report.passed() {
        node = node.witness("alarm", "sampling found a rank counterexample");
    }
    Ok(node)
}

/// Certifies the hypotheses of the stratified hyperbolicity theorems: for
/// every stratum `I` with `|I| = 0..n-1` (lexicographic), a subarrangement
/// selection, the degree and multiplicity thresholds, and both
/// general-position checks on the selection. The pass verdict asserts the
/// verified hypotheses; the hyperbolicity conclusions are implications of
/// the theorems, stated in the root inputs, not separately checked facts.
pub fn certify_hyperbolicity(arr: &Arrangement, opts: &CertifyOptions) -> Result<Certificate> {
    let ms = multiplicity_list(arr);
    if let Some(bad) = ms
        .iter()
        .position(|m| !m.at_least(2))
    {
        return Err(Error::Precondition(format!(
            "hyperplane {bad} has multiplicity < 2"
        )));
    }
    let n = arr.n();
    let d = arr.d();
    let mut root = Certificate::leaf("certify-hyperbolicity", Verdict::Pass)
        .input("arrangement_sha256", crate::io::sha256_hex(&crate::io::arrangement_canonical_json(arr)))
        .input("n", n)
        .input("d", d)
        .input(
            "multiplicities",
            ms.iter().map(ToString::to_string).join(","),
        )
        .input(
            "conclusion_if_pass",
            "the verified hypotheses imply Kobayashi hyperbolicity of the orbifold pair \
             and of its Fermat covers",
        );

    let mut node_index = 0u64;
    let mut capped = false;
    'outer: for t in 0..n.max(1) {
        if t > n.saturating_sub(1) {
            break;
        }
        for removed in (0..d).combinations(t) {
            node_index += 1;
            if node_index > opts.strata_cap {
                capped = true;
                break 'outer;
            }
            root.children.push(stratum_node(arr, &removed, opts, node_index)?);
        }
    }
    if capped {
        root.children.push(
            Certificate::leaf("strata-enumeration", Verdict::Incomplete)
                .witness("cap", opts.strata_cap)
                .witness("note", "enumeration cap reached; verdict cannot be pass"),
        );
    }
    root.verdict = aggregate(&root.children);
    Ok(root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;
    use crate::random::random_quadric_general_arrangement;

    #[test]
    fn thresholds_reproduce_paper_values() {
        let t = thresholds(2, None).unwrap();
        assert_eq!((t.d_quadric, t.m_min), (6, 6));
        assert_eq!(thresholds(3, None).unwrap().d_quadric, 10);
        assert_eq!(thresholds(2, Some(3)).unwrap().d_big, Some(20));
        assert_eq!(thresholds(2, None).unwrap().component_floor, 2);
        assert!(thresholds(1, None).is_err());
        assert!(thresholds(2, Some(2)).is_err());
    }

    #[test]
    fn d_big_is_nonincreasing_in_m() {
        for n in 2..=4u64 {
            let mut prev = u64::MAX;
            for m in 3..=50 {
                let d = thresholds(n, Some(m)).unwrap().d_big.unwrap();
                assert!(d <= prev, "n={n} m={m}: {d} > {prev}");
                prev = d;
            }
        }
    }

    #[test]
    fn restrict_to_stratum_identity_on_empty_set() {
        let arr = random_quadric_general_arrangement(2, 6, 21);
        let s = restrict_to_stratum(&arr, &[]).unwrap();
        assert_eq!(s.ambient_dim, 2);
        assert_eq!(s.arrangement.d(), 6);
        assert!(!s.merged);
        assert_eq!(s.arrangement.covectors(), arr.covectors());
    }

    #[test]
    fn restrict_to_stratum_coordinate_slice() {
        // removing H_0 = Z_0 leaves the last two coordinates
        let arr = Arrangement::new(
            2,
            vec![
                vec![rat(1, 1), rat(0, 1), rat(0, 1)],
                vec![rat(0, 1), rat(1, 1), rat(0, 1)],
                vec![rat(0, 1), rat(0, 1), rat(1, 1)],
                vec![rat(1, 1), rat(2, 1), rat(5, 1)],
            ],
            None,
        )
        .unwrap();
        let s = restrict_to_stratum(&arr, &[0]).unwrap();
        assert_eq!(s.ambient_dim, 1);
        assert_eq!(s.arrangement.d(), 3);
        assert_eq!(
            s.arrangement.covectors()[2],
            vec![rat(1, 1), rat(5, 2)] // (2,5) rescaled
        );
    }

    #[test]
    fn restrict_to_stratum_pipeline_p3() {
        let arr = random_quadric_general_arrangement(3, 10, 22);
        let s = restrict_to_stratum(&arr, &[1, 4]).unwrap();
        assert_eq!(s.ambient_dim, 1);
        assert_eq!(s.arrangement.d(), 8);
        // induced P^1 arrangement has >= 3 distinct points
        assert!(s.arrangement.d() >= 3);
        assert!(!s.merged);
    }

    #[test]
    fn certify_noguchi_instance_passes_with_seven_strata() {
        let arr = random_quadric_general_arrangement(2, 6, 23)
            .with_multiplicities(vec![Multiplicity::Finite(6); 6])
            .unwrap();
        let cert = certify_hyperbolicity(&arr, &CertifyOptions::default()).unwrap();
        assert!(cert.passed());
        assert!(cert.tree_is_consistent());
        assert_eq!(cert.children.len(), 7); // |I| = 0 and the six |I| = 1 strata
    }

    #[test]
    fn certify_fails_on_lowered_multiplicity_with_witness() {
        let mut ms = vec![Multiplicity::Finite(6); 6];
        ms[2] = Multiplicity::Finite(5);
        let arr = random_quadric_general_arrangement(2, 6, 24)
            .with_multiplicities(ms)
            .unwrap();
        let cert = certify_hyperbolicity(&arr, &CertifyOptions::default()).unwrap();
        assert!(!cert.passed());
        assert!(cert.tree_is_consistent());
        // the |I| = 0 stratum carries the witness
        let stratum0 = &cert.children[0];
        assert_eq!(stratum0.verdict, Verdict::Fail);
        let mult = stratum0
            .children
            .iter()
            .find(|c| c.name == "multiplicity-threshold")
            .unwrap();
        assert_eq!(mult.verdict, Verdict::Fail);
        assert_eq!(mult.witnesses.get("hyperplane").unwrap(), "2");
        assert_eq!(mult.witnesses.get("required").unwrap(), "6");
    }

    #[test]
    fn certify_fails_on_too_few_hyperplanes() {
        let arr = crate::random::random_linear_general_arrangement(2, 5, 25)
            .with_multiplicities(vec![Multiplicity::Finite(6); 5])
            .unwrap();
        let cert = certify_hyperbolicity(&arr, &CertifyOptions::default()).unwrap();
        assert!(!cert.passed());
        let stratum0 = &cert.children[0];
        let deg = stratum0
            .children
            .iter()
            .find(|c| c.name == "degree-threshold")
            .unwrap();
        assert_eq!(deg.verdict, Verdict::Fail);
        assert_eq!(deg.witnesses.get("required").unwrap(), "6");
    }

    #[test]
    fn certificates_are_byte_identical_across_runs() {
        let arr = random_quadric_general_arrangement(2, 6, 26)
            .with_multiplicities(vec![Multiplicity::Finite(7); 6])
            .unwrap();
        let a = certify_hyperbolicity(&arr, &CertifyOptions::default()).unwrap();
        let b = certify_hyperbolicity(&arr, &CertifyOptions::default()).unwrap();
        assert_eq!(
            crate::io::canonical_json(&a),
            crate::io::canonical_json(&b)
        );
    }

    #[test]
    fn strata_cap_yields_incomplete_never_pass() {
        let arr = random_quadric_general_arrangement(2, 6, 27)
            .with_multiplicities(vec![Multiplicity::Finite(6); 6])
            .unwrap();
        let opts = CertifyOptions {
            evidence: None,
            strata_cap: 3,
        };
        let cert = certify_hyperbolicity(&arr, &opts).unwrap();
        assert_eq!(cert.verdict, Verdict::Incomplete);
        assert!(cert.tree_is_consistent());
    }

    #[test]
    fn stratum_counts_match_binomials() {
        let arr = random_quadric_general_arrangement(2, 6, 28)
            .with_multiplicities(vec![Multiplicity::Finite(6); 6])
            .unwrap();
        let cert = certify_hyperbolicity(&arr, &CertifyOptions::default()).unwrap();
        let level0 = cert
            .children
            .iter()
            .filter(|c| c.name == "stratum I={}")
            .count();
        let level1 = cert
            .children
            .iter()
            .filter(|c| c.name.starts_with("stratum I={") && c.name != "stratum I={}")
            .count();
        assert_eq!(level0, 1);
        assert_eq!(level1, 6); // binom(6,1)
    }

    #[test]
    fn adding_a_general_hyperplane_preserves_level0_thresholds() {
        // monotonicity of the |I| = 0 threshold checks
        let arr = random_quadric_general_arrangement(2, 6, 29);
        let mut covs = arr.covectors().to_vec();
        // extend by one more hyperplane keeping general position
        let bigger = loop {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(covs.len() as u64 + 1000);
            let extra: Vec<Rational> = (0..3).map(|_| rat(rng.gen_range(-9..=9), 1)).collect();
            covs.push(extra);
            match Arrangement::new(2, covs.clone(), None) {
                Ok(a)
                    if a.check_linear_general_position(CheckMode::Exhaustive).passed()
                        && a.check_quadric_general_position().passed() =>
                {
                    break a
                }
                _ => {
                    covs.pop();
                }
            }
        };
        let ms6 = vec![Multiplicity::Finite(6); 6];
        let ms7 = vec![Multiplicity::Finite(6); 7];
        let small = arr.with_multiplicities(ms6).unwrap();
        let big = bigger.with_multiplicities(ms7).unwrap();
        let check = |a: &Arrangement| {
            let cert = certify_hyperbolicity(a, &CertifyOptions::default()).unwrap();
            cert.children[0]
                .children
                .iter()
                .filter(|c| c.name.ends_with("threshold"))
                .all(|c| c.verdict == Verdict::Pass)
        };
        assert!(check(&small));
        assert!(check(&big));
    }
}
