//! End-to-end harnesses: machine checks of the character identity, the
//! normalizer characterization, the vanishing case, lift independence, and
//! the sharpness counterexample search, over desk-scale configurations.
//!
//! Every report is a pure function of its configuration (and seed). A report
//! with an empty case list is marked vacuous rather than passing silently.

use std::collections::HashMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::cyclo::CycloNumber;
use crate::dl::{
    dl_value_at_torus_point, theorem_rhs_from_lifts, transporter_orbits,
    twisted_dl_value_collapsed, twisted_dl_value_collapsed_unchecked, twisted_dl_value_full,
    DlSpec, TransporterOrbits, TwistedDlSpec,
};
use crate::error::{Error, Result};
use crate::groups::{GroupContext, Mat, DEFAULT_BUDGET};
use crate::tori::{
    all_characters, compose_with_norm, partitions, so2_torus, torus_from_partition,
    torus_normalizer_elements, torus_of_regular_element, RationalTorus, TorusCharacter,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Frobenius,
    TransposeInverse,
}

#[derive(Debug, Clone)]
pub enum ThetaSelection {
    All,
    Sample { count: u32, seed: u64 },
}

#[derive(Debug, Clone)]
pub enum STildeSelection {
    /// every s~ in the ambient group that lies in an epsilon-stable maximal
    /// torus and has regular norm (exhaustive)
    AllAdmissible,
    /// explicit matrices, given as row-major entry codes
    Explicit(Vec<Vec<u64>>),
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub mode: Mode,
    pub n: u8,
    pub q: u64,
    pub ell: u32,
    /// torus partitions for T; None = all partitions of n
    pub partitions: Option<Vec<Vec<u32>>>,
    pub theta_selection: ThetaSelection,
    pub s_selection: STildeSelection,
    /// all-theta enumeration is restricted to tori with at most this many
    /// points
    pub char_point_budget: u64,
    pub budget: u64,
    pub trials: u32,
    pub seed: u64,
    /// also evaluate the semidirect-product form on every case and record
    /// agreement with the collapsed form
    pub check_full_oracle: bool,
    /// record per-case wall-clock timings (off by default: reports must be
    /// byte-stable across runs)
    pub record_timings: bool,
}

impl VerifyConfig {
    pub fn frobenius(n: u8, q: u64, ell: u32) -> Self {
        VerifyConfig {
            mode: Mode::Frobenius,
            n,
            q,
            ell,
            partitions: None,
            theta_selection: ThetaSelection::All,
            s_selection: STildeSelection::AllAdmissible,
            char_point_budget: 100,
            budget: DEFAULT_BUDGET,
            trials: 1,
            seed: 0,
            check_full_oracle: true,
            record_timings: false,
        }
    }

    pub fn transpose_inverse(q: u64) -> Self {
        VerifyConfig {
            mode: Mode::TransposeInverse,
            n: 2,
            q,
            ell: 2,
            ..Self::frobenius(2, q, 2)
        }
    }

    pub fn build_context(&self) -> Result<Arc<GroupContext>> {
        match self.mode {
            Mode::Frobenius => GroupContext::new_frobenius(self.n, self.q, self.ell, self.budget),
            Mode::TransposeInverse => {
                if self.n != 2 || self.ell != 2 {
                    return Err(Error::BadTransposeInverseConfig);
                }
                GroupContext::new_transpose_inverse(self.q, self.budget)
            }
        }
    }

    fn label(&self) -> String {
        let mode = match self.mode {
            Mode::Frobenius => "frobenius",
            Mode::TransposeInverse => "transpose-inverse",
        };
        format!("{} n={} q={} ell={}", mode, self.n, self.q, self.ell)
    }
}

/// One verified instance. `lhs`/`rhs` hold the two exact values whose
/// comparison the harness performs (set cardinalities for the normalizer
/// check, rendered as integers).
#[derive(Debug, Clone)]
pub struct CaseRecord {
    pub s_tilde: Mat,
    pub torus_label: String,
    pub theta_exps: Vec<u64>,
    pub s_label: String,
    pub lhs: CycloNumber,
    pub rhs: CycloNumber,
    pub matched: bool,
    pub oracle_match: Option<bool>,
    pub detail: Option<String>,
    pub micros: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct VerifySummary {
    pub total: u64,
    pub passed: u64,
    pub failed: u64,
    pub vacuous: u64,
}

#[derive(Debug)]
pub struct VerifyReport {
    pub kind: String,
    pub config_label: String,
    pub cases: Vec<CaseRecord>,
    pub summary: VerifySummary,
    pub vacuous: bool,
    pub elements_scanned: u64,
    /// set by the counterexample harness: the run's objective is to exhibit
    /// mismatches, so "success" means failed >= 1
    pub expect_mismatch: bool,
}

impl VerifyReport {
    fn assemble(kind: &str, cfg_label: String, cases: Vec<CaseRecord>, scanned: u64) -> Self {
        let total = cases.len() as u64;
        // oracle disagreement was already folded into `matched`
        let passed = cases.iter().filter(|c| c.matched).count() as u64;
        VerifyReport {
            kind: kind.to_string(),
            config_label: cfg_label,
            vacuous: cases.is_empty(),
            summary: VerifySummary {
                total,
                passed,
                failed: total - passed,
                vacuous: 0,
            },
            cases,
            elements_scanned: scanned,
            expect_mismatch: false,
        }
    }

    pub fn all_passed(&self) -> bool {
        if self.expect_mismatch {
            self.summary.failed >= 1
        } else {
            self.summary.failed == 0
        }
    }
}

fn torus_label(t: &RationalTorus) -> String {
    match t.partition() {
        Some(p) => format!(
            "[{}]",
            p.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
        ),
        None => "so2".to_string(),
    }
}

/// Every s~ in the ambient group lying in some epsilon-stable maximal torus
/// with N(s~) regular: equivalently N(s~) is regular, epsilon-fixed, and
/// commutes with s~ (the torus is then the centralizer of the norm).
pub fn admissible_s_tilde(ctx: &GroupContext) -> Result<Vec<Mat>> {
    let mut out = Vec::new();
    for s_tilde in ctx.elements() {
        let s = ctx.norm(s_tilde)?;
        if !ctx.is_regular_semisimple(&s) {
            continue;
        }
        if ctx.apply_aut(&s, 1)? != s {
            continue;
        }
        if ctx.mat_mul(s_tilde, &s) != ctx.mat_mul(&s, s_tilde) {
            continue;
        }
        out.push(s_tilde.clone());
    }
    Ok(out)
}

fn select_s_tilde(ctx: &GroupContext, cfg: &VerifyConfig) -> Result<Vec<Mat>> {
    match &cfg.s_selection {
        STildeSelection::AllAdmissible => admissible_s_tilde(ctx),
        STildeSelection::Explicit(list) => {
            let admissible = admissible_s_tilde(ctx)?;
            let mut out = Vec::new();
            for codes in list {
                let m = Mat::new(ctx.n, ctx.ambient_degree, codes.clone());
                if !ctx.contains(&m) {
                    return Err(Error::OutsideGroup);
                }
                if !admissible.contains(&m) {
                    return Err(Error::Config(
                        "explicit s~ is not admissible (norm not regular or torus not stable)"
                            .into(),
                    ));
                }
                out.push(m);
            }
            Ok(out)
        }
    }
}

fn tori_for_config(
    ctx: &GroupContext,
    cfg: &VerifyConfig,
) -> Result<Vec<Arc<RationalTorus>>> {
    match cfg.mode {
        Mode::Frobenius => {
            let lambdas = cfg
                .partitions
                .clone()
                .unwrap_or_else(|| partitions(ctx.n as u32));
            lambdas
                .iter()
                .map(|l| torus_from_partition(ctx, l))
                .collect()
        }
        Mode::TransposeInverse => Ok(vec![so2_torus(ctx)?]),
    }
}

fn select_characters(
    torus: &Arc<RationalTorus>,
    cfg: &VerifyConfig,
) -> Vec<TorusCharacter> {
    let all = all_characters(torus);
    match cfg.theta_selection {
        ThetaSelection::All => {
            if torus.size() <= cfg.char_point_budget {
                all
            } else {
                vec![TorusCharacter::trivial(torus.clone())]
            }
        }
        ThetaSelection::Sample { count, seed } => {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let mut idx: Vec<usize> = (0..all.len()).collect();
            idx.shuffle(&mut rng);
            idx.truncate(count as usize);
            idx.sort_unstable();
            idx.into_iter().map(|i| all[i].clone()).collect()
        }
    }
}

/// Group the admissible elements by the hull of the torus of their norm.
struct SGroup {
    torus: Arc<RationalTorus>,
    members: Vec<Mat>,
}

fn group_by_norm_torus(ctx: &GroupContext, s_tildes: &[Mat]) -> Result<Vec<SGroup>> {
    let mut groups: Vec<SGroup> = Vec::new();
    let mut by_key: HashMap<Vec<Vec<u64>>, usize> = HashMap::new();
    let mut torus_by_norm: HashMap<Mat, usize> = HashMap::new();
    for s_tilde in s_tildes {
        let s = ctx.norm(s_tilde)?;
        let gi = match torus_by_norm.get(&s) {
            Some(&i) => i,
            None => {
                let torus = torus_of_regular_element(ctx, &s, true)?;
                let key = torus.hull_key();
                let i = match by_key.get(&key) {
                    Some(&i) => i,
                    None => {
                        groups.push(SGroup {
                            torus,
                            members: Vec::new(),
                        });
                        by_key.insert(key, groups.len() - 1);
                        groups.len() - 1
                    }
                };
                torus_by_norm.insert(s.clone(), i);
                i
            }
        };
        groups[gi].members.push(s_tilde.clone());
    }
    Ok(groups)
}

/// Check the character identity on every selected (T, theta, s~) triple:
/// the twisted value at s~ equals the transporter-coset sum of untwisted
/// values at conjugates of N(s~).
pub fn verify_theorem(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let ctx = cfg.build_context()?;
    let s_tildes = select_s_tilde(&ctx, cfg)?;
    let s_groups = group_by_norm_torus(&ctx, &s_tildes)?;
    let tori = tori_for_config(&ctx, cfg)?;
    let mut cases = Vec::new();
    let mut scanned = 0u64;
    for torus in &tori {
        let t_tilde = crate::tori::centralizer_torus(&ctx, torus)?;
        let thetas = select_characters(torus, cfg);
        let t_label = torus_label(torus);
        for theta in &thetas {
            let theta_tilde = compose_with_norm(&ctx, theta, &t_tilde)?;
            let twisted = TwistedDlSpec::new(&ctx, theta_tilde)?;
            let dl = DlSpec::new(&ctx, theta.clone())?;
            for group in &s_groups {
                let parts = transporter_orbits(&ctx, &dl, &group.torus)?;
                let lifts: Vec<Mat> = parts.orbits.iter().map(|o| o[0].clone()).collect();
                for s_tilde in &group.members {
                    let start = std::time::Instant::now();
                    let s = ctx.norm(s_tilde)?;
                    let lhs = twisted_dl_value_collapsed(&ctx, &twisted, s_tilde)?;
                    scanned += ctx.order();
                    let rhs = theorem_rhs_from_lifts(&ctx, &dl, &s, &lifts)?;
                    let oracle_match = if cfg.check_full_oracle {
                        let full = twisted_dl_value_full(&ctx, &twisted, s_tilde)?;
                        scanned += ctx.order() * ctx.aut.order as u64;
                        Some(full == lhs)
                    } else {
                        None
                    };
                    let matched = lhs == rhs && oracle_match != Some(false);
                    cases.push(CaseRecord {
                        s_tilde: s_tilde.clone(),
                        torus_label: t_label.clone(),
                        theta_exps: theta.exps().to_vec(),
                        s_label: torus_label(&group.torus),
                        lhs,
                        rhs,
                        matched,
                        oracle_match,
                        detail: None,
                        micros: cfg
                            .record_timings
                            .then(|| start.elapsed().as_micros() as u64),
                    });
                }
            }
        }
    }
    Ok(VerifyReport::assemble(
        "verify-theorem",
        cfg.label(),
        cases,
        scanned,
    ))
}

/// Mutation hooks for harness self-tests: each one deliberately perturbs an
/// internal predicate so a unit test can confirm the harness detects the
/// resulting inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalizerMutation {
    None,
    /// drop N(s~) itself from the computed norm image
    DropNormOfSTilde,
}

/// Both sides of the normalizer characterization, by independent exhaustive
/// scans: the hull/point normalizer of S against the set of g with
/// g s g^-1 inside the norm image of the torus of s~.
pub fn verify_normalizer(cfg: &VerifyConfig) -> Result<VerifyReport> {
    verify_normalizer_with_mutation(cfg, NormalizerMutation::None)
}

pub fn verify_normalizer_with_mutation(
    cfg: &VerifyConfig,
    mutation: NormalizerMutation,
) -> Result<VerifyReport> {
    let ctx = cfg.build_context()?;
    let s_tildes = select_s_tilde(&ctx, cfg)?;
    let mut cases = Vec::new();
    let mut scanned = 0u64;
    // memoized per distinct norm: the two sets and their comparison
    let mut memo: HashMap<Mat, (usize, usize, bool, Option<String>, String)> = HashMap::new();
    for s_tilde in &s_tildes {
        let s = ctx.norm(s_tilde)?;
        let (left_len, right_len, matched, detail, s_label) = match memo.get(&s) {
            Some(hit) => hit.clone(),
            None => {
                let s_torus = torus_of_regular_element(&ctx, &s, true)?;
                let big_torus = torus_of_regular_element(&ctx, &s, false)?;
                // left side: normalizer of S in the ambient group
                let left = torus_normalizer_elements(&ctx, &s_torus, false)?;
                scanned += ctx.order();
                // right side: g with g s g^-1 in Im(N restricted to S~(k))
                let mut image: std::collections::HashSet<Mat> = big_torus
                    .points()
                    .iter()
                    .map(|t| ctx.norm(t))
                    .collect::<Result<_>>()?;
                if mutation == NormalizerMutation::DropNormOfSTilde {
                    image.remove(&s);
                }
                let mut right = Vec::new();
                for g in ctx.elements() {
                    let conj = ctx.mat_mul(&ctx.mat_mul(g, &s), &ctx.mat_inv(g)?);
                    if image.contains(&conj) {
                        right.push(g.clone());
                    }
                }
                scanned += ctx.order();
                // elementwise equality, both inclusions checked separately
                let left_set: std::collections::HashSet<&Mat> = left.iter().collect();
                let right_set: std::collections::HashSet<&Mat> = right.iter().collect();
                let left_in_right = left.iter().all(|g| right_set.contains(g));
                let right_in_left = right.iter().all(|g| left_set.contains(g));
                let matched = left_in_right && right_in_left;
                let detail = if matched {
                    None
                } else {
                    Some(format!(
                        "left-in-right: {left_in_right}, right-in-left: {right_in_left}"
                    ))
                };
                let entry = (
                    left.len(),
                    right.len(),
                    matched,
                    detail,
                    torus_label(&s_torus),
                );
                memo.insert(s.clone(), entry.clone());
                entry
            }
        };
        cases.push(CaseRecord {
            s_tilde: s_tilde.clone(),
            torus_label: s_label.clone(),
            theta_exps: vec![],
            s_label,
            lhs: CycloNumber::from_integer(left_len as i64),
            rhs: CycloNumber::from_integer(right_len as i64),
            matched,
            oracle_match: None,
            detail,
            micros: None,
        });
    }
    Ok(VerifyReport::assemble(
        "verify-normalizer",
        cfg.label(),
        cases,
        scanned,
    ))
}

/// Find admissible s~ not twisted-conjugate into T~(k) and confirm both sides
/// of the identity vanish exactly there. Vacuous when every admissible s~ is
/// twisted-conjugate into T~(k).
pub fn verify_vanishing(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let ctx = cfg.build_context()?;
    let s_tildes = select_s_tilde(&ctx, cfg)?;
    let s_groups = group_by_norm_torus(&ctx, &s_tildes)?;
    let tori = tori_for_config(&ctx, cfg)?;
    let mut cases = Vec::new();
    let mut scanned = 0u64;
    for torus in &tori {
        let t_tilde = crate::tori::centralizer_torus(&ctx, torus)?;
        let thetas = select_characters(torus, cfg);
        let t_label = torus_label(torus);
        for group in &s_groups {
            for s_tilde in &group.members {
                // exhaustive twisted-orbit scan
                let mut reaches = false;
                for g in ctx.elements() {
                    let u = ctx.mat_mul(
                        &ctx.mat_mul(&ctx.mat_inv(g)?, s_tilde),
                        &ctx.apply_aut(g, 1)?,
                    );
                    if t_tilde.contains_point(&u) {
                        reaches = true;
                        break;
                    }
                }
                scanned += ctx.order();
                if reaches {
                    continue;
                }
                for theta in &thetas {
                    let theta_tilde = compose_with_norm(&ctx, theta, &t_tilde)?;
                    let twisted = TwistedDlSpec::new(&ctx, theta_tilde)?;
                    let dl = DlSpec::new(&ctx, theta.clone())?;
                    let lhs = twisted_dl_value_collapsed(&ctx, &twisted, s_tilde)?;
                    scanned += ctx.order();
                    let rhs = crate::dl::theorem_rhs(&ctx, &dl, s_tilde, &group.torus)?;
                    let zero = CycloNumber::zero(1);
                    let matched = lhs == zero && rhs == zero;
                    cases.push(CaseRecord {
                        s_tilde: s_tilde.clone(),
                        torus_label: t_label.clone(),
                        theta_exps: theta.exps().to_vec(),
                        s_label: torus_label(&group.torus),
                        lhs,
                        rhs,
                        matched,
                        oracle_match: None,
                        detail: None,
                        micros: None,
                    });
                }
            }
        }
    }
    Ok(VerifyReport::assemble(
        "verify-vanishing",
        cfg.label(),
        cases,
        scanned,
    ))
}

/// Recompute the identity's right-hand side with `trials` independently
/// randomized lift choices per case and require every value to agree with
/// the deterministic one.
pub fn verify_lift_independence(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let ctx = cfg.build_context()?;
    let s_tildes = select_s_tilde(&ctx, cfg)?;
    let s_groups = group_by_norm_torus(&ctx, &s_tildes)?;
    let tori = tori_for_config(&ctx, cfg)?;
    let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed);
    let mut cases = Vec::new();
    let mut scanned = 0u64;
    for torus in &tori {
        let thetas = select_characters(torus, cfg);
        let t_label = torus_label(torus);
        for theta in &thetas {
            let dl = DlSpec::new(&ctx, theta.clone())?;
            for group in &s_groups {
                let parts = transporter_orbits(&ctx, &dl, &group.torus)?;
                if parts.orbits.is_empty() {
                    continue;
                }
                for s_tilde in &group.members {
                    let s = ctx.norm(s_tilde)?;
                    let base_lifts: Vec<Mat> =
                        parts.orbits.iter().map(|o| o[0].clone()).collect();
                    let base = theorem_rhs_from_lifts(&ctx, &dl, &s, &base_lifts)?;
                    let mut all_equal = true;
                    let mut witness = base.clone();
                    for _ in 0..cfg.trials.max(1) {
                        let lifts = randomized_lifts(&ctx, &parts, &mut rng);
                        let v = theorem_rhs_from_lifts(&ctx, &dl, &s, &lifts)?;
                        scanned += ctx.fixed_elements().len() as u64;
                        if v != base {
                            all_equal = false;
                            witness = v;
                            break;
                        }
                    }
                    cases.push(CaseRecord {
                        s_tilde: s_tilde.clone(),
                        torus_label: t_label.clone(),
                        theta_exps: theta.exps().to_vec(),
                        s_label: torus_label(&group.torus),
                        lhs: base,
                        rhs: witness,
                        matched: all_equal,
                        oracle_match: None,
                        detail: None,
                        micros: None,
                    });
                }
            }
        }
    }
    Ok(VerifyReport::assemble(
        "verify-lift-independence",
        cfg.label(),
        cases,
        scanned,
    ))
}

/// A random lift per orbit: random orbit member, translated by a random
/// element of T~(k).
pub fn randomized_lifts(
    ctx: &GroupContext,
    parts: &TransporterOrbits,
    rng: &mut ChaCha20Rng,
) -> Vec<Mat> {
    parts
        .orbits
        .iter()
        .map(|orbit| {
            let member = &orbit[rng.gen_range(0..orbit.len())];
            let t_points = parts.t_tilde.points();
            let t_elt = &t_points[rng.gen_range(0..t_points.len())];
            ctx.mat_mul(t_elt, member)
        })
        .collect()
}

/// Search transpose-inverse mode for pairs (s~, theta) with s~ regular,
/// N(s~) singular, and the two sides of the identity unequal under the
/// documented convention: S is taken to be the unique maximal torus of
/// G = SO_2 (which is epsilon-stable and contains every admissible norm).
/// Any such mismatch witnesses that the regularity hypothesis is necessary.
pub fn find_remark_counterexample(cfg: &VerifyConfig) -> Result<VerifyReport> {
    if cfg.mode != Mode::TransposeInverse {
        return Err(Error::Config(
            "the counterexample search runs in transpose-inverse mode".into(),
        ));
    }
    if cfg.q > 7 {
        return Err(Error::Config("counterexample search caps q at 7".into()));
    }
    let ctx = cfg.build_context()?;
    let torus = so2_torus(&ctx)?;
    let t_tilde = crate::tori::centralizer_torus(&ctx, &torus)?;
    let t_label = torus_label(&torus);
    // candidates: s~ regular semisimple inside an epsilon-stable maximal
    // torus (eps(s~) in the hull of s~) whose norm is singular
    let mut candidates = Vec::new();
    for s_tilde in ctx.elements() {
        if !ctx.is_regular_semisimple(s_tilde) {
            continue;
        }
        let s = ctx.norm(s_tilde)?;
        if ctx.is_regular_semisimple(&s) {
            continue; // the theorem's regime; excluded from the search set
        }
        let own_torus = torus_of_regular_element(&ctx, s_tilde, false)?;
        if !own_torus.hull_contains(&ctx.tower, &ctx.apply_aut(s_tilde, 1)?) {
            continue;
        }
        candidates.push(s_tilde.clone());
    }
    let thetas = select_characters(&torus, cfg);
    // right-hand side analogue: transporter orbits from S = T to T
    let weyl = crate::tori::weyl_group(&ctx, &torus, true)?;
    let mut cases = Vec::new();
    let mut scanned = 0u64;
    for theta in &thetas {
        let dl = DlSpec::new(&ctx, theta.clone())?;
        debug_assert_eq!(dl.weyl_reps().len(), weyl.len());
        let parts = transporter_orbits(&ctx, &dl, &torus)?;
        let theta_tilde = compose_with_norm(&ctx, theta, &t_tilde)?;
        let twisted = TwistedDlSpec::new(&ctx, theta_tilde)?;
        for s_tilde in &candidates {
            let s = ctx.norm(s_tilde)?;
            if !torus.contains_point(&s) {
                return Err(Error::Internal(
                    "singular norm escaped the fixed torus".into(),
                ));
            }
            let lhs = twisted_dl_value_collapsed_unchecked(&ctx, &twisted, s_tilde)?;
            scanned += ctx.order();
            let mut rhs = CycloNumber::zero(torus.conductor());
            for orbit in &parts.orbits {
                let n = &orbit[0];
                let conj = ctx.mat_mul(&ctx.mat_mul(n, &s), &ctx.mat_inv(n)?);
                rhs = rhs.add(&dl_value_at_torus_point(&dl, &conj, &ctx)?);
            }
            let matched = lhs == rhs;
            cases.push(CaseRecord {
                s_tilde: s_tilde.clone(),
                torus_label: t_label.clone(),
                theta_exps: theta.exps().to_vec(),
                s_label: t_label.clone(),
                lhs,
                rhs,
                matched,
                oracle_match: None,
                detail: None,
                micros: None,
            });
        }
    }
    let mut report =
        VerifyReport::assemble("counterexample", cfg.label(), cases, scanned);
    report.expect_mismatch = true;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theorem_holds_on_smallest_config() {
        // n=1, q=2, ell=2: all s~ pass with LHS = RHS = 1
        let cfg = VerifyConfig::frobenius(1, 2, 2);
        let report = verify_theorem(&cfg).unwrap();
        assert!(!report.vacuous);
        assert_eq!(report.summary.total, 3);
        assert_eq!(report.summary.failed, 0);
        for case in &report.cases {
            assert_eq!(case.lhs, CycloNumber::one(1));
            assert_eq!(case.rhs, CycloNumber::one(1));
            assert_eq!(case.oracle_match, Some(true));
        }
    }

    #[test]
    fn theorem_holds_on_gl2_f4() {
        let cfg = VerifyConfig::frobenius(2, 2, 2);
        let report = verify_theorem(&cfg).unwrap();
        assert!(!report.vacuous);
        assert_eq!(report.summary.failed, 0);
        assert!(report.cases.iter().all(|c| c.oracle_match == Some(true)));
        // some twisted values are nonzero (the identity is not vacuously 0=0)
        assert!(report.cases.iter().any(|c| !c.lhs.is_zero()));
    }

    #[test]
    fn normalizer_characterization_holds_and_mutation_is_detected() {
        let cfg = VerifyConfig::frobenius(2, 2, 2);
        let report = verify_normalizer(&cfg).unwrap();
        assert!(!report.vacuous);
        assert_eq!(report.summary.failed, 0);
        let mutated =
            verify_normalizer_with_mutation(&cfg, NormalizerMutation::DropNormOfSTilde).unwrap();
        assert!(mutated.summary.failed >= 1, "mutation must be detected");
    }

    #[test]
    fn normalizer_sets_are_the_whole_group_in_rank_one() {
        let cfg = VerifyConfig::frobenius(1, 3, 2);
        let report = verify_normalizer(&cfg).unwrap();
        let ctx = cfg.build_context().unwrap();
        assert!(!report.vacuous);
        assert_eq!(report.summary.failed, 0);
        for case in &report.cases {
            let whole = CycloNumber::from_integer(ctx.order() as i64);
            assert_eq!(case.lhs, whole);
            assert_eq!(case.rhs, whole);
        }
    }

    #[test]
    fn vanishing_cases_on_gl2_f4_split_torus() {
        let mut cfg = VerifyConfig::frobenius(2, 2, 2);
        cfg.partitions = Some(vec![vec![1, 1]]);
        let report = verify_vanishing(&cfg).unwrap();
        assert!(!report.vacuous, "elliptic-norm cases must exist");
        assert_eq!(report.summary.failed, 0);
        for case in &report.cases {
            assert!(case.lhs.is_zero() && case.rhs.is_zero());
        }
    }

    #[test]
    fn vanishing_is_vacuous_in_rank_one() {
        let cfg = VerifyConfig::frobenius(1, 3, 2);
        let report = verify_vanishing(&cfg).unwrap();
        assert!(report.vacuous);
        assert_eq!(report.summary.total, 0);
    }

    #[test]
    fn lift_independence_on_gl2_f4() {
        let mut cfg = VerifyConfig::frobenius(2, 2, 2);
        cfg.trials = 10;
        cfg.seed = 42;
        let report = verify_lift_independence(&cfg).unwrap();
        assert!(!report.vacuous);
        assert_eq!(report.summary.failed, 0);
    }

    #[test]
    fn mutated_lift_is_detected() {
        // multiplying a lift by a non-torus element changes the value
        let ctx = GroupContext::new_frobenius(2, 2, 2, DEFAULT_BUDGET).unwrap();
        let t = torus_from_partition(&ctx, &[2]).unwrap();
        let theta = TorusCharacter::new(t, vec![1]).unwrap();
        let spec = DlSpec::new(&ctx, theta).unwrap();
        let s_tilde = ctx
            .elements()
            .iter()
            .find(|x| {
                let s = ctx.norm(x).unwrap();
                ctx.is_regular_semisimple(&s)
                    && ctx.apply_aut(&s, 1).unwrap() == s
                    && ctx.mat_mul(x, &s) == ctx.mat_mul(&s, x)
                    && ctx.char_poly_factor_degrees(&s, 1).unwrap() == vec![2]
            })
            .unwrap()
            .clone();
        let s = ctx.norm(&s_tilde).unwrap();
        let s_torus = torus_of_regular_element(&ctx, &s, true).unwrap();
        let parts = transporter_orbits(&ctx, &spec, &s_torus).unwrap();
        let base_lifts: Vec<Mat> = parts.orbits.iter().map(|o| o[0].clone()).collect();
        let base = theorem_rhs_from_lifts(&ctx, &spec, &s, &base_lifts).unwrap();
        assert!(!base.is_zero());
        // corrupt the first lift with an element outside T~(k); the violation
        // must surface as a changed value or as a hard error (the conjugate
        // can leave G(k) entirely)
        let mut detected = false;
        for h in ctx.elements() {
            if parts.t_tilde.contains_point(h) {
                continue;
            }
            let mut lifts = base_lifts.clone();
            lifts[0] = ctx.mat_mul(h, &lifts[0]);
            match theorem_rhs_from_lifts(&ctx, &spec, &s, &lifts) {
                Ok(v) if v == base => continue,
                _ => {
                    detected = true;
                    break;
                }
            }
        }
        assert!(detected);
    }

    #[test]
    fn counterexample_found_at_q3() {
        let cfg = VerifyConfig::transpose_inverse(3);
        let report = find_remark_counterexample(&cfg).unwrap();
        assert!(!report.vacuous);
        assert!(report.summary.failed >= 1, "a mismatch must be found");
        assert!(report.all_passed(), "objective is the mismatch");
        // the hand-checked witness: s~ = diag(1,2) has norm I and LHS = 0
        // against RHS = 2 for the trivial theta
        let witness = Mat::new(2, 1, vec![1, 0, 0, 2]);
        let hit = report
            .cases
            .iter()
            .find(|c| c.s_tilde == witness && c.theta_exps.iter().all(|&e| e == 0))
            .expect("diag(1,2) must be in the search set");
        assert_eq!(hit.lhs, CycloNumber::zero(1));
        assert_eq!(hit.rhs, CycloNumber::from_integer(2));
        assert!(!hit.matched);
    }

    #[test]
    fn counterexample_search_excludes_regular_norms() {
        let cfg = VerifyConfig::transpose_inverse(3);
        let report = find_remark_counterexample(&cfg).unwrap();
        let ctx = cfg.build_context().unwrap();
        for case in &report.cases {
            let s = ctx.norm(&case.s_tilde).unwrap();
            assert!(!ctx.is_regular_semisimple(&s));
            assert!(ctx.is_regular_semisimple(&case.s_tilde));
        }
    }

    #[test]
    fn theorem_also_holds_in_transpose_inverse_mode() {
        // regular norms in SO2 mode satisfy the identity
        let cfg = VerifyConfig::transpose_inverse(3);
        let report = verify_theorem(&cfg).unwrap();
        assert!(!report.vacuous);
        assert_eq!(report.summary.failed, 0);
    }

    #[test]
    fn explicit_selection_validates_membership() {
        let mut cfg = VerifyConfig::frobenius(1, 2, 2);
        cfg.s_selection = STildeSelection::Explicit(vec![vec![0]]);
        assert!(verify_theorem(&cfg).is_err());
        let g = {
            let ctx = cfg.build_context().unwrap();
            ctx.tower.generator(2).unwrap().code
        };
        cfg.s_selection = STildeSelection::Explicit(vec![vec![g]]);
        let report = verify_theorem(&cfg).unwrap();
        assert_eq!(report.summary.total, 1);
        assert_eq!(report.summary.failed, 0);
    }
}
