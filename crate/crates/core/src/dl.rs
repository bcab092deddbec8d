//! Deligne-Lusztig virtual character values at regular semisimple elements,
//! epsilon-twisted values at elements with regular norm, and the right-hand
//! side of the character identity relating them.
//!
//! The untwisted value at a regular semisimple x conjugate into T(k) is a
//! Weyl-orbit sum of theta values; the twisted value is a scan over the
//! ambient group with the exact prefactor 1/(l |T~(k)|) in the semidirect
//! form and 1/|T~(k)| in the collapsed form. All arithmetic is exact; a
//! division that fails to produce an algebraic integer is reported as an
//! internal inconsistency instead of being rounded.

use std::sync::Arc;

use crate::cyclo::CycloNumber;
use crate::error::{Error, Result};
use crate::groups::{GroupContext, Mat};
use crate::tori::{
    centralizer_torus, is_epsilon_invariant_character, is_epsilon_stable_torus, weyl_group,
    RationalTorus, TorusCharacter,
};

/// An untwisted Deligne-Lusztig character R_T^G theta for a torus of the
/// fixed subgroup. Weyl representatives are fixed at construction so repeated
/// evaluations share them.
#[derive(Debug, Clone)]
pub struct DlSpec {
    torus: Arc<RationalTorus>,
    theta: TorusCharacter,
    weyl_reps: Vec<Mat>,
}

impl DlSpec {
    pub fn new(ctx: &GroupContext, theta: TorusCharacter) -> Result<Self> {
        let torus = theta.torus().clone();
        if !torus.in_fixed_subgroup {
            return Err(Error::Config(
                "untwisted characters live on tori of the fixed subgroup".into(),
            ));
        }
        let weyl_reps = weyl_group(ctx, &torus, true)?;
        Ok(DlSpec {
            torus,
            theta,
            weyl_reps,
        })
    }

    pub fn torus(&self) -> &Arc<RationalTorus> {
        &self.torus
    }

    pub fn theta(&self) -> &TorusCharacter {
        &self.theta
    }

    pub fn weyl_reps(&self) -> &[Mat] {
        &self.weyl_reps
    }
}

/// An epsilon-twisted Deligne-Lusztig character for an epsilon-stable torus
/// of the ambient group and an epsilon-invariant character of its points.
/// Construction rejects non-invariant data. The trivial extension
/// theta(epsilon) = 1 is baked into the evaluation formulas, which never
/// evaluate theta off the torus point set.
#[derive(Debug, Clone)]
pub struct TwistedDlSpec {
    torus_tilde: Arc<RationalTorus>,
    theta_tilde: TorusCharacter,
}

impl TwistedDlSpec {
    pub fn new(ctx: &GroupContext, theta_tilde: TorusCharacter) -> Result<Self> {
        let torus_tilde = theta_tilde.torus().clone();
        if !is_epsilon_stable_torus(ctx, &torus_tilde)? {
            return Err(Error::NotEpsilonInvariant);
        }
        if !is_epsilon_invariant_character(ctx, &theta_tilde)? {
            return Err(Error::NotEpsilonInvariant);
        }
        Ok(TwistedDlSpec {
            torus_tilde,
            theta_tilde,
        })
    }

    pub fn torus_tilde(&self) -> &Arc<RationalTorus> {
        &self.torus_tilde
    }

    pub fn theta_tilde(&self) -> &TorusCharacter {
        &self.theta_tilde
    }
}

/// Weyl-orbit sum at a torus point, with no regularity requirement: the
/// common core of the untwisted value and the counterexample harness.
pub fn dl_value_at_torus_point(spec: &DlSpec, x: &Mat, ctx: &GroupContext) -> Result<CycloNumber> {
    let n = spec.torus.conductor();
    let mut counts = vec![0i128; n as usize];
    for v in &spec.weyl_reps {
        let vinv = ctx.mat_inv(v)?;
        let y = ctx.mat_mul(&ctx.mat_mul(v, x), &vinv);
        counts[spec.theta.exponent_of(&y)? as usize] += 1;
    }
    Ok(CycloNumber::from_counts(n, &counts))
}

/// (R_T^G theta)(x) for regular semisimple x in G(k): the Weyl-orbit sum of
/// theta at a conjugate of x inside T(k) when one exists (first conjugator in
/// enumeration order; the result does not depend on the choice), else zero.
pub fn dl_value(ctx: &GroupContext, spec: &DlSpec, x: &Mat) -> Result<CycloNumber> {
    let x = ctx.embed_to_ambient(x)?;
    if !ctx.in_fixed_subgroup(&x) {
        return Err(Error::OutsideGroup);
    }
    if !ctx.is_regular_semisimple(&x) {
        return Err(Error::NotRegularSemisimple);
    }
    for g in ctx.fixed_elements() {
        let ginv = ctx.mat_inv(g)?;
        let conj = ctx.mat_mul(&ctx.mat_mul(g, &x), &ginv);
        if spec.torus.contains_point(&conj) {
            return dl_value_at_torus_point(spec, &conj, ctx);
        }
    }
    Ok(CycloNumber::zero(spec.torus.conductor()))
}

fn finish_division(sum: CycloNumber, divisor: u64) -> Result<CycloNumber> {
    let value = sum.div_exact(divisor);
    if !value.is_integral() {
        return Err(Error::Internal(
            "twisted character value is not an algebraic integer".into(),
        ));
    }
    Ok(value)
}

/// Collapsed form of the twisted value:
/// (1/|T~(k)|) sum over {g : g^-1 x~ eps(g) in T~(k)} of theta~(g^-1 x~ eps(g)).
pub fn twisted_dl_value_collapsed(
    ctx: &GroupContext,
    spec: &TwistedDlSpec,
    x_tilde: &Mat,
) -> Result<CycloNumber> {
    check_twisted_preconditions(ctx, x_tilde)?;
    twisted_dl_value_collapsed_unchecked(ctx, spec, x_tilde)
}

pub(crate) fn twisted_dl_value_collapsed_unchecked(
    ctx: &GroupContext,
    spec: &TwistedDlSpec,
    x_tilde: &Mat,
) -> Result<CycloNumber> {
    let torus = &spec.torus_tilde;
    let theta = &spec.theta_tilde;
    let n = torus.conductor();
    let mut counts = vec![0i128; n as usize];
    for g in ctx.elements() {
        let ginv = ctx.mat_inv(g)?;
        let u = ctx.mat_mul(&ctx.mat_mul(&ginv, x_tilde), &ctx.apply_aut(g, 1)?);
        if torus.contains_point(&u) {
            counts[theta.exponent_of(&u)? as usize] += 1;
        }
    }
    finish_division(CycloNumber::from_counts(n, &counts), torus.size())
}

/// Semidirect-product form: the sum over pairs h = (g, eps^i) conjugating
/// x~ eps into T~(k) eps, of the trivially-extended theta~ at the conjugate,
/// divided by |T~(k) x| Gamma| = l |T~(k)|. Kept deliberately literal: it is
/// the internal oracle for the collapsed form.
pub fn twisted_dl_value_full(
    ctx: &GroupContext,
    spec: &TwistedDlSpec,
    x_tilde: &Mat,
) -> Result<CycloNumber> {
    check_twisted_preconditions(ctx, x_tilde)?;
    twisted_dl_value_full_unchecked(ctx, spec, x_tilde)
}

pub(crate) fn twisted_dl_value_full_unchecked(
    ctx: &GroupContext,
    spec: &TwistedDlSpec,
    x_tilde: &Mat,
) -> Result<CycloNumber> {
    let torus = &spec.torus_tilde;
    let theta = &spec.theta_tilde;
    let ell = ctx.aut.order;
    let n = torus.conductor();
    let mut counts = vec![0i128; n as usize];
    // x~ eps as a pair in the semidirect product
    let target = (x_tilde.clone(), 1u32);
    for g in ctx.elements() {
        for i in 0..ell {
            let h = (g.clone(), i);
            let conj = pair_mul(ctx, &pair_mul(ctx, &pair_inv(ctx, &h)?, &target)?, &h)?;
            if conj.1 != 1 % ell {
                return Err(Error::Internal(
                    "conjugation moved the coset component".into(),
                ));
            }
            if torus.contains_point(&conj.0) {
                // theta~ extended by theta~(eps) = 1
                counts[theta.exponent_of(&conj.0)? as usize] += 1;
            }
        }
    }
    finish_division(
        CycloNumber::from_counts(n, &counts),
        ell as u64 * torus.size(),
    )
}

fn check_twisted_preconditions(ctx: &GroupContext, x_tilde: &Mat) -> Result<()> {
    if !ctx.contains(x_tilde) {
        return Err(Error::OutsideGroup);
    }
    if !ctx.is_regular_semisimple(&ctx.norm(x_tilde)?) {
        return Err(Error::NotRegularSemisimple);
    }
    Ok(())
}

type Pair = (Mat, u32);

fn pair_mul(ctx: &GroupContext, a: &Pair, b: &Pair) -> Result<Pair> {
    let ell = ctx.aut.order;
    Ok((
        ctx.mat_mul(&a.0, &ctx.apply_aut(&b.0, a.1 as i64)?),
        (a.1 + b.1) % ell,
    ))
}

fn pair_inv(ctx: &GroupContext, a: &Pair) -> Result<Pair> {
    let ell = ctx.aut.order;
    let j = (ell - a.1 % ell) % ell;
    Ok((
        ctx.apply_aut(&ctx.mat_inv(&a.0)?, j as i64)?,
        j,
    ))
}

/// The transporter machinery behind the right-hand side of the identity:
/// transporter cosets from S to T grouped into orbits under left translation
/// by W_k(G,T).
#[derive(Debug)]
pub struct TransporterOrbits {
    pub t_tilde: Arc<RationalTorus>,
    pub weyl_reps: Vec<Mat>,
    /// each inner list holds the canonical coset representatives of one
    /// orbit, the orbit leader (least representative) first
    pub orbits: Vec<Vec<Mat>>,
}

pub fn transporter_orbits(
    ctx: &GroupContext,
    spec: &DlSpec,
    s_torus: &RationalTorus,
) -> Result<TransporterOrbits> {
    let t_tilde = centralizer_torus(ctx, spec.torus())?;
    let coset_reps = crate::tori::weyl_transporter_with(ctx, s_torus, spec.torus(), &t_tilde)?;
    let canonical = |m: &Mat| -> Mat {
        let mut coset: Vec<Mat> = t_tilde.points().iter().map(|p| ctx.mat_mul(p, m)).collect();
        coset.sort();
        coset.swap_remove(0)
    };
    let mut seen: std::collections::HashSet<Mat> = std::collections::HashSet::new();
    let mut orbits = Vec::new();
    for rep in &coset_reps {
        if seen.contains(rep) {
            continue;
        }
        let mut orbit = Vec::new();
        for w in &spec.weyl_reps {
            let key = canonical(&ctx.mat_mul(w, rep));
            if seen.insert(key.clone()) {
                orbit.push(key);
            }
        }
        orbit.sort();
        debug_assert_eq!(orbit[0], rep.clone(), "orbit leader is the least representative");
        orbits.push(orbit);
    }
    Ok(TransporterOrbits {
        t_tilde,
        weyl_reps: spec.weyl_reps.clone(),
        orbits,
    })
}

/// Sum of dl values at n s n^-1 over the given lifts, one per orbit.
pub fn theorem_rhs_from_lifts(
    ctx: &GroupContext,
    spec: &DlSpec,
    s: &Mat,
    lifts: &[Mat],
) -> Result<CycloNumber> {
    let mut acc = CycloNumber::zero(spec.torus().conductor());
    for n in lifts {
        let ninv = ctx.mat_inv(n)?;
        let conj = ctx.mat_mul(&ctx.mat_mul(n, s), &ninv);
        acc = acc.add(&dl_value(ctx, spec, &conj)?);
    }
    Ok(acc)
}

/// The right-hand side of the identity: the sum over
/// W_k(G,T)\W_k(G~,S,T) of (R_T^G theta)(w N(s~) w^-1), evaluated with the
/// deterministic orbit leaders as lifts. Zero on an empty transporter.
pub fn theorem_rhs(
    ctx: &GroupContext,
    spec: &DlSpec,
    s_tilde: &Mat,
    s_torus: &RationalTorus,
) -> Result<CycloNumber> {
    let s = ctx.norm(s_tilde)?;
    if !ctx.is_regular_semisimple(&s) {
        return Err(Error::NotRegularSemisimple);
    }
    if !s_torus.contains_point(&s) {
        return Err(Error::OutsideTorus);
    }
    let parts = transporter_orbits(ctx, spec, s_torus)?;
    let lifts: Vec<Mat> = parts.orbits.iter().map(|o| o[0].clone()).collect();
    theorem_rhs_from_lifts(ctx, spec, &s, &lifts)
}
