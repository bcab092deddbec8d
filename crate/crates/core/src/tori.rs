//! Maximal tori realized as unit groups of commutative etale matrix-algebra
//! hulls, their rational point groups with cyclic decompositions, characters
//! valued in exact cyclotomic numbers, Weyl groups, and relative transporters.
//!
//! A torus is carried by its hull (an n-dimensional commutative subalgebra of
//! the n x n matrices over the ambient field) rather than by its bare point
//! set: at tiny q a torus can have a trivial point group while its Weyl group
//! is not (the split torus of GL_2(F_2)), so normalizers and transporters are
//! defined through the hull span plus the point set.

use std::collections::HashMap;
use std::sync::Arc;

use crate::cyclo::{lcm, CycloNumber};
use crate::error::{Error, Result};
use crate::fields::{FieldElement, FieldTower};
use crate::groups::{AutKind, GroupContext, Mat};

/// Reduced row echelon basis of a set of matrices viewed as vectors over the
/// ambient field; gives span membership tests and a canonical key.
#[derive(Debug, Clone)]
pub struct SpanBasis {
    degree: u32,
    rows: Vec<Vec<FieldElement>>,
    pivots: Vec<usize>,
}

impl SpanBasis {
    pub fn new(tower: &FieldTower, mats: &[Mat]) -> SpanBasis {
        let degree = mats[0].degree;
        let width = mats[0].entries.len();
        let mut rows: Vec<Vec<FieldElement>> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        for m in mats {
            let mut v: Vec<FieldElement> = m
                .entries
                .iter()
                .map(|&c| FieldElement::new(degree, c))
                .collect();
            reduce_against(tower, &mut v, &rows, &pivots);
            if let Some(p) = v.iter().position(|c| !tower.is_zero(*c)) {
                let inv = tower.inv(v[p]).unwrap();
                for c in v.iter_mut() {
                    *c = tower.mul(*c, inv);
                }
                // back-substitute into existing rows to keep the form reduced
                for (row, &rp) in rows.iter_mut().zip(pivots.iter()) {
                    let factor = row[p];
                    if !tower.is_zero(factor) && rp != p {
                        for (rc, vc) in row.iter_mut().zip(v.iter()) {
                            *rc = tower.sub(*rc, tower.mul(factor, *vc));
                        }
                    }
                }
                rows.push(v);
                pivots.push(p);
            }
            let _ = width;
        }
        // sort rows by pivot for a canonical form
        let mut order: Vec<usize> = (0..rows.len()).collect();
        order.sort_by_key(|&i| pivots[i]);
        let rows = order.iter().map(|&i| rows[i].clone()).collect();
        let pivots = order.iter().map(|&i| pivots[i]).collect();
        SpanBasis { degree, rows, pivots }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, tower: &FieldTower, m: &Mat) -> bool {
        debug_assert_eq!(m.degree, self.degree);
        let mut v: Vec<FieldElement> = m
            .entries
            .iter()
            .map(|&c| FieldElement::new(self.degree, c))
            .collect();
        reduce_against(tower, &mut v, &self.rows, &self.pivots);
        v.iter().all(|c| tower.is_zero(*c))
    }

    /// Canonical key for the span (the reduced echelon rows are unique).
    pub fn key(&self) -> Vec<Vec<u64>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|c| c.code).collect())
            .collect()
    }
}

fn reduce_against(
    tower: &FieldTower,
    v: &mut [FieldElement],
    rows: &[Vec<FieldElement>],
    pivots: &[usize],
) {
    for (row, &p) in rows.iter().zip(pivots.iter()) {
        let factor = v[p];
        if tower.is_zero(factor) {
            continue;
        }
        for (vc, rc) in v.iter_mut().zip(row.iter()) {
            *vc = tower.sub(*vc, tower.mul(factor, *rc));
        }
    }
}

/// A maximal torus at rational points: hull basis, point group, and its
/// cyclic decomposition. Immutable after construction.
#[derive(Debug)]
pub struct RationalTorus {
    /// points carry coefficients from this field degree (base field for tori
    /// of G, ambient field for tori of the big group)
    pub coeff_degree: u32,
    pub in_fixed_subgroup: bool,
    hull_basis: Vec<Mat>,
    span: SpanBasis,
    points: Vec<Mat>,
    coords: HashMap<Mat, Vec<u64>>,
    gens: Vec<Mat>,
    orders: Vec<u64>,
    conductor: u64,
    partition: Option<Vec<u32>>,
}

impl RationalTorus {
    pub fn points(&self) -> &[Mat] {
        &self.points
    }

    pub fn size(&self) -> u64 {
        self.points.len() as u64
    }

    pub fn contains_point(&self, m: &Mat) -> bool {
        self.coords.contains_key(m)
    }

    pub fn coords_of(&self, m: &Mat) -> Option<&[u64]> {
        self.coords.get(m).map(|v| v.as_slice())
    }

    pub fn generators(&self) -> &[Mat] {
        &self.gens
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn hull_basis(&self) -> &[Mat] {
        &self.hull_basis
    }

    pub fn hull_contains(&self, tower: &FieldTower, m: &Mat) -> bool {
        self.span.contains(tower, m)
    }

    /// Canonical identifier of the hull span, usable as a map key.
    pub fn hull_key(&self) -> Vec<Vec<u64>> {
        self.span.key()
    }

    pub fn partition(&self) -> Option<&[u32]> {
        self.partition.as_deref()
    }
}

/// Find a basis of a finite abelian group given its full element list and a
/// multiplication closure: returns generators with their orders such that the
/// group is the internal direct product of the generated cyclic subgroups.
/// The first generator realizes the group exponent.
fn abelian_basis(
    elems: &[Mat],
    mul: &dyn Fn(&Mat, &Mat) -> Mat,
    identity: &Mat,
) -> Result<Vec<(Mat, u64)>> {
    if elems.len() <= 1 {
        return Ok(vec![]);
    }
    let order_of = |x: &Mat| -> u64 {
        let mut acc = x.clone();
        let mut o = 1u64;
        while &acc != identity {
            acc = mul(&acc, x);
            o += 1;
        }
        o
    };
    let pow = |x: &Mat, e: u64| -> Mat {
        let mut acc = identity.clone();
        for _ in 0..e {
            acc = mul(&acc, x);
        }
        acc
    };
    // element of maximal order; elems is sorted, so ties resolve to the least
    let mut g1 = identity.clone();
    let mut d1 = 1u64;
    for x in elems {
        let o = order_of(x);
        if o > d1 {
            d1 = o;
            g1 = x.clone();
        }
    }
    let mut cyclic = Vec::with_capacity(d1 as usize);
    let mut acc = identity.clone();
    for _ in 0..d1 {
        cyclic.push(acc.clone());
        acc = mul(&acc, &g1);
    }
    if d1 as usize == elems.len() {
        return Ok(vec![(g1, d1)]);
    }
    // quotient by <g1>: canonical coset representative = least element
    let mut rep_of: HashMap<Mat, Mat> = HashMap::new();
    let mut qelems: Vec<Mat> = Vec::new();
    for x in elems {
        if rep_of.contains_key(x) {
            continue;
        }
        for c in &cyclic {
            rep_of.insert(mul(x, c), x.clone());
        }
        qelems.push(x.clone());
    }
    let qmul = |a: &Mat, b: &Mat| rep_of[&mul(a, b)].clone();
    let qidentity = rep_of[identity].clone();
    let qbasis = abelian_basis(&qelems, &qmul, &qidentity)?;
    let mut out = vec![(g1.clone(), d1)];
    for (hbar, e) in qbasis {
        // h^e lands in <g1>; adjust by a power of g1 so the lift has order e
        let he = pow(&hbar, e);
        let a = cyclic
            .iter()
            .position(|c| c == &he)
            .ok_or_else(|| Error::Internal("quotient lift left the cyclic part".into()))?
            as u64;
        if !a.is_multiple_of(e) {
            return Err(Error::Internal(
                "abelian lift exponent not divisible".into(),
            ));
        }
        let t = (a / e) % d1;
        let h = mul(&hbar, &pow(&g1, (d1 - t) % d1));
        out.push((h, e));
    }
    Ok(out)
}

struct PointFilter<'a> {
    ctx: &'a GroupContext,
}

impl<'a> PointFilter<'a> {
    fn admits(&self, m: &Mat, in_fixed: bool) -> bool {
        let t = &self.ctx.tower;
        if t.is_zero(self.ctx.det(m)) {
            return false;
        }
        if !in_fixed {
            return true;
        }
        match self.ctx.aut.kind {
            // base-field coefficients on a base-rational hull already give
            // base-field entries, hence membership in G(k)
            AutKind::FieldFrobenius => true,
            AutKind::TransposeInverse => {
                let fixed = self.ctx.apply_aut(m, 1).map(|e| &e == m).unwrap_or(false);
                fixed && self.ctx.det(m) == t.one(self.ctx.ambient_degree)
            }
        }
    }
}

fn build_torus(
    ctx: &GroupContext,
    hull_basis: Vec<Mat>,
    coeff_degree: u32,
    in_fixed: bool,
    partition: Option<Vec<u32>>,
) -> Result<Arc<RationalTorus>> {
    let tower = &ctx.tower;
    let span = SpanBasis::new(tower, &hull_basis);
    // enumerate the point set: coefficient tuples over the coefficient field
    let coeff_elems: Vec<FieldElement> = tower
        .elements(coeff_degree)
        .map(|c| tower.embed(c, ctx.ambient_degree))
        .collect::<Result<_>>()?;
    let dim = hull_basis.len();
    let filter = PointFilter { ctx };
    let mut points: Vec<Mat> = Vec::new();
    let mut counters = vec![0usize; dim];
    loop {
        let mut m = Mat::new(ctx.n, ctx.ambient_degree, vec![0; (ctx.n as usize).pow(2)]);
        for (k, &ci) in counters.iter().enumerate() {
            let c = coeff_elems[ci];
            for (idx, &bcode) in hull_basis[k].entries.iter().enumerate() {
                let term = tower.mul(c, FieldElement::new(ctx.ambient_degree, bcode));
                let cur = FieldElement::new(ctx.ambient_degree, m.entries[idx]);
                m.entries[idx] = tower.add(cur, term).code;
            }
        }
        if filter.admits(&m, in_fixed) {
            points.push(m);
        }
        let mut pos = dim;
        loop {
            if pos == 0 {
                pos = usize::MAX;
                break;
            }
            pos -= 1;
            counters[pos] += 1;
            if counters[pos] < coeff_elems.len() {
                break;
            }
            counters[pos] = 0;
        }
        if pos == usize::MAX {
            break;
        }
    }
    points.sort();
    points.dedup();
    let identity = ctx.identity();
    if !points.contains(&identity) {
        return Err(Error::Internal("torus point set lacks the identity".into()));
    }
    let mul = |a: &Mat, b: &Mat| ctx.mat_mul(a, b);
    let basis = abelian_basis(&points, &mul, &identity)?;
    let gens: Vec<Mat> = basis.iter().map(|(g, _)| g.clone()).collect();
    let orders: Vec<u64> = basis.iter().map(|&(_, d)| d).collect();
    // coordinate lookup table over the full direct product
    let mut coords: HashMap<Mat, Vec<u64>> = HashMap::new();
    let mut tuple = vec![0u64; gens.len()];
    loop {
        let mut m = identity.clone();
        for (g, &c) in gens.iter().zip(tuple.iter()) {
            for _ in 0..c {
                m = ctx.mat_mul(&m, g);
            }
        }
        if coords.insert(m, tuple.clone()).is_some() {
            return Err(Error::Internal(
                "cyclic decomposition is not a direct product".into(),
            ));
        }
        let mut pos = tuple.len();
        loop {
            if pos == 0 {
                pos = usize::MAX;
                break;
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < orders[pos] {
                break;
            }
            tuple[pos] = 0;
        }
        if pos == usize::MAX {
            break;
        }
    }
    if coords.len() != points.len() || points.iter().any(|p| !coords.contains_key(p)) {
        return Err(Error::Internal(
            "coordinate table is not a bijection onto the point set".into(),
        ));
    }
    let conductor = orders.iter().fold(1u64, |a, &d| lcm(a, d));
    Ok(Arc::new(RationalTorus {
        coeff_degree,
        in_fixed_subgroup: in_fixed,
        hull_basis,
        span,
        points,
        coords,
        gens,
        orders,
        conductor,
        partition,
    }))
}

/// Standard maximal torus of G for a partition of n: block-diagonal hull with
/// block i the regular representation of the degree-lambda_i extension of the
/// base field.
pub fn torus_from_partition(ctx: &GroupContext, partition: &[u32]) -> Result<Arc<RationalTorus>> {
    if ctx.aut.kind != AutKind::FieldFrobenius {
        return Err(Error::Config(
            "partition tori require Frobenius mode or plain GL_n".into(),
        ));
    }
    let total: u32 = partition.iter().sum();
    if total != ctx.n as u32 || partition.contains(&0) {
        return Err(Error::BadPartition(ctx.n));
    }
    let mut sorted: Vec<u32> = partition.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let tower = &ctx.tower;
    let n = ctx.n as usize;
    let mut hull_basis: Vec<Mat> = Vec::with_capacity(n);
    let mut offset = 0usize;
    for &d in &sorted {
        let block = companion_block(ctx, d)?;
        // powers C^0 .. C^(d-1), embedded block-diagonally at the offset
        let mut power = Mat::identity(d as u8, ctx.ambient_degree);
        for _ in 0..d {
            let mut big = Mat::new(ctx.n, ctx.ambient_degree, vec![0; n * n]);
            for i in 0..d as usize {
                for j in 0..d as usize {
                    big.entries[(offset + i) * n + (offset + j)] =
                        power.entries[i * d as usize + j];
                }
            }
            hull_basis.push(big);
            power = mul_small(tower, &power, &block);
        }
        offset += d as usize;
    }
    build_torus(ctx, hull_basis, ctx.base_degree, true, Some(sorted))
}

/// Companion matrix over the base field of the minimal polynomial of the
/// canonical generator of the degree-d extension of the base field, with
/// entries embedded into the ambient field.
fn companion_block(ctx: &GroupContext, d: u32) -> Result<Mat> {
    let tower = &ctx.tower;
    let base = ctx.base_degree;
    if d == 1 {
        return Ok(Mat::identity(1, ctx.ambient_degree));
    }
    let ext = base * d;
    let gamma = tower.generator(ext)?;
    // minimal polynomial over GF(q): product of (X - gamma^(q^j))
    let mut poly = vec![tower.one(ext)]; // ascending coefficients
    for j in 0..d {
        let conj = tower.frobenius(gamma, (base * j) as i64);
        // multiply poly by (X - conj)
        let mut next = vec![tower.zero(ext); poly.len() + 1];
        for (i, &c) in poly.iter().enumerate() {
            next[i + 1] = tower.add(next[i + 1], c);
            next[i] = tower.sub(next[i], tower.mul(c, conj));
        }
        poly = next;
    }
    // coefficients lie in the base subfield; pull them back and re-embed
    let mut comp = Mat::new(d as u8, ctx.ambient_degree, vec![0; d as usize * d as usize]);
    for i in 1..d as usize {
        comp.entries[i * d as usize + (i - 1)] = 1;
    }
    for (i, &coeff) in poly.iter().take(d as usize).enumerate() {
        let c = tower.restrict(coeff, base).map_err(|_| {
            Error::Internal("minimal polynomial coefficient outside base field".into())
        })?;
        let neg = tower.neg(c);
        let emb = tower.embed(neg, ctx.ambient_degree)?;
        comp.entries[i * d as usize + (d as usize - 1)] = emb.code;
    }
    Ok(comp)
}

fn mul_small(tower: &FieldTower, a: &Mat, b: &Mat) -> Mat {
    let n = a.n as usize;
    let mut out = Mat::new(a.n, a.degree, vec![0; n * n]);
    for i in 0..n {
        for j in 0..n {
            let mut acc = tower.zero(a.degree);
            for k in 0..n {
                acc = tower.add(acc, tower.mul(a.at(i, k), b.at(k, j)));
            }
            out.set(i, j, acc);
        }
    }
    out
}

/// The unique maximal torus containing a regular semisimple element: hull is
/// the span of the powers of s, points are the hull units inside the chosen
/// group.
pub fn torus_of_regular_element(
    ctx: &GroupContext,
    s: &Mat,
    in_fixed: bool,
) -> Result<Arc<RationalTorus>> {
    let s = ctx.embed_to_ambient(s)?;
    if !ctx.is_regular_semisimple(&s) {
        return Err(Error::NotRegularSemisimple);
    }
    if in_fixed && !ctx.in_fixed_subgroup(&s) {
        return Err(Error::OutsideGroup);
    }
    let mut hull_basis = Vec::with_capacity(ctx.n as usize);
    let mut power = ctx.identity();
    for _ in 0..ctx.n {
        hull_basis.push(power.clone());
        power = ctx.mat_mul(&power, &s);
    }
    let coeff_degree = if in_fixed {
        ctx.base_degree
    } else {
        ctx.ambient_degree
    };
    let partition = ctx.char_poly_factor_degrees(&s, coeff_degree).ok();
    build_torus(ctx, hull_basis, coeff_degree, in_fixed, partition)
}

/// The torus of G in transpose-inverse mode: hull spanned by I and the
/// rotation generator J, points the determinant-one epsilon-fixed units
/// (that is, all of SO_2).
pub fn so2_torus(ctx: &GroupContext) -> Result<Arc<RationalTorus>> {
    if ctx.aut.kind != AutKind::TransposeInverse {
        return Err(Error::Config("so2 torus only exists in transpose-inverse mode".into()));
    }
    let t = &ctx.tower;
    let deg = ctx.ambient_degree;
    let one = t.one(deg);
    let neg_one = t.neg(one);
    let j = Mat::new(2, deg, vec![0, one.code, neg_one.code, 0]);
    let hull_basis = vec![ctx.identity(), j];
    build_torus(ctx, hull_basis, deg, true, None)
}

/// The torus of the ambient group centralizing a torus of G: hull is the full
/// commutant algebra of the hull of T, points are all of its units.
pub fn centralizer_torus(ctx: &GroupContext, t: &RationalTorus) -> Result<Arc<RationalTorus>> {
    let hull_basis = commutant_basis(ctx, t.hull_basis())?;
    build_torus(ctx, hull_basis, ctx.ambient_degree, false, None)
}

/// Basis of {X : XB = BX for every B in mats}, by Gaussian elimination on the
/// n^2-dimensional coefficient space.
fn commutant_basis(ctx: &GroupContext, mats: &[Mat]) -> Result<Vec<Mat>> {
    let tower = &ctx.tower;
    let n = ctx.n as usize;
    let deg = ctx.ambient_degree;
    let nn = n * n;
    // rows of the constraint system: for each B and each (i,j), the equation
    // sum_k X[i,k] B[k,j] - B[i,k] X[k,j] = 0
    let mut rows: Vec<Vec<FieldElement>> = Vec::new();
    for b in mats {
        for i in 0..n {
            for j in 0..n {
                let mut row = vec![tower.zero(deg); nn];
                for k in 0..n {
                    // coefficient of X[i,k]
                    row[i * n + k] = tower.add(row[i * n + k], b.at(k, j));
                    // coefficient of X[k,j]
                    row[k * n + j] = tower.sub(row[k * n + j], b.at(i, k));
                }
                rows.push(row);
            }
        }
    }
    // reduced row echelon form of the constraints
    let mut pivots: Vec<usize> = Vec::new();
    let mut echelon: Vec<Vec<FieldElement>> = Vec::new();
    for mut row in rows {
        reduce_against(tower, &mut row, &echelon, &pivots);
        if let Some(p) = row.iter().position(|c| !tower.is_zero(*c)) {
            let inv = tower.inv(row[p])?;
            for c in row.iter_mut() {
                *c = tower.mul(*c, inv);
            }
            for existing in echelon.iter_mut() {
                let factor = existing[p];
                if !tower.is_zero(factor) {
                    for (ec, rc) in existing.iter_mut().zip(row.iter()) {
                        *ec = tower.sub(*ec, tower.mul(factor, *rc));
                    }
                }
            }
            echelon.push(row);
            pivots.push(p);
        }
    }
    // nullspace: one basis vector per free column
    let mut basis = Vec::new();
    for free in 0..nn {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![tower.zero(deg); nn];
        v[free] = tower.one(deg);
        for (row, &p) in echelon.iter().zip(pivots.iter()) {
            // row: x_p + sum_{c > p} row[c] x_c = 0
            v[p] = tower.neg(row[free]);
        }
        let entries: Vec<u64> = v.iter().map(|c| c.code).collect();
        basis.push(Mat::new(ctx.n, deg, entries));
    }
    if basis.is_empty() {
        return Err(Error::Internal("empty commutant".into()));
    }
    Ok(basis)
}

/// Normalizer elements of a torus inside the chosen group: stabilize both the
/// hull span and the point set.
pub fn torus_normalizer_elements(
    ctx: &GroupContext,
    t: &RationalTorus,
    in_fixed: bool,
) -> Result<Vec<Mat>> {
    let mut out = Vec::new();
    for g in ctx.group_slice(in_fixed) {
        if transports(ctx, g, t, t)? {
            out.push(g.clone());
        }
    }
    Ok(out)
}

fn transports(ctx: &GroupContext, g: &Mat, from: &RationalTorus, to: &RationalTorus) -> Result<bool> {
    let ginv = ctx.mat_inv(g)?;
    for b in from.hull_basis() {
        let conj = ctx.mat_mul(&ctx.mat_mul(g, b), &ginv);
        if !to.hull_contains(&ctx.tower, &conj) {
            return Ok(false);
        }
    }
    if from.size() != to.size() {
        return Ok(false);
    }
    for p in from.points() {
        let conj = ctx.mat_mul(&ctx.mat_mul(g, p), &ginv);
        if !to.contains_point(&conj) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// W_k(G,T) (or its ambient analogue): representatives of N(T)/T(k), least
/// element of each coset in enumeration order.
pub fn weyl_group(ctx: &GroupContext, t: &RationalTorus, in_fixed: bool) -> Result<Vec<Mat>> {
    let normalizer = torus_normalizer_elements(ctx, t, in_fixed)?;
    Ok(coset_representatives(ctx, &normalizer, t.points()))
}

/// Representatives of P\M for a point set P acting by left multiplication on
/// a set M of matrices closed under that action.
fn coset_representatives(ctx: &GroupContext, set: &[Mat], points: &[Mat]) -> Vec<Mat> {
    let mut reps: Vec<Mat> = Vec::new();
    let mut seen: std::collections::HashSet<Mat> = std::collections::HashSet::new();
    for g in set {
        if seen.contains(g) {
            continue;
        }
        let mut coset: Vec<Mat> = points.iter().map(|p| ctx.mat_mul(p, g)).collect();
        coset.sort();
        reps.push(coset[0].clone());
        for c in coset {
            seen.insert(c);
        }
    }
    reps.sort();
    reps
}

/// Transporter coset representatives T~(k)\{g in ambient : g S g^-1 = T},
/// with T~ the centralizer torus of T. Empty when the tori are not conjugate
/// under the ambient group.
pub fn weyl_transporter(
    ctx: &GroupContext,
    s: &RationalTorus,
    t: &RationalTorus,
) -> Result<Vec<Mat>> {
    let t_tilde = centralizer_torus(ctx, t)?;
    weyl_transporter_with(ctx, s, t, &t_tilde)
}

pub fn weyl_transporter_with(
    ctx: &GroupContext,
    s: &RationalTorus,
    t: &RationalTorus,
    t_tilde: &RationalTorus,
) -> Result<Vec<Mat>> {
    let mut transporter = Vec::new();
    for g in ctx.elements() {
        if transports(ctx, g, s, t)? {
            transporter.push(g.clone());
        }
    }
    Ok(coset_representatives(ctx, &transporter, t_tilde.points()))
}

/// Is the torus stable under epsilon (hull and point set)?
pub fn is_epsilon_stable_torus(ctx: &GroupContext, t: &RationalTorus) -> Result<bool> {
    for b in t.hull_basis() {
        if !t.hull_contains(&ctx.tower, &ctx.apply_aut(b, 1)?) {
            return Ok(false);
        }
    }
    for p in t.points() {
        if !t.contains_point(&ctx.apply_aut(p, 1)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A character of a torus point group, given by exponents against the cyclic
/// generators: theta(g_i) = zeta_N^((N/d_i) a_i) with N the torus conductor.
#[derive(Debug, Clone)]
pub struct TorusCharacter {
    torus: Arc<RationalTorus>,
    exps: Vec<u64>,
}

impl TorusCharacter {
    pub fn new(torus: Arc<RationalTorus>, exps: Vec<u64>) -> Result<Self> {
        if exps.len() != torus.orders().len() {
            return Err(Error::Config(format!(
                "character needs {} exponents, got {}",
                torus.orders().len(),
                exps.len()
            )));
        }
        let exps = exps
            .iter()
            .zip(torus.orders().iter())
            .map(|(&a, &d)| a % d)
            .collect();
        Ok(TorusCharacter { torus, exps })
    }

    pub fn trivial(torus: Arc<RationalTorus>) -> Self {
        let exps = vec![0; torus.orders().len()];
        TorusCharacter { torus, exps }
    }

    pub fn torus(&self) -> &Arc<RationalTorus> {
        &self.torus
    }

    pub fn exps(&self) -> &[u64] {
        &self.exps
    }

    pub fn conductor(&self) -> u64 {
        self.torus.conductor()
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&a| a == 0)
    }

    /// Exponent e with theta(t) = zeta_N^e.
    pub fn exponent_of(&self, t: &Mat) -> Result<u64> {
        let coords = self.torus.coords_of(t).ok_or(Error::OutsideTorus)?;
        let n = self.torus.conductor();
        let mut e = 0u64;
        for ((&c, &a), &d) in coords.iter().zip(self.exps.iter()).zip(self.torus.orders().iter()) {
            e = (e + (n / d) % n * ((a as u128 * c as u128 % d as u128) as u64)) % n;
        }
        Ok(e)
    }

    pub fn evaluate(&self, t: &Mat) -> Result<CycloNumber> {
        Ok(CycloNumber::root_of_unity(
            self.torus.conductor(),
            self.exponent_of(t)?,
        ))
    }
}

/// Every character of the torus point group, in lexicographic exponent order.
pub fn all_characters(torus: &Arc<RationalTorus>) -> Vec<TorusCharacter> {
    let orders = torus.orders().to_vec();
    let mut out = Vec::with_capacity(torus.size() as usize);
    let mut tuple = vec![0u64; orders.len()];
    loop {
        out.push(TorusCharacter {
            torus: torus.clone(),
            exps: tuple.clone(),
        });
        let mut pos = tuple.len();
        loop {
            if pos == 0 {
                pos = usize::MAX;
                break;
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < orders[pos] {
                break;
            }
            tuple[pos] = 0;
        }
        if pos == usize::MAX {
            break;
        }
    }
    out
}

/// theta-tilde = theta o N as a character of the bigger torus. Errors when
/// the norm image leaves the point set of theta's torus (a malformed pair),
/// and verifies the defining identity on every point.
pub fn compose_with_norm(
    ctx: &GroupContext,
    theta: &TorusCharacter,
    t_tilde: &Arc<RationalTorus>,
) -> Result<TorusCharacter> {
    let small = theta.torus();
    let n_small = small.conductor();
    let mut exps = Vec::with_capacity(t_tilde.orders().len());
    for (g, &d) in t_tilde.generators().iter().zip(t_tilde.orders().iter()) {
        let nu = ctx.norm(g)?;
        if !small.contains_point(&nu) {
            return Err(Error::MalformedTorusPair(
                "norm of a generator leaves the small torus".into(),
            ));
        }
        let e = theta.exponent_of(&nu)?;
        // zeta_{N}^e must be a d-th root of unity: a = e d / N
        let num = e as u128 * d as u128;
        if !num.is_multiple_of(n_small as u128) {
            return Err(Error::MalformedTorusPair(
                "norm character exponent not defined on the generator order".into(),
            ));
        }
        exps.push(((num / n_small as u128) % d as u128) as u64);
    }
    let composed = TorusCharacter::new(t_tilde.clone(), exps)?;
    // the two homomorphisms agree on generators, hence everywhere; verify
    // anyway to catch coordinate-table defects
    let n_big = t_tilde.conductor();
    let l = lcm(n_big, n_small);
    for t in t_tilde.points() {
        let nu = ctx.norm(t)?;
        if !small.contains_point(&nu) {
            return Err(Error::MalformedTorusPair(
                "norm image leaves the small torus point set".into(),
            ));
        }
        let lhs = composed.exponent_of(t)? * (l / n_big) % l;
        let rhs = theta.exponent_of(&nu)? * (l / n_small) % l;
        if lhs != rhs {
            return Err(Error::Internal(
                "norm-composed character disagrees with direct evaluation".into(),
            ));
        }
    }
    Ok(composed)
}

/// Is the character fixed by epsilon? Requires the torus itself to be
/// epsilon-stable; then agreement on generators settles the whole group.
pub fn is_epsilon_invariant_character(ctx: &GroupContext, theta: &TorusCharacter) -> Result<bool> {
    let torus = theta.torus();
    for g in torus.generators() {
        let eg = ctx.apply_aut(g, 1)?;
        if !torus.contains_point(&eg) {
            return Ok(false);
        }
        if theta.exponent_of(&eg)? != theta.exponent_of(g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All partitions of n, parts descending, in deterministic order (first by
/// largest part descending).
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn rec(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        let top = max.min(n);
        for part in (1..=top).rev() {
            prefix.push(part);
            rec(n - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::DEFAULT_BUDGET;

    fn gl_ctx(n: u8, q: u64, ell: u32) -> Arc<GroupContext> {
        GroupContext::new_frobenius(n, q, ell, DEFAULT_BUDGET).unwrap()
    }

    #[test]
    fn partition_lists() {
        assert_eq!(partitions(2), vec![vec![2], vec![1, 1]]);
        assert_eq!(partitions(3), vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
    }

    #[test]
    fn partition_torus_examples() {
        let ctx = gl_ctx(2, 3, 1);
        let t = torus_from_partition(&ctx, &[1, 1]).unwrap();
        assert_eq!(t.size(), 4);
        for p in t.points() {
            assert!(ctx.tower.is_zero(p.at(0, 1)));
            assert!(ctx.tower.is_zero(p.at(1, 0)));
        }
        let ctx2 = gl_ctx(2, 2, 1);
        let t2 = torus_from_partition(&ctx2, &[2]).unwrap();
        assert_eq!(t2.size(), 3);
        let ctx3 = gl_ctx(3, 2, 1);
        let t3 = torus_from_partition(&ctx3, &[2, 1]).unwrap();
        assert_eq!(t3.size(), 3);
        assert!(torus_from_partition(&ctx3, &[2, 2]).is_err());
    }

    #[test]
    fn hull_units_counts_match_formula() {
        for (n, q, lambda) in [
            (2u8, 2u64, vec![1u32, 1]),
            (2, 2, vec![2]),
            (2, 3, vec![1, 1]),
            (2, 3, vec![2]),
            (3, 2, vec![3]),
            (3, 2, vec![2, 1]),
            (3, 2, vec![1, 1, 1]),
        ] {
            let ctx = gl_ctx(n, q, 1);
            let t = torus_from_partition(&ctx, &lambda).unwrap();
            let expected: u64 = lambda.iter().map(|&d| q.pow(d) - 1).product();
            assert_eq!(t.size(), expected, "q={q} lambda={lambda:?}");
            let prod: u64 = t.orders().iter().product();
            assert_eq!(prod, t.size());
        }
    }

    #[test]
    fn regular_element_torus_examples() {
        let ctx = gl_ctx(2, 3, 1);
        let d = Mat::new(2, 1, vec![1, 0, 0, 2]);
        let t = torus_of_regular_element(&ctx, &d, true).unwrap();
        assert_eq!(t.size(), 4);
        assert_eq!(t.partition(), Some(&[1u32, 1][..]));
        let ctx2 = gl_ctx(2, 2, 1);
        let c = Mat::new(2, 1, vec![0, 1, 1, 1]);
        let t2 = torus_of_regular_element(&ctx2, &c, true).unwrap();
        assert_eq!(t2.size(), 3);
        assert_eq!(t2.partition(), Some(&[2u32][..]));
        assert!(matches!(
            torus_of_regular_element(&ctx2, &ctx2.identity(), true),
            Err(Error::NotRegularSemisimple)
        ));
    }

    #[test]
    fn centralizer_torus_examples() {
        // split torus of GL2(F3) inside GL2(F9): diagonal torus, 64 points
        let ctx = gl_ctx(2, 3, 2);
        let t = torus_from_partition(&ctx, &[1, 1]).unwrap();
        let tt = centralizer_torus(&ctx, &t).unwrap();
        assert_eq!(tt.size(), 64);
        // transpose-inverse: T = SO2(F3), centralizer is GF(9)* with 8 points
        let ti = GroupContext::new_transpose_inverse(3, DEFAULT_BUDGET).unwrap();
        let so2 = so2_torus(&ti).unwrap();
        assert_eq!(so2.size(), 4);
        let tt2 = centralizer_torus(&ti, &so2).unwrap();
        assert_eq!(tt2.size(), 8);
        // n=1: the whole group
        let c1 = gl_ctx(1, 3, 2);
        let t1 = torus_from_partition(&c1, &[1]).unwrap();
        let tt1 = centralizer_torus(&c1, &t1).unwrap();
        assert_eq!(tt1.size(), 8);
    }

    #[test]
    fn weyl_group_examples() {
        // split torus of GL2(F2): |P| = 1 but |W| = 2 via the hull
        let ctx = gl_ctx(2, 2, 1);
        let t = torus_from_partition(&ctx, &[1, 1]).unwrap();
        assert_eq!(t.size(), 1);
        assert_eq!(weyl_group(&ctx, &t, true).unwrap().len(), 2);
        // nonsplit torus of GL2(F2): |W| = 2
        let t2 = torus_from_partition(&ctx, &[2]).unwrap();
        assert_eq!(weyl_group(&ctx, &t2, true).unwrap().len(), 2);
        // n = 1: trivial
        let c1 = gl_ctx(1, 3, 1);
        let t1 = torus_from_partition(&c1, &[1]).unwrap();
        assert_eq!(weyl_group(&c1, &t1, true).unwrap().len(), 1);
        // GL2(F3) split torus: |W| = 2
        let c3 = gl_ctx(2, 3, 1);
        let t3 = torus_from_partition(&c3, &[1, 1]).unwrap();
        assert_eq!(weyl_group(&c3, &t3, true).unwrap().len(), 2);
    }

    #[test]
    fn transporter_examples() {
        let ctx = gl_ctx(2, 2, 2);
        let t = torus_from_partition(&ctx, &[2]).unwrap();
        // S = T gives W_k(G~, T); must be a union of right W_k(G,T)-cosets
        let reps = weyl_transporter(&ctx, &t, &t).unwrap();
        let w = weyl_group(&ctx, &t, true).unwrap();
        assert!(!reps.is_empty());
        assert_eq!(reps.len() % w.len(), 0);
        // non-conjugate tori: empty
        let split = torus_from_partition(&ctx, &[1, 1]).unwrap();
        assert!(weyl_transporter(&ctx, &split, &t).unwrap().is_empty());
    }

    #[test]
    fn transporter_is_union_of_weyl_cosets() {
        // left translation by W_k(G,T) permutes the transporter cosets freely
        let ctx = gl_ctx(2, 2, 2);
        for lambda in partitions(2) {
            let t = torus_from_partition(&ctx, &lambda).unwrap();
            let t_tilde = centralizer_torus(&ctx, &t).unwrap();
            let reps = weyl_transporter_with(&ctx, &t, &t, &t_tilde).unwrap();
            let w = weyl_group(&ctx, &t, true).unwrap();
            assert_eq!(reps.len() % w.len(), 0, "lambda={lambda:?}");
            let keys: std::collections::HashSet<Mat> = reps.iter().cloned().collect();
            for m in &w {
                for r in &reps {
                    let mr = ctx.mat_mul(m, r);
                    // canonical key of the coset T~(k) mr
                    let mut coset: Vec<Mat> =
                        t_tilde.points().iter().map(|p| ctx.mat_mul(p, &mr)).collect();
                    coset.sort();
                    assert!(keys.contains(&coset[0]));
                }
            }
        }
    }

    #[test]
    fn character_evaluation_examples() {
        let ctx = gl_ctx(2, 2, 1);
        let t = torus_from_partition(&ctx, &[2]).unwrap();
        let chars = all_characters(&t);
        assert_eq!(chars.len(), 3);
        let theta = &chars[1]; // faithful
        let g = &t.generators()[0];
        let val = theta.evaluate(g).unwrap();
        let one = CycloNumber::one(3);
        assert_ne!(val, one);
        assert_eq!(val.mul(&val).mul(&val), one, "cube root of unity");
        // trivial character evaluates to 1 everywhere
        let triv = TorusCharacter::trivial(t.clone());
        for p in t.points() {
            assert_eq!(triv.evaluate(p).unwrap(), CycloNumber::one(t.conductor()));
        }
        // multiplicativity spot check
        let p1 = &t.points()[1];
        let p2 = &t.points()[2];
        let prod = ctx.mat_mul(p1, p2);
        assert_eq!(
            theta.evaluate(&prod).unwrap(),
            theta.evaluate(p1).unwrap().mul(&theta.evaluate(p2).unwrap())
        );
        // outside the torus
        assert!(matches!(
            theta.evaluate(&Mat::new(2, 1, vec![1, 1, 0, 1])),
            Err(Error::OutsideTorus)
        ));
    }

    #[test]
    fn character_orthogonality() {
        for (n, q, lambda) in [(2u8, 2u64, vec![2u32]), (2, 3, vec![1, 1]), (2, 3, vec![2])] {
            let ctx = gl_ctx(n, q, 1);
            let t = torus_from_partition(&ctx, &lambda).unwrap();
            let chars = all_characters(&t);
            for a in &chars {
                for b in &chars {
                    let mut acc = CycloNumber::zero(t.conductor());
                    for p in t.points() {
                        acc = acc.add(&a.evaluate(p).unwrap().mul(&b.evaluate(p).unwrap().conj()));
                    }
                    let expected = if a.exps() == b.exps() {
                        CycloNumber::from_integer(t.size() as i64)
                    } else {
                        CycloNumber::zero(1)
                    };
                    assert_eq!(acc, expected);
                }
            }
        }
    }

    #[test]
    fn compose_with_norm_examples() {
        // n=1, GF(4)/GF(2): the norm image is trivial, so theta-tilde is trivial
        let ctx = gl_ctx(1, 2, 2);
        let t = torus_from_partition(&ctx, &[1]).unwrap();
        assert_eq!(t.size(), 1);
        let theta = TorusCharacter::trivial(t.clone());
        let tt = centralizer_torus(&ctx, &t).unwrap();
        let composed = compose_with_norm(&ctx, &theta, &tt).unwrap();
        assert!(composed.is_trivial());
        // n=1, GF(9)/GF(3), order-2 theta: theta-tilde(x) = theta(x^4) has order 2
        let ctx3 = gl_ctx(1, 3, 2);
        let t3 = torus_from_partition(&ctx3, &[1]).unwrap();
        assert_eq!(t3.size(), 2);
        let theta2 = TorusCharacter::new(t3.clone(), vec![1]).unwrap();
        let tt3 = centralizer_torus(&ctx3, &t3).unwrap();
        assert_eq!(tt3.size(), 8);
        let composed3 = compose_with_norm(&ctx3, &theta2, &tt3).unwrap();
        // the composed character has order 2: value -1 on a generator of GF(9)*
        let g = &tt3.generators()[0];
        let v = composed3.evaluate(g).unwrap();
        assert_eq!(v.mul(&v), CycloNumber::one(1));
        assert_ne!(v, CycloNumber::one(1));
    }

    #[test]
    fn epsilon_invariance_examples() {
        let ctx = gl_ctx(2, 2, 2);
        for lambda in partitions(2) {
            let t = torus_from_partition(&ctx, &lambda).unwrap();
            let tt = centralizer_torus(&ctx, &t).unwrap();
            assert!(is_epsilon_stable_torus(&ctx, &tt).unwrap(), "{lambda:?}");
            for theta in all_characters(&t) {
                let composed = compose_with_norm(&ctx, &theta, &tt).unwrap();
                assert!(is_epsilon_invariant_character(&ctx, &composed).unwrap());
            }
        }
        // a conjugate of an epsilon-stable torus by a non-fixed element need
        // not be epsilon-stable: find one by scan
        let t = torus_from_partition(&ctx, &[2]).unwrap();
        let tt = centralizer_torus(&ctx, &t).unwrap();
        let mut found_unstable = false;
        for g in ctx.elements() {
            if ctx.in_fixed_subgroup(g) {
                continue;
            }
            let ginv = ctx.mat_inv(g).unwrap();
            let basis: Vec<Mat> = tt
                .hull_basis()
                .iter()
                .map(|b| ctx.mat_mul(&ctx.mat_mul(g, b), &ginv))
                .collect();
            let conj_span = SpanBasis::new(&ctx.tower, &basis);
            let stable = basis.iter().all(|b| {
                conj_span.contains(&ctx.tower, &ctx.apply_aut(b, 1).unwrap())
            });
            if !stable {
                found_unstable = true;
                break;
            }
        }
        assert!(found_unstable);
    }

    #[test]
    fn fixed_points_of_big_torus_are_small_torus() {
        // epsilon-fixed points of T~(k) = T(k), checked per configuration
        for (q, ell, lambda) in [
            (2u64, 2u32, vec![1u32, 1]),
            (2, 2, vec![2]),
            (3, 2, vec![1, 1]),
            (3, 2, vec![2]),
            (2, 3, vec![1, 1]),
            (2, 3, vec![2]),
        ] {
            let ctx = gl_ctx(2, q, ell);
            let t = torus_from_partition(&ctx, &lambda).unwrap();
            let tt = centralizer_torus(&ctx, &t).unwrap();
            let fixed: Vec<&Mat> = tt
                .points()
                .iter()
                .filter(|p| ctx.apply_aut(p, 1).unwrap() == **p)
                .collect();
            assert_eq!(fixed.len() as u64, t.size(), "q={q} ell={ell} lambda={lambda:?}");
            for p in fixed {
                assert!(t.contains_point(p));
            }
        }
    }

    #[test]
    fn so2_torus_requires_transpose_inverse_mode() {
        let ctx = gl_ctx(2, 3, 1);
        assert!(so2_torus(&ctx).is_err());
        let ti = GroupContext::new_transpose_inverse(5, DEFAULT_BUDGET).unwrap();
        let t = so2_torus(&ti).unwrap();
        assert_eq!(t.size(), 4); // |SO2(F5)| = q - 1 for q = 1 mod 4
        assert_eq!(t.points().len(), ti.fixed_elements().len());
    }
}
