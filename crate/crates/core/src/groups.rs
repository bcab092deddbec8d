//! Matrices over tower fields, the ambient group and its epsilon-fixed
//! subgroup, the norm map, twisted conjugation, regularity tests, and
//! brute-force centralizer/normalizer scans.
//!
//! Two modes are supported. In Frobenius mode the ambient group is
//! GL_n(GF(q^l)) with epsilon acting entrywise by x -> x^q, and the fixed
//! subgroup is GL_n(GF(q)) (entries in the base field). In transpose-inverse
//! mode the ambient group is GL_2(GF(q)) for odd q with epsilon(g) = (g^T)^-1
//! of order 2, and the fixed subgroup is SO_2(GF(q)) for the form x^2 + y^2
//! (the determinant-one part of the orthogonal group, which is the connected
//! part of the full fixed-point group).

use std::collections::HashSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fields::{FieldElement, FieldTower};

/// Default cap on the ambient group order for full scans.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// A square matrix with all entries in one field of the tower, stored as
/// entry codes in row-major order. The derived ordering (row-major
/// lexicographic on codes) is the canonical enumeration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    pub n: u8,
    pub degree: u32,
    pub entries: Vec<u64>,
}

impl Mat {
    pub fn new(n: u8, degree: u32, entries: Vec<u64>) -> Self {
        assert_eq!(entries.len(), (n as usize) * (n as usize));
        Mat { n, degree, entries }
    }

    pub fn at(&self, i: usize, j: usize) -> FieldElement {
        FieldElement::new(self.degree, self.entries[i * self.n as usize + j])
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        debug_assert_eq!(v.degree, self.degree);
        self.entries[i * self.n as usize + j] = v.code;
    }

    pub fn identity(n: u8, degree: u32) -> Self {
        let mut m = Mat::new(n, degree, vec![0; n as usize * n as usize]);
        for i in 0..n as usize {
            m.entries[i * n as usize + i] = 1;
        }
        m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AutKind {
    /// Entrywise x -> x^(q^step) with q the base field size; order l.
    FieldFrobenius,
    /// g -> (g^T)^-1; order 2.
    TransposeInverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AutomorphismDesc {
    pub kind: AutKind,
    pub order: u32,
}

/// The ambient matrix group, its epsilon-fixed subgroup, and the data needed
/// to act on them. Immutable after construction; the full element lists are
/// enumerated once (deterministically) and cached.
#[derive(Debug)]
pub struct GroupContext {
    pub tower: Arc<FieldTower>,
    pub n: u8,
    /// degree of k over the prime field (q = p^base_degree)
    pub base_degree: u32,
    /// degree of the ambient entry field over the prime field
    pub ambient_degree: u32,
    pub aut: AutomorphismDesc,
    pub budget: u64,
    order: u64,
    elements: Vec<Mat>,
    element_set: HashSet<Mat>,
    fixed_elements: Vec<Mat>,
    fixed_set: HashSet<Mat>,
}

/// |GL_n(F_Q)| = prod over i < n of (Q^n - Q^i).
pub fn gl_order(q: u128, n: u8) -> u128 {
    let qn = q.pow(n as u32);
    let mut order = 1u128;
    for i in 0..n as u32 {
        order = order.saturating_mul(qn - q.pow(i));
    }
    order
}

fn factor_prime_power(q: u64) -> Result<(u64, u32)> {
    if q < 2 {
        return Err(Error::Config(format!("q = {q} is not a prime power")));
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if p * p > q {
        p = q;
    }
    let mut f = 0;
    let mut rest = q;
    while rest.is_multiple_of(p) {
        rest /= p;
        f += 1;
    }
    if rest != 1 {
        return Err(Error::Config(format!("q = {q} is not a prime power")));
    }
    Ok((p, f))
}

impl GroupContext {
    /// GL_n over GF(q^ell) with epsilon the entrywise q-power Frobenius.
    /// ell = 1 degenerates to plain GL_n(GF(q)) with trivial epsilon.
    pub fn new_frobenius(n: u8, q: u64, ell: u32, budget: u64) -> Result<Arc<Self>> {
        if n == 0 || ell == 0 {
            return Err(Error::Config("n and ell must be positive".into()));
        }
        let (p, f) = factor_prime_power(q)?;
        // check the group budget before investing in the tower
        let big_q = (q as u128).pow(ell);
        let order = gl_order(big_q, n);
        if order > budget as u128 {
            return Err(Error::GroupBudget { order, budget });
        }
        // the ambient field plus the block extensions used by partition tori
        let mut degrees = vec![f * ell];
        for d in 1..=n as u32 {
            degrees.push(f * d);
        }
        let tower = Arc::new(FieldTower::build(p, &degrees)?);
        let aut = AutomorphismDesc {
            kind: AutKind::FieldFrobenius,
            order: ell,
        };
        Self::build(tower, n, f, f * ell, aut, budget)
    }

    /// GL_2 over GF(q), odd q, with epsilon(g) = (g^T)^-1.
    pub fn new_transpose_inverse(q: u64, budget: u64) -> Result<Arc<Self>> {
        let (p, f) = factor_prime_power(q)?;
        if p == 2 {
            return Err(Error::BadTransposeInverseConfig);
        }
        let tower = Arc::new(FieldTower::build(p, &[f])?);
        let aut = AutomorphismDesc {
            kind: AutKind::TransposeInverse,
            order: 2,
        };
        Self::build(tower, 2, f, f, aut, budget)
    }

    fn build(
        tower: Arc<FieldTower>,
        n: u8,
        base_degree: u32,
        ambient_degree: u32,
        aut: AutomorphismDesc,
        budget: u64,
    ) -> Result<Arc<Self>> {
        let big_q = tower.field_size(ambient_degree)? as u128;
        let order = gl_order(big_q, n);
        if order > budget as u128 {
            return Err(Error::GroupBudget { order, budget });
        }
        let mut ctx = GroupContext {
            tower,
            n,
            base_degree,
            ambient_degree,
            aut,
            budget,
            order: order as u64,
            elements: Vec::new(),
            element_set: HashSet::new(),
            fixed_elements: Vec::new(),
            fixed_set: HashSet::new(),
        };
        ctx.enumerate()?;
        Ok(Arc::new(ctx))
    }

    /// Enumerate the ambient group in row-major lexicographic order, then the
    /// fixed subgroup in the induced order.
    fn enumerate(&mut self) -> Result<()> {
        let nn = self.n as usize * self.n as usize;
        let size = self.tower.field_size(self.ambient_degree)?;
        let mut counters = vec![0u64; nn];
        let mut elements = Vec::with_capacity(self.order as usize);
        loop {
            let cand = Mat::new(self.n, self.ambient_degree, counters.clone());
            if !self.tower.is_zero(self.det(&cand)) {
                elements.push(cand);
            }
            // odometer: last entry varies fastest so the stream is ascending
            let mut pos = nn;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                counters[pos] += 1;
                if counters[pos] < size {
                    break;
                }
                counters[pos] = 0;
                if pos == 0 {
                    pos = usize::MAX;
                    break;
                }
            }
            if pos == usize::MAX {
                break;
            }
        }
        if elements.len() as u64 != self.order {
            return Err(Error::Internal(format!(
                "enumerated {} elements, order formula says {}",
                elements.len(),
                self.order
            )));
        }
        self.element_set = elements.iter().cloned().collect();
        let fixed: Vec<Mat> = elements
            .iter()
            .filter(|g| self.is_fixed_subgroup_member(g))
            .cloned()
            .collect();
        self.fixed_set = fixed.iter().cloned().collect();
        self.elements = elements;
        self.fixed_elements = fixed;
        Ok(())
    }

    fn is_fixed_subgroup_member(&self, g: &Mat) -> bool {
        match self.aut.kind {
            AutKind::FieldFrobenius => g
                .entries
                .iter()
                .all(|&c| self.tower.in_subfield(FieldElement::new(self.ambient_degree, c), self.base_degree)),
            AutKind::TransposeInverse => {
                // SO_2 for the standard form: g^T g = 1 and det g = 1
                let gt = self.transpose(g);
                let prod = self.mat_mul(&gt, g);
                prod == Mat::identity(self.n, self.ambient_degree)
                    && self.det(g) == self.tower.one(self.ambient_degree)
            }
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// The ambient group, each element exactly once, deterministic order.
    pub fn elements(&self) -> &[Mat] {
        &self.elements
    }

    /// The fixed subgroup G(k), in the order induced from the ambient stream.
    pub fn fixed_elements(&self) -> &[Mat] {
        &self.fixed_elements
    }

    pub fn contains(&self, g: &Mat) -> bool {
        self.element_set.contains(g)
    }

    pub fn in_fixed_subgroup(&self, g: &Mat) -> bool {
        self.fixed_set.contains(g)
    }

    pub fn group_slice(&self, in_fixed: bool) -> &[Mat] {
        if in_fixed {
            &self.fixed_elements
        } else {
            &self.elements
        }
    }

    // ----- matrix arithmetic over the ambient field -----

    pub fn identity(&self) -> Mat {
        Mat::identity(self.n, self.ambient_degree)
    }

    /// Scalar matrix c * I with c given as a prime-field-tower code.
    pub fn scalar(&self, code: u64) -> Mat {
        let mut m = Mat::new(
            self.n,
            self.ambient_degree,
            vec![0; self.n as usize * self.n as usize],
        );
        for i in 0..self.n as usize {
            m.entries[i * self.n as usize + i] = code;
        }
        m
    }

    pub fn mat_mul(&self, a: &Mat, b: &Mat) -> Mat {
        debug_assert_eq!(a.n, b.n);
        let n = a.n as usize;
        let t = &self.tower;
        let mut out = Mat::new(a.n, a.degree, vec![0; n * n]);
        for i in 0..n {
            for j in 0..n {
                let mut acc = t.zero(a.degree);
                for k in 0..n {
                    acc = t.add(acc, t.mul(a.at(i, k), b.at(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn transpose(&self, a: &Mat) -> Mat {
        let n = a.n as usize;
        let mut out = a.clone();
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = a.entries[i * n + j];
            }
        }
        out
    }

    pub fn det(&self, a: &Mat) -> FieldElement {
        let n = a.n as usize;
        let t = &self.tower;
        match n {
            1 => a.at(0, 0),
            2 => t.sub(
                t.mul(a.at(0, 0), a.at(1, 1)),
                t.mul(a.at(0, 1), a.at(1, 0)),
            ),
            _ => {
                // Laplace expansion along the first row; n stays tiny here.
                let mut acc = t.zero(a.degree);
                for j in 0..n {
                    let c = a.at(0, j);
                    if t.is_zero(c) {
                        continue;
                    }
                    let minor = self.minor(a, 0, j);
                    let mut term = t.mul(c, self.det(&minor));
                    if j % 2 == 1 {
                        term = t.neg(term);
                    }
                    acc = t.add(acc, term);
                }
                acc
            }
        }
    }

    fn minor(&self, a: &Mat, row: usize, col: usize) -> Mat {
        let n = a.n as usize;
        let mut entries = Vec::with_capacity((n - 1) * (n - 1));
        for i in 0..n {
            if i == row {
                continue;
            }
            for j in 0..n {
                if j == col {
                    continue;
                }
                entries.push(a.entries[i * n + j]);
            }
        }
        Mat::new(a.n - 1, a.degree, entries)
    }

    /// Gauss-Jordan inverse.
    pub fn mat_inv(&self, a: &Mat) -> Result<Mat> {
        let n = a.n as usize;
        let t = &self.tower;
        let mut left = a.clone();
        let mut right = Mat::identity(a.n, a.degree);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !t.is_zero(left.at(r, col)))
                .ok_or(Error::Singular)?;
            if pivot != col {
                for j in 0..n {
                    left.entries.swap(col * n + j, pivot * n + j);
                    right.entries.swap(col * n + j, pivot * n + j);
                }
            }
            let inv = t.inv(left.at(col, col))?;
            for j in 0..n {
                left.set(col, j, t.mul(left.at(col, j), inv));
                right.set(col, j, t.mul(right.at(col, j), inv));
            }
            for r in 0..n {
                if r == col || t.is_zero(left.at(r, col)) {
                    continue;
                }
                let factor = left.at(r, col);
                for j in 0..n {
                    left.set(r, j, t.sub(left.at(r, j), t.mul(factor, left.at(col, j))));
                    right.set(r, j, t.sub(right.at(r, j), t.mul(factor, right.at(col, j))));
                }
            }
        }
        Ok(right)
    }

    /// Lift a matrix with base-field entry codes into the ambient field.
    pub fn embed_to_ambient(&self, a: &Mat) -> Result<Mat> {
        if a.degree == self.ambient_degree {
            return Ok(a.clone());
        }
        let mut out = Mat::new(self.n, self.ambient_degree, vec![0; a.entries.len()]);
        for (i, &c) in a.entries.iter().enumerate() {
            let e = self
                .tower
                .embed(FieldElement::new(a.degree, c), self.ambient_degree)?;
            out.entries[i] = e.code;
        }
        Ok(out)
    }

    // ----- the automorphism, norm, and twisted conjugation -----

    /// epsilon^exponent; the exponent is reduced modulo the order.
    pub fn apply_aut(&self, g: &Mat, exponent: i64) -> Result<Mat> {
        let l = self.aut.order as i64;
        let e = ((exponent % l) + l) % l;
        match self.aut.kind {
            AutKind::FieldFrobenius => {
                let steps = (self.base_degree as i64) * e;
                let mut out = g.clone();
                for c in out.entries.iter_mut() {
                    *c = self
                        .tower
                        .frobenius(FieldElement::new(g.degree, *c), steps)
                        .code;
                }
                Ok(out)
            }
            AutKind::TransposeInverse => {
                if e == 0 {
                    Ok(g.clone())
                } else {
                    let inv = self.mat_inv(g)?;
                    Ok(self.transpose(&inv))
                }
            }
        }
    }

    /// N(g) = g epsilon(g) ... epsilon^(l-1)(g).
    pub fn norm(&self, g: &Mat) -> Result<Mat> {
        let mut acc = self.identity();
        for i in 0..self.aut.order {
            acc = self.mat_mul(&acc, &self.apply_aut(g, i as i64)?);
        }
        Ok(acc)
    }

    /// h g epsilon(h)^-1.
    pub fn twisted_conjugate(&self, h: &Mat, g: &Mat) -> Result<Mat> {
        let eh = self.apply_aut(h, 1)?;
        let eh_inv = self.mat_inv(&eh)?;
        Ok(self.mat_mul(&self.mat_mul(h, g), &eh_inv))
    }

    // ----- characteristic polynomial and regularity -----

    /// Coefficients of det(xI - A), ascending, monic of degree n. The
    /// coefficient of x^(n-k) is (-1)^k times the sum of principal k-minors.
    pub fn char_poly(&self, a: &Mat) -> Vec<FieldElement> {
        let n = a.n as usize;
        let t = &self.tower;
        let deg = a.degree;
        let mut coeffs = vec![t.zero(deg); n + 1];
        coeffs[n] = t.one(deg);
        let rows: Vec<usize> = (0..n).collect();
        for k in 1..=n {
            let mut sum = t.zero(deg);
            for subset in k_subsets(&rows, k) {
                let sub = self.principal_submatrix(a, &subset);
                sum = t.add(sum, self.det(&sub));
            }
            if k % 2 == 1 {
                sum = t.neg(sum);
            }
            coeffs[n - k] = sum;
        }
        coeffs
    }

    fn principal_submatrix(&self, a: &Mat, idx: &[usize]) -> Mat {
        let k = idx.len();
        let n = a.n as usize;
        let mut entries = Vec::with_capacity(k * k);
        for &i in idx {
            for &j in idx {
                entries.push(a.entries[i * n + j]);
            }
        }
        Mat::new(k as u8, a.degree, entries)
    }

    /// True iff the characteristic polynomial is squarefree, i.e. the element
    /// has n distinct eigenvalues over the algebraic closure.
    pub fn is_regular_semisimple(&self, a: &Mat) -> bool {
        let f = self.char_poly(a);
        let fp = poly_derivative(&self.tower, &f);
        let g = poly_gcd(&self.tower, &f, &fp);
        poly_degree(&self.tower, &g) == Some(0)
    }

    /// Multiset of degrees of the irreducible factors of the characteristic
    /// polynomial over GF(Q) (Q the size of the coefficient field), via
    /// distinct-degree splitting. Only meaningful for squarefree inputs.
    pub fn char_poly_factor_degrees(&self, a: &Mat, coeff_degree: u32) -> Result<Vec<u32>> {
        let t = &self.tower;
        let mut f: Vec<FieldElement> = self
            .char_poly(a)
            .iter()
            .map(|c| {
                if c.degree == coeff_degree {
                    Ok(*c)
                } else {
                    t.restrict(*c, coeff_degree)
                }
            })
            .collect::<Result<_>>()?;
        let q = t.field_size(coeff_degree)?;
        let mut degrees = Vec::new();
        let mut d = 0u32;
        let mut xq = vec![t.zero(coeff_degree), t.one(coeff_degree)]; // x
        while poly_degree(t, &f).unwrap_or(0) > 0 {
            d += 1;
            xq = poly_powmod(t, &xq, q, &f);
            // gcd(f, x^(Q^d) - x)
            let mut diff = xq.clone();
            while diff.len() < 2 {
                diff.push(t.zero(coeff_degree));
            }
            diff[1] = t.sub(diff[1], t.one(coeff_degree));
            let g = poly_gcd(t, &f, &diff);
            if let Some(gd) = poly_degree(t, &g) {
                if gd > 0 {
                    for _ in 0..(gd as u32 / d) {
                        degrees.push(d);
                    }
                    f = poly_div(t, &f, &g);
                    // reduce x^(Q^d) mod the new f
                    xq = poly_rem(t, &xq, &f);
                }
            }
        }
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        Ok(degrees)
    }

    // ----- brute-force subgroup machinery -----

    /// All elements of the chosen group commuting with g.
    pub fn centralizer(&self, g: &Mat, in_fixed: bool) -> Vec<Mat> {
        self.group_slice(in_fixed)
            .iter()
            .filter(|h| self.mat_mul(h, g) == self.mat_mul(g, h))
            .cloned()
            .collect()
    }

    /// All elements of the chosen group with h S h^-1 = S (setwise).
    pub fn normalizer_of_set(&self, set: &[Mat], in_fixed: bool) -> Result<Vec<Mat>> {
        let members: HashSet<&Mat> = set.iter().collect();
        let mut result = Vec::new();
        for h in self.group_slice(in_fixed) {
            let hinv = self.mat_inv(h)?;
            let ok = set
                .iter()
                .all(|s| members.contains(&self.mat_mul(&self.mat_mul(h, s), &hinv)));
            if ok {
                result.push(h.clone());
            }
        }
        Ok(result)
    }
}

// ----- small polynomial helpers over a tower field -----

pub fn poly_degree(tower: &FieldTower, f: &[FieldElement]) -> Option<usize> {
    f.iter().rposition(|c| !tower.is_zero(*c))
}

pub fn poly_derivative(tower: &FieldTower, f: &[FieldElement]) -> Vec<FieldElement> {
    if f.len() <= 1 {
        return vec![];
    }
    let deg = f[0].degree;
    let p = tower.p();
    let mut out = Vec::with_capacity(f.len() - 1);
    for (i, c) in f.iter().enumerate().skip(1) {
        let scalar = FieldElement::new(deg, (i as u64) % p);
        out.push(tower.mul(scalar, *c));
    }
    out
}

fn poly_normalize(tower: &FieldTower, f: &[FieldElement]) -> Vec<FieldElement> {
    match poly_degree(tower, f) {
        None => vec![],
        Some(d) => {
            let lead_inv = tower.inv(f[d]).expect("nonzero leading coefficient");
            f[..=d].iter().map(|c| tower.mul(*c, lead_inv)).collect()
        }
    }
}

pub fn poly_rem(tower: &FieldTower, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    let bd = poly_degree(tower, b).expect("division by zero polynomial");
    let lead_inv = tower.inv(b[bd]).unwrap();
    let mut r: Vec<FieldElement> = a.to_vec();
    while let Some(rd) = poly_degree(tower, &r) {
        if rd < bd {
            break;
        }
        let factor = tower.mul(r[rd], lead_inv);
        for j in 0..=bd {
            let t = tower.mul(factor, b[j]);
            r[rd - bd + j] = tower.sub(r[rd - bd + j], t);
        }
    }
    r
}

pub fn poly_div(tower: &FieldTower, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    let bd = poly_degree(tower, b).expect("division by zero polynomial");
    let lead_inv = tower.inv(b[bd]).unwrap();
    let mut r: Vec<FieldElement> = a.to_vec();
    let ad = match poly_degree(tower, &r) {
        Some(d) => d,
        None => return vec![],
    };
    if ad < bd {
        return vec![];
    }
    let deg = a[0].degree;
    let mut q = vec![tower.zero(deg); ad - bd + 1];
    while let Some(rd) = poly_degree(tower, &r) {
        if rd < bd {
            break;
        }
        let factor = tower.mul(r[rd], lead_inv);
        q[rd - bd] = factor;
        for j in 0..=bd {
            let t = tower.mul(factor, b[j]);
            r[rd - bd + j] = tower.sub(r[rd - bd + j], t);
        }
    }
    q
}

pub fn poly_gcd(tower: &FieldTower, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    let mut x = poly_normalize(tower, a);
    let mut y = poly_normalize(tower, b);
    while !y.is_empty() {
        let r = poly_rem(tower, &x, &y);
        x = y;
        y = poly_normalize(tower, &r);
    }
    x
}

fn poly_mulmod(
    tower: &FieldTower,
    a: &[FieldElement],
    b: &[FieldElement],
    modulus: &[FieldElement],
) -> Vec<FieldElement> {
    let deg = modulus[0].degree;
    let mut prod = vec![tower.zero(deg); a.len() + b.len()];
    for (i, x) in a.iter().enumerate() {
        if tower.is_zero(*x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            prod[i + j] = tower.add(prod[i + j], tower.mul(*x, *y));
        }
    }
    poly_rem(tower, &prod, modulus)
}

fn poly_powmod(
    tower: &FieldTower,
    base: &[FieldElement],
    e: u64,
    modulus: &[FieldElement],
) -> Vec<FieldElement> {
    let deg = modulus[0].degree;
    let mut result = vec![tower.one(deg)];
    let mut b = poly_rem(tower, base, modulus);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mulmod(tower, &result, &b, modulus);
        }
        e >>= 1;
        if e > 0 {
            b = poly_mulmod(tower, &b, &b, modulus);
        }
    }
    result
}

fn k_subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let n = items.len();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
