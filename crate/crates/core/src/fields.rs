//! Exact arithmetic in a tower of finite fields GF(p^m) with compatible
//! embeddings, Frobenius maps, and discrete logarithms.
//!
//! Elements are stored as integer codes: the element with coefficient vector
//! (c_0, ..., c_{m-1}) over GF(p) (c_i the coefficient of x^i modulo the
//! field's modulus polynomial) has code c_0 + c_1 p + ... + c_{m-1} p^{m-1}.
//! The canonical element order used everywhere is ascending code.
//!
//! Every registered field uses a primitive modulus, so the residue class of x
//! generates the multiplicative group; exp/log tables are built from it once.
//! Embeddings for a | b send the class of x in GF(p^a) to
//! x^((p^b-1)/(p^a-1)) in GF(p^b), which is a ring embedding exactly when the
//! moduli are norm-compatible (the Conway condition). That condition is
//! verified at registration, and the fallback modulus search only accepts
//! polynomials satisfying it, so embed(a->c) = embed(b->c) o embed(a->b)
//! holds for all chains a | b | c.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Hard cap on field size; towers may configure a lower budget.
pub const FIELD_SIZE_CAP: u64 = 1 << 16;

/// Conway polynomials for the small characteristics exercised by the desk
/// configurations, coefficients ascending (constant term first, monic leading
/// coefficient included). Registration re-verifies primitivity and
/// norm-compatibility, so a bad entry fails loudly rather than corrupting a
/// tower.
const CONWAY_TABLE: &[(u64, u32, &[u64])] = &[
    (2, 1, &[1, 1]),
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (3, 1, &[1, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (5, 1, &[3, 1]),
    (5, 2, &[2, 4, 1]),
    (7, 1, &[4, 1]),
    (7, 2, &[3, 6, 1]),
];

/// An element of one field of a tower: extension degree plus integer code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    pub degree: u32,
    pub code: u64,
}

impl FieldElement {
    pub fn new(degree: u32, code: u64) -> Self {
        FieldElement { degree, code }
    }
}

#[derive(Debug, Clone)]
struct FieldData {
    m: u32,
    size: u64,
    modulus: Vec<u64>,
    /// exp[i] = code of x^i, 0 <= i < size-1
    exp: Vec<u64>,
    /// log[code] w.r.t. x; log[0] is a sentinel
    log: Vec<u64>,
    /// least primitive element in canonical code order
    generator: u64,
    /// inverse of log_x(generator) modulo size-1
    gen_log_inv: u64,
}

/// A compatible tower of finite fields of one characteristic.
#[derive(Debug, Clone)]
pub struct FieldTower {
    p: u64,
    budget: u64,
    fields: BTreeMap<u32, FieldData>,
    /// (a, b) with a | b -> code translation table of length p^a
    embeddings: BTreeMap<(u32, u32), Vec<u64>>,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_u64(base: u64, exp: u32) -> u64 {
    let mut r = 1u64;
    for _ in 0..exp {
        r = r.checked_mul(base).expect("field size overflow");
    }
    r
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Modular inverse of a modulo n for gcd(a, n) = 1.
fn mod_inverse(a: u64, n: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (n as i128, (a % n) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1, "not invertible");
    ((t % n as i128 + n as i128) % n as i128) as u64
}

/// Multiply two polynomials over GF(p) and reduce modulo the monic `modulus`.
fn poly_mulmod(p: u64, a: &[u64], b: &[u64], modulus: &[u64]) -> Vec<u64> {
    let m = modulus.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    // reduce: x^m = -(modulus[0..m])
    for i in (m..prod.len()).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for j in 0..m {
            let sub = (c * modulus[j]) % p;
            prod[i - m + j] = (prod[i - m + j] + p - sub) % p;
        }
    }
    prod.truncate(m);
    prod
}

fn coeffs_to_code(p: u64, coeffs: &[u64]) -> u64 {
    let mut code = 0u64;
    for &c in coeffs.iter().rev() {
        code = code * p + (c % p);
    }
    code
}

fn code_to_coeffs(p: u64, m: u32, code: u64) -> Vec<u64> {
    let mut v = Vec::with_capacity(m as usize);
    let mut c = code;
    for _ in 0..m {
        v.push(c % p);
        c /= p;
    }
    v
}

/// Build exp/log tables for GF(p)[x]/(modulus) provided the class of x has
/// full multiplicative order p^m - 1 (which also certifies the modulus is
/// irreducible and primitive). Returns None otherwise.
fn try_build_tables(p: u64, modulus: &[u64]) -> Option<(Vec<u64>, Vec<u64>)> {
    let m = (modulus.len() - 1) as u32;
    let size = pow_u64(p, m);
    let order = size - 1;
    if modulus[0] == 0 {
        return None; // x divides the modulus
    }
    let x_poly: Vec<u64> = if m == 1 {
        // x reduces to -modulus[0]
        vec![(p - modulus[0] % p) % p]
    } else {
        let mut v = vec![0u64; m as usize];
        v[1] = 1;
        v
    };
    let mut exp = Vec::with_capacity(order as usize);
    let mut log = vec![u64::MAX; size as usize];
    let mut cur = vec![0u64; m as usize];
    cur[0] = 1;
    for i in 0..order {
        let code = coeffs_to_code(p, &cur);
        if code == 1 && i > 0 {
            return None; // order of x divides i < p^m - 1
        }
        if log[code as usize] != u64::MAX {
            return None; // cycle without reaching 1: x not a unit
        }
        log[code as usize] = i;
        exp.push(code);
        cur = poly_mulmod(p, &cur, &x_poly, modulus);
    }
    // after order steps we must be back at 1
    if coeffs_to_code(p, &cur) != 1 {
        return None;
    }
    Some((exp, log))
}

/// Evaluate a polynomial over GF(p) at an element of GF(p^b) given by code.
fn eval_poly_at(
    p: u64,
    poly: &[u64],
    data: &FieldData,
    point: u64,
) -> u64 {
    let mut acc = 0u64; // code of running value
    for &c in poly.iter().rev() {
        acc = field_mul_raw(data, acc, point);
        acc = field_add_raw(p, data.m, acc, c % p);
    }
    acc
}

fn field_add_raw(p: u64, m: u32, a: u64, b: u64) -> u64 {
    let mut out = 0u64;
    let mut pw = 1u64;
    let (mut a, mut b) = (a, b);
    for _ in 0..m {
        let s = (a % p + b % p) % p;
        out += s * pw;
        pw *= p;
        a /= p;
        b /= p;
    }
    out
}

fn field_mul_raw(data: &FieldData, a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    let order = data.size - 1;
    let e = (data.log[a as usize] + data.log[b as usize]) % order;
    data.exp[e as usize]
}

impl FieldTower {
    /// Build a tower over GF(p) containing the requested extension degrees,
    /// closed under pairwise lcm, with compatible embeddings for every
    /// divisibility pair.
    pub fn build(p: u64, degrees: &[u32]) -> Result<FieldTower> {
        Self::build_with_budget(p, degrees, FIELD_SIZE_CAP)
    }

    pub fn build_with_budget(p: u64, degrees: &[u32], budget: u64) -> Result<FieldTower> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        let budget = budget.min(FIELD_SIZE_CAP);
        // close the requested set under pairwise lcm, and always include 1
        let mut wanted: Vec<u32> = vec![1];
        wanted.extend_from_slice(degrees);
        loop {
            let mut added = false;
            let snapshot = wanted.clone();
            for &a in &snapshot {
                for &b in &snapshot {
                    let l = a / gcd(a as u64, b as u64) as u32 * b;
                    if !wanted.contains(&l) {
                        wanted.push(l);
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }
        wanted.sort_unstable();
        wanted.dedup();
        let mut tower = FieldTower {
            p,
            budget,
            fields: BTreeMap::new(),
            embeddings: BTreeMap::new(),
        };
        for &m in &wanted {
            tower.register_degree(m)?;
        }
        Ok(tower)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.fields.keys().copied().collect()
    }

    pub fn field_size(&self, m: u32) -> Result<u64> {
        Ok(self.data(m)?.size)
    }

    pub fn modulus(&self, m: u32) -> Result<Vec<u64>> {
        Ok(self.data(m)?.modulus.clone())
    }

    fn data(&self, m: u32) -> Result<&FieldData> {
        self.fields.get(&m).ok_or(Error::UnknownDegree(m))
    }

    fn register_degree(&mut self, m: u32) -> Result<()> {
        if self.fields.contains_key(&m) {
            return Ok(());
        }
        let mut size = 1u64;
        for _ in 0..m {
            size = size
                .checked_mul(self.p)
                .filter(|&s| s <= self.budget)
                .ok_or(Error::FieldBudget {
                    p: self.p,
                    m,
                    budget: self.budget,
                })?;
        }
        let divisors: Vec<u32> = self
            .fields
            .keys()
            .copied()
            .filter(|&d| m.is_multiple_of(d) && d < m)
            .collect();
        let modulus = self.find_modulus(m, &divisors)?;
        let (exp, log) =
            try_build_tables(self.p, &modulus).ok_or(Error::Internal(format!(
                "registered modulus for degree {m} is not primitive"
            )))?;
        // least primitive element in canonical code order
        let order = size - 1;
        let mut generator = 0u64;
        for code in 1..size {
            if gcd(log[code as usize], order) == 1 {
                generator = code;
                break;
            }
        }
        if order == 1 {
            generator = 1; // GF(2): the only unit
        }
        let gen_log_inv = if order == 1 {
            0
        } else {
            mod_inverse(log[generator as usize], order)
        };
        let data = FieldData {
            m,
            size,
            modulus,
            exp,
            log,
            generator,
            gen_log_inv,
        };
        // embeddings from every registered divisor into m, verified
        for &d in &divisors {
            let table = self.build_embedding(d, &data)?;
            self.embeddings.insert((d, m), table);
        }
        // identity embedding
        let ident: Vec<u64> = (0..data.size).collect();
        self.embeddings.insert((m, m), ident);
        self.fields.insert(m, data);
        Ok(())
    }

    /// Conway table lookup, else deterministic search for the first primitive
    /// modulus (ascending code order of the non-leading coefficients) that is
    /// norm-compatible with every registered divisor degree.
    fn find_modulus(&self, m: u32, divisors: &[u32]) -> Result<Vec<u64>> {
        for &(tp, tm, coeffs) in CONWAY_TABLE {
            if tp == self.p && tm == m {
                let modulus: Vec<u64> = coeffs.to_vec();
                if self.modulus_is_compatible(&modulus, m, divisors) {
                    return Ok(modulus);
                }
                return Err(Error::Internal(format!(
                    "table modulus for GF({}^{}) failed verification",
                    self.p, m
                )));
            }
        }
        let size = pow_u64(self.p, m);
        for lower in 0..size {
            let mut modulus = code_to_coeffs(self.p, m, lower);
            modulus.push(1);
            if self.modulus_is_compatible(&modulus, m, divisors) {
                return Ok(modulus);
            }
        }
        Err(Error::NoCompatibleModulus { p: self.p, m })
    }

    /// Accept a candidate iff x has full order (primitive + irreducible) and
    /// modulus_d(x^((p^m-1)/(p^d-1))) = 0 for every registered divisor d.
    fn modulus_is_compatible(&self, modulus: &[u64], m: u32, divisors: &[u32]) -> bool {
        let Some((exp, log)) = try_build_tables(self.p, modulus) else {
            return false;
        };
        let size = pow_u64(self.p, m);
        let data = FieldData {
            m,
            size,
            modulus: modulus.to_vec(),
            exp,
            log,
            generator: 0,
            gen_log_inv: 0,
        };
        for &d in divisors {
            let sub = &self.fields[&d];
            let e = (size - 1) / (sub.size - 1);
            let rho = data.exp[(e % (size - 1)) as usize];
            if eval_poly_at(self.p, &sub.modulus, &data, rho) != 0 {
                return false;
            }
        }
        true
    }

    fn build_embedding(&self, d: u32, target: &FieldData) -> Result<Vec<u64>> {
        let sub = &self.fields[&d];
        let e = (target.size - 1) / (sub.size - 1);
        let rho = target.exp[(e % (target.size - 1)) as usize];
        if eval_poly_at(self.p, &sub.modulus, target, rho) != 0 {
            return Err(Error::Internal(format!(
                "embedding root check failed for {} -> {}",
                d, target.m
            )));
        }
        let mut table = Vec::with_capacity(sub.size as usize);
        for code in 0..sub.size {
            let coeffs = code_to_coeffs(self.p, d, code);
            table.push(eval_poly_at(self.p, &coeffs, target, rho));
        }
        Ok(table)
    }

    // ----- element constructors -----

    pub fn zero(&self, m: u32) -> FieldElement {
        FieldElement::new(m, 0)
    }

    pub fn one(&self, m: u32) -> FieldElement {
        FieldElement::new(m, 1)
    }

    pub fn from_coeffs(&self, m: u32, coeffs: &[u64]) -> Result<FieldElement> {
        let data = self.data(m)?;
        let mut v = coeffs.to_vec();
        v.resize(m as usize, 0);
        let code = coeffs_to_code(self.p, &v);
        debug_assert!(code < data.size);
        Ok(FieldElement::new(m, code))
    }

    pub fn from_code(&self, m: u32, code: u64) -> Result<FieldElement> {
        let data = self.data(m)?;
        if code >= data.size {
            return Err(Error::Config(format!(
                "code {code} out of range for GF({}^{m})",
                self.p
            )));
        }
        Ok(FieldElement::new(m, code))
    }

    pub fn coeffs(&self, x: FieldElement) -> Vec<u64> {
        code_to_coeffs(self.p, x.degree, x.code)
    }

    /// The fixed multiplicative generator (least primitive element).
    pub fn generator(&self, m: u32) -> Result<FieldElement> {
        Ok(FieldElement::new(m, self.data(m)?.generator))
    }

    pub fn elements(&self, m: u32) -> impl Iterator<Item = FieldElement> + '_ {
        let size = self.fields[&m].size;
        (0..size).map(move |c| FieldElement::new(m, c))
    }

    // ----- arithmetic -----

    fn check_same(&self, a: FieldElement, b: FieldElement) {
        assert_eq!(a.degree, b.degree, "mixed-field operation");
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.check_same(a, b);
        FieldElement::new(a.degree, field_add_raw(self.p, a.degree, a.code, b.code))
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let mut out = 0u64;
        let mut pw = 1u64;
        let mut c = a.code;
        for _ in 0..a.degree {
            let d = c % self.p;
            out += ((self.p - d) % self.p) * pw;
            pw *= self.p;
            c /= self.p;
        }
        FieldElement::new(a.degree, out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.check_same(a, b);
        let data = &self.fields[&a.degree];
        FieldElement::new(a.degree, field_mul_raw(data, a.code, b.code))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.code == 0 {
            return Err(Error::Singular);
        }
        let data = self.data(a.degree)?;
        let order = data.size - 1;
        let e = (order - data.log[a.code as usize] % order) % order;
        Ok(FieldElement::new(a.degree, data.exp[e as usize]))
    }

    pub fn pow(&self, a: FieldElement, e: i64) -> Result<FieldElement> {
        let data = self.data(a.degree)?;
        if a.code == 0 {
            if e == 0 {
                return Ok(self.one(a.degree));
            }
            if e < 0 {
                return Err(Error::Singular);
            }
            return Ok(self.zero(a.degree));
        }
        let order = (data.size - 1) as i128;
        let le = ((data.log[a.code as usize] as i128 * e as i128) % order + order) % order;
        Ok(FieldElement::new(a.degree, data.exp[le as usize]))
    }

    pub fn is_zero(&self, a: FieldElement) -> bool {
        a.code == 0
    }

    /// x -> x^(p^steps); steps may be any integer (reduced mod the degree).
    pub fn frobenius(&self, x: FieldElement, steps: i64) -> FieldElement {
        let data = &self.fields[&x.degree];
        if x.code == 0 {
            return x;
        }
        let m = x.degree as i64;
        let s = ((steps % m) + m) % m;
        let order = (data.size - 1) as u128;
        let mut mult = 1u128;
        for _ in 0..s {
            mult = (mult * self.p as u128) % order;
        }
        let e = (data.log[x.code as usize] as u128 * mult) % order;
        FieldElement::new(x.degree, data.exp[e as usize])
    }

    /// Exponent of x with respect to the field's fixed generator.
    pub fn discrete_log(&self, x: FieldElement) -> Result<u64> {
        if x.code == 0 {
            return Err(Error::ZeroDlog);
        }
        let data = self.data(x.degree)?;
        let order = data.size - 1;
        if order == 1 {
            return Ok(0);
        }
        Ok((data.log[x.code as usize] as u128 * data.gen_log_inv as u128 % order as u128) as u64)
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, x: FieldElement) -> Result<u64> {
        if x.code == 0 {
            return Err(Error::ZeroDlog);
        }
        let data = self.data(x.degree)?;
        let order = data.size - 1;
        if order == 1 {
            return Ok(1);
        }
        Ok(order / gcd(data.log[x.code as usize], order))
    }

    pub fn embed(&self, x: FieldElement, target: u32) -> Result<FieldElement> {
        if x.degree == target {
            return Ok(x);
        }
        let table = self
            .embeddings
            .get(&(x.degree, target))
            .ok_or(Error::NoEmbeddingPath(x.degree, target))?;
        Ok(FieldElement::new(target, table[x.code as usize]))
    }

    /// Inverse of `embed` when the code lies in the embedded subfield image.
    pub fn restrict(&self, x: FieldElement, target: u32) -> Result<FieldElement> {
        if x.degree == target {
            return Ok(x);
        }
        let table = self
            .embeddings
            .get(&(target, x.degree))
            .ok_or(Error::NoEmbeddingPath(target, x.degree))?;
        table
            .iter()
            .position(|&c| c == x.code)
            .map(|i| FieldElement::new(target, i as u64))
            .ok_or(Error::OutsideGroup)
    }

    /// True when x lies in the image of GF(p^target) inside its own field.
    pub fn in_subfield(&self, x: FieldElement, target: u32) -> bool {
        // the subfield image is exactly the fixed set of frobenius^target
        self.frobenius(x, target as i64) == x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf4_modulus_is_unique_irreducible_quadratic() {
        let t = FieldTower::build(2, &[1, 2]).unwrap();
        assert_eq!(t.modulus(2).unwrap(), vec![1, 1, 1]);
    }

    #[test]
    fn gf9_modulus_is_primitive_and_irreducible() {
        // independent oracle: exhaustive order test of the residue class of x
        let t = FieldTower::build(3, &[1, 2]).unwrap();
        let modulus = t.modulus(2).unwrap();
        let mut seen = std::collections::HashSet::new();
        let mut cur = vec![1u64, 0];
        let x = vec![0u64, 1];
        for _ in 0..8 {
            seen.insert(coeffs_to_code(3, &cur));
            cur = poly_mulmod(3, &cur, &x, &modulus);
        }
        assert_eq!(coeffs_to_code(3, &cur), 1, "x^8 = 1");
        assert_eq!(seen.len(), 8, "x has full order 8");
    }

    #[test]
    fn non_prime_characteristic_rejected() {
        assert_eq!(FieldTower::build(4, &[1]).unwrap_err(), Error::NonPrime(4));
    }

    #[test]
    fn budget_guard() {
        let err = FieldTower::build(2, &[17]).unwrap_err();
        assert!(matches!(err, Error::FieldBudget { .. }));
    }

    #[test]
    fn frobenius_examples() {
        let t = FieldTower::build(2, &[1, 2]).unwrap();
        let omega = t.generator(2).unwrap();
        let sq = t.mul(omega, omega);
        assert_eq!(t.frobenius(omega, 1), sq);
        for x in t.elements(1) {
            assert_eq!(t.frobenius(x, 1), x, "prime field fixed");
        }
        let t3 = FieldTower::build(3, &[1, 2]).unwrap();
        for x in t3.elements(2) {
            assert_eq!(t3.frobenius(x, 2), x, "full orbit closes");
        }
    }

    #[test]
    fn frobenius_fixes_exactly_prime_field() {
        for (p, m) in [(2u64, 2u32), (2, 3), (3, 2), (5, 2)] {
            let t = FieldTower::build(p, &[1, m]).unwrap();
            let fixed: Vec<_> = t
                .elements(m)
                .filter(|&x| t.frobenius(x, 1) == x)
                .collect();
            assert_eq!(fixed.len() as u64, p);
            for x in t.elements(1) {
                let y = t.embed(x, m).unwrap();
                assert!(fixed.contains(&y));
            }
        }
    }

    #[test]
    fn discrete_log_examples() {
        let t = FieldTower::build(2, &[1, 2]).unwrap();
        let g = t.generator(2).unwrap();
        assert_eq!(t.discrete_log(g).unwrap(), 1);
        let t3 = FieldTower::build(3, &[1, 2]).unwrap();
        assert_eq!(t3.discrete_log(t3.one(2)).unwrap(), 0);
        let g = t3.generator(2).unwrap();
        let g2 = t3.mul(g, g);
        assert_eq!(t3.discrete_log(g2).unwrap(), 2);
        assert_eq!(t3.discrete_log(t3.zero(2)).unwrap_err(), Error::ZeroDlog);
    }

    #[test]
    fn generator_has_full_order() {
        for (p, degs) in [
            (2u64, vec![1u32, 2, 3, 6]),
            (3, vec![1, 2, 4]),
            (3, vec![1, 3]),
            (5, vec![1, 2]),
            (7, vec![1, 2]),
        ] {
            let t = FieldTower::build(p, &degs).unwrap();
            for &m in &degs {
                let g = t.generator(m).unwrap();
                let order = t.field_size(m).unwrap() - 1;
                assert_eq!(t.mult_order(g).unwrap(), order, "p={p} m={m}");
            }
        }
    }

    #[test]
    fn lcm_closure_respects_budget() {
        // degrees {3, 4} force registering degree 12; 3^12 busts the cap
        let err = FieldTower::build(3, &[3, 4]).unwrap_err();
        assert!(matches!(err, Error::FieldBudget { m: 12, .. }));
    }

    #[test]
    fn embeddings_are_ring_homomorphisms() {
        let t = FieldTower::build(2, &[1, 2, 4]).unwrap();
        for a in t.elements(2) {
            for b in t.elements(2) {
                let ea = t.embed(a, 4).unwrap();
                let eb = t.embed(b, 4).unwrap();
                assert_eq!(t.embed(t.mul(a, b), 4).unwrap(), t.mul(ea, eb));
                assert_eq!(t.embed(t.add(a, b), 4).unwrap(), t.add(ea, eb));
            }
        }
    }

    #[test]
    fn embedding_chains_compose() {
        // a | b | c with a=1, b=2, c=4 and a=1, b=2|6, 3|6 chains
        for (p, chain) in [(2u64, (1u32, 2u32, 4u32)), (2, (1, 2, 6)), (2, (1, 3, 6)), (3, (1, 2, 4))] {
            let (a, b, c) = chain;
            let t = FieldTower::build(p, &[a, b, c]).unwrap();
            for x in t.elements(a) {
                let direct = t.embed(x, c).unwrap();
                let via = t.embed(t.embed(x, b).unwrap(), c).unwrap();
                assert_eq!(direct, via, "p={p} chain {a}|{b}|{c}");
            }
        }
    }

    #[test]
    fn frobenius_commutes_with_embeddings() {
        let t = FieldTower::build(2, &[1, 2, 4]).unwrap();
        for x in t.elements(2) {
            let lhs = t.embed(t.frobenius(x, 1), 4).unwrap();
            let rhs = t.frobenius(t.embed(x, 4).unwrap(), 1);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn norm_surjectivity_onto_base() {
        // x -> x * x^q * ... * x^(q^(l-1)) maps GF(q^l)* onto GF(q)*
        for (p, l) in [(2u64, 2u32), (2, 3), (3, 2), (5, 2), (7, 2)] {
            let t = FieldTower::build(p, &[1, l]).unwrap();
            let mut image = std::collections::HashSet::new();
            for x in t.elements(l).skip(1) {
                let mut acc = t.one(l);
                for i in 0..l {
                    acc = t.mul(acc, t.frobenius(x, i as i64));
                }
                assert!(t.in_subfield(acc, 1));
                image.insert(t.restrict(acc, 1).unwrap());
            }
            assert_eq!(image.len() as u64, p - 1, "norm not surjective p={p} l={l}");
        }
    }

    #[test]
    fn conway_entries_all_verify() {
        // registering every tabled degree with its divisors exercises the
        // norm-compatibility check on each table entry
        let _ = FieldTower::build(2, &[1, 2, 4, 8]).unwrap();
        let _ = FieldTower::build(2, &[1, 2, 3, 6]).unwrap();
        let _ = FieldTower::build(2, &[1, 5]).unwrap();
        let _ = FieldTower::build(2, &[1, 7]).unwrap();
        let _ = FieldTower::build(3, &[1, 2, 4]).unwrap();
        let _ = FieldTower::build(3, &[1, 3]).unwrap();
        let _ = FieldTower::build(5, &[1, 2]).unwrap();
        let _ = FieldTower::build(7, &[1, 2]).unwrap();
    }

    #[test]
    fn fallback_search_produces_compatible_modulus() {
        // degree 9 over GF(2) is outside the embedded table
        let t = FieldTower::build(2, &[1, 3, 9]).unwrap();
        for x in t.elements(3) {
            for y in t.elements(3) {
                let ex = t.embed(x, 9).unwrap();
                let ey = t.embed(y, 9).unwrap();
                assert_eq!(t.embed(t.mul(x, y), 9).unwrap(), t.mul(ex, ey));
                assert_eq!(t.embed(t.add(x, y), 9).unwrap(), t.add(ex, ey));
            }
        }
    }

    #[test]
    fn inverse_and_pow() {
        let t = FieldTower::build(3, &[1, 2]).unwrap();
        for x in t.elements(2).skip(1) {
            let inv = t.inv(x).unwrap();
            assert_eq!(t.mul(x, inv), t.one(2));
            assert_eq!(t.pow(x, -1).unwrap(), inv);
            assert_eq!(t.pow(x, 8).unwrap(), t.one(2));
        }
        assert_eq!(t.inv(t.zero(2)).unwrap_err(), Error::Singular);
    }
}
