//! Exact elements of cyclotomic fields Q(zeta_N) with rational coefficients,
//! stored in the power basis 1, zeta, ..., zeta^(phi(N)-1) reduced modulo the
//! N-th cyclotomic polynomial.
//!
//! Values produced by different tori carry different conductors; comparisons
//! and mixed arithmetic lift both operands to the lcm of their conductors.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn euler_phi(n: u64) -> u64 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = Vec::new();
    for d in 1..=n {
        if n.is_multiple_of(d) {
            ds.push(d);
        }
    }
    ds
}

pub fn lcm(a: u64, b: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Exact quotient of integer polynomials (numerator divisible by divisor).
fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem: Vec<i64> = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd];
    let mut quot = vec![0i64; rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        let c = rem[i];
        if c == 0 {
            continue;
        }
        debug_assert_eq!(c % lead, 0);
        let q = c / lead;
        quot[i - dd] = q;
        for j in 0..=dd {
            rem[i - dd + j] -= q * den[j];
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

/// Coefficients of the N-th cyclotomic polynomial, ascending, cached.
pub fn cyclotomic_poly(n: u64) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<BTreeMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&n) {
        return hit.clone();
    }
    let result: Arc<Vec<i64>> = if n == 1 {
        Arc::new(vec![-1, 1])
    } else {
        // x^n - 1 divided by the product of Phi_d over proper divisors d
        let mut num = vec![0i64; n as usize + 1];
        num[0] = -1;
        num[n as usize] = 1;
        let mut quotient = num;
        for d in divisors(n) {
            if d == n {
                continue;
            }
            let phi_d = cyclotomic_poly(d);
            quotient = poly_div_exact(&quotient, &phi_d);
        }
        Arc::new(quotient)
    };
    cache
        .lock()
        .unwrap()
        .entry(n)
        .or_insert_with(|| result.clone());
    result
}

/// An exact element of Q(zeta_N).
#[derive(Debug, Clone)]
pub struct CycloNumber {
    conductor: u64,
    coeffs: Vec<BigRational>,
}

fn reduce_mod_phi(n: u64, mut poly: Vec<BigRational>) -> Vec<BigRational> {
    let phi = cyclotomic_poly(n);
    let deg = phi.len() - 1;
    if poly.len() < deg {
        poly.resize(deg, BigRational::zero());
        return poly;
    }
    for i in (deg..poly.len()).rev() {
        if poly[i].is_zero() {
            continue;
        }
        let c = poly[i].clone();
        poly[i] = BigRational::zero();
        for j in 0..deg {
            let t = &c * BigRational::from(BigInt::from(phi[j]));
            poly[i - deg + j] -= t;
        }
    }
    poly.truncate(deg);
    poly.resize(deg, BigRational::zero());
    poly
}

impl CycloNumber {
    pub fn zero(conductor: u64) -> Self {
        let deg = euler_phi(conductor) as usize;
        CycloNumber {
            conductor,
            coeffs: vec![BigRational::zero(); deg],
        }
    }

    pub fn one(conductor: u64) -> Self {
        let mut z = Self::zero(conductor);
        z.coeffs[0] = BigRational::one();
        z
    }

    pub fn from_integer(v: i64) -> Self {
        let mut z = Self::zero(1);
        z.coeffs[0] = BigRational::from(BigInt::from(v));
        z
    }

    /// zeta_N^k in reduced form.
    pub fn root_of_unity(conductor: u64, k: u64) -> Self {
        let mut counts = vec![0i128; conductor as usize];
        counts[(k % conductor) as usize] = 1;
        Self::from_counts(conductor, &counts)
    }

    /// sum over k of counts[k] * zeta_N^k, reduced.
    pub fn from_counts(conductor: u64, counts: &[i128]) -> Self {
        assert_eq!(counts.len() as u64, conductor);
        let poly: Vec<BigRational> = counts
            .iter()
            .map(|&c| BigRational::from(BigInt::from(c)))
            .collect();
        CycloNumber {
            conductor,
            coeffs: reduce_mod_phi(conductor, poly),
        }
    }

    pub fn from_rational_poly(conductor: u64, poly: Vec<BigRational>) -> Self {
        CycloNumber {
            conductor,
            coeffs: reduce_mod_phi(conductor, poly),
        }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Re-express in Q(zeta_M) for a multiple M of the conductor.
    pub fn lift(&self, m: u64) -> Self {
        assert_eq!(m % self.conductor, 0, "lift target must be a multiple");
        if m == self.conductor {
            return self.clone();
        }
        let step = (m / self.conductor) as usize;
        let mut poly = vec![BigRational::zero(); m as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        CycloNumber {
            conductor: m,
            coeffs: reduce_mod_phi(m, poly),
        }
    }

    fn binop(&self, other: &Self, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> Self {
        let m = lcm(self.conductor, other.conductor);
        let a = self.lift(m);
        let b = other.lift(m);
        let coeffs = a
            .coeffs
            .iter()
            .zip(b.coeffs.iter())
            .map(|(x, y)| f(x, y))
            .collect();
        CycloNumber { conductor: m, coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.binop(other, |x, y| x + y)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.binop(other, |x, y| x - y)
    }

    pub fn neg(&self) -> Self {
        CycloNumber {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let m = lcm(self.conductor, other.conductor);
        let a = self.lift(m);
        let b = other.lift(m);
        let mut prod = vec![BigRational::zero(); a.coeffs.len() + b.coeffs.len()];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let t = x * y;
                prod[i + j] += t;
            }
        }
        CycloNumber {
            conductor: m,
            coeffs: reduce_mod_phi(m, prod),
        }
    }

    /// Complex conjugation (zeta -> zeta^(-1)).
    pub fn conj(&self) -> Self {
        let n = self.conductor;
        let mut poly = vec![BigRational::zero(); n as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = ((n - i as u64 % n) % n) as usize;
            poly[e] += c;
        }
        CycloNumber {
            conductor: n,
            coeffs: reduce_mod_phi(n, poly),
        }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        CycloNumber {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Exact division by a positive integer.
    pub fn div_exact(&self, d: u64) -> Self {
        let r = BigRational::new(BigInt::one(), BigInt::from(d));
        self.scale(&r)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// True when every power-basis coefficient is an integer, i.e. the value
    /// lies in Z[zeta_N].
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.denom().is_one())
    }

    /// Rational value when the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn eq_lifted(&self, other: &Self) -> bool {
        let m = lcm(self.conductor, other.conductor);
        self.lift(m).coeffs == other.lift(m).coeffs
    }
}

impl PartialEq for CycloNumber {
    fn eq(&self, other: &Self) -> bool {
        self.eq_lifted(other)
    }
}

impl Eq for CycloNumber {}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            if i == 0 {
                write!(f, "{}", mag)?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", mag)?;
                }
                if i == 1 {
                    write!(f, "z{}", self.conductor)?;
                } else {
                    write!(f, "z{}^{}", self.conductor, i)?;
                }
            }
        }
        Ok(())
    }
}

/// Try to express the value with integer coefficient pairs for reports.
pub fn coeff_pairs(x: &CycloNumber) -> Vec<(i64, i64)> {
    x.coeffs()
        .iter()
        .map(|c| {
            (
                c.numer().to_i64().expect("report coefficient overflow"),
                c.denom().to_i64().expect("report coefficient overflow"),
            )
        })
        .collect()
}
