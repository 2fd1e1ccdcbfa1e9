//! Exact arithmetic in the cyclotomic field `Q(zeta_N)`.
//!
//! Elements are stored as coefficient vectors of length `phi(N)` in the power
//! basis `1, z, ..., z^(phi-1)` reduced modulo the cyclotomic polynomial, so
//! equality of values is equality of vectors.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::field::{fmt_rational, is_negative, parse_rational, CyclotomicField, Field};
use crate::Error;

const TABLE_SLOTS: usize = 257;

struct Table {
    phi: usize,
    /// `red[k]` holds `z^(phi + k)` reduced, for `k < phi - 1`.
    red: Vec<Vec<BigRational>>,
    /// `pow[k]` holds `z^k` reduced, for `k < N`.
    pow: Vec<Vec<BigRational>>,
    /// Cyclotomic polynomial, low degree first, monic.
    poly: Vec<BigRational>,
}

static TABLES: [OnceLock<Table>; TABLE_SLOTS] = [const { OnceLock::new() }; TABLE_SLOTS];

/// Integer coefficients of the `n`-th cyclotomic polynomial, low degree first.
pub fn cyclotomic_polynomial(n: usize) -> Vec<BigInt> {
    assert!(n >= 1, "conductor must be positive");
    // x^n - 1 divided by every Phi_d with d | n, d < n
    let mut p = vec![BigInt::zero(); n + 1];
    p[0] = BigInt::from(-1);
    p[n] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            p = poly_div_exact(&p, &cyclotomic_polynomial(d));
        }
    }
    p
}

fn poly_div_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    // b is monic
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let da = a.len() - 1;
    let mut q = vec![BigInt::zero(); da - db + 1];
    for i in (0..=da - db).rev() {
        let c = r[i + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    debug_assert!(r.iter().all(|c| c.is_zero()));
    q
}

pub fn euler_phi(n: usize) -> usize {
    (1..=n).filter(|k| k.gcd(&n) == 1).count()
}

fn build_table(n: usize) -> Table {
    let poly: Vec<BigRational> = cyclotomic_polynomial(n)
        .into_iter()
        .map(BigRational::from_integer)
        .collect();
    let phi = poly.len() - 1;
    // z^phi = -sum_{i<phi} poly[i] z^i
    let mut cur: Vec<BigRational> = vec![BigRational::zero(); phi];
    let mut pow = Vec::with_capacity(n.max(2 * phi));
    if phi > 0 {
        cur[0] = BigRational::one();
    }
    let steps = n.max(2 * phi);
    for _ in 0..steps {
        pow.push(cur.clone());
        // multiply by z
        let top = cur[phi - 1].clone();
        let mut next = vec![BigRational::zero(); phi];
        for i in (1..phi).rev() {
            next[i] = cur[i - 1].clone();
        }
        if !top.is_zero() {
            for i in 0..phi {
                next[i] -= &top * &poly[i];
            }
        }
        cur = next;
    }
    let red = (0..phi.saturating_sub(1)).map(|k| pow[phi + k].clone()).collect();
    pow.truncate(n);
    Table { phi, red, pow, poly }
}

fn table(n: usize) -> &'static Table {
    assert!(n >= 1 && n < TABLE_SLOTS, "unsupported conductor {n}");
    TABLES[n].get_or_init(|| build_table(n))
}

/// Element of `Q(zeta_N)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclo<const N: usize> {
    c: Vec<BigRational>,
}

impl<const N: usize> Cyclo<N> {
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let t = table(N);
        if coeffs.len() == t.phi {
            return Cyclo { c: coeffs };
        }
        let mut c = vec![BigRational::zero(); t.phi];
        for (k, a) in coeffs.into_iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if k < t.phi {
                c[k] += &a;
            } else {
                let z = &t.pow[k % N];
                for i in 0..t.phi {
                    if !z[i].is_zero() {
                        c[i] += &(&a * &z[i]);
                    }
                }
            }
        }
        Cyclo { c }
    }

    pub fn rational(q: BigRational) -> Self {
        let t = table(N);
        let mut c = vec![BigRational::zero(); t.phi];
        c[0] = q;
        Cyclo { c }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.c[1..].iter().all(|x| x.is_zero()) {
            Some(&self.c[0])
        } else {
            None
        }
    }

    fn scale(&self, q: &BigRational) -> Self {
        Cyclo { c: self.c.iter().map(|x| x * q).collect() }
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if let Some(q) = other.as_rational() {
            return self.scale(q);
        }
        if let Some(q) = self.as_rational() {
            return other.scale(q);
        }
        let t = table(N);
        let phi = t.phi;
        let mut prod = vec![BigRational::zero(); 2 * phi - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += &(a * b);
                }
            }
        }
        let mut out: Vec<BigRational> = prod[..phi].to_vec();
        for k in 0..phi - 1 {
            let a = &prod[phi + k];
            if a.is_zero() {
                continue;
            }
            for (i, r) in t.red[k].iter().enumerate() {
                if !r.is_zero() {
                    out[i] += &(a * r);
                }
            }
        }
        Cyclo { c: out }
    }

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(q) = self.as_rational() {
            return Some(Self::rational(q.recip()));
        }
        let t = table(N);
        // extended Euclid in Q[x] against the cyclotomic polynomial
        let mut r0 = t.poly.clone();
        let mut r1 = trim(self.c.clone());
        let mut s0: Vec<BigRational> = vec![];
        let mut s1: Vec<BigRational> = vec![BigRational::one()];
        while !r1.is_empty() {
            let (q, r) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant
        debug_assert_eq!(r0.len(), 1);
        let c = r0[0].recip();
        let s: Vec<BigRational> = s0.into_iter().map(|x| x * &c).collect();
        Some(Self::from_coeffs(s))
    }
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = b[db].recip();
    if a.len() < b.len() {
        return (vec![], trim(r));
    }
    let mut q = vec![BigRational::zero(); a.len() - db];
    for i in (0..q.len()).rev() {
        let c = &r[i + db] * &lead;
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[i + j] -= &(&c * bj);
        }
        q[i] = c;
    }
    r.truncate(db);
    (trim(q), trim(r))
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut p = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            p[i + j] += &(x * y);
        }
    }
    trim(p)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut p = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        p[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        p[i] -= y;
    }
    trim(p)
}

impl<const N: usize> Zero for Cyclo<N> {
    fn zero() -> Self {
        Cyclo { c: vec![BigRational::zero(); table(N).phi] }
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }
}

impl<const N: usize> One for Cyclo<N> {
    fn one() -> Self {
        Self::rational(BigRational::one())
    }
}

impl<const N: usize> Add for Cyclo<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += &rhs;
        self
    }
}

impl<const N: usize> Sub for Cyclo<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self -= &rhs;
        self
    }
}

impl<const N: usize> Mul for Cyclo<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_impl(&rhs)
    }
}

impl<'a, const N: usize> Mul<&'a Cyclo<N>> for &'a Cyclo<N> {
    type Output = Cyclo<N>;
    fn mul(self, rhs: &'a Cyclo<N>) -> Cyclo<N> {
        self.mul_impl(rhs)
    }
}

impl<const N: usize> Neg for Cyclo<N> {
    type Output = Self;
    fn neg(self) -> Self {
        Cyclo { c: self.c.into_iter().map(|x| -x).collect() }
    }
}

impl<'a, const N: usize> AddAssign<&'a Cyclo<N>> for Cyclo<N> {
    fn add_assign(&mut self, rhs: &'a Cyclo<N>) {
        for (a, b) in self.c.iter_mut().zip(&rhs.c) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }
}

impl<'a, const N: usize> SubAssign<&'a Cyclo<N>> for Cyclo<N> {
    fn sub_assign(&mut self, rhs: &'a Cyclo<N>) {
        for (a, b) in self.c.iter_mut().zip(&rhs.c) {
            if !b.is_zero() {
                *a -= b;
            }
        }
    }
}

impl<'a, const N: usize> MulAssign<&'a Cyclo<N>> for Cyclo<N> {
    fn mul_assign(&mut self, rhs: &'a Cyclo<N>) {
        *self = self.mul_impl(rhs);
    }
}

impl<const N: usize> Field for Cyclo<N> {
    fn inv(&self) -> Option<Self> {
        self.inverse()
    }

    fn from_int(n: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }

    fn from_rational(q: &BigRational) -> Self {
        Self::rational(q.clone())
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self.mul_impl(other)
    }
}

impl<const N: usize> CyclotomicField for Cyclo<N> {
    fn conductor() -> usize {
        N
    }

    fn zeta_pow(k: i64) -> Self {
        let t = table(N);
        let k = k.rem_euclid(N as i64) as usize;
        Cyclo { c: t.pow[k].clone() }
    }

    fn degree() -> usize {
        table(N).phi
    }

    fn coordinates(&self) -> Vec<BigRational> {
        self.c.clone()
    }
}

impl<const N: usize> fmt::Display for Cyclo<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let neg = is_negative(a);
            let abs = if neg { -a.clone() } else { a.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let mono = match k {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{k}"),
            };
            if k == 0 {
                write!(f, "{}", fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{mono}", fmt_rational(&abs))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<const N: usize> fmt::Debug for Cyclo<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<const N: usize> FromStr for Cyclo<N> {
    type Err = Error;

    /// Parses sums of terms `c`, `c*z^k`, `z^k`, `c*z` with rational `c`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("cannot parse cyclotomic scalar `{s}`"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        let chars: Vec<char> = compact.chars().collect();
        let mut pieces: Vec<String> = Vec::new();
        let mut cur = String::new();
        for (i, &ch) in chars.iter().enumerate() {
            let split = (ch == '+' || ch == '-')
                && i > 0
                && !matches!(chars[i - 1], '^' | '*' | '/' | '+' | '-');
            if split {
                pieces.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        pieces.push(cur);
        let mut terms: Vec<(bool, String)> = Vec::new();
        for p in pieces {
            let body = p.trim_start_matches(['+', '-']);
            let neg = p[..p.len() - body.len()].matches('-').count() % 2 == 1;
            if body.is_empty() {
                return Err(bad());
            }
            terms.push((neg, body.to_string()));
        }
        let mut acc = Self::zero();
        for (neg, t) in terms {
            let (coef, exp) = if let Some(pos) = t.find('z') {
                let (c, rest) = t.split_at(pos);
                let c = c.strip_suffix('*').unwrap_or(c);
                let coef = if c.is_empty() { BigRational::one() } else { parse_rational(c).ok_or_else(bad)? };
                let rest = &rest[1..];
                let exp: i64 = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^').ok_or_else(bad)?.parse().map_err(|_| bad())?
                };
                (coef, exp)
            } else {
                (parse_rational(&t).ok_or_else(bad)?, 0)
            };
            let coef = if neg { -coef } else { coef };
            acc += &Self::zeta_pow(exp).scale(&coef);
        }
        Ok(acc)
    }
}

/// Gaussian binomial coefficient `[n choose k]_q`, computed by the
/// division-free recursion `[n,k] = [n-1,k-1] + q^k [n-1,k]`.
pub fn q_binomial<F: Field>(n: usize, k: usize, q: &F) -> F {
    if k > n {
        return F::zero();
    }
    let mut row = vec![F::one()];
    for m in 1..=n {
        let mut next = vec![F::zero(); m + 1];
        next[0] = F::one();
        next[m] = F::one();
        for i in 1..m {
            let mut v = q.pow(i as u64).mul_ref(&row[i]);
            v += &row[i - 1];
            next[i] = v;
        }
        row = next;
    }
    row[k].clone()
}

/// Whether `q` is a primitive `n`-th root of unity.
pub fn is_primitive_root<F: Field>(q: &F, n: usize) -> bool {
    if n == 0 || !q.pow(n as u64).is_one() {
        return false;
    }
    (1..n).all(|k| !(n % k == 0 && q.pow(k as u64).is_one()))
}

#[cfg(test)]
mod tests {
    use num_traits::{One, Zero};
    use super::*;

    type Q3 = Cyclo<3>;
    type Q4 = Cyclo<4>;
    type Q12 = Cyclo<12>;

    #[test]
    fn cube_roots() {
        let z = Q3::zeta_pow(1);
        let z2 = Q3::zeta_pow(2);
        assert_eq!(z.clone() + z2.clone(), Q3::from_int(-1));
        let a = Q3::one() + z.clone();
        let b = Q3::one() + z2.clone();
        assert_eq!(a.clone() * b, Q3::one());
        assert_eq!(a.inv().unwrap(), -z.clone());
        assert_eq!(z2, Q3::from_int(-1) - z);
        assert!(q_binomial(3, 1, &Q3::zeta_pow(1)).is_zero());
    }

    #[test]
    fn fourth_roots() {
        let i = Q4::zeta_pow(1);
        assert_eq!(i.clone() * i, Q4::from_int(-1));
        assert_eq!(Q4::zeta_pow(-1), -Q4::zeta_pow(1));
    }

    #[test]
    fn polynomials() {
        let p12: Vec<i64> = cyclotomic_polynomial(12).iter().map(|c| c.try_into().unwrap()).collect();
        assert_eq!(p12, vec![1, 0, -1, 0, 1]);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(Q12::degree(), 4);
    }

    #[test]
    fn render_and_parse() {
        let x: Q4 = "1/2 - 3*z".parse().unwrap();
        assert_eq!(x.to_string(), "1/2 - 3*z");
        let y: Q3 = "z^2".parse().unwrap();
        assert_eq!(y.to_string(), "-1 - z");
        let w: Q3 = "-z + 2".parse().unwrap();
        assert_eq!(w.to_string(), "2 - z");
        assert_eq!(Q3::zero().to_string(), "0");
        assert!("1 +".parse::<Q3>().is_err());
        assert!("z^x".parse::<Q3>().is_err());
    }

    #[test]
    fn q_binomial_vanishing() {
        for n in 2..=8usize {
            let w = Cyclo::<8>::zeta_pow((8 / n.min(8)) as i64);
            if n == 8 || n == 4 || n == 2 {
                for k in 1..n {
                    assert!(q_binomial(n, k, &w).is_zero(), "n={n} k={k}");
                }
            }
        }
        assert_eq!(q_binomial(4, 2, &Q3::from_int(1)), Q3::from_int(6));
    }

    #[test]
    fn primitive_roots() {
        assert!(is_primitive_root(&Q12::zeta_pow(5), 12));
        assert!(!is_primitive_root(&Q12::zeta_pow(2), 12));
        assert!(is_primitive_root(&Q12::zeta_pow(4), 3));
    }

    #[test]
    fn basic_values() {
        for k in [0i64, 3, -3, 6] {
            assert_eq!(Q3::zeta_pow(k), Q3::one());
        }
        assert_eq!(Q4::zeta_pow(4), Q4::one());
        assert_eq!(Q4::zeta_pow(1).inv().unwrap(), Q4::zeta_pow(3));
        assert_eq!(Q3::one().inv().unwrap(), Q3::one());
        assert!(Q3::zero().inv().is_none());
        let w = Q4::zeta_pow(1);
        assert_eq!(q_binomial(2, 1, &w), Q4::one() + w.clone());
        for n in 0..6 {
            assert_eq!(q_binomial(n, 0, &w), Q4::one());
            assert_eq!(q_binomial(n, n, &w), Q4::one());
        }
        assert!(q_binomial(2, 3, &w).is_zero());
    }
}
