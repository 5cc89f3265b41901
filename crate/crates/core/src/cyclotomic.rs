//! Exact arithmetic in cyclotomic fields.
//!
//! A [`CycNum`] is stored in the power basis of `Q(z_N)` modulo the cyclotomic
//! polynomial `Phi_N`, always with the smallest conductor `N` whose field
//! contains the value. Conductors are never `2 mod 4` (those fields coincide
//! with the one of half the conductor), so structural equality is value
//! equality.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::Ratio<i64>;

struct Field {
    degree: usize,
    /// Monic `Phi_N`, low degree first, `degree + 1` entries.
    poly: Vec<i64>,
}

/// Embedding of `Q(z_M)` into `Q(z_N)` together with a left inverse.
struct Embedding {
    lift: Vec<Vec<Rational>>,
    project: Vec<Vec<Rational>>,
}

#[derive(Default)]
struct Cache {
    fields: HashMap<u32, Rc<Field>>,
    embeddings: HashMap<(u32, u32), Rc<Embedding>>,
}

thread_local! {
    static CACHE: RefCell<Cache> = RefCell::new(Cache::default());
}

fn field(n: u32) -> Rc<Field> {
    if let Some(f) = CACHE.with(|c| c.borrow().fields.get(&n).cloned()) {
        return f;
    }
    let poly = cyclotomic_poly(n);
    let f = Rc::new(Field { degree: poly.len() - 1, poly });
    CACHE.with(|c| c.borrow_mut().fields.insert(n, f.clone()));
    f
}

fn cyclotomic_poly(n: u32) -> Vec<i64> {
    // x^n - 1 divided by Phi_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = div_exact(&num, &cyclotomic_poly(d));
        }
    }
    num
}

fn div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut q = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        q[i] = c;
        for (j, &b) in den.iter().enumerate() {
            rem[i + j] -= c * b;
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    q
}

fn reduce(n: u32, mut a: Vec<Rational>) -> Vec<Rational> {
    let f = field(n);
    let d = f.degree;
    if a.len() > d {
        for top in (d..a.len()).rev() {
            let c = a[top];
            if c.is_zero() {
                continue;
            }
            for (i, &p) in f.poly.iter().enumerate().take(d) {
                a[top - d + i] -= c * p;
            }
        }
        a.truncate(d);
    } else {
        a.resize(d, Rational::zero());
    }
    a
}

fn monomial(n: u32, k: u64) -> Vec<Rational> {
    let k = (k % n as u64) as usize;
    let mut v = vec![Rational::zero(); k + 1];
    v[k] = Rational::one();
    reduce(n, v)
}

fn embedding(m: u32, n: u32) -> Rc<Embedding> {
    if let Some(e) = CACHE.with(|c| c.borrow().embeddings.get(&(m, n)).cloned()) {
        return e;
    }
    let dm = field(m).degree;
    let dn = field(n).degree;
    let step = (n / m) as u64;
    let cols: Vec<Vec<Rational>> = (0..dm).map(|k| monomial(n, k as u64 * step)).collect();
    let lift: Vec<Vec<Rational>> = (0..dn).map(|r| (0..dm).map(|c| cols[c][r]).collect()).collect();
    let project = left_inverse(&lift, dm);
    let e = Rc::new(Embedding { lift, project });
    CACHE.with(|c| c.borrow_mut().embeddings.insert((m, n), e.clone()));
    e
}

/// Left inverse of a full column rank rational matrix.
fn left_inverse(a: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let rows = a.len();
    // Row reduce [A^T | I] style: choose independent rows of A greedily.
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: Vec<(usize, Vec<Rational>)> = Vec::new();
    for r in 0..rows {
        let mut v = a[r].clone();
        for (p, b) in &basis {
            let c = v[*p];
            if !c.is_zero() {
                for j in 0..cols {
                    v[j] -= c * b[j];
                }
            }
        }
        if let Some(p) = v.iter().position(|x| !x.is_zero()) {
            let inv = v[p].recip();
            for x in v.iter_mut() {
                *x *= inv;
            }
            basis.push((p, v));
            chosen.push(r);
            if chosen.len() == cols {
                break;
            }
        }
    }
    // Invert the square submatrix formed by the chosen rows.
    let mut m: Vec<Vec<Rational>> = chosen.iter().map(|&r| a[r].clone()).collect();
    let mut inv: Vec<Vec<Rational>> = (0..cols)
        .map(|i| (0..cols).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    for c in 0..cols {
        let p = (c..cols).find(|&r| !m[r][c].is_zero()).expect("independent rows");
        m.swap(c, p);
        inv.swap(c, p);
        let s = m[c][c].recip();
        for j in 0..cols {
            m[c][j] *= s;
            inv[c][j] *= s;
        }
        for r in 0..cols {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c];
                for j in 0..cols {
                    let (mc, ic) = (m[c][j], inv[c][j]);
                    m[r][j] -= f * mc;
                    inv[r][j] -= f * ic;
                }
            }
        }
    }
    // project = inv * selection
    let mut out = vec![vec![Rational::zero(); rows]; cols];
    for i in 0..cols {
        for (k, &r) in chosen.iter().enumerate() {
            out[i][r] = inv[i][k];
        }
    }
    out
}

fn primes_of(mut n: u32) -> Vec<u32> {
    let mut ps = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            ps.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        ps.push(n);
    }
    ps
}

fn canonical_conductor(n: u32) -> u32 {
    if n % 4 == 2 {
        n / 2
    } else {
        n
    }
}

fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

/// An element of a cyclotomic field in canonical (minimal conductor) form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycNum {
    conductor: u32,
    coeffs: Vec<Rational>,
}

impl CycNum {
    pub fn zero() -> Self {
        CycNum { conductor: 1, coeffs: vec![Rational::zero()] }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        CycNum { conductor: 1, coeffs: vec![r] }
    }

    pub fn from_int(k: i64) -> Self {
        Self::from_rational(Rational::from_integer(k))
    }

    /// `z_n^k` with `z_n = exp(2 pi i / n)`.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        assert!(n > 0, "root of unity of order 0");
        let k = k.rem_euclid(n as i64) as u32;
        let g = k.gcd(&n).max(1);
        let (n, k) = if k == 0 { (1, 0) } else { (n / g, k / g) };
        if n == 1 {
            return Self::one();
        }
        if n == 2 {
            return Self::from_int(-1);
        }
        if n % 4 == 2 {
            // z_n = -z_{n/2}^{(n/2+1)/2}
            let h = n / 2;
            let base = -Self::from_parts(h, monomial(h, h.div_ceil(2) as u64));
            return base.pow(k as u64);
        }
        Self::from_parts(n, monomial(n, k as u64))
    }

    /// Builds a value from power-basis coefficients in `Q(z_n)` and normalizes it.
    pub fn from_coeffs(n: u32, coeffs: Vec<Rational>) -> Self {
        assert!(n > 0);
        if n % 4 == 2 {
            let z = Self::root_of_unity(n, 1);
            let mut acc = Self::zero();
            let mut p = Self::one();
            for c in coeffs {
                acc = &acc + &p.scale(c);
                p = &p * &z;
            }
            return acc;
        }
        Self::from_parts(n, reduce(n, coeffs))
    }

    fn from_parts(n: u32, coeffs: Vec<Rational>) -> Self {
        let mut v = CycNum { conductor: n, coeffs };
        v.normalize();
        v
    }

    fn normalize(&mut self) {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            if self.conductor != 1 {
                self.coeffs.truncate(1);
                self.conductor = 1;
            }
            return;
        }
        'outer: loop {
            let n = self.conductor;
            for p in primes_of(n) {
                let m = canonical_conductor(n / p);
                if m == n {
                    continue;
                }
                let e = embedding(m, n);
                let w: Vec<Rational> = e
                    .project
                    .iter()
                    .map(|row| dot(row, &self.coeffs))
                    .collect();
                let back = e.lift.iter().map(|row| dot(row, &w));
                if back.zip(self.coeffs.iter()).all(|(a, b)| a == *b) {
                    self.conductor = m;
                    self.coeffs = w;
                    continue 'outer;
                }
            }
            break;
        }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.conductor == 1 && self.coeffs[0].is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.conductor == 1 && self.coeffs[0].is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.conductor == 1
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.coeffs[0])
    }

    fn lifted(&self, n: u32) -> Vec<Rational> {
        if self.conductor == n {
            return self.coeffs.clone();
        }
        let e = embedding(self.conductor, n);
        e.lift.iter().map(|row| dot(row, &self.coeffs)).collect()
    }

    fn combine(&self, other: &Self, f: impl Fn(Rational, Rational) -> Rational) -> Self {
        if self.conductor == 1 && other.conductor == 1 {
            return Self::from_rational(f(self.coeffs[0], other.coeffs[0]));
        }
        let n = lcm(self.conductor, other.conductor);
        let a = self.lifted(n);
        let b = other.lifted(n);
        Self::from_parts(n, a.into_iter().zip(b).map(|(x, y)| f(x, y)).collect())
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.conductor == 1 {
            return other.scale(self.coeffs[0]);
        }
        if other.conductor == 1 {
            return self.scale(other.coeffs[0]);
        }
        let n = lcm(self.conductor, other.conductor);
        let a = self.lifted(n);
        let b = other.lifted(n);
        let mut prod = vec![Rational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        Self::from_parts(n, reduce(n, prod))
    }

    pub fn scale(&self, r: Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        CycNum { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    /// Image under the Galois automorphism `z -> z^j`, `gcd(j, N) = 1`.
    pub fn galois(&self, j: i64) -> Self {
        let n = self.conductor;
        if n == 1 {
            return self.clone();
        }
        let j = j.rem_euclid(n as i64) as u64;
        assert_eq!(j.gcd(&(n as u64)), 1, "galois exponent must be a unit");
        let mut acc = vec![Rational::zero(); n as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc[((k as u64 * j) % n as u64) as usize] += c;
            }
        }
        Self::from_parts(n, reduce(n, acc))
    }

    /// Complex conjugation `z -> z^{-1}`.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.conductor == 1 {
            return Ok(Self::from_rational(self.coeffs[0].recip()));
        }
        let n = self.conductor;
        let f = field(n);
        let modulus: Vec<Rational> = f.poly.iter().map(|&c| Rational::from_integer(c)).collect();
        let s = poly_inverse_mod(&self.coeffs, &modulus);
        Ok(Self::from_parts(n, reduce(n, s)))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul_ref(&other.inv()?))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            base = base.mul_ref(&base);
            e >>= 1;
        }
        acc
    }

    pub fn powi(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    /// If the value is a root of unity returns `(n, k)` with `self = z_n^k`,
    /// `n` the exact order and `0 <= k < n` coprime to `n`.
    pub fn as_root_of_unity(&self) -> Option<(u32, u32)> {
        if self.is_zero() {
            return None;
        }
        let n = self.conductor;
        let bound = if n.is_multiple_of(2) { n } else { 2 * n };
        let mut order = None;
        for d in 1..=bound {
            if bound % d == 0 && self.pow(d as u64).is_one() {
                order = Some(d);
                break;
            }
        }
        let d = order?;
        (0..d)
            .filter(|k| k.gcd(&d) == 1 || d == 1)
            .find(|&k| Self::root_of_unity(d, k as i64) == *self)
            .map(|k| (d, k))
    }

    /// Square root of a root of unity, `z_n^k -> z_{2n}^k`.
    pub fn sqrt_root_of_unity(&self) -> Result<Self> {
        match self.as_root_of_unity() {
            Some((n, k)) => Ok(Self::root_of_unity(2 * n, k as i64)),
            None => Err(Error::SqrtNotRootOfUnity),
        }
    }

    /// Approximate complex value, for display only.
    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.conductor as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            let x = *c.numer() as f64 / *c.denom() as f64;
            let a = 2.0 * std::f64::consts::PI * k as f64 / n;
            re += x * a.cos();
            im += x * a.sin();
        }
        (re, im)
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut s = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += x * y;
        }
    }
    s
}

fn trim(p: &mut Vec<Rational>) {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    let db = b.len() - 1;
    let lead = b[db];
    if r.len() < b.len() {
        return (vec![Rational::zero()], r);
    }
    let mut q = vec![Rational::zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db] / lead;
        q[i] = c;
        if !c.is_zero() {
            for j in 0..=db {
                r[i + j] -= c * b[j];
            }
        }
    }
    r.truncate(db.max(1));
    trim(&mut r);
    (q, r)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out: Vec<Rational> = (0..n)
        .map(|i| a.get(i).copied().unwrap_or_default() - b.get(i).copied().unwrap_or_default())
        .collect();
    trim(&mut out);
    out
}

/// `s` with `a * s = 1 mod m`, assuming `gcd(a, m) = 1`.
fn poly_inverse_mod(a: &[Rational], m: &[Rational]) -> Vec<Rational> {
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    trim(&mut r1);
    let (mut s0, mut s1) = (vec![Rational::zero()], vec![Rational::one()]);
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_divmod(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    // r0 is a nonzero constant
    let c = r0[0].recip();
    s0.iter().map(|x| x * c).collect()
}

impl Default for CycNum {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for CycNum {
    fn from(k: i64) -> Self {
        Self::from_int(k)
    }
}

impl From<Rational> for CycNum {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl std::ops::$tr<&CycNum> for &CycNum {
            type Output = CycNum;
            fn $m(self, rhs: &CycNum) -> CycNum {
                $body(self, rhs)
            }
        }
        impl std::ops::$tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: CycNum) -> CycNum {
                $body(&self, &rhs)
            }
        }
        impl std::ops::$tr<&CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: &CycNum) -> CycNum {
                $body(&self, rhs)
            }
        }
    };
}

binop!(Add, add, |a: &CycNum, b: &CycNum| {
    if a.is_zero() {
        b.clone()
    } else if b.is_zero() {
        a.clone()
    } else {
        a.combine(b, |x, y| x + y)
    }
});
binop!(Sub, sub, |a: &CycNum, b: &CycNum| {
    if b.is_zero() {
        a.clone()
    } else {
        a.combine(b, |x, y| x - y)
    }
});
binop!(Mul, mul, |a: &CycNum, b: &CycNum| a.mul_ref(b));

impl std::ops::Neg for CycNum {
    type Output = CycNum;
    fn neg(mut self) -> CycNum {
        for c in self.coeffs.iter_mut() {
            *c = -*c;
        }
        self
    }
}

impl std::ops::Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -self.clone()
    }
}

impl std::ops::AddAssign<&CycNum> for CycNum {
    fn add_assign(&mut self, rhs: &CycNum) {
        *self = &*self + rhs;
    }
}

impl std::ops::SubAssign<&CycNum> for CycNum {
    fn sub_assign(&mut self, rhs: &CycNum) {
        *self = &*self - rhs;
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k == 0 {
                terms.push(c.to_string());
            } else {
                terms.push(format!("{}*z({})^{}", c, self.conductor, k));
            }
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for CycNum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("cyclotomic literal `{s}`"));
        let mut acc = CycNum::zero();
        for term in s.split(" + ") {
            let term = term.trim();
            if term.is_empty() {
                return Err(bad());
            }
            let v = match term.split_once('*') {
                None => CycNum::from_rational(parse_rational(term).ok_or_else(bad)?),
                Some((c, z)) => {
                    let c = parse_rational(c).ok_or_else(bad)?;
                    let rest = z.strip_prefix("z(").ok_or_else(bad)?;
                    let (n, e) = rest.split_once(")^").ok_or_else(bad)?;
                    let n: u32 = n.parse().map_err(|_| bad())?;
                    let e: i64 = e.parse().map_err(|_| bad())?;
                    if n == 0 {
                        return Err(bad());
                    }
                    CycNum::root_of_unity(n, e).scale(c)
                }
            };
            acc = acc + v;
        }
        Ok(acc)
    }
}

fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse::<i64>().ok().map(Rational::from_integer),
        Some((a, b)) => {
            let a: i64 = a.parse().ok()?;
            let b: i64 = b.parse().ok()?;
            (b != 0).then(|| Rational::new(a, b))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, k: i64) -> CycNum {
        CycNum::root_of_unity(n, k)
    }

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_poly(15).len() - 1, 8);
    }

    #[test]
    fn basic_identities() {
        let i = z(4, 1);
        assert_eq!((CycNum::one() + &i) * (CycNum::one() - &i), CycNum::from_int(2));
        assert_eq!(z(8, 1).inv().unwrap(), z(8, 7));
        assert_eq!(z(5, 3).conj(), z(5, 2));
        assert_eq!(z(3, 1) + z(3, 2), CycNum::from_int(-1));
        assert_eq!(CycNum::from_int(-1).sqrt_root_of_unity().unwrap(), i);
        assert_eq!(CycNum::one().sqrt_root_of_unity().unwrap(), CycNum::one());
    }

    #[test]
    fn minimal_conductor() {
        assert_eq!(z(8, 2), z(4, 1));
        assert_eq!(z(8, 2).conductor(), 4);
        assert_eq!(z(6, 1).conductor(), 3);
        assert_eq!(z(6, 1), -z(3, 2));
        // sqrt(2) = z8 + z8^7 lives in Q(z8)
        let s = z(8, 1) + z(8, 7);
        assert_eq!(s.conductor(), 8);
        assert_eq!(&s * &s, CycNum::from_int(2));
        // z12 * z12^{-1} style cancellation
        let w = z(12, 1) * z(12, 3);
        assert_eq!(w, z(3, 1));
        assert_eq!(z(12, 4) * z(4, 1), z(12, 7));
    }

    #[test]
    fn errors() {
        assert!(matches!(CycNum::zero().inv(), Err(Error::DivisionByZero)));
        assert!(matches!(CycNum::from_int(2).sqrt_root_of_unity(), Err(Error::SqrtNotRootOfUnity)));
    }

    #[test]
    fn text_round_trip() {
        for v in [z(8, 3), CycNum::from_int(-7), z(12, 5) + z(3, 1).scale(Rational::new(1, 2)), CycNum::zero()] {
            let s = v.to_string();
            assert_eq!(s.parse::<CycNum>().unwrap(), v, "{s}");
        }
        assert!("1 + x".parse::<CycNum>().is_err());
    }

    #[test]
    fn root_of_unity_detection() {
        assert_eq!(z(12, 5).as_root_of_unity(), Some((12, 5)));
        assert_eq!(z(6, 1).as_root_of_unity(), Some((6, 1)));
        assert_eq!(CycNum::from_int(-1).as_root_of_unity(), Some((2, 1)));
        assert_eq!(z(3, 1).sqrt_root_of_unity().unwrap(), z(6, 1));
        assert_eq!((z(8, 1) + z(8, 7)).as_root_of_unity(), None);
    }
}
