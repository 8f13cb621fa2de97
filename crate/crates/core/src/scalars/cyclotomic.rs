use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num::integer::Integer;
use num::{BigInt, BigRational, One, Signed, Zero};

/// Element of the cyclotomic field Q(zeta_N), stored in the power basis
/// 1, zeta_N, ..., zeta_N^(phi(N)-1) and always reduced to the smallest
/// order containing it.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cyclotomic {
    order: u32,
    coeffs: Vec<BigRational>,
}

pub fn euler_phi(n: u32) -> usize {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as usize
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n % d == 0).collect()
}

fn cyclo_cache() -> &'static Mutex<HashMap<u32, Vec<BigInt>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<BigInt>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients (low degree first) of the n-th cyclotomic polynomial.
pub fn cyclotomic_poly(n: u32) -> Vec<BigInt> {
    if let Some(p) = cyclo_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by every Phi_d with d | n, d < n
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let den = cyclotomic_poly(d);
        num = poly_div_exact(&num, &den);
    }
    cyclo_cache().lock().unwrap().insert(n, num.clone());
    num
}

fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qlen = rem.len() - dd;
    let mut q = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        q[i] = c.clone();
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    q
}

/// Reduce a polynomial in zeta_n (arbitrary length) modulo Phi_n.
fn reduce_mod(n: u32, mut v: Vec<BigRational>) -> Vec<BigRational> {
    let phi = cyclotomic_poly(n);
    let deg = phi.len() - 1;
    // x^n = 1 first, keeps the vector short
    if v.len() > n as usize {
        let mut w = vec![BigRational::zero(); n as usize];
        for (i, c) in v.into_iter().enumerate() {
            w[i % n as usize] += c;
        }
        v = w;
    }
    for i in (deg..v.len()).rev() {
        let c = std::mem::replace(&mut v[i], BigRational::zero());
        if c.is_zero() {
            continue;
        }
        for (j, pj) in phi.iter().enumerate().take(deg) {
            v[i - deg + j] -= &c * BigRational::from_integer(pj.clone());
        }
    }
    v.truncate(deg);
    v.resize(deg, BigRational::zero());
    v
}

type Matrix = Vec<Vec<BigRational>>;

fn embed_cache() -> &'static Mutex<HashMap<(u32, u32), Matrix>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Matrix>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Columns: images of zeta_m^k (k < phi(m)) in the power basis of order n.
fn embedding(m: u32, n: u32) -> Matrix {
    if let Some(e) = embed_cache().lock().unwrap().get(&(m, n)) {
        return e.clone();
    }
    let step = (n / m) as usize;
    let cols: Matrix = (0..euler_phi(m))
        .map(|k| {
            let mut v = vec![BigRational::zero(); k * step + 1];
            v[k * step] = BigRational::one();
            reduce_mod(n, v)
        })
        .collect();
    embed_cache().lock().unwrap().insert((m, n), cols.clone());
    cols
}

/// Solve sum_j x_j * cols[j] = target; None when inconsistent.
pub(crate) fn solve_columns(cols: &Matrix, target: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = target.len();
    let ncols = cols.len();
    let mut a: Matrix = (0..rows)
        .map(|i| {
            let mut r: Vec<BigRational> = cols.iter().map(|c| c[i].clone()).collect();
            r.push(target[i].clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = a[row][col].recip();
        for c in col..=ncols {
            a[row][c] = &a[row][c] * &inv;
        }
        for r in 0..rows {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..=ncols {
                    let t = &f * &a[row][c];
                    a[r][c] -= t;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if a[row..].iter().any(|r| !r[ncols].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = a[r][ncols].clone();
    }
    Some(x)
}

fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic { order: 1, coeffs: vec![BigRational::zero()] }
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    pub fn rational(q: BigRational) -> Self {
        Cyclotomic { order: 1, coeffs: vec![q] }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(BigRational::from_integer(n.into()))
    }

    /// zeta_n^k with zeta_n = exp(2 pi i / n).
    pub fn zeta(n: u32, k: i64) -> Self {
        assert!(n > 0);
        let k = k.rem_euclid(n as i64) as usize;
        let mut v = vec![BigRational::zero(); k + 1];
        v[k] = BigRational::one();
        Cyclotomic { order: n, coeffs: reduce_mod(n, v) }.canonical()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.order == 1 && self.coeffs[0].is_one()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        (self.order == 1).then(|| &self.coeffs[0])
    }

    /// Coordinates of self in the power basis of order n (n must be a multiple of the order).
    pub fn coords_in(&self, n: u32) -> Vec<BigRational> {
        assert!(n % self.order == 0, "order {} does not divide {}", self.order, n);
        if n == self.order {
            return self.coeffs.clone();
        }
        let step = (n / self.order) as usize;
        let mut v = vec![BigRational::zero(); (self.coeffs.len().max(1) - 1) * step + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[k * step] = c.clone();
        }
        reduce_mod(n, v)
    }

    fn canonical(self) -> Self {
        if self.order == 1 {
            return self;
        }
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            return Self::rational(self.coeffs[0].clone());
        }
        let n = self.order;
        for m in divisors(n) {
            if m == n {
                break;
            }
            if m % 4 == 2 || m == 1 {
                continue;
            }
            if let Some(x) = solve_columns(&embedding(m, n), &self.coeffs) {
                return Cyclotomic { order: m, coeffs: x };
            }
        }
        if n % 4 == 2 {
            // Q(zeta_2m) = Q(zeta_m) for odd m; zeta_2m = -zeta_m^((m+1)/2)
            let m = n / 2;
            let z = Cyclotomic::zeta(m, ((m + 1) / 2) as i64).neg();
            let mut acc = Cyclotomic::zero();
            let mut pw = Cyclotomic::one();
            for c in &self.coeffs {
                acc = acc.add(&pw.scale(c));
                pw = pw.mul(&z);
            }
            return acc;
        }
        self
    }

    fn lift_pair(&self, other: &Self) -> (u32, Vec<BigRational>, Vec<BigRational>) {
        let n = lcm(self.order, other.order);
        (n, self.coords_in(n), other.coords_in(n))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (n, a, b) = self.lift_pair(other);
        let v = a.into_iter().zip(b).map(|(x, y)| x + y).collect();
        Cyclotomic { order: n, coeffs: v }.canonical()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Cyclotomic { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Cyclotomic { order: self.order, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.order == 1 {
            return other.scale(&self.coeffs[0]);
        }
        if other.order == 1 {
            return self.scale(&other.coeffs[0]);
        }
        let (n, a, b) = self.lift_pair(other);
        let mut v = vec![BigRational::zero(); a.len() + b.len()];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    v[i + j] += x * y;
                }
            }
        }
        Cyclotomic { order: n, coeffs: reduce_mod(n, v) }.canonical()
    }

    pub fn pow(&self, e: i64) -> Option<Self> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        Some(acc)
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.order == 1 {
            return Some(Self::rational(self.coeffs[0].recip()));
        }
        let n = self.order;
        let d = self.coeffs.len();
        // columns: self * zeta^k
        let cols: Matrix = (0..d)
            .map(|k| {
                let mut v = vec![BigRational::zero(); k];
                v.extend(self.coeffs.iter().cloned());
                reduce_mod(n, v)
            })
            .collect();
        let mut e0 = vec![BigRational::zero(); d];
        e0[0] = BigRational::one();
        let x = solve_columns(&cols, &e0)?;
        Some(Cyclotomic { order: n, coeffs: x }.canonical())
    }

    /// If self = q * zeta_m^k with q rational, returns (q, k, m) with k/m reduced and q > 0
    /// (signs folded into the root of unity).
    pub fn as_scaled_root_of_unity(&self) -> Option<(BigRational, i64, u32)> {
        if self.is_zero() {
            return None;
        }
        let n = lcm(self.order, 2);
        for k in 0..n as i64 {
            let t = self.mul(&Cyclotomic::zeta(n, -k));
            if let Some(q) = t.as_rational() {
                if q.is_positive() {
                    let g = (k as u64).gcd(&(n as u64)).max(1);
                    let (kk, nn) = (k / g as i64, n / g as u32);
                    return Some((q.clone(), kk, nn));
                }
            }
        }
        None
    }

    /// Complex approximation, used only for diagnostics and tie-free orderings in tests.
    pub fn approx(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            let a = 2.0 * std::f64::consts::PI * k as f64 / self.order as f64;
            let v = rat_to_f64(c);
            re += v * a.cos();
            im += v * a.sin();
        }
        (re, im)
    }

    /// Number of nonzero basis coordinates.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }
}

pub(crate) fn rat_to_f64(q: &BigRational) -> f64 {
    use num::ToPrimitive;
    q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.order == 1 {
            return write!(f, "{}", fmt_rational(&self.coeffs[0]));
        }
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let z = match k {
                0 => String::new(),
                1 => format!("zeta({})", self.order),
                _ => format!("zeta({})^{}", self.order, k),
            };
            let s = if k == 0 {
                fmt_rational(c)
            } else if c.is_one() {
                z
            } else if *c == -BigRational::one() {
                format!("-{}", z)
            } else {
                format!("{}*{}", fmt_rational(c), z)
            };
            parts.push(s);
        }
        let mut out = String::new();
        for (i, p) in parts.iter().enumerate() {
            if i == 0 {
                out.push_str(p);
            } else if let Some(rest) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        if parts.len() > 1 {
            write!(f, "({})", out)
        } else {
            write!(f, "{}", out)
        }
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn cyclotomic_polys() {
        let to_i = |v: Vec<BigInt>| v.into_iter().map(|c| c.to_string().parse::<i64>().unwrap()).collect::<Vec<_>>();
        assert_eq!(to_i(cyclotomic_poly(1)), vec![-1, 1]);
        assert_eq!(to_i(cyclotomic_poly(4)), vec![1, 0, 1]);
        assert_eq!(to_i(cyclotomic_poly(6)), vec![1, -1, 1]);
        assert_eq!(to_i(cyclotomic_poly(12)), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn zeta6_squared_is_zeta3() {
        let z6 = Cyclotomic::zeta(6, 1);
        let z3 = Cyclotomic::zeta(3, 1);
        assert_eq!(z6.mul(&z6), z3);
        assert_eq!(z3.order(), 3);
    }

    #[test]
    fn canonical_orders() {
        assert_eq!(Cyclotomic::zeta(2, 1), Cyclotomic::from_int(-1));
        assert_eq!(Cyclotomic::zeta(4, 2), Cyclotomic::from_int(-1));
        assert_eq!(Cyclotomic::zeta(8, 2), Cyclotomic::zeta(4, 1));
        // zeta_6 lives in Q(zeta_3)
        assert_eq!(Cyclotomic::zeta(6, 1).order(), 3);
        let z12 = Cyclotomic::zeta(12, 1);
        assert_eq!(z12.pow(3).unwrap(), Cyclotomic::zeta(4, 1));
        assert_eq!(z12.pow(12).unwrap(), Cyclotomic::one());
    }

    #[test]
    fn inverse_and_sums() {
        let x = Cyclotomic::one().add(&Cyclotomic::zeta(5, 2).scale(&q(3, 2)));
        let y = x.inv().unwrap();
        assert!(x.mul(&y).is_one());
        // 1 + zeta3 + zeta3^2 = 0
        let s = Cyclotomic::one().add(&Cyclotomic::zeta(3, 1)).add(&Cyclotomic::zeta(3, 2));
        assert!(s.is_zero());
        // zeta3 - zeta3^2 = i sqrt 3, its square is -3
        let d = Cyclotomic::zeta(3, 1).sub(&Cyclotomic::zeta(3, 2));
        assert_eq!(d.mul(&d), Cyclotomic::from_int(-3));
    }

    #[test]
    fn scaled_roots() {
        let x = Cyclotomic::zeta(6, 5).scale(&q(-2, 3));
        let (r, k, m) = x.as_scaled_root_of_unity().unwrap();
        assert_eq!(r, q(2, 3));
        assert_eq!(Cyclotomic::zeta(m, k).scale(&r), x);
        let y = Cyclotomic::one().add(&Cyclotomic::zeta(4, 1));
        assert!(y.as_scaled_root_of_unity().is_none());
    }
}
