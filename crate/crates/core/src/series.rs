//! Exact truncated power series and the generating functions of embedded
//! trees, Motzkin walks, scheme weights, and quadrangulations of genus g.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::poly::{Poly, RationalFunction, ULaurentRational};
use crate::schemes::{d_profile, dominant_schemes_with, profile_multiplicities, Profile, Scheme, SchemeError, SchemeLimits};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error("series is not invertible (zero constant term)")]
    NotInvertible,
    #[error("inner series of a composition must have zero constant term")]
    BadComposition,
    #[error("function has a pole at U = 0 and no power series expansion")]
    Pole,
    #[error("exact function is not symmetric in U <-> 1/U")]
    NotSymmetric,
    #[error("coefficient {n}: {value} is not divisible by {divisor}")]
    NotDivisible { n: usize, value: String, divisor: i64 },
    #[error("series variables differ")]
    VariableMismatch,
}

/// Name of the series variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    T,
    Z,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Var::T => "t",
            Var::Z => "z",
        })
    }
}

/// Power series known up to and including `x^order`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    var: Var,
    c: Vec<BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn int(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

fn lcm_denominators(c: &[BigRational]) -> BigInt {
    c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

impl TruncatedSeries {
    pub fn zero(var: Var, order: usize) -> Self {
        TruncatedSeries {
            var,
            c: vec![BigRational::zero(); order + 1],
        }
    }

    pub fn constant(var: Var, order: usize, k: BigRational) -> Self {
        let mut s = Self::zero(var, order);
        s.c[0] = k;
        s
    }

    pub fn one(var: Var, order: usize) -> Self {
        Self::constant(var, order, BigRational::one())
    }

    /// The variable itself.
    pub fn x(var: Var, order: usize) -> Self {
        let mut s = Self::zero(var, order);
        if order >= 1 {
            s.c[1] = BigRational::one();
        }
        s
    }

    /// Pads or truncates `c` to the given order.
    pub fn from_coeffs(var: Var, order: usize, mut c: Vec<BigRational>) -> Self {
        c.resize(order + 1, BigRational::zero());
        TruncatedSeries { var, c }
    }

    pub fn from_ints(var: Var, order: usize, c: &[i64]) -> Self {
        Self::from_coeffs(var, order, c.iter().map(|&x| rat(x)).collect())
    }

    pub fn from_poly(var: Var, order: usize, p: &Poly) -> Self {
        Self::from_coeffs(var, order, p.coeffs().iter().take(order + 1).cloned().collect())
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &BigRational {
        &self.c[n]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    /// Renames the variable.
    pub fn with_var(mut self, var: Var) -> Self {
        self.var = var;
        self
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(self.var, order, self.c.iter().take(order + 1).cloned().collect())
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        TruncatedSeries {
            var: self.var,
            c: self.c.iter().map(|x| x * k).collect(),
        }
    }

    /// `x d/dx`
    pub fn euler(&self) -> Self {
        TruncatedSeries {
            var: self.var,
            c: self.c.iter().enumerate().map(|(n, x)| x * rat(n as i64)).collect(),
        }
    }

    /// Multiplies by `x^k`, dropping terms beyond the order.
    pub fn shift_up(&self, k: usize) -> Self {
        let n = self.c.len();
        let mut c = vec![BigRational::zero(); n];
        for i in 0..n.saturating_sub(k) {
            c[i + k] = self.c[i].clone();
        }
        TruncatedSeries { var: self.var, c }
    }

    pub fn inverse(&self) -> Result<Self, SeriesError> {
        if self.c[0].is_zero() {
            return Err(SeriesError::NotInvertible);
        }
        // integer recurrence on A = L * self: b'_n = -sum A_i A_0^(i-1) b'_(n-i),
        // with 1/A = sum b'_n / A_0^(n+1) x^n
        let l = lcm_denominators(&self.c);
        let a: Vec<BigInt> = self.c.iter().map(|x| (x * &l).to_integer()).collect();
        let n = a.len();
        let mut a0_pow = vec![BigInt::one(); n + 1];
        for i in 1..=n {
            a0_pow[i] = &a0_pow[i - 1] * &a[0];
        }
        let mut b: Vec<BigInt> = Vec::with_capacity(n);
        b.push(BigInt::one());
        for k in 1..n {
            let mut acc = BigInt::zero();
            for i in 1..=k {
                if !a[i].is_zero() {
                    acc += &a[i] * &a0_pow[i - 1] * &b[k - i];
                }
            }
            b.push(-acc);
        }
        let lr = int(l);
        let c = b
            .into_iter()
            .enumerate()
            .map(|(k, x)| BigRational::new(x, a0_pow[k + 1].clone()) * &lr)
            .collect();
        Ok(TruncatedSeries { var: self.var, c })
    }

    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        Ok(self * &other.inverse()?)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.var, self.order());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `p(self)` by Horner's rule.
    pub fn eval_poly(&self, p: &Poly) -> Self {
        let mut acc = Self::zero(self.var, self.order());
        for c in p.coeffs().iter().rev() {
            acc = &acc * self;
            acc.c[0] += c;
        }
        acc
    }

    /// `f(self)` for a rational function `f`; the denominator must not
    /// vanish at the constant term of `self`.
    pub fn eval_rational(&self, f: &RationalFunction) -> Result<Self, SeriesError> {
        self.eval_poly(&f.num).div(&self.eval_poly(&f.den))
    }

    /// `x(self)` for a Laurent-rational `x`; `self` is assumed to have zero
    /// constant term, so negative powers are rejected.
    pub fn eval_laurent(&self, x: &ULaurentRational) -> Result<Self, SeriesError> {
        if x.is_zero() {
            return Ok(Self::zero(self.var, self.order()));
        }
        if x.shift() < 0 {
            return Err(SeriesError::Pole);
        }
        let num = self.eval_poly(x.numerator());
        let den = self.eval_poly(x.denominator());
        let p = self.pow(x.shift() as u32);
        Ok(&(&num * &p) * &den.inverse()?)
    }

    /// `self(inner)`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self, SeriesError> {
        if !inner.c[0].is_zero() {
            return Err(SeriesError::BadComposition);
        }
        let p = Poly::from_coeffs(self.c.clone());
        Ok(inner.eval_poly(&p))
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}*{}^{n}", self.var)?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({}^{})", self.var, self.order() + 1)
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, o: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.var, o.var, "series variables differ");
        let n = self.c.len().min(o.c.len());
        TruncatedSeries {
            var: self.var,
            c: (0..n).map(|i| &self.c[i] + &o.c[i]).collect(),
        }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, o: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.var, o.var, "series variables differ");
        let n = self.c.len().min(o.c.len());
        TruncatedSeries {
            var: self.var,
            c: (0..n).map(|i| &self.c[i] - &o.c[i]).collect(),
        }
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            var: self.var,
            c: self.c.iter().map(|x| -x).collect(),
        }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, o: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.var, o.var, "series variables differ");
        let n = self.c.len().min(o.c.len());
        let la = lcm_denominators(&self.c[..n]);
        let lb = lcm_denominators(&o.c[..n]);
        let a: Vec<BigInt> = self.c[..n].iter().map(|x| (x * &la).to_integer()).collect();
        let b: Vec<BigInt> = o.c[..n].iter().map(|x| (x * &lb).to_integer()).collect();
        let nz: Vec<usize> = (0..n).filter(|&j| !b[j].is_zero()).collect();
        let mut out = vec![BigInt::zero(); n];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for &j in &nz {
                if i + j >= n {
                    break;
                }
                out[i + j] += x * &b[j];
            }
        }
        let den = la * lb;
        TruncatedSeries {
            var: self.var,
            c: out.into_iter().map(|x| BigRational::new(x, den.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for TruncatedSeries {
            type Output = TruncatedSeries;
            fn $m(self, o: TruncatedSeries) -> TruncatedSeries {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Embedded planar trees: `T = 1 + 3 z T^2`.
pub fn series_t(order: usize) -> TruncatedSeries {
    let mut a: Vec<BigInt> = vec![BigInt::one()];
    for n in 1..=order {
        let mut s = BigInt::zero();
        for i in 0..n {
            s += &a[i] * &a[n - 1 - i];
        }
        a.push(s * 3);
    }
    TruncatedSeries::from_coeffs(Var::Z, order, a.into_iter().map(int).collect())
}

/// Motzkin walks of increment 0 staying nonnegative and ending with an up
/// step: `U = t (1 + U + U^2)`.
pub fn series_u(order: usize) -> TruncatedSeries {
    let mut u: Vec<BigInt> = vec![BigInt::zero()];
    for n in 1..=order {
        let mut s = if n == 1 { BigInt::one() } else { u[n - 1].clone() };
        for i in 1..n - 1 {
            s += &u[i] * &u[n - 1 - i];
        }
        u.push(s);
    }
    TruncatedSeries::from_coeffs(Var::T, order, u.into_iter().map(int).collect())
}

/// Non-empty walks with increment 0: `B = t (1 + 2U)(1 + B)`.
pub fn series_b(order: usize) -> TruncatedSeries {
    let u = series_u(order);
    let step = (&TruncatedSeries::one(Var::T, order) + &u.scale(&rat(2))).shift_up(1);
    let den = &TruncatedSeries::one(Var::T, order) - &step;
    step.div(&den).expect("constant term 1")
}

/// Walks of increment `i`: `M_0 = B` and `M_i = (1 + B) U^i` for `i >= 1`.
pub fn series_m(i: usize, order: usize) -> TruncatedSeries {
    let b = series_b(order);
    if i == 0 {
        return b;
    }
    let one = TruncatedSeries::one(Var::T, order);
    &(&one + &b) * &series_u(order).pow(i as u32)
}

fn cyclotomic_exponents(profile: &Profile) -> Vec<u32> {
    // index 1 stands for 1 - U, index m >= 2 for the cyclotomic polynomial
    let top = profile.d.iter().copied().max().unwrap_or(0).max(2);
    let mut e = vec![0u32; top + 1];
    e[1] += (profile.k + profile.p) as u32;
    e[2] += profile.k as u32;
    for &dj in &profile.d {
        for m in 2..=dj {
            if dj % m == 0 {
                e[m] += 1;
            }
        }
    }
    e
}

fn weight_numerator(profile: &Profile) -> (i64, Poly) {
    let shift = (profile.d_total + profile.e_eq) as i64;
    let num = &Poly::from_ints(&[1, 2]).pow(profile.e_eq as u32) * &Poly::from_ints(&[1, 1, 1]).pow(profile.e_neq as u32);
    (shift, num.scale(&BigRational::new(BigInt::one(), BigInt::from(profile.k))))
}

fn factor_poly(m: usize) -> Poly {
    if m == 1 {
        Poly::from_ints(&[1, -1])
    } else {
        Poly::cyclotomic(m)
    }
}

/// Weight of a scheme profile as a function of `U`:
/// `(1/k) U^(d + e_=) (1 + 2U)^e_= (1 + U + U^2)^e_!= / ((1 - U)^(k + p) (1 + U)^k prod_j [d(j)]_U)`
/// where `[d]_U = 1 + U + ... + U^(d - 1)`.
pub fn weight_of_profile(profile: &Profile) -> ULaurentRational {
    let (shift, num) = weight_numerator(profile);
    let e = cyclotomic_exponents(profile);
    let den = e.iter().enumerate().skip(1).fold(Poly::one(), |acc, (m, &x)| &acc * &factor_poly(m).pow(x));
    ULaurentRational::new(shift, num, den)
}

pub fn weight(s: &Scheme) -> ULaurentRational {
    weight_of_profile(&d_profile(s))
}

pub fn weight_series(s: &Scheme, order: usize) -> TruncatedSeries {
    series_u(order)
        .eval_laurent(&weight(s))
        .expect("weights are power series in U")
}

/// Sum of the weights of all schemes of genus `g`, exactly.
pub fn rhat_exact(g: usize) -> Result<ULaurentRational, SeriesError> {
    rhat_exact_with(g, &SchemeLimits::from_env())
}

pub fn rhat_exact_with(g: usize, limits: &SchemeLimits) -> Result<ULaurentRational, SeriesError> {
    let profiles = profile_multiplicities(g, limits)?;
    // common denominator as a product of cyclotomic factors
    let exps: Vec<Vec<u32>> = profiles.iter().map(|(p, _)| cyclotomic_exponents(p)).collect();
    let width = exps.iter().map(Vec::len).max().unwrap_or(0);
    let mut lcm = vec![0u32; width];
    for e in &exps {
        for (m, &x) in e.iter().enumerate() {
            lcm[m] = lcm[m].max(x);
        }
    }
    let min_shift = profiles.iter().map(|(p, _)| weight_numerator(p).0).min().unwrap_or(0);
    let terms: Vec<Poly> = profiles
        .par_iter()
        .zip(exps.par_iter())
        .map(|((p, mult), e)| {
            let (shift, num) = weight_numerator(p);
            let mut t = num.scale(&rat(*mult as i64)).shift_up((shift - min_shift) as usize);
            for m in 1..width {
                let missing = lcm[m] - e.get(m).copied().unwrap_or(0);
                if missing > 0 {
                    t = &t * &factor_poly(m).pow(missing);
                }
            }
            t
        })
        .collect();
    let mut num = terms.into_iter().fold(Poly::zero(), |a, b| &a + &b);
    // cancel common cyclotomic factors by trial division
    let mut den_factors = lcm.clone();
    for m in 1..width {
        let f = factor_poly(m);
        while den_factors[m] > 0 {
            match num.div_exact(&f) {
                Some(q) => {
                    num = q;
                    den_factors[m] -= 1;
                }
                None => break,
            }
        }
    }
    let den = den_factors
        .iter()
        .enumerate()
        .skip(1)
        .fold(Poly::one(), |acc, (m, &x)| &acc * &factor_poly(m).pow(x));
    Ok(ULaurentRational::new_coprime(min_shift, num, den))
}

/// `R̂_g(t)` to the given order as the sum of the weight series of all
/// schemes of genus `g`.
pub fn rhat(g: usize, order: usize) -> Result<TruncatedSeries, SeriesError> {
    rhat_with(g, order, &SchemeLimits::from_env())
}

pub fn rhat_with(g: usize, order: usize, limits: &SchemeLimits) -> Result<TruncatedSeries, SeriesError> {
    let profiles = profile_multiplicities(g, limits)?;
    let u = series_u(order);
    let parts: Vec<TruncatedSeries> = profiles
        .par_iter()
        .map(|(p, mult)| {
            u.eval_laurent(&weight_of_profile(p))
                .expect("weights are power series in U")
                .scale(&rat(*mult as i64))
        })
        .collect();
    Ok(parts
        .into_iter()
        .fold(TruncatedSeries::zero(Var::T, order), |a, b| &a + &b))
}

/// `R̂_g` as a rational function of `t`.
pub fn rhat_t_rational(g: usize) -> Result<RationalFunction, SeriesError> {
    rhat_exact(g)?.to_t_rational().ok_or(SeriesError::NotSymmetric)
}

/// Whether `x(U) = x(1/U)`.
pub fn u_symmetry_check(x: &ULaurentRational) -> bool {
    x.is_symmetric()
}

/// `numerator/denominator`, with `/1` kept for integers.
pub fn ratio_text(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// `zT^2 = (T - 1)/3`
pub fn series_s(order: usize) -> TruncatedSeries {
    let t = series_t(order);
    (&t - &TruncatedSeries::one(Var::Z, order)).scale(&BigRational::new(BigInt::one(), BigInt::from(3)))
}

/// Rooted embedded g-trees counted by edges: `T_0 = T` and
/// `T_g = z d/dz R̂_g(zT^2)` for `g >= 1`.
pub fn series_tg(g: usize, order: usize) -> Result<TruncatedSeries, SeriesError> {
    if g == 0 {
        return Ok(series_t(order));
    }
    let r = rhat_t_rational(g)?;
    Ok(series_s(order).eval_rational(&r)?.euler())
}

/// Rooted pointed bipartite quadrangulations of genus `g` counted by faces.
pub fn series_q_bullet(g: usize, order: usize) -> Result<TruncatedSeries, SeriesError> {
    Ok(series_tg(g, order)?.scale(&rat(2)))
}

/// Rooted bipartite quadrangulations of genus `g` counted by faces, from
/// the pointed ones by dividing the coefficient of `z^n` by the number
/// `n + 2 - 2g` of vertices.
pub fn series_qg(g: usize, order: usize) -> Result<TruncatedSeries, SeriesError> {
    let qb = series_q_bullet(g, order)?;
    let mut c = Vec::with_capacity(order + 1);
    for (n, x) in qb.coeffs().iter().enumerate() {
        let v = n as i64 + 2 - 2 * g as i64;
        let err = || SeriesError::NotDivisible {
            n,
            value: x.to_string(),
            divisor: v,
        };
        if !x.is_integer() {
            return Err(err());
        }
        if v <= 0 {
            if !x.is_zero() {
                return Err(err());
            }
            c.push(BigRational::zero());
            continue;
        }
        let (q, r) = x.numer().div_rem(&BigInt::from(v));
        if !r.is_zero() {
            return Err(err());
        }
        c.push(int(q));
    }
    Ok(TruncatedSeries::from_coeffs(Var::Z, order, c))
}

/// Sum over dominant schemes of `prod_{i=1}^{4g-3} 1/d(i)`.
pub fn tau(g: usize) -> Result<BigRational, SeriesError> {
    tau_with(g, &SchemeLimits::from_env())
}

pub fn tau_with(g: usize, limits: &SchemeLimits) -> Result<BigRational, SeriesError> {
    let schemes = dominant_schemes_with(g, limits)?;
    let parts: Vec<BigRational> = schemes
        .par_iter()
        .map(|s| {
            let p = d_profile(s);
            let prod: BigInt = p.d.iter().map(|&x| BigInt::from(x)).product();
            BigRational::new(BigInt::one(), prod)
        })
        .collect();
    Ok(parts.into_iter().fold(BigRational::zero(), |a, b| a + b))
}

/// `rational * pi^(pi_power / 2)`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AsymptoticConstant {
    pub rational: BigRational,
    pub pi_power: i32,
}

impl AsymptoticConstant {
    pub fn to_f64(&self) -> f64 {
        self.rational.to_f64().unwrap_or(f64::NAN) * std::f64::consts::PI.powf(self.pi_power as f64 / 2.0)
    }
}

impl fmt::Display for AsymptoticConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pi_power == 0 {
            write!(f, "{}", self.rational)
        } else {
            write!(f, "{} * pi^({}/2)", self.rational, self.pi_power)
        }
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, i| a * BigInt::from(i))
}

/// `Gamma(n / 2)` for `n >= 1`, as a rational times `pi^(pi_power / 2)`.
pub fn gamma_half(n: usize) -> AsymptoticConstant {
    assert!(n >= 1);
    if n % 2 == 0 {
        AsymptoticConstant {
            rational: int(factorial(n / 2 - 1)),
            pi_power: 0,
        }
    } else {
        // Gamma(m + 1/2) = (2m)! / (4^m m!) sqrt(pi)
        let m = (n - 1) / 2;
        AsymptoticConstant {
            rational: BigRational::new(factorial(2 * m), BigInt::from(4).pow(m as u32) * factorial(m)),
            pi_power: 1,
        }
    }
}

/// Constant `c_g` with `q_{g,n} ~ c_g n^(5(g-1)/2) 12^n`:
/// `c_g = 3^g tau_g / ((6g - 3) 2^(11g - 7) Gamma((5g - 3)/2))`.
pub fn asympt_constant(g: usize) -> Result<AsymptoticConstant, SeriesError> {
    Ok(constant_from_tau(g, &tau(g)?))
}

pub fn constant_from_tau(g: usize, tau: &BigRational) -> AsymptoticConstant {
    let gamma = gamma_half(5 * g - 3);
    let den = rat(6 * g as i64 - 3) * int(BigInt::from(2).pow(11 * g as u32 - 7)) * &gamma.rational;
    AsymptoticConstant {
        rational: int(BigInt::from(3).pow(g as u32)) * tau / den,
        pi_power: -gamma.pi_power,
    }
}

/// Constant for rooted pointed quadrangulations,
/// `q•_{g,n} ~ c n^((5g-3)/2) 12^n` with
/// `c = (5g - 3)/(6g - 3) 3^g / 2^(11g - 6) tau_g / Gamma((5g - 1)/2)`.
pub fn pointed_constant_from_tau(g: usize, tau: &BigRational) -> AsymptoticConstant {
    let gamma = gamma_half(5 * g - 1);
    let g = g as i64;
    let r = BigRational::new(BigInt::from(5 * g - 3), BigInt::from(6 * g - 3))
        * int(BigInt::from(3).pow(g as u32))
        / int(BigInt::from(2).pow(11 * g as u32 - 6))
        * tau
        / &gamma.rational;
    AsymptoticConstant {
        rational: r,
        pi_power: -gamma.pi_power,
    }
}

/// Rooted planar maps with `n` edges: `2 3^n (2n)! / (n! (n + 2)!)`.
pub fn planar_map_count(n: usize) -> BigInt {
    BigInt::from(2) * BigInt::from(3).pow(n as u32) * factorial(2 * n) / (factorial(n) * factorial(n + 2))
}

/// `|q * 12^-n - c|` as an exact rational.
pub fn deviation_from(q: &BigRational, n: usize, c: &BigRational) -> BigRational {
    (q / int(BigInt::from(12).pow(n as u32)) - c).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::enumerate_schemes_with;

    fn ints(s: &TruncatedSeries, n: usize) -> Vec<i64> {
        s.coeffs()[..n].iter().map(|x| x.to_integer().to_i64().unwrap()).collect()
    }

    fn closed_rhat1(order: usize) -> TruncatedSeries {
        // t^2 (1 + 3t) / (2 (1 - 3t)^2 (1 + t))
        let num = TruncatedSeries::from_ints(Var::T, order, &[0, 0, 1, 3]);
        let den = TruncatedSeries::from_poly(
            Var::T,
            order,
            &(&Poly::from_ints(&[2]) * &(&Poly::from_ints(&[1, -3]).pow(2) * &Poly::from_ints(&[1, 1]))),
        );
        num.div(&den).unwrap()
    }

    #[test]
    fn planar_tree_series() {
        let t = series_t(30);
        assert_eq!(ints(&t, 5), vec![1, 3, 18, 135, 1134]);
        let one = TruncatedSeries::one(Var::Z, 30);
        let rhs = &one + &(&t * &t).shift_up(1).scale(&rat(3));
        assert_eq!(t, rhs);
        // z T' = (T^2 - T)/(2 - T)
        let lhs = t.euler();
        let two = TruncatedSeries::constant(Var::Z, 30, rat(2));
        let rhs = (&(&t * &t) - &t).div(&(&two - &t)).unwrap();
        assert_eq!(lhs, rhs);
        // closed form 3^n C(2n, n) / (n + 1)
        for n in 0..=30 {
            let c = BigInt::from(3).pow(n as u32) * factorial(2 * n) / (factorial(n) * factorial(n) * BigInt::from(n + 1));
            assert_eq!(t.coeff(n), &int(c));
        }
    }

    /// Counts non-empty walks of each length by increment, by brute force.
    fn walk_counts(len: usize, increment: i64, nonneg_prefix_ends_up: bool) -> usize {
        let mut count = 0;
        for code in 0..3usize.pow(len as u32) {
            let mut c = code;
            let steps: Vec<i64> = (0..len)
                .map(|_| {
                    let s = (c % 3) as i64 - 1;
                    c /= 3;
                    s
                })
                .collect();
            if steps.iter().sum::<i64>() != increment {
                continue;
            }
            if nonneg_prefix_ends_up {
                // paths from 0 to 0 of length len - 1 below an up step, i.e.
                // Motzkin paths of length len - 1
                let mut h = 0;
                if steps[..len - 1].iter().any(|s| {
                    h += s;
                    h < 0
                }) || h != 0
                {
                    continue;
                }
                if steps[len - 1] != 1 {
                    continue;
                }
            }
            count += 1;
        }
        count
    }

    #[test]
    fn motzkin_series() {
        let u = series_u(12);
        assert_eq!(ints(&u, 6), vec![0, 1, 1, 2, 4, 9]);
        for n in 1..=8 {
            assert_eq!(u.coeff(n), &rat(walk_counts(n, 1, true) as i64));
        }
        let one = TruncatedSeries::one(Var::T, 12);
        assert_eq!(u, (&(&one + &u) + &(&u * &u)).shift_up(1));

        let b = series_b(12);
        assert_eq!(ints(&b, 5), vec![0, 1, 3, 7, 19]);
        let m2 = series_m(2, 12);
        assert_eq!(ints(&m2, 4), vec![0, 0, 1, 3]);
        let m1 = series_m(1, 12);
        for n in 1..=8 {
            assert_eq!(b.coeff(n), &rat(walk_counts(n, 0, false) as i64));
            assert_eq!(m1.coeff(n), &rat(walk_counts(n, 1, false) as i64));
            assert_eq!(m2.coeff(n), &rat(walk_counts(n, 2, false) as i64));
        }
        let step = (&one + &u.scale(&rat(2))).shift_up(1);
        assert_eq!(b, &step * &(&one + &b));
    }

    #[test]
    fn inverse_and_composition() {
        let x = TruncatedSeries::x(Var::T, 10);
        let one = TruncatedSeries::one(Var::T, 10);
        let geo = (&one - &x).inverse().unwrap();
        assert!(geo.coeffs().iter().all(|c| c.is_one()));
        let h = TruncatedSeries::constant(Var::T, 10, BigRational::new(2.into(), 3.into()));
        let inv = (&h + &x).inverse().unwrap();
        assert_eq!(&inv * &(&h + &x), one);
        // 1/(1 - x) composed with 2x
        let c = geo.compose(&x.scale(&rat(2))).unwrap();
        assert_eq!(c.coeff(5), &rat(32));
        assert!(geo.compose(&one).is_err());
    }

    #[test]
    fn torus_weights() {
        let schemes = enumerate_schemes_with(1, &SchemeLimits::default()).unwrap();
        let b = series_b(12);
        let one_vertex: Vec<&Scheme> = schemes.iter().filter(|s| s.shape.n_vertices() == 1).collect();
        assert_eq!(one_vertex.len(), 1);
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(weight_series(one_vertex[0], 12), (&b * &b).scale(&half));
        assert_eq!(weight_series(one_vertex[0], 4).coeff(2), &half);

        let third = BigRational::new(1.into(), 3.into());
        let flat = schemes
            .iter()
            .find(|s| s.shape.n_vertices() == 2 && s.labels == vec![0, 0])
            .unwrap();
        assert_eq!(weight_series(flat, 12), b.pow(3).scale(&third));
        let split = schemes
            .iter()
            .find(|s| s.shape.n_vertices() == 2 && s.labels == vec![0, 1])
            .unwrap();
        let expected = ULaurentRational::new(
            3,
            Poly::from_ints(&[1, 1, 1]).pow(2).scale(&third),
            &Poly::from_ints(&[1, -1]).pow(4) * &Poly::from_ints(&[1, 1]).pow(3),
        );
        assert_eq!(weight(split), expected);
    }

    #[test]
    fn torus_rhat() {
        let r = rhat_with(1, 30, &SchemeLimits::default()).unwrap();
        assert_eq!(r, closed_rhat1(30));
        assert_eq!(r.coeff(3), &rat(4));
        assert_eq!(r.coeff(4), &BigRational::new(37.into(), 2.into()));
        let exact = rhat_exact_with(1, &SchemeLimits::default()).unwrap();
        assert!(u_symmetry_check(&exact));
        let tr = exact.to_t_rational().unwrap();
        let closed = RationalFunction::new(
            Poly::from_ints(&[0, 0, 1, 3]),
            &Poly::from_ints(&[2]) * &(&Poly::from_ints(&[1, -3]).pow(2) * &Poly::from_ints(&[1, 1])),
        );
        assert_eq!(tr, closed);
        assert_eq!(series_u(30).eval_laurent(&exact).unwrap(), r);
    }

    #[test]
    fn torus_quadrangulations() {
        let q = series_qg(1, 30).unwrap();
        assert_eq!(q.coeff(2), &rat(1));
        assert_eq!(q.coeff(3), &rat(20));
        let qb = series_q_bullet(1, 5).unwrap();
        assert_eq!(ints(&qb, 4), vec![0, 0, 2, 60]);
        // (T - 1)^2 T / (3 (2 - T)^2 (2 + T))
        let t = series_t(30);
        let one = TruncatedSeries::one(Var::Z, 30);
        let two = TruncatedSeries::constant(Var::Z, 30, rat(2));
        let tm = &t - &one;
        let num = &(&tm * &tm) * &t;
        let den = (&(&(&two - &t) * &(&two - &t)) * &(&two + &t)).scale(&rat(3));
        assert_eq!(q, num.div(&den).unwrap());
    }

    #[test]
    fn planar_pointed_series() {
        let qb = series_q_bullet(0, 30).unwrap();
        for n in 0..=30 {
            assert_eq!(qb.coeff(n), &int(planar_map_count(n) * BigInt::from(n + 2)));
        }
        let q = series_qg(0, 10).unwrap();
        assert_eq!(ints(&q, 4), vec![1, 2, 9, 54]);
    }

    #[test]
    fn torus_constant() {
        let t = tau_with(1, &SchemeLimits::default()).unwrap();
        assert_eq!(t, BigRational::new(2.into(), 3.into()));
        let c = constant_from_tau(1, &t);
        assert_eq!(c.rational, BigRational::new(1.into(), 24.into()));
        assert_eq!(c.pi_power, 0);
        assert_eq!(pointed_constant_from_tau(1, &t), c);
    }

    #[test]
    fn gamma_values() {
        assert_eq!(gamma_half(2).rational, rat(1));
        assert_eq!(gamma_half(8).rational, rat(6));
        let g = gamma_half(7);
        assert_eq!((g.rational, g.pi_power), (BigRational::new(15.into(), 8.into()), 1));
        let g = gamma_half(1);
        assert_eq!((g.rational, g.pi_power), (rat(1), 1));
    }

    #[test]
    fn genus_two_against_census() {
        use crate::census::{enumerate_embedded_trees, Budget};
        let exact = rhat_exact_with(2, &SchemeLimits::default()).unwrap();
        assert!(u_symmetry_check(&exact));
        let r = rhat_with(2, 12, &SchemeLimits::default()).unwrap();
        assert_eq!(series_u(12).eval_laurent(&exact).unwrap(), r);
        let tg = series_tg(2, 6).unwrap();
        let budget = Budget { max_n: vec![5, 5, 5] };
        for n in 4..=5 {
            let count = enumerate_embedded_trees(n, 2, &budget).unwrap().len();
            assert_eq!(tg.coeff(n), &rat(count as i64), "n = {n}");
        }
        let q = series_qg(2, 6).unwrap();
        assert_eq!(q.coeff(4), &rat(21));
        let t = tau_with(2, &SchemeLimits::default()).unwrap();
        assert_eq!(t, BigRational::new(896.into(), 9.into()));
    }

    #[test]
    fn torus_tree_series_against_census() {
        use crate::census::{enumerate_embedded_trees, Budget};
        let tg = series_tg(1, 6).unwrap();
        let budget = Budget { max_n: vec![5, 5, 5] };
        for n in 2..=5 {
            let count = enumerate_embedded_trees(n, 1, &budget).unwrap().len();
            assert_eq!(tg.coeff(n), &rat(count as i64), "n = {n}");
        }
    }

    #[test]
    fn genus_two_constant_from_its_tau() {
        let tau2 = BigRational::new(896.into(), 9.into());
        let c = constant_from_tau(2, &tau2);
        assert_eq!(c.rational, BigRational::new(7.into(), 4320.into()));
        assert_eq!(c.pi_power, -1);
        assert_eq!(pointed_constant_from_tau(2, &tau2), c);
    }
}
