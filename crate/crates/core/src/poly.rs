//! Dense univariate polynomials over the rationals and ratios of Laurent
//! polynomials in one variable.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Polynomial with rational coefficients, lowest degree first, without
/// trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    c: Vec<BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Poly {
    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::from_coeffs(vec![c])
    }

    pub fn from_coeffs(c: Vec<BigRational>) -> Self {
        let mut p = Poly { c };
        p.trim();
        p
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Poly::from_coeffs(c.iter().map(|&x| rat(x)).collect())
    }

    /// `x^k`
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![BigRational::zero(); k + 1];
        c[k] = BigRational::one();
        Poly { c }
    }

    fn trim(&mut self) {
        while self.c.last().is_some_and(Zero::is_zero) {
            self.c.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.c.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.c.last()
    }

    /// Number of vanishing low-order coefficients.
    pub fn valuation(&self) -> Option<usize> {
        self.c.iter().position(|x| !x.is_zero())
    }

    pub fn scale(&self, k: &BigRational) -> Poly {
        Poly::from_coeffs(self.c.iter().map(|x| x * k).collect())
    }

    /// Multiplies by `x^k`.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![BigRational::zero(); k];
        c.extend(self.c.iter().cloned());
        Poly { c }
    }

    /// Divides by `x^k`; the low coefficients must vanish.
    pub fn shift_down(&self, k: usize) -> Poly {
        debug_assert!(self.c.iter().take(k).all(Zero::is_zero));
        Poly::from_coeffs(self.c.iter().skip(k).cloned().collect())
    }

    /// `x^deg p(1/x)`
    pub fn reversed(&self) -> Poly {
        let mut c = self.c.clone();
        c.reverse();
        Poly::from_coeffs(c)
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
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

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.c[dd].clone();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let coef = &r[i + dd] / &lead;
            if !coef.is_zero() {
                for j in 0..=dd {
                    let t = &coef * &d.c[j];
                    r[i + j] -= t;
                }
            }
            q[i] = coef;
        }
        r.truncate(dd);
        (Poly::from_coeffs(q), Poly::from_coeffs(r))
    }

    /// Exact quotient when `d` divides `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a
    }

    /// Least common multiple of all coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }

    /// Gcd of the numerators of all coefficients (for integer polynomials
    /// this is the content).
    pub fn numerator_gcd(&self) -> BigInt {
        self.c.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x.numer()))
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.c.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// The m-th cyclotomic polynomial.
    pub fn cyclotomic(m: usize) -> Poly {
        assert!(m >= 1);
        let mut p = Poly::monomial(m) - Poly::one();
        for d in 1..m {
            if m % d == 0 {
                p = p.div_exact(&Poly::cyclotomic(d)).expect("cyclotomic factor");
            }
        }
        p
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::from_coeffs((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::from_coeffs((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            c: self.c.iter().map(|x| -x).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        // integer convolution over a common denominator
        let la = self.denominator_lcm();
        let lb = o.denominator_lcm();
        let a: Vec<BigInt> = self.c.iter().map(|x| (x * &la).to_integer()).collect();
        let b: Vec<BigInt> = o.c.iter().map(|x| (x * &lb).to_integer()).collect();
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        let den = la * lb;
        Poly::from_coeffs(out.into_iter().map(|x| BigRational::new(x, den.clone())).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, o: Poly) -> Poly {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// `x^shift * num / den` with `num`, `den` coprime integer polynomials with
/// joint content 1, nonzero constant terms, and `den` of positive leading
/// coefficient. Zero is `0 / 1` with shift 0.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ULaurentRational {
    shift: i64,
    num: Poly,
    den: Poly,
}

impl ULaurentRational {
    pub fn zero() -> Self {
        ULaurentRational {
            shift: 0,
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> Self {
        Self::new(0, p, Poly::one())
    }

    /// The variable itself.
    pub fn x() -> Self {
        Self::new(1, Poly::one(), Poly::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    /// Normalizes `x^shift * num / den`.
    pub fn new(shift: i64, num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        if g.degree() == Some(0) {
            Self::new_coprime(shift, num, den)
        } else {
            Self::new_coprime(shift, num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        }
    }

    /// Like [`ULaurentRational::new`] for `num` and `den` already known to
    /// be coprime up to powers of the variable.
    pub fn new_coprime(shift: i64, mut num: Poly, mut den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let vn = num.valuation().unwrap();
        let vd = den.valuation().unwrap();
        num = num.shift_down(vn);
        den = den.shift_down(vd);
        let shift = shift + vn as i64 - vd as i64;
        // integer coefficients with joint content 1
        let l = num.denominator_lcm().lcm(&den.denominator_lcm());
        let lr = BigRational::from_integer(l);
        num = num.scale(&lr);
        den = den.scale(&lr);
        let mut content = num.numerator_gcd().gcd(&den.numerator_gcd());
        if den.leading().unwrap().is_negative() {
            content = -content;
        }
        let cr = BigRational::from_integer(content).recip();
        ULaurentRational {
            shift,
            num: num.scale(&cr),
            den: den.scale(&cr),
        }
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::new(self.shift, self.num.scale(k), self.den.clone())
    }

    pub fn pow(&self, e: i32) -> Self {
        if e >= 0 {
            let e = e as u32;
            Self::new(self.shift * e as i64, self.num.pow(e), self.den.pow(e))
        } else {
            self.recip().pow(-e)
        }
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        Self::new(-self.shift, self.den.clone(), self.num.clone())
    }

    /// Substitutes `x -> 1/x`.
    pub fn invert_variable(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let dn = self.num.degree().unwrap() as i64;
        let dd = self.den.degree().unwrap() as i64;
        Self::new(-self.shift - dn + dd, self.num.reversed(), self.den.reversed())
    }

    /// Whether the function is unchanged by `x -> 1/x`.
    pub fn is_symmetric(&self) -> bool {
        *self == self.invert_variable()
    }

    /// For a function invariant under `x -> 1/x`, its expression as a
    /// rational function of `t = x / (1 + x + x^2)`, using `1/t = x + 1 + 1/x`.
    /// Returns `None` when the function is not symmetric.
    pub fn to_t_rational(&self) -> Option<RationalFunction> {
        if self.is_zero() {
            return Some(RationalFunction::new(Poly::zero(), Poly::one()));
        }
        let rd = self.den.reversed();
        let dd = self.den.degree().unwrap() as i64;
        // multiply above and below by x^-deg(den) den(1/x), which is symmetric
        let top = &self.num * &rd;
        let low = self.shift - dd;
        if low + top.degree().unwrap() as i64 != -low {
            return None;
        }
        let a = symmetric_to_s_basis(top.coeffs())?;
        let b = symmetric_to_s_basis((&self.den * &rd).coeffs())?;
        // s = 1/t
        let m = a.degree().unwrap().max(b.degree().unwrap());
        let flip = |p: &Poly| {
            let mut c = vec![BigRational::zero(); m + 1];
            for (k, x) in p.coeffs().iter().enumerate() {
                c[m - k] = x.clone();
            }
            Poly::from_coeffs(c)
        };
        Some(RationalFunction::new(flip(&a), flip(&b)))
    }

    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        let xs = if self.shift >= 0 {
            num_traits::pow(x.clone(), self.shift as usize)
        } else {
            if x.is_zero() {
                return None;
            }
            num_traits::pow(x.recip(), (-self.shift) as usize)
        };
        Some(self.num.eval(x) / d * xs)
    }
}

impl fmt::Display for ULaurentRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{} * ({}) / ({})", self.shift, self.num, self.den)
    }
}

impl Add for &ULaurentRational {
    type Output = ULaurentRational;
    fn add(self, o: &ULaurentRational) -> ULaurentRational {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let s = self.shift.min(o.shift);
        let a = (&self.num * &o.den).shift_up((self.shift - s) as usize);
        let b = (&o.num * &self.den).shift_up((o.shift - s) as usize);
        ULaurentRational::new(s, &a + &b, &self.den * &o.den)
    }
}

impl Neg for &ULaurentRational {
    type Output = ULaurentRational;
    fn neg(self) -> ULaurentRational {
        ULaurentRational {
            shift: self.shift,
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Sub for &ULaurentRational {
    type Output = ULaurentRational;
    fn sub(self, o: &ULaurentRational) -> ULaurentRational {
        self + &(-o)
    }
}

impl Mul for &ULaurentRational {
    type Output = ULaurentRational;
    fn mul(self, o: &ULaurentRational) -> ULaurentRational {
        if self.is_zero() || o.is_zero() {
            return ULaurentRational::zero();
        }
        ULaurentRational::new(self.shift + o.shift, &self.num * &o.num, &self.den * &o.den)
    }
}

impl std::ops::Div for &ULaurentRational {
    type Output = ULaurentRational;
    fn div(self, o: &ULaurentRational) -> ULaurentRational {
        self * &o.recip()
    }
}

/// Rational function `num / den` of an ordinary variable, normalized like
/// [`ULaurentRational`] but without extracting powers of the variable.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunction {
    pub num: Poly,
    pub den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RationalFunction {
                num,
                den: Poly::one(),
            };
        }
        let g = num.gcd(&den);
        let num = num.div_exact(&g).unwrap();
        let den = den.div_exact(&g).unwrap();
        let l = BigRational::from_integer(num.denominator_lcm().lcm(&den.denominator_lcm()));
        let (num, den) = (num.scale(&l), den.scale(&l));
        let mut content = num.numerator_gcd().gcd(&den.numerator_gcd());
        if den.leading().unwrap().is_negative() {
            content = -content;
        }
        let cr = BigRational::from_integer(content).recip();
        RationalFunction {
            num: num.scale(&cr),
            den: den.scale(&cr),
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

/// Writes a Laurent polynomial invariant under `x -> 1/x`, given by its
/// coefficients `c[j]` of `x^(j - m)` for `j = 0..=2m`, as a polynomial in
/// `s = x + 1 + 1/x`. Returns `None` if the input is not symmetric.
pub fn symmetric_to_s_basis(c: &[BigRational]) -> Option<Poly> {
    let len = c.len();
    if len % 2 == 0 {
        return None;
    }
    let m = len / 2;
    if (0..len).any(|j| c[j] != c[len - 1 - j]) {
        return None;
    }
    let mut rest: Vec<BigRational> = c.to_vec();
    let mut out = vec![BigRational::zero(); m + 1];
    // s^k expanded is x^-k (x^2 + x + 1)^k
    let base = Poly::from_ints(&[1, 1, 1]);
    for k in (0..=m).rev() {
        let top = rest[m + k].clone();
        if top.is_zero() {
            continue;
        }
        out[k] = top.clone();
        let e = base.pow(k as u32);
        for (i, coef) in e.coeffs().iter().enumerate() {
            // coefficient of x^(i - k) sits at index m + i - k
            rest[m + i - k] -= &top * coef;
        }
    }
    if rest.iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some(Poly::from_coeffs(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    #[test]
    fn arithmetic() {
        let a = p(&[1, 1]);
        let b = p(&[-1, 1]);
        assert_eq!(&a * &b, p(&[-1, 0, 1]));
        let (q, r) = p(&[-1, 0, 1]).div_rem(&a);
        assert_eq!((q, r), (b.clone(), Poly::zero()));
        assert_eq!(p(&[-1, 0, 1]).gcd(&p(&[1, 2, 1])), p(&[1, 1]));
        assert_eq!(a.pow(3), p(&[1, 3, 3, 1]));
    }

    #[test]
    fn cyclotomics() {
        assert_eq!(Poly::cyclotomic(1), p(&[-1, 1]));
        assert_eq!(Poly::cyclotomic(2), p(&[1, 1]));
        assert_eq!(Poly::cyclotomic(3), p(&[1, 1, 1]));
        assert_eq!(Poly::cyclotomic(6), p(&[1, -1, 1]));
        assert_eq!(Poly::cyclotomic(12), p(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn laurent_normal_form() {
        let x = ULaurentRational::x();
        // x/(x^2 - x) = 1/(x - 1) = -1/(1 - x)
        let a = ULaurentRational::new(1, Poly::one(), p(&[0, -1, 1]));
        assert_eq!(a, ULaurentRational::new(0, Poly::one(), p(&[-1, 1])));
        assert_eq!(a.denominator(), &p(&[-1, 1]));
        let sum = &x + &x.recip();
        assert!(sum.is_symmetric());
        assert!(!x.is_symmetric());
        let s = &(&x + &ULaurentRational::one()) + &x.recip();
        assert!(s.is_symmetric());
        assert_eq!(&(&s - &x) - &x.recip(), ULaurentRational::one());
    }

    #[test]
    fn t_coordinates() {
        let x = ULaurentRational::x();
        let one = ULaurentRational::one();
        let s = &(&x + &one) + &x.recip();
        // s = 1/t
        let r = s.to_t_rational().unwrap();
        assert_eq!(r, RationalFunction::new(Poly::one(), p(&[0, 1])));
        // x/(1-x)^2 = 1/(s - 3) = t/(1 - 3t)
        let y = ULaurentRational::new(1, Poly::one(), p(&[1, -2, 1]));
        let r = y.to_t_rational().unwrap();
        assert_eq!(r, RationalFunction::new(p(&[0, 1]), p(&[1, -3])));
        assert!(x.to_t_rational().is_none());
    }

    #[test]
    fn symmetric_basis() {
        // x + 1 + 1/x = s
        let c: Vec<BigRational> = [1, 1, 1].iter().map(|&v| rat(v)).collect();
        assert_eq!(symmetric_to_s_basis(&c), Some(p(&[0, 1])));
        // x^2 + 1/x^2 = (x + 1/x)^2 - 2 = (s - 1)^2 - 2
        let c: Vec<BigRational> = [1, 0, 0, 0, 1].iter().map(|&v| rat(v)).collect();
        assert_eq!(symmetric_to_s_basis(&c), Some(p(&[-1, -2, 1])));
        let c: Vec<BigRational> = [1, 0, 2].iter().map(|&v| rat(v)).collect();
        assert_eq!(symmetric_to_s_basis(&c), None);
    }
}
