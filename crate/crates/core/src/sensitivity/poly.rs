use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use crate::arith::Rational;

/// Sparse multivariate polynomial with exact rational coefficients.
/// Monomials are exponent vectors of length `nvars`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u16>, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Poly::zero(nvars);
        p.terms.insert(e, Rational::one());
        p
    }

    /// `Σ coeffs[i]·v_i + constant`.
    pub fn linear(coeffs: &[Rational], constant: Rational) -> Self {
        let nvars = coeffs.len();
        let mut p = Poly::constant(nvars, constant);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0; nvars];
                e[i] = 1;
                p.terms.insert(e, c.clone());
            }
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|e| e.iter().map(|&d| d as usize).sum()).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u16], &Rational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coefficient(&self, exponents: &[u16]) -> Rational {
        self.terms.get(exponents).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect() }
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars, "point dimension");
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut v = c.clone();
                for (x, &d) in point.iter().zip(e) {
                    if d > 0 {
                        v *= x.pow(d as u32);
                    }
                }
                v
            })
            .sum()
    }

    /// Scalar multiple whose first monomial (in exponent order) has
    /// coefficient 1. Polynomials equal up to a nonzero factor normalize alike.
    pub fn normalized(&self) -> Self {
        match self.terms.values().next() {
            Some(lead) => self.scale(&lead.recip()),
            None => self.clone(),
        }
    }

    /// Coefficients (constant first) of `t ↦ p(origin + t·direction)`.
    pub fn on_line(&self, origin: &[Rational], direction: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero()];
        for (e, c) in &self.terms {
            let mut term = vec![c.clone()];
            for (k, &d) in e.iter().enumerate() {
                let factor = [origin[k].clone(), direction[k].clone()];
                for _ in 0..d {
                    term = univariate_mul(&term, &factor);
                }
            }
            if out.len() < term.len() {
                out.resize(term.len(), Rational::zero());
            }
            for (o, t) in out.iter_mut().zip(term) {
                *o += t;
            }
        }
        while out.len() > 1 && out.last().is_some_and(Rational::is_zero) {
            out.pop();
        }
        out
    }

    /// Text form with the given variable names, e.g. `a1^2=1 a1*b=-1/2 1=3`.
    pub fn display_with(&self, names: &[String]) -> String {
        let mut s = String::new();
        for (e, c) in &self.terms {
            if !s.is_empty() {
                s.push(' ');
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &d)| d > 0)
                .map(|(i, &d)| if d == 1 { names[i].clone() } else { format!("{}^{}", names[i], d) })
                .collect();
            let mono = if mono.is_empty() { "1".to_string() } else { mono.join("*") };
            write!(s, "{mono}={c}").unwrap();
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }
}

pub(crate) fn univariate_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

pub(crate) fn univariate_eval(p: &[Rational], t: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * t + c)
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            let v = terms.remove(e).unwrap_or_else(Rational::zero) + c;
            if !v.is_zero() {
                terms.insert(e.clone(), v);
            }
        }
        Poly { nvars: self.nvars, terms }
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut terms: BTreeMap<Vec<u16>, Rational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Vec<u16> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let v = terms.remove(&e).unwrap_or_else(Rational::zero) + ca * cb;
                if !v.is_zero() {
                    terms.insert(e, v);
                }
            }
        }
        Poly { nvars: self.nvars, terms }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use proptest::prelude::*;

    fn names() -> Vec<String> {
        vec!["a1".into(), "a2".into(), "b".into()]
    }

    #[test]
    fn arithmetic_and_display() {
        let a1 = Poly::var(3, 0);
        let a2 = Poly::var(3, 1);
        let b = Poly::var(3, 2);
        let p = &(&a1 - &a2) * &(&(&a1 + &a2) - &b);
        assert_eq!(p.degree(), 2);
        assert_eq!(p.eval(&[rat(2, 1), rat(1, 1), rat(1, 1)]), Rational::from(2));
        assert_eq!(p.display_with(&names()), "a2*b=1 a2^2=-1 a1*b=-1 a1^2=1");
        assert!((&p - &p).is_zero());
        assert_eq!(Poly::zero(3).display_with(&names()), "0");
        assert_eq!(p.scale(&rat(-3, 1)).normalized(), p.normalized());
    }

    #[test]
    fn restriction_to_line() {
        // (a1 - 1)(a2 + 2) along a1 = t, a2 = 2t
        let p = &Poly::linear(&[rat(1, 1), rat(0, 1)], rat(-1, 1)) * &Poly::linear(&[rat(0, 1), rat(1, 1)], rat(2, 1));
        let coeffs = p.on_line(&[rat(0, 1), rat(0, 1)], &[rat(1, 1), rat(2, 1)]);
        assert_eq!(coeffs, vec![rat(-2, 1), rat(0, 1), rat(2, 1)]);
    }

    proptest! {
        #[test]
        fn eval_is_a_ring_map(a in prop::collection::vec(-5i64..5, 3), b in prop::collection::vec(-5i64..5, 3), x in prop::collection::vec(-4i64..4, 2)) {
            let p = Poly::linear(&[Rational::from(a[0]), Rational::from(a[1])], Rational::from(a[2]));
            let q = Poly::linear(&[Rational::from(b[0]), Rational::from(b[1])], Rational::from(b[2]));
            let pt: Vec<Rational> = x.iter().map(|&v| Rational::from(v)).collect();
            prop_assert_eq!((&p * &q).eval(&pt), p.eval(&pt) * q.eval(&pt));
            prop_assert_eq!((&p - &q).eval(&pt), p.eval(&pt) - q.eval(&pt));
            let line = (&p * &q).on_line(&pt, &[Rational::one(), Rational::from(-1)]);
            let t = Rational::from(3);
            let moved = vec![&pt[0] + &t, &pt[1] - &t];
            prop_assert_eq!(univariate_eval(&line, &t), (&p * &q).eval(&moved));
        }
    }
}
