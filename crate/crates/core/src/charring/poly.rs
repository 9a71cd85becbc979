use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::lattice::{IntMatrix, LatticeVec};
use crate::ring::RingElem;

/// An element of `k[Λ]`: a finite sum of `c_λ e^λ` with nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    field: FieldSpec,
    dim: usize,
    terms: BTreeMap<LatticeVec, Scalar>,
}

impl LaurentPoly {
    pub fn zero(field: FieldSpec, dim: usize) -> Self {
        LaurentPoly {
            field,
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: FieldSpec, dim: usize) -> Self {
        Self::monomial(field, LatticeVec::zero(dim))
    }

    pub fn constant(c: Scalar, dim: usize) -> Self {
        Self::term(LatticeVec::zero(dim), c)
    }

    /// `e^λ`.
    pub fn monomial(field: FieldSpec, exp: impl Into<LatticeVec>) -> Self {
        Self::term(exp.into(), field.one())
    }

    /// `c e^λ`.
    pub fn term(exp: LatticeVec, c: Scalar) -> Self {
        let mut p = Self::zero(c.field(), exp.dim());
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    /// Sums repeated exponents and drops zeros.
    pub fn from_terms(
        field: FieldSpec,
        dim: usize,
        terms: impl IntoIterator<Item = (LatticeVec, Scalar)>,
    ) -> Self {
        let mut p = Self::zero(field, dim);
        for (e, c) in terms {
            p.add_term(e, &c);
        }
        p
    }

    /// Integer coefficients, for tests and examples: `[(exp, coeff), ...]`.
    pub fn from_int_terms(field: FieldSpec, terms: &[(&[i64], i64)]) -> Self {
        let dim = terms.first().map_or(0, |(e, _)| e.len());
        Self::from_terms(
            field,
            dim,
            terms
                .iter()
                .map(|(e, c)| (LatticeVec::from_slice(e), field.from_int(*c))),
        )
    }

    fn add_term(&mut self, e: LatticeVec, c: &Scalar) {
        debug_assert_eq!(e.dim(), self.dim);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                let s = &*v + c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing lexicographic exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&LatticeVec, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &[i64]) -> Scalar {
        self.terms
            .get(&LatticeVec::from_slice(exp))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&vec![0; self.dim])
    }

    /// Largest absolute exponent coordinate (0 for the zero polynomial).
    pub fn support_radius(&self) -> i64 {
        self.terms.keys().map(LatticeVec::radius).max().unwrap_or(0)
    }

    /// `Some((λ, c))` when this is a single term `c e^λ`, i.e. a unit of `R`.
    pub fn as_monomial(&self) -> Option<(&LatticeVec, &Scalar)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn is_unit(&self) -> bool {
        self.as_monomial().is_some()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.field, self.dim);
        }
        LaurentPoly {
            field: self.field,
            dim: self.dim,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// `e^λ · f`.
    pub fn shift(&self, lambda: &[i64]) -> Self {
        LaurentPoly {
            field: self.field,
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(e, v)| {
                    (
                        e.iter().zip(lambda).map(|(a, b)| a + b).collect(),
                        v.clone(),
                    )
                })
                .collect(),
        }
    }

    /// `e^λ ↦ e^{mλ}` for an integer matrix `m` acting on exponents.
    pub fn act(&self, m: &IntMatrix) -> Self {
        let mut out = Self::zero(self.field, m.rows());
        for (e, c) in &self.terms {
            out.add_term(m.apply(e), c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.field, self.dim);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Value at the torus point sending the `i`-th basis vector to `chi[i]`.
    pub fn evaluate(&self, chi: &[Scalar]) -> Result<Scalar> {
        if chi.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, lattice has rank {}",
                chi.len(),
                self.dim
            )));
        }
        let mut acc = self.field.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in chi.iter().zip(e.iter()) {
                let p = x.pow(k).ok_or_else(|| {
                    Error::VanishingDenominator("zero coordinate with negative exponent".into())
                })?;
                t = &t * &p;
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Exact quotient `self / g`, or `None` if `g` does not divide `self` in `k[Λ]`.
    pub fn div_exact(&self, g: &LaurentPoly) -> Option<LaurentPoly> {
        if g.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        if let Some((e, c)) = g.as_monomial() {
            let inv = c.inv()?;
            let neg: Vec<i64> = e.iter().map(|x| -x).collect();
            return Some(self.shift(&neg).scale(&inv));
        }
        // Any quotient is confined to this coordinate box, which bounds the loop.
        let (fmin, fmax) = self.bounds();
        let (gmin, gmax) = g.bounds();
        let lo: Vec<i64> = fmin.iter().zip(&gmin).map(|(a, b)| a - b).collect();
        let hi: Vec<i64> = fmax.iter().zip(&gmax).map(|(a, b)| a - b).collect();
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return None;
        }
        let (glead, gc) = g.terms.iter().next_back().expect("nonzero");
        let ginv = gc.inv()?;
        let mut r = self.clone();
        let mut q = LaurentPoly::zero(self.field, self.dim);
        while let Some((rlead, rc)) = r.terms.iter().next_back() {
            let e: LatticeVec = rlead.iter().zip(glead.iter()).map(|(a, b)| a - b).collect();
            if e.iter()
                .zip(lo.iter().zip(&hi))
                .any(|(x, (l, h))| x < l || x > h)
            {
                return None;
            }
            let c = rc * &ginv;
            for (ge, gv) in &g.terms {
                let ex: LatticeVec = ge.iter().zip(e.iter()).map(|(a, b)| a + b).collect();
                r.add_term(ex, &-&(gv * &c));
            }
            q.add_term(e, &c);
        }
        Some(q)
    }

    /// Per-coordinate minimum and maximum exponent.
    fn bounds(&self) -> (Vec<i64>, Vec<i64>) {
        let mut lo = vec![i64::MAX; self.dim];
        let mut hi = vec![i64::MIN; self.dim];
        for e in self.terms.keys() {
            for i in 0..self.dim {
                lo[i] = lo[i].min(e[i]);
                hi[i] = hi[i].max(e[i]);
            }
        }
        (lo, hi)
    }

    /// Map from `"e1,e2,…"` to the coefficient written as a string.
    pub fn to_serial(&self) -> BTreeMap<String, String> {
        self.terms
            .iter()
            .map(|(e, c)| {
                let key = e.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
                (key, c.to_string())
            })
            .collect()
    }

    pub fn from_serial(
        field: FieldSpec,
        dim: usize,
        map: &BTreeMap<String, String>,
    ) -> Result<Self> {
        let mut terms = Vec::with_capacity(map.len());
        for (k, v) in map {
            let exp: Vec<i64> = if k.trim().is_empty() {
                vec![]
            } else {
                k.split(',')
                    .map(|x| x.trim().parse::<i64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| Error::Parse(format!("exponent {k:?}: {e}")))?
            };
            if exp.len() != dim {
                return Err(Error::Parse(format!("exponent {k:?} has wrong rank")));
            }
            terms.push((LatticeVec::from(exp), field.parse_scalar(v)?));
        }
        Ok(Self::from_terms(field, dim, terms))
    }

    fn check_compatible(&self, other: &LaurentPoly) {
        assert!(
            self.field == other.field && self.dim == other.dim,
            "mixed contexts: {}[rank {}] vs {}[rank {}]",
            self.field,
            self.dim,
            other.field,
            other.dim
        );
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LaurentPoly {
    /// Highest exponents first, e.g. `e^(2) - 1 + 3e^(-1)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if e.is_zero() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}")?;
                }
                write!(f, "e^{e}")?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.check_compatible(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c);
        }
        out
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.check_compatible(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), &-c);
        }
        out
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.check_compatible(rhs);
        let mut out = LaurentPoly::zero(self.field, self.dim);
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a + b, &(x * y));
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            field: self.field,
            dim: self.dim,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl RingElem for LaurentPoly {
    fn zero_like(&self) -> Self {
        LaurentPoly::zero(self.field, self.dim)
    }

    fn one_like(&self) -> Self {
        LaurentPoly::one(self.field, self.dim)
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn plus(&self, other: &Self) -> Self {
        self + other
    }

    fn minus(&self, other: &Self) -> Self {
        self - other
    }

    fn times(&self, other: &Self) -> Self {
        self * other
    }

    fn negated(&self) -> Self {
        -self
    }

    fn div_exact(&self, other: &Self) -> Option<Self> {
        LaurentPoly::div_exact(self, other)
    }

    fn is_one(&self) -> bool {
        matches!(self.as_monomial(), Some((e, c)) if e.is_zero() && c.is_one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Q: FieldSpec = FieldSpec::Rational;

    fn p(terms: &[(&[i64], i64)]) -> LaurentPoly {
        LaurentPoly::from_int_terms(Q, terms)
    }

    #[test]
    fn monomials_multiply_by_adding_exponents() {
        let a = LaurentPoly::monomial(Q, [1, -2]);
        let b = LaurentPoly::monomial(Q, [3, 5]);
        assert_eq!(&a * &b, LaurentPoly::monomial(Q, [4, 3]));
    }

    #[test]
    fn difference_of_squares() {
        let a = p(&[(&[1], 1), (&[0], -1)]);
        let b = p(&[(&[1], 1), (&[0], 1)]);
        assert_eq!(&a * &b, p(&[(&[2], 1), (&[0], -1)]));
    }

    #[test]
    fn exact_division_detects_non_divisors() {
        let f = p(&[(&[2], 1), (&[-2], -1)]);
        let g = p(&[(&[1], 1), (&[-1], -1)]);
        assert_eq!(f.div_exact(&g).unwrap(), p(&[(&[1], 1), (&[-1], 1)]));
        let h = p(&[(&[1], 1), (&[0], 2)]);
        assert!(g.div_exact(&h).is_none());
        assert!(f.div_exact(&LaurentPoly::zero(Q, 1)).is_none());
    }

    #[test]
    fn evaluation() {
        let f = p(&[(&[1], 1), (&[-1], 1)]);
        let chi = [Q.from_int(2)];
        assert_eq!(f.evaluate(&chi).unwrap(), Q.from_ratio(5, 2).unwrap());
        assert!(f.evaluate(&[Q.zero()]).is_err());
    }

    #[test]
    fn display_and_serial_roundtrip() {
        let f = p(&[(&[2, 0], 1), (&[0, 0], -1), (&[-1, 1], 3)]);
        assert_eq!(f.to_string(), "e^(2,0) - 1 + 3e^(-1,1)");
        let back = LaurentPoly::from_serial(Q, 2, &f.to_serial()).unwrap();
        assert_eq!(back, f);
    }

    fn arb_poly(dim: usize, radius: i64) -> impl Strategy<Value = LaurentPoly> {
        proptest::collection::vec(
            (proptest::collection::vec(-radius..=radius, dim), -3i64..=3),
            0..5,
        )
        .prop_map(move |ts| {
            LaurentPoly::from_terms(
                Q,
                dim,
                ts.into_iter()
                    .map(|(e, c)| (LatticeVec::from(e), Q.from_int(c))),
            )
        })
    }

    proptest! {
        #[test]
        fn product_divides_back(f in arb_poly(2, 2), g in arb_poly(2, 2)) {
            prop_assume!(!g.is_zero());
            let h = &f * &g;
            prop_assert_eq!(h.div_exact(&g), Some(f));
        }

        #[test]
        fn ring_axioms(f in arb_poly(2, 2), g in arb_poly(2, 2), h in arb_poly(2, 2)) {
            prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
            prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
            prop_assert!((&f - &f).is_zero());
        }

        #[test]
        fn evaluation_is_a_ring_map(f in arb_poly(2, 2), g in arb_poly(2, 2)) {
            let chi = [Q.from_int(3), Q.from_ratio(-1, 2).unwrap()];
            let fv = f.evaluate(&chi).unwrap();
            let gv = g.evaluate(&chi).unwrap();
            prop_assert_eq!((&f * &g).evaluate(&chi).unwrap(), &fv * &gv);
            prop_assert_eq!((&f + &g).evaluate(&chi).unwrap(), &fv + &gv);
        }
    }
}
