use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::lattice::LatticeVec;
use crate::ring::RingElem;
use crate::rootdata::RootDatum;

use super::LaurentPoly;

/// The walls available as denominators: the positive coroots of a datum, with at most one
/// of them (the allowed wall) excluded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallSet {
    coroots: Vec<LatticeVec>,
    allowed: Option<usize>,
}

impl WallSet {
    pub fn new(datum: &RootDatum, allowed: Option<usize>) -> Result<Arc<Self>> {
        let coroots: Vec<LatticeVec> = datum
            .positive_coroots()
            .iter()
            .map(|c| c.coroot.clone())
            .collect();
        if let Some(a) = allowed {
            if a >= coroots.len() {
                return Err(Error::InvalidDatum(format!(
                    "no positive coroot with index {a}"
                )));
            }
        }
        Ok(Arc::new(WallSet { coroots, allowed }))
    }

    pub fn coroots(&self) -> &[LatticeVec] {
        &self.coroots
    }

    pub fn allowed(&self) -> Option<usize> {
        self.allowed
    }

    /// Indices of the walls that may appear in denominators.
    pub fn inverted(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.coroots.len()).filter(move |&i| Some(i) != self.allowed)
    }

    /// `e^{β_i} − 1`.
    pub fn factor(&self, i: usize, like: &LaurentPoly) -> LaurentPoly {
        let f = like.field();
        &LaurentPoly::monomial(f, self.coroots[i].clone()) - &LaurentPoly::one(f, like.dim())
    }
}

/// `numerator / ∏ (e^{β'} − 1)^{m}` in the localization of `R` away from every wall except
/// the allowed one. Denominators stay factored.
#[derive(Clone)]
pub struct WallFraction {
    num: LaurentPoly,
    den: BTreeMap<usize, u32>,
    walls: Arc<WallSet>,
}

impl WallFraction {
    pub fn from_poly(num: LaurentPoly, walls: &Arc<WallSet>) -> Self {
        WallFraction {
            num,
            den: BTreeMap::new(),
            walls: walls.clone(),
        }
    }

    pub fn new(num: LaurentPoly, den: BTreeMap<usize, u32>, walls: &Arc<WallSet>) -> Result<Self> {
        for (&i, _) in den.iter().filter(|(_, &m)| m > 0) {
            if Some(i) == walls.allowed {
                return Err(Error::AllowedWallInDenominator(i));
            }
            if i >= walls.coroots.len() {
                return Err(Error::InvalidDatum(format!(
                    "no positive coroot with index {i}"
                )));
            }
        }
        let den = den.into_iter().filter(|&(_, m)| m > 0).collect();
        let mut f = WallFraction {
            num,
            den,
            walls: walls.clone(),
        };
        f.reduce();
        Ok(f)
    }

    /// `1 / (e^{β_i} − 1)`.
    pub fn wall_inverse(i: usize, like: &LaurentPoly, walls: &Arc<WallSet>) -> Result<Self> {
        Self::new(like.one_like(), BTreeMap::from([(i, 1)]), walls)
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator_walls(&self) -> &BTreeMap<usize, u32> {
        &self.den
    }

    pub fn walls(&self) -> &Arc<WallSet> {
        &self.walls
    }

    pub fn denominator(&self) -> LaurentPoly {
        self.den.iter().fold(self.num.one_like(), |acc, (&i, &m)| {
            &acc * &self.walls.factor(i, &self.num).pow(m)
        })
    }

    /// The polynomial this fraction equals, if any.
    pub fn as_poly(&self) -> Option<LaurentPoly> {
        if self.den.is_empty() {
            Some(self.num.clone())
        } else {
            self.num.div_exact(&self.denominator())
        }
    }

    /// Cancels wall factors that divide the numerator.
    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let keys: Vec<usize> = self.den.keys().copied().collect();
        for i in keys {
            let f = self.walls.factor(i, &self.num);
            while let Some(m) = self.den.get(&i).copied().filter(|&m| m > 0) {
                match self.num.div_exact(&f) {
                    Some(q) => {
                        self.num = q;
                        if m == 1 {
                            self.den.remove(&i);
                        } else {
                            self.den.insert(i, m - 1);
                        }
                    }
                    None => break,
                }
            }
        }
    }

    fn with(&self, num: LaurentPoly, den: BTreeMap<usize, u32>) -> Self {
        let mut f = WallFraction {
            num,
            den,
            walls: self.walls.clone(),
        };
        f.reduce();
        f
    }

    fn check_compatible(&self, other: &WallFraction) {
        assert!(
            Arc::ptr_eq(&self.walls, &other.walls) || self.walls == other.walls,
            "wall fractions from different localizations"
        );
    }

    /// Expands both over the least common wall denominator.
    fn common(&self, other: &WallFraction) -> (LaurentPoly, LaurentPoly, BTreeMap<usize, u32>) {
        self.check_compatible(other);
        let mut den = self.den.clone();
        for (&i, &m) in &other.den {
            let e = den.entry(i).or_insert(0);
            *e = (*e).max(m);
        }
        let lift = |f: &WallFraction| {
            den.iter().fold(f.num.clone(), |acc, (&i, &m)| {
                let have = f.den.get(&i).copied().unwrap_or(0);
                &acc * &self.walls.factor(i, &f.num).pow(m - have)
            })
        };
        (lift(self), lift(other), den)
    }

    pub fn evaluate(&self, chi: &[Scalar]) -> Result<Scalar> {
        let n = self.num.evaluate(chi)?;
        let d = self.denominator().evaluate(chi)?;
        let inv = d.inv().ok_or_else(|| {
            Error::VanishingDenominator(format!(
                "a wall in {:?} vanishes at the point",
                self.den.keys().collect::<Vec<_>>()
            ))
        })?;
        Ok(&n * &inv)
    }
}

impl PartialEq for WallFraction {
    fn eq(&self, other: &Self) -> bool {
        let (a, b, _) = self.common(other);
        a == b
    }
}

impl fmt::Debug for WallFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for WallFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({}) / ", self.num)?;
        for (k, (&i, &m)) in self.den.iter().enumerate() {
            if k > 0 {
                write!(f, "·")?;
            }
            write!(f, "(e^{} - 1)", self.walls.coroots[i])?;
            if m > 1 {
                write!(f, "^{m}")?;
            }
        }
        Ok(())
    }
}

impl RingElem for WallFraction {
    fn zero_like(&self) -> Self {
        self.with(self.num.zero_like(), BTreeMap::new())
    }

    fn one_like(&self) -> Self {
        self.with(self.num.one_like(), BTreeMap::new())
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn plus(&self, other: &Self) -> Self {
        let (a, b, den) = self.common(other);
        self.with(&a + &b, den)
    }

    fn minus(&self, other: &Self) -> Self {
        let (a, b, den) = self.common(other);
        self.with(&a - &b, den)
    }

    fn times(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut den = self.den.clone();
        for (&i, &m) in &other.den {
            *den.entry(i).or_insert(0) += m;
        }
        self.with(&self.num * &other.num, den)
    }

    fn negated(&self) -> Self {
        WallFraction {
            num: -&self.num,
            den: self.den.clone(),
            walls: self.walls.clone(),
        }
    }

    /// Division inside the localized ring: wall factors of the divisor move into the
    /// denominator, and the remaining cofactor must divide the numerator after clearing
    /// at most a few further wall factors.
    fn div_exact(&self, other: &Self) -> Option<Self> {
        self.check_compatible(other);
        if other.num.is_zero() {
            return None;
        }
        // self / other = (a · D_other) / (b · D_self)
        let mut numer = other.den.iter().fold(self.num.clone(), |acc, (&i, &m)| {
            &acc * &self.walls.factor(i, &acc).pow(m)
        });
        let mut den = self.den.clone();
        let mut b = other.num.clone();
        let inverted: Vec<usize> = self.walls.inverted().collect();
        for &i in &inverted {
            let f = self.walls.factor(i, &b);
            while let Some(q) = b.div_exact(&f) {
                b = q;
                *den.entry(i).or_insert(0) += 1;
            }
        }
        for _ in 0..=4 {
            if let Some(q) = numer.div_exact(&b) {
                return Some(self.with(q, den));
            }
            for &i in &inverted {
                numer = &numer * &self.walls.factor(i, &numer);
                *den.entry(i).or_insert(0) += 1;
            }
        }
        None
    }
}
