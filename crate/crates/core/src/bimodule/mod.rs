//! `R`-bimodules that are free as right `R`-modules, presented by the matrices of left
//! multiplication by the lattice generators `e^{λ_i}`.
//!
//! An element is a column vector of coordinates in `R`; the right action scales
//! coordinates, and `e^λ` acts on the left by the matrix `L(λ)`. Bimodule maps are then
//! exactly the matrices over `R` that intertwine the left actions.
//!
//! The graph bimodule `R_w` has `L(λ) = e^{w⁻¹λ}`. With this convention the tensor product
//! satisfies `R_v ⊗_R R_w = R_{vw}`, and `Γ_w ∩ Γ_v` is the fixed locus of `w⁻¹v`.

mod hom;
mod point;
mod serial;

use std::collections::HashMap;
use std::fmt;

pub use hom::{
    fraction_rank, hom_bounded, is_intertwiner, span_membership, BimoduleMap, SpanResult,
    SpanSolver,
};
pub use point::{
    character_value, generic_decompose, graph_tuple as point_tuple, joint_eigen, Decomposition,
    EigenData, SeparatingPoint,
};
pub use serial::BimoduleRecord;

use crate::charring::{rs_decompose, LaurentPoly, WallFraction, WallSet};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::lattice::LatticeVec;
use crate::matrix::Matrix;
use crate::ring::RingElem;
use crate::rootdata::{RootDatum, WeylIndex};

/// Entries of left-action matrices: plain Laurent polynomials or wall fractions.
pub trait Entry: RingElem + fmt::Display {
    fn evaluate_at(&self, chi: &[Scalar]) -> Result<Scalar>;
    /// The polynomial `p` viewed in the same ring as `self`.
    fn lift(&self, p: &LaurentPoly) -> Self;
    fn ring_tag(&self) -> RingTag;
}

impl Entry for LaurentPoly {
    fn evaluate_at(&self, chi: &[Scalar]) -> Result<Scalar> {
        self.evaluate(chi)
    }

    fn lift(&self, p: &LaurentPoly) -> Self {
        p.clone()
    }

    fn ring_tag(&self) -> RingTag {
        RingTag::Plain
    }
}

impl Entry for WallFraction {
    fn evaluate_at(&self, chi: &[Scalar]) -> Result<Scalar> {
        self.evaluate(chi)
    }

    fn lift(&self, p: &LaurentPoly) -> Self {
        WallFraction::from_poly(p.clone(), self.walls())
    }

    fn ring_tag(&self) -> RingTag {
        RingTag::Localized(self.walls().allowed())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingTag {
    Plain,
    /// Localized away from every wall except the given positive coroot (if any).
    Localized(Option<usize>),
}

impl fmt::Display for RingTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingTag::Plain => write!(f, "plain"),
            RingTag::Localized(None) => write!(f, "localized"),
            RingTag::Localized(Some(b)) => write!(f, "localized({b})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixBimodule<E = LaurentPoly> {
    datum: RootDatum,
    field: FieldSpec,
    rank: usize,
    left: Vec<Matrix<E>>,
    left_inv: Vec<Matrix<E>>,
}

impl<E: Entry> MatrixBimodule<E> {
    /// Assembles a bimodule and checks that the actions commute and are inverted correctly.
    pub fn from_actions(
        datum: &RootDatum,
        field: FieldSpec,
        left: Vec<Matrix<E>>,
        left_inv: Vec<Matrix<E>>,
    ) -> Result<Self> {
        let n = datum.lattice_rank();
        if left.len() != n || left_inv.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "need {n} action matrices and inverses"
            )));
        }
        let rank = left[0].rows();
        if left
            .iter()
            .chain(&left_inv)
            .any(|m| m.rows() != rank || m.cols() != rank)
        {
            return Err(Error::DimensionMismatch(
                "action matrices must be square of equal size".into(),
            ));
        }
        let m = MatrixBimodule {
            datum: datum.clone(),
            field,
            rank,
            left,
            left_inv,
        };
        m.check_invariants()?;
        Ok(m)
    }

    /// Like [`Self::from_actions`], computing the inverses.
    pub fn from_left_actions(
        datum: &RootDatum,
        field: FieldSpec,
        left: Vec<Matrix<E>>,
    ) -> Result<Self> {
        let left_inv = left
            .iter()
            .enumerate()
            .map(|(i, m)| {
                m.inverse().ok_or_else(|| {
                    Error::InvariantViolation(format!("L_{i} has no inverse over the ring"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_actions(datum, field, left, left_inv)
    }

    pub fn check_invariants(&self) -> Result<()> {
        for i in 0..self.left.len() {
            if !self.left[i].mul(&self.left_inv[i]).is_identity() {
                return Err(Error::InvariantViolation(format!("L_{i} · L_{i}⁻¹ ≠ 1")));
            }
            for j in i + 1..self.left.len() {
                if self.left[i].mul(&self.left[j]) != self.left[j].mul(&self.left[i]) {
                    return Err(Error::InvariantViolation(format!(
                        "L_{i} and L_{j} do not commute"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ring_tag(&self) -> RingTag {
        self.left[0][(0, 0)].ring_tag()
    }

    /// `L_i`, left multiplication by the `i`-th lattice basis vector.
    pub fn left_action(&self, i: usize) -> &Matrix<E> {
        &self.left[i]
    }

    pub fn left_actions(&self) -> &[Matrix<E>] {
        &self.left
    }

    pub fn left_action_inverse(&self, i: usize) -> &Matrix<E> {
        &self.left_inv[i]
    }

    fn like(&self) -> &E {
        &self.left[0][(0, 0)]
    }

    pub fn identity(&self) -> Matrix<E> {
        Matrix::identity(self.rank, self.like())
    }

    /// `L(e^λ)`.
    pub fn monomial_action(&self, lambda: &[i64]) -> Matrix<E> {
        ActionCache::new(self).monomial(lambda)
    }

    /// `L(f) = Σ c_λ ∏ L_i^{λ_i}`.
    pub fn extend_left_action(&self, f: &LaurentPoly) -> Matrix<E> {
        ActionCache::new(self).poly(f)
    }

    /// Scalar matrices `L_i(χ)` of the fiber at a torus point.
    pub fn fiber(&self, chi: &[Scalar]) -> Result<Vec<Matrix<Scalar>>> {
        self.left
            .iter()
            .map(|m| m.try_map(|e| e.evaluate_at(chi)))
            .collect()
    }

    fn check_same_context<F: Entry>(&self, other: &MatrixBimodule<F>) -> Result<()> {
        if self.datum != other.datum || self.field != other.field {
            return Err(Error::MixedContext(format!(
                "{}/{} vs {}/{}",
                self.datum.name(),
                self.field,
                other.datum.name(),
                other.field
            )));
        }
        Ok(())
    }
}

/// Memoized powers of the action matrices, for expanding many monomials.
pub(crate) struct ActionCache<'a, E> {
    m: &'a MatrixBimodule<E>,
    powers: Vec<[Vec<Matrix<E>>; 2]>,
    monomials: HashMap<LatticeVec, Matrix<E>>,
}

impl<'a, E: Entry> ActionCache<'a, E> {
    pub(crate) fn new(m: &'a MatrixBimodule<E>) -> Self {
        let id = m.identity();
        ActionCache {
            m,
            powers: (0..m.left.len())
                .map(|_| [vec![id.clone()], vec![id.clone()]])
                .collect(),
            monomials: HashMap::new(),
        }
    }

    fn power(&mut self, i: usize, k: i64) -> &Matrix<E> {
        let sign = usize::from(k < 0);
        let k = k.unsigned_abs() as usize;
        let base = if sign == 0 {
            &self.m.left[i]
        } else {
            &self.m.left_inv[i]
        };
        let list = &mut self.powers[i][sign];
        while list.len() <= k {
            let next = list.last().expect("nonempty").mul(base);
            list.push(next);
        }
        &list[k]
    }

    pub(crate) fn monomial(&mut self, lambda: &[i64]) -> Matrix<E> {
        let key = LatticeVec::from_slice(lambda);
        if let Some(m) = self.monomials.get(&key) {
            return m.clone();
        }
        let mut acc: Option<Matrix<E>> = None;
        for (i, &k) in lambda.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let p = self.power(i, k).clone();
            acc = Some(match acc {
                None => p,
                Some(a) => a.mul(&p),
            });
        }
        let out = acc.unwrap_or_else(|| self.m.identity());
        self.monomials.insert(key, out.clone());
        out
    }

    pub(crate) fn poly(&mut self, f: &LaurentPoly) -> Matrix<E> {
        let like = self.m.like().clone();
        let mut acc = Matrix::zeros(self.m.rank, self.m.rank, &like);
        for (e, c) in f.terms() {
            let mon = self.monomial(e);
            let c = like.lift(&LaurentPoly::constant(c.clone(), f.dim()));
            acc = acc.add(&mon.scale(&c));
        }
        acc
    }
}

impl MatrixBimodule<LaurentPoly> {
    /// `R_w`: rank one with `e^λ` acting as `e^{w⁻¹λ}`.
    pub fn graph(datum: &RootDatum, w: WeylIndex, field: FieldSpec) -> Self {
        let n = datum.lattice_rank();
        let winv = datum.inverse(w);
        let mono = |lambda: LatticeVec| {
            Matrix::from_rows(vec![vec![LaurentPoly::monomial(
                field,
                datum.act(winv, &lambda),
            )]])
        };
        let left = (0..n).map(|i| mono(LatticeVec::basis(n, i))).collect();
        let left_inv = (0..n)
            .map(|i| mono(LatticeVec::basis(n, i).scale(-1)))
            .collect();
        MatrixBimodule {
            datum: datum.clone(),
            field,
            rank: 1,
            left,
            left_inv,
        }
    }

    /// `R ⊗_{R^s} M`, with basis `1⊗b_1, …, 1⊗b_n, e^ω⊗b_1, …, e^ω⊗b_n`.
    pub fn induct(&self, s: usize) -> Result<Self> {
        let datum = &self.datum;
        let omega = datum.fundamental_coweight(s)?;
        let n = datum.lattice_rank();
        let mut cache = ActionCache::new(self);
        let mut action = |lambda: &LatticeVec| -> Result<Matrix<LaurentPoly>> {
            // e^λ · (e^{εω} ⊗ m) = 1 ⊗ a_ε m + e^ω ⊗ b_ε m  where e^{λ+εω} = a_ε + e^ω b_ε
            let mut blocks = vec![Vec::new(), Vec::new()];
            for eps in 0..2 {
                let exp = lambda + &omega.scale(eps);
                let (a, b) = rs_decompose(datum, s, &LaurentPoly::monomial(self.field, exp))?;
                blocks[0].push(cache.poly(&a));
                blocks[1].push(cache.poly(&b));
            }
            Ok(Matrix::from_blocks(&blocks))
        };
        let mut left = Vec::with_capacity(n);
        let mut left_inv = Vec::with_capacity(n);
        for i in 0..n {
            let e = LatticeVec::basis(n, i);
            left.push(action(&e)?);
            left_inv.push(action(&e.scale(-1))?);
        }
        MatrixBimodule::from_actions(datum, self.field, left, left_inv)
    }

    /// `R ⊗_{R^{s_1}} R ⊗ … ⊗_{R^{s_r}} R`, built as `R ⊗_{R^{s_1}} (… (R ⊗_{R^{s_r}} R))`.
    pub fn bott_samelson(datum: &RootDatum, word: &[usize], field: FieldSpec) -> Result<Self> {
        datum.require_adjoint()?;
        for &s in word {
            datum.check_simple(s)?;
        }
        let mut m = Self::graph(datum, datum.identity(), field);
        for &s in word.iter().rev() {
            m = m.induct(s)?;
        }
        Ok(m)
    }

    /// `M ⊗_R N`, with basis `b_a ⊗ c_d` at index `a · rank(N) + d`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        self.check_same_context(other)?;
        let mut cache = ActionCache::new(other);
        let mut lift = |m: &Matrix<LaurentPoly>| {
            let blocks: Vec<Vec<Matrix<LaurentPoly>>> = (0..m.rows())
                .map(|a| (0..m.cols()).map(|b| cache.poly(&m[(a, b)])).collect())
                .collect();
            Matrix::from_blocks(&blocks)
        };
        let left = self.left.iter().map(&mut lift).collect();
        let left_inv = self.left_inv.iter().map(&mut lift).collect();
        MatrixBimodule::from_actions(&self.datum, self.field, left, left_inv)
    }

    /// The same bimodule over the localization away from every wall except `allowed`.
    pub fn localize(&self, allowed: Option<usize>) -> Result<MatrixBimodule<WallFraction>> {
        let walls = WallSet::new(&self.datum, allowed)?;
        let conv = |m: &Matrix<LaurentPoly>| m.map(|e| WallFraction::from_poly(e.clone(), &walls));
        Ok(MatrixBimodule {
            datum: self.datum.clone(),
            field: self.field,
            rank: self.rank,
            left: self.left.iter().map(conv).collect(),
            left_inv: self.left_inv.iter().map(conv).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charring::orbit_sum;
    use crate::hecke::subword_char;

    const Q: FieldSpec = FieldSpec::Rational;

    fn m(e: &[i64]) -> LaurentPoly {
        LaurentPoly::monomial(Q, LatticeVec::from_slice(e))
    }

    #[test]
    fn graph_bimodules() {
        let d = RootDatum::preset("PGL2").unwrap();
        assert_eq!(
            MatrixBimodule::graph(&d, 0, Q).left_action(0)[(0, 0)],
            m(&[1])
        );
        assert_eq!(
            MatrixBimodule::graph(&d, 1, Q).left_action(0)[(0, 0)],
            m(&[-1])
        );
    }

    #[test]
    fn pgl2_bs() {
        let d = RootDatum::preset("PGL2").unwrap();
        let bs = MatrixBimodule::bott_samelson(&d, &[0], Q).unwrap();
        let l = bs.left_action(0);
        let c = LaurentPoly::constant(Q.from_int(-1), 1);
        let expect = Matrix::from_rows(vec![
            vec![LaurentPoly::zero(Q, 1), c],
            vec![LaurentPoly::one(Q, 1), &m(&[1]) + &m(&[-1])],
        ]);
        assert_eq!(*l, expect);
        assert!(l.det().unwrap().is_one());
        let inv = orbit_sum(&d, &[1], Q);
        assert_eq!(bs.extend_left_action(&inv), Matrix::scalar(2, &inv));
        assert!(bs.extend_left_action(&LaurentPoly::one(Q, 1)).is_identity());
    }

    #[test]
    fn tensor_of_graphs_is_graph_of_product() {
        for name in ["PGL2", "PGL3", "SL2"] {
            let d = RootDatum::preset(name).unwrap();
            for v in 0..d.order() {
                for w in 0..d.order() {
                    let t = MatrixBimodule::graph(&d, v, Q)
                        .tensor(&MatrixBimodule::graph(&d, w, Q))
                        .unwrap();
                    assert_eq!(t, MatrixBimodule::graph(&d, d.mul(v, w), Q));
                }
            }
        }
    }

    #[test]
    fn bott_samelson_ranks_and_characters() {
        let d = RootDatum::preset("PGL3").unwrap();
        let word = [0, 1, 0];
        let bs = MatrixBimodule::bott_samelson(&d, &word, Q).unwrap();
        assert_eq!(bs.rank(), 8);
        let dec = generic_decompose(&bs).unwrap();
        assert_eq!(dec, subword_char(&d, &word).unwrap().entries());
    }

    #[test]
    fn tensor_with_unit() {
        let d = RootDatum::preset("PGL3").unwrap();
        let bs = MatrixBimodule::bott_samelson(&d, &[0, 1], Q).unwrap();
        let r1 = MatrixBimodule::graph(&d, 0, Q);
        assert_eq!(r1.tensor(&bs).unwrap(), bs);
        assert_eq!(bs.tensor(&r1).unwrap(), bs);
    }

    #[test]
    fn bs_tensor_is_concatenation() {
        let d = RootDatum::preset("PGL3").unwrap();
        let a = MatrixBimodule::bott_samelson(&d, &[0], Q).unwrap();
        let b = MatrixBimodule::bott_samelson(&d, &[1], Q).unwrap();
        let ab = MatrixBimodule::bott_samelson(&d, &[0, 1], Q).unwrap();
        assert_eq!(a.tensor(&b).unwrap(), ab);
    }

    #[test]
    fn invariants_act_centrally() {
        let d = RootDatum::preset("PGL3").unwrap();
        let bs = MatrixBimodule::bott_samelson(&d, &[0, 1, 0], Q).unwrap();
        for lam in [[1, 0], [0, 1], [1, 1], [2, -1]] {
            let f = orbit_sum(&d, &lam, Q);
            assert_eq!(bs.extend_left_action(&f), Matrix::scalar(8, &f));
        }
    }

    #[test]
    fn localized_bimodules_keep_invariants() {
        let d = RootDatum::preset("PGL3").unwrap();
        let bs = MatrixBimodule::bott_samelson(&d, &[0, 1], Q).unwrap();
        let loc = bs.localize(Some(0)).unwrap();
        loc.check_invariants().unwrap();
        assert_eq!(loc.ring_tag(), RingTag::Localized(Some(0)));
        assert_eq!(
            generic_decompose(&loc).unwrap(),
            generic_decompose(&bs).unwrap()
        );
    }

    #[test]
    fn rejects_mixed_contexts() {
        let a = MatrixBimodule::graph(&RootDatum::preset("PGL2").unwrap(), 0, Q);
        let b = MatrixBimodule::graph(&RootDatum::preset("PGL3").unwrap(), 0, Q);
        assert!(matches!(a.tensor(&b), Err(Error::MixedContext(_))));
    }
}
