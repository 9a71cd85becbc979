//! The group ring `R = k[Λ]`, its Weyl action, Demazure operators and wall localizations.

mod fraction;
mod poly;

use std::collections::BTreeSet;

pub use fraction::{WallFraction, WallSet};
pub use poly::LaurentPoly;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::lattice::LatticeVec;
use crate::matrix::Matrix;
use crate::rootdata::{RootDatum, WeylIndex};

/// The coweight `ω_s` with `⟨ω_s, α̌_t⟩ = δ_st`.
pub fn omega(datum: &RootDatum, s: usize) -> Result<LatticeVec> {
    datum.fundamental_coweight(s)
}

/// `w · f`, acting on exponents by `e^λ ↦ e^{wλ}`.
pub fn weyl_act(datum: &RootDatum, w: WeylIndex, f: &LaurentPoly) -> LaurentPoly {
    f.act(&datum.element(w).matrix)
}

/// `D(f) = (f − sf) / (e^ω − e^{sω})`, which always lands in `R^s`.
pub fn demazure(datum: &RootDatum, s: usize, f: &LaurentPoly) -> Result<LaurentPoly> {
    let w = omega(datum, s)?;
    let si = datum.simple(s);
    let field = f.field();
    let denom =
        &LaurentPoly::monomial(field, w.clone()) - &LaurentPoly::monomial(field, datum.act(si, &w));
    let numer = f - &weyl_act(datum, si, f);
    numer.div_exact(&denom).ok_or_else(|| {
        Error::DivisionFailure(format!(
            "Demazure numerator {numer} not divisible by {denom}"
        ))
    })
}

/// `f = a + e^ω b` with `a, b ∈ R^s`; `b = D(f)` and `a = f − e^ω D(f)`.
pub fn rs_decompose(
    datum: &RootDatum,
    s: usize,
    f: &LaurentPoly,
) -> Result<(LaurentPoly, LaurentPoly)> {
    let w = omega(datum, s)?;
    let b = demazure(datum, s, f)?;
    let a = f - &b.shift(&w);
    debug_assert_eq!(&a + &b.shift(&w), *f);
    Ok((a, b))
}

/// Matrix of `R → Hom_{R^s}(R, R^s)`, `x ↦ (y ↦ 1*(xy))`, in the bases `{1, e^ω}` and
/// `{1*, (e^ω)*}`. Column `j` holds the coordinates of the image of the `j`-th basis vector.
pub fn selfadjoint_matrix(
    datum: &RootDatum,
    s: usize,
    field: FieldSpec,
) -> Result<Matrix<LaurentPoly>> {
    let w = omega(datum, s)?;
    let n = datum.lattice_rank();
    let basis = [LaurentPoly::one(field, n), LaurentPoly::monomial(field, w)];
    let mut cols = Vec::with_capacity(2);
    for x in &basis {
        let mut col = Vec::with_capacity(2);
        for y in &basis {
            col.push(rs_decompose(datum, s, &(x * y))?.0);
        }
        cols.push(col);
    }
    Ok(Matrix::from_fn(2, 2, |i, j| cols[j][i].clone()))
}

/// The `W`-orbit of `λ`, sorted and without repetition.
pub fn orbit(datum: &RootDatum, lambda: &[i64]) -> Vec<LatticeVec> {
    let set: BTreeSet<LatticeVec> = (0..datum.order()).map(|w| datum.act(w, lambda)).collect();
    set.into_iter().collect()
}

/// `Σ_{μ ∈ Wλ} e^μ`.
pub fn orbit_sum(datum: &RootDatum, lambda: &[i64], field: FieldSpec) -> LaurentPoly {
    LaurentPoly::from_terms(
        field,
        datum.lattice_rank(),
        orbit(datum, lambda).into_iter().map(|m| (m, field.one())),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingElem;
    use proptest::prelude::*;

    const Q: FieldSpec = FieldSpec::Rational;

    fn pgl2() -> RootDatum {
        RootDatum::preset("PGL2").unwrap()
    }

    fn m(e: &[i64]) -> LaurentPoly {
        LaurentPoly::monomial(Q, LatticeVec::from_slice(e))
    }

    #[test]
    fn weyl_action_examples() {
        let d = pgl2();
        assert_eq!(weyl_act(&d, d.simple(0), &m(&[1])), m(&[-1]));
        let d3 = RootDatum::preset("PGL3").unwrap();
        assert_eq!(weyl_act(&d3, d3.simple(0), &m(&[0, 1])), m(&[0, 1]));
        let one = LaurentPoly::one(Q, 2);
        assert_eq!(weyl_act(&d3, 5, &one), one);
    }

    #[test]
    fn demazure_examples() {
        let d = pgl2();
        assert!(demazure(&d, 0, &LaurentPoly::one(Q, 1)).unwrap().is_zero());
        assert!(demazure(&d, 0, &m(&[1])).unwrap().is_one());
        assert_eq!(demazure(&d, 0, &m(&[2])).unwrap(), &m(&[1]) + &m(&[-1]));
    }

    #[test]
    fn rs_decompose_examples() {
        let d = pgl2();
        let (a, b) = rs_decompose(&d, 0, &LaurentPoly::one(Q, 1)).unwrap();
        assert!(a.is_one() && b.is_zero());
        let (a, b) = rs_decompose(&d, 0, &m(&[1])).unwrap();
        assert!(a.is_zero() && b.is_one());
        let (a, b) = rs_decompose(&d, 0, &m(&[2])).unwrap();
        assert_eq!(a, LaurentPoly::constant(Q.from_int(-1), 1));
        assert_eq!(b, &m(&[1]) + &m(&[-1]));
    }

    #[test]
    fn selfadjoint_determinant() {
        for name in ["PGL2", "PGL3", "B2", "G2"] {
            let d = RootDatum::preset(name).unwrap();
            for s in 0..d.rank() {
                let mat = selfadjoint_matrix(&d, s, Q).unwrap();
                let w = omega(&d, s).unwrap();
                let sw = d.act(d.simple(s), &w);
                let expect = -&m(&(&w + &sw));
                assert_eq!(mat.det().unwrap(), expect, "{name} s{s}");
                assert!(mat[(0, 0)].is_one() && mat[(1, 0)].is_zero());
            }
        }
    }

    #[test]
    fn demazure_needs_adjoint() {
        let d = RootDatum::preset("SL2").unwrap();
        assert!(matches!(
            demazure(&d, 0, &m(&[1])),
            Err(Error::NotAdjoint(_))
        ));
    }

    #[test]
    fn orbit_sums() {
        let d = pgl2();
        assert!(orbit_sum(&d, &[0], Q).is_one());
        assert_eq!(orbit_sum(&d, &[1], Q), &m(&[1]) + &m(&[-1]));
        let d3 = RootDatum::preset("PGL3").unwrap();
        let o = orbit_sum(&d3, &[1, 0], Q);
        assert_eq!(o.len(), 3);
        for w in 0..d3.order() {
            assert_eq!(weyl_act(&d3, w, &o), o);
        }
    }

    #[test]
    fn evaluation_on_the_wall() {
        let d = pgl2();
        let f = &m(d.simple_coroot(0)) - &LaurentPoly::one(Q, 1);
        assert!(f.evaluate(&[Q.from_int(-1)]).unwrap().is_zero());
    }

    fn arb_poly(dim: usize) -> impl Strategy<Value = LaurentPoly> {
        proptest::collection::vec((proptest::collection::vec(-3i64..=3, dim), -4i64..=4), 0..6)
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
        fn demazure_lands_in_invariants(f in arb_poly(2), s in 0usize..2) {
            let d = RootDatum::preset("PGL3").unwrap();
            let si = d.simple(s);
            let df = demazure(&d, s, &f).unwrap();
            prop_assert_eq!(weyl_act(&d, si, &df), df.clone());
            let (a, b) = rs_decompose(&d, s, &f).unwrap();
            prop_assert_eq!(weyl_act(&d, si, &a), a.clone());
            prop_assert_eq!(weyl_act(&d, si, &b), b.clone());
            let w = omega(&d, s).unwrap();
            prop_assert_eq!(&a + &b.shift(&w), f);
        }

        #[test]
        fn demazure_is_invariant_linear(f in arb_poly(2), g in arb_poly(2), s in 0usize..2) {
            let d = RootDatum::preset("PGL3").unwrap();
            let a = &g + &weyl_act(&d, d.simple(s), &g);
            prop_assert_eq!(demazure(&d, s, &(&a * &f)).unwrap(), &a * &demazure(&d, s, &f).unwrap());
        }

        #[test]
        fn weyl_action_is_a_group_action(
            f in arb_poly(2),
            g in arb_poly(2),
            v in 0usize..6,
            w in 0usize..6,
        ) {
            let d = RootDatum::preset("PGL3").unwrap();
            prop_assert_eq!(
                weyl_act(&d, d.mul(v, w), &f),
                weyl_act(&d, v, &weyl_act(&d, w, &f))
            );
            prop_assert_eq!(
                weyl_act(&d, w, &(&f * &g)),
                &weyl_act(&d, w, &f) * &weyl_act(&d, w, &g)
            );
        }

        #[test]
        fn evaluation_transports(f in arb_poly(2), w in 0usize..6) {
            // f(w⁻¹·χ) where (w⁻¹χ)(λ) = χ(wλ)
            let d = RootDatum::preset("PGL3").unwrap();
            let chi = [Q.from_int(2), Q.from_int(3)];
            let moved: Vec<_> = (0..2)
                .map(|i| m(&d.act(w, &LatticeVec::basis(2, i))).evaluate(&chi).unwrap())
                .collect();
            prop_assert_eq!(
                weyl_act(&d, w, &f).evaluate(&chi).unwrap(),
                f.evaluate(&moved).unwrap()
            );
        }
    }
}
