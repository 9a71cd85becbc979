use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::lattice::LatticeVec;
use crate::matrix::Matrix;
use crate::rootdata::{RootDatum, WeylIndex};

use super::{Entry, MatrixBimodule};

/// Multiplicity of each Weyl element, sorted by element index, zeros omitted.
pub type Decomposition = Vec<(WeylIndex, usize)>;

/// `χ(λ) = ∏ χ_i^{λ_i}`.
pub fn character_value(lambda: &[i64], chi: &[Scalar]) -> Result<Scalar> {
    let field = chi
        .first()
        .map(Scalar::field)
        .ok_or_else(|| Error::DimensionMismatch("empty point".into()))?;
    let mut acc = field.one();
    for (x, &k) in chi.iter().zip(lambda) {
        let p = x
            .pow(k)
            .ok_or_else(|| Error::VanishingDenominator("zero coordinate".into()))?;
        acc = &acc * &p;
    }
    Ok(acc)
}

/// A torus point off every wall at which the graphs of distinct Weyl elements have
/// distinct eigenvalue tuples, so generic fibers see every `R_w` separately.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatingPoint {
    values: Vec<Scalar>,
}

const PRIMES: [i64; 10] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29];

impl SeparatingPoint {
    /// Over `Q` the basis vectors go to distinct primes; over `F_p` the first regular point
    /// in lexicographic order of `(F_p^×)^n` is used.
    pub fn new(datum: &RootDatum, field: FieldSpec) -> Result<Self> {
        Self::nth(datum, field, 0)
    }

    /// Further points, for retries: over `Q` the primes are shifted by `k`.
    pub fn nth(datum: &RootDatum, field: FieldSpec, k: usize) -> Result<Self> {
        let n = datum.lattice_rank();
        match field {
            FieldSpec::Rational => {
                if n + k > PRIMES.len() {
                    return Err(Error::NoSeparatingPoint(format!("rank {n} shift {k}")));
                }
                let values = (0..n).map(|i| field.from_int(PRIMES[i + k])).collect();
                Self::from_values(datum, values)
            }
            FieldSpec::Prime(p) => {
                let m = p - 1;
                let total = (m as u128).pow(n as u32);
                let mut found = 0;
                for idx in 0..total.min(1 << 20) {
                    let mut rest = idx;
                    let values: Vec<Scalar> = (0..n)
                        .map(|_| {
                            let v = (rest % m as u128) as i64 + 1;
                            rest /= m as u128;
                            field.from_int(v)
                        })
                        .rev()
                        .collect();
                    if Self::is_separating(datum, &values) {
                        if found == k {
                            return Ok(SeparatingPoint { values });
                        }
                        found += 1;
                    }
                }
                Err(Error::NoSeparatingPoint(format!(
                    "no regular point of the torus over {field} for {}",
                    datum.name()
                )))
            }
        }
    }

    pub fn from_values(datum: &RootDatum, values: Vec<Scalar>) -> Result<Self> {
        if values.len() != datum.lattice_rank() {
            return Err(Error::DimensionMismatch("point has the wrong rank".into()));
        }
        if !Self::is_separating(datum, &values) {
            return Err(Error::NoSeparatingPoint(format!(
                "{} is on a wall or does not separate graphs",
                fmt_point(&values)
            )));
        }
        Ok(SeparatingPoint { values })
    }

    fn is_separating(datum: &RootDatum, values: &[Scalar]) -> bool {
        if values.iter().any(Scalar::is_zero) {
            return false;
        }
        let off_walls = datum
            .positive_coroots()
            .iter()
            .all(|c| character_value(&c.coroot, values).is_ok_and(|x| !x.is_one()));
        if !off_walls {
            return false;
        }
        let mut tuples: Vec<Vec<Scalar>> = (0..datum.order())
            .map(|w| graph_tuple(datum, w, values))
            .collect();
        let before = tuples.len();
        tuples.sort_by_key(|t| t.iter().map(|x| x.to_string()).collect::<Vec<_>>());
        tuples.dedup();
        tuples.len() == before
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn field(&self) -> FieldSpec {
        self.values[0].field()
    }
}

pub(crate) fn fmt_point(values: &[Scalar]) -> String {
    let parts: Vec<String> = values.iter().map(Scalar::to_string).collect();
    format!("({})", parts.join(", "))
}

/// Eigenvalues of `L_i` on `R_w` at `χ`: `(χ(w⁻¹ e_i))_i`.
pub fn graph_tuple(datum: &RootDatum, w: WeylIndex, chi: &[Scalar]) -> Vec<Scalar> {
    let n = datum.lattice_rank();
    let winv = datum.inverse(w);
    (0..n)
        .map(|i| {
            character_value(&datum.act(winv, &LatticeVec::basis(n, i)), chi)
                .expect("nonzero coordinates")
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EigenData {
    /// Dimension of the joint generalized eigenspace.
    pub generalized: usize,
    /// Dimension of the joint eigenspace.
    pub eigen: usize,
}

/// Joint (generalized) eigenspace dimensions of commuting matrices for the tuple `c`.
pub fn joint_eigen(mats: &[Matrix<Scalar>], c: &[Scalar]) -> EigenData {
    let shifted = shifted(mats, c);
    let r = mats[0].rows();
    let mut k = 1;
    let mut powers = shifted.clone();
    while k < r {
        powers = powers.iter().map(|m| m.mul(m)).collect();
        k *= 2;
    }
    EigenData {
        generalized: stacked(&powers).nullity(c[0].field()),
        eigen: stacked(&shifted).nullity(c[0].field()),
    }
}

/// `A_i − c_i`.
pub(crate) fn shifted(mats: &[Matrix<Scalar>], c: &[Scalar]) -> Vec<Matrix<Scalar>> {
    mats.iter()
        .zip(c)
        .map(|(m, ci)| m.sub(&Matrix::scalar(m.rows(), ci)))
        .collect()
}

/// The matrices stacked vertically.
pub(crate) fn stacked(mats: &[Matrix<Scalar>]) -> Matrix<Scalar> {
    let blocks: Vec<Vec<Matrix<Scalar>>> = mats.iter().map(|m| vec![m.clone()]).collect();
    Matrix::from_blocks(&blocks)
}

/// Multiplicity of each graph `R_w` in the fiber at a separating point.
pub fn generic_decompose<E: Entry>(m: &MatrixBimodule<E>) -> Result<Decomposition> {
    let datum = m.datum();
    let point = SeparatingPoint::new(datum, m.field())?;
    decompose_at(m, &point)
}

pub(crate) fn decompose_at<E: Entry>(
    m: &MatrixBimodule<E>,
    point: &SeparatingPoint,
) -> Result<Decomposition> {
    let datum = m.datum();
    let fiber = m.fiber(point.values())?;
    let mut out = Vec::new();
    let mut total = 0;
    for w in 0..datum.order() {
        let c = graph_tuple(datum, w, point.values());
        let e = joint_eigen(&fiber, &c);
        if e.generalized == 0 {
            continue;
        }
        if e.eigen < e.generalized {
            return Err(Error::DefectiveFiber(format!(
                "{}: generalized eigenspace {} but eigenspace {} at {}",
                datum.label(w),
                e.generalized,
                e.eigen,
                fmt_point(point.values())
            )));
        }
        total += e.generalized;
        out.push((w, e.generalized));
    }
    if total < m.rank() {
        return Err(Error::NotGraphFiltered(format!(
            "graph eigenvalues account for {total} of rank {} at {}",
            m.rank(),
            fmt_point(point.values())
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charring::LaurentPoly;
    use crate::ring::RingElem;

    const Q: FieldSpec = FieldSpec::Rational;

    #[test]
    fn rational_points_use_primes() {
        let d = RootDatum::preset("PGL3").unwrap();
        let p = SeparatingPoint::new(&d, Q).unwrap();
        assert_eq!(p.values(), &[Q.from_int(2), Q.from_int(3)]);
        assert!(SeparatingPoint::from_values(&d, vec![Q.from_int(3), Q.from_int(9)]).is_err());
    }

    #[test]
    fn prime_field_points_exist() {
        for (name, p) in [
            ("PGL2", 5),
            ("PGL2", 7),
            ("PGL3", 5),
            ("PGL3", 7),
            ("SL2", 5),
        ] {
            let d = RootDatum::preset(name).unwrap();
            let f = FieldSpec::prime(p).unwrap();
            SeparatingPoint::new(&d, f).unwrap();
        }
    }

    #[test]
    fn bs_fiber_eigenvalues() {
        let d = RootDatum::preset("PGL2").unwrap();
        let bs = MatrixBimodule::bott_samelson(&d, &[0], Q).unwrap();
        assert_eq!(generic_decompose(&bs).unwrap(), vec![(0, 1), (1, 1)]);
        let g = MatrixBimodule::graph(&d, 1, Q);
        assert_eq!(generic_decompose(&g).unwrap(), vec![(1, 1)]);
    }

    #[test]
    fn defective_fibers_are_reported() {
        // a Jordan block at the eigenvalue of R_1
        let d = RootDatum::preset("PGL2").unwrap();
        let e = LaurentPoly::monomial(Q, [1]);
        let z = e.zero_like();
        let l = Matrix::from_rows(vec![vec![e.clone(), e.clone()], vec![z.clone(), e.clone()]]);
        let m = MatrixBimodule::from_left_actions(&d, Q, vec![l]).unwrap();
        assert!(matches!(
            generic_decompose(&m),
            Err(Error::DefectiveFiber(_))
        ));
        // an eigenvalue that belongs to no graph
        let l = Matrix::from_rows(vec![vec![e.scale(&Q.from_int(2))]]);
        let m = MatrixBimodule::from_left_actions(&d, Q, vec![l]).unwrap();
        assert!(matches!(
            generic_decompose(&m),
            Err(Error::NotGraphFiltered(_))
        ));
    }
}
