//! Steinberg bases, the big bimodule `R ⊗_{R^W} R` and the checks built on it.
//!
//! `R ⊗_{R^W} R` is modelled inside `∏_w R_w`: the element `e^λ ⊗ g` is the vector
//! `(e^{w⁻¹λ} g)_w`. A set of exponents `λ_1, …, λ_{|W|}` is a right basis exactly when
//! the matrix `S = (e^{w⁻¹λ_j})` is invertible over `Frac(R)` and the images of `1 ⊗ 1`
//! and of `e^{±e_i} · (e^{λ_j} ⊗ 1)` expand over its columns with coefficients in `R`.

use serde::{Deserialize, Serialize};

use crate::bimodule::{
    fraction_rank, generic_decompose, hom_bounded, is_intertwiner, joint_eigen, BimoduleMap,
    MatrixBimodule, SeparatingPoint, SpanResult, SpanSolver,
};
use crate::charring::{omega, LaurentPoly};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::hecke::{localized_pairs, subword_char};
use crate::lattice::{IntMatrix, LatticeVec};
use crate::matrix::Matrix;
use crate::ring::RingElem;
use crate::rootdata::{RootDatum, WeylIndex};
use crate::walls::{graph_intersection, product_lattice, separation_check};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisSource {
    Formula,
    Search,
    Given,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SteinbergBasis {
    /// `(w, λ_w)` in element order.
    pub entries: Vec<(WeylIndex, LatticeVec)>,
    pub verified: bool,
    pub source: BasisSource,
}

impl SteinbergBasis {
    pub fn exponents(&self) -> Vec<LatticeVec> {
        self.entries.iter().map(|(_, l)| l.clone()).collect()
    }
}

/// The coefficient that failed to lie in `R`: `numerator / denominator`.
#[derive(Clone, Debug, PartialEq)]
pub struct DivisionWitness {
    pub target: String,
    pub coefficient: usize,
    pub numerator: LaurentPoly,
    pub denominator: LaurentPoly,
}

impl std::fmt::Display for DivisionWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "coefficient {} of {} is ({}) / ({})",
            self.coefficient, self.target, self.numerator, self.denominator
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasisCertificate {
    pub independent: bool,
    /// Number of vectors expanded with coefficients in `R`.
    pub expansions: usize,
    pub witness: Option<DivisionWitness>,
}

impl BasisCertificate {
    pub fn passed(&self) -> bool {
        self.independent && self.witness.is_none()
    }
}

/// Solves `S g = v` over `R` through a fixed adjugate.
struct Expander {
    adj: Matrix<LaurentPoly>,
    det: LaurentPoly,
}

impl Expander {
    fn new(s: &Matrix<LaurentPoly>) -> Option<Self> {
        let (adj, det) = s.adjugate_pair()?;
        (!det.is_zero()).then_some(Expander { adj, det })
    }

    fn expand(
        &self,
        v: &[LaurentPoly],
    ) -> std::result::Result<Vec<LaurentPoly>, (usize, LaurentPoly)> {
        (0..v.len())
            .map(|j| {
                let mut num = self.det.zero_like();
                for (i, x) in v.iter().enumerate() {
                    num = &num + &(&self.adj[(j, i)] * x);
                }
                num.div_exact(&self.det).ok_or((j, num))
            })
            .collect()
    }
}

/// `(e^{w⁻¹λ})_w`.
fn embed(datum: &RootDatum, lambda: &[i64], field: FieldSpec) -> Vec<LaurentPoly> {
    (0..datum.order())
        .map(|w| LaurentPoly::monomial(field, datum.act(datum.inverse(w), lambda)))
        .collect()
}

fn basis_matrix(datum: &RootDatum, basis: &[LatticeVec], field: FieldSpec) -> Matrix<LaurentPoly> {
    let cols: Vec<Vec<LaurentPoly>> = basis.iter().map(|l| embed(datum, l, field)).collect();
    Matrix::from_fn(datum.order(), basis.len(), |w, j| cols[j][w].clone())
}

fn independent_at_point(
    datum: &RootDatum,
    s: &Matrix<LaurentPoly>,
    field: FieldSpec,
) -> Result<bool> {
    let point = SeparatingPoint::new(datum, field)?;
    let vals = s.try_map(|e| e.evaluate(point.values()))?;
    Ok(vals.rank() == s.cols())
}

/// The vectors whose expansion certifies generation, with a label for each.
fn generation_targets(
    datum: &RootDatum,
    basis: &[LatticeVec],
    field: FieldSpec,
) -> Vec<(String, Vec<LaurentPoly>)> {
    let n = datum.lattice_rank();
    let mut out = vec![("1⊗1".to_string(), embed(datum, &vec![0; n], field))];
    for i in 0..n {
        for sign in [1, -1] {
            for (j, l) in basis.iter().enumerate() {
                let shifted = l + &LatticeVec::basis(n, i).scale(sign);
                let label = format!("e^{}·b{}", LatticeVec::basis(n, i).scale(sign), j);
                out.push((label, embed(datum, &shifted, field)));
            }
        }
    }
    out
}

/// Decides whether `{e^{λ_j} ⊗ 1}` is a right `R`-basis of `R ⊗_{R^W} R`.
pub fn basis_check(
    datum: &RootDatum,
    basis: &[LatticeVec],
    field: FieldSpec,
) -> Result<BasisCertificate> {
    datum.require_adjoint()?;
    if basis.len() != datum.order() {
        return Err(Error::DimensionMismatch(format!(
            "{} exponents for a Weyl group of order {}",
            basis.len(),
            datum.order()
        )));
    }
    let s = basis_matrix(datum, basis, field);
    let fail = BasisCertificate {
        independent: false,
        expansions: 0,
        witness: None,
    };
    if !independent_at_point(datum, &s, field)? {
        return Ok(fail);
    }
    let Some(exp) = Expander::new(&s) else {
        return Ok(fail);
    };
    let mut expansions = 0;
    for (target, v) in generation_targets(datum, basis, field) {
        match exp.expand(&v) {
            Ok(_) => expansions += 1,
            Err((coefficient, numerator)) => {
                return Ok(BasisCertificate {
                    independent: true,
                    expansions,
                    witness: Some(DivisionWitness {
                        target,
                        coefficient,
                        numerator,
                        denominator: exp.det.clone(),
                    }),
                })
            }
        }
    }
    Ok(BasisCertificate {
        independent: true,
        expansions,
        witness: None,
    })
}

/// `λ_w = w(Σ ω_j)` over the simple `j` with `ws_j < w`.
pub fn steinberg_candidate(datum: &RootDatum) -> Result<Vec<LatticeVec>> {
    datum.require_adjoint()?;
    let n = datum.lattice_rank();
    (0..datum.order())
        .map(|w| {
            let mut sum = LatticeVec::zero(n);
            for j in 0..datum.rank() {
                if datum.length(datum.mul(w, datum.simple(j))) < datum.length(w) {
                    sum = &sum + &datum.fundamental_coweight(j)?;
                }
            }
            Ok(datum.act(w, &sum))
        })
        .collect()
}

const SEARCH_RADIUS: i64 = 2;

fn greedy_candidate(datum: &RootDatum, field: FieldSpec) -> Result<Vec<LatticeVec>> {
    let n = datum.lattice_rank();
    let mut pts: Vec<LatticeVec> = vec![LatticeVec::zero(0)];
    for _ in 0..n {
        pts = pts
            .into_iter()
            .flat_map(|p| {
                (-SEARCH_RADIUS..=SEARCH_RADIUS).map(move |x| {
                    let mut v = p.to_vec();
                    v.push(x);
                    LatticeVec::from(v)
                })
            })
            .collect();
    }
    pts.sort_by(|a, b| a.radius().cmp(&b.radius()).then_with(|| a.cmp(b)));
    let point = SeparatingPoint::new(datum, field)?;
    let mut chosen = Vec::new();
    for p in pts {
        let mut trial = chosen.clone();
        trial.push(p);
        let s = basis_matrix(datum, &trial, field).try_map(|e| e.evaluate(point.values()))?;
        if s.rank() == trial.len() {
            chosen = trial;
            if chosen.len() == datum.order() {
                break;
            }
        }
    }
    Ok(chosen)
}

/// A certified monomial basis: the descent formula, else a greedy search in a small box.
pub fn steinberg_basis(datum: &RootDatum, field: FieldSpec) -> Result<SteinbergBasis> {
    let wrap = |lams: Vec<LatticeVec>, source| SteinbergBasis {
        entries: lams.into_iter().enumerate().collect(),
        verified: true,
        source,
    };
    let formula = steinberg_candidate(datum)?;
    if basis_check(datum, &formula, field)?.passed() {
        return Ok(wrap(formula, BasisSource::Formula));
    }
    let greedy = greedy_candidate(datum, field)?;
    if greedy.len() == datum.order() && basis_check(datum, &greedy, field)?.passed() {
        return Ok(wrap(greedy, BasisSource::Search));
    }
    Err(Error::NoSteinbergBasis)
}

/// `R ⊗_{R^W} R` in a Steinberg basis.
#[derive(Clone, Debug)]
pub struct BigBimodule {
    pub inner: MatrixBimodule,
    pub basis: SteinbergBasis,
    /// Column `j` is the image of `e^{λ_j} ⊗ 1` in `∏_w R_w`.
    pub embedding: Matrix<LaurentPoly>,
}

impl BigBimodule {
    /// Reassembles a big bimodule from its action matrices, checking them against the
    /// embedding into `∏_w R_w`.
    pub fn from_parts(inner: MatrixBimodule, basis: SteinbergBasis) -> Result<Self> {
        let datum = inner.datum().clone();
        let field = inner.field();
        if !basis.verified || basis.entries.len() != inner.rank() {
            return Err(Error::NoSteinbergBasis);
        }
        let embedding = basis_matrix(&datum, &basis.exponents(), field);
        let n = datum.lattice_rank();
        for i in 0..n {
            let diag = Matrix::from_fn(datum.order(), datum.order(), |a, b| {
                if a == b {
                    LaurentPoly::monomial(
                        field,
                        datum.act(datum.inverse(a), &LatticeVec::basis(n, i)),
                    )
                } else {
                    LaurentPoly::zero(field, n)
                }
            });
            if embedding.mul(inner.left_action(i)) != diag.mul(&embedding) {
                return Err(Error::InvariantViolation(format!(
                    "L_{i} does not match the embedding into the product of graphs"
                )));
            }
        }
        Ok(BigBimodule {
            inner,
            basis,
            embedding,
        })
    }

    /// Left multiplication by the basis elements, as endomorphisms.
    pub fn candidates(&self) -> Vec<Matrix<LaurentPoly>> {
        self.basis
            .entries
            .iter()
            .map(|(_, l)| self.inner.monomial_action(l))
            .collect()
    }
}

pub fn build_big_bimodule(datum: &RootDatum, field: FieldSpec) -> Result<BigBimodule> {
    let basis = steinberg_basis(datum, field)?;
    build_big_bimodule_with(datum, basis, field)
}

pub fn build_big_bimodule_with(
    datum: &RootDatum,
    basis: SteinbergBasis,
    field: FieldSpec,
) -> Result<BigBimodule> {
    if !basis.verified {
        return Err(Error::NoSteinbergBasis);
    }
    let lams = basis.exponents();
    let s = basis_matrix(datum, &lams, field);
    let exp = Expander::new(&s).ok_or(Error::NoSteinbergBasis)?;
    let n = datum.lattice_rank();
    let k = lams.len();
    let action = |sign: i64, i: usize| -> Result<Matrix<LaurentPoly>> {
        let cols = lams
            .iter()
            .map(|l| {
                let v = embed(datum, &(l + &LatticeVec::basis(n, i).scale(sign)), field);
                exp.expand(&v).map_err(|(j, num)| {
                    Error::DivisionFailure(format!(
                        "basis expansion coefficient {j}: ({num}) / ({})",
                        exp.det
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_fn(k, k, |a, b| cols[b][a].clone()))
    };
    let left = (0..n).map(|i| action(1, i)).collect::<Result<Vec<_>>>()?;
    let left_inv = (0..n).map(|i| action(-1, i)).collect::<Result<Vec<_>>>()?;
    let inner = MatrixBimodule::from_actions(datum, field, left, left_inv)?;
    Ok(BigBimodule {
        inner,
        basis,
        embedding: s,
    })
}

/// Some bounded map `source → target` with unit determinant, trying basis maps and then
/// sums of pairs.
pub fn isomorphism_bounded(
    source: &MatrixBimodule,
    target: &MatrixBimodule,
    radius: i64,
) -> Result<Option<BimoduleMap>> {
    if source.rank() != target.rank() {
        return Ok(None);
    }
    let maps = hom_bounded(source, target, radius)?;
    let unit = |m: &Matrix<LaurentPoly>| m.det().is_some_and(|d| d.is_unit());
    for m in &maps {
        if unit(&m.matrix) {
            return Ok(Some(m.clone()));
        }
    }
    for (a, x) in maps.iter().enumerate() {
        for y in &maps[a + 1..] {
            let sum = x.matrix.add(&y.matrix);
            if unit(&sum) {
                return Ok(Some(BimoduleMap { matrix: sum }));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalizedCross {
    pub coroot: usize,
    pub separation_passed: bool,
    pub blocks_match: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndReport {
    pub group: String,
    pub field: String,
    pub box_radius: i64,
    pub order: usize,
    pub basis: Vec<Vec<i64>>,
    pub candidates_valid: bool,
    pub fraction_rank: usize,
    pub decomposition_ok: bool,
    /// Dimension over the scalars of the bounded intertwiners.
    pub bounded_maps: usize,
    pub contained: usize,
    pub not_contained: Vec<String>,
    pub localized: Vec<LocalizedCross>,
}

impl EndReport {
    pub fn passed(&self) -> bool {
        self.candidates_valid
            && self.fraction_rank == self.order
            && self.decomposition_ok
            && self.contained == self.bounded_maps
            && self
                .localized
                .iter()
                .all(|l| l.separation_passed && l.blocks_match)
    }
}

/// Every intertwiner of `R ⊗_{R^W} R` supported in the box lies in the right span of left
/// multiplication by the basis, which is independent of full rank.
pub fn end_check(datum: &RootDatum, box_radius: i64, field: FieldSpec) -> Result<EndReport> {
    let big = build_big_bimodule(datum, field)?;
    end_check_with(&big, box_radius)
}

pub fn end_check_with(big: &BigBimodule, box_radius: i64) -> Result<EndReport> {
    let datum = big.inner.datum();
    let field = big.inner.field();
    let cands = big.candidates();
    let candidates_valid = cands
        .iter()
        .all(|c| is_intertwiner(&big.inner, &big.inner, c));
    let point = SeparatingPoint::new(datum, field)?;
    let frank = fraction_rank(&cands, point.values())?;
    let decomposition_ok = generic_decompose(&big.inner)?
        .iter()
        .map(|&(w, m)| (w, m))
        .eq((0..datum.order()).map(|w| (w, 1)));
    let maps = hom_bounded(&big.inner, &big.inner, box_radius)?;
    let (mut contained, mut not_contained) = (0, Vec::new());
    if frank == cands.len() {
        let solver = SpanSolver::new(datum, cands)?;
        for (k, m) in maps.iter().enumerate() {
            match solver.solve(&m.matrix) {
                SpanResult::InSpan(_) => contained += 1,
                SpanResult::NotInSpan(why) => not_contained.push(format!("map {k}: {why}")),
            }
        }
    }
    let localized = (0..datum.positive_coroots().len())
        .map(|b| {
            let rep = separation_check(datum, b, field)?;
            let mut surviving = rep.surviving_pairs();
            surviving.sort();
            Ok(LocalizedCross {
                coroot: b,
                separation_passed: rep.passed(),
                blocks_match: surviving == localized_pairs(datum, b),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EndReport {
        group: datum.name().to_string(),
        field: field.to_string(),
        box_radius,
        order: datum.order(),
        basis: big
            .basis
            .exponents()
            .iter()
            .map(LatticeVec::to_vec)
            .collect(),
        candidates_valid,
        fraction_rank: frank,
        decomposition_ok,
        bounded_maps: maps.len(),
        contained,
        not_contained,
        localized,
    })
}

/// `0 → R → R ⊗_{R^s} R → R_s → 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShortExactSequence {
    pub simple: usize,
    pub source: MatrixBimodule,
    pub middle: MatrixBimodule,
    pub target: MatrixBimodule,
    /// `e^ω ⊗ 1 − 1 ⊗ e^{sω}`, the column `(−e^{sω}, 1)`.
    pub iota: Matrix<LaurentPoly>,
    /// Restriction to the graph of `s`, the row `(1, e^{sω})`.
    pub pi: Matrix<LaurentPoly>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SesReport {
    pub simple: usize,
    pub iota: Vec<String>,
    pub pi: Vec<String>,
    pub iota_intertwines: bool,
    pub pi_intertwines: bool,
    pub composite_zero: bool,
    pub generic_ranks: (usize, usize, usize),
}

impl SesReport {
    pub fn passed(&self) -> bool {
        let (a, b, c) = self.generic_ranks;
        self.iota_intertwines
            && self.pi_intertwines
            && self.composite_zero
            && (a, b, c) == (1, 2, 1)
    }
}

pub fn ses_rank1(datum: &RootDatum, s: usize, field: FieldSpec) -> Result<ShortExactSequence> {
    datum.require_adjoint()?;
    datum.check_simple(s)?;
    let w = omega(datum, s)?;
    let sw = LaurentPoly::monomial(field, datum.act(datum.simple(s), &w));
    let one = LaurentPoly::one(field, datum.lattice_rank());
    Ok(ShortExactSequence {
        simple: s,
        source: MatrixBimodule::graph(datum, datum.identity(), field),
        middle: MatrixBimodule::bott_samelson(datum, &[s], field)?,
        target: MatrixBimodule::graph(datum, datum.simple(s), field),
        iota: Matrix::from_rows(vec![vec![-&sw], vec![one.clone()]]),
        pi: Matrix::from_rows(vec![vec![one, sw]]),
    })
}

impl ShortExactSequence {
    pub fn report(&self) -> Result<SesReport> {
        let datum = self.middle.datum();
        let point = SeparatingPoint::new(datum, self.middle.field())?;
        let rank = |m: &Matrix<LaurentPoly>| -> Result<usize> {
            Ok(m.try_map(|e| e.evaluate(point.values()))?.rank())
        };
        let iota_rank = rank(&self.iota)?;
        let pi_rank = rank(&self.pi)?;
        // exact at the middle: ker π has dimension 2 − rank π, filled by the image of ι
        let middle = if iota_rank + pi_rank == self.middle.rank() {
            self.middle.rank()
        } else {
            0
        };
        Ok(SesReport {
            simple: self.simple,
            iota: self.iota.entries().map(ToString::to_string).collect(),
            pi: self.pi.entries().map(ToString::to_string).collect(),
            iota_intertwines: is_intertwiner(&self.source, &self.middle, &self.iota),
            pi_intertwines: is_intertwiner(&self.middle, &self.target, &self.pi),
            composite_zero: self.pi.mul(&self.iota).is_zero(),
            generic_ranks: (iota_rank, middle, pi_rank),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockReport {
    pub elements: Vec<WeylIndex>,
    pub labels: Vec<String>,
    pub predicted: Vec<WeylIndex>,
    /// Generic multiplicities of the elements, from the subword character.
    pub multiplicities: Vec<usize>,
    pub generalized: usize,
    pub eigen: usize,
    /// Rank of the nilpotent part, the number of non-split summands.
    pub nonsplit: usize,
    pub square_zero: bool,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitReport {
    pub word: Vec<usize>,
    pub coroot: usize,
    pub point: Option<Vec<String>>,
    pub blocks: Vec<BlockReport>,
    pub partition_matches: bool,
    pub note: Option<String>,
}

impl SplitReport {
    pub fn passed(&self) -> bool {
        self.point.is_some() && self.partition_matches && self.blocks.iter().all(|b| b.passed)
    }
}

/// Whether `χ` lies on the wall of `coroot` and off every other wall.
pub fn is_wall_point(datum: &RootDatum, coroot: usize, chi: &[Scalar]) -> bool {
    chi.iter().all(|x| !x.is_zero())
        && datum.positive_coroots().iter().enumerate().all(|(b, c)| {
            let v = crate::bimodule::character_value(&c.coroot, chi).expect("nonzero point");
            v.is_one() == (b == coroot)
        })
}

fn tuple_key(datum: &RootDatum, w: WeylIndex, chi: &[Scalar]) -> Vec<String> {
    crate::bimodule::point_tuple(datum, w, chi)
        .iter()
        .map(ToString::to_string)
        .collect()
}

fn classes(datum: &RootDatum, chi: &[Scalar]) -> Vec<Vec<WeylIndex>> {
    let mut out: Vec<(Vec<String>, Vec<WeylIndex>)> = Vec::new();
    for w in 0..datum.order() {
        let key = tuple_key(datum, w, chi);
        match out.iter_mut().find(|(k, _)| *k == key) {
            Some((_, v)) => v.push(w),
            None => out.push((key, vec![w])),
        }
    }
    out.into_iter().map(|(_, v)| v).collect()
}

/// Search box for wall points: coordinates `±1, ±2, …` up to this size.
pub const WALL_SEARCH: i64 = 12;

/// The first point, in the order `−1, 1, −2, 2, …` per coordinate, on exactly the wall of
/// `coroot` whose eigenvalue classes are the pairs `{w, wt}`.
pub fn find_wall_point(datum: &RootDatum, coroot: usize, field: FieldSpec) -> Option<Vec<Scalar>> {
    let n = datum.lattice_rank();
    let vals: Vec<i64> = (1..=WALL_SEARCH).flat_map(|k| [-k, k]).collect();
    let mut pairs = localized_pairs(datum, coroot);
    pairs.sort();
    let total = vals.len().pow(n as u32);
    for idx in 0..total {
        let mut rest = idx;
        let chi: Vec<Scalar> = (0..n)
            .map(|_| {
                let v = vals[rest % vals.len()];
                rest /= vals.len();
                field.from_int(v)
            })
            .collect();
        if !is_wall_point(datum, coroot, &chi) {
            continue;
        }
        let mut cls: Vec<(WeylIndex, WeylIndex)> = classes(datum, &chi)
            .iter()
            .filter(|&c| c.len() == 2)
            .map(|c| (c[0], c[1]))
            .collect();
        cls.sort();
        if cls == pairs && classes(datum, &chi).iter().all(|c| c.len() == 2) {
            return Some(chi);
        }
    }
    None
}

/// Fiber of `B_word` at a point of the wall of `coroot`: the generalized eigenspaces must
/// group the graphs in pairs `{v, vt}`, each block a sum of lines and non-split planes.
pub fn localized_split_check(
    datum: &RootDatum,
    word: &[usize],
    coroot: usize,
    point: Option<Vec<Scalar>>,
    field: FieldSpec,
) -> Result<SplitReport> {
    if coroot >= datum.positive_coroots().len() {
        return Err(Error::DimensionMismatch(format!(
            "coroot index {coroot} out of range ({} positive coroots)",
            datum.positive_coroots().len()
        )));
    }
    let chi = match point {
        Some(p) => {
            if p.len() != datum.lattice_rank() {
                return Err(Error::DimensionMismatch("point has the wrong rank".into()));
            }
            is_wall_point(datum, coroot, &p).then_some(p)
        }
        None => find_wall_point(datum, coroot, field),
    };
    let Some(chi) = chi else {
        return Ok(SplitReport {
            word: word.to_vec(),
            coroot,
            point: None,
            blocks: vec![],
            partition_matches: false,
            note: Some("no admissible wall point".into()),
        });
    };
    let bs = MatrixBimodule::bott_samelson(datum, word, field)?;
    let character = subword_char(datum, word)?;
    let fiber = bs.fiber(&chi)?;
    let r = bs.rank();
    let t = datum.positive_coroots()[coroot].reflection;

    let cls = classes(datum, &chi);
    let partition_matches = cls
        .iter()
        .all(|c| c.len() == 2 && c[1] == datum.mul(c[0], t));
    let mut blocks = Vec::new();
    for c in cls {
        let tuple = crate::bimodule::point_tuple(datum, c[0], &chi);
        let e = joint_eigen(&fiber, &tuple);
        let mults: Vec<usize> = c.iter().map(|&w| character.multiplicity(w)).collect();
        let expected: usize = mults.iter().sum();
        let shifted: Vec<Matrix<Scalar>> = fiber
            .iter()
            .zip(&tuple)
            .map(|(m, ci)| m.sub(&Matrix::scalar(r, ci)))
            .collect();
        let v_basis = generalized_space(&shifted, field);
        let v = Matrix::from_fn(r, v_basis.len(), |i, j| v_basis[j][i].clone());
        let images: Vec<Matrix<Scalar>> = shifted.iter().map(|b| b.mul(&v)).collect();
        let square_zero = shifted
            .iter()
            .all(|bi| images.iter().all(|bjv| bi.mul(bjv).is_zero()));
        let nonsplit = if v_basis.is_empty() {
            0
        } else {
            Matrix::from_blocks(std::slice::from_ref(&images)).rank()
        };
        let min_mult = mults.iter().copied().min().unwrap_or(0);
        let passed = e.generalized == expected
            && square_zero
            && nonsplit == e.generalized - e.eigen
            && nonsplit <= min_mult;
        let mut predicted = vec![c[0], datum.mul(c[0], t)];
        predicted.sort();
        blocks.push(BlockReport {
            labels: c.iter().map(|&w| datum.label(w)).collect(),
            elements: c,
            predicted,
            multiplicities: mults,
            generalized: e.generalized,
            eigen: e.eigen,
            nonsplit,
            square_zero,
            passed,
        });
    }
    Ok(SplitReport {
        word: word.to_vec(),
        coroot,
        point: Some(chi.iter().map(ToString::to_string).collect()),
        blocks,
        partition_matches,
        note: None,
    })
}

/// Basis of the joint generalized kernel of commuting matrices.
fn generalized_space(shifted: &[Matrix<Scalar>], field: FieldSpec) -> Vec<Vec<Scalar>> {
    let r = shifted[0].rows();
    let mut powers = shifted.to_vec();
    let mut k = 1;
    while k < r {
        powers = powers.iter().map(|m| m.mul(m)).collect();
        k *= 2;
    }
    let blocks: Vec<Vec<Matrix<Scalar>>> = powers.into_iter().map(|m| vec![m]).collect();
    Matrix::from_blocks(&blocks).nullspace(field)
}

/// `{(λ, μ) ∈ Λ ⊕ Λ : λ − μ ∈ Λ′}` with basis columns `(e_i, e_i)` and `(p_j, 0)`, where the
/// `p_j` are the columns of `sublattice`.
pub fn bimonodromy_lattice(datum: &RootDatum, sublattice: &IntMatrix) -> Result<IntMatrix> {
    let n = datum.lattice_rank();
    if sublattice.rows() != n || sublattice.cols() != n {
        return Err(Error::NotSublattice(format!(
            "expected an {n}×{n} basis matrix"
        )));
    }
    if sublattice.det() == 0 {
        return Err(Error::NotSublattice("basis vectors are dependent".into()));
    }
    let mut b = IntMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        b[(i, i)] = 1;
        b[(n + i, i)] = 1;
        for k in 0..n {
            b[(k, n + i)] = sublattice[(k, i)];
        }
    }
    Ok(b)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pi1Pair {
    pub w: WeylIndex,
    pub v: WeylIndex,
    pub free_rank: usize,
    pub invariant_factors: Vec<i64>,
    /// Number of points when the intersection is finite.
    pub points: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pi1Report {
    pub group: String,
    pub lattice: String,
    pub pairs: Vec<Pi1Pair>,
}

impl Pi1Report {
    pub fn pair(&self, w: WeylIndex, v: WeylIndex) -> Option<&Pi1Pair> {
        self.pairs.iter().find(|p| (p.w, p.v) == (w, v))
    }
}

/// Intersections `Γ_w ∩ Γ_v` for `w ≤ v` inside the torus with character lattice `basis`.
pub fn pi1_report(datum: &RootDatum, basis: &IntMatrix, lattice: &str) -> Pi1Report {
    let mut pairs = Vec::new();
    for w in 0..datum.order() {
        for v in w..datum.order() {
            let q = graph_intersection(datum, basis, w, v);
            pairs.push(Pi1Pair {
                w,
                v,
                free_rank: q.free_rank,
                points: (q.free_rank == 0).then(|| q.torsion_order()),
                invariant_factors: q.invariant_factors.clone(),
            });
        }
    }
    Pi1Report {
        group: datum.name().to_string(),
        lattice: lattice.to_string(),
        pairs,
    }
}

/// The datum on `Λ ⊕ Λ`, and its adjoint form on the bimonodromy lattice of `Λ ⊂ Λ_ad`.
pub fn pi1_comparison(datum: &RootDatum) -> Result<(Pi1Report, Pi1Report)> {
    let n = datum.lattice_rank();
    let plain = pi1_report(datum, &product_lattice(n), "product");
    let adjoint = datum.adjoint_form()?;
    let bi = bimonodromy_lattice(&adjoint, &datum.lattice_in_adjoint())?;
    Ok((plain, pi1_report(&adjoint, &bi, "bimonodromy")))
}
