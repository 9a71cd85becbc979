use std::collections::BTreeMap;

use crate::charring::LaurentPoly;
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::lattice::LatticeVec;
use crate::matrix::Matrix;
use crate::ring::RingElem;
use crate::rootdata::RootDatum;

use super::point::SeparatingPoint;
use super::MatrixBimodule;

/// A bimodule map, as a `rank(target) × rank(source)` matrix over `R`.
#[derive(Clone, Debug, PartialEq)]
pub struct BimoduleMap {
    pub matrix: Matrix<LaurentPoly>,
}

impl BimoduleMap {
    /// Checks the intertwining equations before accepting the matrix.
    pub fn new(
        source: &MatrixBimodule,
        target: &MatrixBimodule,
        matrix: Matrix<LaurentPoly>,
    ) -> Result<Self> {
        if matrix.rows() != target.rank() || matrix.cols() != source.rank() {
            return Err(Error::DimensionMismatch(format!(
                "map is {}×{}, expected {}×{}",
                matrix.rows(),
                matrix.cols(),
                target.rank(),
                source.rank()
            )));
        }
        if !is_intertwiner(source, target, &matrix) {
            return Err(Error::InvariantViolation(
                "matrix does not commute with the left actions".into(),
            ));
        }
        Ok(BimoduleMap { matrix })
    }

    pub fn compose(&self, first: &BimoduleMap) -> BimoduleMap {
        BimoduleMap {
            matrix: self.matrix.mul(&first.matrix),
        }
    }
}

/// `X · L_source(λ_i) = L_target(λ_i) · X` for every lattice generator.
pub fn is_intertwiner(
    source: &MatrixBimodule,
    target: &MatrixBimodule,
    x: &Matrix<LaurentPoly>,
) -> bool {
    source
        .left_actions()
        .iter()
        .zip(target.left_actions())
        .all(|(ls, lt)| x.mul(ls) == lt.mul(x))
}

/// All lattice points with every coordinate in `[−r, r]`, lexicographically.
fn box_points(n: usize, r: i64) -> Vec<LatticeVec> {
    let mut out = vec![LatticeVec::zero(0)];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (-r..=r).map(move |x| {
                    let mut v = p.to_vec();
                    v.push(x);
                    LatticeVec::from(v)
                })
            })
            .collect();
    }
    out
}

/// Incremental echelon form over a field: each stored row has its largest variable as pivot,
/// with coefficient one there.
struct Echelon {
    rows: BTreeMap<usize, BTreeMap<usize, Scalar>>,
}

impl Echelon {
    fn new() -> Self {
        Echelon {
            rows: BTreeMap::new(),
        }
    }

    fn insert(&mut self, mut eq: BTreeMap<usize, Scalar>) {
        while let Some((&top, c)) = eq.iter().next_back() {
            match self.rows.get(&top) {
                Some(row) => {
                    let c = c.clone();
                    for (&v, a) in row {
                        let entry = eq.entry(v).or_insert_with(|| a.field().zero());
                        *entry = &*entry - &(&c * a);
                        if entry.is_zero() {
                            eq.remove(&v);
                        }
                    }
                }
                None => {
                    let inv = c.inv().expect("nonzero");
                    for a in eq.values_mut() {
                        *a = &*a * &inv;
                    }
                    self.rows.insert(top, eq);
                    return;
                }
            }
        }
    }

    /// Kernel basis, one vector per non-pivot variable.
    fn kernel(&self, vars: usize, field: FieldSpec) -> Vec<Vec<Scalar>> {
        let free: Vec<usize> = (0..vars).filter(|v| !self.rows.contains_key(v)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![field.zero(); vars];
                x[f] = field.one();
                // pivot rows only involve smaller variables, so solve upwards
                for (&p, row) in &self.rows {
                    let mut acc = field.zero();
                    for (&v, a) in row.range(..p) {
                        if !x[v].is_zero() {
                            acc = &acc + &(a * &x[v]);
                        }
                    }
                    x[p] = -&acc;
                }
                x
            })
            .collect()
    }
}

/// A basis, over the scalars, of the bimodule maps `source → target` whose entries are
/// supported in the box `[−r, r]^n`. Every returned map is re-verified exactly.
pub fn hom_bounded(
    source: &MatrixBimodule,
    target: &MatrixBimodule,
    radius: i64,
) -> Result<Vec<BimoduleMap>> {
    if source.datum() != target.datum() || source.field() != target.field() {
        return Err(Error::MixedContext("hom between different contexts".into()));
    }
    if radius < 0 {
        return Err(Error::DimensionMismatch(
            "box radius must be nonnegative".into(),
        ));
    }
    let field = source.field();
    let n = source.datum().lattice_rank();
    let (rs, rt) = (source.rank(), target.rank());
    let points = box_points(n, radius);
    let b = points.len();
    let var = |p: usize, q: usize, k: usize| (p * rs + q) * b + k;
    let vars = rt * rs * b;

    let mut eqs: BTreeMap<(usize, usize, usize, LatticeVec), BTreeMap<usize, Scalar>> =
        BTreeMap::new();
    let mut add = |key: (usize, usize, usize, LatticeVec), v: usize, c: Scalar| {
        let eq = eqs.entry(key).or_default();
        let e = eq.entry(v).or_insert_with(|| c.field().zero());
        *e = &*e + &c;
        if e.is_zero() {
            eq.remove(&v);
        }
    };
    for i in 0..n {
        let (ls, lt) = (source.left_action(i), target.left_action(i));
        for p in 0..rt {
            for r in 0..rs {
                // (X L_s)_{pr} = Σ_q X_{pq} (L_s)_{qr}
                for q in 0..rs {
                    for (e, c) in ls[(q, r)].terms() {
                        for (k, mu) in points.iter().enumerate() {
                            add((i, p, r, mu + e), var(p, q, k), c.clone());
                        }
                    }
                }
                // (L_t X)_{pr} = Σ_q (L_t)_{pq} X_{qr}
                for q in 0..rt {
                    for (e, c) in lt[(p, q)].terms() {
                        for (k, mu) in points.iter().enumerate() {
                            add((i, p, r, mu + e), var(q, r, k), -c);
                        }
                    }
                }
            }
        }
    }
    let mut ech = Echelon::new();
    for (_, eq) in eqs {
        if !eq.is_empty() {
            ech.insert(eq);
        }
    }
    let mut out = Vec::new();
    for x in ech.kernel(vars, field) {
        let matrix = Matrix::from_fn(rt, rs, |p, q| {
            LaurentPoly::from_terms(
                field,
                n,
                (0..b).map(|k| (points[k].clone(), x[var(p, q, k)].clone())),
            )
        });
        out.push(BimoduleMap::new(source, target, matrix)?);
    }
    Ok(out)
}

fn vectorize(m: &Matrix<LaurentPoly>) -> Vec<LaurentPoly> {
    m.entries().cloned().collect()
}

/// Rank over `Frac(R)` bounded below by the rank at a point; `maps` vectorized as columns.
pub fn fraction_rank(maps: &[Matrix<LaurentPoly>], point: &[Scalar]) -> Result<usize> {
    if maps.is_empty() {
        return Ok(0);
    }
    let cols: Vec<Vec<LaurentPoly>> = maps.iter().map(vectorize).collect();
    let rows = cols[0].len();
    let mut vals = Vec::with_capacity(rows);
    for r in 0..rows {
        let row = cols
            .iter()
            .map(|c| c[r].evaluate(point))
            .collect::<Result<Vec<_>>>()?;
        vals.push(row);
    }
    Ok(Matrix::from_rows(vals).rank())
}

/// Rank over `Frac(R)` by division-free elimination.
fn exact_rank(rows: &[Vec<LaurentPoly>]) -> usize {
    let mut a: Vec<Vec<LaurentPoly>> = rows.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..a.len() {
            if a[i][c].is_zero() {
                continue;
            }
            let (f, g) = (a[rank][c].clone(), a[i][c].clone());
            let pivot = a[rank].clone();
            for (x, y) in a[i][c..].iter_mut().zip(&pivot[c..]) {
                *x = f.times(x).minus(&g.times(y));
            }
        }
        rank += 1;
    }
    rank
}

#[derive(Clone, Debug, PartialEq)]
pub enum SpanResult {
    /// Right-multiplication coefficients `g_j` with `map = Σ candidate_j · g_j`.
    InSpan(Vec<LaurentPoly>),
    /// The offending coefficient or entry.
    NotInSpan(String),
}

impl SpanResult {
    pub fn is_in_span(&self) -> bool {
        matches!(self, SpanResult::InSpan(_))
    }
}

/// Reusable solver for `map = Σ candidate_j · g_j`: a square subsystem, inverted once.
#[derive(Clone, Debug)]
pub struct SpanSolver {
    candidates: Vec<Matrix<LaurentPoly>>,
    rows: Vec<usize>,
    adj: Matrix<LaurentPoly>,
    det: LaurentPoly,
}

impl SpanSolver {
    pub fn new(datum: &RootDatum, candidates: Vec<Matrix<LaurentPoly>>) -> Result<Self> {
        let k = candidates.len();
        if k == 0 {
            return Err(Error::DependentCandidates);
        }
        let field = candidates[0][(0, 0)].field();
        let cols: Vec<Vec<LaurentPoly>> = candidates.iter().map(vectorize).collect();
        let nrows = cols[0].len();
        let poly_row =
            |r: usize| -> Vec<LaurentPoly> { cols.iter().map(|c| c[r].clone()).collect() };

        let mut chosen: Option<Vec<usize>> = None;
        for attempt in 0..3 {
            let Ok(point) = SeparatingPoint::nth(datum, field, attempt) else {
                break;
            };
            let mut picked = Vec::new();
            let mut picked_vals: Vec<Vec<Scalar>> = Vec::new();
            for r in 0..nrows {
                let vals = poly_row(r)
                    .iter()
                    .map(|p| p.evaluate(point.values()))
                    .collect::<Result<Vec<_>>>()?;
                picked_vals.push(vals);
                if Matrix::from_rows(picked_vals.clone()).rank() > picked.len() {
                    picked.push(r);
                    if picked.len() == k {
                        break;
                    }
                } else {
                    picked_vals.pop();
                }
            }
            if picked.len() == k {
                chosen = Some(picked);
                break;
            }
        }
        let rows = match chosen {
            Some(r) => r,
            None => {
                // the points were unlucky or the candidates are dependent: decide exactly
                let mut picked: Vec<usize> = Vec::new();
                let mut picked_rows: Vec<Vec<LaurentPoly>> = Vec::new();
                for r in 0..nrows {
                    picked_rows.push(poly_row(r));
                    if exact_rank(&picked_rows) > picked.len() {
                        picked.push(r);
                        if picked.len() == k {
                            break;
                        }
                    } else {
                        picked_rows.pop();
                    }
                }
                if picked.len() < k {
                    return Err(Error::DependentCandidates);
                }
                picked
            }
        };
        let sub = Matrix::from_fn(k, k, |i, j| cols[j][rows[i]].clone());
        let (adj, det) = sub.adjugate_pair().ok_or(Error::DependentCandidates)?;
        let _ = field;
        Ok(SpanSolver {
            candidates,
            rows,
            adj,
            det,
        })
    }

    pub fn candidates(&self) -> &[Matrix<LaurentPoly>] {
        &self.candidates
    }

    pub fn solve(&self, map: &Matrix<LaurentPoly>) -> SpanResult {
        let entries = vectorize(map);
        let x: Vec<&LaurentPoly> = self.rows.iter().map(|&r| &entries[r]).collect();
        let k = self.candidates.len();
        let mut coeffs = Vec::with_capacity(k);
        for j in 0..k {
            let mut num = self.det.zero_like();
            for (i, xi) in x.iter().enumerate() {
                num = &num + &(&self.adj[(j, i)] * xi);
            }
            match num.div_exact(&self.det) {
                Some(g) => coeffs.push(g),
                None => {
                    return SpanResult::NotInSpan(format!(
                        "coefficient {j} is ({num}) / ({}), not in R",
                        self.det
                    ))
                }
            }
        }
        let mut combo = Matrix::zeros(map.rows(), map.cols(), &self.det);
        for (c, g) in self.candidates.iter().zip(&coeffs) {
            combo = combo.add(&c.scale(g));
        }
        if combo != *map {
            return SpanResult::NotInSpan(
                "map is not a combination of the candidates even over Frac(R)".into(),
            );
        }
        SpanResult::InSpan(coeffs)
    }
}

/// Coefficients `g_j ∈ R` with `map = Σ candidate_j · g_j`, or the obstruction.
pub fn span_membership(
    datum: &RootDatum,
    map: &Matrix<LaurentPoly>,
    candidates: &[Matrix<LaurentPoly>],
) -> Result<SpanResult> {
    if candidates.is_empty() {
        return Ok(if map.is_zero() {
            SpanResult::InSpan(vec![])
        } else {
            SpanResult::NotInSpan("no candidates".into())
        });
    }
    Ok(SpanSolver::new(datum, candidates.to_vec())?.solve(map))
}
