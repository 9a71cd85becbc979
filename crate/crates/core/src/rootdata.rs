//! Root data, Weyl groups, positive coroots and their reflections.
//!
//! Conventions: `Λ` is the coweight lattice, its elements are column vectors in a
//! fixed basis. Simple coroots `α_j` are vectors of `Λ`; simple roots `α̌_j` are
//! covectors (coordinates in the dual basis). The Cartan matrix satisfies
//! `A_ij = ⟨α_i, α̌_j⟩` and the simple reflection `s_j` acts by
//! `λ ↦ λ − ⟨λ, α̌_j⟩ α_j`.
//!
//! For adjoint data the basis of `Λ` is the fundamental coweights, so
//! `α̌_j` is the `j`-th dual basis vector and `α_j` is the `j`-th row of `A`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{IntMatrix, LatticeVec};

/// Default bound on the size of an enumerated Weyl group.
pub const WEYL_CAP: usize = 100_000;

/// Index of an element in [`RootDatum::elements`].
pub type WeylIndex = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    /// Action on `Λ` coordinates.
    pub matrix: IntMatrix,
    /// Lexicographically smallest reduced word (0-based simple indices), `s_{w0} s_{w1} …`.
    pub word: Vec<usize>,
    pub length: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorootReflection {
    /// The coroot `β ∈ Λ`.
    pub coroot: LatticeVec,
    /// The matching root `β̌` as a covector.
    pub root: LatticeVec,
    /// `β` in the basis of simple coroots.
    pub simple_coords: Vec<i64>,
    /// The reflection `t`, as an element index.
    pub reflection: WeylIndex,
}

impl CorootReflection {
    pub fn height(&self) -> i64 {
        self.simple_coords.iter().sum()
    }
}

/// How the lattice `Λ` is chosen for a given Cartan matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LatticeSpec {
    /// The keyword `"adjoint"`: `Λ` spanned by the fundamental coweights.
    Keyword(String),
    /// Simple coroot coordinates (one row per coroot) in a chosen basis of `Λ`.
    Coroots(Vec<Vec<i64>>),
}

/// Plain-text description of a root datum, as read from a TOML file.
///
/// ```toml
/// name = "B2"
/// cartan = [[2, -1], [-2, 2]]
/// lattice = "adjoint"          # or e.g. [[1, 0], [0, 1]] for the coroot lattice
/// ```
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumFile {
    pub name: String,
    pub cartan: Vec<Vec<i64>>,
    pub lattice: LatticeSpec,
}

#[derive(Clone)]
pub struct RootDatum {
    name: String,
    cartan: IntMatrix,
    simple_coroots: Vec<LatticeVec>,
    simple_roots: Vec<LatticeVec>,
    adjoint: bool,
    reflections: Vec<IntMatrix>,
    elements: Arc<Vec<WeylElement>>,
    index: Arc<HashMap<IntMatrix, WeylIndex>>,
    positive: Arc<Vec<CorootReflection>>,
    positive_set: Arc<HashSet<LatticeVec>>,
}

impl fmt::Debug for RootDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RootDatum")
            .field("name", &self.name)
            .field("cartan", &self.cartan)
            .field("simple_coroots", &self.simple_coroots)
            .field("simple_roots", &self.simple_roots)
            .field("adjoint", &self.adjoint)
            .field("order", &self.elements.len())
            .finish()
    }
}

impl PartialEq for RootDatum {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.cartan == other.cartan
            && self.simple_coroots == other.simple_coroots
    }
}

impl Eq for RootDatum {}

pub const PRESETS: &[&str] = &["PGL2", "PGL3", "PGL4", "SL2", "SL3", "B2", "G2"];

fn cartan_of_type(t: &str) -> Option<Vec<Vec<i64>>> {
    Some(match t {
        "A1" => vec![vec![2]],
        "A2" => vec![vec![2, -1], vec![-1, 2]],
        "A3" => vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]],
        "B2" => vec![vec![2, -1], vec![-2, 2]],
        "G2" => vec![vec![2, -1], vec![-3, 2]],
        _ => return None,
    })
}

impl RootDatum {
    /// One of the built-in data: `PGL2`, `PGL3`, `PGL4`, `SL2`, `SL3`, `B2` (adjoint), `G2`.
    pub fn preset(name: &str) -> Result<Self> {
        let upper = name.trim().to_ascii_uppercase();
        let (ty, adjoint) = match upper.as_str() {
            "PGL2" => ("A1", true),
            "PGL3" => ("A2", true),
            "PGL4" => ("A3", true),
            "SL2" => ("A1", false),
            "SL3" => ("A2", false),
            "B2" => ("B2", true),
            "G2" => ("G2", true),
            _ => {
                return Err(Error::InvalidDatum(format!(
                    "unknown preset {name:?} (known: {})",
                    PRESETS.join(", ")
                )))
            }
        };
        let cartan = cartan_of_type(ty).expect("known type");
        if adjoint {
            Self::adjoint(&upper, &cartan)
        } else {
            // simply connected: Λ is the coroot lattice
            let r = cartan.len();
            let ident: Vec<Vec<i64>> = (0..r)
                .map(|i| (0..r).map(|j| i64::from(i == j)).collect())
                .collect();
            Self::with_lattice(&upper, &cartan, &ident)
        }
    }

    /// Adjoint datum: `Λ` has the fundamental coweights as basis.
    pub fn adjoint(name: &str, cartan: &[Vec<i64>]) -> Result<Self> {
        let a = checked_cartan(cartan)?;
        let r = a.rows();
        let simple_coroots = (0..r).map(|j| LatticeVec::from_slice(a.row(j))).collect();
        let simple_roots = (0..r).map(|j| LatticeVec::basis(r, j)).collect();
        Self::assemble(name, a, simple_coroots, simple_roots, true)
    }

    /// Datum with an explicit lattice: row `j` of `coroots` is `α_j` in a basis of `Λ`.
    pub fn with_lattice(name: &str, cartan: &[Vec<i64>], coroots: &[Vec<i64>]) -> Result<Self> {
        let a = checked_cartan(cartan)?;
        let r = a.rows();
        if coroots.len() != r || coroots.iter().any(|c| c.len() != r) {
            return Err(Error::InvalidDatum(format!(
                "coroot coordinate matrix must be {r}×{r} (semisimple data only)"
            )));
        }
        let c = IntMatrix::from_rows(coroots);
        let det = c.det();
        if det == 0 {
            return Err(Error::InvalidDatum(
                "simple coroots are linearly dependent".into(),
            ));
        }
        // roots Ř satisfy C Ř^T = A, i.e. Ř^T = adj(C) A / det(C)
        let adj = adjugate(&c);
        let num = adj.mul(&a);
        let mut roots = vec![LatticeVec::zero(r); r];
        for k in 0..r {
            for j in 0..r {
                if num[(k, j)] % det != 0 {
                    return Err(Error::InvalidDatum(format!(
                        "pairing data inconsistent: root {j} is not integral on this lattice"
                    )));
                }
                roots[j].coords_mut()[k] = num[(k, j)] / det;
            }
        }
        let coroot_vecs: Vec<LatticeVec> =
            coroots.iter().map(|c| LatticeVec::from_slice(c)).collect();
        // adjoint in the sense used here: the basis of Λ is the fundamental coweights
        let adjoint = roots
            .iter()
            .enumerate()
            .all(|(j, r)| *r == LatticeVec::basis(r.dim(), j));
        Self::assemble(name, a, coroot_vecs, roots, adjoint)
    }

    pub fn from_file_spec(spec: &DatumFile) -> Result<Self> {
        match &spec.lattice {
            LatticeSpec::Keyword(k) if k.eq_ignore_ascii_case("adjoint") => {
                Self::adjoint(&spec.name, &spec.cartan)
            }
            LatticeSpec::Keyword(k) => Err(Error::Parse(format!("unknown lattice keyword {k:?}"))),
            LatticeSpec::Coroots(c) => Self::with_lattice(&spec.name, &spec.cartan, c),
        }
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        let spec: DatumFile = toml::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file_spec(&spec)
    }

    fn assemble(
        name: &str,
        cartan: IntMatrix,
        simple_coroots: Vec<LatticeVec>,
        simple_roots: Vec<LatticeVec>,
        adjoint: bool,
    ) -> Result<Self> {
        let r = cartan.rows();
        for i in 0..r {
            for j in 0..r {
                if simple_coroots[i].dot(&simple_roots[j]) != cartan[(i, j)] {
                    return Err(Error::InvalidDatum(format!(
                        "pairing ⟨α_{i}, α̌_{j}⟩ does not match the Cartan matrix"
                    )));
                }
            }
        }
        let reflections: Vec<IntMatrix> = (0..r)
            .map(|j| reflection_matrix(&simple_coroots[j], &simple_roots[j]))
            .collect();
        let elements = enumerate_weyl(&reflections, WEYL_CAP)?;
        let index: HashMap<IntMatrix, WeylIndex> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.matrix.clone(), i))
            .collect();
        let mut datum = RootDatum {
            name: name.to_string(),
            cartan,
            simple_coroots,
            simple_roots,
            adjoint,
            reflections,
            elements: Arc::new(elements),
            index: Arc::new(index),
            positive: Arc::default(),
            positive_set: Arc::default(),
        };
        datum.positive = Arc::new(datum.compute_positive_coroots()?);
        datum.positive_set = Arc::new(datum.positive.iter().map(|c| c.coroot.clone()).collect());
        for (i, w) in datum.elements.iter().enumerate() {
            let inversions = datum
                .positive
                .iter()
                .filter(|c| !datum.positive_set.contains(&w.matrix.apply(&c.coroot)))
                .count();
            if inversions != w.length {
                return Err(Error::InvalidDatum(format!(
                    "element {i}: word length {} but {inversions} inversions",
                    w.length
                )));
            }
        }
        Ok(datum)
    }

    fn compute_positive_coroots(&self) -> Result<Vec<CorootReflection>> {
        let r = self.rank();
        let mut seen: HashMap<LatticeVec, (LatticeVec, Vec<i64>)> = HashMap::new();
        let mut queue = VecDeque::new();
        for j in 0..r {
            let coords: Vec<i64> = (0..r).map(|i| i64::from(i == j)).collect();
            let entry = (
                self.simple_coroots[j].clone(),
                self.simple_roots[j].clone(),
                coords,
            );
            if seen
                .insert(entry.0.clone(), (entry.1.clone(), entry.2.clone()))
                .is_none()
            {
                queue.push_back(entry);
            }
        }
        while let Some((beta, root, coords)) = queue.pop_front() {
            for j in 0..r {
                let k = beta.dot(&self.simple_roots[j]);
                let nb = &beta - &self.simple_coroots[j].scale(k);
                let kr = self.simple_coroots[j].dot(&root);
                let nr = &root - &self.simple_roots[j].scale(kr);
                let mut nc = coords.clone();
                nc[j] -= k;
                if !seen.contains_key(&nb) {
                    seen.insert(nb.clone(), (nr.clone(), nc.clone()));
                    queue.push_back((nb, nr, nc));
                }
                if seen.len() > 4 * WEYL_CAP {
                    return Err(Error::WeylCapExceeded(WEYL_CAP));
                }
            }
        }
        let mut positive: Vec<CorootReflection> = Vec::new();
        for (beta, (root, coords)) in seen {
            if coords.iter().all(|&c| c >= 0) {
                let t = reflection_matrix(&beta, &root);
                let reflection = *self
                    .index
                    .get(&t)
                    .ok_or_else(|| Error::InvalidDatum(format!("reflection of {beta} not in W")))?;
                positive.push(CorootReflection {
                    coroot: beta,
                    root,
                    simple_coords: coords,
                    reflection,
                });
            } else if !coords.iter().all(|&c| c <= 0) {
                return Err(Error::InvalidDatum(format!(
                    "coroot {beta} is neither positive nor negative"
                )));
            }
        }
        positive.sort_by(|a, b| {
            a.height()
                .cmp(&b.height())
                .then_with(|| b.simple_coords.cmp(&a.simple_coords))
        });
        Ok(positive)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Semisimple rank `r`.
    pub fn rank(&self) -> usize {
        self.cartan.rows()
    }

    /// Rank `n` of `Λ`.
    pub fn lattice_rank(&self) -> usize {
        self.simple_coroots.first().map_or(0, |c| c.dim())
    }

    pub fn cartan(&self) -> &IntMatrix {
        &self.cartan
    }

    pub fn is_adjoint(&self) -> bool {
        self.adjoint
    }

    pub fn simple_coroot(&self, j: usize) -> &LatticeVec {
        &self.simple_coroots[j]
    }

    pub fn simple_root(&self, j: usize) -> &LatticeVec {
        &self.simple_roots[j]
    }

    pub fn simple_coroots(&self) -> &[LatticeVec] {
        &self.simple_coroots
    }

    pub fn simple_roots(&self) -> &[LatticeVec] {
        &self.simple_roots
    }

    /// `⟨λ, α̌_j⟩`.
    pub fn pairing(&self, lambda: &[i64], j: usize) -> i64 {
        self.simple_roots[j].dot(lambda)
    }

    /// Fundamental coweight `ω_j` (adjoint data only).
    pub fn fundamental_coweight(&self, j: usize) -> Result<LatticeVec> {
        self.require_adjoint()?;
        self.check_simple(j)?;
        Ok(LatticeVec::basis(self.lattice_rank(), j))
    }

    pub fn require_adjoint(&self) -> Result<()> {
        if self.adjoint {
            Ok(())
        } else {
            Err(Error::NotAdjoint(self.name.clone()))
        }
    }

    pub fn check_simple(&self, j: usize) -> Result<()> {
        if j < self.rank() {
            Ok(())
        } else {
            Err(Error::BadSimpleIndex {
                index: j,
                rank: self.rank(),
            })
        }
    }

    /// Coordinates of `λ ∈ Λ` in the adjoint lattice `Λ_ad` (pairings with the simple roots).
    pub fn to_adjoint_coords(&self, lambda: &[i64]) -> LatticeVec {
        self.simple_roots.iter().map(|r| r.dot(lambda)).collect()
    }

    /// The adjoint datum with the same Cartan matrix.
    pub fn adjoint_form(&self) -> Result<RootDatum> {
        if self.adjoint {
            return Ok(self.clone());
        }
        RootDatum::adjoint(&format!("{}_ad", self.name), &self.cartan.to_rows())
    }

    /// Basis of `Λ` expressed in `Λ_ad` coordinates, as columns.
    pub fn lattice_in_adjoint(&self) -> IntMatrix {
        let n = self.lattice_rank();
        let cols: Vec<LatticeVec> = (0..n)
            .map(|k| self.to_adjoint_coords(&LatticeVec::basis(n, k)))
            .collect();
        IntMatrix::from_columns(self.rank(), &cols)
    }

    pub fn simple_reflection(&self, j: usize) -> &IntMatrix {
        &self.reflections[j]
    }

    /// All of `W`: identity first, then by length and lexicographic reduced word.
    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn element(&self, i: WeylIndex) -> &WeylElement {
        &self.elements[i]
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> WeylIndex {
        0
    }

    pub fn index_of(&self, m: &IntMatrix) -> Option<WeylIndex> {
        self.index.get(m).copied()
    }

    /// Element `s_{i0} s_{i1} …` for a (not necessarily reduced) word.
    pub fn from_word(&self, word: &[usize]) -> Result<WeylIndex> {
        let mut m = IntMatrix::identity(self.lattice_rank());
        for &j in word {
            self.check_simple(j)?;
            m = m.mul(&self.reflections[j]);
        }
        Ok(self.index[&m])
    }

    pub fn simple(&self, j: usize) -> WeylIndex {
        self.index[&self.reflections[j]]
    }

    pub fn mul(&self, a: WeylIndex, b: WeylIndex) -> WeylIndex {
        let m = self.elements[a].matrix.mul(&self.elements[b].matrix);
        self.index[&m]
    }

    pub fn inverse(&self, a: WeylIndex) -> WeylIndex {
        let mut w = self.elements[a].word.clone();
        w.reverse();
        self.from_word(&w).expect("valid word")
    }

    pub fn length(&self, a: WeylIndex) -> usize {
        self.elements[a].length
    }

    /// `w · λ`.
    pub fn act(&self, w: WeylIndex, lambda: &[i64]) -> LatticeVec {
        self.elements[w].matrix.apply(lambda)
    }

    pub fn positive_coroots(&self) -> &[CorootReflection] {
        &self.positive
    }

    pub fn is_positive_coroot(&self, v: &LatticeVec) -> bool {
        self.positive_set.contains(v)
    }

    pub fn is_coroot(&self, v: &LatticeVec) -> bool {
        self.positive_set.contains(v) || self.positive_set.contains(&-v)
    }

    /// Index into [`Self::positive_coroots`] of `±β`.
    pub fn positive_coroot_index(&self, v: &LatticeVec) -> Option<usize> {
        let neg = -v;
        self.positive
            .iter()
            .position(|c| &c.coroot == v || c.coroot == neg)
    }

    pub fn longest_element(&self) -> WeylIndex {
        self.order() - 1
    }

    /// `ℓ(vw) = ℓ(v) + ℓ(w)`.
    pub fn length_additive(&self, v: WeylIndex, w: WeylIndex) -> bool {
        self.length(self.mul(v, w)) == self.length(v) + self.length(w)
    }

    /// Minimal-length representatives of `W/⟨s⟩`.
    pub fn coset_representatives(&self, s: usize) -> Result<Vec<WeylIndex>> {
        self.check_simple(s)?;
        let si = self.simple(s);
        Ok((0..self.order())
            .filter(|&w| self.length(w) < self.length(self.mul(w, si)))
            .collect())
    }

    /// Short display of an element by its reduced word, 1-based (`1`, `s1`, `s1s2`, …).
    pub fn label(&self, w: WeylIndex) -> String {
        let word = &self.elements[w].word;
        if word.is_empty() {
            "1".to_string()
        } else {
            word.iter().map(|j| format!("s{}", j + 1)).collect()
        }
    }
}

/// `λ ↦ λ − ⟨λ, root⟩ coroot`.
pub fn reflection_matrix(coroot: &LatticeVec, root: &LatticeVec) -> IntMatrix {
    let n = coroot.dim();
    let mut m = IntMatrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] -= coroot[i] * root[j];
        }
    }
    m
}

/// Breadth-first closure of the identity under left multiplication by the generators.
///
/// Returns one entry per group element, ordered by length and then by lexicographically
/// smallest reduced word.
pub fn enumerate_weyl(generators: &[IntMatrix], cap: usize) -> Result<Vec<WeylElement>> {
    let n = generators.first().map_or(0, |g| g.rows());
    let identity = WeylElement {
        matrix: IntMatrix::identity(n),
        word: vec![],
        length: 0,
    };
    let mut seen: HashMap<IntMatrix, usize> = HashMap::new();
    seen.insert(identity.matrix.clone(), 0);
    let mut all = vec![identity];
    let mut layer: Vec<usize> = vec![0];
    let mut length = 0;
    while !layer.is_empty() {
        length += 1;
        let mut next: HashMap<IntMatrix, Vec<usize>> = HashMap::new();
        for &w in &layer {
            for (j, g) in generators.iter().enumerate() {
                let m = g.mul(&all[w].matrix);
                if seen.contains_key(&m) {
                    continue;
                }
                let mut word = vec![j];
                word.extend_from_slice(&all[w].word);
                next.entry(m)
                    .and_modify(|best| {
                        if word < *best {
                            *best = word.clone();
                        }
                    })
                    .or_insert(word);
            }
        }
        let mut fresh: Vec<(Vec<usize>, IntMatrix)> =
            next.into_iter().map(|(m, w)| (w, m)).collect();
        fresh.sort();
        layer.clear();
        for (word, matrix) in fresh {
            if all.len() >= cap {
                return Err(Error::WeylCapExceeded(cap));
            }
            seen.insert(matrix.clone(), all.len());
            layer.push(all.len());
            all.push(WeylElement {
                matrix,
                word,
                length,
            });
        }
    }
    Ok(all)
}

fn checked_cartan(rows: &[Vec<i64>]) -> Result<IntMatrix> {
    let r = rows.len();
    if r == 0 || rows.iter().any(|x| x.len() != r) {
        return Err(Error::InvalidDatum(
            "Cartan matrix must be square and nonempty".into(),
        ));
    }
    let a = IntMatrix::from_rows(rows);
    for i in 0..r {
        if a[(i, i)] != 2 {
            return Err(Error::InvalidDatum(format!("A[{i}][{i}] must be 2")));
        }
        for j in 0..r {
            if i != j {
                if a[(i, j)] > 0 {
                    return Err(Error::InvalidDatum(format!("A[{i}][{j}] must be ≤ 0")));
                }
                if (a[(i, j)] == 0) != (a[(j, i)] == 0) {
                    return Err(Error::InvalidDatum(format!(
                        "A[{i}][{j}] and A[{j}][{i}] must vanish together"
                    )));
                }
            }
        }
    }
    // finite type iff every principal minor is positive
    for mask in 1u32..(1 << r) {
        let idx: Vec<usize> = (0..r).filter(|&i| mask & (1 << i) != 0).collect();
        let sub: Vec<Vec<i64>> = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| a[(i, j)]).collect())
            .collect();
        let d = IntMatrix::from_rows(&sub).det();
        if d <= 0 {
            return Err(Error::NotFiniteType(format!(
                "principal minor on {idx:?} is {d}"
            )));
        }
    }
    Ok(a)
}

fn adjugate(m: &IntMatrix) -> IntMatrix {
    let n = m.rows();
    let mut adj = IntMatrix::zeros(n, n);
    if n == 1 {
        adj[(0, 0)] = 1;
        return adj;
    }
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i64>> = (0..n)
                .filter(|&r| r != j)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| m[(r, c)]).collect())
                .collect();
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            adj[(i, j)] = sign * IntMatrix::from_rows(&minor).det();
        }
    }
    adj
}
