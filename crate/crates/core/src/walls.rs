//! Fixed loci of Weyl elements on the dual torus, walls, and graph intersections.
//!
//! Everything here is a computation with finitely generated abelian groups: the fixed
//! subscheme of `u` on `Ť = Spec k[Λ]` has character group `Q = Λ/(u−1)Λ`, its components
//! are indexed by characters `ψ` of the torsion of `Q`, and the function `e^{β'} − 1`
//! vanishes on the component `ψ` iff `β'` has zero free part in `Q` and `ψ(β') = 1`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::lattice::{integer_kernel, IntMatrix, LatticeVec, QuotientGroup, QuotientImage};
use crate::rootdata::{RootDatum, WeylIndex};

/// Largest number of characters [`fq_point_count`] will enumerate.
pub const POINT_COUNT_CAP: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedLocus {
    pub element: WeylIndex,
    pub quotient: QuotientGroup,
    /// Image in `Q` of each positive coroot, in the datum's order.
    pub coroot_images: Vec<QuotientImage>,
}

impl FixedLocus {
    pub fn free_rank(&self) -> usize {
        self.quotient.free_rank
    }

    pub fn invariant_factors(&self) -> &[i64] {
        &self.quotient.invariant_factors
    }

    /// Characters of the torsion part, one per connected component.
    pub fn components(&self) -> Vec<Vec<i64>> {
        self.quotient.torsion_characters()
    }

    /// Invariant factors divisible by `p`; over `F_p` their components collapse.
    pub fn characteristic_flags(&self, field: FieldSpec) -> Vec<i64> {
        match field {
            FieldSpec::Rational => vec![],
            FieldSpec::Prime(p) => self
                .invariant_factors()
                .iter()
                .copied()
                .filter(|d| d % p as i64 == 0)
                .collect(),
        }
    }

    /// Phase `a/b` of the component `ψ` on each basis vector of `Λ`: the point has
    /// coordinates `exp(2πi a/b)` along the torsion directions.
    pub fn component_phases(&self, datum: &RootDatum, psi: &[i64]) -> Vec<(i64, i64)> {
        let n = datum.lattice_rank();
        (0..n)
            .map(|i| {
                let img = self.quotient.image(&LatticeVec::basis(n, i));
                self.quotient.character_phase(psi, &img.torsion)
            })
            .collect()
    }
}

/// `Fix(u)` on `Ť`, through the Smith normal form of `u − 1`.
pub fn fixed_locus(datum: &RootDatum, u: WeylIndex) -> FixedLocus {
    let n = datum.lattice_rank();
    let relations = datum.element(u).matrix.sub(&IntMatrix::identity(n));
    let quotient = QuotientGroup::new(&relations);
    let coroot_images = datum
        .positive_coroots()
        .iter()
        .map(|c| quotient.image(&c.coroot))
        .collect();
    FixedLocus {
        element: u,
        quotient,
        coroot_images,
    }
}

/// Whether `e^{β'} − 1` vanishes on the component `ψ` (`β'` by positive-coroot index).
pub fn component_on_wall(fl: &FixedLocus, coroot: usize, psi: &[i64]) -> bool {
    let img = &fl.coroot_images[coroot];
    img.free.iter().all(|&x| x == 0) && fl.quotient.character_phase(psi, &img.torsion).0 == 0
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ComponentStatus {
    /// Lies on the wall of this (non-allowed) positive coroot, so localization removes it.
    Killed { by: usize },
    /// Survives on the allowed wall between `w` and `wt`.
    Allowed,
    /// Survives although the pair is not `{w, wt}` or the component is off the allowed wall.
    Violation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentVerdict {
    pub character: Vec<i64>,
    /// Coordinates of the component's torsion point, as phases `a/b`.
    pub phases: Vec<(i64, i64)>,
    pub on_allowed_wall: bool,
    pub status: ComponentStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairReport {
    pub w: WeylIndex,
    pub v: WeylIndex,
    /// `w⁻¹v`.
    pub u: WeylIndex,
    pub free_rank: usize,
    pub invariant_factors: Vec<i64>,
    pub components: Vec<ComponentVerdict>,
}

impl PairReport {
    pub fn survives(&self) -> bool {
        self.components
            .iter()
            .any(|c| !matches!(c.status, ComponentStatus::Killed { .. }))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub w: WeylIndex,
    pub v: WeylIndex,
    pub character: Vec<i64>,
    pub phases: Vec<(i64, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparationReport {
    /// Index of `β` among the positive coroots.
    pub allowed: usize,
    pub reflection: WeylIndex,
    /// One entry per unordered pair `w < v`, in enumeration order.
    pub pairs: Vec<PairReport>,
    pub violations: Vec<Violation>,
    /// Invariant factors divisible by the characteristic, per pair (empty over `Q`).
    pub characteristic_flags: Vec<(WeylIndex, WeylIndex, Vec<i64>)>,
}

impl SeparationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Unordered pairs `{w, v}` with a surviving intersection.
    pub fn surviving_pairs(&self) -> Vec<(WeylIndex, WeylIndex)> {
        self.pairs
            .iter()
            .filter(|p| p.survives())
            .map(|p| (p.w, p.v))
            .collect()
    }
}

/// For every pair `w ≠ v`, decide which components of `Γ_w ∩ Γ_v ≅ Fix(w⁻¹v)` survive
/// localization away from every wall except that of the positive coroot `allowed`.
pub fn separation_check(
    datum: &RootDatum,
    allowed: usize,
    field: FieldSpec,
) -> Result<SeparationReport> {
    let coroots = datum.positive_coroots();
    let t = coroots
        .get(allowed)
        .ok_or_else(|| Error::InvalidDatum(format!("no positive coroot with index {allowed}")))?
        .reflection;
    let mut pairs = Vec::new();
    let mut violations = Vec::new();
    let mut characteristic_flags = Vec::new();
    let mut cache: Vec<Option<FixedLocus>> = vec![None; datum.order()];
    for w in 0..datum.order() {
        for v in w + 1..datum.order() {
            let u = datum.mul(datum.inverse(w), v);
            let fl = cache[u]
                .get_or_insert_with(|| fixed_locus(datum, u))
                .clone();
            let flags = fl.characteristic_flags(field);
            if !flags.is_empty() {
                characteristic_flags.push((w, v, flags));
            }
            let mut components = Vec::new();
            for psi in fl.components() {
                let on_allowed = component_on_wall(&fl, allowed, &psi);
                let killer =
                    (0..coroots.len()).find(|&b| b != allowed && component_on_wall(&fl, b, &psi));
                let status = match killer {
                    Some(by) => ComponentStatus::Killed { by },
                    None if u == t && on_allowed => ComponentStatus::Allowed,
                    None => ComponentStatus::Violation,
                };
                let phases = fl.component_phases(datum, &psi);
                if status == ComponentStatus::Violation {
                    violations.push(Violation {
                        w,
                        v,
                        character: psi.clone(),
                        phases: phases.clone(),
                    });
                }
                components.push(ComponentVerdict {
                    character: psi,
                    phases,
                    on_allowed_wall: on_allowed,
                    status,
                });
            }
            pairs.push(PairReport {
                w,
                v,
                u,
                free_rank: fl.free_rank(),
                invariant_factors: fl.invariant_factors().to_vec(),
                components,
            });
        }
    }
    Ok(SeparationReport {
        allowed,
        reflection: t,
        pairs,
        violations,
        characteristic_flags,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PointCount {
    pub formula: u64,
    pub brute_force: u64,
}

/// Number of `u`-fixed points of `Ť(F_q)`: the closed formula from the invariant factors,
/// alongside a direct enumeration of all characters `Λ → F_q^×`.
pub fn fq_point_count(datum: &RootDatum, u: WeylIndex, q: u64) -> Result<PointCount> {
    if q < 2 {
        return Err(Error::InvalidField(format!("{q} is not a prime power")));
    }
    let n = datum.lattice_rank();
    let m = q - 1;
    let total = (m as u128).pow(n as u32);
    if total > POINT_COUNT_CAP as u128 {
        return Err(Error::EnumerationCap(format!(
            "{total} characters exceed the cap of {POINT_COUNT_CAP}"
        )));
    }
    let fl = fixed_locus(datum, u);
    let formula = m.pow(fl.free_rank() as u32)
        * fl.invariant_factors()
            .iter()
            .map(|&d| gcd(d as u64, m))
            .product::<u64>();

    // x ∈ (Z/m)^n is fixed iff x · (u − 1) ≡ 0
    let rel = datum.element(u).matrix.sub(&IntMatrix::identity(n));
    let mi = m as i64;
    let mut x = vec![0i64; n];
    let mut brute_force = 0;
    loop {
        let fixed = (0..n).all(|j| {
            (0..n)
                .map(|i| x[i] * rel[(i, j)])
                .sum::<i64>()
                .rem_euclid(mi)
                == 0
        });
        if fixed {
            brute_force += 1;
        }
        let mut k = 0;
        while k < n {
            x[k] += 1;
            if x[k] < mi {
                break;
            }
            x[k] = 0;
            k += 1;
        }
        if k == n {
            break;
        }
    }
    Ok(PointCount {
        formula,
        brute_force,
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Character group of `Γ_w ∩ Γ_v` inside the torus with character lattice `L ⊂ Λ ⊕ Λ`.
///
/// `basis` holds a basis of `L` as columns of a `2n × 2n` matrix. The graph of `w` is cut
/// out by the kernel of `φ_w(λ, μ) = w⁻¹λ + μ`, so the intersection has characters
/// `L / (ker φ_w + ker φ_v)`.
pub fn graph_intersection(
    datum: &RootDatum,
    basis: &IntMatrix,
    w: WeylIndex,
    v: WeylIndex,
) -> QuotientGroup {
    let n = datum.lattice_rank();
    let phi = |x: WeylIndex| {
        let winv = &datum.element(datum.inverse(x)).matrix;
        let mut m = IntMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = winv[(i, j)];
            }
            m[(i, n + i)] = 1;
        }
        m.mul(basis)
    };
    let mut gens = integer_kernel(&phi(w));
    gens.extend(integer_kernel(&phi(v)));
    QuotientGroup::new(&IntMatrix::from_columns(2 * n, &gens))
}

/// Basis (as columns) of `Λ ⊕ Λ`.
pub fn product_lattice(n: usize) -> IntMatrix {
    IntMatrix::identity(2 * n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rational
    }

    #[test]
    fn identity_has_full_free_rank() {
        let d = RootDatum::preset("PGL3").unwrap();
        let fl = fixed_locus(&d, 0);
        assert_eq!(fl.free_rank(), 2);
        assert!(fl.invariant_factors().is_empty());
        assert_eq!(fl.components(), vec![Vec::<i64>::new()]);
    }

    #[test]
    fn rank_one_reflections() {
        let pgl2 = RootDatum::preset("PGL2").unwrap();
        let fl = fixed_locus(&pgl2, pgl2.simple(0));
        assert_eq!((fl.free_rank(), fl.invariant_factors()), (0, &[2][..]));
        assert!(fl
            .components()
            .iter()
            .all(|psi| component_on_wall(&fl, 0, psi)));

        let sl2 = RootDatum::preset("SL2").unwrap();
        let fl = fixed_locus(&sl2, sl2.simple(0));
        assert_eq!(fl.invariant_factors(), &[2]);
        assert!(component_on_wall(&fl, 0, &[0]));
        assert!(!component_on_wall(&fl, 0, &[1]));
        assert_eq!(fl.component_phases(&sl2, &[1]), vec![(1, 2)]);
    }

    #[test]
    fn separation_on_adjoint_presets() {
        for name in ["PGL2", "PGL3", "B2", "G2"] {
            let d = RootDatum::preset(name).unwrap();
            for b in 0..d.positive_coroots().len() {
                let rep = separation_check(&d, b, q()).unwrap();
                assert!(rep.passed(), "{name} β{b}: {:?}", rep.violations);
                let t = d.positive_coroots()[b].reflection;
                for (w, v) in rep.surviving_pairs() {
                    assert_eq!(d.mul(w, t), v);
                }
                assert_eq!(rep.surviving_pairs().len(), d.order() / 2);
            }
        }
    }

    #[test]
    fn pgl3_pair_killed_by_other_wall() {
        let d = RootDatum::preset("PGL3").unwrap();
        let rep = separation_check(&d, 0, q()).unwrap();
        let s2 = d.simple(1);
        let pair = rep.pairs.iter().find(|p| p.w == 0 && p.v == s2).unwrap();
        assert!(pair
            .components
            .iter()
            .all(|c| c.status == ComponentStatus::Killed { by: 1 }));
    }

    #[test]
    fn sl2_has_one_violation() {
        let d = RootDatum::preset("SL2").unwrap();
        let rep = separation_check(&d, 0, q()).unwrap();
        assert_eq!(rep.violations.len(), 1);
        assert_eq!(rep.violations[0].phases, vec![(1, 2)]);
        let pair = &rep.pairs[0];
        assert_eq!(pair.components.len(), 2);
        assert_eq!(pair.components[0].status, ComponentStatus::Allowed);
    }

    #[test]
    fn point_counts_agree() {
        for name in ["PGL2", "SL2", "PGL3", "B2"] {
            let d = RootDatum::preset(name).unwrap();
            for u in 0..d.order() {
                for qq in [3, 4, 5, 7, 8, 9] {
                    let c = fq_point_count(&d, u, qq).unwrap();
                    assert_eq!(c.formula, c.brute_force, "{name} u={u} q={qq}");
                }
            }
        }
        let d = RootDatum::preset("PGL3").unwrap();
        let c = fq_point_count(&d, d.from_word(&[0, 1]).unwrap(), 7).unwrap();
        assert_eq!(c.formula, 3);
        let pgl2 = RootDatum::preset("PGL2").unwrap();
        assert_eq!(fq_point_count(&pgl2, 1, 5).unwrap().formula, 2);
    }

    #[test]
    fn graph_intersections_depend_on_quotient_element() {
        for name in ["PGL2", "SL2", "PGL3"] {
            let d = RootDatum::preset(name).unwrap();
            let basis = product_lattice(d.lattice_rank());
            for w in 0..d.order() {
                for v in 0..d.order() {
                    let g = graph_intersection(&d, &basis, w, v);
                    let fl = fixed_locus(&d, d.mul(d.inverse(w), v));
                    assert_eq!(g.free_rank, fl.free_rank());
                    assert_eq!(g.invariant_factors, fl.invariant_factors());
                }
            }
        }
    }
}
