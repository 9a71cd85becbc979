//! Decategorified monodromic Hecke calculus: standard-filtration multiplicities of
//! Bott–Samelson objects and formal rewriting of convolution words in `Δ_w`, `∇_w`, `Ξ_s`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rootdata::{RootDatum, WeylIndex};

/// Longest word accepted by [`subword_char`].
pub const SUBWORD_CAP: usize = 20;

/// Multiplicity of each `Δ_w` in a standard filtration.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DeltaCharacter {
    mult: BTreeMap<WeylIndex, usize>,
}

impl DeltaCharacter {
    pub fn unit(datum: &RootDatum) -> Self {
        Self::from_entries([(datum.identity(), 1)])
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (WeylIndex, usize)>) -> Self {
        let mut mult = BTreeMap::new();
        for (w, m) in entries {
            if m > 0 {
                *mult.entry(w).or_insert(0) += m;
            }
        }
        DeltaCharacter { mult }
    }

    /// Sorted by element index, zeros omitted.
    pub fn entries(&self) -> Vec<(WeylIndex, usize)> {
        self.mult.iter().map(|(&w, &m)| (w, m)).collect()
    }

    pub fn multiplicity(&self, w: WeylIndex) -> usize {
        self.mult.get(&w).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.mult.values().sum()
    }

    /// `{s1s2: 1, …}` with element labels.
    pub fn describe(&self, datum: &RootDatum) -> String {
        let parts: Vec<String> = self
            .mult
            .iter()
            .map(|(&w, m)| format!("{}: {m}", datum.label(w)))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

fn check_word(datum: &RootDatum, word: &[usize]) -> Result<()> {
    word.iter().try_for_each(|&s| datum.check_simple(s))
}

/// Multiplicities for `Ξ_{s_1} ∗ ⋯ ∗ Ξ_{s_r}`: each letter maps `Δ_u` to `Δ_u` and `Δ_{us}`.
pub fn delta_char_bott_samelson(datum: &RootDatum, word: &[usize]) -> Result<DeltaCharacter> {
    check_word(datum, word)?;
    let mut cur = DeltaCharacter::unit(datum);
    for &s in word {
        let sj = datum.simple(s);
        let mut next = BTreeMap::new();
        for (&u, &m) in &cur.mult {
            *next.entry(u).or_insert(0) += m;
            *next.entry(datum.mul(u, sj)).or_insert(0) += m;
        }
        cur = DeltaCharacter { mult: next };
    }
    Ok(cur)
}

/// Brute force over all `2^r` subwords, multiplying the chosen letters in order.
pub fn subword_char(datum: &RootDatum, word: &[usize]) -> Result<DeltaCharacter> {
    check_word(datum, word)?;
    if word.len() > SUBWORD_CAP {
        return Err(Error::EnumerationCap(format!(
            "word of length {} exceeds {SUBWORD_CAP}",
            word.len()
        )));
    }
    let mut mult = BTreeMap::new();
    for mask in 0u32..(1 << word.len()) {
        let mut u = datum.identity();
        for (k, &s) in word.iter().enumerate() {
            if mask >> k & 1 == 1 {
                u = datum.mul(u, datum.simple(s));
            }
        }
        *mult.entry(u).or_insert(0) += 1;
    }
    Ok(DeltaCharacter { mult })
}

/// The character of the big tilting object: every `Δ_w` exactly once.
pub fn big_tilting_char(datum: &RootDatum) -> DeltaCharacter {
    DeltaCharacter::from_entries((0..datum.order()).map(|w| (w, 1)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Symbol {
    Delta(WeylIndex),
    Nabla(WeylIndex),
    Xi(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StandardKind {
    Delta,
    Nabla,
}

impl StandardKind {
    pub fn symbol(self, w: WeylIndex) -> Symbol {
        match self {
            StandardKind::Delta => Symbol::Delta(w),
            StandardKind::Nabla => Symbol::Nabla(w),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Convolution {
    Standard(Symbol),
    LengthNotAdditive,
}

/// `Δ_v ∗ Δ_w = Δ_{vw}` and `∇_v ∗ ∇_w = ∇_{vw}` when lengths add; no rule otherwise.
pub fn convolve_standards(
    datum: &RootDatum,
    kind: StandardKind,
    v: WeylIndex,
    w: WeylIndex,
) -> Convolution {
    if datum.length_additive(v, w) {
        Convolution::Standard(kind.symbol(datum.mul(v, w)))
    } else {
        Convolution::LengthNotAdditive
    }
}

/// A formal convolution word; the empty word is the unit `Δ_1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvolutionExpr {
    pub factors: Vec<Symbol>,
}

impl ConvolutionExpr {
    pub fn new(factors: Vec<Symbol>) -> Self {
        ConvolutionExpr { factors }
    }

    pub fn display<'a>(&'a self, datum: &'a RootDatum) -> impl fmt::Display + 'a {
        ExprDisplay { expr: self, datum }
    }
}

struct ExprDisplay<'a> {
    expr: &'a ConvolutionExpr,
    datum: &'a RootDatum,
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.expr.factors.is_empty() {
            return write!(f, "Δ_1");
        }
        let parts: Vec<String> = self
            .expr
            .factors
            .iter()
            .map(|s| match *s {
                Symbol::Delta(w) => format!("Δ_{}", self.datum.label(w)),
                Symbol::Nabla(w) => format!("∇_{}", self.datum.label(w)),
                Symbol::Xi(s) => format!("Ξ_s{}", s + 1),
            })
            .collect();
        write!(f, "{}", parts.join(" ∗ "))
    }
}

fn is_unit(datum: &RootDatum, s: Symbol) -> bool {
    matches!(s, Symbol::Delta(w) | Symbol::Nabla(w) if w == datum.identity())
}

fn cancels(datum: &RootDatum, a: Symbol, b: Symbol) -> bool {
    match (a, b) {
        (Symbol::Delta(w), Symbol::Nabla(v)) | (Symbol::Nabla(v), Symbol::Delta(w)) => {
            v == datum.inverse(w)
        }
        _ => false,
    }
}

/// Removes adjacent `Δ_w ∇_{w⁻¹}` and `∇_{w⁻¹} Δ_w` pairs and unit factors until none remain.
pub fn simplify_inverse_pairs(datum: &RootDatum, expr: &ConvolutionExpr) -> ConvolutionExpr {
    let mut stack: Vec<Symbol> = Vec::with_capacity(expr.factors.len());
    for &s in &expr.factors {
        if is_unit(datum, s) {
            continue;
        }
        match stack.last() {
            Some(&top) if cancels(datum, top, s) => {
                stack.pop();
            }
            _ => stack.push(s),
        }
    }
    ConvolutionExpr { factors: stack }
}

/// Whether localized standards `Δ_w^{(β)}` and `Δ_v^{(β)}` can be linked: `v ∈ {w, wt}`.
pub fn localized_block(datum: &RootDatum, w: WeylIndex, v: WeylIndex, coroot: usize) -> bool {
    let t = datum.positive_coroots()[coroot].reflection;
    v == w || v == datum.mul(w, t)
}

/// The blocks `{w, wt}` for the coroot, each listed once with `w < wt` by index.
pub fn localized_pairs(datum: &RootDatum, coroot: usize) -> Vec<(WeylIndex, WeylIndex)> {
    let t = datum.positive_coroots()[coroot].reflection;
    (0..datum.order())
        .filter_map(|w| {
            let wt = datum.mul(w, t);
            (w < wt).then_some((w, wt))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pgl3() -> RootDatum {
        RootDatum::preset("PGL3").unwrap()
    }

    fn all_words(rank: usize, max_len: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        let mut layer = vec![vec![]];
        for _ in 0..max_len {
            layer = layer
                .iter()
                .flat_map(|w: &Vec<usize>| {
                    (0..rank).map(move |s| {
                        let mut x = w.clone();
                        x.push(s);
                        x
                    })
                })
                .collect();
            out.extend(layer.iter().cloned());
        }
        out
    }

    #[test]
    fn small_characters() {
        let d = RootDatum::preset("PGL2").unwrap();
        assert_eq!(
            delta_char_bott_samelson(&d, &[0]).unwrap().entries(),
            vec![(0, 1), (1, 1)]
        );
        assert_eq!(
            delta_char_bott_samelson(&d, &[0, 0]).unwrap().entries(),
            vec![(0, 2), (1, 2)]
        );
        assert_eq!(subword_char(&d, &[]).unwrap().entries(), vec![(0, 1)]);
    }

    #[test]
    fn pgl3_braid_word() {
        let d = pgl3();
        let c = delta_char_bott_samelson(&d, &[0, 1, 0]).unwrap();
        let w = |word: &[usize]| d.from_word(word).unwrap();
        assert_eq!(c.multiplicity(w(&[])), 2);
        assert_eq!(c.multiplicity(w(&[0])), 2);
        for x in [&[1][..], &[0, 1], &[1, 0], &[0, 1, 0]] {
            assert_eq!(c.multiplicity(w(x)), 1);
        }
        assert_eq!(c.total(), 8);
    }

    #[test]
    fn recursion_matches_subwords() {
        for name in ["PGL2", "PGL3"] {
            let d = RootDatum::preset(name).unwrap();
            for word in all_words(d.rank(), 4) {
                let a = delta_char_bott_samelson(&d, &word).unwrap();
                assert_eq!(a, subword_char(&d, &word).unwrap());
                assert_eq!(a.total(), 1 << word.len());
            }
        }
    }

    #[test]
    fn subword_cap() {
        let d = RootDatum::preset("PGL2").unwrap();
        assert!(matches!(
            subword_char(&d, &[0; 21]),
            Err(Error::EnumerationCap(_))
        ));
        assert!(subword_char(&d, &[1]).is_err());
    }

    #[test]
    fn standard_convolution() {
        let d = pgl3();
        let (s1, s2) = (d.simple(0), d.simple(1));
        assert_eq!(
            convolve_standards(&d, StandardKind::Delta, s1, s2),
            Convolution::Standard(Symbol::Delta(d.mul(s1, s2)))
        );
        assert_eq!(
            convolve_standards(&d, StandardKind::Nabla, 0, s2),
            Convolution::Standard(Symbol::Nabla(s2))
        );
        assert_eq!(
            convolve_standards(&d, StandardKind::Delta, s1, s1),
            Convolution::LengthNotAdditive
        );
    }

    #[test]
    fn inverse_pairs() {
        let d = pgl3();
        let w = d.from_word(&[0, 1]).unwrap();
        let winv = d.inverse(w);
        let e = ConvolutionExpr::new(vec![Symbol::Delta(w), Symbol::Nabla(winv)]);
        assert!(simplify_inverse_pairs(&d, &e).factors.is_empty());
        assert_eq!(
            simplify_inverse_pairs(&d, &e).display(&d).to_string(),
            "Δ_1"
        );

        let v = d.simple(1);
        let e = ConvolutionExpr::new(vec![
            Symbol::Delta(v),
            Symbol::Delta(w),
            Symbol::Nabla(winv),
        ]);
        assert_eq!(
            simplify_inverse_pairs(&d, &e).factors,
            vec![Symbol::Delta(v)]
        );

        let e = ConvolutionExpr::new(vec![Symbol::Nabla(winv), Symbol::Xi(0), Symbol::Delta(w)]);
        assert_eq!(simplify_inverse_pairs(&d, &e), e);
        assert_eq!(e.display(&d).to_string(), "∇_s2s1 ∗ Ξ_s1 ∗ Δ_s1s2");
    }

    #[test]
    fn blocks() {
        let d = pgl3();
        let s2 = d.simple(1);
        assert!(localized_block(&d, s2, d.from_word(&[1, 0]).unwrap(), 0));
        assert!(localized_block(&d, s2, s2, 0));
        assert!(!localized_block(&d, 0, s2, 0));
        for b in 0..3 {
            let pairs = localized_pairs(&d, b);
            assert_eq!(pairs.len(), 3);
            let mut seen: Vec<_> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
            seen.sort();
            assert_eq!(seen, (0..6).collect::<Vec<_>>());
        }
    }

    fn symbol() -> impl Strategy<Value = Symbol> {
        prop_oneof![
            (0usize..6).prop_map(Symbol::Delta),
            (0usize..6).prop_map(Symbol::Nabla),
            (0usize..2).prop_map(Symbol::Xi),
        ]
    }

    proptest! {
        #[test]
        fn simplification_is_idempotent(f in prop::collection::vec(symbol(), 0..10)) {
            let d = pgl3();
            let once = simplify_inverse_pairs(&d, &ConvolutionExpr::new(f));
            prop_assert_eq!(simplify_inverse_pairs(&d, &once), once);
        }

        #[test]
        fn convolution_associative(u in 0usize..6, v in 0usize..6, w in 0usize..6) {
            let d = pgl3();
            let k = StandardKind::Delta;
            let left = match convolve_standards(&d, k, u, v) {
                Convolution::Standard(Symbol::Delta(uv)) => convolve_standards(&d, k, uv, w),
                _ => Convolution::LengthNotAdditive,
            };
            let right = match convolve_standards(&d, k, v, w) {
                Convolution::Standard(Symbol::Delta(vw)) => convolve_standards(&d, k, u, vw),
                _ => Convolution::LengthNotAdditive,
            };
            if d.length(u) + d.length(v) + d.length(w) == d.length(d.mul(d.mul(u, v), w)) {
                prop_assert_eq!(left, right);
                prop_assert!(matches!(left, Convolution::Standard(_)));
            }
        }
    }
}
