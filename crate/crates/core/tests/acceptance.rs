use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ::soergel::bimodule::{
    fraction_rank, generic_decompose, hom_bounded, MatrixBimodule, SeparatingPoint, SpanSolver,
};
use ::soergel::charring::{omega, selfadjoint_matrix, LaurentPoly};
use ::soergel::hecke::{delta_char_bott_samelson, localized_block, localized_pairs, subword_char};
use ::soergel::soergel::{
    basis_check, end_check, localized_split_check, pi1_comparison, ses_rank1, steinberg_basis,
};
use ::soergel::walls::{fq_point_count, separation_check, ComponentStatus};
use ::soergel::{FieldSpec, LatticeVec, RootDatum};

type Outcome = Result<String, String>;

const Q: FieldSpec = FieldSpec::Rational;

fn datum(name: &str) -> RootDatum {
    RootDatum::preset(name).expect("preset")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn words(rank: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut layer: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| {
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

fn c1_rank_one_endomorphisms() -> Outcome {
    let d = datum("PGL2");
    let bs = MatrixBimodule::bott_samelson(&d, &[0], Q).map_err(|e| e.to_string())?;
    let maps = hom_bounded(&bs, &bs, 3).map_err(|e| e.to_string())?;
    let mats: Vec<_> = maps.iter().map(|m| m.matrix.clone()).collect();
    let point = SeparatingPoint::new(&d, Q).map_err(|e| e.to_string())?;
    let rank = fraction_rank(&mats, point.values()).map_err(|e| e.to_string())?;
    ensure(rank == 2, || format!("fraction rank {rank}"))?;
    let solver = SpanSolver::new(&d, vec![bs.identity(), bs.left_action(0).clone()])
        .map_err(|e| e.to_string())?;
    for m in &mats {
        ensure(solver.solve(m).is_in_span(), || {
            "bounded map outside span".into()
        })?;
    }
    Ok(format!(
        "{} bounded maps, fraction rank 2, all in span",
        mats.len()
    ))
}

fn c2_selfadjoint_determinant() -> Outcome {
    let mut checked = 0;
    for name in ["PGL2", "PGL3"] {
        let d = datum(name);
        for s in 0..d.rank() {
            let m = selfadjoint_matrix(&d, s, Q).map_err(|e| e.to_string())?;
            let w = omega(&d, s).map_err(|e| e.to_string())?;
            let sw = d.act(d.simple(s), &w);
            let expect = -&LaurentPoly::monomial(Q, &w + &sw);
            let det = m.det().ok_or("no determinant")?;
            ensure(det == expect, || format!("{name} s{}: det {det}", s + 1))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} simple reflections"))
}

/// Separation on adjoint groups plus the SL2 violation; returns a combinatorial summary.
fn separation_summary(field: FieldSpec) -> Result<Vec<String>, String> {
    let mut summary = Vec::new();
    for name in ["PGL2", "PGL3"] {
        let d = datum(name);
        for b in 0..d.positive_coroots().len() {
            let rep = separation_check(&d, b, field).map_err(|e| e.to_string())?;
            ensure(rep.passed(), || {
                format!("{name} coroot {b}: {:?}", rep.violations)
            })?;
            summary.push(format!("{name}/{b}: {:?}", rep.surviving_pairs()));
        }
    }
    let d = datum("SL2");
    let rep = separation_check(&d, 0, field).map_err(|e| e.to_string())?;
    ensure(rep.violations.len() == 1, || {
        format!("SL2 violations {:?}", rep.violations)
    })?;
    let v = &rep.violations[0];
    ensure((v.w, v.v) == (0, 1) && v.phases == vec![(1, 2)], || {
        format!("SL2 violation {v:?}")
    })?;
    let pair = &rep.pairs[0];
    ensure(pair.components.len() == 2, || {
        "SL2 fixed locus is not two points".into()
    })?;
    let off = pair
        .components
        .iter()
        .filter(|c| !c.on_allowed_wall)
        .count();
    let allowed = pair
        .components
        .iter()
        .filter(|c| c.status == ComponentStatus::Allowed)
        .count();
    ensure(off == 1 && allowed == 1, || {
        format!("SL2 components {:?}", pair.components)
    })?;
    summary.push(format!("SL2: {:?}", rep.violations));
    Ok(summary)
}

fn c3_wall_lemma() -> Outcome {
    separation_summary(Q)?;
    Ok("PGL2, PGL3 clean; SL2 has one violation at -1".into())
}

fn splitting_summary(field: FieldSpec) -> Result<Vec<String>, String> {
    let d = datum("PGL3");
    let mut out = Vec::new();
    for b in 0..3 {
        let rep = separation_check(&d, b, field).map_err(|e| e.to_string())?;
        ensure(rep.passed(), || format!("coroot {b}: {:?}", rep.violations))?;
        let t = d.positive_coroots()[b].reflection;
        for p in &rep.pairs {
            let u = d.mul(d.inverse(p.w), p.v);
            if u != d.identity() && u != t {
                ensure(!p.survives(), || format!("pair {:?} survives", (p.w, p.v)))?;
            }
            ensure(p.survives() == localized_block(&d, p.w, p.v, b), || {
                format!(
                    "coroot {b}: pair {:?} disagrees with block prediction",
                    (p.w, p.v)
                )
            })?;
        }
        let mut surviving = rep.surviving_pairs();
        surviving.sort();
        ensure(surviving == localized_pairs(&d, b), || {
            format!("coroot {b}: {surviving:?}")
        })?;
        out.push(format!("{b}: {surviving:?}"));
    }
    Ok(out)
}

fn c4_coherent_splitting() -> Outcome {
    splitting_summary(Q)?;
    Ok("3 coroots, blocks {w, wt}".into())
}

fn point_count_summary() -> Result<Vec<(String, usize, u64, u64)>, String> {
    let mut out = Vec::new();
    for name in ["PGL2", "SL2", "PGL3"] {
        let d = datum(name);
        for u in 0..d.order() {
            for q in [3, 4, 5, 7, 8, 9] {
                let pc = fq_point_count(&d, u, q).map_err(|e| e.to_string())?;
                ensure(pc.formula == pc.brute_force, || {
                    format!(
                        "{name} u={} q={q}: {} vs {}",
                        d.label(u),
                        pc.formula,
                        pc.brute_force
                    )
                })?;
                out.push((name.to_string(), u, q, pc.formula));
            }
        }
    }
    Ok(out)
}

fn c5_point_counts() -> Outcome {
    let n = point_count_summary()?.len();
    Ok(format!("{n} (group, u, q) cases"))
}

fn character_summary(field: FieldSpec) -> Result<usize, String> {
    let mut checked = 0;
    for name in ["PGL2", "PGL3"] {
        let d = datum(name);
        for word in words(d.rank(), 4) {
            let bs = MatrixBimodule::bott_samelson(&d, &word, field).map_err(|e| e.to_string())?;
            let dec = generic_decompose(&bs).map_err(|e| e.to_string())?;
            let rec = delta_char_bott_samelson(&d, &word).map_err(|e| e.to_string())?;
            let sub = subword_char(&d, &word).map_err(|e| e.to_string())?;
            ensure(dec == rec.entries() && rec == sub, || {
                format!("{name} {word:?}: {dec:?}")
            })?;
            ensure(rec.total() == 1 << word.len(), || {
                format!("{name} {word:?} mass")
            })?;
            checked += 1;
        }
    }
    Ok(checked)
}

fn c6_bott_samelson_characters() -> Outcome {
    Ok(format!("{} words", character_summary(Q)?))
}

fn c7_pittie_steinberg() -> Outcome {
    for name in ["PGL2", "PGL3"] {
        let d = datum(name);
        let b = steinberg_basis(&d, Q).map_err(|e| e.to_string())?;
        let cert = basis_check(&d, &b.exponents(), Q).map_err(|e| e.to_string())?;
        ensure(cert.passed() && b.exponents().len() == d.order(), || {
            format!("{name}: {cert:?}")
        })?;
    }
    let d = datum("PGL2");
    let bad = [LatticeVec::zero(1), LatticeVec::from(vec![2])];
    let cert = basis_check(&d, &bad, Q).map_err(|e| e.to_string())?;
    let w = cert.witness.ok_or("negative control passed")?;
    let e = |k: i64| LaurentPoly::monomial(Q, [k]);
    ensure(&w.numerator * &(&e(1) + &e(-1)) == w.denominator, || {
        w.to_string()
    })?;
    Ok("PGL2, PGL3 certified; {0, 2ω} fails with 1/(e^ω + e^-ω)".into())
}

fn c8_endomorphisms() -> Outcome {
    let mut parts = Vec::new();
    for (name, r) in [("PGL2", 3), ("PGL3", 2)] {
        let rep = end_check(&datum(name), r, Q).map_err(|e| e.to_string())?;
        ensure(rep.passed(), || format!("{name}: {rep:?}"))?;
        parts.push(format!(
            "{name} box {r}: {} maps in span of {}",
            rep.bounded_maps, rep.order
        ));
    }
    Ok(parts.join("; "))
}

fn c9_short_exact_sequence() -> Outcome {
    let mut n = 0;
    for name in ["PGL2", "PGL3"] {
        let d = datum(name);
        for s in 0..d.rank() {
            let rep = ses_rank1(&d, s, Q)
                .and_then(|x| x.report())
                .map_err(|e| e.to_string())?;
            ensure(rep.passed(), || format!("{name} s{}: {rep:?}", s + 1))?;
            n += 1;
        }
    }
    Ok(format!("{n} sequences, ranks (1, 2, 1)"))
}

fn c10_localized_splitting() -> Outcome {
    let d = datum("PGL3");
    let chi = vec![Q.from_int(3), Q.from_int(9)];
    let rep = localized_split_check(&d, &[0, 1, 0], 0, Some(chi), Q).map_err(|e| e.to_string())?;
    ensure(rep.passed(), || format!("{rep:?}"))?;
    let s1 = d.simple(0);
    for b in &rep.blocks {
        ensure(
            b.elements.len() == 2 && b.elements[1] == d.mul(b.elements[0], s1),
            || format!("block {:?} is not a coset of <s1>", b.labels),
        )?;
    }
    Ok(format!("{} blocks at (3, 9)", rep.blocks.len()))
}

fn c11_pi1() -> Outcome {
    let (plain, modified) = pi1_comparison(&datum("SL2")).map_err(|e| e.to_string())?;
    let p = plain.pair(0, 1).ok_or("missing pair")?;
    let m = modified.pair(0, 1).ok_or("missing pair")?;
    ensure(p.free_rank == 0 && p.invariant_factors == vec![2], || {
        format!("{p:?}")
    })?;
    ensure(m.free_rank == 0 && m.invariant_factors.is_empty(), || {
        format!("{m:?}")
    })?;
    Ok("unmodified Z/2, modified trivial".into())
}

fn c12_prime_fields() -> Outcome {
    let sep_q = separation_summary(Q)?;
    let split_q = splitting_summary(Q)?;
    let counts = point_count_summary()?;
    let chars_q = character_summary(Q)?;
    for p in [5, 7] {
        let f = FieldSpec::prime(p).map_err(|e| e.to_string())?;
        ensure(separation_summary(f)? == sep_q, || {
            format!("F{p}: separation differs")
        })?;
        ensure(splitting_summary(f)? == split_q, || {
            format!("F{p}: splitting differs")
        })?;
        ensure(point_count_summary()? == counts, || {
            format!("F{p}: point counts differ")
        })?;
        ensure(character_summary(f)? == chars_q, || {
            format!("F{p}: characters differ")
        })?;
    }
    Ok("criteria 3-6 identical over F5 and F7".into())
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            name: "rank-one endomorphisms",
            limit: Duration::from_secs(1),
            run: c1_rank_one_endomorphisms,
        },
        Criterion {
            id: 2,
            name: "self-adjunction determinant",
            limit: Duration::from_secs(1),
            run: c2_selfadjoint_determinant,
        },
        Criterion {
            id: 3,
            name: "wall lemma and SL2",
            limit: Duration::from_secs(1),
            run: c3_wall_lemma,
        },
        Criterion {
            id: 4,
            name: "coherent splitting",
            limit: Duration::from_secs(5),
            run: c4_coherent_splitting,
        },
        Criterion {
            id: 5,
            name: "fixed-point counts",
            limit: Duration::from_secs(10),
            run: c5_point_counts,
        },
        Criterion {
            id: 6,
            name: "Bott-Samelson characters",
            limit: Duration::from_secs(30),
            run: c6_bott_samelson_characters,
        },
        Criterion {
            id: 7,
            name: "Pittie-Steinberg bases",
            limit: Duration::from_secs(10),
            run: c7_pittie_steinberg,
        },
        Criterion {
            id: 8,
            name: "endomorphisms of the big bimodule",
            limit: Duration::from_secs(600),
            run: c8_endomorphisms,
        },
        Criterion {
            id: 9,
            name: "rank-one exact sequence",
            limit: Duration::from_secs(1),
            run: c9_short_exact_sequence,
        },
        Criterion {
            id: 10,
            name: "localized Bott-Samelson splitting",
            limit: Duration::from_secs(5),
            run: c10_localized_splitting,
        },
        Criterion {
            id: 11,
            name: "non-adjoint modification",
            limit: Duration::from_secs(1),
            run: c11_pi1,
        },
        Criterion {
            id: 12,
            name: "prime fields",
            limit: Duration::from_secs(60),
            run: c12_prime_fields,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let result =
            catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|_| Err("panicked".to_string()));
        let elapsed = start.elapsed();
        let result = match result {
            Ok(_) if elapsed > c.limit => Err(format!("took {elapsed:.2?}, limit {:?}", c.limit)),
            r => r,
        };
        match result {
            Ok(detail) => println!("PASS {:>2} {} ({elapsed:.2?}): {detail}", c.id, c.name),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {} ({elapsed:.2?}): {why}", c.id, c.name);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
