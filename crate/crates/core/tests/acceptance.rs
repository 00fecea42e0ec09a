// SPDX-License-Identifier: Apache-2.0

//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits nonzero on any failure.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use k3_rdp::cli::kummer_all;
use k3_rdp::codes::lemma52_search;
use k3_rdp::fqf::FiniteQuadraticForm;
use k3_rdp::k3::{
    self, emb_complex, emb_supersingular, lambda_local_set, lambda_local_set_generic, nk, nk0, nk_direct,
    primes_coprime_to, residue_set, table1_fixture, K3Error, SupersingularTarget,
};
use k3_rdp::local::exists_even_lattice;
use k3_rdp::roots::{
    enumerate_dynkin_types, gram_of_sigma, Component, DynkinType, EnumBudget, OverlatticeEnumerator, RootSystem,
};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

const SEED: u64 = 20_261_019;
const FAST_LIMIT: Duration = Duration::from_secs(5);
const HEAVY_LIMIT: Duration = Duration::from_secs(15 * 60);
const LEMMA52_LIMIT: Duration = Duration::from_secs(10 * 60);
const HEAVY: [&str; 3] = ["17A1", "7A2+3A1", "5A2+7A1"];
const SMALL_PRIMES: [u64; 5] = [3, 5, 7, 11, 13];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ty(s: &str) -> DynkinType {
    s.parse().expect("valid type")
}

fn unlimited() -> EnumBudget {
    EnumBudget { time_limit: None, ..EnumBudget::default() }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn table1() -> Outcome {
    let entries = table1_fixture();
    let heavy: BTreeSet<DynkinType> = HEAVY.iter().map(|s| ty(s)).collect();
    let mut slowest = (Duration::ZERO, String::new());
    let mut children = 0;
    for r in &entries {
        let t = Instant::now();
        let v = nk0(r, unlimited()).map_err(|e| format!("{r}: {e}"))?.verdict;
        let dt = t.elapsed();
        ensure(!v, || format!("{r}: nk0 true"))?;
        let limit = if heavy.contains(r) { HEAVY_LIMIT } else { FAST_LIMIT };
        ensure(dt < limit, || format!("{r}: {dt:?} over {limit:?}"))?;
        if dt > slowest.0 {
            slowest = (dt, r.to_string());
        }
        for c in r.children() {
            children += 1;
            let v = nk0(&c, unlimited()).map_err(|e| format!("{c}: {e}"))?.verdict;
            ensure(v, || format!("child {c} of {r}: nk0 false"))?;
        }
    }
    Ok(format!("{} entries false, {children} children true, slowest {} in {:?}", entries.len(), slowest.1, slowest.0))
}

fn completeness() -> Outcome {
    let all = enumerate_dynkin_types(14);
    let low: Vec<&DynkinType> = all.iter().filter(|r| r.rank() <= 10).collect();
    for r in &low {
        ensure(nk0(r, unlimited()).map_err(|e| e.to_string())?.verdict, || format!("{r}: nk0 false"))?;
    }
    let high: Vec<&DynkinType> = all.iter().filter(|r| (11..=14).contains(&r.rank())).collect();
    let mut rng = StdRng::seed_from_u64(SEED);
    let sample: Vec<&&DynkinType> = high.choose_multiple(&mut rng, 200).collect();
    for r in &sample {
        ensure(nk0(r, unlimited()).map_err(|e| e.to_string())?.verdict, || format!("{r}: nk0 false"))?;
    }
    Ok(format!("{} types of rank <= 10 true, {} sampled of rank 11-14 true", low.len(), sample.len()))
}

fn residues() -> Outcome {
    let cases: [(&str, u32, u64, &[u64]); 5] = [
        ("A2", 10, 24, &[5, 11, 17, 23]),
        ("2A1", 10, 8, &[3, 7]),
        ("A4", 9, 40, &[3, 7, 13, 17, 23, 27, 33, 37]),
        ("A1+A3", 9, 8, &[3, 5]),
        ("2A1+A2", 9, 24, &[5, 7, 17, 19]),
    ];
    let mut checked = 0;
    for (s, sigma, m, want) in cases {
        let r = ty(s);
        let set = residue_set(&r, sigma).map_err(|e| format!("{s}: {e}"))?;
        let got = set.reduce(m);
        let want: BTreeSet<u64> = want.iter().copied().collect();
        ensure(got == want, || format!("{s}, σ={sigma}: residues {got:?} mod {m}"))?;
        for p in primes_coprime_to(2 * k3::d_r(&r), 500) {
            if p == 2 {
                continue;
            }
            let v = nk_direct(p, sigma, &r, unlimited()).map_err(|e| format!("{s} p={p}: {e}"))?.verdict;
            ensure(v == want.contains(&(p % m)), || format!("{s}, σ={sigma}, p={p}: nk {v}"))?;
            checked += 1;
        }
    }
    Ok(format!("5 residue sets match, {checked} prime checks agree"))
}

fn kummer() -> Outcome {
    let r = ty("16A1");
    for p in SMALL_PRIMES {
        for sigma in 1..=10 {
            let v = nk(p, sigma, &r, unlimited()).map_err(|e| e.to_string())?.verdict;
            ensure(v == (sigma <= 2), || format!("p={p}, σ={sigma}: nk {v}"))?;
        }
    }
    let (checked, failures) = kummer_all(unlimited()).map_err(|e| e.to_string())?;
    ensure(failures.is_empty(), || format!("kummer failures: {failures:?}"))?;
    Ok(format!("nk(p, σ, 16A1) = (σ <= 2) for 5 primes, {checked} overlattices pass"))
}

fn lemma52() -> Outcome {
    let t = Instant::now();
    let rep = lemma52_search();
    let dt = t.elapsed();
    ensure(rep.counterexamples.is_empty(), || format!("{} counterexamples", rep.counterexamples.len()))?;
    ensure(rep.dim5.len() == 1, || format!("{} classes at dimension 5", rep.dim5.len()))?;
    ensure(dt < LEMMA52_LIMIT, || format!("took {dt:?}"))?;
    Ok(format!("classes {:?}, no counterexamples, {dt:?}", rep.classes_by_dim))
}

fn lambda_sets() -> Outcome {
    let mut n_checked = 0;
    for p in [3, 5, 7, 11, 13, 17, 19] {
        for sigma in 1..=10 {
            for n in 0..=22 {
                let a = lambda_local_set(p, sigma, n);
                let b = lambda_local_set_generic(p, sigma, n);
                ensure(a == b, || format!("p={p}, σ={sigma}, n={n}: {a:?} vs {b:?}"))?;
                n_checked += 1;
            }
        }
    }
    Ok(format!("{n_checked} closed-form sets equal the generic computation"))
}

fn components() -> Vec<Component> {
    let mut out: Vec<Component> = (1..=19).map(Component::A).collect();
    out.extend((4..=19).map(Component::D));
    out.extend((6..=8).map(Component::E));
    out
}

fn scaled_glue_table(rs: &RootSystem, det: i64) -> Vec<(i64, i64)> {
    let c = &rs.comps[0];
    let mut v: Vec<(i64, i64)> = (0..c.order)
        .map(|a| {
            let (q, m) = (c.q[a], c.min_norm[a]);
            (det * q.num() / q.den(), det * m.num / m.den)
        })
        .collect();
    v.sort();
    v
}

fn glue_tables() -> Result<String, String> {
    for c in components() {
        let r = DynkinType::from_components(vec![c]);
        let rs = RootSystem::new(&r);
        let from_gram = gram_of_sigma(&r).discriminant_form().map_err(|e| e.to_string())?;
        ensure(from_gram.is_isomorphic_small(rs.fqf()) == Some(true), || format!("{r}: forms differ"))?;
        let bound = rs.comps[0].min_norm.iter().map(|m| m.num as f64 / m.den as f64).fold(0.0, f64::max);
        let (det, table) = common::class_table(&r, bound + 0.01);
        let mut theirs: Vec<(i64, i64)> = table.into_values().collect();
        theirs.sort();
        ensure(scaled_glue_table(&rs, det) == theirs, || format!("{r}: class tables differ"))?;
    }
    Ok(format!("{} components", components().len()))
}

fn random_lattices() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(SEED);
    for _ in 0..500 {
        let lat = common::random_even_gram(&mut rng, 6);
        let (sp, sm) = lat.signature();
        let d = lat.discriminant_form().map_err(|e| e.to_string())?;
        ensure(exists_even_lattice(sp, sm, &d).map_err(|e| e.to_string())?, || format!("{:?}", lat.gram()))?;
        ensure(common::jordan_consistent(&lat), || format!("jordan {:?}", lat.gram()))?;
    }
    Ok("500 lattices".into())
}

fn enumeration() -> Result<String, String> {
    let mut n6 = 0;
    let mut n8 = 0;
    for r in enumerate_dynkin_types(8) {
        if r.rank() <= 6 {
            let e = OverlatticeEnumerator::new(&r, unlimited()).map_err(|e| e.to_string())?;
            let got = common::count_by_order(
                &e.collect()
                    .map_err(|e| e.to_string())?
                    .iter()
                    .map(|o| o.glue.elements.iter().cloned().collect::<BTreeSet<_>>())
                    .collect::<Vec<_>>(),
            );
            ensure(got == common::orbit_counts(&r), || format!("{r}: enumeration differs"))?;
            n6 += 1;
        }
        let glue = common::count_by_order(&common::glue_subgroups(&RootSystem::new(&r)));
        ensure(glue == common::lattice_subgroup_counts(&r), || format!("{r}: root-freeness differs"))?;
        n8 += 1;
    }
    Ok(format!("{n6} types of rank <= 6 enumerated, {n8} types of rank <= 8 root-checked"))
}

/// Random even lattices of signature `(t₊ ≤ 1, t₋)` together with random root-free overlattices.
fn emb_corpus(rng: &mut StdRng) -> Result<Vec<(FiniteQuadraticForm, usize, usize)>, String> {
    let mut out = Vec::new();
    while out.len() < 250 {
        let lat = common::random_even_gram(rng, 6);
        let (sp, sm) = lat.signature();
        if sp <= 1 {
            out.push((lat.discriminant_form().map_err(|e| e.to_string())?, sp, sm));
        }
    }
    let types: Vec<DynkinType> = enumerate_dynkin_types(6).into_iter().filter(|r| !r.is_empty()).collect();
    while out.len() < 500 {
        let r = types.choose(rng).expect("nonempty");
        let e = OverlatticeEnumerator::new(r, unlimited()).map_err(|e| e.to_string())?;
        let all = e.collect().map_err(|e| e.to_string())?;
        let o = &all[rng.gen_range(0..all.len())];
        out.push((e.disc_form(&o.glue).map_err(|e| e.to_string())?, 0, r.rank() as usize));
    }
    Ok(out)
}

fn emb_paths() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(SEED ^ 1);
    let corpus = emb_corpus(&mut rng)?;
    let mut checked = 0;
    for (f, tp, tm) in &corpus {
        let r = (tp + tm) as u32;
        for p in SMALL_PRIMES {
            for sigma in 1..=10 {
                let target = SupersingularTarget::new(p, sigma).map_err(|e| e.to_string())?;
                match emb_supersingular(f, *tp, *tm, target) {
                    Ok(v) => {
                        if 2 * sigma < 22 - r {
                            let c = emb_complex(f, *tp, *tm).map_err(|e| e.to_string())?;
                            ensure(v == c, || format!("{f:?} p={p} σ={sigma}: differs from complex case"))?;
                        }
                        checked += 1;
                    }
                    Err(K3Error::PNotCoprime(_)) => {}
                    Err(e) => return Err(format!("{f:?} p={p} σ={sigma}: {e}")),
                }
            }
        }
    }
    Ok(format!("{checked} (form, p, σ) triples agree"))
}

fn oracles() -> Outcome {
    let parts = [("a", glue_tables()?), ("b", random_lattices()?), ("c", enumeration()?), ("d", emb_paths()?)];
    Ok(parts.iter().map(|(k, v)| format!("{k}: {v}")).collect::<Vec<_>>().join("; "))
}

fn large_primes() -> Outcome {
    let expected = [(23, true, true), (29, true, false), (31, false, true)];
    let mut checked = 0;
    for (p, a2, a1a1) in expected {
        for r in enumerate_dynkin_types(4) {
            let v = nk(p, 10, &r, unlimited()).map_err(|e| format!("{r} p={p}: {e}"))?.verdict;
            let want = match r.to_string().as_str() {
                "A2" => a2,
                "2A1" => a1a1,
                _ => r.rank() < 2,
            };
            ensure(v == want, || format!("{r}, p={p}: nk {v}"))?;
            let by_residue = r.rank() != 2 || residue_set(&r, 10).map_err(|e| e.to_string())?.contains_prime(p);
            ensure(r.rank() != 2 || v == by_residue, || format!("{r}, p={p}: residue mismatch"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (p, R) pairs of rank <= 4 match"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("minimal non-realizable list", table1),
        ("rank <= 14 completeness", completeness),
        ("residue corollaries", residues),
        ("Kummer configurations", kummer),
        ("code search", lemma52),
        ("lambda local sets", lambda_sets),
        ("oracle suites", oracles),
        ("large primes at σ = 10", large_primes),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = f();
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("criterion {} ({name}): PASS [{secs:.1}s] {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL [{secs:.1}s] {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
