// SPDX-License-Identifier: Apache-2.0

mod common;

use std::collections::BTreeSet;

use k3_rdp::canon::{canonicalize, ColoredGraph};
use k3_rdp::codes::BinaryCode;
use k3_rdp::fqf::{FiniteQuadraticForm, FqfError};
use k3_rdp::k3::{emb_supersingular_generic, emb_supersingular_trichotomy, K3Error};
use k3_rdp::k3::{nk, SupersingularTarget};
use k3_rdp::local::{exists_even_lattice, local_invariant_set};
use k3_rdp::roots::{enumerate_dynkin_types, is_root_free, DynkinType, EnumBudget, EnumError};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn build(n: u32, colors: &[u32], edges: &[(u32, u32)], perm: &[u32]) -> ColoredGraph {
    let mut inv = vec![0u32; n as usize];
    for (i, &p) in perm.iter().enumerate() {
        inv[p as usize] = i as u32;
    }
    let mut g = ColoredGraph::new();
    for v in 0..n {
        g.add_vertex(colors[inv[v as usize] as usize]);
    }
    for &(a, b) in edges {
        g.add_edge(perm[a as usize], perm[b as usize]);
    }
    g
}

type GraphCase = (u32, Vec<u32>, Vec<(u32, u32)>, Vec<u32>);

fn graph_case() -> impl Strategy<Value = GraphCase> {
    (1u32..12).prop_flat_map(|n| {
        let pairs: Vec<(u32, u32)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let m = pairs.len();
        (
            Just(n),
            proptest::collection::vec(0u32..3, n as usize),
            proptest::collection::vec(any::<bool>(), m)
                .prop_map(move |mask| pairs.iter().zip(mask).filter(|(_, k)| *k).map(|(e, _)| *e).collect::<Vec<_>>()),
            Just((0..n).collect::<Vec<u32>>()).prop_shuffle(),
        )
    })
}

fn random_form() -> impl Strategy<Value = (usize, usize, FiniteQuadraticForm, Vec<usize>)> {
    any::<u64>().prop_flat_map(|seed| {
        let lat = common::random_even_gram(&mut StdRng::seed_from_u64(seed), 6);
        let (sp, sm) = lat.signature();
        let f = lat.discriminant_form().unwrap();
        let k = f.num_generators();
        (Just(sp), Just(sm), Just(f), Just((0..k).collect::<Vec<usize>>()).prop_shuffle())
    })
}

fn reorder(f: &FiniteQuadraticForm, perm: &[usize]) -> FiniteQuadraticForm {
    let orders = perm.iter().map(|&i| f.orders()[i]).collect();
    let q = perm.iter().map(|&i| f.q_values()[i]).collect();
    let b = perm.iter().map(|&i| perm.iter().map(|&j| f.b_matrix()[i][j]).collect()).collect();
    FiniteQuadraticForm::new(orders, q, b).unwrap()
}

fn pair_case() -> impl Strategy<Value = (DynkinType, DynkinType)> {
    let types = enumerate_dynkin_types(8);
    proptest::sample::select(types).prop_flat_map(|r| {
        let subs: Vec<DynkinType> = enumerate_dynkin_types(r.rank()).into_iter().filter(|s| r.s_contains(s)).collect();
        (Just(r), proptest::sample::select(subs))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonical_form_ignores_labels((n, colors, edges, perm) in graph_case()) {
        let id: Vec<u32> = (0..n).collect();
        let a = canonicalize(&build(n, &colors, &edges, &id));
        let b = canonicalize(&build(n, &colors, &edges, &perm));
        prop_assert_eq!(&a.form, &b.form);
        let set: BTreeSet<(u32, u32)> = edges.iter().map(|&(x, y)| (x.min(y), x.max(y))).collect();
        for g in &a.automorphisms {
            for v in 0..n as usize {
                prop_assert_eq!(colors[v], colors[g[v] as usize]);
            }
            let img: BTreeSet<(u32, u32)> =
                set.iter().map(|&(x, y)| { let (p, q) = (g[x as usize], g[y as usize]); (p.min(q), p.max(q)) }).collect();
            prop_assert_eq!(&img, &set);
        }
    }

    #[test]
    fn code_dictionary(k in 1usize..=10, rows in proptest::collection::vec(any::<u16>(), 1..5)) {
        let mask = (1u32 << k) - 1;
        let rows: Vec<u32> = rows.into_iter().map(|r| r as u32 & mask).collect();
        let code = BinaryCode::new(k as u32, &rows).unwrap();
        let r: DynkinType = format!("{k}A1").parse().unwrap();
        let gens: Vec<Vec<u8>> = rows.iter().map(|w| (0..k).map(|i| (w >> i & 1) as u8).collect()).collect();
        let weights = code.words().unwrap().into_iter().map(|w| w.count_ones()).collect::<Vec<_>>();
        match is_root_free(&r, &gens) {
            Err(EnumError::Fqf(FqfError::NotIsotropic)) => prop_assert!(weights.iter().any(|w| w % 4 != 0)),
            Ok(root_free) => {
                prop_assert!(weights.iter().all(|w| w % 4 == 0));
                prop_assert_eq!(root_free, !weights.contains(&4));
            }
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn presentation_order_is_irrelevant((sp, sm, f, perm) in random_form()) {
        let g = reorder(&f, &perm);
        for l in f.primes() {
            let n = sp + sm;
            prop_assert_eq!(
                local_invariant_set(l, n, &f.l_part(l)).unwrap(),
                local_invariant_set(l, n, &g.l_part(l)).unwrap()
            );
        }
        prop_assert_eq!(exists_even_lattice(sp, sm, &f).unwrap(), exists_even_lattice(sp, sm, &g).unwrap());
    }

    #[test]
    fn supersingular_paths_agree((sp, sm, f, _perm) in random_form(), pi in 0usize..5, sigma in 1u32..=10) {
        prop_assume!(sp <= 1);
        let p = [3, 5, 7, 11, 13][pi];
        let target = SupersingularTarget::new(p, sigma).unwrap();
        match emb_supersingular_generic(&f, sp, sm, target) {
            Err(K3Error::PNotCoprime(_)) => {}
            a => prop_assert_eq!(a.unwrap(), emb_supersingular_trichotomy(&f, sp, sm, target).unwrap()),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn realizability_is_monotone((r, s) in pair_case(), pi in 0usize..3, sigma in 1u32..=10) {
        let p = [3, 5, 7][pi];
        let budget = EnumBudget::default();
        match (nk(p, sigma, &r, budget), nk(p, sigma, &s, budget)) {
            (Ok(a), Ok(b)) => prop_assert!(!a.verdict || b.verdict, "{} true but {} false", r, s),
            (Err(K3Error::PNotCoprime(_)), _) | (_, Err(K3Error::PNotCoprime(_))) => {}
            (a, b) => prop_assert!(false, "{:?} {:?}", a, b),
        }
    }
}
