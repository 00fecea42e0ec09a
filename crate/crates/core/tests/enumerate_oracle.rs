// SPDX-License-Identifier: Apache-2.0

mod common;

use std::collections::BTreeMap;

use k3_rdp::roots::{DynkinType, EnumBudget, OverlatticeEnumerator, RootSystem};

fn fast(r: &DynkinType) -> BTreeMap<usize, usize> {
    let e = OverlatticeEnumerator::new(r, EnumBudget::default()).unwrap();
    let mut counts = BTreeMap::new();
    for o in e.collect().unwrap() {
        assert!(e.is_root_free_isotropic(&o.glue.generators));
        *counts.entry(o.glue.order()).or_insert(0) += 1;
    }
    counts
}

#[test]
fn orbit_counts_match_exhaustive_search() {
    for r in ["A1", "A3", "8A1", "4D4", "5A4", "3A3+4A1", "2D6+2A1", "D4+2A3+2A1", "6A2", "6A3"] {
        let t: DynkinType = r.parse().unwrap();
        assert_eq!(fast(&t), common::orbit_counts(&t), "{r}");
    }
}

#[test]
fn glue_subgroups_match_lattice_computation() {
    for r in ["8A1", "2D4", "A7+A1", "D6+2A1", "E7+A1", "2A3+2A1", "4A2", "A5+A2+A1"] {
        let t: DynkinType = r.parse().unwrap();
        let glue = common::count_by_order(&common::glue_subgroups(&RootSystem::new(&t)));
        assert_eq!(glue, common::lattice_subgroup_counts(&t), "{r}");
    }
}

#[test]
fn coset_min_norms_match_short_vectors() {
    for r in ["A9", "D9", "D10", "E6", "E7", "A4+D5"] {
        let t: DynkinType = r.parse().unwrap();
        let rs = RootSystem::new(&t);
        let (det, table) = common::class_table(&t, 3.0);
        assert_eq!(table.len() as u64, rs.order(), "{r}");
        let mut ours: Vec<(i64, i64)> = Vec::new();
        let mut x = vec![0u8; rs.comps.len()];
        loop {
            let q = rs.q(&x);
            let m = rs.min_norm(&x);
            ours.push((det * q.num() / q.den(), det * m.num / m.den));
            let mut i = 0;
            while i < x.len() {
                x[i] += 1;
                if x[i] as usize == rs.comps[i].order {
                    x[i] = 0;
                    i += 1;
                } else {
                    break;
                }
            }
            if i == x.len() {
                break;
            }
        }
        let mut theirs: Vec<(i64, i64)> = table.into_values().collect();
        ours.sort();
        theirs.sort();
        assert_eq!(ours, theirs, "{r}");
    }
}
