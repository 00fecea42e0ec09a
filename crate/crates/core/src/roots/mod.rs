// SPDX-License-Identifier: Apache-2.0

//! ADE root lattices, their glue data, and root-free overlattices.

pub mod dynkin;
pub mod enumerate;
pub mod glue;

pub use dynkin::{enumerate_dynkin_types, Component, DynkinError, DynkinType};
pub use enumerate::{
    enumerate_overlattices, is_root_free, EnumBudget, EnumError, GlueSubgroup, Overlattice, OverlatticeEnumerator,
};
pub use glue::{component_glue_data, coset_min_norm, gram_of_sigma, sigma_fqf, ComponentGlueData, Ratio, RootSystem};
