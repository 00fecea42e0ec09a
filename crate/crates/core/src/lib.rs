// SPDX-License-Identifier: Apache-2.0

//! Root-free overlattice enumeration and discriminant-form tools for K3 lattice questions.

#![allow(clippy::needless_range_loop)]

pub mod arith;
pub mod canon;
pub mod cli;
pub mod codes;
pub mod fqf;
pub mod k3;
pub mod lattice;
pub mod local;
pub mod roots;
