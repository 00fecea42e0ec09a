// SPDX-License-Identifier: Apache-2.0

//! Lists the root-free even overlattices of each Dynkin type given on the command line.
//!
//! ```text
//! cargo run --release --example overlattices -- 16A1 D4+2A3+2A1
//! ```

use k3_rdp::roots::{DynkinType, EnumBudget, OverlatticeEnumerator};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for arg in std::env::args().skip(1) {
        let r: DynkinType = arg.parse()?;
        let e = OverlatticeEnumerator::new(&r, EnumBudget::default())?;
        println!("{r} ({} admissible classes)", e.admissible_count());
        for o in e.collect()? {
            let gens: Vec<String> = o.glue.generators.iter().map(|g| format!("{g:?}")).collect();
            let disc = e.disc_form(&o.glue)?;
            println!("  index {:>3}  |D| = {:>6}  glue {}", o.index, disc.order(), gens.join(" "));
        }
    }
    Ok(())
}
