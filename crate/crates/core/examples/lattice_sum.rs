//! The lattice sums entering the embedding constants, with their tail
//! estimates.

use gevrey::bounds::{lattice_sum_cs_detailed, BoundConstants};

fn main() -> gevrey::Result<()> {
    for s in [0.25, 0.5, 1.0, 2.0] {
        let sum = lattice_sum_cs_detailed(s, 1e-10)?;
        println!(
            "c_{s:<4} = {:.12}  cutoff {:>3}  tail {:.3e}  remainder {:.1e}",
            sum.value, sum.cutoff, sum.tail, sum.remainder
        );
    }
    let constants = BoundConstants::for_truncation(8)?;
    for q in [0.0, 0.5, 1.0] {
        let c = constants.embedding(q)?;
        println!("{} = {:.6e}  [{}]", c.name, c.value, c.provenance);
    }
    Ok(())
}
