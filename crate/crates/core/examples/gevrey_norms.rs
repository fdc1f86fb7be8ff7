//! Sobolev and Gevrey norms of a random field with a known decay rate, and the
//! strip width recovered from its spectrum.

use gevrey::harness::{make_ic, IcSpec, IcVariant};
use gevrey::lattice::Lattice;
use gevrey::norms::{fit_analyticity_radius, gevrey_norm, sobolev_norm, triple_norm, GevreyIndex, TripleNormParams};

fn main() -> gevrey::Result<()> {
    let lattice = Lattice::new(12)?;
    let spec = IcSpec::new(IcVariant::GevreyRandom { sigma0: 0.6, q0: 0.0, seed: Some(7) });
    let v = make_ic(&spec, lattice, None)?;

    for q in [0.0, 0.5, 1.0, 2.0] {
        println!("||v||_{q:<3} = {:.6e}", sobolev_norm(&v, q));
    }
    for sigma in [0.1, 0.3, 0.5, 0.59] {
        let g = gevrey_norm(&v, GevreyIndex::new(sigma, 1.0)?);
        println!("gevrey(sigma {sigma:<4}, q 1) = {g:.6e}");
    }
    let triple = triple_norm(&v, TripleNormParams::new(1.0, 1.0)?);
    println!("triple norm (alpha 1, s 1) = {triple:.6e}");

    let fit = fit_analyticity_radius(&v)?;
    println!("fitted strip width {:.4} (generated with 0.6), r^2 = {:.4}", fit.sigma_hat, fit.r2);
    Ok(())
}
