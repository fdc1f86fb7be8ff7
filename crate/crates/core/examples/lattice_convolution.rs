//! Evaluates the dealiased advection term of a Taylor-Green field and checks
//! that it is orthogonal to the field.

use gevrey::harness::{make_ic, IcSpec, IcVariant};
use gevrey::lattice::{nonlinear_term, Lattice};

fn main() -> gevrey::Result<()> {
    let lattice = Lattice::new(6)?;
    println!("N = 6: {} modes, FFT grid {}^3", lattice.len(), lattice.grid_len());
    let v = make_ic(&IcSpec::new(IcVariant::TaylorGreen), lattice, None)?;
    let tendency = nonlinear_term(&v, true);
    let active = tendency.coeffs().iter().filter(|c| c.iter().any(|z| z.norm() > 1e-14)).count();
    println!("active output modes: {active}");
    println!("<v, N(v)> = {:.3e}", v.inner(&tendency)?.re);
    println!("divergence defect of N(v): {:.3e}", tendency.divergence_defect());
    Ok(())
}
