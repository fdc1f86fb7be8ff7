//! Follows the fitted analyticity strip width of a random analytic field as
//! the Euler flow transfers energy to small scales.

use gevrey::dynamics::{integrate, EquationSpec, IntegrationConfig, StandardObserver};
use gevrey::harness::{make_ic, IcSpec, IcVariant};
use gevrey::lattice::Lattice;

fn main() -> gevrey::Result<()> {
    let lattice = Lattice::new(8)?;
    let spec = IcSpec::new(IcVariant::GevreyRandom { sigma0: 0.8, q0: 1.0, seed: Some(3) }).with_amplitude(5.0);
    let v0 = make_ic(&spec, lattice, None)?;
    let config = IntegrationConfig { dt: 2e-3, t_end: 0.4, sample_every: 25 };
    let mut observer = StandardObserver { fit_radius: true, ..Default::default() };
    let series = integrate(&v0, &EquationSpec::Euler, &config, &mut observer)?;
    for s in &series.samples {
        match s.sigma_fit {
            Some(sigma) => println!("t = {:.2}  sigma = {sigma:.4}", s.t),
            None => println!("t = {:.2}  sigma unavailable", s.t),
        }
    }
    Ok(())
}
