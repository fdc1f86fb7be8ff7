//! Solves for the strip width under each change of variables and maps the
//! transformed field back.

use gevrey::harness::{make_ic, IcSpec, IcVariant};
use gevrey::lattice::Lattice;
use gevrey::xform::{v_to_w, w_to_v, TransformSpec};

fn main() -> gevrey::Result<()> {
    let lattice = Lattice::new(6)?;
    let spec = IcSpec::new(IcVariant::GevreyRandom { sigma0: 0.5, q0: 0.0, seed: Some(1) });
    let v = make_ic(&spec, lattice, None)?;

    let transforms = [
        TransformSpec::FixedSobolev { beta: 0.1, epsilon: 1.0, s: 0.5 },
        TransformSpec::VoigtTriple { beta: 0.1, epsilon: 1.5, alpha: 1.0, s: 0.75 },
        TransformSpec::CriticalShift { beta: 0.05, alpha: 1.0 },
        TransformSpec::LinearInTime { beta: 0.1 },
    ];
    for transform in &transforms {
        let out = v_to_w(&v, transform, 1.0)?;
        let back = w_to_v(&out.w, transform, 1.0)?;
        println!(
            "{transform:?}\n  psi {:.10}  residual {:.1e}  iterations {}  round trip {:.1e}",
            out.psi,
            out.residual,
            out.iterations,
            back.max_difference(&v)?
        );
    }
    Ok(())
}
