//! Euclidean monotonicity identity on classical minimal surfaces.

use hlmono::monotonicity::classical_monotonicity;
use hlmono::zoo::{self, ClassicalKind, PolarResolution};

fn main() -> hlmono::Result<()> {
    let res = PolarResolution::with_angular(96);
    let cases = [
        (
            "plane",
            ClassicalKind::Plane,
            2.5,
            vec![0.25, 0.5, 1.0, 2.0],
        ),
        (
            "two planes",
            ClassicalKind::TwoPlanes,
            2.5,
            vec![0.25, 0.5, 1.0, 2.0],
        ),
        (
            "catenoid",
            ClassicalKind::Catenoid { neck: 1.0 },
            2.5,
            vec![0.5, 1.0, 2.0, 3.0, 5.0],
        ),
    ];
    for (name, kind, extent, radii) in cases {
        let m = zoo::make_classical_minimal(kind, extent, res)?;
        let c = classical_monotonicity(&m, &radii)?;
        println!(
            "{name}: Card = {}, monotone = {}, max residual {:.2e}, minimality defect {:.2e}",
            c.cardinality, c.monotone, c.max_residual, c.minimality_defect
        );
        for ((r, l), rhs) in c.radii.iter().zip(&c.lhs).zip(&c.rhs) {
            println!("  r = {r:<4} |Σ∩B_r|/r² = {l:.5}  ∫|x^⊥|²/|x|⁴ + πCard = {rhs:.5}");
        }
    }
    Ok(())
}
