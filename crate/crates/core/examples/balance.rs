//! Term-by-term balance of the cut-off conservation law on a left-translated
//! plane, where every term is nonzero.

use hlmono::monotonicity::{k10_balance, make_cutoff, CutoffKind};
use hlmono::zoo::{self, PolarResolution, STANDARD_BASIS};
use hlmono::HeisenbergPoint;

fn main() -> hlmono::Result<()> {
    let cut = make_cutoff(CutoffKind::Main)?;
    let a = HeisenbergPoint::new([0.0, 0.3, 0.0, 0.1], 0.2);
    for n in [64, 128, 256] {
        let m = zoo::make_plane(
            STANDARD_BASIS,
            Some(a),
            4.0,
            PolarResolution::with_angular(n),
        )?;
        let b = k10_balance(&m, 1.0, &cut)?;
        println!(
            "N = {n:>3}: slope {:+.5} curvature {:+.5} cross {:+.5} phase {:+.5} gradient {:+.5} | normal {:+.5} θ₀ {:.3} | residual {:.2e}",
            b.dirichlet_slope, b.curvature, b.cross, b.phase, b.gradient, b.normal, b.theta0, b.residual
        );
    }
    Ok(())
}
