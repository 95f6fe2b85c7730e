//! Gauge-ball density curves and origin weights.

use std::f64::consts::TAU;

use hlmono::monotonicity::{density_curve, geometric_radii, theta0};
use hlmono::zoo::{self, PolarResolution, STANDARD_BASIS};

fn main() -> hlmono::Result<()> {
    let res = PolarResolution::with_angular(128);
    let radii = geometric_radii(0.1, 5);
    let plane = zoo::make_plane(STANDARD_BASIS, None, 2.5, res)?;
    let d = density_curve(&plane, &radii)?;
    for (r, v) in d.radii.iter().zip(&d.density) {
        println!("plane  r = {r:<6.4} |Σ ∩ B_r|/r² = {v:.6}");
    }
    println!("plane  θ₀ = {:.6} (2π = {:.6})", theta0(&plane, 0)?, TAU);
    for (p, q) in [(2u32, 1u32), (3, 2)] {
        let m = zoo::make_sw_cone(p, q, 1.0 / 64.0, 2.5, res, true)?;
        let t = theta0(&m, 0)?;
        let exact = TAU * ((p * q) as f64).sqrt();
        println!(
            "cone ({p},{q})  θ₀ = {t:.6}, 2π√(pq) = {exact:.6}, rel. error {:.1e}",
            (t / exact - 1.0).abs()
        );
    }
    Ok(())
}
