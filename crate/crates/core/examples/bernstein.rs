//! Bernstein balance: the plane is recognised, the cone is not.

use hlmono::monotonicity::bernstein_check;
use hlmono::zoo::{self, PolarResolution, STANDARD_BASIS};

fn main() -> hlmono::Result<()> {
    let res = PolarResolution::with_angular(128);
    let radii = [0.1, 0.2, 0.4];
    let meshes = [
        ("plane", zoo::make_plane(STANDARD_BASIS, None, 2.5, res)?),
        (
            "cone (2,1)",
            zoo::make_sw_cone(2, 1, 1.0 / 64.0, 2.5, res, true)?,
        ),
    ];
    for (name, m) in &meshes {
        let b = bernstein_check(m, &radii)?;
        println!(
            "{name}: plane-like = {}, conclusion = {:?}",
            b.plane_like, b.conclusion
        );
        for (k, r) in b.radii.iter().enumerate() {
            println!(
                "  r = {r:<4} F = {:.5} S = {:.2e} D = {:.2e} balance residual {:.2e}",
                b.f[k], b.s[k], b.d[k], b.terms[k].residual
            );
        }
    }
    Ok(())
}
