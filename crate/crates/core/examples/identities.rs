//! Pointwise and weak identity checks on the plane and a (2,1) cone.

use hlmono::angle::lagrangian_angle_form;
use hlmono::identities::check_pointwise_identities;
use hlmono::zoo::{self, PolarResolution, STANDARD_BASIS};

fn main() -> hlmono::Result<()> {
    let res = PolarResolution::with_angular(64);
    let meshes = [
        ("plane", zoo::make_plane(STANDARD_BASIS, None, 2.5, res)?),
        (
            "cone (2,1)",
            zoo::make_sw_cone(2, 1, 1.0 / 64.0, 2.5, res, true)?,
        ),
    ];
    for (name, m) in &meshes {
        let form = lagrangian_angle_form(m)?;
        let rep = check_pointwise_identities(m, Some(&form))?;
        println!("{name} (excision {:.3}):", rep.excision_radius);
        for (k, r) in &rep.residuals {
            println!(
                "  {k:<40} {:.3e}  tol {:.1e}  {}",
                r.value,
                r.tolerance,
                if r.pass { "ok" } else { "FAIL" }
            );
        }
    }
    Ok(())
}
