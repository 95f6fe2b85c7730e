//! Maslov index around cone tips and the stationarity residual as a negative
//! control on a gradient graph.

use hlmono::angle::{el_residual, lagrangian_angle_form, maslov_index};
use hlmono::zoo::{self, PolarResolution, Potential, STANDARD_BASIS};

fn main() -> hlmono::Result<()> {
    let res = PolarResolution::with_angular(64);
    for (p, q) in [(2, 1), (3, 2), (5, 2)] {
        let m = zoo::make_sw_cone(p, q, 1.0 / 64.0, 2.0, res, true)?;
        let form = lagrangian_angle_form(&m)?;
        let ring = m.rings.as_ref().map(|r| r.ring(4)).unwrap_or_default();
        let idx = maslov_index(&m, &form, &ring)?;
        println!(
            "cone ({p},{q}): Maslov index {} (rounding {:.1e})",
            idx.index, idx.rounding_residual
        );
    }

    let plane = zoo::make_plane(STANDARD_BASIS, None, 2.5, res)?;
    let el = el_residual(&plane, &lagrangian_angle_form(&plane)?)?;
    println!("plane: EL {:.2e}, Δβ {:.2e}", el.el_norm, el.harmonic_norm);
    for half_cells in [16, 32, 64] {
        let g = zoo::make_lagrangian_graph(Potential::Cubic { amp: 1.0 }, 1.0, half_cells)?;
        let el = el_residual(&g, &lagrangian_angle_form(&g)?)?;
        println!(
            "graph x₁³, {half_cells} half cells: EL {:.2e}, Δβ {:.2e}",
            el.el_norm, el.harmonic_norm
        );
    }
    Ok(())
}
