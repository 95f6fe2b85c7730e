//! Two-sided density bounds on the unit gauge ball and the local density lemma.

use hlmono::monotonicity::{lemma_density_bound, main_theorem_check};
use hlmono::zoo::{self, PolarResolution, STANDARD_BASIS};

fn main() -> hlmono::Result<()> {
    let res = PolarResolution::with_angular(128);
    let radii = [0.1, 0.2, 0.4, 0.6, 0.8];
    let meshes = [
        ("plane", zoo::make_plane(STANDARD_BASIS, None, 2.5, res)?),
        (
            "cone (2,1)",
            zoo::make_sw_cone(2, 1, 1.0 / 64.0, 2.5, res, true)?,
        ),
    ];
    for (name, m) in &meshes {
        let t = main_theorem_check(m, &radii)?;
        println!(
            "{name}: sup C_upper·max(1, C_lower) = {:.4}, bounded = {}",
            t.sup_product, t.bounded
        );
        for ((r, d), (u, l)) in t
            .radii
            .iter()
            .zip(&t.density)
            .zip(t.c_upper.iter().zip(&t.c_lower))
        {
            println!("  r = {r:<4} density {d:.5}  C_upper {u:.5}  C_lower {l:.5}");
        }
        let lemma = lemma_density_bound(m)?;
        println!(
            "  lemma: {:.5} vs area {:.5}, ratio {:.5}",
            lemma.lhs, lemma.rhs_area, lemma.ratio
        );
    }
    Ok(())
}
