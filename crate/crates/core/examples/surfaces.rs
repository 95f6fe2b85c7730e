//! Generate each zoo surface, report its size and Legendrian defect, and
//! round-trip one through the HLMESH format.

use hlmono::mesh::{self, legendrian_defect};
use hlmono::zoo::{ClassicalKind, Potential, ZooSpec, STANDARD_BASIS};

fn main() -> hlmono::Result<()> {
    let specs = [
        ZooSpec::LagrangianPlane {
            basis: STANDARD_BASIS,
            offset: None,
            extent: 2.5,
            angular: 64,
        },
        ZooSpec::SwCone {
            p: 2,
            q: 1,
            s_min: 1.0 / 64.0,
            s_max: 2.5,
            angular: 64,
            tip: true,
        },
        ZooSpec::SwCone {
            p: 3,
            q: 2,
            s_min: 1.0 / 64.0,
            s_max: 2.5,
            angular: 64,
            tip: true,
        },
        ZooSpec::LagrangianGraph {
            potential: Potential::Cubic { amp: 1.0 },
            extent: 1.0,
            half_cells: 32,
        },
        ZooSpec::EuclideanMinimal {
            shape: ClassicalKind::Catenoid { neck: 1.0 },
            extent: 2.5,
            angular: 64,
        },
        ZooSpec::EuclideanMinimal {
            shape: ClassicalKind::TwoPlanes,
            extent: 2.5,
            angular: 64,
        },
    ];
    for spec in &specs {
        let m = spec.build()?;
        let defect = if m.ambient.is_heisenberg() {
            let d = legendrian_defect(&m)?;
            format!(
                "contact {:.2e}, lagrangian {:.2e}",
                d.max_contact, d.max_lagrangian
            )
        } else {
            "euclidean".to_string()
        };
        println!(
            "{:<60} {:>6} nodes {:>6} triangles, {} origin preimage(s), {defect}",
            serde_json::to_string(spec).unwrap_or_default(),
            m.node_count(),
            m.triangle_count(),
            m.origin_preimages().len()
        );
    }
    let cone = specs[1].build()?;
    let path = std::env::temp_dir().join("hlmono-cone.hlmesh");
    mesh::save_mesh(&cone, &path)?;
    let back = mesh::load_mesh(&path)?;
    println!(
        "{} reloaded: {} nodes, identical = {}",
        path.display(),
        back.node_count(),
        back.positions == cone.positions
    );
    Ok(())
}
