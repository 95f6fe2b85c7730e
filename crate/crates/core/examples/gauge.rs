//! Group law, gauge and phase at a few points of ℍ².

use hlmono::heisenberg::{horizontal_gauge_gradients, koranyi_gauge, left_translate, phase};
use hlmono::HeisenbergPoint;

fn main() -> hlmono::Result<()> {
    let a = HeisenbergPoint::new([0.3, -0.1, 0.5, 0.2], 0.4);
    let p = HeisenbergPoint::new([1.0, 0.0, 0.0, 1.0], -0.25);
    for q in [p, p.dilate(2.0), left_translate(&a, &p)] {
        let g = horizontal_gauge_gradients(&q)?;
        println!(
            "z = {:?}, φ = {:+.4}: gauge {:.6}, σ = {:+.6}, |∇ᴴ𝔯| = {:.6}",
            q.z,
            q.phi,
            koranyi_gauge(&q),
            phase(&q)?,
            g.grad_gauge.norm()
        );
    }
    // Gauge distance is left-invariant: d(a·p, a·q) = d(p, q).
    let q = HeisenbergPoint::new([0.2, 0.2, -0.3, 0.0], 0.1);
    let d =
        |x: &HeisenbergPoint, y: &HeisenbergPoint| koranyi_gauge(&left_translate(&x.inverse(), y));
    let (ap, aq) = (left_translate(&a, &p), left_translate(&a, &q));
    println!(
        "d(p, q) = {:.12}, d(a·p, a·q) = {:.12}",
        d(&p, &q),
        d(&ap, &aq)
    );
    Ok(())
}
