/// Four-point Lagrange interpolation on a uniform grid starting at `x0`.
///
/// Uses the stencil of nodes surrounding `x`, shifted inward at the ends.
pub fn cubic_uniform(nodes: &[f64], x0: f64, h: f64, x: f64) -> f64 {
    debug_assert!(nodes.len() >= 4);
    let t = (x - x0) / h;
    let last = nodes.len() - 4;
    let start = (t.floor() as isize - 1).clamp(0, last as isize) as usize;
    let u = t - start as f64;
    let y = &nodes[start..start + 4];
    // Nodes sit at u = 0, 1, 2, 3.
    let l0 = -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0;
    let l1 = u * (u - 2.0) * (u - 3.0) / 2.0;
    let l2 = -u * (u - 1.0) * (u - 3.0) / 2.0;
    let l3 = u * (u - 1.0) * (u - 2.0) / 6.0;
    y[0] * l0 + y[1] * l1 + y[2] * l2 + y[3] * l3
}
