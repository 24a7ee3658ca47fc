//! Quadrature rules on the reference edge and triangle.

use crate::mesh::Point;

/// 3-point Gauss–Legendre on `[0,1]`, exact to degree 5: `(t, weight)`.
pub fn gauss3_unit() -> [(f64, f64); 3] {
    let d = 0.5 * (0.6f64).sqrt();
    [(0.5 - d, 5.0 / 18.0), (0.5, 8.0 / 18.0), (0.5 + d, 5.0 / 18.0)]
}

/// 7-point Dunavant rule, exact to degree 5: barycentric coordinates and
/// weights summing to 1.
pub fn dunavant7() -> [([f64; 3], f64); 7] {
    let r15 = 15f64.sqrt();
    let (a1, b1) = ((6.0 - r15) / 21.0, (9.0 + 2.0 * r15) / 21.0);
    let (a2, b2) = ((6.0 + r15) / 21.0, (9.0 - 2.0 * r15) / 21.0);
    let (w1, w2) = ((155.0 - r15) / 1200.0, (155.0 + r15) / 1200.0);
    let third = 1.0 / 3.0;
    [
        ([third, third, third], 9.0 / 40.0),
        ([b1, a1, a1], w1),
        ([a1, b1, a1], w1),
        ([a1, a1, b1], w1),
        ([b2, a2, a2], w2),
        ([a2, b2, a2], w2),
        ([a2, a2, b2], w2),
    ]
}

pub fn barycentric_point(p: &[Point; 3], l: [f64; 3]) -> Point {
    [
        l[0] * p[0][0] + l[1] * p[1][0] + l[2] * p[2][0],
        l[0] * p[0][1] + l[1] * p[1][1] + l[2] * p[2][1],
    ]
}
