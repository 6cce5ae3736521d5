use std::f64::consts::PI;

use super::Point;

/// The direction sample used for unit-ball inclusion tests.
///
/// 1-D: `±1`. 2-D: 64 equally spaced angles. 3-D: 200 Fibonacci-sphere points.
/// 4-D: `±eᵢ` and the 16 points `(±1, ±1, ±1, ±1)/2`.
pub fn unit_directions(dim: usize) -> Vec<Point> {
    match dim {
        2 => sphere_directions(2, 64),
        3 => sphere_directions(3, 200),
        _ => sphere_directions(dim, 0),
    }
}

/// `count` roughly uniform unit vectors in 2-D or 3-D; the fixed cross-polytope plus
/// hypercube pattern otherwise.
pub fn sphere_directions(dim: usize, count: usize) -> Vec<Point> {
    match dim {
        1 => vec![Point::from_element(1, 1.0), Point::from_element(1, -1.0)],
        2 => (0..count)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / count as f64;
                Point::from_vec(vec![t.cos(), t.sin()])
            })
            .collect(),
        3 => {
            let golden = PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|k| {
                    let z = 1.0 - 2.0 * (k as f64 + 0.5) / count as f64;
                    let r = (1.0 - z * z).sqrt();
                    let t = golden * k as f64;
                    Point::from_vec(vec![r * t.cos(), r * t.sin(), z])
                })
                .collect()
        }
        _ => {
            let mut out = Vec::new();
            for i in 0..dim {
                for s in [1.0, -1.0] {
                    let mut e = Point::zeros(dim);
                    e[i] = s;
                    out.push(e);
                }
            }
            for mask in 0..(1usize << dim) {
                let v = (0..dim).map(|i| if mask >> i & 1 == 1 { -1.0 } else { 1.0 });
                let p = Point::from_iterator(dim, v);
                let n = p.norm();
                out.push(p / n);
            }
            out
        }
    }
}
