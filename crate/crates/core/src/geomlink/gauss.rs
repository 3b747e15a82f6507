use super::embedding::check_pair;
use super::{GeomError, PLEmbedding, PolygonalCycle};
use num_traits::ToPrimitive;
use std::f64::consts::PI;

/// Largest accepted distance from the Gauss sum to the nearest integer.
pub const ORACLE_GUARD: f64 = 0.25;

type V = [f64; 3];

fn sub(a: V, b: V) -> V {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: V, b: V) -> V {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: V, b: V) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn unit(a: V) -> Option<V> {
    let n = dot(a, a).sqrt();
    (n > 0.0).then(|| [a[0] / n, a[1] / n, a[2] / n])
}

/// Solid angle term of the Gauss integral for segments `p1p2` and `p3p4`.
fn segment_pair(p1: V, p2: V, p3: V, p4: V) -> f64 {
    let r13 = sub(p3, p1);
    let r14 = sub(p4, p1);
    let r23 = sub(p3, p2);
    let r24 = sub(p4, p2);
    let normals = [cross(r13, r14), cross(r14, r24), cross(r24, r23), cross(r23, r13)];
    let Some(n) = normals.iter().map(|&v| unit(v)).collect::<Option<Vec<V>>>() else {
        // Coplanar segments contribute nothing.
        return 0.0;
    };
    let omega: f64 = (0..4).map(|i| dot(n[i], n[(i + 1) % 4]).clamp(-1.0, 1.0).asin()).sum();
    let orient = dot(cross(sub(p4, p3), sub(p2, p1)), r13);
    omega * orient.signum()
}

/// The Gauss double sum in floating point, before rounding.
pub fn gauss_linking_number_f64(e: &PLEmbedding, c1: &PolygonalCycle, c2: &PolygonalCycle) -> Result<f64, GeomError> {
    check_pair(e, c1, c2)?;
    let pts = e.integer_points();
    let scale = pts
        .iter()
        .flat_map(|p| p.iter())
        .map(|x| x.to_f64().unwrap_or(f64::INFINITY).abs())
        .fold(1.0f64, f64::max);
    let place = |c: &PolygonalCycle| -> Vec<V> {
        c.vertices()
            .iter()
            .map(|&v| pts[v as usize].each_ref().map(|x| x.to_f64().unwrap_or(0.0) / scale))
            .collect()
    };
    let a = place(c1);
    let b = place(c2);
    let mut total = 0.0;
    for i in 0..a.len() {
        for j in 0..b.len() {
            total += segment_pair(a[i], a[(i + 1) % a.len()], b[j], b[(j + 1) % b.len()]);
        }
    }
    Ok(total / (4.0 * PI))
}

/// Independent floating-point linking number; fails when the sum is more
/// than [`ORACLE_GUARD`] away from an integer.
pub fn gauss_linking_oracle(e: &PLEmbedding, c1: &PolygonalCycle, c2: &PolygonalCycle) -> Result<i64, GeomError> {
    let value = gauss_linking_number_f64(e, c1, c2)?;
    let rounded = value.round();
    let distance = (value - rounded).abs();
    if !value.is_finite() || distance > ORACLE_GUARD {
        return Err(GeomError::OracleInconclusive { value, distance });
    }
    Ok(rounded as i64)
}
