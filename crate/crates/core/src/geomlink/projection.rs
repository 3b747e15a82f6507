use super::embedding::{check_pair, IPoint};
use super::{GeomError, PLEmbedding, PolygonalCycle};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;

/// Number of rotations tried by [`linking_number`] before giving up.
pub const ROTATION_ATTEMPTS: usize = 64;

/// A proper rotation given by an integer quaternion `(a, b, c, d)`; the
/// matrix is scaled by `a²+b²+c²+d² > 0`, which leaves every sign unchanged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rotation(pub [i64; 4]);

impl Rotation {
    pub const IDENTITY: Rotation = Rotation([1, 0, 0, 0]);

    /// The `k`-th entry of the fixed retry schedule; entry 0 is the identity.
    pub fn schedule(k: usize) -> Rotation {
        const FIXED: [[i64; 4]; 8] = [
            [1, 0, 0, 0],
            [3, 1, 2, 1],
            [2, 3, 1, 5],
            [5, 2, 7, 3],
            [7, 4, 1, 6],
            [4, 9, 5, 2],
            [11, 3, 8, 7],
            [6, 13, 2, 9],
        ];
        if k < FIXED.len() {
            Rotation(FIXED[k])
        } else {
            let k = k as i64;
            Rotation([2 * k + 1, k * k % 17 + 1, 3 * k % 11 + 2, k % 7 + 3])
        }
    }

    fn matrix(&self) -> Result<[[BigInt; 3]; 3], GeomError> {
        let [a, b, c, d] = self.0.map(BigInt::from);
        if a.is_zero() && b.is_zero() && c.is_zero() && d.is_zero() {
            return Err(GeomError::InvalidArgument("zero quaternion".into()));
        }
        let two = BigInt::from(2);
        let (aa, bb, cc, dd) = (&a * &a, &b * &b, &c * &c, &d * &d);
        Ok([
            [
                &aa + &bb - &cc - &dd,
                &two * (&b * &c - &a * &d),
                &two * (&b * &d + &a * &c),
            ],
            [
                &two * (&b * &c + &a * &d),
                &aa - &bb + &cc - &dd,
                &two * (&c * &d - &a * &b),
            ],
            [
                &two * (&b * &d - &a * &c),
                &two * (&c * &d + &a * &b),
                &aa - &bb - &cc + &dd,
            ],
        ])
    }

    fn apply(m: &[[BigInt; 3]; 3], p: &IPoint) -> IPoint {
        std::array::from_fn(|i| &m[i][0] * &p[0] + &m[i][1] * &p[1] + &m[i][2] * &p[2])
    }
}

fn orient2(a: &IPoint, b: &IPoint, c: &IPoint) -> BigInt {
    (&b[0] - &a[0]) * (&c[1] - &a[1]) - (&b[1] - &a[1]) * (&c[0] - &a[0])
}

fn within_box(a: &IPoint, b: &IPoint, p: &IPoint) -> bool {
    (0..2).all(|i| {
        let (lo, hi) = if a[i] <= b[i] { (&a[i], &b[i]) } else { (&b[i], &a[i]) };
        lo <= &p[i] && &p[i] <= hi
    })
}

/// Contribution of segment `p1p2` (first curve) against `q1q2` (second curve):
/// the crossing sign when the first passes over the second, else 0.
fn crossing(p1: &IPoint, p2: &IPoint, q1: &IPoint, q2: &IPoint) -> Result<i64, GeomError> {
    let o1 = orient2(p1, p2, q1);
    let o2 = orient2(p1, p2, q2);
    let o3 = orient2(q1, q2, p1);
    let o4 = orient2(q1, q2, p2);
    let touching = [
        (o1.is_zero(), within_box(p1, p2, q1)),
        (o2.is_zero(), within_box(p1, p2, q2)),
        (o3.is_zero(), within_box(q1, q2, p1)),
        (o4.is_zero(), within_box(q1, q2, p2)),
    ];
    if touching.iter().any(|&(z, inside)| z && inside) {
        return Err(GeomError::DegenerateProjection(
            "a vertex projects onto another segment".into(),
        ));
    }
    if o1.is_zero() || o2.is_zero() || o3.is_zero() || o4.is_zero() {
        return Ok(0);
    }
    if o1.signum() == o2.signum() || o3.signum() == o4.signum() {
        return Ok(0);
    }
    // Proper crossing at p1 + t(p2−p1) = q1 + u(q2−q1), t = tn/den, u = un/den.
    let a = [&p2[0] - &p1[0], &p2[1] - &p1[1]];
    let b = [&q2[0] - &q1[0], &q2[1] - &q1[1]];
    let w = [&q1[0] - &p1[0], &q1[1] - &p1[1]];
    let den = &a[0] * &b[1] - &a[1] * &b[0];
    let tn = &w[0] * &b[1] - &w[1] * &b[0];
    let un = &w[0] * &a[1] - &w[1] * &a[0];
    // den·(z_p − z_q), with den's sign folded out below.
    let gap = &den * (&p1[2] - &q1[2]) + &tn * (&p2[2] - &p1[2]) - &un * (&q2[2] - &q1[2]);
    let over = match (gap.signum() * den.signum()).cmp(&BigInt::zero()) {
        Ordering::Equal => {
            return Err(GeomError::DegenerateProjection(
                "curves meet at equal height over a crossing".into(),
            ))
        }
        Ordering::Greater => true,
        Ordering::Less => false,
    };
    if !over {
        return Ok(0);
    }
    Ok(if den.is_positive() { 1 } else { -1 })
}

/// Linking number read off the projection along the `z` axis after applying
/// `rotation`. Fails with a retryable error when the projection is not
/// generic for the pair.
pub fn linking_number_with_rotation(
    e: &PLEmbedding,
    c1: &PolygonalCycle,
    c2: &PolygonalCycle,
    rotation: Rotation,
) -> Result<i64, GeomError> {
    check_pair(e, c1, c2)?;
    let m = rotation.matrix()?;
    let pts = e.integer_points();
    let place = |c: &PolygonalCycle| -> Vec<IPoint> {
        c.vertices().iter().map(|&v| Rotation::apply(&m, &pts[v as usize])).collect()
    };
    let a = place(c1);
    let b = place(c2);
    let mut total = 0i64;
    for i in 0..a.len() {
        let (p1, p2) = (&a[i], &a[(i + 1) % a.len()]);
        for j in 0..b.len() {
            total += crossing(p1, p2, &b[j], &b[(j + 1) % b.len()])?;
        }
    }
    Ok(total)
}

/// Integer linking number of two vertex-disjoint cycles: signed count of
/// crossings where `c1` passes over `c2`, with sign `det[a b]` for over
/// direction `a` and under direction `b`. Degenerate projections are retried
/// under [`Rotation::schedule`].
pub fn linking_number(e: &PLEmbedding, c1: &PolygonalCycle, c2: &PolygonalCycle) -> Result<i64, GeomError> {
    for k in 0..ROTATION_ATTEMPTS {
        match linking_number_with_rotation(e, c1, c2, Rotation::schedule(k)) {
            Err(err) if err.is_retryable() => continue,
            other => return other,
        }
    }
    Err(GeomError::RotationsExhausted(ROTATION_ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hopf() -> (PLEmbedding, PolygonalCycle, PolygonalCycle) {
        // Square in z = 0 and rectangle in y = 0; perturbed off the exact
        // planes only where general position demands it.
        let e = PLEmbedding::from_integers(&[
            [10, 10, 0],
            [-10, 10, 1],
            [-10, -10, 0],
            [10, -10, 2],
            [0, 1, 10],
            [20, 0, 11],
            [20, 2, -10],
            [1, 0, -12],
        ])
        .unwrap();
        (e, PolygonalCycle::new(vec![0, 1, 2, 3]).unwrap(), PolygonalCycle::new(vec![4, 5, 6, 7]).unwrap())
    }

    #[test]
    fn quaternion_matrices_are_scaled_rotations() {
        for k in 0..20 {
            let r = Rotation::schedule(k);
            let m = r.matrix().unwrap();
            let s: i64 = r.0.iter().map(|x| x * x).sum();
            let det = &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
                - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
                + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0]);
            assert_eq!(det, BigInt::from(s).pow(3));
        }
    }

    #[test]
    fn perturbed_hopf_pair_links_once() {
        let (e, c1, c2) = hopf();
        let lk = linking_number(&e, &c1, &c2).unwrap();
        assert_eq!(lk.abs(), 1);
        assert_eq!(linking_number(&e, &c2, &c1).unwrap(), lk);
        assert_eq!(linking_number(&e, &c1, &c2.reversed()).unwrap(), -lk);
        for k in 1..6 {
            assert_eq!(linking_number_with_rotation(&e, &c1, &c2, Rotation::schedule(k)).unwrap(), lk);
        }
    }

    #[test]
    fn axis_aligned_square_and_rectangle() {
        let e = PLEmbedding::from_integers_relaxed(&[
            [1, 1, 0],
            [-1, 1, 0],
            [-1, -1, 0],
            [1, -1, 0],
            [0, 0, 1],
            [2, 0, 1],
            [2, 0, -1],
            [0, 0, -1],
        ])
        .unwrap();
        let c1 = PolygonalCycle::new(vec![0, 1, 2, 3]).unwrap();
        let c2 = PolygonalCycle::new(vec![4, 5, 6, 7]).unwrap();
        // The rectangle projects to a segment, which still crosses the square
        // transversally once.
        assert_eq!(linking_number_with_rotation(&e, &c1, &c2, Rotation::IDENTITY).unwrap(), 1);
        assert_eq!(linking_number(&e, &c1, &c2).unwrap(), 1);
        assert_eq!(crate::geomlink::gauss_linking_oracle(&e, &c1, &c2).unwrap(), 1);
        let far = PLEmbedding::from_integers_relaxed(&[
            [1, 1, 0],
            [-1, 1, 0],
            [-1, -1, 0],
            [1, -1, 0],
            [10, 0, 1],
            [12, 0, 1],
            [12, 0, -1],
            [10, 0, -1],
        ])
        .unwrap();
        assert_eq!(linking_number(&far, &c1, &c2).unwrap(), 0);
        assert_eq!(crate::geomlink::gauss_linking_oracle(&far, &c1, &c2).unwrap(), 0);
    }

    #[test]
    fn shared_vertex_is_an_argument_error() {
        let (e, c1, _) = hopf();
        let c2 = PolygonalCycle::new(vec![3, 4, 5]).unwrap();
        assert_eq!(linking_number(&e, &c1, &c2), Err(GeomError::SharedVertex(3)));
    }
}
