use super::GeomError;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeSet;
use std::str::FromStr;

pub(crate) type IPoint = [BigInt; 3];

pub(crate) fn sub(a: &IPoint, b: &IPoint) -> IPoint {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]]
}

pub(crate) fn cross(a: &IPoint, b: &IPoint) -> IPoint {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

pub(crate) fn dot(a: &IPoint, b: &IPoint) -> BigInt {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

fn collinear(a: &IPoint, b: &IPoint, c: &IPoint) -> bool {
    cross(&sub(b, a), &sub(c, a)).iter().all(Zero::is_zero)
}

/// Sign of the orientation determinant of `(b−a, c−a, d−a)`.
pub(crate) fn orient3(a: &IPoint, b: &IPoint, c: &IPoint, d: &IPoint) -> BigInt {
    dot(&cross(&sub(b, a), &sub(c, a)), &sub(d, a)).signum()
}

/// First general-position violation created by adding `points[k]` to `points[..k]`.
fn violation_at(points: &[IPoint], k: usize) -> Option<String> {
    let p = &points[k];
    for i in 0..k {
        if &points[i] == p {
            return Some(format!("points {i} and {k} coincide"));
        }
    }
    for i in 0..k {
        for j in i + 1..k {
            if collinear(&points[i], &points[j], p) {
                return Some(format!("points {i}, {j}, {k} are collinear"));
            }
        }
    }
    for i in 0..k {
        for j in i + 1..k {
            for l in j + 1..k {
                if orient3(&points[i], &points[j], &points[l], p).is_zero() {
                    return Some(format!("points {i}, {j}, {l}, {k} are coplanar"));
                }
            }
        }
    }
    None
}

/// A straight-line embedding of `K_N` with exact rational vertex positions in
/// general position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLEmbedding {
    coords: Vec<[BigRational; 3]>,
    scaled: Vec<IPoint>,
    general: bool,
}

impl PLEmbedding {
    pub fn new(coords: Vec<[BigRational; 3]>) -> Result<Self, GeomError> {
        let e = Self::new_relaxed(coords)?;
        if !e.general {
            let msg = (0..e.scaled.len()).find_map(|k| violation_at(&e.scaled, k));
            return Err(GeomError::NotGeneralPosition(msg.unwrap_or_default()));
        }
        Ok(e)
    }

    /// Only requires the points to be pairwise distinct. Linking numbers are
    /// still exact; a pair of curves that actually meet fails every rotation.
    pub fn new_relaxed(coords: Vec<[BigRational; 3]>) -> Result<Self, GeomError> {
        let mut lcm = BigInt::one();
        for p in &coords {
            for x in p {
                lcm = lcm.lcm(x.denom());
            }
        }
        let scaled: Vec<IPoint> = coords
            .iter()
            .map(|p| {
                let f = |x: &BigRational| x.numer() * (&lcm / x.denom());
                [f(&p[0]), f(&p[1]), f(&p[2])]
            })
            .collect();
        let distinct: BTreeSet<&IPoint> = scaled.iter().collect();
        if distinct.len() != scaled.len() {
            return Err(GeomError::InvalidArgument("points are not pairwise distinct".into()));
        }
        let general = (0..scaled.len()).all(|k| violation_at(&scaled, k).is_none());
        Ok(PLEmbedding { coords, scaled, general })
    }

    pub fn from_integers(points: &[[i64; 3]]) -> Result<Self, GeomError> {
        Self::new(integer_coords(points))
    }

    pub fn from_integers_relaxed(points: &[[i64; 3]]) -> Result<Self, GeomError> {
        Self::new_relaxed(integer_coords(points))
    }

    /// No three points collinear and no four coplanar.
    pub fn is_general_position(&self) -> bool {
        self.general
    }

    #[allow(non_snake_case)]
    pub fn N(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[[BigRational; 3]] {
        &self.coords
    }

    /// Coordinates multiplied by the common denominator.
    pub(crate) fn integer_points(&self) -> &[IPoint] {
        &self.scaled
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("embedding serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self, GeomError> {
        serde_json::from_str(s).map_err(|e| GeomError::InvalidArgument(e.to_string()))
    }
}

fn integer_coords(points: &[[i64; 3]]) -> Vec<[BigRational; 3]> {
    points
        .iter()
        .map(|p| p.map(|x| BigRational::from_integer(BigInt::from(x))))
        .collect()
}

#[derive(Serialize, Deserialize)]
struct EmbeddingFile {
    #[serde(rename = "N")]
    n: usize,
    coords: Vec<[String; 3]>,
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let num = BigInt::from_str(a.trim()).map_err(|e| format!("{s:?}: {e}"))?;
            let den = BigInt::from_str(b.trim()).map_err(|e| format!("{s:?}: {e}"))?;
            if den.is_zero() {
                return Err(format!("{s:?}: zero denominator"));
            }
            Ok(BigRational::new(num, den))
        }
        None => BigInt::from_str(s)
            .map(BigRational::from_integer)
            .map_err(|e| format!("{s:?}: {e}")),
    }
}

impl Serialize for PLEmbedding {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        EmbeddingFile {
            n: self.N(),
            coords: self.coords.iter().map(|p| p.each_ref().map(|x| x.to_string())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PLEmbedding {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let file = EmbeddingFile::deserialize(d)?;
        if file.coords.len() != file.n {
            return Err(D::Error::custom(format!(
                "N = {} but {} coordinates given",
                file.n,
                file.coords.len()
            )));
        }
        let mut coords = Vec::with_capacity(file.n);
        for p in &file.coords {
            let mut q: [BigRational; 3] = Default::default();
            for (slot, s) in q.iter_mut().zip(p) {
                *slot = parse_rational(s).map_err(D::Error::custom)?;
            }
            coords.push(q);
        }
        PLEmbedding::new_relaxed(coords).map_err(D::Error::custom)
    }
}

/// Deterministic embedding of `K_N` on the integer grid `[0, 64N²]³`; each
/// point is resampled until it keeps the set in general position.
pub fn random_general_position_embedding(n: usize, seed: u64) -> Result<PLEmbedding, GeomError> {
    if n == 0 {
        return Err(GeomError::InvalidArgument("N must be at least 1".into()));
    }
    let side = 64 * (n as i64) * (n as i64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<IPoint> = Vec::with_capacity(n);
    while points.len() < n {
        let p: IPoint = std::array::from_fn(|_| BigInt::from(rng.random_range(0..=side)));
        points.push(p);
        if violation_at(&points, points.len() - 1).is_some() {
            points.pop();
        }
    }
    let coords = points.iter().map(|p| p.clone().map(BigRational::from_integer)).collect();
    Ok(PLEmbedding {
        coords,
        scaled: points,
        general: true,
    })
}

/// A closed polygonal curve through embedded vertices, traversed in list order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct PolygonalCycle(Vec<u32>);

impl TryFrom<Vec<u32>> for PolygonalCycle {
    type Error = GeomError;
    fn try_from(v: Vec<u32>) -> Result<Self, GeomError> {
        PolygonalCycle::new(v)
    }
}

impl From<PolygonalCycle> for Vec<u32> {
    fn from(c: PolygonalCycle) -> Self {
        c.0
    }
}

impl PolygonalCycle {
    pub fn new(vertices: Vec<u32>) -> Result<Self, GeomError> {
        let distinct: BTreeSet<u32> = vertices.iter().copied().collect();
        if distinct.len() < 3 {
            return Err(GeomError::InvalidArgument(format!(
                "cycle {vertices:?} has fewer than 3 distinct vertices"
            )));
        }
        let k = vertices.len();
        if (0..k).any(|i| vertices[i] == vertices[(i + 1) % k]) {
            return Err(GeomError::InvalidArgument(format!(
                "cycle {vertices:?} repeats a vertex consecutively"
            )));
        }
        Ok(PolygonalCycle(vertices))
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> PolygonalCycle {
        PolygonalCycle(self.0.iter().rev().copied().collect())
    }

    /// Same curve, starting `k` positions later.
    pub fn rotated(&self, k: usize) -> PolygonalCycle {
        let mut v = self.0.clone();
        let len = v.len();
        v.rotate_left(k % len);
        PolygonalCycle(v)
    }

    /// Consecutive vertex pairs, closing up at the end.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        let k = self.0.len();
        (0..k).map(move |i| (self.0[i], self.0[(i + 1) % k]))
    }
}

pub(crate) fn check_pair(e: &PLEmbedding, c1: &PolygonalCycle, c2: &PolygonalCycle) -> Result<(), GeomError> {
    for &v in c1.vertices().iter().chain(c2.vertices()) {
        if v as usize >= e.N() {
            return Err(GeomError::InvalidArgument(format!(
                "vertex {v} out of range for N = {}",
                e.N()
            )));
        }
    }
    let a: BTreeSet<u32> = c1.vertices().iter().copied().collect();
    if let Some(&v) = c2.vertices().iter().find(|v| a.contains(v)) {
        return Err(GeomError::SharedVertex(v));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_embeddings_are_deterministic_and_generic() {
        let a = random_general_position_embedding(6, 0).unwrap();
        let b = random_general_position_embedding(6, 0).unwrap();
        let c = random_general_position_embedding(6, 1).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.N(), 6);
        let p = a.integer_points();
        for i in 0..6 {
            for j in i + 1..6 {
                for k in j + 1..6 {
                    for l in k + 1..6 {
                        assert!(!orient3(&p[i], &p[j], &p[k], &p[l]).is_zero());
                    }
                }
            }
        }
        assert_eq!(random_general_position_embedding(1, 7).unwrap().N(), 1);
        assert!(random_general_position_embedding(0, 0).is_err());
    }

    #[test]
    fn rejects_degenerate_positions() {
        assert!(matches!(
            PLEmbedding::from_integers(&[[0, 0, 0], [1, 1, 1], [2, 2, 2]]),
            Err(GeomError::NotGeneralPosition(_))
        ));
        assert!(PLEmbedding::from_integers(&[[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]]).is_err());
        assert!(PLEmbedding::from_integers(&[[0, 0, 0], [0, 0, 0]]).is_err());
        assert!(PLEmbedding::from_integers_relaxed(&[[0, 0, 0], [0, 0, 0]]).is_err());
        let flat = PLEmbedding::from_integers_relaxed(&[[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]]).unwrap();
        assert!(!flat.is_general_position());
        assert!(PLEmbedding::from_integers(&[[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]).is_ok());
    }

    #[test]
    fn json_round_trip_with_fractions() {
        let s = r#"{"N":3,"coords":[["1/2","0","0"],["0","-3/4","0"],["0","0","5"]]}"#;
        let e = PLEmbedding::from_json(s).unwrap();
        assert_eq!(e.to_json(), s);
        assert_eq!(e.integer_points()[0], [BigInt::from(2), BigInt::zero(), BigInt::zero()]);
        assert!(PLEmbedding::from_json(r#"{"N":2,"coords":[["1","0","0"]]}"#).is_err());
        assert!(PLEmbedding::from_json(r#"{"N":1,"coords":[["1/0","0","0"]]}"#).is_err());
    }

    #[test]
    fn cycle_validation() {
        assert!(PolygonalCycle::new(vec![0, 1]).is_err());
        assert!(PolygonalCycle::new(vec![0, 1, 1, 2]).is_err());
        assert!(PolygonalCycle::new(vec![0, 1, 2, 0]).is_err());
        let c = PolygonalCycle::new(vec![0, 1, 2, 3]).unwrap();
        assert_eq!(c.reversed().vertices(), &[3, 2, 1, 0]);
        assert_eq!(c.rotated(1).vertices(), &[1, 2, 3, 0]);
        assert_eq!(c.edges().last(), Some((3, 0)));
    }
}
