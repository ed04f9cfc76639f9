//! Points of PG(k-1, q), the simplex code and the matrix M_{k,q}.
//!
//! Points are stored as canonical representatives (first nonzero coordinate
//! equal to 1) and sorted lexicographically by their integer encodings. That
//! order is the single point order used everywhere in the crate: rows and
//! columns of M, multiplicity vectors, arrangements.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};

/// Default cap on the number of points, since M is stored densely.
pub const DEFAULT_POINT_CAP: usize = 10_000;

/// Position of a point in the global order.
pub type PointIndex = usize;

/// Canonical representative of a projective point.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint {
    coords: Vec<FieldElement>,
}

impl ProjPoint {
    /// Scales a nonzero vector so that its first nonzero entry is 1. Returns
    /// `None` for the zero vector.
    pub fn canonicalize(f: &FieldSpec, v: &[FieldElement]) -> Option<ProjPoint> {
        let lead = *v.iter().find(|x| !x.is_zero())?;
        let s = f.inv(lead).ok()?;
        Some(ProjPoint { coords: v.iter().map(|&x| f.mul(s, x)).collect() })
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }
}

/// (q^k - 1)/(q - 1), or `None` on overflow.
pub fn point_count(q: u32, k: usize) -> Option<usize> {
    let qk = (q as usize).checked_pow(u32::try_from(k).ok()?)?;
    Some((qk - 1) / (q as usize - 1))
}

/// Enumerates PG(k-1, q) in the global order, rejecting geometries larger than `cap`.
pub fn enumerate_points_capped(f: &FieldSpec, k: usize, cap: usize) -> Result<Vec<ProjPoint>> {
    if k == 0 {
        return Err(Error::InvalidDimension);
    }
    let n = point_count(f.q(), k).filter(|&n| n <= cap).ok_or(Error::Overflow {
        q: f.q(),
        k,
        cap,
    })?;
    let q = f.q() as usize;
    let mut points = Vec::with_capacity(n);
    // Canonical vectors are (0,..,0,1,*,..,*); emit them in lexicographic order
    // by placing the leading 1 as far right as possible first.
    for lead in (0..k).rev() {
        let free = k - lead - 1;
        for code in 0..q.pow(free as u32) {
            let mut coords = vec![FieldElement::ZERO; k];
            coords[lead] = FieldElement::ONE;
            let mut c = code;
            for slot in coords[lead + 1..].iter_mut().rev() {
                *slot = FieldElement::from_raw((c % q) as u8);
                c /= q;
            }
            points.push(ProjPoint { coords });
        }
    }
    debug_assert_eq!(points.len(), n);
    debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
    Ok(points)
}

pub fn enumerate_points(f: &FieldSpec, k: usize) -> Result<Vec<ProjPoint>> {
    enumerate_points_capped(f, k, DEFAULT_POINT_CAP)
}

/// The N projective codewords of the simplex code: for each point p, the
/// vector `(p . point_j)_j`.
pub fn simplex_codewords(f: &FieldSpec, k: usize) -> Result<Vec<Vec<FieldElement>>> {
    let points = enumerate_points(f, k)?;
    Ok(points
        .iter()
        .map(|p| points.iter().map(|x| f.dot_unchecked(p.coords(), x.coords())).collect())
        .collect())
}

/// The point set of PG(k-1, q) over a fixed field, with lookup by column.
#[derive(Debug, Clone)]
pub struct Geometry {
    field: FieldSpec,
    k: usize,
    points: Vec<ProjPoint>,
}

impl Geometry {
    pub fn new(field: &FieldSpec, k: usize) -> Result<Self> {
        Self::with_cap(field, k, DEFAULT_POINT_CAP)
    }

    pub fn with_cap(field: &FieldSpec, k: usize, cap: usize) -> Result<Self> {
        let points = enumerate_points_capped(field, k, cap)?;
        Ok(Geometry { field: field.clone(), k, points })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn point(&self, idx: PointIndex) -> &ProjPoint {
        &self.points[idx]
    }

    /// Index of the projective class of a column, `None` for the zero vector.
    pub fn classify(&self, column: &[FieldElement]) -> Option<PointIndex> {
        let p = ProjPoint::canonicalize(&self.field, column)?;
        self.points.binary_search(&p).ok()
    }
}

/// M_{k,q} together with the data needed to apply its inverse.
///
/// `m[i][j] = 0` iff `point_i . point_j = 0`, otherwise 1.
#[derive(Debug, Clone)]
pub struct IncidenceSystem {
    geometry: Arc<Geometry>,
    q: i64,
    n: usize,
    m: Vec<u8>,
    row_weight: i64,
    /// For each column j, the rows i with m[i][j] = 1.
    col_support: Vec<Vec<PointIndex>>,
}

impl IncidenceSystem {
    pub fn new(f: &FieldSpec, k: usize) -> Result<Self> {
        Self::from_geometry(Arc::new(Geometry::new(f, k)?))
    }

    pub fn with_cap(f: &FieldSpec, k: usize, cap: usize) -> Result<Self> {
        Self::from_geometry(Arc::new(Geometry::with_cap(f, k, cap)?))
    }

    pub fn from_geometry(geometry: Arc<Geometry>) -> Result<Self> {
        let f = geometry.field().clone();
        let n = geometry.len();
        let pts = geometry.points();
        let mut m = vec![0u8; n * n];
        for i in 0..n {
            for j in 0..n {
                m[i * n + j] = u8::from(!f.dot_unchecked(pts[i].coords(), pts[j].coords()).is_zero());
            }
        }
        let col_support = (0..n).map(|j| (0..n).filter(|&i| m[i * n + j] == 1).collect()).collect();
        let q = f.q() as i64;
        let row_weight = q.pow(geometry.k() as u32 - 1);
        Ok(IncidenceSystem { geometry, q, n, m, row_weight, col_support })
    }

    pub fn geometry(&self) -> &Arc<Geometry> {
        &self.geometry
    }

    pub fn field(&self) -> &FieldSpec {
        self.geometry.field()
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn k(&self) -> usize {
        self.geometry.k()
    }

    pub fn n_points(&self) -> usize {
        self.n
    }

    /// q^{k-1}: the weight of every nonzero simplex codeword, and the common
    /// denominator of M^{-1}.
    pub fn row_weight(&self) -> i64 {
        self.row_weight
    }

    #[inline]
    pub fn entry(&self, i: PointIndex, j: PointIndex) -> u8 {
        self.m[i * self.n + j]
    }

    pub fn row(&self, i: PointIndex) -> &[u8] {
        &self.m[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> {
        self.m.chunks(self.n)
    }

    pub fn column_support(&self, j: PointIndex) -> &[PointIndex] {
        &self.col_support[j]
    }

    /// M v.
    pub fn apply(&self, v: &[i64]) -> Result<Vec<i64>> {
        self.check_len(v.len())?;
        Ok(self
            .rows()
            .map(|row| row.iter().zip(v).filter(|(&b, _)| b == 1).map(|(_, &x)| x).sum())
            .collect())
    }

    /// Numerators of M^{-1} v over the common denominator q^{k-1}, using the
    /// closed form M^{-1} = (q M^T - (q-1) J) / q^{k-1}.
    pub fn apply_inverse(&self, v: &[i64]) -> Result<(Vec<i64>, i64)> {
        self.check_len(v.len())?;
        let total: i64 = v.iter().sum();
        let nums = self
            .col_support
            .iter()
            .map(|support| self.q * support.iter().map(|&j| v[j]).sum::<i64>() - (self.q - 1) * total)
            .collect();
        Ok((nums, self.row_weight))
    }

    /// M^{-1} v when it is integral.
    pub fn solve_integral(&self, v: &[i64]) -> Result<Option<Vec<i64>>> {
        let (nums, den) = self.apply_inverse(v)?;
        Ok(nums.iter().all(|x| x % den == 0).then(|| nums.iter().map(|x| x / den).collect()))
    }

    /// Numerator matrix q M^T - (q-1) J of the inverse, row-major.
    pub fn inverse_numerators(&self) -> Vec<Vec<i64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.q * self.entry(j, i) as i64 - (self.q - 1)).collect())
            .collect()
    }

    fn check_len(&self, got: usize) -> Result<()> {
        if got == self.n {
            Ok(())
        } else {
            Err(Error::LengthMismatch { expected: self.n, got })
        }
    }
}
