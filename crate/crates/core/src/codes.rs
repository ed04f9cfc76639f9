//! Linear codes, linear maps between them, and the quantities the forcing
//! engine reasons about: projective weights, multiplicity vectors and the
//! projective multiset of weight changes.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::projgeom::{Geometry, IncidenceSystem};

/// A dense row-major matrix over F_q.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FqMatrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl FqMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FqMatrix { rows, cols, data: vec![FieldElement::ZERO; rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<FieldElement>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::LengthMismatch { expected: cols, got: bad.len() });
        }
        Ok(FqMatrix { rows: rows.len(), cols, data: rows.into_iter().flatten().collect() })
    }

    /// Builds a matrix from integer encodings, validating each against `f`.
    pub fn from_reps(f: &FieldSpec, rows: &[Vec<u64>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| f.element(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    /// `k x n` matrix whose columns are the given k-vectors.
    pub fn from_columns(k: usize, columns: &[Vec<FieldElement>]) -> Result<Self> {
        let mut m = FqMatrix::zeros(k, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != k {
                return Err(Error::LengthMismatch { expected: k, got: c.len() });
            }
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: FieldElement) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> impl Iterator<Item = Vec<FieldElement>> + '_ {
        (0..self.cols).map(|j| self.column(j))
    }

    pub fn to_reps(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|x| x.rep() as u64).collect()).collect()
    }

    /// `x^T A` for a coefficient vector x of length `rows`.
    pub fn combine_rows(&self, f: &FieldSpec, x: &[FieldElement]) -> Vec<FieldElement> {
        debug_assert_eq!(x.len(), self.rows);
        let mut out = vec![FieldElement::ZERO; self.cols];
        for (i, &c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o = f.add(*o, f.mul(c, a));
            }
        }
        out
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, f: &FieldSpec, other: &FqMatrix) -> Result<FqMatrix> {
        if self.cols != other.rows {
            return Err(Error::LengthMismatch { expected: self.cols, got: other.rows });
        }
        let rows = (0..self.rows).map(|i| other.combine_rows(f, self.row(i))).collect();
        FqMatrix::from_rows(rows).map(|mut m| {
            // from_rows loses the column count when there are no rows
            m.cols = other.cols;
            m
        })
    }
}

impl fmt::Display for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

pub fn hamming_weight(v: &[FieldElement]) -> usize {
    v.iter().filter(|x| !x.is_zero()).count()
}

/// Rank over F_q by row reduction.
pub fn rank(f: &FieldSpec, m: &FqMatrix) -> usize {
    let mut a: Vec<Vec<FieldElement>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    let mut rank = 0;
    for col in 0..m.cols() {
        let Some(pivot) = (rank..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot);
        let inv = f.inv(a[rank][col]).expect("pivot is nonzero");
        for x in a[rank].iter_mut() {
            *x = f.mul(inv, *x);
        }
        for r in 0..a.len() {
            if r != rank && !a[r][col].is_zero() {
                let factor = a[r][col];
                for c in col..m.cols() {
                    let t = f.mul(factor, a[rank][c]);
                    a[r][c] = f.sub(a[r][c], t);
                }
            }
        }
        rank += 1;
        if rank == a.len() {
            break;
        }
    }
    rank
}

/// A k x n generator matrix whose rows are a basis of the code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorMatrix {
    field: FieldSpec,
    matrix: FqMatrix,
}

impl GeneratorMatrix {
    pub fn new(field: &FieldSpec, matrix: FqMatrix) -> Result<Self> {
        let r = rank(field, &matrix);
        if r < matrix.rows() || matrix.rows() == 0 {
            return Err(Error::RankDeficient { rank: r, k: matrix.rows() });
        }
        Ok(GeneratorMatrix { field: field.clone(), matrix })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn k(&self) -> usize {
        self.matrix.rows()
    }

    pub fn n(&self) -> usize {
        self.matrix.cols()
    }

    pub fn matrix(&self) -> &FqMatrix {
        &self.matrix
    }
}

/// A linear map given on a basis: row i of `image` is the image of row i of
/// the domain generator matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMapSpec {
    domain: GeneratorMatrix,
    image: FqMatrix,
}

impl LinearMapSpec {
    pub fn new(domain: GeneratorMatrix, image: FqMatrix) -> Result<Self> {
        if image.rows() != domain.k() {
            return Err(Error::LengthMismatch { expected: domain.k(), got: image.rows() });
        }
        Ok(LinearMapSpec { domain, image })
    }

    pub fn domain(&self) -> &GeneratorMatrix {
        &self.domain
    }

    pub fn image(&self) -> &FqMatrix {
        &self.image
    }

    pub fn field(&self) -> &FieldSpec {
        self.domain.field()
    }

    pub fn k(&self) -> usize {
        self.domain.k()
    }
}

/// Column counts per projective point, plus the number of zero columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityVector {
    pub counts: Vec<i64>,
    pub zero_cols: i64,
}

impl MultiplicityVector {
    pub fn total_columns(&self) -> i64 {
        self.counts.iter().sum::<i64>() + self.zero_cols
    }
}

/// A multiset of integers, kept sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightChangeMultiset {
    values: Vec<i64>,
}

impl WeightChangeMultiset {
    pub fn new(mut values: Vec<i64>) -> Self {
        values.sort_unstable();
        WeightChangeMultiset { values }
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> i64 {
        self.values.iter().sum()
    }

    /// Errors unless the multiset has exactly `n` elements.
    pub fn expect_len(&self, n: usize) -> Result<()> {
        if self.values.len() == n {
            Ok(())
        } else {
            Err(Error::SizeMismatch { expected: n, got: self.values.len() })
        }
    }
}

impl From<Vec<i64>> for WeightChangeMultiset {
    fn from(v: Vec<i64>) -> Self {
        WeightChangeMultiset::new(v)
    }
}

impl std::str::FromStr for WeightChangeMultiset {
    type Err = Error;

    /// Parses a comma-separated list such as `2,2,2,3,5,5,5`.
    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .split(',')
            .map(|t| t.trim())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<i64>().map_err(|e| Error::Parse(format!("bad multiset entry {t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(WeightChangeMultiset::new(values))
    }
}

impl fmt::Display for WeightChangeMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(i64::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Counts columns of `g` by projective class. Rank is not required.
pub fn multiplicities(geom: &Geometry, g: &FqMatrix) -> Result<MultiplicityVector> {
    if g.rows() != geom.k() {
        return Err(Error::LengthMismatch { expected: geom.k(), got: g.rows() });
    }
    let mut counts = vec![0i64; geom.len()];
    let mut zero_cols = 0;
    for col in g.columns() {
        match geom.classify(&col) {
            Some(p) => counts[p] += 1,
            None => zero_cols += 1,
        }
    }
    Ok(MultiplicityVector { counts, zero_cols })
}

fn check_geometry(geom: &Geometry, f: &FieldSpec, k: usize) -> Result<()> {
    if geom.field() != f {
        return Err(Error::Parse(format!("field mismatch: geometry over F_{}, code over F_{}", geom.field().q(), f.q())));
    }
    if geom.k() != k {
        return Err(Error::LengthMismatch { expected: geom.k(), got: k });
    }
    Ok(())
}

/// Weight of the codeword x^T B for every point x, computed codeword by codeword.
pub fn projective_weights(geom: &Geometry, g: &GeneratorMatrix) -> Result<Vec<i64>> {
    check_geometry(geom, g.field(), g.k())?;
    let f = g.field();
    Ok(geom
        .points()
        .iter()
        .map(|x| hamming_weight(&g.matrix().combine_rows(f, x.coords())) as i64)
        .collect())
}

/// Weight changes `w(x^T B) - w(x^T C)` indexed by point, computed directly.
pub fn weight_change_vector(geom: &Geometry, phi: &LinearMapSpec) -> Result<Vec<i64>> {
    check_geometry(geom, phi.field(), phi.k())?;
    let f = phi.field();
    Ok(geom
        .points()
        .iter()
        .map(|x| {
            let u = hamming_weight(&phi.domain().matrix().combine_rows(f, x.coords())) as i64;
            let v = hamming_weight(&phi.image().combine_rows(f, x.coords())) as i64;
            u - v
        })
        .collect())
}

/// The projective multiset of weight changes of `phi`.
pub fn weight_changes(geom: &Geometry, phi: &LinearMapSpec) -> Result<WeightChangeMultiset> {
    weight_change_vector(geom, phi).map(WeightChangeMultiset::new)
}

/// The same vector as [`weight_change_vector`], obtained as M (R - Q).
pub fn weight_change_vector_via_incidence(sys: &IncidenceSystem, phi: &LinearMapSpec) -> Result<Vec<i64>> {
    let geom = sys.geometry();
    check_geometry(geom, phi.field(), phi.k())?;
    let r = multiplicities(geom, phi.domain().matrix())?;
    let q = multiplicities(geom, phi.image())?;
    let d: Vec<i64> = r.counts.iter().zip(&q.counts).map(|(a, b)| a - b).collect();
    sys.apply(&d)
}

/// Projection test by multiplicities: no projective class gains columns.
pub fn is_projection(geom: &Geometry, phi: &LinearMapSpec) -> Result<bool> {
    check_geometry(geom, phi.field(), phi.k())?;
    let r = multiplicities(geom, phi.domain().matrix())?;
    let q = multiplicities(geom, phi.image())?;
    Ok(q.counts.iter().zip(&r.counts).all(|(qi, ri)| qi <= ri))
}

/// Searches for an n x m matrix P with at most one nonzero entry in each row
/// and column such that C = B P.
///
/// Works directly on columns: each nonzero column of C must be a nonzero
/// scalar multiple of its own column of B. Solved as bipartite matching, with
/// no reference to projective classes or the point order.
pub fn projection_matrix(phi: &LinearMapSpec) -> Option<FqMatrix> {
    let f = phi.field();
    let b = phi.domain().matrix();
    let c = phi.image();
    let b_cols: Vec<_> = b.columns().collect();
    let c_cols: Vec<_> = c.columns().collect();

    // scalar alpha != 0 with target = alpha * source, if any
    let multiple = |source: &[FieldElement], target: &[FieldElement]| -> Option<FieldElement> {
        let i = source.iter().position(|x| !x.is_zero())?;
        let alpha = f.mul(target[i], f.inv(source[i]).ok()?);
        (!alpha.is_zero() && source.iter().zip(target).all(|(&s, &t)| f.mul(alpha, s) == t)).then_some(alpha)
    };

    let targets: Vec<usize> = (0..c_cols.len()).filter(|&j| c_cols[j].iter().any(|x| !x.is_zero())).collect();
    let edges: Vec<Vec<(usize, FieldElement)>> = targets
        .iter()
        .map(|&j| {
            b_cols
                .iter()
                .enumerate()
                .filter_map(|(i, s)| multiple(s, &c_cols[j]).map(|a| (i, a)))
                .collect()
        })
        .collect();

    fn augment(
        t: usize,
        edges: &[Vec<(usize, FieldElement)>],
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for &(s, _) in &edges[t] {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            if owner[s].is_none_or(|o| augment(o, edges, seen, owner)) {
                owner[s] = Some(t);
                return true;
            }
        }
        false
    }

    let mut owner: Vec<Option<usize>> = vec![None; b_cols.len()];
    for t in 0..targets.len() {
        let mut seen = vec![false; b_cols.len()];
        if !augment(t, &edges, &mut seen, &mut owner) {
            return None;
        }
    }
    let mut p = FqMatrix::zeros(b.cols(), c.cols());
    for (s, t) in owner.iter().enumerate() {
        if let Some(t) = *t {
            let alpha = edges[t].iter().find(|(i, _)| *i == s).unwrap().1;
            p.set(s, targets[t], alpha);
        }
    }
    Some(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projgeom::{enumerate_points, IncidenceSystem};

    fn fe(x: u8) -> FieldElement {
        FieldElement::from_raw(x)
    }

    fn mat(f: &FieldSpec, rows: &[&[u64]]) -> FqMatrix {
        FqMatrix::from_reps(f, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    pub(crate) fn simplex_generator(f: &FieldSpec, k: usize) -> GeneratorMatrix {
        let cols: Vec<_> = enumerate_points(f, k).unwrap().into_iter().map(|p| p.coords().to_vec()).collect();
        GeneratorMatrix::new(f, FqMatrix::from_columns(k, &cols).unwrap()).unwrap()
    }

    #[test]
    fn weights() {
        assert_eq!(hamming_weight(&[fe(1), fe(0), fe(1), fe(1), fe(0)]), 3);
        assert_eq!(hamming_weight(&[fe(0); 4]), 0);
        assert_eq!(hamming_weight(&[fe(1), fe(2), fe(0), fe(2)]), 3);
    }

    #[test]
    fn ranks() {
        let f2 = FieldSpec::new(2).unwrap();
        assert_eq!(rank(&f2, simplex_generator(&f2, 3).matrix()), 3);
        assert_eq!(rank(&f2, &FqMatrix::zeros(3, 4)), 0);
        let f3 = FieldSpec::new(3).unwrap();
        assert_eq!(rank(&f3, &mat(&f3, &[&[1, 1], &[2, 2]])), 1);
        assert!(matches!(
            GeneratorMatrix::new(&f3, mat(&f3, &[&[1, 1], &[2, 2]])),
            Err(Error::RankDeficient { rank: 1, k: 2 })
        ));
    }

    #[test]
    fn multiplicity_examples() {
        let f2 = FieldSpec::new(2).unwrap();
        let g = Geometry::new(&f2, 3).unwrap();
        let r = multiplicities(&g, simplex_generator(&f2, 3).matrix()).unwrap();
        assert_eq!(r.counts, vec![1; 7]);
        assert_eq!(r.zero_cols, 0);

        let c = mat(&f2, &[&[1, 1], &[1, 1], &[1, 1]]);
        let q = multiplicities(&g, &c).unwrap();
        let top = g.classify(&[fe(1), fe(1), fe(1)]).unwrap();
        assert_eq!(q.counts[top], 2);
        assert_eq!(q.counts.iter().sum::<i64>(), 2);

        let f3 = FieldSpec::new(3).unwrap();
        let g3 = Geometry::new(&f3, 2).unwrap();
        let m = multiplicities(&g3, &mat(&f3, &[&[1, 2, 0], &[2, 1, 0]])).unwrap();
        let p = g3.classify(&[fe(1), fe(2)]).unwrap();
        assert_eq!(m.counts[p], 2);
        assert_eq!(m.zero_cols, 1);
        assert_eq!(m.total_columns(), 3);
    }

    #[test]
    fn projective_weight_examples() {
        let f2 = FieldSpec::new(2).unwrap();
        let g2 = Geometry::new(&f2, 2).unwrap();
        assert_eq!(projective_weights(&g2, &simplex_generator(&f2, 2)).unwrap(), vec![2, 2, 2]);
        let id = GeneratorMatrix::new(&f2, mat(&f2, &[&[1, 0], &[0, 1]])).unwrap();
        // points (0,1),(1,0),(1,1)
        assert_eq!(projective_weights(&g2, &id).unwrap(), vec![1, 1, 2]);

        let g3 = Geometry::new(&f2, 3).unwrap();
        let v1 = GeneratorMatrix::new(
            &f2,
            mat(&f2, &[&[1, 1, 1, 1, 0, 0, 0], &[1, 1, 0, 0, 1, 1, 0], &[1, 0, 1, 0, 1, 0, 1]]),
        )
        .unwrap();
        assert_eq!(projective_weights(&g3, &v1).unwrap(), vec![4; 7]);
    }

    #[test]
    fn projective_weights_match_incidence_product() {
        let f3 = FieldSpec::new(3).unwrap();
        let sys = IncidenceSystem::new(&f3, 2).unwrap();
        let g = GeneratorMatrix::new(&f3, mat(&f3, &[&[1, 0, 1, 2, 1], &[0, 1, 1, 1, 0]])).unwrap();
        let r = multiplicities(sys.geometry(), g.matrix()).unwrap();
        assert_eq!(projective_weights(sys.geometry(), &g).unwrap(), sys.apply(&r.counts).unwrap());
    }

    #[test]
    fn identity_map_preserves_weights() {
        let f4 = FieldSpec::new(4).unwrap();
        let g = Geometry::new(&f4, 2).unwrap();
        let b = GeneratorMatrix::new(&f4, mat(&f4, &[&[1, 0, 2, 3], &[0, 1, 1, 1]])).unwrap();
        let phi = LinearMapSpec::new(b.clone(), b.matrix().clone()).unwrap();
        assert!(weight_changes(&g, &phi).unwrap().values().iter().all(|&x| x == 0));
        assert!(is_projection(&g, &phi).unwrap());
        assert!(projection_matrix(&phi).is_some());
    }

    #[test]
    fn zero_map_is_projection() {
        let f2 = FieldSpec::new(2).unwrap();
        let g = Geometry::new(&f2, 2).unwrap();
        let b = GeneratorMatrix::new(&f2, mat(&f2, &[&[1, 0, 1], &[0, 1, 1]])).unwrap();
        let phi = LinearMapSpec::new(b, FqMatrix::zeros(2, 2)).unwrap();
        assert!(is_projection(&g, &phi).unwrap());
        assert!(projection_matrix(&phi).is_some());
        assert_eq!(weight_changes(&g, &phi).unwrap().values(), &[2, 2, 2]);
    }

    #[test]
    fn projection_matrix_reproduces_image() {
        let f3 = FieldSpec::new(3).unwrap();
        let b = GeneratorMatrix::new(&f3, mat(&f3, &[&[1, 0, 1, 2], &[0, 1, 1, 0]])).unwrap();
        // scale column 2 by 2, keep column 0, drop the rest
        let c = mat(&f3, &[&[2, 0, 1], &[2, 0, 0]]);
        let phi = LinearMapSpec::new(b.clone(), c.clone()).unwrap();
        let p = projection_matrix(&phi).unwrap();
        assert_eq!(b.matrix().mul(&f3, &p).unwrap(), c);
        for j in 0..p.cols() {
            assert!((0..p.rows()).filter(|&i| !p.get(i, j).is_zero()).count() <= 1);
        }
        for i in 0..p.rows() {
            assert!((0..p.cols()).filter(|&j| !p.get(i, j).is_zero()).count() <= 1);
        }
    }

    #[test]
    fn multiset_parsing() {
        let s: WeightChangeMultiset = "5, 2,2,3".parse().unwrap();
        assert_eq!(s.values(), &[2, 2, 3, 5]);
        assert_eq!(s.to_string(), "{2,2,3,5}");
        assert!("1,x".parse::<WeightChangeMultiset>().is_err());
        assert_eq!(s.expect_len(3).unwrap_err(), Error::SizeMismatch { expected: 3, got: 4 });
    }
}
