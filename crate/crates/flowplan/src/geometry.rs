//! Geometric primitives shared by every other module: ellipsoidal keep-out
//! regions, halfspaces, polytopes, hyperrectangles, and the eigen-structure
//! of covariance matrices.

use nalgebra::{DMatrix, DVector};

use crate::error::{check_dim, Error, Result};

/// Relative off-diagonal norm at which the Jacobi sweep stops.
const JACOBI_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 64;

/// An ellipsoidal keep-out region `{x : (x - center)' shape (x - center) <= 1}`.
///
/// `shape` must be symmetric positive-definite so the region is bounded.
#[derive(Debug, Clone)]
pub struct EllipsoidObstacle {
    center: DVector<f64>,
    shape: DMatrix<f64>,
}

impl EllipsoidObstacle {
    pub fn new(center: DVector<f64>, shape: DMatrix<f64>) -> Result<Self> {
        let n = center.len();
        if shape.nrows() != n || shape.ncols() != n {
            return Err(Error::DimensionMismatch {
                context: "ellipsoid shape",
                expected: n,
                actual: shape.nrows(),
            });
        }
        if !is_symmetric(&shape, 1e-12) {
            return Err(Error::InvalidArgument(
                "ellipsoid shape matrix is not symmetric".into(),
            ));
        }
        let (eigenvalues, _) = jacobi_eigen(&shape)?;
        if eigenvalues.iter().any(|&l| l <= 0.0) {
            return Err(Error::InvalidArgument(
                "ellipsoid shape matrix is not positive-definite".into(),
            ));
        }
        Ok(Self { center, shape })
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &DVector<f64> {
        &self.center
    }

    pub fn shape(&self) -> &DMatrix<f64> {
        &self.shape
    }

    /// `(x - center)' shape (x - center)`; at most 1 iff `x` is inside or on
    /// the boundary.
    pub fn quadratic_form(&self, x: &DVector<f64>) -> Result<f64> {
        check_dim("quadratic_form point", self.dim(), x.len())?;
        let d = x - &self.center;
        Ok((&self.shape * &d).dot(&d))
    }

    /// True when `x` lies inside or on the obstacle.
    pub fn contains(&self, x: &DVector<f64>) -> Result<bool> {
        Ok(self.quadratic_form(x)? <= 1.0)
    }

    /// The boundary point `from + s * dir` with the smallest `|s|`.
    ///
    /// Solves the quadratic `(d + s u)' Q (d + s u) = 1` along the ray line;
    /// ties between the two roots break toward positive `s` (the direction of
    /// `dir`). Errors if the line misses the ellipsoid.
    pub fn boundary_point_along(
        &self,
        from: &DVector<f64>,
        dir: &DVector<f64>,
    ) -> Result<DVector<f64>> {
        check_dim("boundary_point_along from", self.dim(), from.len())?;
        check_dim("boundary_point_along dir", self.dim(), dir.len())?;
        let d = from - &self.center;
        let qu = &self.shape * dir;
        let a = qu.dot(dir);
        if a <= 0.0 {
            return Err(Error::Geometry("direction vector is zero".into()));
        }
        let b = 2.0 * qu.dot(&d);
        let c = (&self.shape * &d).dot(&d) - 1.0;
        let disc = b * b - 4.0 * a * c;
        if disc < 0.0 {
            return Err(Error::Geometry(
                "ray line does not intersect the ellipsoid boundary".into(),
            ));
        }
        let sqrt_disc = disc.sqrt();
        let s1 = (-b - sqrt_disc) / (2.0 * a);
        let s2 = (-b + sqrt_disc) / (2.0 * a);
        let s = if (s1.abs() - s2.abs()).abs() <= 1e-12 * (1.0 + s1.abs()) {
            s1.max(s2)
        } else if s1.abs() < s2.abs() {
            s1
        } else {
            s2
        };
        Ok(from + dir * s)
    }
}

/// The closed halfspace `{x : normal . x <= offset}` with a unit normal.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    normal: DVector<f64>,
    offset: f64,
}

impl Halfspace {
    pub fn new(normal: DVector<f64>, offset: f64) -> Result<Self> {
        let norm = normal.norm();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "halfspace normal must be unit length, got {norm}"
            )));
        }
        Ok(Self { normal, offset })
    }

    /// Normalizes `direction` and scales the offset to match.
    pub fn from_direction(direction: DVector<f64>, offset: f64) -> Result<Self> {
        let norm = direction.norm();
        if norm <= 0.0 {
            return Err(Error::InvalidArgument("halfspace normal is zero".into()));
        }
        Ok(Self {
            normal: direction / norm,
            offset: offset / norm,
        })
    }

    pub fn normal(&self) -> &DVector<f64> {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    /// `offset - normal . x`; nonnegative inside the halfspace.
    pub fn slack(&self, x: &DVector<f64>) -> f64 {
        self.offset - self.normal.dot(x)
    }

    pub fn contains(&self, x: &DVector<f64>, tol: f64) -> bool {
        self.slack(x) >= -tol
    }
}

/// A convex polytope as an intersection of halfspaces, optionally carrying an
/// explicit vertex list (required by the latent problem encoding).
#[derive(Debug, Clone)]
pub struct Polytope {
    halfspaces: Vec<Halfspace>,
    vertices: Option<Vec<DVector<f64>>>,
}

impl Polytope {
    pub fn new(halfspaces: Vec<Halfspace>, vertices: Option<Vec<DVector<f64>>>) -> Result<Self> {
        if let Some(vs) = &vertices {
            for (vi, v) in vs.iter().enumerate() {
                for (hi, h) in halfspaces.iter().enumerate() {
                    if !h.contains(v, 1e-9) {
                        return Err(Error::InvalidArgument(format!(
                            "polytope vertex {vi} violates halfspace {hi} by {}",
                            -h.slack(v)
                        )));
                    }
                }
            }
        }
        Ok(Self {
            halfspaces,
            vertices,
        })
    }

    /// Axis-aligned box `[lower, upper]` as halfspaces plus its corner set.
    pub fn from_box(bounds: &Hyperrectangle) -> Result<Self> {
        let n = bounds.dim();
        let mut halfspaces = Vec::with_capacity(2 * n);
        for i in 0..n {
            let mut up = DVector::zeros(n);
            up[i] = 1.0;
            halfspaces.push(Halfspace::new(up, bounds.upper()[i])?);
            let mut lo = DVector::zeros(n);
            lo[i] = -1.0;
            halfspaces.push(Halfspace::new(lo, -bounds.lower()[i])?);
        }
        Polytope::new(halfspaces, Some(bounds.corners()?))
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn vertices(&self) -> Option<&[DVector<f64>]> {
        self.vertices.as_deref()
    }

    pub fn contains(&self, x: &DVector<f64>, tol: f64) -> bool {
        self.halfspaces.iter().all(|h| h.contains(x, tol))
    }

    pub fn vertex_centroid(&self) -> Option<DVector<f64>> {
        let vs = self.vertices.as_ref()?;
        if vs.is_empty() {
            return None;
        }
        let mut sum = DVector::zeros(vs[0].len());
        for v in vs {
            sum += v;
        }
        Some(sum / vs.len() as f64)
    }
}

/// An axis-aligned box `[lower, upper]`, `lower <= upper` componentwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperrectangle {
    lower: DVector<f64>,
    upper: DVector<f64>,
}

impl Hyperrectangle {
    pub fn new(lower: DVector<f64>, upper: DVector<f64>) -> Result<Self> {
        check_dim("hyperrectangle bounds", lower.len(), upper.len())?;
        if lower.iter().zip(upper.iter()).any(|(l, u)| l > u) {
            return Err(Error::InvalidArgument(
                "hyperrectangle lower bound exceeds upper bound".into(),
            ));
        }
        Ok(Self { lower, upper })
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &DVector<f64> {
        &self.lower
    }

    pub fn upper(&self) -> &DVector<f64> {
        &self.upper
    }

    pub fn center(&self) -> DVector<f64> {
        (&self.lower + &self.upper) * 0.5
    }

    pub fn contains(&self, x: &DVector<f64>, tol: f64) -> bool {
        x.len() == self.dim()
            && x.iter()
                .enumerate()
                .all(|(i, &v)| v >= self.lower[i] - tol && v <= self.upper[i] + tol)
    }

    /// All `2^n` corner points. Guarded to small dimensions.
    pub fn corners(&self) -> Result<Vec<DVector<f64>>> {
        let n = self.dim();
        if n > 20 {
            return Err(Error::InvalidArgument(format!(
                "corner enumeration limited to 20 dimensions, got {n}"
            )));
        }
        let mut out = Vec::with_capacity(1 << n);
        for mask in 0..(1usize << n) {
            let mut p = self.lower.clone();
            for i in 0..n {
                if mask & (1 << i) != 0 {
                    p[i] = self.upper[i];
                }
            }
            out.push(p);
        }
        Ok(out)
    }

    pub fn clamp(&self, x: &DVector<f64>) -> DVector<f64> {
        DVector::from_fn(x.len(), |i, _| x[i].clamp(self.lower[i], self.upper[i]))
    }
}

/// Workspace bounds over the position dimensions of state space.
#[derive(Debug, Clone)]
pub struct EnvBounds {
    bounds: Hyperrectangle,
}

impl EnvBounds {
    pub fn new(bounds: Hyperrectangle) -> Result<Self> {
        if bounds
            .lower()
            .iter()
            .zip(bounds.upper().iter())
            .any(|(l, u)| l >= u)
        {
            return Err(Error::InvalidArgument(
                "environment bounds must have a nonempty interior".into(),
            ));
        }
        Ok(Self { bounds })
    }

    pub fn rect(&self) -> &Hyperrectangle {
        &self.bounds
    }

    pub fn dim(&self) -> usize {
        self.bounds.dim()
    }
}

/// Componentwise min/max envelope of a nonempty point set.
pub fn hyperrect_from_points(points: &[DVector<f64>]) -> Result<Hyperrectangle> {
    let first = points
        .first()
        .ok_or_else(|| Error::InvalidArgument("hyperrect_from_points: empty point set".into()))?;
    let mut lower = first.clone();
    let mut upper = first.clone();
    for p in &points[1..] {
        check_dim("hyperrect_from_points", lower.len(), p.len())?;
        for i in 0..p.len() {
            lower[i] = lower[i].min(p[i]);
            upper[i] = upper[i].max(p[i]);
        }
    }
    Hyperrectangle::new(lower, upper)
}

/// Eigen-decomposition of a symmetric PSD matrix, sorted descending by
/// eigenvalue. Eigenvectors are unit length with their first nonzero
/// component positive.
pub fn covariance_axes(cov: &DMatrix<f64>) -> Result<Vec<(f64, DVector<f64>)>> {
    if !is_symmetric(cov, 1e-9) {
        return Err(Error::InvalidArgument(
            "covariance_axes requires a symmetric matrix".into(),
        ));
    }
    let (values, vectors) = jacobi_eigen(cov)?;
    let mut pairs: Vec<(f64, DVector<f64>)> = values
        .iter()
        .enumerate()
        .map(|(i, &l)| (l, canonical_sign(vectors.column(i).into_owned())))
        .collect();
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("eigenvalues are finite"));
    Ok(pairs)
}

/// Flips `v` so its first component with magnitude above 1e-12 is positive.
fn canonical_sign(v: DVector<f64>) -> DVector<f64> {
    for &x in v.iter() {
        if x.abs() > 1e-12 {
            return if x < 0.0 { -v } else { v };
        }
    }
    v
}

pub(crate) fn is_symmetric(m: &DMatrix<f64>, tol: f64) -> bool {
    if m.nrows() != m.ncols() {
        return false;
    }
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            if (m[(i, j)] - m[(j, i)]).abs() > tol {
                return false;
            }
        }
    }
    true
}

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix.
///
/// Returns unsorted eigenvalues and the matrix whose columns are the matching
/// eigenvectors. Sweeps run until the off-diagonal Frobenius norm drops below
/// `JACOBI_TOL` relative to the matrix norm.
pub fn jacobi_eigen(m: &DMatrix<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::InvalidArgument("jacobi_eigen: matrix not square".into()));
    }
    let mut a = m.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    if n <= 1 {
        return Ok((a.diagonal(), v));
    }
    let scale = m.norm().max(f64::MIN_POSITIVE);
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)] * a[(p, q)];
            }
        }
        if (2.0 * off).sqrt() <= JACOBI_TOL * scale {
            return Ok((a.diagonal(), v));
        }
        for p in 0..(n - 1) {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    Err(Error::Numeric(
        "jacobi_eigen failed to converge within the sweep limit".into(),
    ))
}

/// Symmetric square root `S` of a PSD matrix (`S S = m`), with negative
/// round-off eigenvalues clamped to zero.
pub fn psd_sqrt(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let (values, vectors) = jacobi_eigen(m)?;
    let n = m.nrows();
    let mut out = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        let l = values[i].max(0.0).sqrt();
        let col = vectors.column(i);
        for r in 0..n {
            for c in 0..n {
                out[(r, c)] += l * col[r] * col[c];
            }
        }
    }
    Ok(out)
}

/// Vertices of `box ∩ {normal . x <= offset}`: the box corners inside the
/// halfspace plus the crossing points on box edges. Returns the region as a
/// polytope with both halfspace and vertex descriptions.
pub fn clip_halfspace_to_box(h: &Halfspace, bounds: &Hyperrectangle) -> Result<Polytope> {
    check_dim("clip_halfspace_to_box", bounds.dim(), h.dim())?;
    let corners = bounds.corners()?;
    let n = bounds.dim();
    let mut vertices: Vec<DVector<f64>> = Vec::new();
    let push_unique = |p: DVector<f64>, vertices: &mut Vec<DVector<f64>>| {
        if !vertices.iter().any(|q| (q - &p).norm() <= 1e-12) {
            vertices.push(p);
        }
    };
    for c in &corners {
        if h.contains(c, 1e-12) {
            push_unique(c.clone(), &mut vertices);
        }
    }
    // Edge crossings: corner pairs that differ in exactly one coordinate.
    for (i, a) in corners.iter().enumerate() {
        for b in corners.iter().skip(i + 1) {
            let mut diff_dim = None;
            let mut diff_count = 0;
            for k in 0..n {
                if a[k] != b[k] {
                    diff_count += 1;
                    diff_dim = Some(k);
                }
            }
            if diff_count != 1 {
                continue;
            }
            let k = diff_dim.expect("one differing coordinate");
            let fa = h.slack(a);
            let fb = h.slack(b);
            if (fa > 0.0 && fb < 0.0) || (fa < 0.0 && fb > 0.0) {
                let t = fa / (fa - fb);
                let mut p = a.clone();
                p[k] = a[k] + t * (b[k] - a[k]);
                push_unique(p, &mut vertices);
            }
        }
    }
    if vertices.is_empty() {
        return Err(Error::Geometry(
            "halfspace does not intersect the environment box".into(),
        ));
    }
    let mut halfspaces = Polytope::from_box(bounds)?.halfspaces().to_vec();
    halfspaces.push(h.clone());
    Polytope::new(halfspaces, Some(vertices))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::Rng;

    fn dv(v: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(v)
    }

    fn unit_sphere() -> EllipsoidObstacle {
        EllipsoidObstacle::new(dv(&[0.0, 0.0]), DMatrix::identity(2, 2)).unwrap()
    }

    /// Independent classical Jacobi oracle: greedily zeroes the largest
    /// off-diagonal element instead of sweeping cyclically.
    fn classical_jacobi_oracle(m: &DMatrix<f64>) -> Vec<f64> {
        let n = m.nrows();
        let mut a = m.clone();
        for _ in 0..20_000 {
            let mut p = 0;
            let mut q = 1;
            let mut best = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    if a[(i, j)].abs() > best {
                        best = a[(i, j)].abs();
                        p = i;
                        q = j;
                    }
                }
            }
            if best < 1e-13 {
                break;
            }
            let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * a[(p, q)]);
            let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
            let c = 1.0 / (1.0 + t * t).sqrt();
            let s = t * c;
            let mut rot = DMatrix::<f64>::identity(n, n);
            rot[(p, p)] = c;
            rot[(q, q)] = c;
            rot[(p, q)] = s;
            rot[(q, p)] = -s;
            a = rot.transpose() * a * rot;
        }
        let mut vals: Vec<f64> = a.diagonal().iter().copied().collect();
        vals.sort_by(|x, y| y.partial_cmp(x).unwrap());
        vals
    }

    fn random_rotation(rng: &mut impl Rng, n: usize) -> DMatrix<f64> {
        let m = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        let qr = m.qr();
        let mut q = qr.q();
        if q.determinant() < 0.0 {
            for r in 0..n {
                q[(r, 0)] = -q[(r, 0)];
            }
        }
        q
    }

    #[test]
    fn quadratic_form_center_boundary_and_scaled() {
        let sphere = unit_sphere();
        assert_eq!(sphere.quadratic_form(&dv(&[0.0, 0.0])).unwrap(), 0.0);
        assert_relative_eq!(sphere.quadratic_form(&dv(&[1.0, 0.0])).unwrap(), 1.0);
        let ell = EllipsoidObstacle::new(
            dv(&[0.0, 0.0]),
            DMatrix::from_diagonal(&dv(&[4.0, 1.0])),
        )
        .unwrap();
        assert_relative_eq!(ell.quadratic_form(&dv(&[0.5, 0.0])).unwrap(), 1.0);
    }

    #[test]
    fn quadratic_form_dimension_mismatch() {
        let sphere = unit_sphere();
        assert!(sphere.quadratic_form(&dv(&[1.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn quadratic_form_rotation_invariance() {
        let mut rng = crate::rng::root(11);
        for _ in 0..20 {
            let r = random_rotation(&mut rng, 3);
            let a = DMatrix::from_fn(3, 3, |_, _| rng.gen_range(-1.0..1.0));
            let shape = &a * a.transpose() + DMatrix::identity(3, 3) * 0.5;
            let center = DVector::from_fn(3, |_, _| rng.gen_range(-1.0..1.0));
            let x = DVector::from_fn(3, |_, _| rng.gen_range(-2.0..2.0));
            let obs = EllipsoidObstacle::new(center.clone(), shape.clone()).unwrap();
            let rotated = EllipsoidObstacle::new(&r * &center, &r * &shape * r.transpose()).unwrap();
            let q0 = obs.quadratic_form(&x).unwrap();
            let q1 = rotated.quadratic_form(&(&r * &x)).unwrap();
            assert_relative_eq!(q0, q1, epsilon = 1e-9);
        }
    }

    #[test]
    fn ellipsoid_rejects_indefinite_shape() {
        let shape = DMatrix::from_diagonal(&dv(&[1.0, -0.5]));
        assert!(EllipsoidObstacle::new(dv(&[0.0, 0.0]), shape).is_err());
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, -0.5, 1.0]);
        assert!(EllipsoidObstacle::new(dv(&[0.0, 0.0]), asym).is_err());
    }

    #[test]
    fn hyperrect_from_points_examples() {
        let single = hyperrect_from_points(&[dv(&[0.0, 0.0])]).unwrap();
        assert_eq!(single.lower(), &dv(&[0.0, 0.0]));
        assert_eq!(single.upper(), &dv(&[0.0, 0.0]));

        let two = hyperrect_from_points(&[dv(&[0.0, 1.0]), dv(&[1.0, 0.0])]).unwrap();
        assert_eq!(two.lower(), &dv(&[0.0, 0.0]));
        assert_eq!(two.upper(), &dv(&[1.0, 1.0]));

        assert!(hyperrect_from_points(&[]).is_err());
    }

    #[test]
    fn hyperrect_from_random_points_matches_bruteforce() {
        let mut rng = crate::rng::root(3);
        let points: Vec<DVector<f64>> = (0..100)
            .map(|_| DVector::from_fn(3, |_, _| rng.gen_range(-5.0..5.0)))
            .collect();
        let rect = hyperrect_from_points(&points).unwrap();
        for d in 0..3 {
            let lo = points.iter().map(|p| p[d]).fold(f64::INFINITY, f64::min);
            let hi = points
                .iter()
                .map(|p| p[d])
                .fold(f64::NEG_INFINITY, f64::max);
            assert_eq!(rect.lower()[d], lo);
            assert_eq!(rect.upper()[d], hi);
            // Each face is touched by at least one point.
            assert!(points.iter().any(|p| p[d] == lo));
            assert!(points.iter().any(|p| p[d] == hi));
        }
        for p in &points {
            assert!(rect.contains(p, 0.0));
        }
    }

    #[test]
    fn covariance_axes_identity_and_diagonal() {
        let pairs = covariance_axes(&DMatrix::identity(2, 2)).unwrap();
        assert_relative_eq!(pairs[0].0, 1.0);
        assert_relative_eq!(pairs[1].0, 1.0);
        assert_relative_eq!(pairs[0].1.dot(&pairs[1].1), 0.0, epsilon = 1e-12);

        let pairs = covariance_axes(&DMatrix::from_diagonal(&dv(&[9.0, 1.0]))).unwrap();
        assert_relative_eq!(pairs[0].0, 9.0);
        assert_relative_eq!(pairs[1].0, 1.0);
        assert_relative_eq!(pairs[0].1[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(pairs[1].1[1], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn covariance_axes_rejects_asymmetric() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.2, 0.0, 1.0]);
        assert!(covariance_axes(&m).is_err());
    }

    #[test]
    fn covariance_axes_matches_jacobi_oracle_and_reconstructs() {
        let mut rng = crate::rng::root(17);
        for n in [2usize, 3, 5] {
            for _ in 0..10 {
                let a = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-2.0..2.0));
                let cov = &a * a.transpose();
                let pairs = covariance_axes(&cov).unwrap();

                let oracle = classical_jacobi_oracle(&cov);
                for (got, want) in pairs.iter().zip(oracle.iter()) {
                    assert_relative_eq!(got.0, *want, epsilon = 1e-8, max_relative = 1e-8);
                }

                // Reconstruction and orthonormality.
                let mut rebuilt = DMatrix::<f64>::zeros(n, n);
                for (l, v) in &pairs {
                    rebuilt += v * v.transpose() * *l;
                }
                assert!((rebuilt - &cov).norm() <= 1e-8 * (1.0 + cov.norm()));
                for (i, (_, vi)) in pairs.iter().enumerate() {
                    assert_relative_eq!(vi.norm(), 1.0, epsilon = 1e-9);
                    for (_, vj) in pairs.iter().skip(i + 1) {
                        assert_relative_eq!(vi.dot(vj), 0.0, epsilon = 1e-9);
                    }
                }

                // Trace identity.
                let trace: f64 = cov.diagonal().iter().sum();
                let sum: f64 = pairs.iter().map(|(l, _)| l).sum();
                assert_relative_eq!(trace, sum, epsilon = 1e-8, max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn boundary_point_examples() {
        let sphere = unit_sphere();
        let p = sphere
            .boundary_point_along(&dv(&[2.0, 0.0]), &dv(&[-1.0, 0.0]))
            .unwrap();
        assert_relative_eq!((p - dv(&[1.0, 0.0])).norm(), 0.0, epsilon = 1e-12);

        let p = sphere
            .boundary_point_along(&dv(&[0.0, 0.0]), &dv(&[0.0, 1.0]))
            .unwrap();
        assert_relative_eq!((p - dv(&[0.0, 1.0])).norm(), 0.0, epsilon = 1e-12);

        let ell = EllipsoidObstacle::new(
            dv(&[0.0, 0.0]),
            DMatrix::from_diagonal(&dv(&[4.0, 1.0])),
        )
        .unwrap();
        let p = ell
            .boundary_point_along(&dv(&[3.0, 0.0]), &dv(&[-1.0, 0.0]))
            .unwrap();
        assert_relative_eq!((p - dv(&[0.5, 0.0])).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn boundary_point_on_boundary_and_miss() {
        let sphere = unit_sphere();
        let p = sphere
            .boundary_point_along(&dv(&[5.0, 0.3]), &dv(&[-1.0, 0.0]))
            .unwrap();
        assert_relative_eq!(sphere.quadratic_form(&p).unwrap(), 1.0, epsilon = 1e-9);
        // Parallel line far from the sphere misses.
        assert!(sphere
            .boundary_point_along(&dv(&[0.0, 2.0]), &dv(&[1.0, 0.0]))
            .is_err());
    }

    #[test]
    fn polytope_validates_vertices() {
        let h = Halfspace::new(dv(&[1.0, 0.0]), 1.0).unwrap();
        assert!(Polytope::new(vec![h.clone()], Some(vec![dv(&[0.5, 0.0])])).is_ok());
        assert!(Polytope::new(vec![h], Some(vec![dv(&[2.0, 0.0])])).is_err());
    }

    #[test]
    fn polytope_centroid_inside_vertex_hyperrect() {
        let rect = Hyperrectangle::new(dv(&[-1.0, 0.0]), dv(&[2.0, 3.0])).unwrap();
        let poly = Polytope::from_box(&rect).unwrap();
        let centroid = poly.vertex_centroid().unwrap();
        let envelope = hyperrect_from_points(poly.vertices().unwrap()).unwrap();
        assert!(envelope.contains(&centroid, 1e-12));
    }

    #[test]
    fn halfspace_requires_unit_normal() {
        assert!(Halfspace::new(dv(&[2.0, 0.0]), 1.0).is_err());
        let h = Halfspace::from_direction(dv(&[2.0, 0.0]), 4.0).unwrap();
        assert_relative_eq!(h.offset(), 2.0);
        assert!(h.contains(&dv(&[2.0, 5.0]), 1e-12));
        assert!(!h.contains(&dv(&[2.1, 0.0]), 1e-12));
    }

    #[test]
    fn env_bounds_rejects_empty_interior() {
        let degenerate = Hyperrectangle::new(dv(&[0.0, 0.0]), dv(&[0.0, 1.0])).unwrap();
        assert!(EnvBounds::new(degenerate).is_err());
    }

    #[test]
    fn clip_halfspace_to_box_square() {
        let bounds = Hyperrectangle::new(dv(&[0.0, 0.0]), dv(&[1.0, 1.0])).unwrap();
        let h = Halfspace::new(dv(&[1.0, 0.0]), 0.25).unwrap();
        let poly = clip_halfspace_to_box(&h, &bounds).unwrap();
        let vs = poly.vertices().unwrap();
        assert_eq!(vs.len(), 4);
        for v in vs {
            assert!(poly.contains(v, 1e-9));
        }
        let envelope = hyperrect_from_points(vs).unwrap();
        assert_relative_eq!(envelope.upper()[0], 0.25);
        assert_relative_eq!(envelope.upper()[1], 1.0);
    }

    #[test]
    fn psd_sqrt_squares_back() {
        let mut rng = crate::rng::root(5);
        let a = DMatrix::from_fn(3, 3, |_, _| rng.gen_range(-1.0..1.0));
        let m = &a * a.transpose();
        let s = psd_sqrt(&m).unwrap();
        assert!(((&s * &s) - &m).norm() <= 1e-9 * (1.0 + m.norm()));
        let zero = psd_sqrt(&DMatrix::zeros(2, 2)).unwrap();
        assert_eq!(zero.norm(), 0.0);
    }
}
