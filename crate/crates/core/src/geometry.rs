//! Plane geometry: points, rectangles and closed polygon queries.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2<S> {
    pub x: S,
    pub y: S,
}

impl<S: Scalar> Point2<S> {
    #[inline]
    pub fn new(x: S, y: S) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn origin() -> Self {
        Self::new(S::zero(), S::zero())
    }

    #[inline]
    pub fn dot(self, other: Self) -> S {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the planar cross product.
    #[inline]
    pub fn cross(self, other: Self) -> S {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm(self) -> S {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn norm_sq(self) -> S {
        self.dot(self)
    }

    #[inline]
    pub fn distance(self, other: Self) -> S {
        (self - other).norm()
    }

    /// Counterclockwise quarter turn.
    #[inline]
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn rotated_about(self, center: Self, angle: S) -> Self {
        let (s, c) = angle.sin_cos();
        let d = self - center;
        center + Self::new(c * d.x - s * d.y, s * d.x + c * d.y)
    }

    pub fn cast<T: Scalar>(self) -> Point2<T> {
        Point2::new(T::lit(self.x.as_f64()), T::lit(self.y.as_f64()))
    }
}

impl<S: Scalar> Add for Point2<S> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl<S: Scalar> Sub for Point2<S> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl<S: Scalar> Mul<S> for Point2<S> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: S) -> Self {
        Self::new(self.x * rhs, self.y * rhs)
    }
}

impl<S: Scalar> Neg for Point2<S> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

/// Axis-aligned rectangle `[min.x, max.x] × [min.y, max.y]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect<S> {
    pub min: Point2<S>,
    pub max: Point2<S>,
}

impl<S: Scalar> Rect<S> {
    pub fn new(min: Point2<S>, max: Point2<S>) -> Self {
        Self { min, max }
    }

    pub fn centered(center: Point2<S>, half_width: S) -> Self {
        let h = Point2::new(half_width, half_width);
        Self::new(center - h, center + h)
    }

    pub fn width(&self) -> S {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> S {
        self.max.y - self.min.y
    }

    pub fn contains(&self, p: Point2<S>) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    /// Center of cell `(i, j)` of an `nx × ny` grid laid over the rectangle.
    pub fn cell_center(&self, i: usize, j: usize, nx: usize, ny: usize) -> Point2<S> {
        let half = S::lit(0.5);
        let fx = (S::lit(i as f64) + half) / S::lit(nx as f64);
        let fy = (S::lit(j as f64) + half) / S::lit(ny as f64);
        Point2::new(self.min.x + fx * self.width(), self.min.y + fy * self.height())
    }
}

/// Distance from `p` to the segment `[a, b]`.
pub fn point_segment_distance<S: Scalar>(p: Point2<S>, a: Point2<S>, b: Point2<S>) -> S {
    let ab = b - a;
    let len_sq = ab.norm_sq();
    if len_sq == S::zero() {
        return p.distance(a);
    }
    let t = ((p - a).dot(ab) / len_sq).max(S::zero()).min(S::one());
    p.distance(a + ab * t)
}

/// Winding number of the closed polygon `vertices` around `p` (crossing rule).
/// Points on the polygon itself give an unspecified but finite answer.
pub fn polygon_winding<S: Scalar>(vertices: &[Point2<S>], p: Point2<S>) -> i64 {
    let n = vertices.len();
    let mut wn = 0i64;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        let side = (b - a).cross(p - a);
        if a.y <= p.y {
            if b.y > p.y && side > S::zero() {
                wn += 1;
            }
        } else if b.y <= p.y && side < S::zero() {
            wn -= 1;
        }
    }
    wn
}

/// Proper intersection of segments `[a, b]` and `[c, d]` (shared endpoints and
/// collinear touching do not count).
pub fn segments_cross<S: Scalar>(a: Point2<S>, b: Point2<S>, c: Point2<S>, d: Point2<S>) -> bool {
    let d1 = (b - a).cross(c - a);
    let d2 = (b - a).cross(d - a);
    let d3 = (d - c).cross(a - c);
    let d4 = (d - c).cross(b - c);
    ((d1 > S::zero() && d2 < S::zero()) || (d1 < S::zero() && d2 > S::zero()))
        && ((d3 > S::zero() && d4 < S::zero()) || (d3 < S::zero() && d4 > S::zero()))
}

/// Whether the closed polygon has no self-crossings between non-adjacent edges.
pub fn polygon_is_simple<S: Scalar>(vertices: &[Point2<S>]) -> bool {
    let n = vertices.len();
    if n < 4 {
        return true;
    }
    let bbox = |i: usize| {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        (a.x.min(b.x), a.x.max(b.x), a.y.min(b.y), a.y.max(b.y))
    };
    let boxes: Vec<_> = (0..n).map(bbox).collect();
    for i in 0..n {
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (ax0, ax1, ay0, ay1) = boxes[i];
            let (bx0, bx1, by0, by1) = boxes[j];
            if ax1 < bx0 || bx1 < ax0 || ay1 < by0 || by1 < ay0 {
                continue;
            }
            if segments_cross(vertices[i], vertices[(i + 1) % n], vertices[j], vertices[(j + 1) % n]) {
                return false;
            }
        }
    }
    true
}

/// Distance from `p` to the closed polygon boundary.
pub fn polygon_distance<S: Scalar>(vertices: &[Point2<S>], p: Point2<S>) -> S {
    let n = vertices.len();
    match n {
        0 => S::infinity(),
        1 => p.distance(vertices[0]),
        _ => (0..n).map(|i| point_segment_distance(p, vertices[i], vertices[(i + 1) % n])).fold(S::infinity(), S::min),
    }
}

/// Symmetric Hausdorff distance between two closed polygons (vertex to boundary).
pub fn hausdorff_distance<S: Scalar>(a: &[Point2<S>], b: &[Point2<S>]) -> S {
    let one_sided =
        |from: &[Point2<S>], to: &[Point2<S>]| from.iter().map(|&p| polygon_distance(to, p)).fold(S::zero(), S::max);
    one_sided(a, b).max(one_sided(b, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Vec<Point2<f64>> {
        vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(1.0, 1.0), Point2::new(0.0, 1.0)]
    }

    #[test]
    fn winding_of_square() {
        let sq = square();
        assert_eq!(polygon_winding(&sq, Point2::new(0.5, 0.5)), 1);
        assert_eq!(polygon_winding(&sq, Point2::new(1.5, 0.5)), 0);
        let rev: Vec<_> = sq.iter().rev().copied().collect();
        assert_eq!(polygon_winding(&rev, Point2::new(0.5, 0.5)), -1);
    }

    #[test]
    fn bowtie_is_not_simple() {
        let bowtie = vec![Point2::new(0.0, 0.0), Point2::new(1.0, 1.0), Point2::new(1.0, 0.0), Point2::new(0.0, 1.0)];
        assert!(!polygon_is_simple(&bowtie));
        assert!(polygon_is_simple(&square()));
    }

    #[test]
    fn hausdorff_of_shifted_square() {
        let a = square();
        let b: Vec<_> = a.iter().map(|&p| p + Point2::new(0.25, 0.0)).collect();
        assert!((hausdorff_distance(&a, &b) - 0.25).abs() < 1e-12);
        assert_eq!(hausdorff_distance(&a, &a), 0.0);
    }
}
