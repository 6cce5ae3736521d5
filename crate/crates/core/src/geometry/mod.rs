//! Low-dimensional polyhedral geometry.
//!
//! Everything here works in `ℝⁿ` with `1 <= n <= 4`. Representations are small
//! enough that exact enumeration over constraint or vertex subsets is the
//! method of choice throughout: projections onto pieces and cones enumerate
//! active sets, double description enumerates row subsets, and min-norm
//! problems enumerate supports.

mod cone;
mod directions;
pub(crate) mod linalg;
mod piece;
mod polyhedron;
mod polytope;
pub mod wire;

pub use cone::PolyCone;
pub use directions::{sphere_directions, unit_directions};
pub use piece::{Ball, ClosedSet, ConvexPiece, Halfspace, Hyperplane};
pub use polyhedron::Polyhedron;
pub use polytope::{ball_in_sum, polytope_cone_distance, polytope_cone_distance_alternating, ConeDistance, VPolytope};

use nalgebra::DVector;

use crate::{Error, Result};

/// A point (or direction) in `ℝⁿ`.
pub type Point = DVector<f64>;

pub const MAX_DIM: usize = 4;

/// Builds a point from a slice.
pub fn point(coords: &[f64]) -> Point {
    DVector::from_column_slice(coords)
}

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if (1..=MAX_DIM).contains(&dim) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(dim))
    }
}

pub(crate) fn check_point(p: &Point, dim: usize) -> Result<()> {
    if p.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: p.len() });
    }
    if p.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(())
}

/// Unit vector along coordinate `i`.
pub fn basis(dim: usize, i: usize) -> Point {
    let mut e = Point::zeros(dim);
    e[i] = 1.0;
    e
}

/// Tangent cone of a single convex piece at `x` (see [`ConvexPiece::tangent_cone`]).
pub fn tangent_cone_piece(piece: &ConvexPiece, x: &Point) -> Result<PolyCone> {
    piece.tangent_cone(x)
}

/// Regular normal cone of a union of convex pieces.
pub fn regular_normal_cone(set: &ClosedSet, x: &Point) -> Result<PolyCone> {
    set.regular_normal_cone(x)
}

/// Polar of a polyhedral cone.
pub fn polar(cone: &PolyCone) -> PolyCone {
    cone.polar()
}

/// Intersection of two polyhedral cones.
pub fn intersect_cones(a: &PolyCone, b: &PolyCone) -> PolyCone {
    a.intersect(b)
}

/// Euclidean projection onto a polyhedral cone.
pub fn project_cone(cone: &PolyCone, v: &Point) -> Point {
    cone.project(v)
}

/// Euclidean projection onto a convex piece.
pub fn project_piece(piece: &ConvexPiece, x: &Point) -> Point {
    piece.project(x)
}

/// Nearest point of a union of pieces, with the index of the achieving piece.
pub fn project_set(set: &ClosedSet, x: &Point) -> (Point, usize) {
    set.project(x)
}

/// Distance from `x` to a union of pieces.
pub fn dist(set: &ClosedSet, x: &Point) -> f64 {
    set.dist(x)
}
