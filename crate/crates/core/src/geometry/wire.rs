//! JSON forms: points are arrays of numbers, halfspaces are `{"a": [...], "b": x}`.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Ball, ClosedSet, ConvexPiece, Halfspace, Hyperplane, Point, PolyCone, VPolytope};

fn coords(p: &Point) -> Vec<f64> {
    p.iter().cloned().collect()
}

#[derive(Serialize, Deserialize)]
struct RowWire {
    a: Vec<f64>,
    b: f64,
}

#[derive(Serialize, Deserialize)]
struct BallWire {
    center: Vec<f64>,
    radius: f64,
}

#[derive(Serialize, Deserialize)]
struct PieceWire {
    dim: usize,
    #[serde(default)]
    inequalities: Vec<RowWire>,
    #[serde(default)]
    equalities: Vec<RowWire>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ball: Option<BallWire>,
}

#[derive(Serialize, Deserialize)]
struct SetWire {
    pieces: Vec<PieceWire>,
}

#[derive(Serialize, Deserialize)]
struct ConeWire {
    dim: usize,
    rows: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct PolytopeWire {
    vertices: Vec<Vec<f64>>,
}

fn piece_to_wire(p: &ConvexPiece) -> PieceWire {
    PieceWire {
        dim: p.dim(),
        inequalities: p.inequalities().iter().map(|h| RowWire { a: coords(h.normal()), b: h.offset() }).collect(),
        equalities: p.equalities().iter().map(|h| RowWire { a: coords(h.normal()), b: h.offset() }).collect(),
        ball: p.ball().map(|b| BallWire { center: coords(&b.center), radius: b.radius }),
    }
}

fn piece_from_wire(w: PieceWire) -> crate::Result<ConvexPiece> {
    let ineqs = w
        .inequalities
        .into_iter()
        .map(|r| Halfspace::new(Point::from_vec(r.a), r.b))
        .collect::<crate::Result<Vec<_>>>()?;
    let eqs = w
        .equalities
        .into_iter()
        .map(|r| Hyperplane::new(Point::from_vec(r.a), r.b))
        .collect::<crate::Result<Vec<_>>>()?;
    let ball = w.ball.map(|b| Ball::new(Point::from_vec(b.center), b.radius)).transpose()?;
    ConvexPiece::new(w.dim, ineqs, eqs, ball)
}

impl Serialize for Halfspace {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RowWire { a: coords(self.normal()), b: self.offset() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Halfspace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = RowWire::deserialize(d)?;
        Halfspace::new(Point::from_vec(w.a), w.b).map_err(serde::de::Error::custom)
    }
}

impl Serialize for ConvexPiece {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        piece_to_wire(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ConvexPiece {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        piece_from_wire(PieceWire::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl Serialize for ClosedSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SetWire { pieces: self.pieces().iter().map(piece_to_wire).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ClosedSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = SetWire::deserialize(d)?;
        let pieces = w
            .pieces
            .into_iter()
            .map(piece_from_wire)
            .collect::<crate::Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        ClosedSet::new(pieces).map_err(serde::de::Error::custom)
    }
}

impl Serialize for PolyCone {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ConeWire { dim: self.dim(), rows: self.rows().iter().map(coords).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolyCone {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = ConeWire::deserialize(d)?;
        if w.rows.iter().any(|r| r.len() != w.dim) {
            return Err(serde::de::Error::custom("cone row has the wrong length"));
        }
        Ok(PolyCone::new(w.dim, w.rows.into_iter().map(Point::from_vec).collect()))
    }
}

impl Serialize for VPolytope {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolytopeWire { vertices: self.vertices().iter().map(coords).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for VPolytope {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = PolytopeWire::deserialize(d)?;
        VPolytope::new(w.vertices.into_iter().map(Point::from_vec).collect()).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for a [`Point`] as a plain array: `#[serde(with = "point_serde")]`.
pub mod point_serde {
    use super::*;

    pub fn serialize<S: Serializer>(p: &Point, s: S) -> Result<S::Ok, S::Error> {
        coords(p).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Point, D::Error> {
        Ok(Point::from_vec(Vec::<f64>::deserialize(d)?))
    }
}

/// Serde adapter for a list of points.
pub mod points_serde {
    use super::*;

    pub fn serialize<S: Serializer>(p: &[Point], s: S) -> Result<S::Ok, S::Error> {
        p.iter().map(coords).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Point>, D::Error> {
        Ok(Vec::<Vec<f64>>::deserialize(d)?.into_iter().map(Point::from_vec).collect())
    }
}

/// Serde adapter for an optional point (`null` when absent).
pub mod opt_point_serde {
    use super::*;

    pub fn serialize<S: Serializer>(p: &Option<Point>, s: S) -> Result<S::Ok, S::Error> {
        p.as_ref().map(coords).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Point>, D::Error> {
        Ok(Option::<Vec<f64>>::deserialize(d)?.map(Point::from_vec))
    }
}
