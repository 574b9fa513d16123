//! Point-plane incidences in `F_p^3` and the maximum number of collinear
//! points, by direct enumeration.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldContext;
use crate::sets::ResidueSet;

/// Point sets up to this size get an exact collinearity count.
pub const MAX_COLLINEAR_POINTS: usize = 10_000;

pub type Point3 = [u64; 3];

/// The plane `normal . x = offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Plane {
    pub normal: [u64; 3],
    pub offset: u64,
}

impl Plane {
    pub fn contains(&self, ctx: &FieldContext, pt: &Point3) -> bool {
        let dot = (0..3).fold(0, |acc, i| ctx.add(acc, ctx.mul(self.normal[i], pt[i])));
        dot == self.offset
    }

    /// Scales the equation so the first nonzero normal coordinate is 1.
    fn normalized(&self, ctx: &FieldContext) -> Result<Plane> {
        let lead = *self
            .normal
            .iter()
            .find(|&&c| c % ctx.p() != 0)
            .ok_or_else(|| Error::InvalidArgument("plane has a zero normal vector".into()))?;
        let inv = ctx.inverse(lead)?;
        Ok(Plane {
            normal: self.normal.map(|c| ctx.mul(c % ctx.p(), inv)),
            offset: ctx.mul(self.offset % ctx.p(), inv),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidenceReport {
    pub incidences: u64,
    /// Exact when `collinear_exact`; otherwise the surrogate `min(|P|, p)`.
    pub max_collinear: u64,
    pub collinear_exact: bool,
}

fn normalized_direction(ctx: &FieldContext, from: &Point3, to: &Point3) -> [u64; 3] {
    let d = [ctx.sub(to[0], from[0]), ctx.sub(to[1], from[1]), ctx.sub(to[2], from[2])];
    let lead = *d.iter().find(|&&c| c != 0).expect("distinct points");
    let inv = ctx.inverse(lead).expect("nonzero");
    d.map(|c| ctx.mul(c, inv))
}

/// Largest number of points of `points` on a common line.
pub fn max_collinear(ctx: &FieldContext, points: &[Point3]) -> u64 {
    match points.len() {
        0 => return 0,
        1 | 2 => return points.len() as u64,
        _ => {}
    }
    (0..points.len())
        .into_par_iter()
        .map(|i| {
            // Lines through points[i] whose smallest index is i.
            let mut lines: HashMap<[u64; 3], u64> = HashMap::new();
            for pt in &points[i + 1..] {
                *lines.entry(normalized_direction(ctx, &points[i], pt)).or_default() += 1;
            }
            lines.values().max().map_or(1, |m| m + 1)
        })
        .max()
        .unwrap_or(0)
}

/// Number of pairs `(P, pi)` with `P` on `pi`, plus the collinearity data the
/// incidence bound needs. Points and planes must be distinct (planes are
/// compared after normalization).
pub fn incidence_count(ctx: &FieldContext, points: &[Point3], planes: &[Plane]) -> Result<IncidenceReport> {
    let p = ctx.p();
    let mut seen = HashSet::with_capacity(points.len());
    for pt in points {
        if pt.iter().any(|&c| c >= p) {
            return Err(Error::InvalidArgument(format!("point {pt:?} is not reduced modulo {p}")));
        }
        if !seen.insert(*pt) {
            return Err(Error::InvalidArgument(format!("duplicate point {pt:?}")));
        }
    }
    let normalized = planes
        .iter()
        .map(|pl| pl.normalized(ctx))
        .collect::<Result<Vec<_>>>()?;
    let mut seen_planes = HashSet::with_capacity(planes.len());
    for pl in &normalized {
        if !seen_planes.insert(*pl) {
            return Err(Error::InvalidArgument(format!("duplicate plane {pl:?}")));
        }
    }
    let incidences = normalized
        .par_iter()
        .map(|pl| points.iter().filter(|pt| pl.contains(ctx, pt)).count() as u64)
        .sum();
    let (max_collinear, collinear_exact) = if points.len() <= MAX_COLLINEAR_POINTS {
        (max_collinear(ctx, points), true)
    } else {
        ((points.len() as u64).min(p), false)
    };
    Ok(IncidenceReport {
        incidences,
        max_collinear,
        collinear_exact,
    })
}

/// The configuration that turns `#{(a_1 - a_2) y = (a_3 - a_4) z}` into an
/// incidence count: points `(a_1 y, y, a_3)` for `y in ys`, planes
/// `x_1 - a_2 x_2 - z x_3 + a_4 z = 0` for `z in zs`. Both `ys` and `zs`
/// must avoid 0.
pub fn energy_configuration(
    ctx: &FieldContext,
    set: &ResidueSet,
    ys: &ResidueSet,
    zs: &ResidueSet,
) -> Result<(Vec<Point3>, Vec<Plane>)> {
    if !ys.zero_free() || !zs.zero_free() {
        return Err(Error::InvalidSet("scaling sets must not contain 0".into()));
    }
    let a = set.elements();
    let mut points = Vec::with_capacity(a.len() * a.len() * ys.len());
    for &y in ys.elements() {
        for &a1 in a {
            for &a3 in a {
                points.push([ctx.mul(a1, y), y, a3]);
            }
        }
    }
    let mut planes = Vec::with_capacity(a.len() * a.len() * zs.len());
    for &z in zs.elements() {
        for &a2 in a {
            for &a4 in a {
                // x_1 - a_2 x_2 - z x_3 = -a_4 z
                planes.push(Plane {
                    normal: [1, ctx.sub(0, a2), ctx.sub(0, z)],
                    offset: ctx.sub(0, ctx.mul(a4, z)),
                });
            }
        }
    }
    Ok((points, planes))
}
