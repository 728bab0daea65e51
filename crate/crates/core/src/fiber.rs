//! The fiber polygon of a support set under the projection onto its last
//! two coordinates.
//!
//! Every facet whose outer normal has a nonzero fiber part `g = m * gamma`
//! contributes an edge of lattice length `m * Vol(facet)` orthogonal to
//! `gamma`; the edges assemble into a closed convex lattice polygon.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lattice::{primitive_part, SupportSet};
use crate::polytope::{convex_hull, normalized_mixed_volume, LatticePolytope, PolytopeTuple};
use crate::scalar::{sub, Scalar};

/// The edge one facet contributes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetContribution<T> {
    pub facet_id: usize,
    /// Primitive fiber part of the facet normal.
    pub gamma: Vec<T>,
    pub multiplier: T,
    /// `multiplier * facet volume`
    pub contribution: T,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberPolygon<T> {
    /// `(primitive outer normal direction, lattice length)`, counterclockwise.
    pub edges: Vec<(Vec<T>, T)>,
    /// Counterclockwise, starting at the origin, which is the
    /// lexicographically smallest vertex.
    pub vertices: Vec<Vec<T>>,
    /// Twice the Euclidean area.
    pub norm_area: T,
}

impl<T: Scalar> FiberPolygon<T> {
    /// Edge vectors `length * rotate90(direction)`.
    pub fn edge_vectors(&self) -> Vec<Vec<T>> {
        self.edges.iter().map(|(g, len)| edge_vector(g, len)).collect()
    }
}

fn edge_vector<T: Scalar>(gamma: &[T], len: &T) -> Vec<T> {
    vec![-gamma[1].clone() * len.clone(), gamma[0].clone() * len.clone()]
}

/// Fiber part of a normal: its last two coordinates.
pub fn projected_normal<T: Scalar>(normal: &[T]) -> Vec<T> {
    normal[normal.len() - 2..].to_vec()
}

/// Contributions of the non-horizontal facets of `hull`, in facet order.
pub fn facet_contributions<T: Scalar>(hull: &LatticePolytope<T>) -> Vec<FacetContribution<T>> {
    hull.facets()
        .iter()
        .enumerate()
        .filter_map(|(facet_id, f)| {
            let g = projected_normal(&f.normal);
            let gamma = primitive_part(&g).ok()?;
            let multiplier = crate::scalar::gcd_all(&g);
            Some(FacetContribution {
                facet_id,
                gamma,
                contribution: multiplier.clone() * f.norm_volume.clone(),
                multiplier,
            })
        })
        .collect()
}

/// Counterclockwise angle order of nonzero planar vectors, starting at the
/// positive x axis.
pub fn angle_cmp<T: Scalar>(a: &[T], b: &[T]) -> Ordering {
    let half = |v: &[T]| -> u8 {
        if v[1].is_positive() || (v[1].is_zero() && v[0].is_positive()) {
            0
        } else {
            1
        }
    };
    half(a).cmp(&half(b)).then_with(|| {
        let cross = a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone();
        T::zero().cmp(&cross)
    })
}

pub fn fiber_polygon<T: Scalar>(a: &SupportSet<T>) -> Result<FiberPolygon<T>> {
    fiber_polygon_of_hull(&convex_hull(a.points())?)
}

pub fn fiber_polygon_of_hull<T: Scalar>(hull: &LatticePolytope<T>) -> Result<FiberPolygon<T>> {
    let contributions = facet_contributions(hull);
    if contributions.is_empty() {
        return Err(Error::ProjectionDegenerate);
    }
    let mut merged: BTreeMap<Vec<T>, T> = BTreeMap::new();
    for c in contributions {
        let entry = merged.entry(c.gamma).or_insert_with(T::zero);
        *entry = entry.clone() + c.contribution;
    }
    let mut edges: Vec<(Vec<T>, T)> = merged.into_iter().collect();
    edges.sort_by(|(g, l), (h, k)| angle_cmp(&edge_vector(g, l), &edge_vector(h, k)));

    let mut chain = vec![vec![T::zero(), T::zero()]];
    for (g, len) in &edges {
        let last = chain.last().expect("chain starts nonempty");
        chain.push(crate::scalar::add(last, &edge_vector(g, len)));
    }
    let end = chain.pop().expect("closing point");
    if !crate::scalar::is_zero_vector(&end) {
        return Err(Error::Consistency(format!(
            "fiber polygon does not close: edge sum ({}, {})",
            end[0], end[1]
        )));
    }

    let (start, anchor) = chain
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.cmp(b.1))
        .map(|(i, v)| (i, v.clone()))
        .expect("nonempty chain");
    chain.rotate_left(start);
    edges.rotate_left(start);
    let vertices: Vec<Vec<T>> = chain.iter().map(|v| sub(v, &anchor)).collect();

    let norm_area = shoelace(&vertices).abs();
    if norm_area.is_zero() {
        return Err(Error::ProjectionDegenerate);
    }
    Ok(FiberPolygon {
        edges,
        vertices,
        norm_area,
    })
}

/// Twice the signed area of a closed polygon.
pub fn shoelace<T: Scalar>(vertices: &[Vec<T>]) -> T {
    let n = vertices.len();
    (0..n).fold(T::zero(), |acc, i| {
        let (p, q) = (&vertices[i], &vertices[(i + 1) % n]);
        acc + p[0].clone() * q[1].clone() - p[1].clone() * q[0].clone()
    })
}

/// Both sides of the mixed-volume identity pinning the fiber polygon:
/// `NMV(P, [0, u])` in the plane against `NMV(D, ..., D, [0, u])` in
/// `R^(n+2)` with `n + 1` copies of the Newton polytope and `u` placed in the
/// fiber coordinates.
pub fn fiber_identity_check<T: Scalar>(a: &SupportSet<T>, p: &FiberPolygon<T>, u: &[T]) -> Result<(T, T)> {
    if u.len() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: u.len(),
        });
    }
    if crate::scalar::is_zero_vector(u) {
        return Err(Error::ZeroDirection);
    }
    let origin2 = vec![T::zero(), T::zero()];
    let lhs = normalized_mixed_volume(&PolytopeTuple::new(vec![p.vertices.clone(), vec![origin2, u.to_vec()]])?)?;

    let n = a.n();
    let vertices = convex_hull(a.points())?.vertices().to_vec();
    let mut lifted = vec![T::zero(); n + 2];
    lifted[n] = u[0].clone();
    lifted[n + 1] = u[1].clone();
    let mut sets = vec![vertices; n + 1];
    sets.push(vec![vec![T::zero(); n + 2], lifted]);
    let rhs = normalized_mixed_volume(&PolytopeTuple::new(sets)?)?;
    Ok((lhs, rhs))
}
