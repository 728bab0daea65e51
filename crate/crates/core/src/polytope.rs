//! Convex hulls of lattice point sets, normalized volumes, Minkowski sums
//! and mixed volumes.
//!
//! Volumes are normalized so that the standard unit simplex has volume 1,
//! i.e. `d!` times the Euclidean volume.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::lattice::{affine_dimension, bareiss_determinant, primitive_part, rank_of, smith_normal_form, IntMatrix};
use crate::scalar::{add, dot, factorial, sub, Scalar};

/// A facet of a full-dimensional lattice polytope.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Facet<T> {
    /// Primitive outer normal.
    pub normal: Vec<T>,
    /// `normal . x == offset` on the facet, `<=` on the polytope.
    pub offset: T,
    /// Indices into the owning polytope's vertex list.
    pub vertex_ids: Vec<usize>,
    /// Normalized volume measured in the lattice of the facet's hyperplane.
    pub norm_volume: T,
    simplices: Vec<Vec<Vec<T>>>,
}

impl<T: Scalar> Facet<T> {
    /// Value of the normal functional at `x`.
    pub fn level(&self, x: &[T]) -> T {
        dot(&self.normal, x)
    }

    pub fn contains(&self, x: &[T]) -> bool {
        self.level(x) == self.offset
    }

    /// The simplices of the boundary triangulation lying on this facet.
    pub fn simplices(&self) -> &[Vec<Vec<T>>] {
        &self.simplices
    }
}

/// A full-dimensional lattice polytope given by its vertices and facets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticePolytope<T> {
    dim: usize,
    vertices: Vec<Vec<T>>,
    facets: Vec<Facet<T>>,
}

impl<T: Scalar> LatticePolytope<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> &[Vec<T>] {
        &self.vertices
    }

    /// Facets ordered by normal.
    pub fn facets(&self) -> &[Facet<T>] {
        &self.facets
    }

    pub fn facet_vertices(&self, facet: &Facet<T>) -> Vec<Vec<T>> {
        facet.vertex_ids.iter().map(|&i| self.vertices[i].clone()).collect()
    }

    pub fn contains(&self, x: &[T]) -> bool {
        self.facets.iter().all(|f| f.level(x) <= f.offset)
    }

    /// Normalized volume from the cone over the boundary triangulation.
    pub fn norm_volume(&self) -> T {
        let apex = &self.vertices[0];
        let mut total = T::zero();
        for f in &self.facets {
            if f.contains(apex) {
                continue;
            }
            for s in &f.simplices {
                let rows: Vec<Vec<T>> = s.iter().map(|p| sub(p, apex)).collect();
                total = total + bareiss_determinant(rows).abs();
            }
        }
        total
    }

    /// Normalized volume as a sum of pyramids over facets: lattice height
    /// of a fixed vertex above each facet times the facet volume.
    pub fn norm_volume_by_pyramids(&self) -> T {
        let apex = &self.vertices[0];
        self.facets.iter().fold(T::zero(), |acc, f| {
            acc + (f.offset.clone() - f.level(apex)) * f.norm_volume.clone()
        })
    }

    pub fn translate(&self, shift: &[T]) -> Result<Self> {
        convex_hull(&self.vertices.iter().map(|v| add(v, shift)).collect::<Vec<_>>())
    }
}

struct Simplex<T> {
    verts: Vec<usize>,
    normal: Vec<T>,
    offset: T,
    /// Not-yet-inserted points strictly beyond this simplex.
    outside: Vec<usize>,
}

impl<T: Scalar> Simplex<T> {
    fn height(&self, p: &[T]) -> T {
        dot(&self.normal, p) - self.offset.clone()
    }

    fn sees(&self, p: &[T]) -> bool {
        self.height(p).is_positive()
    }
}

/// Primitive normal of the hyperplane through `pts` (exactly `d` points in
/// `R^d`), or `None` when they are affinely dependent.
fn hyperplane_normal<T: Scalar>(pts: &[&Vec<T>]) -> Option<Vec<T>> {
    let d = pts[0].len();
    let rows: Vec<Vec<T>> = pts[1..].iter().map(|p| sub(p, pts[0])).collect();
    let normal: Vec<T> = (0..d)
        .map(|j| {
            let minor: Vec<Vec<T>> = rows
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let det = bareiss_determinant(minor);
            if j % 2 == 1 {
                -det
            } else {
                det
            }
        })
        .collect();
    primitive_part(&normal).ok()
}

fn dedup_points<T: Scalar>(points: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut seen = std::collections::HashSet::new();
    points.iter().filter(|p| seen.insert((*p).clone())).cloned().collect()
}

/// Exact convex hull by incremental beneath-beyond insertion.
///
/// Fails with [`Error::DegenerateSupport`] unless the points affinely span
/// their ambient space.
pub fn convex_hull<T: Scalar>(points: &[Vec<T>]) -> Result<LatticePolytope<T>> {
    let Some(first) = points.first() else {
        return Err(Error::DegenerateSupport);
    };
    let d = first.len();
    if d == 0 {
        return Err(Error::InvalidInput("points must have positive dimension".into()));
    }
    if let Some(bad) = points.iter().find(|p| p.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: bad.len(),
        });
    }
    let pts = dedup_points(points);

    let mut simplex = vec![0usize];
    let mut diffs: Vec<Vec<T>> = Vec::new();
    for (i, p) in pts.iter().enumerate().skip(1) {
        diffs.push(sub(p, &pts[0]));
        if rank_of(&diffs) == diffs.len() {
            simplex.push(i);
            if simplex.len() == d + 1 {
                break;
            }
        } else {
            diffs.pop();
        }
    }
    if simplex.len() < d + 1 {
        return Err(Error::DegenerateSupport);
    }

    // (d+1) times an interior point
    let interior = simplex
        .iter()
        .fold(vec![T::zero(); d], |acc, &i| add(&acc, &pts[i]));
    let scale = T::from_count(d + 1);
    let make = |verts: Vec<usize>| -> Simplex<T> {
        let refs: Vec<&Vec<T>> = verts.iter().map(|&i| &pts[i]).collect();
        let mut normal = hyperplane_normal(&refs).expect("hull facets are nondegenerate");
        let mut offset = dot(&normal, &pts[verts[0]]);
        if dot(&normal, &interior) > offset.clone() * scale.clone() {
            normal = normal.into_iter().map(|x| -x).collect();
            offset = -offset;
        }
        Simplex {
            verts,
            normal,
            offset,
            outside: Vec::new(),
        }
    };

    let mut facets: Vec<Option<Simplex<T>>> = (0..=d)
        .map(|skip| {
            let mut v: Vec<usize> = simplex.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &i)| i).collect();
            v.sort_unstable();
            Some(make(v))
        })
        .collect();

    let mut inserted: BTreeSet<usize> = simplex.iter().copied().collect();
    for pi in (0..pts.len()).filter(|i| !inserted.contains(i)) {
        if let Some(f) = facets.iter_mut().flatten().find(|f| f.sees(&pts[pi])) {
            f.outside.push(pi);
        }
    }

    let ridges_of = |verts: &[usize]| -> Vec<Vec<usize>> {
        (0..verts.len())
            .map(|skip| verts.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &i)| i).collect())
            .collect()
    };
    // ridge -> live simplices containing it
    let mut adjacency: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for (k, f) in facets.iter().enumerate() {
        for r in ridges_of(&f.as_ref().expect("fresh").verts) {
            adjacency.entry(r).or_default().push(k);
        }
    }

    let mut pending: Vec<usize> = (0..facets.len()).collect();
    while let Some(fi) = pending.pop() {
        let Some(f) = &facets[fi] else {
            continue;
        };
        let Some(&apex) = f.outside.iter().max_by(|&&a, &&b| f.height(&pts[a]).cmp(&f.height(&pts[b])).then(b.cmp(&a)))
        else {
            continue;
        };
        // the visible region is connected, so grow it from `fi`
        let mut visible: BTreeSet<usize> = BTreeSet::from([fi]);
        let mut stack = vec![fi];
        let mut horizon: Vec<Vec<usize>> = Vec::new();
        while let Some(k) = stack.pop() {
            for r in ridges_of(&facets[k].as_ref().expect("live").verts) {
                let other = adjacency[&r].iter().copied().find(|&j| j != k).expect("closed surface");
                if visible.contains(&other) {
                    continue;
                }
                if facets[other].as_ref().expect("live").sees(&pts[apex]) {
                    visible.insert(other);
                    stack.push(other);
                } else {
                    horizon.push(r);
                }
            }
        }
        let mut orphans: Vec<usize> = Vec::new();
        for &k in &visible {
            let g = facets[k].take().expect("visible facets are live");
            for r in ridges_of(&g.verts) {
                let users = adjacency.get_mut(&r).expect("known ridge");
                users.retain(|&j| j != k);
                if users.is_empty() {
                    adjacency.remove(&r);
                }
            }
            orphans.extend(g.outside.into_iter().filter(|&i| i != apex));
        }
        inserted.insert(apex);
        horizon.sort();
        let first_new = facets.len();
        for mut ridge in horizon {
            ridge.push(apex);
            ridge.sort_unstable();
            for r in ridges_of(&ridge) {
                adjacency.entry(r).or_default().push(facets.len());
            }
            facets.push(Some(make(ridge)));
        }
        orphans.sort_unstable();
        orphans.dedup();
        for pi in orphans {
            if let Some(g) = facets[first_new..].iter_mut().flatten().find(|g| g.sees(&pts[pi])) {
                g.outside.push(pi);
            }
        }
        pending.extend(first_new..facets.len());
    }
    let facets: Vec<Simplex<T>> = facets.into_iter().flatten().collect();

    let mut groups: BTreeMap<(Vec<T>, T), Vec<Vec<usize>>> = BTreeMap::new();
    for f in facets {
        groups.entry((f.normal, f.offset)).or_default().push(f.verts);
    }

    let mut vertices: Vec<Vec<T>> = inserted
        .iter()
        .map(|&i| &pts[i])
        .filter(|p| {
            let normals: Vec<Vec<T>> = groups
                .keys()
                .filter(|(n, c)| dot(n, p) == *c)
                .map(|(n, _)| n.clone())
                .collect();
            rank_of(&normals) == d
        })
        .cloned()
        .collect();
    vertices.sort();

    let facets = groups
        .into_iter()
        .map(|((normal, offset), simplices)| {
            let vertex_ids = vertices
                .iter()
                .enumerate()
                .filter(|(_, v)| dot(&normal, v) == offset)
                .map(|(i, _)| i)
                .collect();
            let simplices: Vec<Vec<Vec<T>>> = simplices
                .into_iter()
                .map(|s| s.into_iter().map(|i| pts[i].clone()).collect())
                .collect();
            let norm_volume = intrinsic_volume(&normal, &simplices);
            Facet {
                normal,
                offset,
                vertex_ids,
                norm_volume,
                simplices,
            }
        })
        .collect();

    Ok(LatticePolytope { dim: d, vertices, facets })
}

/// Sum over the facet's simplices of `|det(q_1 - q_0, ..., w)|` where `w`
/// is a lattice vector at height one above the facet hyperplane.
fn intrinsic_volume<T: Scalar>(normal: &[T], simplices: &[Vec<Vec<T>>]) -> T {
    let w = unit_transversal(normal);
    simplices.iter().fold(T::zero(), |acc, s| {
        let mut rows: Vec<Vec<T>> = s[1..].iter().map(|q| sub(q, &s[0])).collect();
        rows.push(w.clone());
        acc + bareiss_determinant(rows).abs()
    })
}

/// An integer vector `w` with `normal . w == 1` (normal must be primitive).
fn unit_transversal<T: Scalar>(normal: &[T]) -> Vec<T> {
    let s = smith_normal_form(&IntMatrix::from_rows(vec![normal.to_vec()]).expect("single row"));
    let u = s.u.get(0, 0).clone();
    s.v.column(0).into_iter().map(|x| x * u.clone()).collect()
}

pub fn norm_volume<T: Scalar>(p: &LatticePolytope<T>) -> T {
    p.norm_volume()
}

/// Intrinsic normalized volume of a facet, computed by mapping the facet's
/// hyperplane lattice unimodularly onto `Z^(d-1)` and taking the hull there.
pub fn facet_norm_volume<T: Scalar>(p: &LatticePolytope<T>, f: &Facet<T>) -> Result<T> {
    if p.dim() == 1 {
        return Ok(T::one());
    }
    let s = smith_normal_form(&IntMatrix::from_rows(vec![f.normal.clone()])?);
    let flat: Vec<Vec<T>> = p
        .facet_vertices(f)
        .iter()
        .map(|x| s.v_inv.apply(x)[1..].to_vec())
        .collect();
    Ok(convex_hull(&flat)?.norm_volume())
}

/// Normalized volume of the hull of `points` in `R^dim`; zero when the
/// points are not full-dimensional.
pub fn norm_volume_of_points<T: Scalar>(points: &[Vec<T>], dim: usize) -> Result<T> {
    if points.is_empty() || affine_dimension(points) < dim {
        return Ok(T::zero());
    }
    Ok(convex_hull(points)?.norm_volume())
}

/// Vertices of the convex hull of an arbitrary (possibly lower-dimensional)
/// point set, sorted lexicographically.
pub fn extreme_points<T: Scalar>(points: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
    let pts = dedup_points(points);
    let Some(base) = pts.first() else {
        return Ok(Vec::new());
    };
    let d = base.len();
    let k = affine_dimension(&pts);
    if k == 0 {
        return Ok(vec![base.clone()]);
    }
    if k == d {
        return Ok(convex_hull(&pts)?.vertices().to_vec());
    }
    // a coordinate projection that is injective on the affine span keeps
    // the face structure
    let diffs: Vec<Vec<T>> = pts.iter().map(|p| sub(p, base)).collect();
    let mut coords: Vec<usize> = Vec::new();
    for j in 0..d {
        coords.push(j);
        let projected: Vec<Vec<T>> = diffs.iter().map(|v| coords.iter().map(|&c| v[c].clone()).collect()).collect();
        if rank_of(&projected) < coords.len() {
            coords.pop();
        }
        if coords.len() == k {
            break;
        }
    }
    let projected: Vec<Vec<T>> = pts.iter().map(|p| coords.iter().map(|&c| p[c].clone()).collect()).collect();
    let hull = convex_hull(&projected)?;
    let mut out: Vec<Vec<T>> = pts
        .iter()
        .zip(&projected)
        .filter(|(_, q)| hull.vertices().binary_search(q).is_ok())
        .map(|(p, _)| p.clone())
        .collect();
    out.sort();
    Ok(out)
}

/// All pairwise sums, deduplicated and sorted.
pub fn minkowski_sum_points<T: Scalar>(a: &[Vec<T>], b: &[Vec<T>]) -> Vec<Vec<T>> {
    let set: BTreeSet<Vec<T>> = a.iter().flat_map(|p| b.iter().map(move |q| add(p, q))).collect();
    set.into_iter().collect()
}

pub fn minkowski_sum<T: Scalar>(p: &LatticePolytope<T>, q: &LatticePolytope<T>) -> Result<LatticePolytope<T>> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: q.dim(),
        });
    }
    convex_hull(&minkowski_sum_points(p.vertices(), q.vertices()))
}

/// An ordered tuple of lattice polytopes in a common `R^dim`, each stored by
/// its extreme points so that lower-dimensional members are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopeTuple<T> {
    sets: Vec<Vec<Vec<T>>>,
    dim: usize,
}

impl<T: Scalar> PolytopeTuple<T> {
    pub fn new(sets: Vec<Vec<Vec<T>>>) -> Result<Self> {
        let dim = sets
            .first()
            .and_then(|s| s.first())
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidInput("empty polytope tuple".into()))?;
        let mut reduced = Vec::with_capacity(sets.len());
        for s in &sets {
            if s.is_empty() {
                return Err(Error::InvalidInput("empty point set in tuple".into()));
            }
            if let Some(bad) = s.iter().find(|p| p.len() != dim) {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: bad.len(),
                });
            }
            reduced.push(extreme_points(s)?);
        }
        Ok(Self { sets: reduced, dim })
    }

    pub fn from_polytopes(polytopes: &[LatticePolytope<T>]) -> Result<Self> {
        Self::new(polytopes.iter().map(|p| p.vertices().to_vec()).collect())
    }

    pub fn sets(&self) -> &[Vec<Vec<T>>] {
        &self.sets
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

/// Normalized mixed volume of `dim` polytopes in `R^dim`, by
/// inclusion-exclusion over all subset sums.
pub fn normalized_mixed_volume<T: Scalar>(t: &PolytopeTuple<T>) -> Result<T> {
    let d = t.dim();
    if t.len() != d {
        return Err(Error::Arity {
            expected: d,
            found: t.len(),
        });
    }
    mixed_volume_of_sets(t.sets(), d)
}

fn mixed_volume_of_sets<T: Scalar>(sets: &[Vec<Vec<T>>], d: usize) -> Result<T> {
    let mut distinct: Vec<Vec<Vec<T>>> = Vec::new();
    let mut counts: Vec<usize> = Vec::new();
    for s in sets {
        match distinct.iter().position(|x| x == s) {
            Some(i) => counts[i] += 1,
            None => {
                distinct.push(s.clone());
                counts.push(1);
            }
        }
    }
    SumCache::new(&distinct, d).mixed_volume(&counts)
}

/// Extreme points and normalized volume of `sum_i c_i P_i`, memoized by the
/// coefficient vector `c`.
struct SumCache<'a, T> {
    sets: &'a [Vec<Vec<T>>],
    dim: usize,
    known: HashMap<Vec<usize>, (Vec<Vec<T>>, T)>,
}

impl<'a, T: Scalar> SumCache<'a, T> {
    fn new(sets: &'a [Vec<Vec<T>>], dim: usize) -> Self {
        Self {
            sets,
            dim,
            known: HashMap::new(),
        }
    }

    fn get(&mut self, c: &[usize]) -> Result<&(Vec<Vec<T>>, T)> {
        if !self.known.contains_key(c) {
            let j = c.iter().position(|&x| x > 0).expect("nonzero coefficients");
            let mut rest = c.to_vec();
            rest[j] -= 1;
            let points = if rest.iter().all(|&x| x == 0) {
                self.sets[j].clone()
            } else {
                let base = self.get(&rest)?.0.clone();
                minkowski_sum_points(&base, &self.sets[j])
            };
            let entry = if affine_dimension(&points) == self.dim {
                let hull = convex_hull(&points)?;
                (hull.vertices().to_vec(), hull.norm_volume())
            } else {
                (extreme_points(&points)?, T::zero())
            };
            self.known.insert(c.to_vec(), entry);
        }
        Ok(&self.known[c])
    }

    /// Normalized mixed volume of the tuple with `P_i` repeated `e_i` times,
    /// where the `e_i` sum to the dimension.
    fn mixed_volume(&mut self, e: &[usize]) -> Result<T> {
        let d = self.dim;
        let mut total = T::zero();
        let mut c = vec![0usize; e.len()];
        loop {
            // odometer over 0 <= c <= e
            let Some(pos) = (0..e.len()).find(|&i| c[i] < e[i]) else {
                break;
            };
            c[pos] += 1;
            c[..pos].iter_mut().for_each(|x| *x = 0);
            let weight = c
                .iter()
                .zip(e)
                .fold(T::one(), |acc, (&ci, &ei)| acc * binomial::<T>(ei, ci));
            let vol = self.get(&c)?.1.clone() * weight;
            if (d - c.iter().sum::<usize>()) % 2 == 0 {
                total = total + vol;
            } else {
                total = total - vol;
            }
        }
        let fact: T = factorial(d);
        if !total.is_multiple_of(&fact) || total.is_negative() {
            return Err(Error::Consistency(format!(
                "mixed volume numerator {total} is not a nonnegative multiple of {fact}"
            )));
        }
        Ok(total / fact)
    }
}

fn binomial<T: Scalar>(n: usize, k: usize) -> T {
    (0..k).fold(T::one(), |acc, i| acc * T::from_count(n - i) / T::from_count(i + 1))
}

/// Euler characteristic of a generic complete intersection in the torus
/// with Newton polytopes `t`, from the series `prod D_i (1 + D_i)^-1`.
pub fn euler_char_ci<T: Scalar>(t: &PolytopeTuple<T>) -> Result<T> {
    let k = t.len();
    let m = t.dim();
    if k == 0 {
        return Err(Error::InvalidInput("empty polytope tuple".into()));
    }
    if k > m {
        return Err(Error::Overdetermined);
    }
    let mut sums = SumCache::new(t.sets(), m);
    let mut total = T::zero();
    for exps in compositions(m, k) {
        total = total + sums.mixed_volume(&exps)?;
    }
    Ok(if (m - k) % 2 == 0 { total } else { -total })
}

/// All ways to write `total` as an ordered sum of `parts` positive integers.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 1..=total - (parts - 1) {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Lattice points of `d` times the standard simplex in `R^dim`, in
/// lexicographic order.
pub fn simplex_lattice_points<T: Scalar>(dim: usize, d: u32) -> Vec<Vec<T>> {
    fn rec(dim: usize, budget: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == dim {
            out.push(prefix.clone());
            return;
        }
        for x in 0..=budget {
            prefix.push(x);
            rec(dim, budget - x, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(dim, d, &mut Vec::new(), &mut out);
    out.into_iter()
        .map(|p| p.into_iter().map(|x| T::from_small(i64::from(x))).collect())
        .collect()
}
