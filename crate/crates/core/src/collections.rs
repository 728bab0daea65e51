//! Collections of finite point sets: codimension, the essential
//! subcollection, quotient collections and the multiplicity `d`.
//!
//! Subcollections are scanned exhaustively, so collections are expected to
//! hold at most a dozen or so sets. Set indices are 0-based.

use crate::error::{Error, Result};
use crate::lattice::{rank_of, smith_normal_form, IntMatrix};
use crate::polytope::{normalized_mixed_volume, PolytopeTuple};
use crate::scalar::{sub, Scalar};

/// A list of nonempty finite subsets of `Z^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Collection<T> {
    sets: Vec<Vec<Vec<T>>>,
    m: usize,
}

impl<T: Scalar> Collection<T> {
    pub fn new(sets: Vec<Vec<Vec<T>>>, m: usize) -> Result<Self> {
        for s in &sets {
            if s.is_empty() {
                return Err(Error::InvalidInput("collection member is empty".into()));
            }
            if let Some(bad) = s.iter().find(|p| p.len() != m) {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: bad.len(),
                });
            }
        }
        Ok(Self { sets, m })
    }

    pub fn from_i64(sets: &[&[&[i64]]], m: usize) -> Result<Self> {
        Self::new(
            sets.iter()
                .map(|s| s.iter().map(|p| p.iter().map(|&x| T::from_small(x)).collect()).collect())
                .collect(),
            m,
        )
    }

    pub fn sets(&self) -> &[Vec<Vec<T>>] {
        &self.sets
    }

    pub fn ambient_rank(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Differences `p - p_0` inside each selected set.
    fn differences(&self, indices: &[usize]) -> Vec<Vec<T>> {
        indices
            .iter()
            .flat_map(|&i| {
                let s = &self.sets[i];
                s[1..].iter().map(move |p| sub(p, &s[0]))
            })
            .collect()
    }

    /// Codimension of the subcollection given by `indices`.
    pub fn codim_of(&self, indices: &[usize]) -> i64 {
        let dim = rank_of(&self.differences(indices));
        indices.len() as i64 - dim as i64
    }
}

/// Number of sets minus the dimension of their Minkowski sum.
pub fn collection_codim<T: Scalar>(c: &Collection<T>) -> i64 {
    c.codim_of(&(0..c.len()).collect::<Vec<_>>())
}

fn subsets(count: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u64..(1u64 << count)).map(move |mask| (0..count).filter(|&i| mask >> i & 1 == 1).collect())
}

/// The unique subcollection of maximal codimension that is minimal under
/// inclusion.
pub fn essential_subcollection<T: Scalar>(c: &Collection<T>) -> Vec<usize> {
    let scored: Vec<(i64, Vec<usize>)> = subsets(c.len()).map(|s| (c.codim_of(&s), s)).collect();
    let best = scored.iter().map(|(k, _)| *k).max().unwrap_or(0);
    // maximizers are closed under intersection, so their intersection is
    // the minimal one
    let mut keep: Vec<bool> = vec![true; c.len()];
    for (k, s) in &scored {
        if *k == best {
            for (i, flag) in keep.iter_mut().enumerate() {
                *flag &= s.contains(&i);
            }
        }
    }
    let out: Vec<usize> = (0..c.len()).filter(|&i| keep[i]).collect();
    debug_assert_eq!(c.codim_of(&out), best);
    out
}

/// True when no subcollection has larger codimension than the whole.
pub fn is_weakly_essential<T: Scalar>(c: &Collection<T>) -> bool {
    let whole = collection_codim(c);
    subsets(c.len()).all(|s| c.codim_of(&s) <= whole)
}

/// Images of the sets not in `selected` in `Z^m / L'`, where `L` is spanned
/// by the differences inside the selected sets and `L'` is its saturation.
/// Returns the image sets and `|L' / L|`.
///
/// Each image is translated so its lexicographic minimum is the origin,
/// then deduplicated and sorted.
pub fn quotient_collection<T: Scalar>(c: &Collection<T>, selected: &[usize]) -> Result<(Vec<Vec<Vec<T>>>, T)> {
    if let Some(&bad) = selected.iter().find(|&&i| i >= c.len()) {
        return Err(Error::InvalidInput(format!("set index {bad} out of range")));
    }
    let (coords, rank, index) = quotient_map(&c.differences(selected), c.ambient_rank())?;
    let images = (0..c.len())
        .filter(|i| !selected.contains(i))
        .map(|i| normalize_set(c.sets[i].iter().map(|p| coords.left_apply(p)[rank..].to_vec()).collect()))
        .collect();
    Ok((images, index))
}

/// Column transform `V`, rank and index of the lattice spanned by `gens`:
/// in coordinates `x V` the saturation is spanned by the first `rank` unit
/// vectors.
fn quotient_map<T: Scalar>(gens: &[Vec<T>], m: usize) -> Result<(IntMatrix<T>, usize, T)> {
    let gens: Vec<Vec<T>> = gens.iter().filter(|g| !crate::scalar::is_zero_vector(g)).cloned().collect();
    if gens.is_empty() {
        return Ok((IntMatrix::identity(m), 0, T::one()));
    }
    let s = smith_normal_form(&IntMatrix::from_rows(gens)?);
    let divisors = s.nonzero_divisors();
    let index = divisors.iter().fold(T::one(), |acc, d| acc * d.clone());
    Ok((s.v, divisors.len(), index))
}

fn normalize_set<T: Scalar>(points: Vec<Vec<T>>) -> Vec<Vec<T>> {
    let min = points.iter().min().cloned().expect("nonempty set");
    let mut out: Vec<Vec<T>> = points.iter().map(|p| sub(p, &min)).collect();
    out.sort();
    out.dedup();
    out
}

/// The data behind the multiplicity of a weakly essential collection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityResult<T> {
    pub essential_indices: Vec<usize>,
    pub codim: i64,
    /// `|L' / L|` for the essential subcollection.
    pub lattice_index: T,
    /// Images of the remaining sets, in `Z^(I - k)`.
    pub quotient_sets: Vec<Vec<Vec<T>>>,
    pub d: T,
}

/// `|L'/L|` times the normalized mixed volume of the quotient hulls
/// (an empty mixed volume counts as 1).
pub fn multiplicity<T: Scalar>(c: &Collection<T>) -> Result<MultiplicityResult<T>> {
    if !is_weakly_essential(c) {
        return Err(Error::NotWeaklyEssential);
    }
    // work inside the saturated lattice of the affine span of the sum
    let all: Vec<usize> = (0..c.len()).collect();
    let (v, w, _) = quotient_map(&c.differences(&all), c.ambient_rank())?;
    let restricted = Collection::new(
        c.sets
            .iter()
            .map(|s| s.iter().map(|p| v.left_apply(&sub(p, &s[0]))[..w].to_vec()).collect())
            .collect(),
        w,
    )?;

    let essential_indices = essential_subcollection(&restricted);
    let (quotient_sets, lattice_index) = quotient_collection(&restricted, &essential_indices)?;
    let mv = if quotient_sets.is_empty() {
        T::one()
    } else {
        normalized_mixed_volume(&PolytopeTuple::new(quotient_sets.clone())?)?
    };
    Ok(MultiplicityResult {
        essential_indices,
        codim: collection_codim(c),
        d: lattice_index.clone() * mv,
        lattice_index,
        quotient_sets,
    })
}

pub fn multiplicity_d<T: Scalar>(c: &Collection<T>) -> Result<T> {
    Ok(multiplicity(c)?.d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::lattice_index;
    use crate::testing::random_unimodular;
    use num_bigint::BigInt;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type Z = BigInt;

    fn univariate() -> Collection<Z> {
        Collection::from_i64(&[&[&[0], &[2]], &[&[1], &[3]]], 1).unwrap()
    }

    fn four_sets() -> Collection<Z> {
        Collection::from_i64(
            &[
                &[&[0, 0, 0], &[1, 0, 0]],
                &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]],
                &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]],
                &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]],
            ],
            3,
        )
        .unwrap()
    }

    #[test]
    fn codimensions() {
        assert_eq!(collection_codim(&univariate()), 1);
        assert_eq!(collection_codim(&Collection::<Z>::new(vec![], 2).unwrap()), 0);
        assert_eq!(collection_codim(&four_sets()), 1);
    }

    #[test]
    fn essential_parts() {
        assert_eq!(essential_subcollection(&univariate()), vec![0, 1]);
        assert_eq!(essential_subcollection(&four_sets()), vec![0, 1, 2]);
        let single = Collection::<Z>::from_i64(&[&[&[0, 0], &[1, 0], &[0, 1]]], 2).unwrap();
        assert_eq!(essential_subcollection(&single), Vec::<usize>::new());
    }

    #[test]
    fn quotients() {
        let (sets, idx) = quotient_collection(&four_sets(), &[0, 1, 2]).unwrap();
        assert_eq!(sets, vec![vec![vec![Z::from(0)], vec![Z::from(1)]]]);
        assert_eq!(idx, Z::from(1));

        let (sets, idx) = quotient_collection(&univariate(), &[0, 1]).unwrap();
        assert!(sets.is_empty());
        assert_eq!(idx, Z::from(2));

        let c = Collection::<Z>::from_i64(&[&[&[0, 0], &[1, 2]], &[&[0, 0], &[3, 0]]], 2).unwrap();
        let (sets, idx) = quotient_collection(&c, &[]).unwrap();
        assert_eq!(sets, c.sets().to_vec());
        assert_eq!(idx, Z::from(1));

        assert!(quotient_collection(&c, &[5]).is_err());
    }

    #[test]
    fn multiplicities() {
        let r = multiplicity(&univariate()).unwrap();
        assert_eq!(r.d, Z::from(2));
        assert_eq!(r.lattice_index, Z::from(2));
        assert_eq!(r.codim, 1);
        let r = multiplicity(&four_sets()).unwrap();
        assert_eq!(r.d, Z::from(1));
        assert_eq!(r.essential_indices, vec![0, 1, 2]);
        assert_eq!(r.quotient_sets.len(), 1);
    }

    #[test]
    fn whole_collection_essential_with_trivial_index() {
        let c = Collection::<Z>::from_i64(&[&[&[0], &[1]], &[&[0], &[1]]], 1).unwrap();
        assert_eq!(multiplicity_d(&c).unwrap(), Z::from(1));
    }

    #[test]
    fn generic_square_system_counts_mixed_volume() {
        // two generic quadrics in the plane: essential part is empty, d = 4
        let tri: &[&[i64]] = &[&[0, 0], &[2, 0], &[0, 2], &[1, 1], &[1, 0], &[0, 1]];
        let c = Collection::<Z>::from_i64(&[tri, tri], 2).unwrap();
        let r = multiplicity(&c).unwrap();
        assert!(r.essential_indices.is_empty());
        assert_eq!(r.d, Z::from(4));
    }

    #[test]
    fn rejects_collections_that_are_not_weakly_essential() {
        // the first two sets alone have codim 2 - 1 = 1, the whole has 3 - 3 = 0
        let broken = Collection::<Z>::from_i64(
            &[&[&[0, 0, 0], &[1, 0, 0]], &[&[0, 0, 0], &[1, 0, 0]], &[&[0, 0, 0], &[0, 1, 0], &[0, 0, 1]]],
            3,
        )
        .unwrap();
        assert!(!is_weakly_essential(&broken));
        assert_eq!(multiplicity_d(&broken), Err(Error::NotWeaklyEssential));
        assert!(is_weakly_essential(&four_sets()));
    }

    fn random_collection(rng: &mut ChaCha8Rng, count: usize, m: usize) -> Collection<Z> {
        use rand::Rng;
        let sets = (0..count)
            .map(|_| {
                let size = rng.gen_range(1..=3);
                (0..size).map(|_| (0..m).map(|_| Z::from(rng.gen_range(-2..=2))).collect()).collect()
            })
            .collect();
        Collection::new(sets, m).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn essential_has_maximal_codim(seed in any::<u64>(), count in 1usize..=6, m in 1usize..=3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = random_collection(&mut rng, count, m);
            let ess = essential_subcollection(&c);
            let k = c.codim_of(&ess);
            for s in subsets(c.len()) {
                let ks = c.codim_of(&s);
                prop_assert!(k >= ks);
                if ks == k {
                    prop_assert!(ess.iter().all(|i| s.contains(i)));
                }
            }
        }

        #[test]
        fn multiplicity_invariance(seed in any::<u64>(), count in 1usize..=4, m in 1usize..=3) {
            use rand::Rng;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = random_collection(&mut rng, count, m);
            let Ok(base) = multiplicity_d(&c) else { return Ok(()); };
            let t = random_unimodular(&mut rng, m);
            let moved = Collection::new(
                c.sets()
                    .iter()
                    .map(|s| {
                        let shift: Vec<Z> = (0..m).map(|_| Z::from(rng.gen_range(-3..=3))).collect();
                        s.iter().map(|p| crate::scalar::add(&t.apply(p), &shift)).collect()
                    })
                    .collect(),
                m,
            )
            .unwrap();
            prop_assert_eq!(multiplicity_d(&moved).unwrap(), base);
        }

        #[test]
        fn quotient_index_matches_lattice_index(seed in any::<u64>(), count in 1usize..=4, m in 1usize..=3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = random_collection(&mut rng, count, m);
            let selected: Vec<usize> = (0..c.len()).step_by(2).collect();
            let (_, idx) = quotient_collection(&c, &selected).unwrap();
            let gens = c.differences(&selected);
            let (v, r, _) = quotient_map(&gens, m).unwrap();
            let in_saturation: Vec<Vec<Z>> = gens.iter().map(|g| v.left_apply(g)[..r].to_vec()).collect();
            prop_assert_eq!(lattice_index(&in_saturation, r).unwrap().finite().cloned(), Some(idx));
        }
    }
}
