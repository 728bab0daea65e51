#![allow(dead_code)]

use std::path::PathBuf;

use nodesum_core::{Int, SupportSet};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn parse_int(v: &serde_json::Value) -> Int {
    match v {
        serde_json::Value::Number(n) => n.to_string().parse().expect("integer"),
        serde_json::Value::String(s) => s.parse().expect("decimal string"),
        other => panic!("not an integer: {other}"),
    }
}

/// Every corpus document as `(name, support set)`, sorted by file name.
pub fn corpus() -> Vec<(String, SupportSet)> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
            let points = doc["points"]
                .as_array()
                .unwrap()
                .iter()
                .map(|row| row.as_array().unwrap().iter().map(parse_int).collect())
                .collect();
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            (name, SupportSet::new(points).unwrap())
        })
        .collect()
}

pub fn corpus_entry(name: &str) -> SupportSet {
    corpus()
        .into_iter()
        .find(|(n, _)| n == name)
        .unwrap_or_else(|| panic!("no corpus entry {name}"))
        .1
}

pub fn ints(points: &[&[i64]]) -> Vec<Vec<Int>> {
    points.iter().map(|p| p.iter().map(|&x| Int::from(x)).collect()).collect()
}

/// A random matrix in GL_d(Z) built from elementary row operations.
pub fn random_unimodular(rng: &mut ChaCha8Rng, d: usize) -> Vec<Vec<i64>> {
    let mut rows: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect();
    for _ in 0..3 * d {
        let i = rng.gen_range(0..d);
        let j = rng.gen_range(0..d);
        match rng.gen_range(0..3) {
            0 if i != j => {
                let k = rng.gen_range(-2..=2);
                for c in 0..d {
                    rows[i][c] += k * rows[j][c];
                }
            }
            1 => rows.swap(i, j),
            _ => rows[i].iter_mut().for_each(|x| *x = -*x),
        }
    }
    rows
}

/// `[[A, 0], [C, B]]` with `A` in GL_n(Z), `B` in GL_2(Z) and `C` random:
/// the maps that commute with projecting away the last two coordinates.
pub fn block_unimodular(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
    let a = random_unimodular(rng, n);
    let b = random_unimodular(rng, 2);
    (0..n + 2)
        .map(|i| {
            (0..n + 2)
                .map(|j| match (i < n, j < n) {
                    (true, true) => a[i][j],
                    (true, false) => 0,
                    (false, true) => rng.gen_range(-2..=2),
                    (false, false) => b[i - n][j - n],
                })
                .collect()
        })
        .collect()
}

pub fn apply(m: &[Vec<i64>], a: &SupportSet) -> SupportSet {
    let points = a
        .points()
        .iter()
        .map(|p| {
            m.iter()
                .map(|row| row.iter().zip(p).fold(Int::from(0), |acc, (&r, x)| acc + Int::from(r) * x))
                .collect()
        })
        .collect();
    SupportSet::new(points).unwrap()
}

/// Random points in `[0, range]^dim`, retried until they span `R^dim`.
pub fn random_points(rng: &mut ChaCha8Rng, dim: usize, count: usize, range: i64) -> Vec<Vec<Int>> {
    loop {
        let raw: Vec<Vec<Int>> = (0..count.max(dim + 1))
            .map(|_| (0..dim).map(|_| Int::from(rng.gen_range(0..=range))).collect())
            .collect();
        if nodesum_core::lattice::affine_dimension(&raw) == dim {
            return raw;
        }
    }
}

/// A random full-dimensional support set in `Z^dim`, `dim >= 3`.
pub fn random_support(rng: &mut ChaCha8Rng, dim: usize, count: usize, range: i64) -> SupportSet {
    SupportSet::new(random_points(rng, dim, count, range)).expect("spanning points")
}
