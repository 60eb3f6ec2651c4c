//! Brute-force helpers shared by the oracle and acceptance tests.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use gleafkit::metric::PartialMetric;
use gleafkit::{ExtRational, Label};

pub fn half(k: i64) -> ExtRational {
    ExtRational::ratio(k, 2)
}

/// Searches completions of the missing entries over the half-integer grid up
/// to `top` plus infinity. When an extension exists, the shortest-path
/// closure is one whose finite values are sums of at most `n - 1` given
/// entries, so a large enough grid makes this search complete.
pub fn brute_force_extension(n: usize, given: &BTreeMap<(usize, usize), ExtRational>, top: i64) -> bool {
    let missing: Vec<(usize, usize)> =
        (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).filter(|p| !given.contains_key(p)).collect();
    let grid: Vec<ExtRational> = (0..=top).map(half).chain([ExtRational::Infinite]).collect();
    let mut choice = vec![0usize; missing.len()];
    loop {
        let mut table = given.clone();
        for (p, &c) in missing.iter().zip(&choice) {
            table.insert(*p, grid[c].clone());
        }
        let d = |x: usize, y: usize| -> ExtRational {
            match x.cmp(&y) {
                std::cmp::Ordering::Equal => ExtRational::zero(),
                std::cmp::Ordering::Less => table[&(x, y)].clone(),
                std::cmp::Ordering::Greater => table[&(y, x)].clone(),
            }
        };
        let ok = (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| d(x, z) <= &d(x, y) + &d(y, z))));
        if ok {
            return true;
        }
        let mut pos = 0;
        loop {
            if pos == choice.len() {
                return false;
            }
            choice[pos] += 1;
            if choice[pos] < grid.len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

/// A random symmetric partial metric on `n` points with a few missing
/// entries and half-integer values up to 3, both as a table and as a
/// [`PartialMetric`].
pub fn random_partial(rng: &mut ChaCha8Rng, n: usize) -> (BTreeMap<(usize, usize), ExtRational>, PartialMetric) {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).collect();
    let mut given = BTreeMap::new();
    let missing_budget = rng.random_range(1..=3.min(pairs.len()));
    let mut skipped = 0;
    for &p in &pairs {
        if skipped < missing_budget && rng.random_ratio(1, 2) {
            skipped += 1;
            continue;
        }
        given.insert(p, half(rng.random_range(0..=6)));
    }
    let mut partial = PartialMetric::new((0..n).map(Label::from), true);
    for ((x, y), v) in &given {
        partial.set(&Label::from(*x), &Label::from(*y), v.clone()).unwrap();
    }
    (given, partial)
}

/// Whether the shortest-path oracle agrees with the brute-force search on
/// `cases` random partial metrics with 3 to 5 points. Returns the number of
/// extendable and non-extendable cases seen, or the first disagreement.
pub fn validate_extension_oracle(rng: &mut ChaCha8Rng, cases: usize) -> Result<(usize, usize), String> {
    let (mut yes, mut no) = (0, 0);
    for _ in 0..cases {
        let n = rng.random_range(3..=5);
        let (given, partial) = random_partial(rng, n);
        let expected = brute_force_extension(n, &given, 6 * (n as i64 - 1));
        if gleafkit::metric::extension_exists(&partial) != expected {
            return Err(format!("oracle disagrees with brute force on {given:?}"));
        }
        if expected {
            yes += 1;
        } else {
            no += 1;
        }
    }
    Ok((yes, no))
}
