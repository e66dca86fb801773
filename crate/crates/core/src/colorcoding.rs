//! The hash family `h_{p,q}(m) = (q·m mod p) mod k²` and the color-coding
//! search for `k` distinct witnesses.

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct HashParams {
    pub p: u64,
    pub q: u64,
    pub k: u64,
}

/// `(q·m mod p) mod k²`.
pub fn hash_value(params: HashParams, m: u64) -> u64 {
    let HashParams { p, q, k } = params;
    ((q as u128 * m as u128 % p as u128) % (k as u128 * k as u128)) as u64
}

/// Primes below `limit`, ascending.
pub fn primes_below(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    if limit < 3 {
        return Vec::new();
    }
    let mut composite = vec![false; limit];
    let mut out = Vec::new();
    for i in 2..limit {
        if !composite[i] {
            out.push(i as u64);
            for j in (i * i..limit).step_by(i) {
                composite[j] = true;
            }
        }
    }
    out
}

/// `p < k²·log₂ n`, decided exactly as `2^p < n^{k²}`.
pub fn below_prime_bound(p: u64, k: u64, n: u64) -> bool {
    if n < 2 || k == 0 {
        return false;
    }
    BigUint::from(n).pow((k * k) as u32) > BigUint::from(1u8) << p as usize
}

/// Primes allowed for `(k, n)`, ascending. For `k = 1` the prime 2 is always
/// admitted, since a singleton is injective under any hash.
pub fn candidate_primes(k: u64, n: u64) -> Vec<u64> {
    let bits = 64 - n.leading_zeros() as u64;
    let mut ps: Vec<u64> = primes_below(k * k * bits + 1)
        .into_iter()
        .filter(|&p| below_prime_bound(p, k, n))
        .collect();
    if k == 1 && ps.first() != Some(&2) {
        ps.insert(0, 2);
    }
    ps
}

/// `k^{k²}`, the number of maps `{0, .., k²-1} → {0, .., k-1}`.
pub fn function_space_size(k: u64) -> BigUint {
    BigUint::from(k).pow((k * k) as u32)
}

/// Lexicographically smallest `(p, q)` with `p` an admissible prime,
/// `1 ≤ q < p` and `h_{p,q}` injective on `x ⊆ {1, .., n}`.
pub fn find_injective_hash(x: &[u64], k: u64, n: u64) -> Result<Option<HashParams>> {
    if k == 0 {
        return Err(Error::param("k must be positive"));
    }
    if x.len() as u64 != k {
        return Err(Error::param(format!("set has {} elements, expected k = {k}", x.len())));
    }
    if let Some(&m) = x.iter().find(|&&m| m == 0 || m > n) {
        return Err(Error::param(format!("element {m} outside 1..={n}")));
    }
    let mut sorted = x.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != x.len() {
        return Err(Error::param("set elements must be distinct"));
    }
    let mut seen = vec![false; (k * k) as usize];
    for p in candidate_primes(k, n) {
        for q in 1..p {
            let params = HashParams { p, q, k };
            seen.iter_mut().for_each(|s| *s = false);
            let injective = x.iter().all(|&m| {
                let h = hash_value(params, m) as usize;
                !std::mem::replace(&mut seen[h], true)
            });
            if injective {
                return Ok(Some(params));
            }
        }
    }
    Ok(None)
}

/// A hash, a coloring `g` of its range and one satisfying element per color
/// class: `g[h(elements[j])] == j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistinctWitness {
    pub params: HashParams,
    pub g: Vec<u64>,
    pub elements: Vec<u64>,
}

/// Searches `(p, q, g)` in lexicographic `(p, q)` order for a coloring under
/// which every color `j < k` holds some satisfying element.
pub fn distinct_witness_search(universe_size: u64, holds: impl Fn(u64) -> bool, k: u64) -> Option<DistinctWitness> {
    if k == 0 {
        return None;
    }
    let sat: Vec<u64> = (1..=universe_size).filter(|&m| holds(m)).collect();
    let range = (k * k) as usize;
    let mut rep: Vec<Option<u64>> = vec![None; range];
    for p in candidate_primes(k, universe_size) {
        for q in 1..p {
            let params = HashParams { p, q, k };
            rep.iter_mut().for_each(|r| *r = None);
            for &m in &sat {
                rep[hash_value(params, m) as usize].get_or_insert(m);
            }
            let realized: Vec<usize> = (0..range).filter(|&c| rep[c].is_some()).collect();
            if let Some(colors) = color_classes(&realized, k as usize) {
                let mut g = vec![0u64; range];
                let mut elements = vec![0u64; k as usize];
                for (&c, &j) in realized.iter().zip(&colors) {
                    g[c] = j as u64;
                    elements[j] = rep[c].expect("realized");
                }
                return Some(DistinctWitness { params, g, elements });
            }
        }
    }
    None
}

/// Backtracking for a coloring of the realized classes that uses every one
/// of `k` colors; unrealized classes are irrelevant.
fn color_classes(realized: &[usize], k: usize) -> Option<Vec<usize>> {
    fn go(i: usize, n: usize, k: usize, used: &mut Vec<usize>, colors: &mut Vec<usize>) -> bool {
        let missing = used.iter().filter(|&&c| c == 0).count();
        if missing > n - i {
            return false;
        }
        if i == n {
            return true;
        }
        for j in 0..k {
            used[j] += 1;
            colors.push(j);
            if go(i + 1, n, k, used, colors) {
                return true;
            }
            colors.pop();
            used[j] -= 1;
        }
        false
    }
    let mut used = vec![0; k];
    let mut colors = Vec::with_capacity(realized.len());
    go(0, realized.len(), k, &mut used, &mut colors).then_some(colors)
}

/// Whether at least `k` distinct elements of `{1, .., universe_size}`
/// satisfy `holds`, decided by the color-coding search. `k = 0` is true.
pub fn distinct_witness_decide(universe_size: u64, holds: impl Fn(u64) -> bool, k: u64) -> bool {
    k == 0 || distinct_witness_search(universe_size, holds, k).is_some()
}
