//! Exact minimum distances by exhaustive enumeration.
//!
//! The homological distance at level `j` is the least weight of a vector in
//! `Ker(A_j)` outside `Im(A_{j+1})`. The engine walks the kernel in Gray-code
//! order, so consecutive vectors differ by one basis vector, and only tests
//! image membership for vectors lighter than the best found so far.
//!
//! The walk can be split into `2^t` sub-ranges by fixing the top `t` kernel
//! coordinates; sub-ranges share only the immutable bases and merge by
//! minimum weight, ties going to the lowest sub-range.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use serde::Serialize;

use crate::complex::{ChainComplex, ExtNat};
use crate::error::{Error, Result};
use crate::gf2::{xor_words, BinMatrix, BitVec, Ge2Basis};

pub const DEFAULT_MAX_KERNEL_DIM: usize = 28;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceMode {
    Homology,
    Cohomology,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DistanceQuery {
    pub level: usize,
    /// Largest kernel dimension the engine will enumerate.
    pub max_kernel_dim: usize,
    pub mode: DistanceMode,
    /// A known lower bound; the search stops once a vector of this weight is found.
    pub lower_bound: Option<ExtNat>,
    pub threads: usize,
}

impl DistanceQuery {
    pub fn new(level: usize) -> Self {
        Self {
            level,
            max_kernel_dim: DEFAULT_MAX_KERNEL_DIM,
            mode: DistanceMode::Homology,
            lower_bound: None,
            threads: 1,
        }
    }

    pub fn cohomology(level: usize) -> Self {
        Self {
            mode: DistanceMode::Cohomology,
            ..Self::new(level)
        }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.max_kernel_dim = cap;
        self
    }

    pub fn with_lower_bound(mut self, bound: ExtNat) -> Self {
        self.lower_bound = Some(bound);
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceResult {
    pub value: ExtNat,
    /// A minimum-weight nontrivial cycle, present whenever `value` is finite.
    #[serde(serialize_with = "serialize_witness")]
    pub witness: Option<BitVec>,
    /// Number of nonzero vectors visited.
    pub enumerated: u64,
}

fn serialize_witness<S: serde::Serializer>(
    w: &Option<BitVec>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match w {
        Some(v) => s.collect_seq(v.ones()),
        None => s.serialize_none(),
    }
}

impl DistanceResult {
    fn infinite() -> Self {
        Self {
            value: ExtNat::Infinite,
            witness: None,
            enumerated: 0,
        }
    }
}

/// Dispatches on `q.mode`.
pub fn distance(c: &ChainComplex, q: &DistanceQuery) -> Result<DistanceResult> {
    match q.mode {
        DistanceMode::Homology => homological_distance(c, q),
        DistanceMode::Cohomology => cohomological_distance(c, q),
    }
}

/// `d_j`: least weight of a cycle at level `j` that is not a boundary.
pub fn homological_distance(c: &ChainComplex, q: &DistanceQuery) -> Result<DistanceResult> {
    let j = q.level;
    if c.homology_rank(j)? == 0 {
        return Ok(DistanceResult::infinite());
    }
    let image = c.boundary(j + 1).column_space_basis();
    if j == 0 {
        // Every vector is a cycle and the boundaries are a proper subspace,
        // so some unit vector lies outside it.
        let n = c.dim(0);
        let (tried, witness) = (0..n)
            .map(|i| BitVec::unit(n, i))
            .enumerate()
            .find(|(_, e)| !image.contains(e))
            .expect("proper subspace misses a unit vector");
        return Ok(DistanceResult {
            value: ExtNat::Finite(1),
            witness: Some(witness),
            enumerated: tried as u64 + 1,
        });
    }
    let kernel = c.boundary(j).kernel_basis();
    search(&kernel, Some(&image), q)
}

/// `d~_j`: the homological distance of the cochain complex at the mirrored level.
pub fn cohomological_distance(c: &ChainComplex, q: &DistanceQuery) -> Result<DistanceResult> {
    let m = c.length();
    if q.level > m {
        return Err(Error::LevelOutOfRange {
            level: q.level,
            length: m,
        });
    }
    let mirrored = DistanceQuery {
        level: m - q.level,
        mode: DistanceMode::Homology,
        ..*q
    };
    homological_distance(&c.cochain(), &mirrored)
}

/// Distance of the binary code with parity check `p`; infinite when `p` has full column rank.
pub fn classical_distance(p: &BinMatrix, cap: usize) -> Result<ExtNat> {
    let kernel = p.kernel_basis();
    if kernel.dim() == 0 {
        return Ok(ExtNat::Infinite);
    }
    let q = DistanceQuery::new(1).with_cap(cap);
    Ok(search(&kernel, None, &q)?.value)
}

/// Minimum-weight codeword of the code with parity check `p`.
pub fn classical_distance_with_witness(p: &BinMatrix, q: &DistanceQuery) -> Result<DistanceResult> {
    let kernel = p.kernel_basis();
    if kernel.dim() == 0 {
        return Ok(DistanceResult::infinite());
    }
    search(&kernel, None, q)
}

struct ChunkBest {
    weight: usize,
    witness: Vec<u64>,
    enumerated: u64,
}

/// Least weight over nonzero vectors in the span of `kernel` that are not in `image`.
fn search(
    kernel: &Ge2Basis,
    image: Option<&Ge2Basis>,
    q: &DistanceQuery,
) -> Result<DistanceResult> {
    let dim = kernel.dim();
    if dim > q.max_kernel_dim {
        return Err(Error::KernelTooLarge {
            dim,
            cap: q.max_kernel_dim,
        });
    }
    if dim == 0 {
        return Ok(DistanceResult::infinite());
    }
    let basis: Vec<Vec<u64>> = kernel
        .vectors()
        .iter()
        .map(|v| v.words().to_vec())
        .collect();
    let target = match q.lower_bound {
        Some(ExtNat::Finite(b)) => (b as usize).max(1),
        _ => 1,
    };

    let threads = q.threads.max(1);
    let split = if threads == 1 {
        0
    } else {
        (usize::BITS - (4 * threads - 1).leading_zeros()) as usize
    }
    .min(dim);
    let chunks = 1usize << split;
    let low = dim - split;

    let stop = AtomicBool::new(false);
    let next = AtomicUsize::new(0);
    let run = || {
        let mut found = Vec::new();
        loop {
            let chunk = next.fetch_add(1, Ordering::Relaxed);
            if chunk >= chunks || stop.load(Ordering::Relaxed) {
                break;
            }
            let best = walk(&basis, low, chunk, image, target, &stop);
            found.push((chunk, best));
        }
        found
    };

    let mut results: Vec<(usize, ChunkBest)> = if threads == 1 {
        run()
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..threads.min(chunks)).map(|_| s.spawn(run)).collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("search worker panicked"))
                .collect()
        })
    };
    results.sort_by_key(|(chunk, _)| *chunk);

    let enumerated = results.iter().map(|(_, b)| b.enumerated).sum();
    let ambient = kernel.ambient();
    let best = results
        .into_iter()
        .map(|(_, b)| b)
        .filter(|b| b.weight != usize::MAX)
        .min_by_key(|b| b.weight);
    Ok(match best {
        Some(b) => DistanceResult {
            value: ExtNat::Finite(b.weight as u64),
            witness: Some(BitVec::from_words(ambient, b.witness)),
            enumerated,
        },
        None => DistanceResult {
            value: ExtNat::Infinite,
            witness: None,
            enumerated,
        },
    })
}

/// Gray-code walk over the `2^low` combinations of the first `low` basis
/// vectors, offset by the fixed combination `chunk` of the remaining ones.
fn walk(
    basis: &[Vec<u64>],
    low: usize,
    chunk: usize,
    image: Option<&Ge2Basis>,
    target: usize,
    stop: &AtomicBool,
) -> ChunkBest {
    let words = basis[0].len();
    let mut x = vec![0u64; words];
    for (k, v) in basis[low..].iter().enumerate() {
        if chunk >> k & 1 == 1 {
            xor_words(&mut x, v);
        }
    }
    let mut best = ChunkBest {
        weight: usize::MAX,
        witness: Vec::new(),
        enumerated: 0,
    };
    let consider = |x: &[u64], best: &mut ChunkBest| -> bool {
        best.enumerated += 1;
        let w: usize = x.iter().map(|w| w.count_ones() as usize).sum();
        if w < best.weight && image.is_none_or(|img| !img.contains_words(x)) {
            best.weight = w;
            best.witness = x.to_vec();
            if w <= target {
                stop.store(true, Ordering::Relaxed);
                return true;
            }
        }
        false
    };
    if chunk != 0 && consider(&x, &mut best) {
        return best;
    }
    let steps: u64 = 1 << low;
    for step in 1..steps {
        if step & 0xffff == 0 && stop.load(Ordering::Relaxed) {
            break;
        }
        xor_words(&mut x, &basis[step.trailing_zeros() as usize]);
        if consider(&x, &mut best) {
            break;
        }
    }
    best
}

/// Checks that `w` is a cycle at level `j`, not a boundary, and of weight `value`.
pub fn is_valid_witness(c: &ChainComplex, j: usize, w: &BitVec, value: ExtNat) -> bool {
    let cycle = c
        .boundary(j)
        .mul_vec(w)
        .map(|s| s.is_zero())
        .unwrap_or(false);
    let boundary = c.boundary(j + 1).column_space_basis().contains(w);
    cycle && !boundary && ExtNat::Finite(w.weight() as u64) == value
}
