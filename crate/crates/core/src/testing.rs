//! Random instance generators and brute-force oracles for tests.
//!
//! Compiled only for tests or with the `testing` feature. The oracles here
//! work directly from definitions and share no code path with the distance
//! engine beyond matrix rank.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::complex::{ChainComplex, ExtNat};
use crate::gf2::{BinMatrix, BitVec};

/// Uniformly random matrix with independent entries of probability `density`.
pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, density: f64) -> BinMatrix {
    let mut m = BinMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            if rng.gen_bool(density) {
                m.set(i, j, true);
            }
        }
    }
    m
}

/// Random matrix with column weights `<= col_weight` and row weights `<= row_weight`.
pub fn random_sparse_matrix<R: Rng>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    col_weight: usize,
    row_weight: usize,
) -> BinMatrix {
    let mut m = BinMatrix::zeros(rows, cols);
    let mut row_load = vec![0; rows];
    let mut order: Vec<usize> = (0..rows).collect();
    for j in 0..cols {
        let want = rng.gen_range(0..=col_weight.min(rows));
        order.shuffle(rng);
        let mut placed = 0;
        for &i in &order {
            if placed == want {
                break;
            }
            if row_load[i] < row_weight {
                m.set(i, j, true);
                row_load[i] += 1;
                placed += 1;
            }
        }
    }
    m
}

/// Random valid complex with `1..=max_len` boundaries and level dimensions in `1..=max_dim`.
///
/// Each boundary after the first has its columns drawn from the kernel of the
/// previous one, so orthogonality holds by construction.
pub fn random_complex<R: Rng>(rng: &mut R, max_len: usize, max_dim: usize) -> ChainComplex {
    let len = rng.gen_range(1..=max_len);
    let dims: Vec<usize> = (0..=len).map(|_| rng.gen_range(1..=max_dim)).collect();
    let density = rng.gen_range(0.2..0.7);
    let mut boundaries = vec![random_matrix(rng, dims[0], dims[1], density)];
    for j in 1..len {
        let kernel = boundaries[j - 1].kernel_basis();
        let mix = random_matrix(rng, kernel.dim(), dims[j + 1], density);
        let next = kernel
            .matrix()
            .transpose()
            .multiply(&mix)
            .expect("shapes agree");
        boundaries.push(next);
    }
    ChainComplex::validate(boundaries).expect("orthogonal by construction")
}

/// Random valid complex of exactly `len` boundaries whose matrices are
/// `(col_weight, row_weight)`-sparse. Columns of later boundaries are sparse
/// kernel vectors of the previous boundary.
pub fn random_sparse_complex<R: Rng>(
    rng: &mut R,
    len: usize,
    max_dim: usize,
    col_weight: usize,
    row_weight: usize,
) -> ChainComplex {
    let dims: Vec<usize> = (0..=len).map(|_| rng.gen_range(1..=max_dim)).collect();
    let mut boundaries = vec![random_sparse_matrix(
        rng, dims[0], dims[1], col_weight, row_weight,
    )];
    for j in 1..len {
        let prev = &boundaries[j - 1];
        let n = prev.cols();
        let candidates: Vec<BitVec> = (1u64..1 << n)
            .filter(|w| w.count_ones() as usize <= col_weight)
            .map(|w| BitVec::from_support(n, (0..n).filter(|&i| w >> i & 1 == 1)))
            .filter(|v| prev.mul_vec(v).unwrap().is_zero())
            .collect();
        let mut next = BinMatrix::zeros(n, dims[j + 1]);
        let mut row_load = vec![0; n];
        for col in 0..dims[j + 1] {
            if candidates.is_empty() || rng.gen_bool(0.2) {
                continue;
            }
            for _ in 0..4 {
                let v = candidates.choose(rng).unwrap();
                if v.ones().all(|i| row_load[i] < row_weight) {
                    for i in v.ones() {
                        next.set(i, col, true);
                        row_load[i] += 1;
                    }
                    break;
                }
            }
        }
        boundaries.push(next);
    }
    ChainComplex::validate(boundaries).expect("orthogonal by construction")
}

fn in_column_span(m: &BinMatrix, v: &BitVec) -> bool {
    m.with_column(v).rank() == m.rank()
}

/// Minimum weight of a cycle at level `j` that is not a boundary, by
/// enumerating every vector of length `n_j`.
pub fn naive_homological_distance(c: &ChainComplex, j: usize) -> ExtNat {
    let n = c.dim(j);
    assert!(n <= 20, "naive oracle limited to 20 coordinates");
    let cycle_check = c.boundary(j);
    let image = c.boundary(j + 1);
    let mut best = ExtNat::Infinite;
    for w in 1u64..(1u64 << n) {
        let weight = ExtNat::Finite(u64::from(w.count_ones()));
        if weight >= best {
            continue;
        }
        let x = BitVec::from_support(n, (0..n).filter(|&i| w >> i & 1 == 1));
        if cycle_check.mul_vec(&x).unwrap().is_zero() && !in_column_span(image, &x) {
            best = weight;
        }
    }
    best
}

/// Minimum weight of a nonzero word in the kernel of `p`, by enumeration.
pub fn naive_classical_distance(p: &BinMatrix) -> ExtNat {
    let n = p.cols();
    assert!(n <= 20, "naive oracle limited to 20 coordinates");
    (1u64..(1u64 << n))
        .filter(|w| {
            let x = BitVec::from_support(n, (0..n).filter(|&i| w >> i & 1 == 1));
            p.mul_vec(&x).unwrap().is_zero()
        })
        .map(|w| ExtNat::Finite(u64::from(w.count_ones())))
        .min()
        .unwrap_or(ExtNat::Infinite)
}
