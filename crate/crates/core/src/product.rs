//! Tensor products of chain complexes and the parameter formulas they obey.
//!
//! Level `l` of `A x B` is the direct sum of `A_i (x) B_{l-i}`. Blocks are laid
//! out in order of increasing `i`, and inside a block the coordinate of
//! `a (x) b` is `index(a) * n_{l-i}(B) + index(b)`, matching `kron`. The
//! boundary sends `a (x) b` to `da (x) b + a (x) db`; signs vanish over GF(2).

use serde::Serialize;

use crate::complex::{ext_min, ChainComplex, ExtNat};
use crate::distance;
use crate::error::{Error, Result};
use crate::gf2::BinMatrix;

/// One summand `A_i (x) B_{j-i}` of a product level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    pub a_level: usize,
    pub b_level: usize,
    pub offset: usize,
    pub width: usize,
}

/// Direct-sum decomposition of one level of a product, in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductLayout {
    pub level: usize,
    pub blocks: Vec<Block>,
}

impl ProductLayout {
    pub fn new(a: &ChainComplex, b: &ChainComplex, level: usize) -> Self {
        let (ma, mb) = (a.length(), b.length());
        let mut blocks = Vec::new();
        let mut offset = 0;
        for i in level.saturating_sub(mb)..=level.min(ma) {
            let width = a.dim(i) * b.dim(level - i);
            blocks.push(Block {
                a_level: i,
                b_level: level - i,
                offset,
                width,
            });
            offset += width;
        }
        Self { level, blocks }
    }

    pub fn width(&self) -> usize {
        self.blocks.iter().map(|b| b.width).sum()
    }

    fn find(&self, a_level: usize) -> Option<&Block> {
        self.blocks.iter().find(|b| b.a_level == a_level)
    }
}

/// `A x B`, a complex of length `m_A + m_B`.
pub fn tensor_product(a: &ChainComplex, b: &ChainComplex) -> ChainComplex {
    let len = a.length() + b.length();
    let layouts: Vec<ProductLayout> = (0..=len).map(|l| ProductLayout::new(a, b, l)).collect();
    let mut boundaries = Vec::with_capacity(len);
    for l in 1..=len {
        let (rows, cols) = (&layouts[l - 1], &layouts[l]);
        let mut m = BinMatrix::zeros(rows.width(), cols.width());
        for block in &cols.blocks {
            let (i, k) = (block.a_level, block.b_level);
            if i >= 1 {
                if let Some(target) = rows.find(i - 1) {
                    let piece = a.boundary(i).kron(&BinMatrix::identity(b.dim(k)));
                    m.paste(target.offset, block.offset, &piece);
                }
            }
            if k >= 1 {
                if let Some(target) = rows.find(i) {
                    let piece = BinMatrix::identity(a.dim(i)).kron(b.boundary(k));
                    m.paste(target.offset, block.offset, &piece);
                }
            }
        }
        boundaries.push(m);
    }
    ChainComplex::from_orthogonal(boundaries)
}

/// `A x K(P)` assembled directly from its block form.
///
/// With the canonical layout, level `j + 1` has blocks `[A_j (x) K_1, A_{j+1} (x) K_0]`
/// and
///
/// ```text
/// C_{j+1} = | A_j (x) E_c        0            |
///           | E_{n_j} (x) P   A_{j+1} (x) E_r |
/// ```
///
/// which is the usual upper-triangular form with both block rows and both
/// block columns swapped. At `j = 0` the first block row is empty, and at
/// `j = m` the second block column is.
pub fn one_complex_product(a: &ChainComplex, p: &BinMatrix) -> ChainComplex {
    let (r, c) = p.shape();
    let m = a.length();
    let (er, ec) = (BinMatrix::identity(r), BinMatrix::identity(c));
    let mut boundaries = Vec::with_capacity(m + 1);
    for j in 0..=m {
        let upper_rows = if j == 0 { 0 } else { a.dim(j - 1) * c };
        let lower_rows = a.dim(j) * r;
        let left_cols = a.dim(j) * c;
        let right_cols = a.dim(j + 1) * r;
        let mut block = BinMatrix::zeros(upper_rows + lower_rows, left_cols + right_cols);
        block.paste(0, 0, &a.boundary(j).kron(&ec));
        block.paste(upper_rows, 0, &BinMatrix::identity(a.dim(j)).kron(p));
        block.paste(upper_rows, left_cols, &a.boundary(j + 1).kron(&er));
        boundaries.push(block);
    }
    ChainComplex::from_orthogonal(boundaries)
}

/// `n_j(A x B) = sum_i n_i(A) n_{j-i}(B)`.
pub fn product_dimensions(a: &ChainComplex, b: &ChainComplex, j: usize) -> usize {
    (0..=j).map(|i| a.dim(i) * b.dim(j - i)).sum()
}

/// `k_j(A x B) = sum_i k_i(A) k_{j-i}(B)`.
pub fn kunneth_ranks(a: &ChainComplex, b: &ChainComplex, j: usize) -> usize {
    let ka = a.homology_ranks();
    let kb = b.homology_ranks();
    (0..=j)
        .filter_map(|i| Some(ka.get(i)? * kb.get(j - i)?))
        .sum()
}

fn level_distance(d: &[ExtNat], j: Option<usize>) -> ExtNat {
    j.and_then(|j| d.get(j).copied())
        .unwrap_or(ExtNat::Infinite)
}

/// `min_i d_i(A) d_{j-i}(B)`; infinite when no term is finite.
pub fn distance_upper_bound(d_a: &[ExtNat], d_b: &[ExtNat], j: usize) -> ExtNat {
    ext_min((0..=j).map(|i| level_distance(d_a, Some(i)) * level_distance(d_b, Some(j - i))))
}

/// What the distance formulas need to know about a seed matrix `P`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OneComplexParams {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    /// Distance of the classical code with parity check `P`.
    pub delta: ExtNat,
}

impl OneComplexParams {
    pub fn new(rows: usize, cols: usize, rank: usize, delta: ExtNat) -> Self {
        Self {
            rows,
            cols,
            rank,
            delta,
        }
    }

    /// Computes rank and classical distance of `p`; fails if the kernel of `p`
    /// is too large to enumerate.
    pub fn of(p: &BinMatrix, cap: usize) -> Result<Self> {
        Ok(Self {
            rows: p.rows(),
            cols: p.cols(),
            rank: p.rank(),
            delta: distance::classical_distance(p, cap)?,
        })
    }

    /// `d_0(K(P))`: 1 when `P` lacks full row rank, infinite otherwise.
    pub fn d0(&self) -> ExtNat {
        if self.rows > self.rank {
            ExtNat::Finite(1)
        } else {
            ExtNat::Infinite
        }
    }

    /// Per-level distances `[d_0, d_1]` of `K(P)`.
    pub fn distances(&self) -> [ExtNat; 2] {
        [self.d0(), self.delta]
    }
}

/// Lower bound on `d_j(A x K(P))` from the distances of `A`.
pub fn one_complex_lower_bound(d_a: &[ExtNat], p: &OneComplexParams, j: usize) -> ExtNat {
    let dj = level_distance(d_a, Some(j));
    let dprev = level_distance(d_a, j.checked_sub(1));
    if p.rows > p.rank {
        dj.min(dprev * p.delta)
    } else {
        dprev * p.delta
    }
}

/// `d_j(A x K(P)) = min(d_{j-1}(A) delta, d_j(A) d_0(K(P)))`.
pub fn one_complex_distance(d_a: &[ExtNat], p: &OneComplexParams, j: usize) -> ExtNat {
    let dj = level_distance(d_a, Some(j));
    let dprev = level_distance(d_a, j.checked_sub(1));
    (dprev * p.delta).min(dj * p.d0())
}

/// Lower and upper distance bounds, plus the exact value when it is known in closed form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceBounds {
    pub lower: ExtNat,
    pub upper: ExtNat,
    pub exact_prediction: Option<ExtNat>,
}

impl DistanceBounds {
    /// Bounds for `A x K(P)` at level `j`.
    pub fn for_one_complex(d_a: &[ExtNat], p: &OneComplexParams, j: usize) -> Self {
        Self {
            lower: one_complex_lower_bound(d_a, p, j),
            upper: distance_upper_bound(d_a, &p.distances(), j),
            exact_prediction: Some(one_complex_distance(d_a, p, j)),
        }
    }

    /// Bounds for a general product: trivial lower bound, product upper bound.
    pub fn for_product(d_a: &[ExtNat], d_b: &[ExtNat], j: usize) -> Self {
        let upper = distance_upper_bound(d_a, d_b, j);
        let lower = if upper.is_finite() {
            ExtNat::Finite(1)
        } else {
            ExtNat::Infinite
        };
        Self {
            lower,
            upper,
            exact_prediction: None,
        }
    }

    pub fn contains(&self, d: ExtNat) -> bool {
        self.lower <= d && d <= self.upper
    }
}

/// `K(P)^a x K(P^T)^b`, assembled by repeated products with 1-complexes.
pub fn power_complex(p: &BinMatrix, a: usize, b: usize) -> Result<ChainComplex> {
    if a + b == 0 {
        return Err(Error::InvalidExponents);
    }
    let pt = p.transpose();
    let mut seeds = std::iter::repeat_n(p, a).chain(std::iter::repeat_n(&pt, b));
    let first = seeds.next().expect("a + b >= 1");
    let mut complex = ChainComplex::one_complex(first.clone());
    for seed in seeds {
        complex = one_complex_product(&complex, seed);
    }
    Ok(complex)
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Closed-form `n_a(K^(a,b))` for an `r x c` seed: `sum_i C(a,i) C(b,i) c^(a+b-2i) r^(2i)`.
///
/// Term `i` counts the summands with `i` factors of `K(P)` at level 0 and
/// `i` factors of `K(P^T)` at level 1.
pub fn power_level_dimension(r: u64, c: u64, a: u32, b: u32) -> u64 {
    (0..=a.min(b))
        .map(|i| {
            binomial(u64::from(a), u64::from(i))
                * binomial(u64::from(b), u64::from(i))
                * c.pow(a + b - 2 * i)
                * r.pow(2 * i)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{random_complex, random_matrix};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use ExtNat::{Finite, Infinite};

    fn rep2() -> BinMatrix {
        BinMatrix::from_strs(&["11"])
    }

    #[test]
    fn small_hypergraph_product() {
        let p = rep2();
        let a = ChainComplex::one_complex(p.clone());
        let b = ChainComplex::one_complex(p.transpose());
        let c = tensor_product(&a, &b);
        assert_eq!(c.dims(), vec![2, 5, 2]);
        assert_eq!(product_dimensions(&a, &b, 1), 5);
        assert_eq!(product_dimensions(&a, &b, 0), a.dim(0) * b.dim(0));
        assert_eq!(kunneth_ranks(&a, &b, 1), 1);
        assert_eq!(c.homology_ranks(), vec![0, 1, 0]);
        assert!(ChainComplex::validate(c.boundaries().to_vec()).is_ok());
    }

    #[test]
    fn product_with_identity_kills_homology() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let a = random_complex(&mut rng, 3, 6);
            let c = one_complex_product(&a, &BinMatrix::identity(1));
            for j in 0..=c.length() {
                let prev = j.checked_sub(1).map_or(0, |i| a.dim(i));
                assert_eq!(c.dim(j), prev + a.dim(j));
                assert_eq!(c.homology_rank(j).unwrap(), 0);
            }
        }
    }

    #[test]
    fn one_complex_product_small_blocks() {
        let a = ChainComplex::one_complex(rep2());
        let c = one_complex_product(&a, &rep2());
        assert_eq!(c.boundary(1).shape(), (1, 4));
        assert_eq!(c.boundary(2).shape(), (4, 4));
        assert!(c.boundary(1).multiply(c.boundary(2)).unwrap().is_zero());

        let c = one_complex_product(&a, &rep2().transpose());
        assert_eq!(c.boundary(1).shape(), (2, 5));
        assert_eq!(c.boundary(2).shape(), (5, 2));
        assert!(c.boundary(1).multiply(c.boundary(2)).unwrap().is_zero());
        // Level 1 blocks: A_0 (x) K_1 (width 1), A_1 (x) K_0 (width 4).
        assert_eq!(c.boundary(1), &BinMatrix::from_strs(&["11010", "10101"]));
    }

    #[test]
    fn zero_column_seed_gives_disjoint_copies() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let a = random_complex(&mut rng, 2, 5);
        let p = BinMatrix::zeros(3, 0);
        let c = one_complex_product(&a, &p);
        for j in 0..=a.length() {
            assert_eq!(c.dim(j), a.dim(j) * 3);
            assert_eq!(c.homology_rank(j).unwrap(), a.homology_rank(j).unwrap() * 3);
        }
        assert_eq!(c.dim(a.length() + 1), 0);
    }

    #[test]
    fn upper_bound_examples() {
        let d_a = [Infinite, Finite(2)];
        let d_b = [Finite(1), Infinite];
        assert_eq!(distance_upper_bound(&d_a, &d_b, 1), Finite(2));
        assert_eq!(distance_upper_bound(&d_a, &d_b, 7), Infinite);
        assert_eq!(
            distance_upper_bound(&[Finite(3)], &[Infinite, Finite(5)], 1),
            Finite(15)
        );
    }

    #[test]
    fn lower_bound_cases() {
        let d_a = [Finite(4), Finite(3), Finite(5)];
        // P = [1 1]: r = u = 1, delta = 2.
        let p = OneComplexParams::new(1, 2, 1, Finite(2));
        assert_eq!(one_complex_lower_bound(&d_a, &p, 1), Finite(8));
        assert_eq!(one_complex_lower_bound(&d_a, &p, 0), Infinite);
        // P = [1;1]: r = 2 > u = 1, delta = inf.
        let q = OneComplexParams::new(2, 1, 1, Infinite);
        assert_eq!(one_complex_lower_bound(&d_a, &q, 1), Finite(3));
        assert_eq!(one_complex_lower_bound(&d_a, &q, 3), Infinite);
    }

    #[test]
    fn three_formulas_coincide_for_one_complexes() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let len = rng.gen_range(1..4);
            let d_a: Vec<ExtNat> = (0..=len)
                .map(|_| {
                    if rng.gen_bool(0.3) {
                        Infinite
                    } else {
                        Finite(rng.gen_range(1..6))
                    }
                })
                .collect();
            let rows = rng.gen_range(1..4);
            let rank = rng.gen_range(0..=rows);
            let delta = if rng.gen_bool(0.3) {
                Infinite
            } else {
                Finite(rng.gen_range(1..5))
            };
            let p = OneComplexParams::new(rows, 4, rank, delta);
            for j in 0..=len + 1 {
                let bounds = DistanceBounds::for_one_complex(&d_a, &p, j);
                assert_eq!(bounds.lower, bounds.upper);
                assert_eq!(bounds.exact_prediction, Some(bounds.lower));
            }
        }
    }

    #[test]
    fn exact_formula_on_small_products() {
        let p = OneComplexParams::of(&rep2(), 28).unwrap();
        // K([1 1]) has distances (inf, 2).
        assert_eq!(
            one_complex_distance(
                &[Infinite, Finite(2)],
                &OneComplexParams::of(&rep2().transpose(), 28).unwrap(),
                1
            ),
            Finite(2)
        );
        assert_eq!(p.delta, Finite(2));
        // Circulant L=3 factors: (1, 3) x K(P^T) with d(K(P^T)) = (1, 3).
        let circ = BinMatrix::from_strs(&["110", "011", "101"]);
        let q = OneComplexParams::of(&circ.transpose(), 28).unwrap();
        assert_eq!(
            one_complex_distance(&[Finite(1), Finite(3)], &q, 1),
            Finite(3)
        );
    }

    #[test]
    fn power_rejects_zero_exponents() {
        assert!(matches!(
            power_complex(&rep2(), 0, 0),
            Err(Error::InvalidExponents)
        ));
    }

    #[test]
    fn power_matches_tensor_fold() {
        let p = BinMatrix::from_strs(&["110", "011"]);
        for (a, b) in [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (2, 2)] {
            let built = power_complex(&p, a, b).unwrap();
            let pt = p.transpose();
            let seeds: Vec<&BinMatrix> = std::iter::repeat_n(&p, a)
                .chain(std::iter::repeat_n(&pt, b))
                .collect();
            let mut folded = ChainComplex::one_complex(seeds[0].clone());
            for s in &seeds[1..] {
                folded = tensor_product(&folded, &ChainComplex::one_complex((*s).clone()));
            }
            assert_eq!(built, folded, "(a, b) = ({a}, {b})");
        }
    }

    #[test]
    fn power_level_dimension_closed_form() {
        for (r, c) in [(1u64, 2u64), (2, 3), (3, 4)] {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(r * 10 + c);
            let p = random_matrix(&mut rng, r as usize, c as usize, 0.5);
            for (a, b) in [(1u32, 0u32), (0, 1), (1, 1), (2, 1), (1, 2), (2, 2), (3, 1)] {
                let k = power_complex(&p, a as usize, b as usize).unwrap();
                assert_eq!(
                    k.dim(a as usize) as u64,
                    power_level_dimension(r, c, a, b),
                    "r={r} c={c} a={a} b={b}"
                );
                assert!(power_level_dimension(r, c, a, b) < (r + c).pow(a + b));
            }
        }
    }

    #[test]
    fn swapped_exponent_form_agrees_only_when_balanced() {
        // `sum_i C(a,i) C(b,i) c^(2i) r^(a+b-2i)` is the same count with the
        // roles of r and c exchanged; it coincides for a = b only.
        let swapped = |r: u64, c: u64, a: u32, b: u32| power_level_dimension(c, r, a, b);
        assert_eq!(swapped(1, 2, 1, 1), power_level_dimension(1, 2, 1, 1));
        assert_eq!(swapped(1, 2, 2, 2), power_level_dimension(1, 2, 2, 2));
        assert_eq!(power_level_dimension(1, 2, 2, 1), 12);
        assert_eq!(swapped(1, 2, 2, 1), 9);
        let k = power_complex(&rep2(), 2, 1).unwrap();
        assert_eq!(k.dim(2), 12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn products_validate_and_follow_kunneth(seed in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let a = random_complex(&mut rng, 2, 5);
            let b = random_complex(&mut rng, 2, 5);
            let c = tensor_product(&a, &b);
            prop_assert!(ChainComplex::validate(c.boundaries().to_vec()).is_ok());
            for j in 0..=c.length() {
                prop_assert_eq!(c.dim(j), product_dimensions(&a, &b, j));
                prop_assert_eq!(c.homology_rank(j).unwrap(), kunneth_ranks(&a, &b, j));
            }
        }

        #[test]
        fn block_form_equals_tensor_product(seed in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let a = random_complex(&mut rng, 3, 5);
            let (r, c) = (rng.gen_range(0..5), rng.gen_range(0..5));
            let p = random_matrix(&mut rng, r, c, 0.5);
            prop_assert_eq!(one_complex_product(&a, &p), tensor_product(&a, &ChainComplex::one_complex(p)));
        }

        #[test]
        fn fold_order_preserves_parameters(seed in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let a = random_complex(&mut rng, 2, 3);
            let b = random_complex(&mut rng, 1, 3);
            let c = random_complex(&mut rng, 1, 3);
            let left = tensor_product(&tensor_product(&a, &b), &c);
            let right = tensor_product(&a, &tensor_product(&b, &c));
            let swapped = tensor_product(&tensor_product(&c, &a), &b);
            prop_assert_eq!(left.dims(), right.dims());
            prop_assert_eq!(left.homology_ranks(), right.homology_ranks());
            prop_assert_eq!(left.dims(), swapped.dims());
            prop_assert_eq!(left.homology_ranks(), swapped.homology_ranks());
        }
    }
}
