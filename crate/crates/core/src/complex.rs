//! Based chain complexes over GF(2).
//!
//! A complex of length `m` is a list of boundary matrices `A_1, ..., A_m`
//! where `A_j` has shape `n_{j-1} x n_j` and consecutive boundaries compose
//! to zero. Level `j` is the space of dimension `n_j`, for `0 <= j <= m`.
//! The trivial boundaries `A_0` (`0 x n_0`) and `A_{m+1}` (`n_m x 0`) are
//! stored explicitly, so every level has a boundary on each side.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf2::BinMatrix;

/// A natural number or infinity. Distances use `Infinite` for the minimum
/// over an empty set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtNat {
    Finite(u64),
    Infinite,
}

impl ExtNat {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtNat::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            ExtNat::Finite(v) => Some(v),
            ExtNat::Infinite => None,
        }
    }

    /// `self^exp`, with `inf^0 = 1`.
    pub fn pow(self, exp: u32) -> ExtNat {
        (0..exp).fold(ExtNat::Finite(1), |acc, _| acc * self)
    }
}

impl From<u64> for ExtNat {
    fn from(v: u64) -> Self {
        ExtNat::Finite(v)
    }
}

impl From<usize> for ExtNat {
    fn from(v: usize) -> Self {
        ExtNat::Finite(v as u64)
    }
}

impl Mul for ExtNat {
    type Output = ExtNat;

    // Distances are never zero, so inf * 0 does not arise; it is taken as inf.
    fn mul(self, rhs: ExtNat) -> ExtNat {
        match (self, rhs) {
            (ExtNat::Finite(a), ExtNat::Finite(b)) => ExtNat::Finite(a.saturating_mul(b)),
            _ => ExtNat::Infinite,
        }
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Finite(v) => write!(f, "{v}"),
            ExtNat::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtNat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtNat::Finite(v) => s.serialize_u64(*v),
            ExtNat::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtNat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(ExtNat::Finite(v)),
            Raw::Str(s) if s == "inf" => Ok(ExtNat::Infinite),
            Raw::Str(s) => Err(serde::de::Error::custom(format!(
                "expected integer or \"inf\", got {s:?}"
            ))),
        }
    }
}

/// Minimum over an iterator, `Infinite` when empty.
pub fn ext_min(values: impl IntoIterator<Item = ExtNat>) -> ExtNat {
    values.into_iter().min().unwrap_or(ExtNat::Infinite)
}

/// A strictly increasing set of coordinates within `[0, n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSet {
    members: Vec<usize>,
    ambient: usize,
}

impl IndexSet {
    /// Sorts `members`; duplicates or entries `>= ambient` are rejected.
    pub fn new(ambient: usize, mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        if let Some(&bad) = members.iter().find(|&&i| i >= ambient) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                len: ambient,
            });
        }
        if let Some(w) = members.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidSpec(format!(
                "duplicate index {} in index set",
                w[0]
            )));
        }
        Ok(Self { members, ambient })
    }

    pub fn all(ambient: usize) -> Self {
        Self {
            members: (0..ambient).collect(),
            ambient,
        }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    fn check_against(&self, cols: usize) -> Result<()> {
        if self.ambient > cols {
            if let Some(&bad) = self.members.iter().find(|&&i| i >= cols) {
                return Err(Error::IndexOutOfRange {
                    index: bad,
                    len: cols,
                });
            }
        }
        Ok(())
    }
}

/// Generator matrix of the punctured code: only the columns in `set` survive.
pub fn puncture(generator: &BinMatrix, set: &IndexSet) -> Result<BinMatrix> {
    set.check_against(generator.cols())?;
    Ok(generator.select_columns(set.members()))
}

/// Parity-check matrix `P[I]` of the code shortened to `set`.
pub fn shorten_parity(parity: &BinMatrix, set: &IndexSet) -> Result<BinMatrix> {
    set.check_against(parity.cols())?;
    Ok(parity.select_columns(set.members()))
}

/// A validated chain complex with its boundary ranks.
#[derive(Clone, PartialEq, Eq)]
pub struct ChainComplex {
    /// `m + 2` matrices; index 0 and `m + 1` are the empty end boundaries.
    boundaries: Vec<BinMatrix>,
    ranks: Vec<usize>,
}

impl ChainComplex {
    /// Checks shapes and orthogonality of `[A_1, ..., A_m]`.
    pub fn validate(boundaries: Vec<BinMatrix>) -> Result<Self> {
        if boundaries.is_empty() {
            return Err(Error::EmptyComplex);
        }
        for (k, pair) in boundaries.windows(2).enumerate() {
            if pair[0].cols() != pair[1].rows() {
                return Err(Error::DimensionMismatch(format!(
                    "A_{} is {}x{} but A_{} is {}x{}",
                    k + 1,
                    pair[0].rows(),
                    pair[0].cols(),
                    k + 2,
                    pair[1].rows(),
                    pair[1].cols()
                )));
            }
        }
        for (k, pair) in boundaries.windows(2).enumerate() {
            if !pair[0].multiply(&pair[1])?.is_zero() {
                return Err(Error::NotOrthogonal { level: k + 2 });
            }
        }
        Ok(Self::assemble(boundaries))
    }

    /// Wraps boundaries already known to be orthogonal, skipping the product check.
    pub(crate) fn from_orthogonal(inner: Vec<BinMatrix>) -> Self {
        debug_assert!(inner.windows(2).all(|w| w[0].cols() == w[1].rows()));
        Self::assemble(inner)
    }

    fn assemble(inner: Vec<BinMatrix>) -> Self {
        let n0 = inner[0].rows();
        let nm = inner[inner.len() - 1].cols();
        let mut boundaries = Vec::with_capacity(inner.len() + 2);
        boundaries.push(BinMatrix::zeros(0, n0));
        boundaries.extend(inner);
        boundaries.push(BinMatrix::zeros(nm, 0));
        let ranks = boundaries.iter().map(BinMatrix::rank).collect();
        Self { boundaries, ranks }
    }

    /// The 1-complex `K(P)` with levels of dimension `P.rows` and `P.cols`.
    pub fn one_complex(p: BinMatrix) -> Self {
        Self::assemble(vec![p])
    }

    /// Number of nontrivial boundaries `m`; levels run over `0..=m`.
    pub fn length(&self) -> usize {
        self.boundaries.len() - 2
    }

    /// Boundary `A_j` for `0 <= j <= m + 1`.
    pub fn boundary(&self, j: usize) -> &BinMatrix {
        &self.boundaries[j]
    }

    /// `[A_1, ..., A_m]`.
    pub fn boundaries(&self) -> &[BinMatrix] {
        &self.boundaries[1..self.boundaries.len() - 1]
    }

    pub fn into_boundaries(mut self) -> Vec<BinMatrix> {
        self.boundaries.pop();
        self.boundaries.remove(0);
        self.boundaries
    }

    pub fn boundary_rank(&self, j: usize) -> usize {
        self.ranks[j]
    }

    /// Dimension `n_j` of level `j`, zero outside `0..=m`.
    pub fn dim(&self, j: usize) -> usize {
        if j <= self.length() {
            self.boundaries[j].cols()
        } else {
            0
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.length()).map(|j| self.dim(j)).collect()
    }

    fn check_level(&self, j: usize) -> Result<()> {
        if j > self.length() {
            return Err(Error::LevelOutOfRange {
                level: j,
                length: self.length(),
            });
        }
        Ok(())
    }

    /// `k_j = n_j - rank A_j - rank A_{j+1}`.
    pub fn homology_rank(&self, j: usize) -> Result<usize> {
        self.check_level(j)?;
        Ok(self.dim(j) - self.ranks[j] - self.ranks[j + 1])
    }

    pub fn homology_ranks(&self) -> Vec<usize> {
        (0..=self.length())
            .map(|j| self.dim(j) - self.ranks[j] - self.ranks[j + 1])
            .collect()
    }

    /// Transposed boundaries in reverse order; level `j` maps to level `m - j`.
    pub fn cochain(&self) -> ChainComplex {
        let boundaries = self
            .boundaries
            .iter()
            .rev()
            .map(BinMatrix::transpose)
            .collect();
        let ranks = self.ranks.iter().rev().copied().collect();
        ChainComplex { boundaries, ranks }
    }

    /// Largest column and row weight over all boundaries.
    pub fn sparsity(&self) -> (usize, usize) {
        self.boundaries().iter().fold((0, 0), |(c, r), a| {
            let (ac, ar) = crate::codes::sparsity(a);
            (c.max(ac), r.max(ar))
        })
    }
}

impl fmt::Debug for ChainComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChainComplex")
            .field("dims", &self.dims())
            .field("ranks", &self.homology_ranks())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::BitVec;
    use crate::testing::random_complex;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn rep_pair() -> Vec<BinMatrix> {
        vec![
            BinMatrix::from_strs(&["11"]),
            BinMatrix::from_strs(&["1", "1"]),
        ]
    }

    #[test]
    fn validate_examples() {
        let p = BinMatrix::from_strs(&["101", "110"]);
        let c = ChainComplex::validate(vec![p.clone()]).unwrap();
        assert_eq!(c.length(), 1);
        assert_eq!(c.dims(), vec![2, 3]);

        let c = ChainComplex::validate(rep_pair()).unwrap();
        assert_eq!(c.dims(), vec![1, 2, 1]);

        let bad = vec![
            BinMatrix::from_strs(&["11"]),
            BinMatrix::from_strs(&["1", "0"]),
        ];
        assert!(matches!(
            ChainComplex::validate(bad),
            Err(Error::NotOrthogonal { level: 2 })
        ));

        let mismatched = vec![BinMatrix::from_strs(&["11"]), BinMatrix::from_strs(&["1"])];
        assert!(matches!(
            ChainComplex::validate(mismatched),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            ChainComplex::validate(vec![]),
            Err(Error::EmptyComplex)
        ));
    }

    #[test]
    fn homology_rank_examples() {
        let k = ChainComplex::one_complex(BinMatrix::from_strs(&["11"]));
        assert_eq!(k.homology_rank(0).unwrap(), 0);
        assert_eq!(k.homology_rank(1).unwrap(), 1);
        assert!(matches!(
            k.homology_rank(2),
            Err(Error::LevelOutOfRange {
                level: 2,
                length: 1
            })
        ));

        let zeros =
            ChainComplex::validate(vec![BinMatrix::zeros(3, 4), BinMatrix::zeros(4, 2)]).unwrap();
        assert_eq!(zeros.homology_ranks(), vec![3, 4, 2]);
    }

    #[test]
    fn empty_levels_have_zero_rank() {
        let c = ChainComplex::one_complex(BinMatrix::zeros(0, 3));
        assert_eq!(c.dims(), vec![0, 3]);
        assert_eq!(c.homology_ranks(), vec![0, 3]);
    }

    #[test]
    fn cochain_examples() {
        let p = BinMatrix::from_strs(&["110", "011"]);
        let k = ChainComplex::one_complex(p.clone());
        assert_eq!(k.cochain(), ChainComplex::one_complex(p.transpose()));
        let c = ChainComplex::validate(rep_pair()).unwrap();
        assert_eq!(c.cochain().cochain(), c);
    }

    #[test]
    fn puncture_examples() {
        let g = BinMatrix::from_strs(&["101"]);
        assert_eq!(puncture(&g, &IndexSet::all(3)).unwrap(), g);
        let i = IndexSet::new(3, vec![2, 0]).unwrap();
        assert_eq!(puncture(&g, &i).unwrap(), BinMatrix::from_strs(&["11"]));
        let none = IndexSet::new(3, vec![]).unwrap();
        assert_eq!(puncture(&g, &none).unwrap().shape(), (1, 0));
        let wide = IndexSet::new(5, vec![4]).unwrap();
        assert!(matches!(
            puncture(&g, &wide),
            Err(Error::IndexOutOfRange { index: 4, len: 3 })
        ));
        assert!(matches!(
            IndexSet::new(3, vec![3]),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn shorten_examples() {
        let p = BinMatrix::from_strs(&["110", "011"]);
        assert_eq!(shorten_parity(&p, &IndexSet::all(3)).unwrap(), p);
        let i = IndexSet::new(3, vec![0, 1]).unwrap();
        let s = shorten_parity(&p, &i).unwrap();
        assert_eq!(s, BinMatrix::from_strs(&["11", "01"]));
        // Full column rank: only the zero word survives shortening.
        let words: Vec<u32> = (0..4u32)
            .filter(|w| {
                s.mul_vec(&BitVec::from_bools(&[w & 1 == 1, w & 2 == 2]))
                    .unwrap()
                    .is_zero()
            })
            .collect();
        assert_eq!(words, vec![0]);
        assert_eq!(s.kernel_basis().dim(), 0);
    }

    #[test]
    fn ext_nat_arithmetic() {
        use ExtNat::*;
        assert_eq!(Finite(3).min(Infinite), Finite(3));
        assert_eq!(Finite(3) * Infinite, Infinite);
        assert_eq!(Infinite * Infinite, Infinite);
        assert_eq!(Finite(3) * Finite(4), Finite(12));
        assert_eq!(ext_min([]), Infinite);
        assert_eq!(Finite(2).pow(3), Finite(8));
        assert_eq!(serde_json::to_string(&Infinite).unwrap(), "\"inf\"");
        assert_eq!(serde_json::from_str::<ExtNat>("7").unwrap(), Finite(7));
        assert_eq!(serde_json::from_str::<ExtNat>("\"inf\"").unwrap(), Infinite);
    }

    proptest! {
        #[test]
        fn rank_sum_telescopes(seed in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let c = random_complex(&mut rng, 3, 7);
            let total_k: usize = c.homology_ranks().iter().sum();
            let total_n: usize = c.dims().iter().sum();
            let total_rank: usize = (1..=c.length()).map(|j| c.boundary_rank(j)).sum();
            prop_assert_eq!(total_k, total_n - 2 * total_rank);
        }

        #[test]
        fn boundaries_are_cycles(seed in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let c = random_complex(&mut rng, 3, 7);
            for j in 0..c.length() {
                let next = c.boundary(j + 1);
                let prod = c.boundary(j).multiply(next).unwrap();
                prop_assert!(prod.is_zero());
            }
        }

        #[test]
        fn cochain_mirrors_ranks(seed in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let c = random_complex(&mut rng, 3, 7);
            let co = c.cochain();
            let m = c.length();
            for j in 0..=m {
                prop_assert_eq!(co.homology_rank(m - j).unwrap(), c.homology_rank(j).unwrap());
            }
        }

        #[test]
        fn shortening_matches_restricted_codewords(
            seed in any::<u64>(),
            rows in 1usize..5,
            cols in 1usize..=12,
            mask in any::<u16>(),
        ) {
            use rand::Rng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let p = BinMatrix::from_entries(
                rows,
                cols,
                (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).collect::<Vec<_>>().into_iter().filter(|_| rng.gen_bool(0.5)),
            );
            let set = IndexSet::new(cols, (0..cols).filter(|&i| mask >> i & 1 == 1).collect()).unwrap();
            let short = shorten_parity(&p, &set).unwrap();
            let outside: Vec<usize> = (0..cols).filter(|i| !set.members().contains(i)).collect();
            let mut from_code = std::collections::BTreeSet::new();
            for w in 0u32..(1 << cols) {
                let c = BitVec::from_support(cols, (0..cols).filter(|&i| w >> i & 1 == 1));
                if p.mul_vec(&c).unwrap().is_zero() && outside.iter().all(|&i| !c.get(i)) {
                    from_code.insert(c.select(set.members()).to_string());
                }
            }
            let mut from_parity = std::collections::BTreeSet::new();
            for w in 0u32..(1 << set.len()) {
                let c = BitVec::from_support(set.len(), (0..set.len()).filter(|&i| w >> i & 1 == 1));
                if short.mul_vec(&c).unwrap().is_zero() {
                    from_parity.insert(c.to_string());
                }
            }
            prop_assert_eq!(from_code, from_parity);
        }
    }
}
