//! CSS codes read off a complex level, their parameters, and seed matrices.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::{ChainComplex, ExtNat};
use crate::distance::{self, DistanceQuery};
use crate::error::{Error, Result};
use crate::gf2::BinMatrix;
use crate::product::DistanceBounds;

/// A CSS code with `G_X * G_Z^T = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CssCode {
    g_x: BinMatrix,
    g_z: BinMatrix,
    level: Option<usize>,
}

impl CssCode {
    pub fn new(g_x: BinMatrix, g_z: BinMatrix) -> Result<Self> {
        if g_x.cols() != g_z.cols() {
            return Err(Error::DimensionMismatch(format!(
                "G_X has {} columns but G_Z has {}",
                g_x.cols(),
                g_z.cols()
            )));
        }
        if !g_x.multiply(&g_z.transpose())?.is_zero() {
            return Err(Error::NotOrthogonal { level: 2 });
        }
        Ok(Self {
            g_x,
            g_z,
            level: None,
        })
    }

    pub fn g_x(&self) -> &BinMatrix {
        &self.g_x
    }

    pub fn g_z(&self) -> &BinMatrix {
        &self.g_z
    }

    pub fn n(&self) -> usize {
        self.g_x.cols()
    }

    /// Level of the complex this code was read from, if any.
    pub fn level(&self) -> Option<usize> {
        self.level
    }

    pub fn k(&self) -> usize {
        self.n() - self.g_x.rank() - self.g_z.rank()
    }

    /// The 2-complex `[G_X, G_Z^T]`, whose level 1 carries the qubits.
    pub fn to_complex(&self) -> ChainComplex {
        ChainComplex::from_orthogonal(vec![self.g_x.clone(), self.g_z.transpose()])
    }
}

/// `G_X = A_j`, `G_Z = A_{j+1}^T`.
pub fn extract_css(c: &ChainComplex, j: usize) -> Result<CssCode> {
    if j > c.length() {
        return Err(Error::LevelOutOfRange {
            level: j,
            length: c.length(),
        });
    }
    Ok(CssCode {
        g_x: c.boundary(j).clone(),
        g_z: c.boundary(j + 1).transpose(),
        level: Some(j),
    })
}

/// A distance known exactly, or only up to an interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceInterval {
    pub lower: ExtNat,
    pub upper: ExtNat,
    pub exact: bool,
}

impl DistanceInterval {
    pub fn exact(value: ExtNat) -> Self {
        Self {
            lower: value,
            upper: value,
            exact: true,
        }
    }

    pub fn bounded(lower: ExtNat, upper: ExtNat) -> Self {
        Self {
            lower,
            upper,
            exact: lower == upper,
        }
    }

    pub fn value(&self) -> Option<ExtNat> {
        self.exact.then_some(self.lower)
    }

    pub fn min(self, other: Self) -> Self {
        let lower = self.lower.min(other.lower);
        let upper = self.upper.min(other.upper);
        Self {
            lower,
            upper,
            exact: lower == upper,
        }
    }
}

impl fmt::Display for DistanceInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exact {
            write!(f, "{}", self.lower)
        } else {
            write!(f, "[{}, {}]", self.lower, self.upper)
        }
    }
}

/// `[[n, k, d]]` together with the two conjugate distances.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CodeParameters {
    pub n: usize,
    pub k: usize,
    /// Homological distance `d_j` (Z-type logicals).
    pub d_z: DistanceInterval,
    /// Cohomological distance `d~_j` (X-type logicals).
    pub d_x: DistanceInterval,
    pub d: DistanceInterval,
    /// Rows of `G_X` and `G_Z` beyond their rank.
    pub redundancy_x: usize,
    pub redundancy_z: usize,
}

impl fmt::Display for CodeParameters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}, {}]]", self.n, self.k, self.d)
    }
}

/// Exact parameters where the kernels fit under `cap`, intervals otherwise.
pub fn parameters(code: &CssCode, cap: usize) -> CodeParameters {
    parameters_with_bounds(code, cap, None, None)
}

/// As [`parameters`], narrowing the fallback intervals with known bounds on `d_z` and `d_x`.
pub fn parameters_with_bounds(
    code: &CssCode,
    cap: usize,
    hint_z: Option<DistanceBounds>,
    hint_x: Option<DistanceBounds>,
) -> CodeParameters {
    let complex = code.to_complex();
    let k = complex.homology_rank(1).expect("level 1 exists");
    let d_z = side_distance(&complex, DistanceQuery::new(1).with_cap(cap), k, hint_z);
    let d_x = side_distance(
        &complex,
        DistanceQuery::cohomology(1).with_cap(cap),
        k,
        hint_x,
    );
    CodeParameters {
        n: code.n(),
        k,
        d_z,
        d_x,
        d: d_z.min(d_x),
        redundancy_x: code.g_x.rows() - complex.boundary_rank(1),
        redundancy_z: code.g_z.rows() - complex.boundary_rank(2),
    }
}

fn side_distance(
    c: &ChainComplex,
    q: DistanceQuery,
    k: usize,
    hint: Option<DistanceBounds>,
) -> DistanceInterval {
    if k == 0 {
        return DistanceInterval::exact(ExtNat::Infinite);
    }
    let q = match hint {
        Some(b) => q.with_lower_bound(b.lower),
        None => q,
    };
    match distance::distance(c, &q) {
        Ok(r) => DistanceInterval::exact(r.value),
        Err(_) => {
            let (lower, upper) = hint.map_or((ExtNat::Finite(1), ExtNat::Infinite), |b| {
                (b.lower, b.upper)
            });
            let upper = upper.min(basis_upper_bound(c, &q));
            DistanceInterval::bounded(lower.max(ExtNat::Finite(1)), upper)
        }
    }
}

/// Lightest kernel basis vector that is not a boundary; some basis vector
/// always qualifies when the homology is nontrivial.
fn basis_upper_bound(c: &ChainComplex, q: &DistanceQuery) -> ExtNat {
    let (complex, level) = match q.mode {
        distance::DistanceMode::Homology => (c.clone(), q.level),
        distance::DistanceMode::Cohomology => (c.cochain(), c.length() - q.level),
    };
    let image = complex.boundary(level + 1).column_space_basis();
    complex
        .boundary(level)
        .kernel_basis()
        .vectors()
        .iter()
        .filter(|v| !image.contains(v))
        .map(|v| ExtNat::Finite(v.weight() as u64))
        .min()
        .unwrap_or(ExtNat::Infinite)
}

/// `(max column weight, max row weight)`.
pub fn sparsity(m: &BinMatrix) -> (usize, usize) {
    (
        m.col_weights().into_iter().max().unwrap_or(0),
        m.row_weights().into_iter().max().unwrap_or(0),
    )
}

/// Seed-matrix families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ensemble {
    /// `cols * col_weight / row_weight` rows, every column of weight
    /// `col_weight` and every row of weight `row_weight`.
    Gallager {
        col_weight: usize,
        row_weight: usize,
        cols: usize,
    },
    /// `L x L` with ones at `(i, i)` and `(i, i + 1 mod L)`.
    CirculantRepetition {
        len: usize,
    },
    /// `(L - 1) x L` with ones at `(i, i)` and `(i, i + 1)`; full row rank.
    Repetition {
        len: usize,
    },
    Identity {
        n: usize,
    },
    File(PathBuf),
}

impl FromStr for Ensemble {
    type Err = Error;

    /// Parses `gallager:U,W,C`, `rep:L`, `reppath:L`, `id:N` or `file:PATH`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidSpec(format!("expected KIND:ARGS, got {s:?}")))?;
        let ints = || -> Result<Vec<usize>> {
            args.split(',')
                .map(|t| {
                    t.trim()
                        .parse()
                        .map_err(|_| Error::InvalidSpec(format!("bad integer {t:?} in {s:?}")))
                })
                .collect()
        };
        let one = || -> Result<usize> {
            match ints()?.as_slice() {
                [v] => Ok(*v),
                _ => Err(Error::InvalidSpec(format!("{kind} takes one integer"))),
            }
        };
        match kind {
            "gallager" => match ints()?.as_slice() {
                &[col_weight, row_weight, cols] => Ok(Ensemble::Gallager {
                    col_weight,
                    row_weight,
                    cols,
                }),
                _ => Err(Error::InvalidSpec(
                    "gallager takes col_weight,row_weight,cols".into(),
                )),
            },
            "rep" => Ok(Ensemble::CirculantRepetition { len: one()? }),
            "reppath" => Ok(Ensemble::Repetition { len: one()? }),
            "id" => Ok(Ensemble::Identity { n: one()? }),
            "file" => Ok(Ensemble::File(PathBuf::from(args))),
            other => Err(Error::InvalidSpec(format!(
                "unknown ensemble kind {other:?}"
            ))),
        }
    }
}

impl fmt::Display for Ensemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ensemble::Gallager {
                col_weight,
                row_weight,
                cols,
            } => write!(f, "gallager:{col_weight},{row_weight},{cols}"),
            Ensemble::CirculantRepetition { len } => write!(f, "rep:{len}"),
            Ensemble::Repetition { len } => write!(f, "reppath:{len}"),
            Ensemble::Identity { n } => write!(f, "id:{n}"),
            Ensemble::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnsembleSpec {
    pub kind: Ensemble,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn new(kind: Ensemble, seed: u64) -> Self {
        Self { kind, seed }
    }
}

/// Builds a seed matrix. Random ensembles draw from ChaCha8 seeded with
/// `spec.seed`, so output is identical across platforms.
pub fn generate_matrix(spec: &EnsembleSpec) -> Result<BinMatrix> {
    match &spec.kind {
        &Ensemble::Gallager {
            col_weight,
            row_weight,
            cols,
        } => gallager(col_weight, row_weight, cols, spec.seed),
        &Ensemble::CirculantRepetition { len } => {
            if len == 0 {
                return Err(Error::InvalidSpec(
                    "circulant repetition needs L >= 1".into(),
                ));
            }
            Ok(BinMatrix::from_entries(
                len,
                len,
                (0..len).flat_map(|i| [(i, i), (i, (i + 1) % len)]),
            ))
        }
        &Ensemble::Repetition { len } => {
            if len == 0 {
                return Err(Error::InvalidSpec("repetition needs L >= 1".into()));
            }
            Ok(BinMatrix::from_entries(
                len - 1,
                len,
                (0..len - 1).flat_map(|i| [(i, i), (i, i + 1)]),
            ))
        }
        &Ensemble::Identity { n } => Ok(BinMatrix::identity(n)),
        Ensemble::File(path) => crate::io::read_alist_file(path),
    }
}

/// Gallager's construction: `col_weight` strips of `cols / row_weight` rows.
/// The first strip has row `i` covering columns `i*w .. (i+1)*w`; each later
/// strip is the first with its columns permuted by a uniform random
/// permutation (Fisher-Yates, high index first, with `gen_range` on `u64`).
fn gallager(col_weight: usize, row_weight: usize, cols: usize, seed: u64) -> Result<BinMatrix> {
    if col_weight == 0 || row_weight == 0 || cols == 0 {
        return Err(Error::InvalidSpec(
            "gallager weights and length must be positive".into(),
        ));
    }
    if !cols.is_multiple_of(row_weight) {
        return Err(Error::InvalidSpec(format!(
            "gallager needs cols ({cols}) divisible by row weight ({row_weight})"
        )));
    }
    let strip = cols / row_weight;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = BinMatrix::zeros(strip * col_weight, cols);
    let mut perm: Vec<usize> = (0..cols).collect();
    for s in 0..col_weight {
        if s > 0 {
            for i in (1..cols).rev() {
                let j = rng.gen_range(0..=i as u64) as usize;
                perm.swap(i, j);
            }
        }
        for i in 0..strip {
            for t in 0..row_weight {
                m.set(s * strip + i, perm[i * row_weight + t], true);
            }
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::classical_distance;
    use crate::product::{power_complex, tensor_product};
    use crate::testing::random_complex;
    use proptest::prelude::*;

    fn circulant(l: usize) -> BinMatrix {
        generate_matrix(&EnsembleSpec::new(
            Ensemble::CirculantRepetition { len: l },
            0,
        ))
        .unwrap()
    }

    #[test]
    fn five_one_two_code() {
        let c = power_complex(&BinMatrix::from_strs(&["11"]), 1, 1).unwrap();
        let code = extract_css(&c, 1).unwrap();
        let params = parameters(&code, 28);
        assert_eq!((params.n, params.k), (5, 1));
        assert_eq!(params.d_x, DistanceInterval::exact(ExtNat::Finite(2)));
        assert_eq!(params.d_z, DistanceInterval::exact(ExtNat::Finite(2)));
        assert_eq!(params.to_string(), "[[5, 1, 2]]");
    }

    #[test]
    fn toric_code_parameters() {
        let p = circulant(3);
        let c = tensor_product(
            &ChainComplex::one_complex(p.clone()),
            &ChainComplex::one_complex(p.transpose()),
        );
        let params = parameters(&extract_css(&c, 1).unwrap(), 28);
        assert_eq!(params.to_string(), "[[18, 2, 3]]");
        assert_eq!(params.d_x.value(), Some(ExtNat::Finite(3)));
        assert_eq!(params.d_z.value(), Some(ExtNat::Finite(3)));
        assert_eq!((params.redundancy_x, params.redundancy_z), (1, 1));
    }

    #[test]
    fn end_levels() {
        let p = BinMatrix::from_strs(&["11", "11"]);
        let c = ChainComplex::one_complex(p);
        let code = extract_css(&c, 0).unwrap();
        assert_eq!(code.g_x().shape(), (0, 2));
        let params = parameters(&code, 28);
        assert_eq!(params.k, 1);
        assert_eq!(params.d_z.value(), Some(ExtNat::Finite(1)));
        assert!(matches!(
            extract_css(&c, 2),
            Err(Error::LevelOutOfRange { .. })
        ));
    }

    #[test]
    fn trivial_code_has_infinite_distance() {
        let code = extract_css(&ChainComplex::one_complex(BinMatrix::identity(3)), 1).unwrap();
        let params = parameters(&code, 28);
        assert_eq!(params.k, 0);
        assert_eq!(params.d, DistanceInterval::exact(ExtNat::Infinite));
    }

    #[test]
    fn cap_degrades_to_interval() {
        let p = circulant(4);
        let c = tensor_product(
            &ChainComplex::one_complex(p.clone()),
            &ChainComplex::one_complex(p.transpose()),
        );
        let params = parameters(&extract_css(&c, 1).unwrap(), 4);
        assert!(!params.d_z.exact);
        assert!(params.d_z.lower <= ExtNat::Finite(4) && ExtNat::Finite(4) <= params.d_z.upper);
        let hinted = parameters_with_bounds(
            &extract_css(&c, 1).unwrap(),
            4,
            Some(DistanceBounds {
                lower: ExtNat::Finite(4),
                upper: ExtNat::Finite(4),
                exact_prediction: None,
            }),
            None,
        );
        assert_eq!(hinted.d_z, DistanceInterval::exact(ExtNat::Finite(4)));
    }

    #[test]
    fn css_new_checks_orthogonality() {
        let gx = BinMatrix::from_strs(&["11"]);
        assert!(CssCode::new(gx.clone(), BinMatrix::from_strs(&["11"])).is_ok());
        assert!(matches!(
            CssCode::new(gx.clone(), BinMatrix::from_strs(&["10"])),
            Err(Error::NotOrthogonal { .. })
        ));
        assert!(matches!(
            CssCode::new(gx, BinMatrix::from_strs(&["101"])),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn ensembles() {
        let c3 = circulant(3);
        assert_eq!(c3.rank(), 2);
        assert_eq!(classical_distance(&c3, 28).unwrap(), ExtNat::Finite(3));
        let k = ChainComplex::one_complex(c3);
        assert_eq!(k.homology_ranks(), vec![1, 1]);

        let id = generate_matrix(&EnsembleSpec::new("id:4".parse().unwrap(), 0)).unwrap();
        assert_eq!(classical_distance(&id, 28).unwrap(), ExtNat::Infinite);

        let g =
            generate_matrix(&EnsembleSpec::new("gallager:3,4,16".parse().unwrap(), 42)).unwrap();
        assert_eq!(g.shape(), (12, 16));
        assert!(g.col_weights().iter().all(|&w| w == 3));
        assert!(g.row_weights().iter().all(|&w| w == 4));

        let path = generate_matrix(&EnsembleSpec::new("reppath:4".parse().unwrap(), 0)).unwrap();
        assert_eq!(path.shape(), (3, 4));
        assert_eq!(path.rank(), 3);
    }

    #[test]
    fn ensemble_parse_errors() {
        for bad in ["gallager:3,4", "rep:x", "nope:1", "rep", "id:1,2"] {
            assert!(bad.parse::<Ensemble>().is_err(), "{bad}");
        }
        let spec = EnsembleSpec::new("gallager:3,4,18".parse().unwrap(), 1);
        assert!(matches!(generate_matrix(&spec), Err(Error::InvalidSpec(_))));
        for s in ["gallager:3,4,16", "rep:5", "reppath:5", "id:2"] {
            assert_eq!(s.parse::<Ensemble>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn gallager_is_reproducible() {
        let spec = EnsembleSpec::new("gallager:3,6,24".parse().unwrap(), 2024);
        let a = generate_matrix(&spec).unwrap();
        assert_eq!(a, generate_matrix(&spec).unwrap());
        let other = generate_matrix(&EnsembleSpec::new(spec.kind.clone(), 2025)).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn sparsity_examples() {
        assert_eq!(sparsity(&BinMatrix::zeros(3, 4)), (0, 0));
        assert_eq!(sparsity(&BinMatrix::identity(5)), (1, 1));
        let k = power_complex(&circulant(3), 2, 1).unwrap();
        for a in k.boundaries() {
            let (cw, rw) = sparsity(a);
            assert!(cw <= 6 && rw <= 6);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn extracted_codes_are_orthogonal(seed in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let c = random_complex(&mut rng, 3, 6);
            for j in 0..=c.length() {
                let code = extract_css(&c, j).unwrap();
                prop_assert!(code.g_x().multiply(&code.g_z().transpose()).unwrap().is_zero());
                prop_assert_eq!(code.k(), c.homology_rank(j).unwrap());
            }
        }
    }
}
