//! Checks a constructed complex against the formulas that predict it.
//!
//! For a product `A x B` this covers orthogonality, bit-exact reconstruction,
//! the dimension and rank sums, the product upper bound on distances, and,
//! when one factor is a 1-complex `K(P)`, the lower bound and the exact
//! distance formula. Both homological and cohomological distances are
//! checked; the cochain of `A x B` is `A~ x B~` up to a coordinate
//! permutation, which leaves distances unchanged.

use serde::Serialize;

use crate::complex::{ChainComplex, ExtNat};
use crate::distance::{homological_distance, DistanceQuery};
use crate::error::{Error, Result};
use crate::io::{ComplexBundle, Construction};
use crate::product::{
    distance_upper_bound, kunneth_ranks, one_complex_distance, one_complex_lower_bound,
    power_complex, power_level_dimension, product_dimensions, tensor_product, OneComplexParams,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Not checked because a kernel exceeded the enumeration cap.
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    pub status: Status,
    pub detail: String,
}

impl Check {
    fn new(name: &str, level: Option<usize>, passed: bool, detail: String) -> Self {
        Self {
            name: name.into(),
            level,
            status: if passed { Status::Pass } else { Status::Fail },
            detail,
        }
    }

    fn skipped(name: &str, level: Option<usize>, detail: String) -> Self {
        Self {
            name: name.into(),
            level,
            status: Status::Skipped,
            detail,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub checks: Vec<Check>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    fn push(&mut self, check: Check) {
        self.checks.push(check);
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub cap: usize,
    pub threads: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            cap: crate::distance::DEFAULT_MAX_KERNEL_DIM,
            threads: 1,
        }
    }
}

/// Exact homological distances at every level, or `None` where a kernel is too large.
pub fn level_distances(c: &ChainComplex, opts: &VerifyOptions) -> Result<Vec<Option<ExtNat>>> {
    (0..=c.length())
        .map(|j| {
            let q = DistanceQuery::new(j)
                .with_cap(opts.cap)
                .with_threads(opts.threads);
            match homological_distance(c, &q) {
                Ok(r) => Ok(Some(r.value)),
                Err(Error::KernelTooLarge { .. }) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect()
}

fn all_known(d: &[Option<ExtNat>]) -> Option<Vec<ExtNat>> {
    d.iter().copied().collect()
}

/// The seed matrix when `c` is a 1-complex.
fn as_one_complex(c: &ChainComplex) -> Option<&crate::gf2::BinMatrix> {
    (c.length() == 1).then(|| c.boundary(1))
}

pub fn verify_bundle(bundle: &ComplexBundle, opts: &VerifyOptions) -> Result<Verification> {
    let mut out = Verification::default();
    let c = &bundle.complex;
    let orthogonal = ChainComplex::validate(c.boundaries().to_vec());
    out.push(Check::new(
        "orthogonality",
        None,
        orthogonal.is_ok(),
        match &orthogonal {
            Ok(_) => "all consecutive boundaries compose to zero".into(),
            Err(e) => e.to_string(),
        },
    ));
    match &bundle.construction {
        Construction::Matrices { .. } => {}
        Construction::Product { left, right } => {
            verify_product(&left.complex, &right.complex, c, opts, &mut out)?;
        }
        Construction::Power { seed, a, b } => {
            verify_power(seed, *a, *b, c, opts, &mut out)?;
        }
    }
    Ok(out)
}

/// Checks `c` against `a x b`.
pub fn verify_product(
    a: &ChainComplex,
    b: &ChainComplex,
    c: &ChainComplex,
    opts: &VerifyOptions,
    out: &mut Verification,
) -> Result<()> {
    let rebuilt = tensor_product(a, b);
    out.push(Check::new(
        "construction",
        None,
        &rebuilt == c,
        "bundle matches the tensor product of its factors bit for bit".into(),
    ));
    if c.length() != a.length() + b.length() {
        out.push(Check::new(
            "length",
            None,
            false,
            format!(
                "length {} but factors give {}",
                c.length(),
                a.length() + b.length()
            ),
        ));
        return Ok(());
    }
    for j in 0..=c.length() {
        let (n, predicted) = (c.dim(j), product_dimensions(a, b, j));
        out.push(Check::new(
            "dimension-sum",
            Some(j),
            n == predicted,
            format!("n = {n}, predicted {predicted}"),
        ));
        let (k, predicted) = (c.homology_rank(j)?, kunneth_ranks(a, b, j));
        out.push(Check::new(
            "rank-sum",
            Some(j),
            k == predicted,
            format!("k = {k}, predicted {predicted}"),
        ));
    }
    product_distances("homology", a, b, c, opts, out)?;
    product_distances(
        "cohomology",
        &a.cochain(),
        &b.cochain(),
        &c.cochain(),
        opts,
        out,
    )
}

fn product_distances(
    side: &str,
    a: &ChainComplex,
    b: &ChainComplex,
    c: &ChainComplex,
    opts: &VerifyOptions,
    out: &mut Verification,
) -> Result<()> {
    let name = |what: &str| format!("{side}-{what}");
    let (Some(d_a), Some(d_b)) = (
        all_known(&level_distances(a, opts)?),
        all_known(&level_distances(b, opts)?),
    ) else {
        out.push(Check::skipped(
            &name("distances"),
            None,
            "factor distances exceed the cap".into(),
        ));
        return Ok(());
    };
    // Lower bound and exact formula apply when either factor is a 1-complex;
    // distances do not depend on factor order.
    let one = match (as_one_complex(b), as_one_complex(a)) {
        (Some(p), _) => Some((d_a.clone(), OneComplexParams::of(p, opts.cap).ok())),
        (None, Some(p)) => Some((d_b.clone(), OneComplexParams::of(p, opts.cap).ok())),
        _ => None,
    };
    for j in 0..=c.length() {
        if c.homology_rank(j)? == 0 {
            continue;
        }
        let q = DistanceQuery::new(j)
            .with_cap(opts.cap)
            .with_threads(opts.threads);
        let exact = match homological_distance(c, &q) {
            Ok(r) => r.value,
            Err(Error::KernelTooLarge { dim, cap }) => {
                out.push(Check::skipped(
                    &name("distance"),
                    Some(j),
                    format!("kernel dimension {dim} > cap {cap}"),
                ));
                continue;
            }
            Err(e) => return Err(e),
        };
        let upper = distance_upper_bound(&d_a, &d_b, j);
        out.push(Check::new(
            &name("upper-bound"),
            Some(j),
            exact <= upper,
            format!("d = {exact}, upper bound {upper}"),
        ));
        if let Some((d_other, params)) = &one {
            let Some(params) = params else {
                out.push(Check::skipped(
                    &name("lower-bound"),
                    Some(j),
                    "seed kernel exceeds the cap".into(),
                ));
                continue;
            };
            let lower = one_complex_lower_bound(d_other, params, j);
            out.push(Check::new(
                &name("lower-bound"),
                Some(j),
                lower <= exact,
                format!("d = {exact}, lower bound {lower}"),
            ));
            let predicted = one_complex_distance(d_other, params, j);
            out.push(Check::new(
                &name("exact-formula"),
                Some(j),
                predicted == exact,
                format!("d = {exact}, predicted {predicted}"),
            ));
        }
    }
    Ok(())
}

/// Distances of `K(s_1) x ... x K(s_t)` predicted by folding the exact
/// product formula over the seeds.
pub fn predicted_fold_distances(seeds: &[OneComplexParams]) -> Vec<ExtNat> {
    let Some((first, rest)) = seeds.split_first() else {
        return Vec::new();
    };
    let mut d = first.distances().to_vec();
    for p in rest {
        d = (0..=d.len())
            .map(|j| one_complex_distance(&d, p, j))
            .collect();
    }
    d
}

fn verify_power(
    seed: &crate::gf2::BinMatrix,
    a: usize,
    b: usize,
    c: &ChainComplex,
    opts: &VerifyOptions,
    out: &mut Verification,
) -> Result<()> {
    let rebuilt = power_complex(seed, a, b)?;
    out.push(Check::new(
        "construction",
        None,
        &rebuilt == c,
        format!("bundle matches K(P)^{a} x K(P^T)^{b} bit for bit"),
    ));
    if &rebuilt != c {
        return Ok(());
    }
    let pt = seed.transpose();
    let k_seed = ChainComplex::one_complex(seed.clone());
    let k_dual = ChainComplex::one_complex(pt.clone());
    let factors: Vec<&ChainComplex> = std::iter::repeat_n(&k_seed, a)
        .chain(std::iter::repeat_n(&k_dual, b))
        .collect();
    let mut partial = factors[0].clone();
    let mut sums_hold = true;
    for f in &factors[1..] {
        let next = tensor_product(&partial, f);
        for j in 0..=next.length() {
            sums_hold &= next.dim(j) == product_dimensions(&partial, f, j);
            sums_hold &= next.homology_rank(j)? == kunneth_ranks(&partial, f, j);
        }
        partial = next;
    }
    out.push(Check::new(
        "fold-sums",
        None,
        sums_hold,
        "dimension and rank sums hold at every fold step".into(),
    ));

    let (r, cols, u) = (seed.rows(), seed.cols(), seed.rank());
    if u == r && r < cols {
        let kappa = (cols - r) as u64;
        for j in 0..=c.length() {
            let expected = if j == a { kappa.pow((a + b) as u32) } else { 0 };
            let k = c.homology_rank(j)? as u64;
            out.push(Check::new(
                "power-rank",
                Some(j),
                k == expected,
                format!("k = {k}, closed form {expected}"),
            ));
        }
        let n = c.dim(a) as u64;
        let closed = power_level_dimension(r as u64, cols as u64, a as u32, b as u32);
        out.push(Check::new(
            "power-dimension",
            Some(a),
            n == closed,
            format!("n = {n}, closed form {closed}"),
        ));
    }

    let (Ok(p_seed), Ok(p_dual)) = (
        OneComplexParams::of(seed, opts.cap),
        OneComplexParams::of(&pt, opts.cap),
    ) else {
        out.push(Check::skipped(
            "power-distances",
            None,
            "seed kernel exceeds the cap".into(),
        ));
        return Ok(());
    };
    let order: Vec<OneComplexParams> = std::iter::repeat_n(p_seed, a)
        .chain(std::iter::repeat_n(p_dual, b))
        .collect();
    let dual_order: Vec<OneComplexParams> = std::iter::repeat_n(p_dual, a)
        .chain(std::iter::repeat_n(p_seed, b))
        .collect();
    for (side, complex, predicted) in [
        ("homology", c.clone(), predicted_fold_distances(&order)),
        // The cochain of K(P)^a x K(P^T)^b is K(P^T)^a x K(P)^b with levels reversed.
        (
            "cohomology",
            c.cochain(),
            predicted_fold_distances(&dual_order),
        ),
    ] {
        for j in 0..=complex.length() {
            if complex.homology_rank(j)? == 0 {
                continue;
            }
            let q = DistanceQuery::new(j)
                .with_cap(opts.cap)
                .with_threads(opts.threads);
            match homological_distance(&complex, &q) {
                Ok(res) => out.push(Check::new(
                    &format!("{side}-exact-formula"),
                    Some(j),
                    res.value == predicted[j],
                    format!("d = {}, predicted {}", res.value, predicted[j]),
                )),
                Err(Error::KernelTooLarge { dim, cap }) => out.push(Check::skipped(
                    &format!("{side}-exact-formula"),
                    Some(j),
                    format!("kernel dimension {dim} > cap {cap}"),
                )),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(())
}
