//! Machine-readable per-level reports.
//!
//! Reports serialize through `serde_json::Value`, whose maps keep keys
//! sorted, so the output is stable for a given input.

use serde::Serialize;
use serde_json::Value;

use crate::codes::DistanceInterval;
use crate::complex::{ChainComplex, ExtNat};
use crate::distance::{distance, DistanceMode, DistanceQuery};
use crate::error::{Error, Result};
use crate::io::{ComplexBundle, Construction};
use crate::product::{DistanceBounds, OneComplexParams};
use crate::verify::{level_distances, predicted_fold_distances, Check, VerifyOptions};

/// Stabilizer and qubit degrees of the CSS code at one level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LevelSparsity {
    /// Largest row weight of `G_X = A_j`.
    pub x_stabilizer_weight: usize,
    /// Largest row weight of `G_Z = A_{j+1}^T`.
    pub z_stabilizer_weight: usize,
    pub x_qubit_degree: usize,
    pub z_qubit_degree: usize,
}

impl LevelSparsity {
    pub fn of(c: &ChainComplex, j: usize) -> Self {
        let (gx_cols, gx_rows) = crate::codes::sparsity(c.boundary(j));
        let (next_cols, next_rows) = crate::codes::sparsity(c.boundary(j + 1));
        Self {
            x_stabilizer_weight: gx_rows,
            z_stabilizer_weight: next_cols,
            x_qubit_degree: gx_cols,
            z_qubit_degree: next_rows,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exhaustive,
    Bounds,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SideDistance {
    pub lower: ExtNat,
    pub upper: ExtNat,
    pub exact: bool,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
    pub enumerated: u64,
}

impl SideDistance {
    fn interval(&self) -> DistanceInterval {
        DistanceInterval {
            lower: self.lower,
            upper: self.upper,
            exact: self.exact,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelReport {
    pub j: usize,
    pub n: usize,
    pub k: usize,
    pub sparsity: LevelSparsity,
    /// Homological distance `d_j`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<SideDistance>,
    /// Cohomological distance `d~_j`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_cohom: Option<SideDistance>,
    /// Interval for the code distance `min(d_j, d~_j)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower: Option<ExtNat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper: Option<ExtNat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<bool>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub command: String,
    pub arguments: serde_json::Map<String, Value>,
    pub version: String,
}

impl Provenance {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            arguments: serde_json::Map::new(),
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }

    pub fn arg(mut self, key: &str, value: impl Serialize) -> Self {
        self.arguments.insert(
            key.into(),
            serde_json::to_value(value).unwrap_or(Value::Null),
        );
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub provenance: Provenance,
    pub length: usize,
    pub dims: Vec<usize>,
    pub levels: Vec<LevelReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<Check>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub passed: Option<bool>,
}

impl Report {
    pub fn new(provenance: Provenance, c: &ChainComplex, levels: Vec<LevelReport>) -> Self {
        Self {
            provenance,
            length: c.length(),
            dims: c.dims(),
            levels,
            checks: None,
            passed: None,
        }
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    /// Pretty JSON with sorted keys.
    pub fn to_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("report serializes") + "\n"
    }

    /// One header line with provenance and dimensions, then one line per level
    /// and one per check.
    pub fn to_json_lines(&self) -> String {
        let mut header = self.to_value();
        let obj = header.as_object_mut().expect("report is an object");
        let levels = obj.remove("levels");
        let checks = obj.remove("checks");
        let mut out = serde_json::to_string(&header).expect("serializes") + "\n";
        for item in [levels, checks].into_iter().flatten() {
            if let Value::Array(items) = item {
                for v in items {
                    out += &(serde_json::to_string(&v).expect("serializes") + "\n");
                }
            }
        }
        out
    }
}

/// Dimensions, ranks and sparsity of every level.
pub fn analyze(c: &ChainComplex) -> Vec<LevelReport> {
    (0..=c.length())
        .map(|j| LevelReport {
            j,
            n: c.dim(j),
            k: c.homology_rank(j).expect("level in range"),
            sparsity: LevelSparsity::of(c, j),
            d: None,
            d_cohom: None,
            lower: None,
            upper: None,
            exact: None,
        })
        .collect()
}

/// Known distance bounds at every level, for both sides.
#[derive(Clone, Debug, Default)]
pub struct LevelBounds {
    pub homology: Vec<Option<DistanceBounds>>,
    pub cohomology: Vec<Option<DistanceBounds>>,
}

/// Bounds implied by how the bundle was built: exact-formula predictions for
/// products with a 1-complex and powers, product upper bounds otherwise.
/// Factor distances that exceed the cap leave the corresponding bounds empty.
pub fn bundle_bounds(bundle: &ComplexBundle, opts: &VerifyOptions) -> Result<LevelBounds> {
    let c = &bundle.complex;
    let levels = c.length() + 1;
    let mut out = LevelBounds {
        homology: vec![None; levels],
        cohomology: vec![None; levels],
    };
    match &bundle.construction {
        Construction::Matrices { .. } => {}
        Construction::Product { left, right } => {
            for (side, a, b, mirrored) in [
                (
                    &mut out.homology,
                    left.complex.clone(),
                    right.complex.clone(),
                    false,
                ),
                (
                    &mut out.cohomology,
                    left.complex.cochain(),
                    right.complex.cochain(),
                    true,
                ),
            ] {
                let d_a: Option<Vec<ExtNat>> = level_distances(&a, opts)?.into_iter().collect();
                let d_b: Option<Vec<ExtNat>> = level_distances(&b, opts)?.into_iter().collect();
                let (Some(d_a), Some(d_b)) = (d_a, d_b) else {
                    continue;
                };
                let one = if b.length() == 1 {
                    OneComplexParams::of(b.boundary(1), opts.cap)
                        .ok()
                        .map(|p| (d_a.clone(), p))
                } else if a.length() == 1 {
                    OneComplexParams::of(a.boundary(1), opts.cap)
                        .ok()
                        .map(|p| (d_b.clone(), p))
                } else {
                    None
                };
                for (j, slot) in side.iter_mut().enumerate() {
                    *slot = Some(match &one {
                        Some((d, p)) => DistanceBounds::for_one_complex(d, p, j),
                        None => DistanceBounds::for_product(&d_a, &d_b, j),
                    });
                }
                // Cochain level m - j carries the cohomology of level j.
                if mirrored {
                    side.reverse();
                }
            }
        }
        Construction::Power { seed, a, b } => {
            let pt = seed.transpose();
            if let (Ok(p), Ok(q)) = (
                OneComplexParams::of(seed, opts.cap),
                OneComplexParams::of(&pt, opts.cap),
            ) {
                let order: Vec<_> = std::iter::repeat_n(p, *a)
                    .chain(std::iter::repeat_n(q, *b))
                    .collect();
                let dual: Vec<_> = std::iter::repeat_n(q, *a)
                    .chain(std::iter::repeat_n(p, *b))
                    .collect();
                let homology = predicted_fold_distances(&order);
                let cohomology = predicted_fold_distances(&dual);
                for j in 0..levels {
                    let d = homology[j];
                    out.homology[j] = Some(DistanceBounds {
                        lower: d,
                        upper: d,
                        exact_prediction: Some(d),
                    });
                    // Cochain level m - j carries the cohomology of level j.
                    let d = cohomology[levels - 1 - j];
                    out.cohomology[j] = Some(DistanceBounds {
                        lower: d,
                        upper: d,
                        exact_prediction: Some(d),
                    });
                }
            }
        }
    }
    Ok(out)
}

fn side_distance(
    c: &ChainComplex,
    q: DistanceQuery,
    hint: Option<DistanceBounds>,
) -> Result<SideDistance> {
    let q = match hint {
        Some(b) if b.lower.is_finite() => q.with_lower_bound(b.lower),
        _ => q,
    };
    match distance(c, &q) {
        Ok(r) => Ok(SideDistance {
            lower: r.value,
            upper: r.value,
            exact: true,
            method: Method::Exhaustive,
            witness: r.witness.map(|w| w.ones().collect()),
            enumerated: r.enumerated,
        }),
        Err(Error::KernelTooLarge { .. }) => {
            let (lower, upper) = hint.map_or((ExtNat::Finite(1), ExtNat::Infinite), |b| {
                (b.lower, b.upper)
            });
            Ok(SideDistance {
                lower: lower.max(ExtNat::Finite(1)),
                upper,
                exact: false,
                method: Method::Bounds,
                witness: None,
                enumerated: 0,
            })
        }
        Err(e) => Err(e),
    }
}

/// Outcome of a distance run: the per-level entries and whether any search
/// hit the cap.
pub struct DistanceRun {
    pub levels: Vec<LevelReport>,
    pub cap_exceeded: bool,
}

/// Computes both distances at each requested level; searches that exceed the
/// cap fall back to the supplied bounds as an interval.
pub fn distances(
    c: &ChainComplex,
    levels: &[usize],
    cap: usize,
    threads: usize,
    bounds: &LevelBounds,
) -> Result<DistanceRun> {
    let mut entries = analyze(c);
    let mut cap_exceeded = false;
    for &j in levels {
        if j > c.length() {
            return Err(Error::LevelOutOfRange {
                level: j,
                length: c.length(),
            });
        }
        let base = DistanceQuery::new(j).with_cap(cap).with_threads(threads);
        let hom = side_distance(c, base, bounds.homology.get(j).copied().flatten())?;
        let co = side_distance(
            c,
            DistanceQuery {
                mode: DistanceMode::Cohomology,
                ..base
            },
            bounds.cohomology.get(j).copied().flatten(),
        )?;
        cap_exceeded |= !hom.exact || !co.exact;
        let code = hom.interval().min(co.interval());
        // The minimum is settled when both sides are, or when a settled side
        // is no larger than the other side's lower bound.
        let settled = (hom.exact && co.exact)
            || (hom.exact && hom.upper <= co.lower)
            || (co.exact && co.upper <= hom.lower);
        let entry = &mut entries[j];
        entry.lower = Some(code.lower);
        entry.upper = Some(code.upper);
        entry.exact = Some(settled);
        entry.d = Some(hom);
        entry.d_cohom = Some(co);
    }
    let requested: Vec<LevelReport> = entries
        .into_iter()
        .filter(|e| levels.contains(&e.j))
        .collect();
    Ok(DistanceRun {
        levels: requested,
        cap_exceeded,
    })
}
