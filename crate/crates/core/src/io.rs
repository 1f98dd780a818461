//! alist matrix files and complex bundles.
//!
//! An alist file lists a sparse binary matrix as:
//!
//! ```text
//! cols rows
//! max_col_weight max_row_weight
//! <weight of each column>
//! <weight of each row>
//! <1-based row indices of column 1>
//! ...
//! <1-based column indices of row 1>
//! ...
//! ```
//!
//! Zeros in adjacency lines are padding and are skipped on read; the writer
//! never pads. A bundle is a directory holding `manifest.json` plus one alist
//! per boundary, and, for constructed complexes, the factors it came from.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::gf2::BinMatrix;
use crate::product::{power_complex, tensor_product};

pub fn write_alist(m: &BinMatrix) -> String {
    let col_weights = m.col_weights();
    let row_weights = m.row_weights();
    let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
    let mut out = String::new();
    out.push_str(&format!("{} {}\n", m.cols(), m.rows()));
    out.push_str(&format!(
        "{} {}\n",
        col_weights.iter().max().unwrap_or(&0),
        row_weights.iter().max().unwrap_or(&0)
    ));
    out.push_str(&join(&col_weights));
    out.push('\n');
    out.push_str(&join(&row_weights));
    out.push('\n');
    let t = m.transpose();
    for j in 0..m.cols() {
        let rows: Vec<usize> = t.row_support(j).into_iter().map(|i| i + 1).collect();
        out.push_str(&join(&rows));
        out.push('\n');
    }
    for i in 0..m.rows() {
        let cols: Vec<usize> = m.row_support(i).into_iter().map(|j| j + 1).collect();
        out.push_str(&join(&cols));
        out.push('\n');
    }
    out
}

fn parse_line(lines: &[&str], idx: usize) -> Result<Vec<usize>> {
    let line = lines.get(idx).copied().unwrap_or("");
    line.split_whitespace()
        .map(|t| {
            t.parse::<usize>().map_err(|_| Error::Parse {
                line: idx + 1,
                msg: format!("expected a nonnegative integer, got {t:?}"),
            })
        })
        .collect()
}

fn expect_len(values: Vec<usize>, len: usize, idx: usize, what: &str) -> Result<Vec<usize>> {
    if values.len() != len {
        return Err(Error::Parse {
            line: idx + 1,
            msg: format!("expected {len} {what}, found {}", values.len()),
        });
    }
    Ok(values)
}

pub fn read_alist(text: &str) -> Result<BinMatrix> {
    let lines: Vec<&str> = text.lines().collect();
    if lines.is_empty() {
        return Err(Error::Parse {
            line: 1,
            msg: "empty input".into(),
        });
    }
    let header = expect_len(parse_line(&lines, 0)?, 2, 0, "header values")?;
    let (cols, rows) = (header[0], header[1]);
    let maxima = expect_len(parse_line(&lines, 1)?, 2, 1, "maximum weights")?;
    let col_weights = expect_len(parse_line(&lines, 2)?, cols, 2, "column weights")?;
    let row_weights = expect_len(parse_line(&lines, 3)?, rows, 3, "row weights")?;

    let mut from_cols = BinMatrix::zeros(rows, cols);
    for j in 0..cols {
        let idx = 4 + j;
        let entries: Vec<usize> = parse_line(&lines, idx)?
            .into_iter()
            .filter(|&v| v != 0)
            .collect();
        if entries.len() != col_weights[j] {
            return Err(Error::InconsistentWeights(format!(
                "column {} lists {} entries but has weight {} (line {})",
                j + 1,
                entries.len(),
                col_weights[j],
                idx + 1
            )));
        }
        for r in entries {
            if r > rows {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("row index {r} exceeds {rows}"),
                });
            }
            if from_cols.get(r - 1, j) {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("duplicate row index {r}"),
                });
            }
            from_cols.set(r - 1, j, true);
        }
    }
    let mut from_rows = BinMatrix::zeros(rows, cols);
    for i in 0..rows {
        let idx = 4 + cols + i;
        let entries: Vec<usize> = parse_line(&lines, idx)?
            .into_iter()
            .filter(|&v| v != 0)
            .collect();
        if entries.len() != row_weights[i] {
            return Err(Error::InconsistentWeights(format!(
                "row {} lists {} entries but has weight {} (line {})",
                i + 1,
                entries.len(),
                row_weights[i],
                idx + 1
            )));
        }
        for c in entries {
            if c > cols {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("column index {c} exceeds {cols}"),
                });
            }
            from_rows.set(i, c - 1, true);
        }
    }
    if from_cols != from_rows {
        return Err(Error::InconsistentWeights(
            "column and row adjacency lists disagree".into(),
        ));
    }
    let max_col = col_weights.iter().copied().max().unwrap_or(0);
    let max_row = row_weights.iter().copied().max().unwrap_or(0);
    if maxima != [max_col, max_row] {
        return Err(Error::InconsistentWeights(format!(
            "declared maxima {} {} but weights give {max_col} {max_row}",
            maxima[0], maxima[1]
        )));
    }
    Ok(from_cols)
}

pub fn read_alist_file(path: &Path) -> Result<BinMatrix> {
    read_alist(&fs::read_to_string(path)?)
}

pub fn write_alist_file(path: &Path, m: &BinMatrix) -> Result<()> {
    fs::write(path, write_alist(m))?;
    Ok(())
}

const BUNDLE_FORMAT: &str = "qhp-bundle";
const BUNDLE_VERSION: u32 = 1;
const MANIFEST: &str = "manifest.json";

/// How a bundled complex was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Construction {
    /// Given directly as boundary matrices; `source` describes where they came from.
    Matrices { source: String, seed: Option<u64> },
    Product {
        left: Box<ComplexBundle>,
        right: Box<ComplexBundle>,
    },
    /// `K(seed)^a x K(seed^T)^b`.
    Power { seed: BinMatrix, a: usize, b: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexBundle {
    pub complex: ChainComplex,
    pub construction: Construction,
}

#[derive(Serialize, Deserialize)]
struct Manifest {
    format: String,
    version: u32,
    length: usize,
    dims: Vec<usize>,
    boundaries: Vec<String>,
    construction: ManifestConstruction,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum ManifestConstruction {
    Matrices {
        source: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    Product {
        left: String,
        right: String,
    },
    Power {
        seed: String,
        a: usize,
        b: usize,
    },
}

impl ComplexBundle {
    pub fn from_matrices(
        complex: ChainComplex,
        source: impl Into<String>,
        seed: Option<u64>,
    ) -> Self {
        Self {
            complex,
            construction: Construction::Matrices {
                source: source.into(),
                seed,
            },
        }
    }

    pub fn product(left: ComplexBundle, right: ComplexBundle) -> Self {
        let complex = tensor_product(&left.complex, &right.complex);
        Self {
            complex,
            construction: Construction::Product {
                left: Box::new(left),
                right: Box::new(right),
            },
        }
    }

    pub fn power(seed: BinMatrix, a: usize, b: usize) -> Result<Self> {
        let complex = power_complex(&seed, a, b)?;
        Ok(Self {
            complex,
            construction: Construction::Power { seed, a, b },
        })
    }

    /// Writes the bundle into `dir`, creating it if needed.
    pub fn save(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        let mut names = Vec::new();
        for (k, a) in self.complex.boundaries().iter().enumerate() {
            let name = format!("A{}.alist", k + 1);
            write_alist_file(&dir.join(&name), a)?;
            names.push(name);
        }
        let construction = match &self.construction {
            Construction::Matrices { source, seed } => ManifestConstruction::Matrices {
                source: source.clone(),
                seed: *seed,
            },
            Construction::Product { left, right } => {
                left.save(&dir.join("left"))?;
                right.save(&dir.join("right"))?;
                ManifestConstruction::Product {
                    left: "left".into(),
                    right: "right".into(),
                }
            }
            Construction::Power { seed, a, b } => {
                write_alist_file(&dir.join("seed.alist"), seed)?;
                ManifestConstruction::Power {
                    seed: "seed.alist".into(),
                    a: *a,
                    b: *b,
                }
            }
        };
        let manifest = Manifest {
            format: BUNDLE_FORMAT.into(),
            version: BUNDLE_VERSION,
            length: self.complex.length(),
            dims: self.complex.dims(),
            boundaries: names,
            construction,
        };
        fs::write(
            dir.join(MANIFEST),
            serde_json::to_string_pretty(&manifest)? + "\n",
        )?;
        Ok(())
    }

    /// Loads and re-validates a bundle and any factor bundles it references.
    pub fn load(dir: &Path) -> Result<Self> {
        let manifest: Manifest = serde_json::from_str(&fs::read_to_string(dir.join(MANIFEST))?)?;
        if manifest.format != BUNDLE_FORMAT || manifest.version != BUNDLE_VERSION {
            return Err(Error::Bundle(format!(
                "unsupported bundle format {} v{}",
                manifest.format, manifest.version
            )));
        }
        if manifest.boundaries.len() != manifest.length
            || manifest.dims.len() != manifest.length + 1
        {
            return Err(Error::Bundle(format!(
                "manifest declares length {} with {} boundaries and {} dims",
                manifest.length,
                manifest.boundaries.len(),
                manifest.dims.len()
            )));
        }
        let matrices = manifest
            .boundaries
            .iter()
            .map(|name| read_alist_file(&dir.join(name)))
            .collect::<Result<Vec<_>>>()?;
        for (k, a) in matrices.iter().enumerate() {
            if a.shape() != (manifest.dims[k], manifest.dims[k + 1]) {
                return Err(Error::Bundle(format!(
                    "{} is {}x{} but manifest dims require {}x{}",
                    manifest.boundaries[k],
                    a.rows(),
                    a.cols(),
                    manifest.dims[k],
                    manifest.dims[k + 1]
                )));
            }
        }
        let complex = ChainComplex::validate(matrices)?;
        let construction = match manifest.construction {
            ManifestConstruction::Matrices { source, seed } => {
                Construction::Matrices { source, seed }
            }
            ManifestConstruction::Product { left, right } => Construction::Product {
                left: Box::new(ComplexBundle::load(&dir.join(left))?),
                right: Box::new(ComplexBundle::load(&dir.join(right))?),
            },
            ManifestConstruction::Power { seed, a, b } => Construction::Power {
                seed: read_alist_file(&dir.join(seed))?,
                a,
                b,
            },
        };
        Ok(Self {
            complex,
            construction,
        })
    }
}
