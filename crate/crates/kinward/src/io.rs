//! Text-format readers and writers.
//!
//! Formats:
//! - genotypes: header line `n L`, then n rows of L tokens from {0,1,2,NA}
//! - phenotypes: `ID value` per line (0/1 values are treated as binary)
//! - pedigree: `ID motherID fatherID` per line, `0` for unknown parents
//! - matrices: TSV preceded by a `# kinship n=<n>` comment line
//! - results: TSV with columns snp_index, method, statistic, df, p_value

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use ndarray::{Array1, Array2};

use crate::data::{GenotypeMatrix, Phenotype, PhenotypeKind};
use crate::error::ParseError;
use crate::num::Real;

fn io_err(path: &Path, source: std::io::Error) -> ParseError {
    ParseError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn malformed(path: &Path, line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Malformed {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

/// Read a genotype panel. Line numbers in errors are 1-based.
pub fn read_genotypes(path: impl AsRef<Path>) -> Result<GenotypeMatrix, ParseError> {
    let path = path.as_ref();
    let reader = BufReader::new(File::open(path).map_err(|e| io_err(path, e))?);
    let mut lines = reader.lines().enumerate();

    let (_, header) = lines
        .next()
        .ok_or_else(|| malformed(path, 1, "empty file, expected 'n L' header"))?;
    let header = header.map_err(|e| io_err(path, e))?;
    let mut it = header.split_whitespace();
    let n: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| malformed(path, 1, "header must start with individual count"))?;
    let l: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| malformed(path, 1, "header must contain SNP count"))?;
    if it.next().is_some() {
        return Err(malformed(path, 1, "header has trailing tokens"));
    }

    let mut counts = Array2::<u8>::zeros((n, l));
    let mut missing = Array2::from_elem((n, l), false);
    let mut rows = 0usize;
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line.map_err(|e| io_err(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        if rows >= n {
            return Err(malformed(path, line_no, format!("more than {n} genotype rows")));
        }
        let mut col = 0usize;
        for tok in line.split_whitespace() {
            if col >= l {
                return Err(malformed(path, line_no, format!("more than {l} entries in row")));
            }
            match tok {
                "NA" => missing[(rows, col)] = true,
                "0" => counts[(rows, col)] = 0,
                "1" => counts[(rows, col)] = 1,
                "2" => counts[(rows, col)] = 2,
                other => {
                    return Err(malformed(
                        path,
                        line_no,
                        format!("genotype entry '{other}' is not one of 0/1/2/NA"),
                    ))
                }
            }
            col += 1;
        }
        if col != l {
            return Err(malformed(
                path,
                line_no,
                format!("expected {l} entries, found {col}"),
            ));
        }
        rows += 1;
    }
    if rows != n {
        return Err(malformed(
            path,
            rows + 1,
            format!("expected {n} genotype rows, found {rows}"),
        ));
    }
    GenotypeMatrix::new(counts, missing).map_err(|e| ParseError::Invalid {
        path: path.display().to_string(),
        line: 1,
        source: e,
    })
}

pub fn write_genotypes(path: impl AsRef<Path>, g: &GenotypeMatrix) -> Result<(), ParseError> {
    let path = path.as_ref();
    let mut w = BufWriter::new(File::create(path).map_err(|e| io_err(path, e))?);
    let mut run = || -> std::io::Result<()> {
        writeln!(w, "{} {}", g.n_individuals(), g.n_snps())?;
        for i in 0..g.n_individuals() {
            let mut first = true;
            let mut line = String::with_capacity(2 * g.n_snps());
            for l in 0..g.n_snps() {
                if !first {
                    line.push(' ');
                }
                first = false;
                match g.get(i, l) {
                    Some(x) => line.push((b'0' + x) as char),
                    None => line.push_str("NA"),
                }
            }
            writeln!(w, "{line}")?;
        }
        w.flush()
    };
    run().map_err(|e| io_err(path, e))
}

/// Read phenotypes; returns individual ids in file order plus the values.
/// The phenotype is binary when every value parses to exactly 0 or 1.
pub fn read_phenotypes<T: Real>(
    path: impl AsRef<Path>,
) -> Result<(Vec<String>, Phenotype<T>), ParseError> {
    let path = path.as_ref();
    let reader = BufReader::new(File::open(path).map_err(|e| io_err(path, e))?);
    let mut ids = Vec::new();
    let mut values: Vec<f64> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| io_err(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let id = it
            .next()
            .ok_or_else(|| malformed(path, line_no, "missing individual id"))?;
        let value: f64 = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| malformed(path, line_no, "missing or non-numeric phenotype value"))?;
        if it.next().is_some() {
            return Err(malformed(path, line_no, "trailing tokens after phenotype value"));
        }
        ids.push(id.to_string());
        values.push(value);
    }
    if values.is_empty() {
        return Err(malformed(path, 1, "phenotype file has no rows"));
    }
    let arr = Array1::from_iter(values.iter().map(|&v| T::from_f64(v)));
    let binary = values.iter().all(|&v| v == 0.0 || v == 1.0);
    let phen = if binary {
        Phenotype::binary(arr).map_err(|e| ParseError::Invalid {
            path: path.display().to_string(),
            line: 1,
            source: e,
        })?
    } else {
        Phenotype::quantitative(arr)
    };
    Ok((ids, phen))
}

pub fn write_phenotypes<T: Real>(
    path: impl AsRef<Path>,
    ids: &[String],
    phen: &Phenotype<T>,
) -> Result<(), ParseError> {
    let path = path.as_ref();
    let mut w = BufWriter::new(File::create(path).map_err(|e| io_err(path, e))?);
    let mut run = || -> std::io::Result<()> {
        for (id, v) in ids.iter().zip(phen.values().iter()) {
            match phen.kind() {
                PhenotypeKind::Binary => writeln!(w, "{id} {}", v.to_f64() as i64)?,
                PhenotypeKind::Quantitative => writeln!(w, "{id} {}", v)?,
            }
        }
        w.flush()
    };
    run().map_err(|e| io_err(path, e))
}

/// Read a pedigree: one `ID motherID fatherID` row per individual, parents
/// listed before children, `0` marking unknown parents.
pub fn read_pedigree(path: impl AsRef<Path>) -> Result<crate::data::Pedigree, ParseError> {
    let path = path.as_ref();
    let reader = BufReader::new(File::open(path).map_err(|e| io_err(path, e))?);
    let mut members = Vec::new();
    let mut line_of_member = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| io_err(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(malformed(
                path,
                line_no,
                format!("expected 'ID motherID fatherID', found {} tokens", toks.len()),
            ));
        }
        let parent = |t: &str| {
            if t == "0" {
                None
            } else {
                Some(t.to_string())
            }
        };
        members.push((toks[0].to_string(), parent(toks[1]), parent(toks[2])));
        line_of_member.push(line_no);
    }
    crate::data::Pedigree::new(members.clone()).map_err(|e| {
        // Point at the offending member's line when we can identify it.
        let line = match &e {
            crate::error::DataError::ParentOrder { child, .. }
            | crate::error::DataError::SingleParent { child } => members
                .iter()
                .position(|(id, _, _)| id == child)
                .map(|i| line_of_member[i])
                .unwrap_or(1),
            crate::error::DataError::DuplicateId { id } => members
                .iter()
                .rposition(|(mid, _, _)| mid == id)
                .map(|i| line_of_member[i])
                .unwrap_or(1),
            _ => 1,
        };
        ParseError::Invalid {
            path: path.display().to_string(),
            line,
            source: e,
        }
    })
}

pub fn write_pedigree(
    path: impl AsRef<Path>,
    ped: &crate::data::Pedigree,
) -> Result<(), ParseError> {
    let path = path.as_ref();
    let mut w = BufWriter::new(File::create(path).map_err(|e| io_err(path, e))?);
    let mut run = || -> std::io::Result<()> {
        for i in 0..ped.n() {
            match ped.parents(i) {
                Some((m, f)) => writeln!(
                    w,
                    "{} {} {}",
                    ped.ids()[i],
                    ped.ids()[m],
                    ped.ids()[f]
                )?,
                None => writeln!(w, "{} 0 0", ped.ids()[i])?,
            }
        }
        w.flush()
    };
    run().map_err(|e| io_err(path, e))
}

/// Write a square matrix as TSV under a `# kinship n=<n>` comment line.
pub fn write_matrix<T: Real>(path: impl AsRef<Path>, m: &Array2<T>) -> Result<(), ParseError> {
    let path = path.as_ref();
    let mut w = BufWriter::new(File::create(path).map_err(|e| io_err(path, e))?);
    let mut run = || -> std::io::Result<()> {
        writeln!(w, "# kinship n={}", m.nrows())?;
        for i in 0..m.nrows() {
            let row: Vec<String> = m.row(i).iter().map(|v| format!("{v}")).collect();
            writeln!(w, "{}", row.join("\t"))?;
        }
        w.flush()
    };
    run().map_err(|e| io_err(path, e))
}

/// Read a matrix written by [`write_matrix`]; comment lines are skipped.
pub fn read_matrix<T: Real>(path: impl AsRef<Path>) -> Result<Array2<T>, ParseError> {
    let path = path.as_ref();
    let reader = BufReader::new(File::open(path).map_err(|e| io_err(path, e))?);
    let mut rows: Vec<Vec<T>> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| io_err(path, e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let row: Result<Vec<T>, ParseError> = trimmed
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map(T::from_f64)
                    .map_err(|_| malformed(path, line_no, format!("non-numeric entry '{t}'")))
            })
            .collect();
        let row = row?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(malformed(
                    path,
                    line_no,
                    format!("row has {} entries, expected {}", row.len(), first.len()),
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(malformed(path, 1, "matrix file has no data rows"));
    }
    let ncols = rows[0].len();
    let flat: Vec<T> = rows.into_iter().flatten().collect();
    let nrows = flat.len() / ncols;
    Ok(Array2::from_shape_vec((nrows, ncols), flat).expect("row lengths checked above"))
}

/// One line of a results table; `None` fields render as NA.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub snp_index: usize,
    pub method: String,
    pub statistic: Option<f64>,
    pub df: Option<u32>,
    pub p_value: Option<f64>,
}

pub fn write_results(path: impl AsRef<Path>, rows: &[ResultRow]) -> Result<(), ParseError> {
    let path = path.as_ref();
    let mut w = BufWriter::new(File::create(path).map_err(|e| io_err(path, e))?);
    let fmt_f = |v: Option<f64>| v.map_or("NA".to_string(), |x| format!("{x}"));
    let fmt_u = |v: Option<u32>| v.map_or("NA".to_string(), |x| format!("{x}"));
    let mut run = || -> std::io::Result<()> {
        writeln!(w, "snp_index\tmethod\tstatistic\tdf\tp_value")?;
        for r in rows {
            writeln!(
                w,
                "{}\t{}\t{}\t{}\t{}",
                r.snp_index,
                r.method,
                fmt_f(r.statistic),
                fmt_u(r.df),
                fmt_f(r.p_value)
            )?;
        }
        w.flush()
    };
    run().map_err(|e| io_err(path, e))
}

pub fn read_results(path: impl AsRef<Path>) -> Result<Vec<ResultRow>, ParseError> {
    let path = path.as_ref();
    let reader = BufReader::new(File::open(path).map_err(|e| io_err(path, e))?);
    let mut rows = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| io_err(path, e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with("snp_index") {
            continue;
        }
        let toks: Vec<&str> = trimmed.split('\t').collect();
        if toks.len() != 5 {
            return Err(malformed(
                path,
                line_no,
                format!("expected 5 tab-separated columns, found {}", toks.len()),
            ));
        }
        let snp_index: usize = toks[0]
            .parse()
            .map_err(|_| malformed(path, line_no, "snp_index is not an integer"))?;
        let opt_f = |t: &str| -> Result<Option<f64>, ParseError> {
            if t == "NA" {
                Ok(None)
            } else {
                t.parse::<f64>()
                    .map(Some)
                    .map_err(|_| malformed(path, line_no, format!("non-numeric value '{t}'")))
            }
        };
        let opt_u = |t: &str| -> Result<Option<u32>, ParseError> {
            if t == "NA" {
                Ok(None)
            } else {
                t.parse::<u32>()
                    .map(Some)
                    .map_err(|_| malformed(path, line_no, format!("non-integer df '{t}'")))
            }
        };
        rows.push(ResultRow {
            snp_index,
            method: toks[1].to_string(),
            statistic: opt_f(toks[2])?,
            df: opt_u(toks[3])?,
            p_value: opt_f(toks[4])?,
        });
    }
    Ok(rows)
}

/// Write trio definitions: `fatherID motherID childID` per line.
pub fn write_trios(path: impl AsRef<Path>, trios: &[(String, String, String)]) -> Result<(), ParseError> {
    let path = path.as_ref();
    let mut w = BufWriter::new(File::create(path).map_err(|e| io_err(path, e))?);
    let mut run = || -> std::io::Result<()> {
        for (f, m, c) in trios {
            writeln!(w, "{f} {m} {c}")?;
        }
        w.flush()
    };
    run().map_err(|e| io_err(path, e))
}

/// Read trio definitions as id triples (father, mother, child).
pub fn read_trios(path: impl AsRef<Path>) -> Result<Vec<(String, String, String)>, ParseError> {
    let path = path.as_ref();
    let reader = BufReader::new(File::open(path).map_err(|e| io_err(path, e))?);
    let mut trios = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| io_err(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(malformed(
                path,
                line_no,
                format!("expected 'fatherID motherID childID', found {} tokens", toks.len()),
            ));
        }
        trios.push((toks[0].to_string(), toks[1].to_string(), toks[2].to_string()));
    }
    Ok(trios)
}
