//! Error types shared across the crate.

use thiserror::Error;

/// Low-level numerical failures (LAPACK, shape mismatches, singularities).
#[derive(Debug, Error)]
pub enum NumericError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("empty matrix")]
    EmptyMatrix,
    #[error("LAPACK {routine} failed with info={info}")]
    Lapack { routine: &'static str, info: i32 },
    #[error("matrix is singular even after ridge regularization")]
    Singular,
    #[error("matrix is not positive semi-definite (min eigenvalue {min_eig})")]
    NotPsd { min_eig: f64 },
    #[error("root bracketing failed in {context}")]
    BracketFailure { context: &'static str },
}

/// Violations of the core data-type invariants.
#[derive(Debug, Error)]
pub enum DataError {
    #[error("genotype count {value} at ({row}, {col}) outside {{0, 1, 2}}")]
    BadGenotypeValue { row: usize, col: usize, value: u8 },
    #[error("need at least 2 individuals and 1 SNP, got n={n}, L={l}")]
    TooSmall { n: usize, l: usize },
    #[error("dimension mismatch: {context} (expected {expected}, got {got})")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("binary phenotype value {value} at individual {index} is not 0/1")]
    NonBinaryValue { index: usize, value: f64 },
    #[error("binary phenotype needs both cases and controls (n1={n1}, n0={n0})")]
    OneClassOnly { n1: usize, n0: usize },
    #[error("allele frequency {value} at SNP {index} lies outside (0, 1)")]
    DegenerateSnp { index: usize, value: f64 },
    #[error("kinship matrix not symmetric at ({i}, {j}): |{a} - {b}| > tolerance")]
    NotSymmetric { i: usize, j: usize, a: f64, b: f64 },
    #[error("individual {child} has only one recorded parent")]
    SingleParent { child: String },
    #[error("parent {parent} of {child} is not listed before its child")]
    ParentOrder { child: String, parent: String },
    #[error("unknown individual id {id}")]
    UnknownId { id: String },
    #[error("duplicate individual id {id}")]
    DuplicateId { id: String },
}

/// Text-format parse failures; always carries the offending location.
#[derive(Debug, Error)]
pub enum ParseError {
    #[error("{path}:{line}: {message}")]
    Malformed {
        path: String,
        line: usize,
        message: String,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {source}")]
    Invalid {
        path: String,
        line: usize,
        #[source]
        source: DataError,
    },
}

/// Kinship estimation failures.
#[derive(Debug, Error)]
pub enum KinshipError {
    #[error("no polymorphic SNPs available for kinship estimation")]
    NoPolymorphicSnps,
    #[error("individuals {i} and {j} share no jointly observed SNPs")]
    NoSharedSnps { i: usize, j: usize },
    #[error("founder kinship matrix is not positive semi-definite")]
    FounderNotPsd,
    #[error("founder kinship matrix is {got}x{got} but pedigree has {founders} founders")]
    FounderSize { got: usize, founders: usize },
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Data(#[from] DataError),
}

/// Per-SNP association-test failures; these map to NA rows in results output.
#[derive(Debug, Error)]
pub enum AssocError {
    #[error("genotype column is constant; trend variance undefined")]
    ConstantGenotype,
    #[error("phenotype is constant")]
    ConstantPhenotype,
    #[error("no informative (heterozygous-parent) transmissions")]
    NoInformativeTransmissions,
    #[error("child genotype {child} impossible for parents ({father}, {mother})")]
    NonMendelian { father: u8, mother: u8, child: u8 },
    #[error("score variance is not positive (degenerate projection)")]
    DegenerateVariance,
    #[error("residual variance below threshold after adjustment")]
    DegenerateResidual,
    #[error("phenotype must be binary for this test")]
    NotBinary,
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Data(#[from] DataError),
}

/// Genomic-control failures.
#[derive(Debug, Error)]
pub enum GcError {
    #[error("no finite statistics to estimate lambda from")]
    EmptyInput,
    #[error("trim fraction q={q} outside (0, 1]")]
    BadTrimFraction { q: f64 },
    #[error("lambda must be positive, got {lambda}")]
    BadLambda { lambda: f64 },
}

/// Structure-adjustment failures (PCA, mixed model, GRAMMAR).
#[derive(Debug, Error)]
pub enum StructureError {
    #[error("requested {k} principal components, valid range is 1..{n}")]
    BadComponentCount { k: usize, n: usize },
    #[error("need at least 3 individuals for the mixed model, got {n}")]
    TooFewIndividuals { n: usize },
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Assoc(#[from] AssocError),
}

/// Simulation failures.
#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid scenario: {0}")]
    BadScenario(String),
    #[error("case/control quotas infeasible after {retries} population draws")]
    QuotaInfeasible { retries: usize },
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Data(#[from] DataError),
}

/// Evaluation-harness failures.
#[derive(Debug, Error)]
pub enum EvalError {
    #[error("no test results to aggregate")]
    EmptyResults,
    #[error("need at least one causal and one null SNP for a ROC curve")]
    DegenerateTruth,
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Kinship(#[from] KinshipError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Assoc(#[from] AssocError),
    #[error(transparent)]
    Gc(#[from] GcError),
}
