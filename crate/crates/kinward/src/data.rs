//! Core domain types: genotype panels, phenotypes, allele frequencies,
//! pedigrees and kinship matrices.
//!
//! All types validate their invariants at construction and are immutable
//! afterwards, so they can be shared freely across parallel workers.

use ndarray::{Array1, Array2};

use crate::error::DataError;
use crate::num::Real;

/// Allele-count panel: `n` individuals by `L` SNPs, entries in {0, 1, 2}
/// counting copies of the reference allele, with a missingness mask.
#[derive(Debug, Clone)]
pub struct GenotypeMatrix {
    counts: Array2<u8>,
    missing: Array2<bool>,
}

impl GenotypeMatrix {
    /// Build a panel, checking every non-missing entry is in {0, 1, 2}
    /// and dimensions are at least 2 individuals x 1 SNP.
    pub fn new(counts: Array2<u8>, missing: Array2<bool>) -> Result<Self, DataError> {
        let (n, l) = counts.dim();
        if n < 2 || l < 1 {
            return Err(DataError::TooSmall { n, l });
        }
        if missing.dim() != counts.dim() {
            return Err(DataError::DimensionMismatch {
                context: "missingness mask shape",
                expected: n * l,
                got: missing.len(),
            });
        }
        for ((i, j), &v) in counts.indexed_iter() {
            if !missing[(i, j)] && v > 2 {
                return Err(DataError::BadGenotypeValue {
                    row: i,
                    col: j,
                    value: v,
                });
            }
        }
        Ok(Self { counts, missing })
    }

    /// Panel with no missing entries.
    pub fn complete(counts: Array2<u8>) -> Result<Self, DataError> {
        let missing = Array2::from_elem(counts.dim(), false);
        Self::new(counts, missing)
    }

    pub fn n_individuals(&self) -> usize {
        self.counts.nrows()
    }

    pub fn n_snps(&self) -> usize {
        self.counts.ncols()
    }

    /// Allele count at (individual, snp), or None if missing.
    #[inline]
    pub fn get(&self, individual: usize, snp: usize) -> Option<u8> {
        if self.missing[(individual, snp)] {
            None
        } else {
            Some(self.counts[(individual, snp)])
        }
    }

    pub fn counts(&self) -> &Array2<u8> {
        &self.counts
    }

    pub fn missing(&self) -> &Array2<bool> {
        &self.missing
    }

    pub fn has_missing(&self) -> bool {
        self.missing.iter().any(|&m| m)
    }

    /// A SNP is polymorphic when both alleles are observed at least once
    /// among non-missing entries; monomorphic SNPs are excluded from
    /// kinship estimation and association testing.
    pub fn is_polymorphic(&self, snp: usize) -> bool {
        let mut ref_alleles = 0u64;
        let mut total = 0u64;
        for i in 0..self.n_individuals() {
            if let Some(x) = self.get(i, snp) {
                ref_alleles += u64::from(x);
                total += 2;
            }
        }
        ref_alleles > 0 && ref_alleles < total
    }

    /// Indices of polymorphic SNPs.
    pub fn polymorphic_snps(&self) -> Vec<usize> {
        (0..self.n_snps()).filter(|&l| self.is_polymorphic(l)).collect()
    }

    /// Genotype column as T with missing entries mapped to NaN.
    pub fn column<T: Real>(&self, snp: usize) -> Array1<T> {
        Array1::from_iter((0..self.n_individuals()).map(|i| match self.get(i, snp) {
            Some(x) => T::from_usize(x as usize),
            None => T::nan(),
        }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhenotypeKind {
    Binary,
    Quantitative,
}

/// Per-individual outcome vector. Binary phenotypes are 0/1 coded.
#[derive(Debug, Clone)]
pub struct Phenotype<T> {
    values: Array1<T>,
    kind: PhenotypeKind,
}

impl<T: Real> Phenotype<T> {
    pub fn binary(values: Array1<T>) -> Result<Self, DataError> {
        for (i, &v) in values.iter().enumerate() {
            if v != T::zero() && v != T::one() {
                return Err(DataError::NonBinaryValue {
                    index: i,
                    value: v.to_f64(),
                });
            }
        }
        Ok(Self {
            values,
            kind: PhenotypeKind::Binary,
        })
    }

    pub fn quantitative(values: Array1<T>) -> Self {
        Self {
            values,
            kind: PhenotypeKind::Quantitative,
        }
    }

    pub fn values(&self) -> &Array1<T> {
        &self.values
    }

    pub fn kind(&self) -> PhenotypeKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn is_binary(&self) -> bool {
        self.kind == PhenotypeKind::Binary
    }

    /// Case count n1 (binary phenotypes only).
    pub fn n_cases(&self) -> usize {
        self.values.iter().filter(|&&v| v == T::one()).count()
    }

    /// Control count n0 (binary phenotypes only).
    pub fn n_controls(&self) -> usize {
        self.values.iter().filter(|&&v| v == T::zero()).count()
    }

    /// Error unless both case and control classes are non-empty.
    pub fn require_both_classes(&self) -> Result<(usize, usize), DataError> {
        let n1 = self.n_cases();
        let n0 = self.n_controls();
        if n1 == 0 || n0 == 0 {
            return Err(DataError::OneClassOnly { n1, n0 });
        }
        Ok((n0, n1))
    }
}

/// Reference-allele fractions per SNP, each strictly inside (0, 1).
#[derive(Debug, Clone)]
pub struct AlleleFrequencies<T> {
    p: Array1<T>,
}

impl<T: Real> AlleleFrequencies<T> {
    pub fn new(p: Array1<T>) -> Result<Self, DataError> {
        for (l, &v) in p.iter().enumerate() {
            if !(v > T::zero() && v < T::one()) || v.is_nan() {
                return Err(DataError::DegenerateSnp {
                    index: l,
                    value: v.to_f64(),
                });
            }
        }
        Ok(Self { p })
    }

    pub fn values(&self) -> &Array1<T> {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    #[inline]
    pub fn get(&self, snp: usize) -> T {
        self.p[snp]
    }
}

/// Clamp interval for estimated frequencies: [1/(2n+2), 1 - 1/(2n+2)].
/// Keeps estimates off the degenerate boundary without moving interior values.
pub fn frequency_clamp_bounds<T: Real>(n: usize) -> (T, T) {
    let lo = T::one() / T::from_usize(2 * n + 2);
    (lo, T::one() - lo)
}

/// Sample allele frequencies: non-missing allele count over 2x the number
/// of non-missing individuals, clamped away from {0, 1}.
///
/// SNPs with no observed genotypes get the clamp midpoint 0.5; they are
/// necessarily monomorphic and excluded downstream anyway.
pub fn estimate_frequencies<T: Real>(g: &GenotypeMatrix) -> AlleleFrequencies<T> {
    let n = g.n_individuals();
    let (lo, hi) = frequency_clamp_bounds::<T>(n);
    let p = Array1::from_iter((0..g.n_snps()).map(|l| {
        let mut alleles = 0u64;
        let mut observed = 0u64;
        for i in 0..n {
            if let Some(x) = g.get(i, l) {
                alleles += u64::from(x);
                observed += 1;
            }
        }
        if observed == 0 {
            return T::from_f64(0.5);
        }
        let raw = T::from_f64(alleles as f64) / T::from_f64(2.0 * observed as f64);
        raw.maximum(lo).minimum(hi)
    }));
    AlleleFrequencies::new(p).expect("clamped frequencies are interior by construction")
}

/// Standardize allele counts to zero mean and unit variance under the
/// supplied frequencies: (x - 2p) / sqrt(4 p (1-p)). Missing entries map
/// to 0, i.e. they contribute nothing after centering.
pub fn standardize_genotypes<T: Real>(
    g: &GenotypeMatrix,
    freqs: &AlleleFrequencies<T>,
) -> Result<Array2<T>, DataError> {
    let (n, l) = (g.n_individuals(), g.n_snps());
    if freqs.len() != l {
        return Err(DataError::DimensionMismatch {
            context: "allele frequency vector length",
            expected: l,
            got: freqs.len(),
        });
    }
    let mut out = Array2::zeros((n, l));
    let two = T::from_f64(2.0);
    let four = T::from_f64(4.0);
    for snp in 0..l {
        let p = freqs.get(snp);
        if !(p > T::zero() && p < T::one()) {
            return Err(DataError::DegenerateSnp {
                index: snp,
                value: p.to_f64(),
            });
        }
        let centre = two * p;
        let scale = (four * p * (T::one() - p)).sqrt();
        for ind in 0..n {
            out[(ind, snp)] = match g.get(ind, snp) {
                Some(x) => (T::from_usize(x as usize) - centre) / scale,
                None => T::zero(),
            };
        }
    }
    Ok(out)
}

/// Observed pedigree: parent links over an ordered member list in which
/// every parent precedes its children (so the structure is acyclic by
/// construction). Members have either two known parents or none.
#[derive(Debug, Clone)]
pub struct Pedigree {
    ids: Vec<String>,
    mother: Vec<Option<usize>>,
    father: Vec<Option<usize>>,
}

impl Pedigree {
    /// Build from (id, mother id, father id) rows in file order.
    /// `None` parents mark founders.
    pub fn new(
        members: Vec<(String, Option<String>, Option<String>)>,
    ) -> Result<Self, DataError> {
        let mut ids = Vec::with_capacity(members.len());
        let mut mother = Vec::with_capacity(members.len());
        let mut father = Vec::with_capacity(members.len());
        let mut index = std::collections::HashMap::new();
        for (pos, (id, m, f)) in members.into_iter().enumerate() {
            if index.contains_key(&id) {
                return Err(DataError::DuplicateId { id });
            }
            match (&m, &f) {
                (Some(_), Some(_)) | (None, None) => {}
                _ => return Err(DataError::SingleParent { child: id }),
            }
            let resolve = |pid: &Option<String>| -> Result<Option<usize>, DataError> {
                match pid {
                    None => Ok(None),
                    Some(p) => match index.get(p.as_str()) {
                        Some(&i) => Ok(Some(i)),
                        None => Err(DataError::ParentOrder {
                            child: id.clone(),
                            parent: p.clone(),
                        }),
                    },
                }
            };
            mother.push(resolve(&m)?);
            father.push(resolve(&f)?);
            index.insert(id.clone(), pos);
            ids.push(id);
        }
        Ok(Self { ids, mother, father })
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    #[inline]
    pub fn parents(&self, i: usize) -> Option<(usize, usize)> {
        match (self.mother[i], self.father[i]) {
            (Some(m), Some(f)) => Some((m, f)),
            _ => None,
        }
    }

    pub fn is_founder(&self, i: usize) -> bool {
        self.mother[i].is_none()
    }

    pub fn founders(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.is_founder(i)).collect()
    }
}

/// Symmetric matrix of kinship coefficients.
#[derive(Debug, Clone)]
pub struct KinshipMatrix<T> {
    k: Array2<T>,
}

impl<T: Real> KinshipMatrix<T> {
    /// Validates squareness and symmetry (within 1e-12, loosened to a few
    /// ulps for lower-precision scalars).
    pub fn new(k: Array2<T>) -> Result<Self, DataError> {
        let n = k.nrows();
        if k.ncols() != n {
            return Err(DataError::DimensionMismatch {
                context: "kinship matrix must be square",
                expected: n,
                got: k.ncols(),
            });
        }
        let tol = T::from_f64(1e-12).maximum(T::epsilon() * T::from_f64(16.0));
        for i in 0..n {
            for j in (i + 1)..n {
                if (k[(i, j)] - k[(j, i)]).abs() > tol {
                    return Err(DataError::NotSymmetric {
                        i,
                        j,
                        a: k[(i, j)].to_f64(),
                        b: k[(j, i)].to_f64(),
                    });
                }
            }
        }
        Ok(Self { k })
    }

    /// Identity-scaled kinship of an unrelated, outbred sample: 2K = I.
    pub fn unrelated(n: usize) -> Self {
        let mut k = Array2::zeros((n, n));
        for i in 0..n {
            k[(i, i)] = T::from_f64(0.5);
        }
        Self { k }
    }

    pub fn n(&self) -> usize {
        self.k.nrows()
    }

    pub fn matrix(&self) -> &Array2<T> {
        &self.k
    }

    pub fn into_inner(self) -> Array2<T> {
        self.k
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.k[(i, j)]
    }

    /// Smallest eigenvalue; used for PSD checks and the ridge rule.
    pub fn min_eigenvalue(&self) -> Result<T, crate::error::NumericError> {
        let e = T::sym_eigh(&self.k)?;
        Ok(e.values[0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn toy_panel() -> GenotypeMatrix {
        GenotypeMatrix::complete(array![[0u8, 1, 2], [2, 1, 0]]).unwrap()
    }

    #[test]
    fn rejects_bad_genotype_value() {
        let err = GenotypeMatrix::complete(array![[0u8, 3], [1, 1]]).unwrap_err();
        assert!(matches!(err, DataError::BadGenotypeValue { value: 3, .. }));
    }

    #[test]
    fn rejects_single_individual() {
        let err = GenotypeMatrix::complete(array![[0u8, 1]].into_owned()).unwrap_err();
        assert!(matches!(err, DataError::TooSmall { n: 1, .. }));
    }

    #[test]
    fn standardize_centered_value_is_zero() {
        // x = 2p maps to 0.
        let g = GenotypeMatrix::complete(array![[1u8], [1]]).unwrap();
        let p = AlleleFrequencies::new(array![0.5]).unwrap();
        let s = standardize_genotypes::<f64>(&g, &p).unwrap();
        assert_eq!(s[(0, 0)], 0.0);
    }

    #[test]
    fn standardize_unit_variance_at_half() {
        // p = 0.5, x = 2 gives (2-1)/1 = 1.
        let g = GenotypeMatrix::complete(array![[2u8], [0]]).unwrap();
        let p = AlleleFrequencies::new(array![0.5]).unwrap();
        let s = standardize_genotypes::<f64>(&g, &p).unwrap();
        assert_eq!(s[(0, 0)], 1.0);
        assert_eq!(s[(1, 0)], -1.0);
    }

    #[test]
    fn standardize_quarter_frequency_column() {
        // Direct arithmetic: (x - 0.5)/sqrt(0.75) for x in {0, 1, 2}.
        let g = GenotypeMatrix::complete(array![[0u8], [1], [2]]).unwrap();
        let p = AlleleFrequencies::new(array![0.25]).unwrap();
        let s = standardize_genotypes::<f64>(&g, &p).unwrap();
        let scale = 0.75f64.sqrt();
        assert!((s[(0, 0)] - (-0.5 / scale)).abs() < 1e-15);
        assert!((s[(1, 0)] - (0.5 / scale)).abs() < 1e-15);
        assert!((s[(2, 0)] - (1.5 / scale)).abs() < 1e-15);
        assert!((s[(0, 0)] - (-0.577350269)).abs() < 1e-9);
        assert!((s[(1, 0)] - 0.577350269).abs() < 1e-9);
        assert!((s[(2, 0)] - 1.732050807).abs() < 1e-9);
    }

    #[test]
    fn standardize_missing_contributes_zero() {
        let counts = array![[0u8, 2], [1, 0]];
        let mut missing = Array2::from_elem((2, 2), false);
        missing[(0, 0)] = true;
        let g = GenotypeMatrix::new(counts, missing).unwrap();
        let p = AlleleFrequencies::new(array![0.3, 0.4]).unwrap();
        let s = standardize_genotypes::<f64>(&g, &p).unwrap();
        assert_eq!(s[(0, 0)], 0.0);
        assert!(s[(1, 0)] != 0.0);
    }

    #[test]
    fn standardized_columns_have_null_moments() {
        // Binomial(2, p) draws with the true p: empirical mean -> 0 and
        // variance -> Var(x)/(4p(1-p)) = 1/2, the self-kinship of an
        // outbred individual. Tested at n = 10_000 with tolerance 0.05.
        let n = 10_000;
        let mut rng = StdRng::seed_from_u64(7);
        let ps = [0.1, 0.25, 0.5, 0.8];
        let mut counts = Array2::zeros((n, ps.len()));
        for (l, &p) in ps.iter().enumerate() {
            for i in 0..n {
                let x = (rng.random::<f64>() < p) as u8 + (rng.random::<f64>() < p) as u8;
                counts[(i, l)] = x;
            }
        }
        let g = GenotypeMatrix::complete(counts).unwrap();
        let freqs = AlleleFrequencies::new(Array1::from_iter(ps.iter().cloned())).unwrap();
        let s = standardize_genotypes::<f64>(&g, &freqs).unwrap();
        for l in 0..ps.len() {
            let col = s.column(l);
            let mean = col.sum() / n as f64;
            let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
            assert!(mean.abs() < 0.05, "mean {mean} at p={}", ps[l]);
            assert!((var - 0.5).abs() < 0.05, "var {var} at p={}", ps[l]);
        }
    }

    #[test]
    fn frequency_estimates_are_clamped_only_at_boundary() {
        let g = toy_panel();
        let f = estimate_frequencies::<f64>(&g);
        // Column means: (0+2)/4 = 0.5 etc; interior values untouched.
        assert_eq!(f.get(0), 0.5);
        assert_eq!(f.get(1), 0.5);
        assert_eq!(f.get(2), 0.5);

        let g2 = GenotypeMatrix::complete(array![[2u8, 0], [2, 1]]).unwrap();
        let f2 = estimate_frequencies::<f64>(&g2);
        let (lo, hi) = frequency_clamp_bounds::<f64>(2);
        assert_eq!(f2.get(0), hi, "monomorphic column clamps to upper bound");
        assert_eq!(f2.get(1), 0.25, "interior estimate is untouched");
        assert_eq!(lo, 1.0 / 6.0);
    }

    #[test]
    fn monomorphic_flagging() {
        let g = GenotypeMatrix::complete(array![[2u8, 0, 1], [2, 1, 1]]).unwrap();
        assert!(!g.is_polymorphic(0)); // all reference
        assert!(g.is_polymorphic(1));
        assert!(g.is_polymorphic(2)); // all heterozygous still shows both alleles
        assert_eq!(g.polymorphic_snps(), vec![1, 2]);
    }

    #[test]
    fn binary_phenotype_rejects_other_values() {
        let err = Phenotype::binary(array![0.0, 0.5]).unwrap_err();
        assert!(matches!(err, DataError::NonBinaryValue { .. }));
        let y = Phenotype::binary(array![0.0, 1.0, 1.0]).unwrap();
        assert_eq!(y.n_cases(), 2);
        assert_eq!(y.n_controls(), 1);
        assert!(Phenotype::binary(array![1.0, 1.0])
            .unwrap()
            .require_both_classes()
            .is_err());
    }

    #[test]
    fn pedigree_rejects_forward_parent_reference() {
        let err = Pedigree::new(vec![
            ("c".into(), Some("m".into()), Some("f".into())),
            ("m".into(), None, None),
            ("f".into(), None, None),
        ])
        .unwrap_err();
        assert!(matches!(err, DataError::ParentOrder { .. }));
    }

    #[test]
    fn pedigree_rejects_single_parent() {
        let err = Pedigree::new(vec![
            ("m".into(), None, None),
            ("c".into(), Some("m".into()), None),
        ])
        .unwrap_err();
        assert!(matches!(err, DataError::SingleParent { .. }));
    }

    #[test]
    fn pedigree_tracks_founders() {
        let ped = Pedigree::new(vec![
            ("m".into(), None, None),
            ("f".into(), None, None),
            ("c".into(), Some("m".into()), Some("f".into())),
        ])
        .unwrap();
        assert_eq!(ped.founders(), vec![0, 1]);
        assert_eq!(ped.parents(2), Some((0, 1)));
    }

    #[test]
    fn kinship_matrix_requires_symmetry() {
        let err = KinshipMatrix::new(array![[0.5, 0.1], [0.2, 0.5]]).unwrap_err();
        assert!(matches!(err, DataError::NotSymmetric { .. }));
        let k = KinshipMatrix::new(array![[0.5, 0.1], [0.1, 0.5]]).unwrap();
        assert_eq!(k.n(), 2);
    }
}
