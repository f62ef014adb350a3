//! Entropy, divergence, and joint target/resource distributions.
//!
//! All logarithms are base 2, so every quantity is in bits. The convention
//! `0 * log2(0) = 0` applies throughout.

use crate::error::{Error, Result};
use crate::space::{InformationResource, TargetSet};
use std::io::BufRead;

/// Tolerance for masses that must sum to one and for cross-checks between
/// algebraically equal computations.
pub const INFO_TOLERANCE: f64 = 1e-12;

fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

fn check_masses(label: &str, masses: &[f64]) -> Result<()> {
    if masses.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(Error::InvalidProbabilityVector(format!(
            "{label} masses must be finite and nonnegative"
        )));
    }
    let total: f64 = masses.iter().sum();
    if (total - 1.0).abs() > INFO_TOLERANCE {
        return Err(Error::InvalidProbabilityVector(format!(
            "{label} masses must sum to 1, got {total}"
        )));
    }
    Ok(())
}

/// Shannon entropy in bits.
pub fn entropy(masses: &[f64]) -> Result<f64> {
    check_masses("entropy", masses)?;
    Ok(masses.iter().copied().map(plogp).sum())
}

/// Relative entropy `D(p || q)` in bits. Infinite when `p` puts mass where
/// `q` has none; that is a legitimate value, not an error.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            actual: q.len(),
        });
    }
    check_masses("divergence p", p)?;
    check_masses("divergence q", q)?;
    let mut total = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi > 0.0 {
            if qi <= 0.0 {
                return Ok(f64::INFINITY);
            }
            total += pi * (pi / qi).log2();
        }
    }
    Ok(total.max(0.0))
}

/// Baseline difficulty of hitting a size-`k` target in a size-`n` space by
/// a single uniform draw: `-log2(k / n)` bits.
pub fn endogenous_information(k: usize, n: usize) -> Result<f64> {
    if n == 0 || k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "target size {k} and space size {n} must satisfy 0 < k <= n"
        )));
    }
    Ok(-((k as f64) / (n as f64)).log2())
}

/// A joint distribution over (target, resource) pairs with targets of one
/// common cardinality over one search space.
#[derive(Debug, Clone)]
pub struct JointDistribution {
    targets: Vec<TargetSet>,
    resources: Vec<InformationResource>,
    /// mass[i][j] = P(T = targets[i], F = resources[j])
    mass: Vec<Vec<f64>>,
    n: usize,
    k: usize,
}

impl JointDistribution {
    pub fn new(entries: Vec<(TargetSet, InformationResource, f64)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParameter(
                "joint distribution needs at least one entry".into(),
            ));
        }
        let n = entries[0].0.n();
        let k = entries[0].0.k();
        if k == 0 {
            return Err(Error::InvalidParameter(
                "joint distribution targets must be nonempty".into(),
            ));
        }
        let mut targets: Vec<TargetSet> = Vec::new();
        let mut resources: Vec<InformationResource> = Vec::new();
        let mut cells: Vec<(usize, usize, f64)> = Vec::with_capacity(entries.len());
        for (target, resource, p) in &entries {
            if target.n() != n || resource.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: if target.n() != n {
                        target.n()
                    } else {
                        resource.n()
                    },
                });
            }
            if target.k() != k {
                return Err(Error::InvalidParameter(format!(
                    "all targets must have cardinality {k}, found {}",
                    target.k()
                )));
            }
            if !p.is_finite() || *p < 0.0 {
                return Err(Error::InvalidProbabilityVector(
                    "joint masses must be finite and nonnegative".into(),
                ));
            }
            let ti = match targets.iter().position(|t| t == target) {
                Some(i) => i,
                None => {
                    targets.push(target.clone());
                    targets.len() - 1
                }
            };
            let fi = match resources
                .iter()
                .position(|f| f.alphabet() == resource.alphabet() && f.encode() == resource.encode())
            {
                Some(i) => i,
                None => {
                    resources.push(resource.clone());
                    resources.len() - 1
                }
            };
            if cells.iter().any(|&(a, b, _)| a == ti && b == fi) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate joint entry for target {:#x} and resource {}",
                    target.bitmask(),
                    resource.encode_hex()
                )));
            }
            cells.push((ti, fi, *p));
        }
        let total: f64 = cells.iter().map(|&(_, _, p)| p).sum();
        if (total - 1.0).abs() > INFO_TOLERANCE {
            return Err(Error::InvalidProbabilityVector(format!(
                "joint masses must sum to 1, got {total}"
            )));
        }
        let mut mass = vec![vec![0.0; resources.len()]; targets.len()];
        for (ti, fi, p) in cells {
            mass[ti][fi] = p;
        }
        Ok(Self {
            targets,
            resources,
            mass,
            n,
            k,
        })
    }

    /// Product joint from independent marginals.
    pub fn product(
        targets: Vec<(TargetSet, f64)>,
        resources: Vec<(InformationResource, f64)>,
    ) -> Result<Self> {
        let mut entries = Vec::with_capacity(targets.len() * resources.len());
        for (t, pt) in &targets {
            for (f, pf) in &resources {
                entries.push((t.clone(), f.clone(), pt * pf));
            }
        }
        Self::new(entries)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn targets(&self) -> &[TargetSet] {
        &self.targets
    }

    pub fn resources(&self) -> &[InformationResource] {
        &self.resources
    }

    pub fn mass(&self, target_index: usize, resource_index: usize) -> f64 {
        self.mass[target_index][resource_index]
    }

    pub fn target_marginal(&self) -> Vec<f64> {
        self.mass.iter().map(|row| row.iter().sum()).collect()
    }

    pub fn resource_marginal(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.resources.len()];
        for row in &self.mass {
            for (o, p) in out.iter_mut().zip(row) {
                *o += p;
            }
        }
        out
    }

    pub fn target_entropy(&self) -> Result<f64> {
        entropy(&self.target_marginal())
    }

    /// `H(T | F)`: expected entropy of the target conditioned on the
    /// resource.
    pub fn conditional_target_entropy(&self) -> f64 {
        let pf = self.resource_marginal();
        let mut total = 0.0;
        for (j, &pfj) in pf.iter().enumerate() {
            if pfj <= 0.0 {
                continue;
            }
            for row in &self.mass {
                let joint = row[j];
                if joint > 0.0 {
                    total += joint * (pfj / joint).log2();
                }
            }
        }
        total.max(0.0)
    }

    /// `I(T; F)` in bits, computed both as the joint/product divergence and
    /// as an entropy difference; the two must agree to within the
    /// cross-check tolerance.
    pub fn mutual_information(&self) -> Result<f64> {
        let pt = self.target_marginal();
        let pf = self.resource_marginal();
        let mut direct = 0.0;
        for (i, row) in self.mass.iter().enumerate() {
            for (j, &joint) in row.iter().enumerate() {
                if joint > 0.0 {
                    direct += joint * (joint / (pt[i] * pf[j])).log2();
                }
            }
        }
        let direct = direct.max(0.0);
        let via_entropy = (entropy(&pt)? - self.conditional_target_entropy()).max(0.0);
        if (direct - via_entropy).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "mutual information cross-check failed: {direct} vs {via_entropy}"
            )));
        }
        Ok(direct)
    }

    /// Divergence of the target marginal from uniform over all size-`k`
    /// subsets: `log2(C(n, k)) - H(T)`.
    pub fn target_divergence_from_uniform(&self) -> Result<f64> {
        let support = crate::space::binomial_u128(self.n as u64, self.k as u64) as f64;
        Ok((support.log2() - self.target_entropy()?).max(0.0))
    }

    /// Reads `target,resource,probability` rows. Targets are hex bitmasks
    /// over the space, resources hex encodings for the given alphabet. A
    /// header row is required.
    pub fn from_csv<R: BufRead>(reader: R, n: usize, alphabet: u32) -> Result<Self> {
        let mut entries = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if idx == 0 {
                if line != "target,resource,probability" {
                    return Err(Error::Parse(format!(
                        "expected header 'target,resource,probability', got '{line}'"
                    )));
                }
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 3 {
                return Err(Error::Parse(format!(
                    "row {idx}: expected 3 fields, got {}",
                    fields.len()
                )));
            }
            let bits = u32::from_str_radix(fields[0].trim_start_matches("0x"), 16)
                .map_err(|e| Error::Parse(format!("row {idx}: bad target bitmask: {e}")))?;
            let target = TargetSet::from_bitmask(n, bits)?;
            let code = u128::from_str_radix(fields[1].trim_start_matches("0x"), 16)
                .map_err(|e| Error::Parse(format!("row {idx}: bad resource code: {e}")))?;
            let resource = InformationResource::decode(n, alphabet, code)?;
            let p: f64 = fields[2]
                .parse()
                .map_err(|e| Error::Parse(format!("row {idx}: bad probability: {e}")))?;
            entries.push((target, resource, p));
        }
        Self::new(entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_reference_points() {
        assert_eq!(entropy(&[1.0]).unwrap(), 0.0);
        assert_eq!(entropy(&[0.5, 0.5]).unwrap(), 1.0);
        assert_eq!(entropy(&[0.25; 4]).unwrap(), 2.0);
        assert_eq!(entropy(&[0.0, 1.0, 0.0]).unwrap(), 0.0);
        let h = entropy(&[0.75, 0.25]).unwrap();
        assert!((h - (0.75f64 * (0.75f64).log2() + 0.25 * 0.25f64.log2()).abs()).abs() < 1e-15);
        assert!(entropy(&[0.5, 0.4]).is_err());
        assert!(entropy(&[1.5, -0.5]).is_err());
    }

    #[test]
    fn divergence_reference_points() {
        assert_eq!(kl_divergence(&[0.5, 0.5], &[0.5, 0.5]).unwrap(), 0.0);
        let d = kl_divergence(&[1.0, 0.0], &[0.5, 0.5]).unwrap();
        assert_eq!(d, 1.0);
        assert_eq!(
            kl_divergence(&[0.5, 0.5], &[1.0, 0.0]).unwrap(),
            f64::INFINITY
        );
        assert!(kl_divergence(&[1.0], &[0.5, 0.5]).is_err());
    }

    #[test]
    fn endogenous_information_reference_points() {
        assert_eq!(endogenous_information(1, 2).unwrap(), 1.0);
        assert_eq!(endogenous_information(1, 8).unwrap(), 3.0);
        assert_eq!(endogenous_information(4, 4).unwrap(), 0.0);
        assert!((endogenous_information(3, 10).unwrap() - 1.7369655941662063).abs() < 1e-15);
        assert!(endogenous_information(0, 4).is_err());
        assert!(endogenous_information(5, 4).is_err());
        assert!(endogenous_information(1, 0).is_err());
    }

    fn singleton(n: usize, i: usize) -> TargetSet {
        TargetSet::from_indices(n, &[i]).unwrap()
    }

    fn indicator(n: usize, i: usize) -> InformationResource {
        let mut v = vec![0u32; n];
        v[i] = 1;
        InformationResource::binary(v).unwrap()
    }

    /// Resource fully determines the target.
    fn informative_joint(n: usize) -> JointDistribution {
        let p = 1.0 / n as f64;
        JointDistribution::new(
            (0..n)
                .map(|i| (singleton(n, i), indicator(n, i), p))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn informative_joint_has_full_mutual_information() {
        let j = informative_joint(8);
        assert!((j.target_entropy().unwrap() - 3.0).abs() < 1e-12);
        assert!(j.conditional_target_entropy().abs() < 1e-12);
        assert!((j.mutual_information().unwrap() - 3.0).abs() < 1e-12);
        assert!(j.target_divergence_from_uniform().unwrap().abs() < 1e-12);
    }

    #[test]
    fn product_joint_has_zero_mutual_information() {
        let targets = (0..4).map(|i| (singleton(4, i), 0.25)).collect();
        let resources = vec![
            (indicator(4, 0), 0.5),
            (indicator(4, 1), 0.5),
        ];
        let j = JointDistribution::product(targets, resources).unwrap();
        assert!(j.mutual_information().unwrap().abs() < 1e-12);
        assert!((j.conditional_target_entropy() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn skewed_marginal_has_positive_divergence_from_uniform() {
        let j = JointDistribution::new(vec![
            (singleton(4, 0), indicator(4, 0), 0.7),
            (singleton(4, 1), indicator(4, 1), 0.3),
        ])
        .unwrap();
        // D = log2(4) - H(0.7, 0.3), with zero-mass targets dropping out.
        let expected = 2.0 - entropy(&[0.7, 0.3]).unwrap();
        assert!((j.target_divergence_from_uniform().unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn joint_validation_rejects_malformed_input() {
        assert!(JointDistribution::new(vec![]).is_err());
        // Mixed cardinality.
        assert!(JointDistribution::new(vec![
            (singleton(4, 0), indicator(4, 0), 0.5),
            (TargetSet::from_indices(4, &[1, 2]).unwrap(), indicator(4, 1), 0.5),
        ])
        .is_err());
        // Duplicate cell.
        assert!(JointDistribution::new(vec![
            (singleton(4, 0), indicator(4, 0), 0.5),
            (singleton(4, 0), indicator(4, 0), 0.5),
        ])
        .is_err());
        // Bad total.
        assert!(JointDistribution::new(vec![
            (singleton(4, 0), indicator(4, 0), 0.5),
            (singleton(4, 1), indicator(4, 1), 0.6),
        ])
        .is_err());
        // Empty target.
        assert!(JointDistribution::new(vec![(
            TargetSet::empty(4).unwrap(),
            indicator(4, 0),
            1.0
        )])
        .is_err());
    }

    #[test]
    fn csv_round_trip() {
        let csv = "target,resource,probability\n1,8,0.5\n2,4,0.5\n";
        let j = JointDistribution::from_csv(csv.as_bytes(), 4, 2).unwrap();
        assert_eq!(j.targets().len(), 2);
        assert_eq!(j.resources().len(), 2);
        // Resource code 8 is binary 1000: element 0 evaluates to 1.
        assert_eq!(j.resources()[0].evaluate(0), 1);
        assert_eq!(j.resources()[0].evaluate(1), 0);
        assert!((j.mutual_information().unwrap() - 1.0).abs() < 1e-12);
        assert!(JointDistribution::from_csv("bad header\n".as_bytes(), 4, 2).is_err());
        assert!(
            JointDistribution::from_csv("target,resource,probability\n1,8\n".as_bytes(), 4, 2)
                .is_err()
        );
    }
}
