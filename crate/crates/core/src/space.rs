//! The search problem triple: search space, target sets, information resources.
//!
//! Elements of the search space are plain indices `0..n`. Target sets are
//! k-hot indicator vectors stored as bitmasks; information resources are full
//! evaluation tables over the space with a canonical big-endian bit-string
//! encoding.

use crate::error::{Error, Result};
use crate::prob::ProbabilityVector;
use crate::scalar::Scalar;

/// Largest `n` for which exhaustive target enumeration is permitted.
pub const ENUMERATION_CAP: usize = 24;

/// Largest number of evaluation tables `v^n` for exhaustive resource enumeration.
pub const RESOURCE_CAP: u128 = 1 << 20;

/// The finite discrete search space: `n` elements addressed by index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchSpace {
    size: usize,
}

impl SearchSpace {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidParameter(
                "search space must have at least one element".into(),
            ));
        }
        Ok(Self { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Whether exhaustive `2^n` enumeration over this space is allowed.
    pub fn within_enumeration_cap(&self) -> bool {
        self.size <= ENUMERATION_CAP
    }
}

/// A subset of the search space as a k-hot indicator, stored as a bitmask
/// with element `i` at bit `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TargetSet {
    bits: u32,
    n: usize,
}

impl TargetSet {
    pub fn from_bitmask(n: usize, bits: u32) -> Result<Self> {
        if n == 0 || n > 32 {
            return Err(Error::InvalidParameter(format!(
                "target dimension {n} out of range"
            )));
        }
        if n < 32 && bits >= 1u32 << n {
            return Err(Error::InvalidParameter(format!(
                "bitmask {bits:#x} has bits outside 0..{n}"
            )));
        }
        Ok(Self { bits, n })
    }

    pub fn from_indices(n: usize, indices: &[usize]) -> Result<Self> {
        let mut bits = 0u32;
        for &i in indices {
            if i >= n {
                return Err(Error::InvalidParameter(format!(
                    "target index {i} out of range for n = {n}"
                )));
            }
            bits |= 1 << i;
        }
        Self::from_bitmask(n, bits)
    }

    /// The empty target. Admitted only inside whole-powerset enumerations,
    /// where its success value is zero by definition.
    pub fn empty(n: usize) -> Result<Self> {
        Self::from_bitmask(n, 0)
    }

    pub fn full(n: usize) -> Result<Self> {
        let bits = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        Self::from_bitmask(n, bits)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bitmask(&self) -> u32 {
        self.bits
    }

    /// Cardinality `k`: the number of ones in the indicator.
    pub fn k(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty_set(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, element: usize) -> bool {
        element < self.n && (self.bits >> element) & 1 == 1
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&i| self.contains(i))
    }

    pub fn indicator(&self) -> Vec<u8> {
        (0..self.n).map(|i| self.contains(i) as u8).collect()
    }

    /// `t' P`: total probability mass on the target.
    pub fn dot<S: Scalar>(&self, p: &ProbabilityVector<S>) -> Result<S> {
        if p.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: p.len(),
            });
        }
        let mut total = S::zero();
        for i in self.members() {
            total = total + p.get(i).clone();
        }
        Ok(total)
    }
}

/// An external information resource: the full evaluation table `f: Ω → {0..v-1}`,
/// encodable as a bit string of length `m = n * ceil(log2 v)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InformationResource {
    evaluations: Vec<u32>,
    alphabet: u32,
}

fn bits_per_value(alphabet: u32) -> u32 {
    if alphabet <= 1 {
        0
    } else {
        32 - (alphabet - 1).leading_zeros()
    }
}

impl InformationResource {
    pub fn new(evaluations: Vec<u32>, alphabet: u32) -> Result<Self> {
        if alphabet == 0 {
            return Err(Error::InvalidParameter("alphabet size must be >= 1".into()));
        }
        if evaluations.is_empty() {
            return Err(Error::InvalidParameter(
                "evaluation table must cover at least one element".into(),
            ));
        }
        if let Some(&bad) = evaluations.iter().find(|&&e| e >= alphabet) {
            return Err(Error::InvalidParameter(format!(
                "evaluation {bad} outside alphabet 0..{alphabet}"
            )));
        }
        Ok(Self {
            evaluations,
            alphabet,
        })
    }

    /// Binary table shorthand (alphabet {0,1}).
    pub fn binary(evaluations: Vec<u32>) -> Result<Self> {
        Self::new(evaluations, 2)
    }

    pub fn n(&self) -> usize {
        self.evaluations.len()
    }

    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }

    pub fn evaluations(&self) -> &[u32] {
        &self.evaluations
    }

    pub fn evaluate(&self, element: usize) -> u32 {
        self.evaluations[element]
    }

    /// Encoding length in bits: `n * ceil(log2 v)`.
    pub fn bit_length(&self) -> u32 {
        self.evaluations.len() as u32 * bits_per_value(self.alphabet)
    }

    /// Canonical big-endian encoding: element 0's value occupies the most
    /// significant bits. This integer is the resource's identity in reports.
    pub fn encode(&self) -> u128 {
        let bits = bits_per_value(self.alphabet);
        let mut code = 0u128;
        for &e in &self.evaluations {
            code = (code << bits) | e as u128;
        }
        code
    }

    /// Encoding as a hexadecimal bit string, zero-padded to the full width.
    pub fn encode_hex(&self) -> String {
        let nibbles = self.bit_length().div_ceil(4).max(1) as usize;
        format!("{:0width$x}", self.encode(), width = nibbles)
    }

    /// Inverse of [`encode`](Self::encode).
    pub fn decode(n: usize, alphabet: u32, code: u128) -> Result<Self> {
        let bits = bits_per_value(alphabet);
        if bits as usize * n > 128 {
            return Err(Error::InvalidParameter(format!(
                "encoding of {n} values over alphabet {alphabet} exceeds 128 bits"
            )));
        }
        let mask = if bits == 0 { 0 } else { (1u128 << bits) - 1 };
        let mut evaluations = vec![0u32; n];
        for i in 0..n {
            let shift = bits as usize * (n - 1 - i);
            evaluations[i] = ((code >> shift) & mask) as u32;
        }
        if bits as usize * n < 128 && code >> (bits as usize * n) != 0 {
            return Err(Error::Parse(format!(
                "encoding {code:#x} has bits beyond length {}",
                bits as usize * n
            )));
        }
        Self::new(evaluations, alphabet)
    }

    pub fn decode_hex(n: usize, alphabet: u32, hex: &str) -> Result<Self> {
        let code = u128::from_str_radix(hex.trim_start_matches("0x"), 16)
            .map_err(|e| Error::Parse(format!("bad resource encoding {hex:?}: {e}")))?;
        Self::decode(n, alphabet, code)
    }
}

/// Yields every target of cardinality `k` (when given) in ascending bitmask
/// order, or the entire powerset including the empty set (when `k` is absent).
pub fn enumerate_targets(n: usize, k: Option<usize>) -> Result<TargetEnumeration> {
    enumerate_targets_with_cap(n, k, ENUMERATION_CAP)
}

pub fn enumerate_targets_with_cap(
    n: usize,
    k: Option<usize>,
    cap: usize,
) -> Result<TargetEnumeration> {
    if n == 0 || n > cap.min(32) {
        return Err(Error::EnumerationCapExceeded {
            what: "target dimension n",
            requested: n as u128,
            cap: cap.min(32) as u128,
        });
    }
    if let Some(k) = k {
        if k > n {
            return Err(Error::InvalidParameter(format!(
                "cardinality {k} exceeds n = {n}"
            )));
        }
    }
    Ok(TargetEnumeration {
        n,
        k,
        next: Some(match k {
            // Gosper's hack starts from the lowest k-bit mask.
            Some(0) | None => 0,
            Some(k) => (1u32 << k) - 1,
        }),
    })
}

pub struct TargetEnumeration {
    n: usize,
    k: Option<usize>,
    next: Option<u32>,
}

impl Iterator for TargetEnumeration {
    type Item = TargetSet;

    fn next(&mut self) -> Option<Self::Item> {
        let bits = self.next?;
        let limit = if self.n == 32 {
            u32::MAX
        } else {
            (1u32 << self.n) - 1
        };
        let item = TargetSet {
            bits,
            n: self.n,
        };
        self.next = match self.k {
            None => {
                if bits == limit {
                    None
                } else {
                    Some(bits + 1)
                }
            }
            Some(0) => None,
            Some(_) => {
                // Gosper's hack: next-larger mask with the same popcount.
                let x = bits & bits.wrapping_neg();
                let y = bits.wrapping_add(x);
                let succ = (((bits & !y) / x) >> 1) | y;
                if succ > limit || y == 0 {
                    None
                } else {
                    Some(succ)
                }
            }
        };
        Some(item)
    }
}

/// Yields all `v^n` evaluation tables, ordered by their integer encoding.
pub fn enumerate_resources(n: usize, alphabet: u32) -> Result<ResourceEnumeration> {
    enumerate_resources_with_cap(n, alphabet, RESOURCE_CAP)
}

pub fn enumerate_resources_with_cap(
    n: usize,
    alphabet: u32,
    cap: u128,
) -> Result<ResourceEnumeration> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    if alphabet == 0 {
        return Err(Error::InvalidParameter("alphabet size must be >= 1".into()));
    }
    let total = (alphabet as u128)
        .checked_pow(n as u32)
        .filter(|&t| t <= cap)
        .ok_or(Error::EnumerationCapExceeded {
            what: "resource table count v^n",
            requested: (alphabet as u128).checked_pow(n as u32).unwrap_or(u128::MAX),
            cap,
        })?;
    Ok(ResourceEnumeration {
        n,
        alphabet,
        digits: vec![0; n],
        remaining: total,
    })
}

pub struct ResourceEnumeration {
    n: usize,
    alphabet: u32,
    digits: Vec<u32>,
    remaining: u128,
}

impl Iterator for ResourceEnumeration {
    type Item = InformationResource;

    fn next(&mut self) -> Option<Self::Item> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let item = InformationResource {
            evaluations: self.digits.clone(),
            alphabet: self.alphabet,
        };
        // Big-endian odometer: element n-1 is the least significant digit, so
        // successive tables come out in increasing encoding order.
        for i in (0..self.n).rev() {
            self.digits[i] += 1;
            if self.digits[i] < self.alphabet {
                break;
            }
            self.digits[i] = 0;
        }
        Some(item)
    }
}

/// Exact binomial coefficient in `u128`; callers stay well inside overflow range.
pub fn binomial_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for j in 0..k {
        c = c * (n - j) as u128 / (j + 1) as u128;
    }
    c
}
