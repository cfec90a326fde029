//! Dense vectors partitioned into contiguous, disjoint groups.
//!
//! A [`GroupedVector`] of length `n` carries `g` groups described by their
//! sizes; group `i` is the slice that follows groups `0..i`. All projection
//! routines in this crate take and return grouped vectors so that the
//! partition travels with the data.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GroupedVector {
    values: Vec<f64>,
    // offsets[i]..offsets[i + 1] is group i; len = g + 1
    offsets: Vec<usize>,
}

/// The three norms used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norms {
    /// `sum |v_i|`
    pub l1: f64,
    /// Sum over groups of the group's Euclidean norm.
    pub l12: f64,
    /// Sum over groups of the group's largest magnitude.
    pub linf_group_sum: f64,
}

impl GroupedVector {
    /// Builds a grouped vector from values and group sizes.
    ///
    /// Every size must be positive, the sizes must sum to `values.len()`,
    /// and every value must be finite.
    pub fn new(values: Vec<f64>, group_sizes: &[usize]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyVector);
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        if group_sizes.is_empty() {
            return Err(Error::GroupSizeMismatch {
                sum: 0,
                len: values.len(),
            });
        }
        let mut offsets = Vec::with_capacity(group_sizes.len() + 1);
        offsets.push(0);
        let mut sum = 0usize;
        for (index, &size) in group_sizes.iter().enumerate() {
            if size == 0 {
                return Err(Error::EmptyGroup { index });
            }
            sum = sum.saturating_add(size);
            offsets.push(sum);
        }
        if sum != values.len() {
            return Err(Error::GroupSizeMismatch {
                sum,
                len: values.len(),
            });
        }
        Ok(Self { values, offsets })
    }

    /// A vector whose entries all belong to one group.
    pub fn single_group(values: Vec<f64>) -> Result<Self> {
        let n = values.len();
        Self::new(values, &[n])
    }

    /// Splits `values` into `groups` contiguous groups of near-equal size;
    /// the first `n % groups` groups receive one extra entry.
    pub fn evenly_split(values: Vec<f64>, groups: usize) -> Result<Self> {
        let sizes = even_group_sizes(values.len(), groups)?;
        Self::new(values, &sizes)
    }

    /// Same partition, new values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        if values.len() != self.values.len() {
            return Err(Error::LengthMismatch {
                expected: self.values.len(),
                found: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self {
            values,
            offsets: self.offsets.clone(),
        })
    }

    /// Same partition, every entry zero.
    pub fn zeros_like(&self) -> Self {
        Self {
            values: vec![0.0; self.values.len()],
            offsets: self.offsets.clone(),
        }
    }

    // Internal constructor for values derived from an already-validated vector.
    pub(crate) fn from_parts_unchecked(values: Vec<f64>, offsets: Vec<usize>) -> Self {
        debug_assert_eq!(offsets.last().copied(), Some(values.len()));
        Self { values, offsets }
    }

    pub(crate) fn map_values(&self, f: impl FnMut(&f64) -> f64) -> Self {
        Self {
            values: self.values.iter().map(f).collect(),
            offsets: self.offsets.clone(),
        }
    }

    pub(crate) fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; kept for API symmetry with slices.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn group_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn group_sizes(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn group(&self, i: usize) -> &[f64] {
        &self.values[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn groups(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.offsets
            .windows(2)
            .map(move |w| &self.values[w[0]..w[1]])
    }

    /// Group index of every entry.
    pub fn group_index(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        for (i, w) in self.offsets.windows(2).enumerate() {
            out.extend(std::iter::repeat_n(i, w[1] - w[0]));
        }
        out
    }

    pub fn same_partition(&self, other: &Self) -> bool {
        self.offsets == other.offsets
    }

    pub fn norms(&self) -> Norms {
        let l1 = self.l1_norm();
        let (l12, linf_group_sum) = self.groups().fold((0.0, 0.0), |(a, b), grp| {
            (
                a + l2(grp),
                b + grp.iter().fold(0.0f64, |m, v| m.max(v.abs())),
            )
        });
        Norms {
            l1,
            l12,
            linf_group_sum,
        }
    }

    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum()
    }

    pub fn l12_norm(&self) -> f64 {
        self.groups().map(l2).sum()
    }

    pub fn l1inf_norm(&self) -> f64 {
        self.groups()
            .map(|grp| grp.iter().fold(0.0f64, |m, v| m.max(v.abs())))
            .sum()
    }

    /// Euclidean norm of each group.
    pub fn group_l2_norms(&self) -> Vec<f64> {
        self.groups().map(l2).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Euclidean distance to another vector of the same length.
    pub fn distance(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// `max_i |self_i - other_i|`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Replaces every entry by its magnitude and records the original signs.
    pub fn reflect_to_positive(&self) -> (GroupedVector, SignMask) {
        let mut signs = Vec::with_capacity(self.len());
        let values = self
            .values
            .iter()
            .map(|&v| {
                // sign(0) := +1, including -0.0
                if v < 0.0 {
                    signs.push(Sign::Negative);
                    -v
                } else {
                    signs.push(Sign::Positive);
                    v
                }
            })
            .collect();
        (
            Self {
                values,
                offsets: self.offsets.clone(),
            },
            SignMask { signs },
        )
    }
}

/// Magnitudes between these bounds square and sum without overflow or underflow.
const SAFE_MAGNITUDE: f64 = 1e150;

/// Exact power-of-two factor that brings `max_abs` near 1, or `None` when the
/// input is already in the safe range. Projections are positively
/// homogeneous, so callers project `s c` onto radii `s tau` and divide by `s`.
pub(crate) fn rescale_factor(max_abs: f64) -> Option<f64> {
    if max_abs == 0.0 || (1.0 / SAFE_MAGNITUDE..=SAFE_MAGNITUDE).contains(&max_abs) {
        return None;
    }
    let e = (max_abs.log2().floor() as i32).clamp(-1000, 1000);
    Some(2f64.powi(-e))
}

/// Radius scaled by `s`; a positive radius stays positive and finite.
pub(crate) fn scale_radius(tau: f64, s: f64) -> f64 {
    if tau == 0.0 {
        0.0
    } else {
        (tau * s).clamp(f64::from_bits(1), f64::MAX)
    }
}

/// Euclidean norm of a slice.
pub(crate) fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Sizes of `groups` contiguous groups covering `n` entries as evenly as possible.
pub fn even_group_sizes(n: usize, groups: usize) -> Result<Vec<usize>> {
    if groups == 0 || groups > n {
        return Err(Error::InvalidParameter(format!(
            "cannot split {n} entries into {groups} nonempty groups"
        )));
    }
    let base = n / groups;
    let extra = n % groups;
    Ok((0..groups).map(|i| base + usize::from(i < extra)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
}

/// Signs recorded by [`GroupedVector::reflect_to_positive`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignMask {
    signs: Vec<Sign>,
}

impl SignMask {
    pub fn new(signs: Vec<Sign>) -> Self {
        Self { signs }
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    /// Multiplies each entry of `x` by the recorded sign.
    pub fn restore(&self, x: &GroupedVector) -> Result<GroupedVector> {
        if x.len() != self.signs.len() {
            return Err(Error::LengthMismatch {
                expected: self.signs.len(),
                found: x.len(),
            });
        }
        let values = x
            .values
            .iter()
            .zip(&self.signs)
            .map(|(&v, s)| match s {
                Sign::Positive => v,
                Sign::Negative => -v,
            })
            .collect();
        Ok(GroupedVector::from_parts_unchecked(
            values,
            x.offsets.clone(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gv(values: &[f64], sizes: &[usize]) -> GroupedVector {
        GroupedVector::new(values.to_vec(), sizes).unwrap()
    }

    #[test]
    fn norms_two_groups() {
        let v = gv(&[3.0, 4.0, 0.0, 1.0], &[2, 2]);
        // per-element loop as an independent check
        let mut l1 = 0.0;
        for x in v.values() {
            l1 += x.abs();
        }
        let n = v.norms();
        assert_eq!(n.l1, l1);
        assert_eq!(n.l1, 8.0);
        assert_eq!(n.l12, 6.0);
        assert_eq!(n.linf_group_sum, 5.0);
    }

    #[test]
    fn norms_zero_and_single() {
        let n = gv(&[0.0; 5], &[2, 3]).norms();
        assert_eq!((n.l1, n.l12, n.linf_group_sum), (0.0, 0.0, 0.0));
        let n = gv(&[-2.0], &[1]).norms();
        assert_eq!((n.l1, n.l12, n.linf_group_sum), (2.0, 2.0, 2.0));
    }

    #[test]
    fn rejects_bad_partitions() {
        assert_eq!(
            GroupedVector::new(vec![1.0, 2.0], &[1, 2]),
            Err(Error::GroupSizeMismatch { sum: 3, len: 2 })
        );
        assert_eq!(
            GroupedVector::new(vec![1.0, 2.0], &[2, 0]),
            Err(Error::EmptyGroup { index: 1 })
        );
        assert_eq!(GroupedVector::new(vec![], &[]), Err(Error::EmptyVector));
        assert_eq!(
            GroupedVector::new(vec![1.0, f64::NAN], &[2]),
            Err(Error::NonFinite { index: 1 })
        );
    }

    #[test]
    fn reflect_examples() {
        let (r, m) = gv(&[-3.0, 2.0], &[2]).reflect_to_positive();
        assert_eq!(r.values(), &[3.0, 2.0]);
        assert_eq!(m.signs(), &[Sign::Negative, Sign::Positive]);

        let (r, m) = gv(&[0.0, -0.5], &[1, 1]).reflect_to_positive();
        assert_eq!(r.values(), &[0.0, 0.5]);
        assert_eq!(m.signs(), &[Sign::Positive, Sign::Negative]);

        let v = gv(&[1.0, 0.0, 2.5], &[3]);
        let (r, m) = v.reflect_to_positive();
        assert_eq!(r, v);
        assert!(m.signs().iter().all(|s| *s == Sign::Positive));
    }

    #[test]
    fn restore_examples() {
        let m = SignMask::new(vec![Sign::Negative, Sign::Positive]);
        let x = gv(&[2.0, 1.0], &[2]);
        assert_eq!(m.restore(&x).unwrap().values(), &[-2.0, 1.0]);
        let z = gv(&[0.0, 0.0], &[1, 1]);
        assert!(m.restore(&z).unwrap().values().iter().all(|v| *v == 0.0));
        let short = gv(&[1.0], &[1]);
        assert_eq!(
            m.restore(&short),
            Err(Error::LengthMismatch {
                expected: 2,
                found: 1
            })
        );
    }

    #[test]
    fn even_split() {
        assert_eq!(even_group_sizes(10, 3).unwrap(), vec![4, 3, 3]);
        assert!(even_group_sizes(2, 3).is_err());
        let v = GroupedVector::evenly_split(vec![1.0; 7], 2).unwrap();
        assert_eq!(v.group_sizes(), vec![4, 3]);
        assert_eq!(v.group_index(), vec![0, 0, 0, 0, 1, 1, 1]);
    }
}
