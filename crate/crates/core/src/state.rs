//! State vectors, norms and convex domains.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Index;

use crate::error::{Error, Result};

/// A point of the state space: one finite real per stage (or patch).
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector(Vec<f64>);

impl StateVector {
    /// Builds a state, rejecting NaN and infinite components.
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.iter().all(|v| v.is_finite()) {
            Ok(Self(components))
        } else {
            Err(Error::NonFiniteState)
        }
    }

    pub fn from_slice(components: &[f64]) -> Result<Self> {
        Self::new(components.to_vec())
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn iter(&self) -> core::slice::Iter<'_, f64> {
        self.0.iter()
    }

    pub fn norm(&self, kind: NormKind) -> f64 {
        kind.eval(&self.0)
    }

    /// `‖self − other‖` under `kind`. Dimensions must agree.
    pub fn distance(&self, other: &StateVector, kind: NormKind) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        kind.eval_diff(&self.0, &other.0)
    }

    pub(crate) fn check_dim(&self, expected: usize) -> Result<()> {
        check_dim(self.dim(), expected)
    }
}

impl Index<usize> for StateVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl AsRef<[f64]> for StateVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for StateVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

pub(crate) fn check_dim(found: usize, expected: usize) -> Result<()> {
    if found == expected {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// The vector norms used by the stability bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum NormKind {
    #[default]
    Max,
    Euclidean,
    Sum,
}

impl NormKind {
    pub const ALL: [NormKind; 3] = [NormKind::Max, NormKind::Euclidean, NormKind::Sum];

    pub fn eval(self, x: &[f64]) -> f64 {
        match self {
            NormKind::Max => x.iter().fold(0.0, |m, v| f64::max(m, v.abs())),
            NormKind::Euclidean => libm::sqrt(x.iter().map(|v| v * v).sum()),
            NormKind::Sum => x.iter().map(|v| v.abs()).sum(),
        }
    }

    /// `‖x − y‖` without allocating.
    pub fn eval_diff(self, x: &[f64], y: &[f64]) -> f64 {
        let diffs = x.iter().zip(y).map(|(a, b)| a - b);
        match self {
            NormKind::Max => diffs.fold(0.0, |m, v| f64::max(m, v.abs())),
            NormKind::Euclidean => libm::sqrt(diffs.map(|v| v * v).sum()),
            NormKind::Sum => diffs.map(|v| v.abs()).sum(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NormKind::Max => "max",
            NormKind::Euclidean => "euclidean",
            NormKind::Sum => "sum",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "max" | "inf" => Some(NormKind::Max),
            "euclidean" | "l2" => Some(NormKind::Euclidean),
            "sum" | "l1" => Some(NormKind::Sum),
            _ => None,
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `‖x‖` for a raw slice; fails on non-finite components.
pub fn norm(x: &[f64], kind: NormKind) -> Result<f64> {
    if x.iter().all(|v| v.is_finite()) {
        Ok(kind.eval(x))
    } else {
        Err(Error::NonFiniteState)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DomainKind {
    NonnegativeOrthant,
    Box { lo: Vec<f64>, hi: Vec<f64> },
    FullSpace,
}

/// A closed convex subset of `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainSpec {
    kind: DomainKind,
    dim: usize,
}

impl DomainSpec {
    pub fn orthant(dim: usize) -> Self {
        Self {
            kind: DomainKind::NonnegativeOrthant,
            dim,
        }
    }

    pub fn full(dim: usize) -> Self {
        Self {
            kind: DomainKind::FullSpace,
            dim,
        }
    }

    pub fn boxed(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        check_dim(hi.len(), lo.len())?;
        if lo.iter().chain(&hi).any(|v| v.is_nan()) {
            return Err(Error::NonFiniteState);
        }
        if let Some(i) = lo.iter().zip(&hi).position(|(l, h)| l > h) {
            return Err(Error::InvalidBox(i));
        }
        let dim = lo.len();
        Ok(Self {
            kind: DomainKind::Box { lo, hi },
            dim,
        })
    }

    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Closed-set membership: boundary points are contained.
    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        check_dim(x.len(), self.dim)?;
        Ok(self.contains_unchecked(x))
    }

    pub(crate) fn contains_unchecked(&self, x: &[f64]) -> bool {
        match &self.kind {
            DomainKind::NonnegativeOrthant => x.iter().all(|v| *v >= 0.0),
            DomainKind::Box { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi))
                .all(|(v, (l, h))| l <= v && v <= h),
            DomainKind::FullSpace => x.iter().all(|v| !v.is_nan()),
        }
    }

    /// Membership in the interior (strict inequalities on every bound).
    pub fn is_interior(&self, x: &[f64]) -> Result<bool> {
        check_dim(x.len(), self.dim)?;
        Ok(match &self.kind {
            DomainKind::NonnegativeOrthant => x.iter().all(|v| *v > 0.0),
            DomainKind::Box { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi))
                .all(|(v, (l, h))| l < v && v < h),
            DomainKind::FullSpace => x.iter().all(|v| v.is_finite()),
        })
    }

    /// Clamps `x` onto the domain (nearest point in every norm used here).
    pub fn project(&self, x: &mut [f64]) {
        match &self.kind {
            DomainKind::NonnegativeOrthant => {
                for v in x.iter_mut() {
                    *v = v.max(0.0);
                }
            }
            DomainKind::Box { lo, hi } => {
                for (v, (l, h)) in x.iter_mut().zip(lo.iter().zip(hi)) {
                    *v = v.clamp(*l, *h);
                }
            }
            DomainKind::FullSpace => {}
        }
    }

    /// True when `self ⊆ other` (both boxes, orthant or full space).
    pub fn is_subset_of(&self, other: &DomainSpec) -> bool {
        if self.dim != other.dim {
            return false;
        }
        match (&self.kind, &other.kind) {
            (_, DomainKind::FullSpace) => true,
            (DomainKind::FullSpace, _) => false,
            (DomainKind::NonnegativeOrthant, DomainKind::NonnegativeOrthant) => true,
            (DomainKind::Box { lo, .. }, DomainKind::NonnegativeOrthant) => {
                lo.iter().all(|l| *l >= 0.0)
            }
            (DomainKind::NonnegativeOrthant, DomainKind::Box { .. }) => false,
            (DomainKind::Box { lo: l1, hi: h1 }, DomainKind::Box { lo: l2, hi: h2 }) => l1
                .iter()
                .zip(h1)
                .zip(l2.iter().zip(h2))
                .all(|((a, b), (c, d))| c <= a && b <= d),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sv(v: &[f64]) -> StateVector {
        StateVector::from_slice(v).unwrap()
    }

    #[test]
    fn norm_examples() {
        assert_eq!(sv(&[1.0, -2.0, 3.0]).norm(NormKind::Max), 3.0);
        assert_eq!(sv(&[3.0, 4.0]).norm(NormKind::Euclidean), 5.0);
        for k in NormKind::ALL {
            assert_eq!(sv(&[0.0, 0.0, 0.0]).norm(k), 0.0);
        }
        assert_eq!(
            norm(&[f64::NAN, 1.0], NormKind::Sum),
            Err(Error::NonFiniteState)
        );
        assert_eq!(
            StateVector::new(alloc::vec![1.0, f64::INFINITY]),
            Err(Error::NonFiniteState)
        );
    }

    #[test]
    fn contains_examples() {
        let orthant = DomainSpec::orthant(2);
        assert!(orthant.contains(&[1.0, 2.0]).unwrap());
        assert!(!orthant.contains(&[-1.0, 0.0]).unwrap());
        let unit = DomainSpec::boxed(alloc::vec![0.0, 0.0], alloc::vec![1.0, 1.0]).unwrap();
        assert!(unit.contains(&[0.5, 1.0]).unwrap());
        assert!(!unit.is_interior(&[0.5, 1.0]).unwrap());
        assert_eq!(
            unit.contains(&[0.5]),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 1
            })
        );
        assert_eq!(
            DomainSpec::boxed(alloc::vec![0.0, 2.0], alloc::vec![1.0, 1.0]),
            Err(Error::InvalidBox(1))
        );
    }

    #[test]
    fn projection_lands_in_domain() {
        let b = DomainSpec::boxed(alloc::vec![0.0, -1.0], alloc::vec![1.0, 1.0]).unwrap();
        let mut x = [3.0, -4.0];
        b.project(&mut x);
        assert_eq!(x, [1.0, -1.0]);
        let mut y = [-0.5, 2.0];
        DomainSpec::orthant(2).project(&mut y);
        assert_eq!(y, [0.0, 2.0]);
    }

    fn vec3() -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(-1e3..1e3f64, 1..8)
    }

    proptest! {
        #[test]
        fn norm_axioms(x in vec3(), seed in proptest::collection::vec(-1e3..1e3f64, 8), a in -10.0..10.0f64) {
            let y: Vec<f64> = seed[..x.len()].to_vec();
            let sum: Vec<f64> = x.iter().zip(&y).map(|(p, q)| p + q).collect();
            let scaled: Vec<f64> = x.iter().map(|p| a * p).collect();
            for k in NormKind::ALL {
                let nx = k.eval(&x);
                prop_assert!(nx >= 0.0);
                prop_assert!(k.eval(&sum) <= nx + k.eval(&y) + 1e-9);
                prop_assert!((k.eval(&scaled) - a.abs() * nx).abs() <= 1e-9 * (1.0 + nx * a.abs()));
                prop_assert_eq!(nx == 0.0, x.iter().all(|v| *v == 0.0));
            }
            let m = NormKind::Max.eval(&x);
            let e = NormKind::Euclidean.eval(&x);
            let s = NormKind::Sum.eval(&x);
            prop_assert!(m <= e * (1.0 + 1e-12) && e <= s * (1.0 + 1e-12));
        }

        #[test]
        fn contains_monotone_under_nesting(
            lo in proptest::collection::vec(-5.0..0.0f64, 3),
            w in proptest::collection::vec(0.0..5.0f64, 3),
            grow in proptest::collection::vec(0.0..2.0f64, 6),
            x in proptest::collection::vec(-6.0..6.0f64, 3),
        ) {
            let hi: Vec<f64> = lo.iter().zip(&w).map(|(l, w)| l + w).collect();
            let lo2: Vec<f64> = lo.iter().zip(&grow[..3]).map(|(l, g)| l - g).collect();
            let hi2: Vec<f64> = hi.iter().zip(&grow[3..]).map(|(h, g)| h + g).collect();
            let inner = DomainSpec::boxed(lo, hi).unwrap();
            let outer = DomainSpec::boxed(lo2, hi2).unwrap();
            prop_assert!(inner.is_subset_of(&outer));
            if inner.contains(&x).unwrap() {
                prop_assert!(outer.contains(&x).unwrap());
            }
        }
    }
}
