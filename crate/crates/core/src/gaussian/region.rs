use serde::Serialize;

use crate::{Error, Result};

/// Two equal regions of `d` consecutive modes separated by `separation`
/// modes, centered in a line of `total` modes.
///
/// When the leftover sites do not split evenly the extra one goes right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegionSpec {
    pub total: usize,
    pub d: usize,
    pub separation: usize,
}

impl RegionSpec {
    pub fn new(total: usize, d: usize, separation: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument(
                "region size must be at least 1".into(),
            ));
        }
        if 2 * d + separation > total {
            return Err(Error::InvalidArgument(format!(
                "two regions of {d} with separation {separation} do not fit in {total} modes"
            )));
        }
        Ok(Self {
            total,
            d,
            separation,
        })
    }

    /// Smallest line holding both regions with no margin.
    pub fn tight(d: usize, separation: usize) -> Result<Self> {
        Self::new(2 * d + separation, d, separation)
    }

    pub fn left_margin(&self) -> usize {
        (self.total - 2 * self.d - self.separation) / 2
    }

    pub fn region_a(&self) -> Vec<usize> {
        let l = self.left_margin();
        (l..l + self.d).collect()
    }

    pub fn region_b(&self) -> Vec<usize> {
        let start = self.left_margin() + self.d + self.separation;
        (start..start + self.d).collect()
    }

    /// `A` followed by `B`.
    pub fn modes(&self) -> Vec<usize> {
        let mut m = self.region_a();
        m.extend(self.region_b());
        m
    }

    /// Everything outside `A ∪ B`.
    pub fn complement(&self) -> Vec<usize> {
        let inside = self.modes();
        (0..self.total).filter(|i| !inside.contains(i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centered_placement() {
        let r = RegionSpec::new(150, 1, 0).unwrap();
        assert_eq!(r.modes(), vec![74, 75]);
        let r = RegionSpec::new(150, 1, 1).unwrap();
        assert_eq!(r.modes(), vec![73, 75]);
        let r = RegionSpec::new(10, 3, 4).unwrap();
        assert_eq!((r.region_a(), r.region_b()), (vec![0, 1, 2], vec![7, 8, 9]));
        assert!(r.complement() == vec![3, 4, 5, 6]);
    }

    #[test]
    fn infeasible_geometry() {
        assert!(RegionSpec::new(10, 3, 5).is_err());
        assert!(RegionSpec::new(10, 0, 1).is_err());
    }
}
