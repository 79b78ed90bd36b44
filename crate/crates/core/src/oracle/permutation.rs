use std::fmt;

use crate::error::{Error, Result};
use crate::numeric::Profile;

/// A permutation of `{0, ..., K-1}` stored as its image array.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x >= images.len() || std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidArgument(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Self { images })
    }

    /// Builds from one-based images, e.g. `[2, 1, 3]` swaps the first two points.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidArgument("one-based images must be positive".into()));
        }
        Self::new(images.iter().map(|&x| x - 1).collect())
    }

    pub fn identity(points: usize) -> Self {
        Self {
            images: (0..points).collect(),
        }
    }

    /// The product of consecutive-block cycles `(1..k_1)(k_1+1..k_1+k_2)...`.
    pub fn canonical(profile: &Profile) -> Self {
        let mut images = Vec::with_capacity(profile.degree() as usize);
        let mut start = 0;
        for &k in profile.parts() {
            let k = k as usize;
            images.extend((start + 1..start + k).chain(std::iter::once(start)));
            start += k;
        }
        Self { images }
    }

    pub fn points(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.points(), other.points());
        Permutation {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> Profile {
        Profile::new(self.cycles().iter().map(|c| c.len() as u32).collect::<Vec<_>>())
            .expect("a permutation of at least one point has a valid cycle type")
    }

    pub fn is_even(&self) -> bool {
        (self.images.len() - self.cycles().len()) % 2 == 0
    }
}

pub fn cycle_type(p: &Permutation) -> Profile {
    p.cycle_type()
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for c in self.cycles().into_iter().filter(|c| c.len() > 1) {
            wrote = true;
            f.write_str("(")?;
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", x + 1)?;
            }
            f.write_str(")")?;
        }
        if !wrote {
            f.write_str("()")?;
        }
        Ok(())
    }
}
