use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// The ambient moduli space of stable genus-`g` curves with `n` ordered
/// marked points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MarkedSpace {
    pub g: u32,
    pub n: u32,
}

impl MarkedSpace {
    pub fn new(g: u32, n: u32) -> Result<Self> {
        let space = MarkedSpace { g, n };
        if !space.is_stable() {
            return Err(Error::UnstableSpace { g, n });
        }
        Ok(space)
    }

    pub fn is_stable(&self) -> bool {
        2 * self.g as i64 - 2 + self.n as i64 > 0
    }

    pub fn dim(&self) -> u32 {
        (3 * self.g as i64 - 3 + self.n as i64) as u32
    }
}

/// Stability of a single vertex moduli space (g_v, valence).
pub fn vertex_stable(g: u32, valence: u32) -> bool {
    2 * g as i64 - 2 + valence as i64 > 0
}

impl std::fmt::Display for MarkedSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.g, self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stability_and_dim() {
        assert!(MarkedSpace::new(0, 2).is_err());
        assert!(MarkedSpace::new(1, 0).is_err());
        assert_eq!(MarkedSpace::new(2, 0).unwrap().dim(), 3);
        assert_eq!(MarkedSpace::new(2, 3).unwrap().dim(), 6);
        assert_eq!(MarkedSpace::new(0, 3).unwrap().dim(), 0);
    }
}
