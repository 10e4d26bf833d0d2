use serde::{Deserialize, Serialize};

use crate::embedding::AtomRegister;
use crate::error::{Result, SdrError};

/// Largest register simulated in the full product basis (2^24 amplitudes,
/// 256 MiB of complex doubles).
pub const MAX_FULL_ATOMS: usize = 24;
pub const MAX_BLOCKADE_STATES: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisMode {
    Full,
    Blockade,
}

/// Enumerated computational basis, sorted by bitmask value.
impl std::str::FromStr for BasisMode {
    type Err = SdrError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(BasisMode::Full),
            "blockade" => Ok(BasisMode::Blockade),
            other => Err(SdrError::invalid(format!("unknown basis mode `{other}` (expected full or blockade)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasisSpec {
    pub mode: BasisMode,
    /// µm; meaningful only in blockade mode.
    pub blockade_radius: f64,
    pub n_atoms: usize,
    pub states: Vec<u64>,
}

impl BasisSpec {
    pub fn dim(&self) -> usize {
        self.states.len()
    }

    #[inline]
    pub fn index_of(&self, state: u64) -> Option<usize> {
        match self.mode {
            BasisMode::Full => ((state >> self.n_atoms) == 0).then_some(state as usize),
            BasisMode::Blockade => self.states.binary_search(&state).ok(),
        }
    }

    #[inline]
    pub fn state(&self, index: usize) -> u64 {
        self.states[index]
    }
}

pub fn enumerate_basis(register: &AtomRegister, mode: BasisMode, blockade_radius: f64) -> Result<BasisSpec> {
    let n = register.len();
    match mode {
        BasisMode::Full => {
            if n > MAX_FULL_ATOMS {
                return Err(SdrError::BasisTooLarge(format!(
                    "{n} atoms exceed the full-basis limit of {MAX_FULL_ATOMS}; use blockade mode"
                )));
            }
            Ok(BasisSpec {
                mode,
                blockade_radius,
                n_atoms: n,
                states: (0..1u64 << n).collect(),
            })
        }
        BasisMode::Blockade => {
            if !(blockade_radius > 0.0) {
                return Err(SdrError::invalid("blockade radius must be positive"));
            }
            if n > 64 {
                return Err(SdrError::BasisTooLarge(format!(
                    "{n} atoms exceed the 64-bit state encoding"
                )));
            }
            let mut adj = vec![0u64; n];
            for j in 0..n {
                for k in j + 1..n {
                    if register.positions[j].dist(register.positions[k]) < blockade_radius {
                        adj[j] |= 1 << k;
                        adj[k] |= 1 << j;
                    }
                }
            }
            let mut states = Vec::new();
            // Depth-first extension of independent sets, each atom added in
            // increasing index order so every set is produced once.
            let mut stack: Vec<(u64, usize)> = vec![(0, 0)];
            while let Some((set, next)) = stack.pop() {
                states.push(set);
                if states.len() > MAX_BLOCKADE_STATES {
                    return Err(SdrError::BasisTooLarge(format!(
                        "blockade basis exceeds {MAX_BLOCKADE_STATES} states"
                    )));
                }
                for j in (next..n).rev() {
                    if adj[j] & set == 0 {
                        stack.push((set | 1 << j, j + 1));
                    }
                }
            }
            states.sort_unstable();
            Ok(BasisSpec {
                mode,
                blockade_radius,
                n_atoms: n,
                states,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::HardwareProfile;
    use crate::geometry::Point;

    fn reg(pts: &[(f64, f64)]) -> AtomRegister {
        AtomRegister {
            positions: pts.iter().map(|&(x, y)| Point::new(x, y)).collect(),
            local_scale: vec![1.0; pts.len()],
            profile: HardwareProfile::default(),
            provenance: String::new(),
            sources: vec![],
        }
    }

    #[test]
    fn full_two_atoms() {
        let b = enumerate_basis(&reg(&[(0.0, 0.0), (4.0, 0.0)]), BasisMode::Full, 0.0).unwrap();
        assert_eq!(b.states, vec![0b00, 0b01, 0b10, 0b11]);
        assert_eq!(b.index_of(3), Some(3));
        assert_eq!(b.index_of(4), None);
    }

    #[test]
    fn blockaded_pair() {
        let b = enumerate_basis(&reg(&[(0.0, 0.0), (4.0, 0.0)]), BasisMode::Blockade, 8.0).unwrap();
        assert_eq!(b.states, vec![0b00, 0b01, 0b10]);
        assert_eq!(b.index_of(3), None);
    }

    #[test]
    fn distant_triangle_is_unrestricted() {
        let b = enumerate_basis(&reg(&[(0.0, 0.0), (20.0, 0.0), (10.0, 17.0)]), BasisMode::Blockade, 8.0).unwrap();
        assert_eq!(b.states, (0..8).collect::<Vec<u64>>());
    }

    #[test]
    fn independent_sets_match_brute_force() {
        let pts: Vec<(f64, f64)> = (0..9).map(|i| ((i % 3) as f64 * 6.0, (i / 3) as f64 * 6.0)).collect();
        let r = reg(&pts);
        let b = enumerate_basis(&r, BasisMode::Blockade, 7.0).unwrap();
        let brute: Vec<u64> = (0..1u64 << 9)
            .filter(|&s| {
                (0..9).all(|j| {
                    (j + 1..9).all(|k| {
                        s >> j & 1 == 0 || s >> k & 1 == 0 || r.positions[j].dist(r.positions[k]) >= 7.0
                    })
                })
            })
            .collect();
        assert_eq!(b.states, brute);
    }

    #[test]
    fn full_mode_guard() {
        let pts: Vec<(f64, f64)> = (0..25).map(|i| (i as f64 * 5.0, 0.0)).collect();
        let err = enumerate_basis(&reg(&pts), BasisMode::Full, 0.0).unwrap_err();
        assert!(matches!(err, SdrError::BasisTooLarge(m) if m.contains("blockade")));
    }
}
