use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use crate::{Error, Result};

/// Largest basis built without an explicit override.
pub const DEFAULT_DIMENSION_CAP: usize = 200_000;

/// All `N`-photon occupation patterns of `M` modes, in lexicographically
/// descending order: `(N,0,..,0)` first and `(0,..,0,N)` last.
pub struct FockBasis {
    modes: usize,
    photons: usize,
    occ: Vec<u8>,
    index: HashMap<Box<[u8]>, usize>,
    pairs: Vec<OnceLock<PairTable>>,
}

/// Basis indices grouped by the photon number on a mode pair.
///
/// `groups[s]` is a flat list of chunks of length `s + 1`; chunk entry `p`
/// is the index of the basis state with `p` photons in the first mode of the
/// pair, `s - p` in the second, and a fixed occupation elsewhere.
#[derive(Debug, Clone)]
pub struct PairTable {
    pub groups: Vec<Vec<usize>>,
}

fn dimension(modes: usize, photons: usize) -> u128 {
    // C(M+N-1, N) with exact intermediate division.
    let mut acc: u128 = 1;
    for i in 0..photons as u128 {
        acc = acc * (modes as u128 - 1 + i + 1) / (i + 1);
        if acc > u64::MAX as u128 {
            return u128::MAX;
        }
    }
    acc
}

fn enumerate(modes: usize, photons: usize, prefix: &mut Vec<u8>, out: &mut Vec<u8>) {
    if prefix.len() + 1 == modes {
        prefix.push(photons as u8);
        out.extend_from_slice(prefix);
        prefix.pop();
        return;
    }
    for n in (0..=photons).rev() {
        prefix.push(n as u8);
        enumerate(modes, photons - n, prefix, out);
        prefix.pop();
    }
}

impl FockBasis {
    pub fn new(modes: usize, photons: usize) -> Result<Self> {
        Self::with_cap(modes, photons, DEFAULT_DIMENSION_CAP)
    }

    pub fn with_cap(modes: usize, photons: usize, cap: usize) -> Result<Self> {
        if modes == 0 {
            return Err(Error::shape("a Fock basis needs at least one mode"));
        }
        if photons > u8::MAX as usize {
            return Err(Error::shape("photon number does not fit an occupation byte"));
        }
        let dim = dimension(modes, photons);
        if dim > cap as u128 {
            return Err(Error::DimensionOverflow { dim, cap });
        }
        let dim = dim as usize;
        let mut occ = Vec::with_capacity(dim * modes);
        enumerate(modes, photons, &mut Vec::with_capacity(modes), &mut occ);
        debug_assert_eq!(occ.len(), dim * modes);
        let index = occ
            .chunks_exact(modes)
            .enumerate()
            .map(|(k, t)| (t.to_vec().into_boxed_slice(), k))
            .collect();
        let pairs = (0..modes * modes).map(|_| OnceLock::new()).collect();
        Ok(FockBasis { modes, photons, occ, index, pairs })
    }

    #[inline]
    pub fn modes(&self) -> usize {
        self.modes
    }

    #[inline]
    pub fn photons(&self) -> usize {
        self.photons
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.occ.len() / self.modes
    }

    /// Occupation vector of basis state `k`.
    #[inline]
    pub fn state(&self, k: usize) -> &[u8] {
        &self.occ[k * self.modes..(k + 1) * self.modes]
    }

    pub fn states(&self) -> impl ExactSizeIterator<Item = &[u8]> + '_ {
        self.occ.chunks_exact(self.modes)
    }

    pub fn index_of(&self, occupation: &[u8]) -> Option<usize> {
        self.index.get(occupation).copied()
    }

    /// Same mode and photon count, hence the same ordering.
    pub fn same_shape(&self, other: &FockBasis) -> bool {
        self.modes == other.modes && self.photons == other.photons
    }

    /// Grouping of the basis by occupation of the ordered mode pair `(i, j)`.
    /// Built on first use and shared afterwards.
    pub fn pair_table(&self, i: usize, j: usize) -> &PairTable {
        assert!(i < self.modes && j < self.modes && i != j, "invalid mode pair ({i}, {j})");
        self.pairs[i * self.modes + j].get_or_init(|| self.build_pair_table(i, j))
    }

    fn build_pair_table(&self, i: usize, j: usize) -> PairTable {
        let mut groups = vec![Vec::new(); self.photons + 1];
        let mut scratch = vec![0u8; self.modes];
        for t in self.states() {
            // One representative per group: every pair photon sits in mode i.
            if t[j] != 0 {
                continue;
            }
            let s = t[i] as usize;
            scratch.copy_from_slice(t);
            for p in 0..=s {
                scratch[i] = p as u8;
                scratch[j] = (s - p) as u8;
                groups[s].push(self.index[&scratch[..]]);
            }
        }
        PairTable { groups }
    }
}

impl fmt::Debug for FockBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FockBasis")
            .field("modes", &self.modes)
            .field("photons", &self.photons)
            .field("dim", &self.dim())
            .finish()
    }
}
