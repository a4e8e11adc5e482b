//! Haar functions and their antiderivatives, the Faber-Schauder system.
//!
//! `h_1 = 1`; for `k >= 2` with `k = 2^n + q + 1`, `h_k` is `+c` on the left
//! half and `-c` on the right half of `[q 2^-n, (q+1) 2^-n]`. `g_1 = 1`,
//! `g_2 = x` and `g_k(x) = ∫_0^x h_{k-1}` is a hat on the support of
//! `h_{k-1}`. `{g_3, g_4, ...}` spans `H^1_0(0, 1)`.

use std::fmt;
use std::str::FromStr;

use crate::dyadic::Dyadic;
use crate::error::{domain, Error, Result};
use crate::pwpoly::PiecewisePoly;

/// Amplitude convention for the Haar functions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Normalization {
    /// `h_k = ±1` on its support, so `∫ h_k^2 = 2^-n`.
    #[default]
    Flat,
    /// `h_k = ±2^(n/2)`, unit `L^2` norm.
    L2,
}

impl Normalization {
    pub const ALL: [Normalization; 2] = [Normalization::Flat, Normalization::L2];

    /// Amplitude of `h_k` at level `n`.
    pub fn amplitude(self, level: u32) -> f64 {
        match self {
            Normalization::Flat => 1.0,
            Normalization::L2 => 2f64.powf(level as f64 / 2.0),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Normalization::Flat => "flat",
            Normalization::L2 => "l2",
        }
    }
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "flat" => Ok(Normalization::Flat),
            "l2" => Ok(Normalization::L2),
            other => Err(domain(format!("unknown normalization `{other}`"))),
        }
    }
}

/// Level/offset decomposition of a Haar index `k = 2^n + q + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HaarIndex {
    pub k: u64,
    pub level: u32,
    pub offset: u64,
}

impl HaarIndex {
    pub fn decompose(k: u64) -> Result<Self> {
        if k < 2 {
            return Err(domain(format!(
                "Haar index {k} has no level decomposition (k >= 2 required)"
            )));
        }
        let level = (k - 1).ilog2();
        let offset = k - 1 - (1u64 << level);
        if level >= crate::dyadic::MAX_SHIFT {
            return Err(domain(format!("Haar index {k} is too fine")));
        }
        Ok(Self { k, level, offset })
    }

    pub fn left(&self) -> Dyadic {
        Dyadic::grid(self.offset, self.level)
    }

    pub fn mid(&self) -> Dyadic {
        Dyadic::grid(2 * self.offset + 1, self.level + 1)
    }

    pub fn right(&self) -> Dyadic {
        Dyadic::grid(self.offset + 1, self.level)
    }

    /// Whether the supports of two Haar functions overlap in a set of
    /// positive measure (dyadic intervals are nested or disjoint).
    pub fn overlaps(&self, other: &HaarIndex) -> bool {
        let (fine, coarse) = if self.level >= other.level {
            (self, other)
        } else {
            (other, self)
        };
        fine.offset >> (fine.level - coarse.level) == coarse.offset
    }
}

/// `h_k` for `k >= 1`.
pub fn haar(k: u64, norm: Normalization) -> Result<PiecewisePoly> {
    match k {
        0 => Err(domain("Haar functions are indexed from 1")),
        1 => Ok(PiecewisePoly::constant(1.0)),
        _ => {
            let idx = HaarIndex::decompose(k)?;
            let c = norm.amplitude(idx.level);
            let mut breaks = vec![Dyadic::ZERO];
            let mut pieces = Vec::new();
            for (b, v) in [(idx.left(), 0.0), (idx.mid(), c), (idx.right(), -c)] {
                if b > Dyadic::ZERO {
                    breaks.push(b);
                    pieces.push(vec![v]);
                }
            }
            if idx.right() < Dyadic::ONE {
                breaks.push(Dyadic::ONE);
                pieces.push(vec![0.0]);
            }
            PiecewisePoly::from_local_pieces(breaks, pieces)
        }
    }
}

/// `g_k` for `k >= 1`.
pub fn schauder_g(k: u64, norm: Normalization) -> Result<PiecewisePoly> {
    match k {
        0 => Err(domain("Schauder functions are indexed from 1")),
        1 => Ok(PiecewisePoly::constant(1.0)),
        2 => Ok(PiecewisePoly::identity()),
        _ => {
            let idx = HaarIndex::decompose(k - 1)?;
            let c = norm.amplitude(idx.level);
            let peak = c * (idx.mid() - idx.left()).to_f64();
            let mut nodes = vec![Dyadic::ZERO];
            let mut values = vec![0.0];
            for (b, v) in [(idx.left(), 0.0), (idx.mid(), peak), (idx.right(), 0.0)] {
                if b > Dyadic::ZERO {
                    nodes.push(b);
                    values.push(v);
                }
            }
            if idx.right() < Dyadic::ONE {
                nodes.push(Dyadic::ONE);
                values.push(0.0);
            }
            PiecewisePoly::piecewise_linear(&nodes, &values)
        }
    }
}

/// `[g_3, ..., g_{m+2}]`, a basis of the `m`-dimensional subspace of
/// `H^1_0`.
pub fn h10_basis(m: usize, norm: Normalization) -> Result<Vec<PiecewisePoly>> {
    if m == 0 {
        return Err(domain("basis dimension must be at least 1"));
    }
    (3..m as u64 + 3).map(|k| schauder_g(k, norm)).collect()
}

/// Haar index of the `i`-th (0-based) element of [`h10_basis`], i.e. of
/// `h_{i+2} = g'_{i+3}`.
pub fn h10_index(i: usize) -> HaarIndex {
    HaarIndex::decompose(i as u64 + 2).expect("index >= 2")
}
