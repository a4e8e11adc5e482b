//! Piecewise polynomials on `[0, 1]` with dyadic breakpoints.
//!
//! Every integral in the crate goes through this module and is evaluated
//! exactly from per-piece antiderivatives, so no quadrature error enters.
//!
//! Each piece is stored in the local variable `t = x - left` of its
//! interval. Restricting a coarse piece to a sub-interval is a Taylor shift
//! by an exact dyadic offset, which keeps small dyadic cells well
//! conditioned at any level.

use crate::dyadic::Dyadic;
use crate::error::{domain, Error, Result};

/// Largest polynomial degree a piece may carry.
pub const MAX_DEGREE: usize = 8;

/// Degree accepted for user-supplied data such as the forcing term.
pub const INPUT_DEGREE: usize = 4;

/// Real function on `[0, 1]` given by dyadic breakpoints and one
/// polynomial per interval. Intervals are half-open `[b_i, b_{i+1})`
/// except the last, which is closed at 1.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewisePoly {
    breaks: Vec<Dyadic>,
    pieces: Vec<Vec<f64>>,
}

impl PiecewisePoly {
    /// Builds from breakpoints and local-coordinate pieces: piece `i` is
    /// `sum_k c_k (x - b_i)^k`.
    pub fn from_local_pieces(breaks: Vec<Dyadic>, pieces: Vec<Vec<f64>>) -> Result<Self> {
        validate_breaks(&breaks)?;
        if pieces.len() + 1 != breaks.len() {
            return Err(Error::Breakpoints(format!(
                "{} breakpoints need {} pieces, got {}",
                breaks.len(),
                breaks.len() - 1,
                pieces.len()
            )));
        }
        let pieces: Vec<Vec<f64>> = pieces.into_iter().map(trimmed).collect();
        if let Some(d) = pieces.iter().map(|c| c.len() - 1).max() {
            if d > MAX_DEGREE {
                return Err(Error::DegreeOverflow {
                    degree: d,
                    max: MAX_DEGREE,
                });
            }
        }
        Ok(Self { breaks, pieces })
    }

    /// Builds from breakpoints and pieces written in the global variable `x`.
    pub fn from_global_pieces(breaks: Vec<Dyadic>, pieces: Vec<Vec<f64>>) -> Result<Self> {
        validate_breaks(&breaks)?;
        if pieces.len() + 1 != breaks.len() {
            return Err(Error::Breakpoints(format!(
                "{} breakpoints need {} pieces, got {}",
                breaks.len(),
                breaks.len() - 1,
                pieces.len()
            )));
        }
        let local = pieces
            .into_iter()
            .zip(&breaks)
            .map(|(c, b)| taylor_shift(&c, b.to_f64()))
            .collect();
        Self::from_local_pieces(breaks, local)
    }

    /// A single global polynomial with ascending coefficients.
    pub fn polynomial(coeffs: &[f64]) -> Result<Self> {
        let c = if coeffs.is_empty() {
            vec![0.0]
        } else {
            coeffs.to_vec()
        };
        Self::from_local_pieces(vec![Dyadic::ZERO, Dyadic::ONE], vec![c])
    }

    pub fn constant(c: f64) -> Self {
        Self {
            breaks: vec![Dyadic::ZERO, Dyadic::ONE],
            pieces: vec![vec![c]],
        }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    /// The function `x`.
    pub fn identity() -> Self {
        Self {
            breaks: vec![Dyadic::ZERO, Dyadic::ONE],
            pieces: vec![vec![0.0, 1.0]],
        }
    }

    /// Continuous piecewise-linear interpolant of `values` at `nodes`.
    pub fn piecewise_linear(nodes: &[Dyadic], values: &[f64]) -> Result<Self> {
        if nodes.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: nodes.len(),
                got: values.len(),
            });
        }
        validate_breaks(nodes)?;
        let pieces = nodes
            .windows(2)
            .zip(values.windows(2))
            .map(|(b, v)| {
                let h = (b[1] - b[0]).to_f64();
                vec![v[0], (v[1] - v[0]) / h]
            })
            .collect();
        Self::from_local_pieces(nodes.to_vec(), pieces)
    }

    pub fn breakpoints(&self) -> &[Dyadic] {
        &self.breaks
    }

    /// Local-coordinate coefficients, one list per interval.
    pub fn pieces(&self) -> &[Vec<f64>] {
        &self.pieces
    }

    pub fn degree(&self) -> usize {
        self.pieces.iter().map(|c| c.len() - 1).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.iter().all(|c| is_zero_piece(c))
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(domain(format!("evaluation point {x} outside [0, 1]")));
        }
        let i = self
            .breaks
            .partition_point(|b| b.to_f64() <= x)
            .saturating_sub(1)
            .min(self.pieces.len() - 1);
        Ok(horner(&self.pieces[i], x - self.breaks[i].to_f64()))
    }

    pub fn add(&self, other: &Self) -> Self {
        combine(self, other, |a, b| {
            let mut out = vec![0.0; a.len().max(b.len())];
            for (o, v) in out.iter_mut().zip(a) {
                *o += v;
            }
            for (o, v) in out.iter_mut().zip(b) {
                *o += v;
            }
            Ok(out)
        })
        .expect("addition cannot overflow the degree bound")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            breaks: self.breaks.clone(),
            pieces: self
                .pieces
                .iter()
                .map(|c| trimmed(c.iter().map(|v| v * s).collect()))
                .collect(),
        }
    }

    /// Exact pointwise product; fails rather than truncate when a piece
    /// would exceed [`MAX_DEGREE`].
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        combine(self, other, |a, b| {
            if is_zero_piece(a) || is_zero_piece(b) {
                return Ok(vec![0.0]);
            }
            let degree = a.len() + b.len() - 2;
            if degree > MAX_DEGREE {
                return Err(Error::DegreeOverflow {
                    degree,
                    max: MAX_DEGREE,
                });
            }
            let mut out = vec![0.0; degree + 1];
            for (i, x) in a.iter().enumerate() {
                for (k, y) in b.iter().enumerate() {
                    out[i + k] += x * y;
                }
            }
            Ok(out)
        })
    }

    /// Piecewise derivative (defined almost everywhere).
    pub fn derivative(&self) -> Self {
        let pieces = self
            .pieces
            .iter()
            .map(|c| {
                if c.len() == 1 {
                    vec![0.0]
                } else {
                    trimmed(
                        c.iter()
                            .enumerate()
                            .skip(1)
                            .map(|(k, v)| k as f64 * v)
                            .collect(),
                    )
                }
            })
            .collect();
        Self {
            breaks: self.breaks.clone(),
            pieces,
        }
        .merge_zero_runs()
    }

    /// Exact integral over `[0, 1]`, pieces summed left to right.
    pub fn integrate(&self) -> f64 {
        self.pieces
            .iter()
            .zip(self.breaks.windows(2))
            .map(|(c, b)| integrate_local(c, (b[1] - b[0]).to_f64()))
            .fold(0.0, |acc, v| acc + v)
    }

    /// Collapses neighbouring identically-zero pieces into one interval.
    fn merge_zero_runs(self) -> Self {
        let mut breaks = Vec::with_capacity(self.breaks.len());
        let mut pieces: Vec<Vec<f64>> = Vec::with_capacity(self.pieces.len());
        breaks.push(self.breaks[0]);
        for (c, b) in self.pieces.into_iter().zip(self.breaks.into_iter().skip(1)) {
            let extend = matches!(pieces.last(), Some(prev) if is_zero_piece(prev) && is_zero_piece(&c));
            if extend {
                *breaks.last_mut().unwrap() = b;
            } else {
                pieces.push(c);
                breaks.push(b);
            }
        }
        Self { breaks, pieces }
    }
}

/// `∫ p q` over `[0, 1]`.
pub fn l2_inner(p: &PiecewisePoly, q: &PiecewisePoly) -> Result<f64> {
    Ok(p.multiply(q)?.integrate())
}

/// `∫ p' q'` over `[0, 1]`.
pub fn h1semi_inner(p: &PiecewisePoly, q: &PiecewisePoly) -> Result<f64> {
    l2_inner(&p.derivative(), &q.derivative())
}

/// Full `H^1` inner product `∫ p q + ∫ p' q'`.
pub fn h1_inner(p: &PiecewisePoly, q: &PiecewisePoly) -> Result<f64> {
    Ok(l2_inner(p, q)? + h1semi_inner(p, q)?)
}

fn validate_breaks(breaks: &[Dyadic]) -> Result<()> {
    if breaks.len() < 2 {
        return Err(Error::Breakpoints("need at least two breakpoints".into()));
    }
    if breaks[0] != Dyadic::ZERO || *breaks.last().unwrap() != Dyadic::ONE {
        return Err(Error::Breakpoints("must start at 0 and end at 1".into()));
    }
    if breaks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Breakpoints("must be strictly increasing".into()));
    }
    Ok(())
}

/// Applies `op` piece by piece over the common refinement of both grids.
fn combine<F>(p: &PiecewisePoly, q: &PiecewisePoly, op: F) -> Result<PiecewisePoly>
where
    F: Fn(&[f64], &[f64]) -> Result<Vec<f64>>,
{
    let mut breaks = Vec::with_capacity(p.breaks.len() + q.breaks.len());
    let (mut i, mut k) = (0, 0);
    while i < p.breaks.len() || k < q.breaks.len() {
        let next = match (p.breaks.get(i), q.breaks.get(k)) {
            (Some(a), Some(b)) if a == b => {
                i += 1;
                k += 1;
                *a
            }
            (Some(a), Some(b)) if a < b => {
                i += 1;
                *a
            }
            (_, Some(b)) => {
                k += 1;
                *b
            }
            (Some(a), None) => {
                i += 1;
                *a
            }
            (None, None) => unreachable!(),
        };
        breaks.push(next);
    }

    let mut pieces = Vec::with_capacity(breaks.len() - 1);
    let (mut ip, mut iq) = (0, 0);
    for left in &breaks[..breaks.len() - 1] {
        while p.breaks[ip + 1] <= *left {
            ip += 1;
        }
        while q.breaks[iq + 1] <= *left {
            iq += 1;
        }
        let a = restrict(&p.pieces[ip], *left - p.breaks[ip]);
        let b = restrict(&q.pieces[iq], *left - q.breaks[iq]);
        pieces.push(trimmed(op(&a, &b)?));
    }
    Ok(PiecewisePoly { breaks, pieces }.merge_zero_runs())
}

fn restrict(c: &[f64], offset: Dyadic) -> Vec<f64> {
    if offset == Dyadic::ZERO || c.len() == 1 {
        c.to_vec()
    } else {
        taylor_shift(c, offset.to_f64())
    }
}

/// Coefficients of `t -> p(t + d)`.
fn taylor_shift(c: &[f64], d: f64) -> Vec<f64> {
    let mut out = c.to_vec();
    if d == 0.0 {
        return out;
    }
    let n = out.len();
    for i in 0..n {
        for k in (i..n.saturating_sub(1)).rev() {
            out[k] += d * out[k + 1];
        }
    }
    out
}

fn horner(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, v| acc * t + v)
}

fn integrate_local(c: &[f64], h: f64) -> f64 {
    // ∫_0^h sum c_k t^k dt, Horner in h
    c.iter()
        .enumerate()
        .rev()
        .fold(0.0, |acc, (k, v)| acc * h + v / (k + 1) as f64)
        * h
}

fn is_zero_piece(c: &[f64]) -> bool {
    c.iter().all(|v| *v == 0.0)
}

fn trimmed(mut c: Vec<f64>) -> Vec<f64> {
    while c.len() > 1 && *c.last().unwrap() == 0.0 {
        c.pop();
    }
    if c.is_empty() {
        c.push(0.0);
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hat_half() -> PiecewisePoly {
        let half = Dyadic::grid(1, 1);
        PiecewisePoly::piecewise_linear(&[Dyadic::ZERO, half, Dyadic::ONE], &[0.0, 0.5, 0.0])
            .unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(PiecewisePoly::constant(1.0).eval(0.7).unwrap(), 1.0);
        let sq = PiecewisePoly::polynomial(&[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(sq.eval(0.5).unwrap(), 0.25);
        assert_eq!(hat_half().eval(0.5).unwrap(), 0.5);
        assert_eq!(hat_half().eval(1.0).unwrap(), 0.0);
    }

    #[test]
    fn eval_outside_domain_fails() {
        let p = PiecewisePoly::constant(1.0);
        assert!(matches!(p.eval(1.5), Err(Error::Domain(_))));
        assert!(p.eval(-1e-9).is_err());
        assert!(p.eval(f64::NAN).is_err());
    }

    #[test]
    fn arithmetic_examples() {
        let x = PiecewisePoly::identity();
        let sq = x.multiply(&x).unwrap();
        assert_eq!(sq.pieces(), &[vec![0.0, 0.0, 1.0]]);

        let d = hat_half().derivative();
        assert_eq!(d.breakpoints().len(), 3);
        assert_eq!(d.eval(0.25).unwrap(), 1.0);
        assert_eq!(d.eval(0.5).unwrap(), -1.0);
        assert_eq!(d.eval(1.0).unwrap(), -1.0);

        let p = hat_half().multiply(&sq).unwrap();
        assert!(p.add(&p.neg()).is_zero());
        assert_eq!(p.add(&p.neg()).pieces().len(), 1);
    }

    #[test]
    fn integrals() {
        assert_eq!(PiecewisePoly::constant(1.0).integrate(), 1.0);
        let sq = PiecewisePoly::polynomial(&[0.0, 0.0, 1.0]).unwrap();
        assert!((sq.integrate() - 1.0 / 3.0).abs() < 1e-16);
        assert_eq!(hat_half().integrate(), 0.25);
    }

    #[test]
    fn inner_products() {
        let one = PiecewisePoly::constant(1.0);
        assert_eq!(l2_inner(&one, &one).unwrap(), 1.0);
        let h = hat_half();
        assert_eq!(h1semi_inner(&h, &h).unwrap(), 1.0);
        assert!((l2_inner(&h, &h).unwrap() - 1.0 / 12.0).abs() < 1e-16);
        assert!((h1_inner(&h, &h).unwrap() - 13.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn degree_overflow_is_an_error() {
        let p5 = PiecewisePoly::polynomial(&[0.0, 0.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        let p4 = PiecewisePoly::polynomial(&[0.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(
            p5.multiply(&p4),
            Err(Error::DegreeOverflow { degree: 9, max: 8 })
        );
        assert!(PiecewisePoly::polynomial(&[1.0; 10]).is_err());
        // trailing zeros do not count towards the degree
        let padded = PiecewisePoly::polynomial(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(padded.degree(), 0);
    }

    #[test]
    fn invalid_breakpoints() {
        let half = Dyadic::grid(1, 1);
        assert!(PiecewisePoly::from_local_pieces(vec![Dyadic::ZERO, half], vec![vec![1.0]]).is_err());
        assert!(PiecewisePoly::from_local_pieces(
            vec![Dyadic::ZERO, half, half, Dyadic::ONE],
            vec![vec![1.0]; 3]
        )
        .is_err());
        assert!(PiecewisePoly::from_local_pieces(
            vec![Dyadic::ZERO, Dyadic::ONE],
            vec![vec![1.0], vec![2.0]]
        )
        .is_err());
    }

    #[test]
    fn global_and_local_pieces_agree() {
        let half = Dyadic::grid(1, 1);
        let p = PiecewisePoly::from_global_pieces(
            vec![Dyadic::ZERO, half, Dyadic::ONE],
            vec![vec![1.0, 2.0], vec![0.0, 0.0, 3.0]],
        )
        .unwrap();
        assert_eq!(p.eval(0.25).unwrap(), 1.5);
        assert!((p.eval(0.75).unwrap() - 3.0 * 0.5625).abs() < 1e-15);
    }

    #[test]
    fn taylor_shift_matches_direct_expansion() {
        // (t + 2)^2 = t^2 + 4t + 4
        assert_eq!(taylor_shift(&[0.0, 0.0, 1.0], 2.0), vec![4.0, 4.0, 1.0]);
    }
}
