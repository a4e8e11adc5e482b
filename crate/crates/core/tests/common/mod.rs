//! Exact-arithmetic oracle for load vectors.
//!
//! Numbers live in Q(√2) with big rationals, so the reference data
//! (`j = √2`, `f` with √2 coefficients, `L^2`-normalized hats with odd
//! levels) is represented without rounding. Hats are built from their
//! index formula in global coordinates and integrated monomial by monomial,
//! independently of the crate's piecewise-polynomial engine.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `a + b √2`.
#[derive(Clone, Debug, PartialEq)]
pub struct QSqrt2 {
    pub a: BigRational,
    pub b: BigRational,
}

impl QSqrt2 {
    pub fn zero() -> Self {
        Self { a: BigRational::zero(), b: BigRational::zero() }
    }

    pub fn rational(a: BigRational) -> Self {
        Self { a, b: BigRational::zero() }
    }

    pub fn int(v: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn sqrt2() -> Self {
        Self { a: BigRational::zero(), b: BigRational::one() }
    }

    /// Exact value of a finite `f64`.
    pub fn from_f64(v: f64) -> Self {
        Self::rational(BigRational::from_float(v).expect("finite"))
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { a: &self.a + &o.a, b: &self.b + &o.b }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self { a: &self.a - &o.a, b: &self.b - &o.b }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let two = BigRational::from_integer(BigInt::from(2));
        Self {
            a: &self.a * &o.a + two * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self { a: &self.a * r, b: &self.b * r }
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap() + self.b.to_f64().unwrap() * std::f64::consts::SQRT_2
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn abs_bound(&self) -> f64 {
        self.a.abs().to_f64().unwrap() + self.b.abs().to_f64().unwrap() * 1.5
    }
}

/// Polynomial in the global variable with Q(√2) coefficients.
#[derive(Clone, Debug)]
pub struct Poly(pub Vec<QSqrt2>);

impl Poly {
    pub fn mul(&self, o: &Poly) -> Poly {
        let mut out = vec![QSqrt2::zero(); self.0.len() + o.0.len() - 1];
        for (i, x) in self.0.iter().enumerate() {
            for (k, y) in o.0.iter().enumerate() {
                out[i + k] = out[i + k].add(&x.mul(y));
            }
        }
        Poly(out)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly(
            (0..n)
                .map(|i| {
                    let z = QSqrt2::zero();
                    self.0.get(i).unwrap_or(&z).add(o.0.get(i).unwrap_or(&z))
                })
                .collect(),
        )
    }

    pub fn scale(&self, s: &QSqrt2) -> Poly {
        Poly(self.0.iter().map(|c| c.mul(s)).collect())
    }

    pub fn derivative(&self) -> Poly {
        if self.0.len() == 1 {
            return Poly(vec![QSqrt2::zero()]);
        }
        Poly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale(&BigRational::from_integer(BigInt::from(k as i64))))
                .collect(),
        )
    }

    /// `∫_lo^hi p(x) dx` by monomial antiderivatives.
    pub fn integrate(&self, lo: &BigRational, hi: &BigRational) -> QSqrt2 {
        let mut total = QSqrt2::zero();
        let mut plo = lo.clone();
        let mut phi = hi.clone();
        for (k, c) in self.0.iter().enumerate() {
            // plo = lo^{k+1}, phi = hi^{k+1}
            let w = (&phi - &plo) / BigRational::from_integer(BigInt::from(k as i64 + 1));
            total = total.add(&c.scale(&w));
            plo = &plo * lo;
            phi = &phi * hi;
        }
        total
    }
}

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Haar amplitude at `level`: 1 (flat) or `2^(level/2)` (L2).
pub fn amplitude(level: u32, l2: bool) -> QSqrt2 {
    if !l2 {
        return QSqrt2::int(1);
    }
    let p = QSqrt2::int(1i64 << (level / 2));
    if level % 2 == 1 {
        p.mul(&QSqrt2::sqrt2())
    } else {
        p
    }
}

/// The hat `g_{i+3}` (0-based `i`) as two linear pieces:
/// `[(lo, mid, rising), (mid, hi, falling)]`.
pub fn hat(i: usize, l2: bool) -> Vec<(BigRational, BigRational, Poly)> {
    // g_{i+3} = ∫ h_{i+2}; h_k has k - 1 = 2^level + offset
    let k = i as u64 + 2;
    let mut level = 0u32;
    while (1u64 << (level + 1)) < k {
        level += 1;
    }
    let offset = (k - 1 - (1u64 << level)) as i64;
    let den = 1i64 << level;
    let lo = ratio(offset, den);
    let mid = ratio(2 * offset + 1, 2 * den);
    let hi = ratio(offset + 1, den);
    let c = amplitude(level, l2);
    let rising = Poly(vec![QSqrt2::rational(-lo.clone()).mul(&c), c.clone()]);
    let falling = Poly(vec![QSqrt2::rational(hi.clone()).mul(&c), c.scale(&-BigRational::one())]);
    vec![(lo, mid.clone(), rising), (mid, hi, falling)]
}

/// Exact load vector `b_i = ∫ f g - (beta - alpha) ∫ g' - j ∫ u0 g`.
pub fn load_oracle(
    f: &Poly,
    alpha: &QSqrt2,
    beta: &QSqrt2,
    j: &QSqrt2,
    m: usize,
    l2: bool,
) -> Vec<QSqrt2> {
    let slope = beta.sub(alpha);
    let lift = Poly(vec![alpha.clone(), slope.clone()]);
    (0..m)
        .map(|i| {
            let mut forcing = QSqrt2::zero();
            let mut lift_mass = QSqrt2::zero();
            let mut mean_deriv = QSqrt2::zero();
            for (lo, hi, g) in hat(i, l2) {
                forcing = forcing.add(&f.mul(&g).integrate(&lo, &hi));
                lift_mass = lift_mass.add(&lift.mul(&g).integrate(&lo, &hi));
                mean_deriv = mean_deriv.add(&g.derivative().integrate(&lo, &hi));
            }
            forcing
                .sub(&slope.mul(&mean_deriv))
                .sub(&j.mul(&lift_mass))
        })
        .collect()
}

/// `f = -2 + √2 (x^2 - 2x - 3)` of the benchmark problem.
pub fn reference_forcing() -> Poly {
    let r = QSqrt2::sqrt2();
    Poly(vec![
        QSqrt2::int(-2).add(&r.mul(&QSqrt2::int(-3))),
        r.mul(&QSqrt2::int(-2)),
        r,
    ])
}

/// `f = -u'' + j u` for a polynomial `u`.
pub fn manufactured_forcing(u: &Poly, j: &QSqrt2) -> Poly {
    u.derivative()
        .derivative()
        .scale(&QSqrt2::int(-1))
        .add(&u.scale(j))
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
