//! Real polynomials of low degree: the characteristic polynomial
//! `det(A − λB)` and its real roots.
//!
//! Degrees one to three use closed forms; degree four brackets each root
//! between consecutive critical points (roots of the derivative cubic), where
//! the polynomial is monotone, and bisects.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::matrix::SymMatrix;

/// Coefficients in ascending order: `c[0] + c[1]·x + c[2]·x² + …`.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn constant(c: f64) -> Self {
        Poly(vec![c])
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// `Σ |c_i|·|x|^i`, the magnitude against which rounding in `eval` is judged.
    fn eval_abs(&self, x: f64) -> f64 {
        let ax = x.abs();
        self.0.iter().rev().fold(0.0, |acc, &c| acc * ax + c.abs())
    }

    pub fn derivative(&self) -> Poly {
        if self.0.len() <= 1 {
            return Poly::constant(0.0);
        }
        Poly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&0.0) + other.0.get(i).unwrap_or(&0.0))
                .collect(),
        )
    }

    fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    fn scale(&self, s: f64) -> Poly {
        Poly(self.0.iter().map(|c| c * s).collect())
    }

    /// Drops leading coefficients that are exactly zero.
    fn trimmed(mut self) -> Poly {
        while self.0.len() > 1 && *self.0.last().unwrap() == 0.0 {
            self.0.pop();
        }
        self
    }
}

/// Coefficients of `det(A − λB)` by cofactor expansion over polynomial entries.
pub fn pencil_char_poly(a: &SymMatrix, b: &SymMatrix) -> Result<Poly> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "pencil dimensions {} and {} differ",
            a.dim(),
            b.dim()
        )));
    }
    let n = a.dim();
    let entries: Vec<Poly> = (0..n * n)
        .map(|k| Poly(vec![a.get(k / n, k % n), -b.get(k / n, k % n)]))
        .collect();
    let cols: Vec<usize> = (0..n).collect();
    Ok(poly_det(&entries, n, 0, &cols))
}

/// Coefficients of `det(A − λI)`.
pub fn char_poly(a: &SymMatrix) -> Poly {
    pencil_char_poly(a, &SymMatrix::identity(a.dim())).expect("same dimension")
}

fn poly_det(entries: &[Poly], n: usize, row: usize, cols: &[usize]) -> Poly {
    if cols.len() == 1 {
        return entries[row * n + cols[0]].clone();
    }
    let mut acc = Poly::constant(0.0);
    let mut sign = 1.0;
    for &c in cols {
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = poly_det(entries, n, row + 1, &rest);
        acc = acc.add(&entries[row * n + c].mul(&minor).scale(sign));
        sign = -sign;
    }
    acc
}

/// All real roots (with multiplicity) of a polynomial of degree 1..=4, ascending.
///
/// Fails with `NonRealSpectrum` when the polynomial clearly has a complex
/// pair; nearly-real pairs produced by rounding are returned as double roots.
pub fn real_roots(p: &Poly) -> Result<Vec<f64>> {
    let p = p.clone().trimmed();
    let deg = p.degree();
    let lead = *p.0.last().unwrap();
    if deg == 0 {
        return Ok(Vec::new());
    }
    if deg > 4 {
        return Err(Error::UnsupportedDimension { dim: deg, max: 4 });
    }
    let monic: Vec<f64> = p.0.iter().map(|c| c / lead).collect();
    let mut roots = match deg {
        1 => vec![-monic[0]],
        2 => quadratic(monic[1], monic[0])?,
        3 => cubic(monic[2], monic[1], monic[0])?,
        _ => quartic(&Poly(monic.clone()))?,
    };
    let mp = Poly(monic);
    if deg == 3 {
        for r in roots.iter_mut() {
            *r = newton_polish(&mp, *r);
        }
    }
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

/// Roots of `x² + b·x + c`.
fn quadratic(b: f64, c: f64) -> Result<Vec<f64>> {
    let mut disc = b * b - 4.0 * c;
    if disc < 0.0 {
        let scale = (b * b).max(4.0 * c.abs());
        if -disc > 1e-12 * scale {
            return Err(Error::NonRealSpectrum {
                re: -0.5 * b,
                im: 0.5 * (-disc).sqrt(),
            });
        }
        disc = 0.0;
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    if q == 0.0 {
        return Ok(vec![0.0, 0.0]);
    }
    Ok(vec![q, c / q])
}

/// Roots of `x³ + a·x² + b·x + c` by the trigonometric form of the depressed cubic.
fn cubic(a: f64, b: f64, c: f64) -> Result<Vec<f64>> {
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let s = (p.abs() / 3.0).sqrt().max((q.abs() / 2.0).cbrt());
    if s == 0.0 || !s.is_finite() {
        return Ok(vec![-shift; 3]);
    }
    let (pn, qn) = (p / (s * s), q / (s * s * s));
    let delta = (qn / 2.0).powi(2) + (pn / 3.0).powi(3);
    if delta > 1e-10 {
        // one real root plus a complex pair (Cardano)
        let sd = delta.sqrt();
        let u = (-qn / 2.0 + sd).cbrt();
        let v = (-qn / 2.0 - sd).cbrt();
        return Err(Error::NonRealSpectrum {
            re: s * (-(u + v) / 2.0) - shift,
            im: s * (3f64.sqrt() / 2.0 * (u - v)).abs(),
        });
    }
    let m = 2.0 * (-pn / 3.0).sqrt();
    let arg = ((3.0 * qn) / (pn * m)).clamp(-1.0, 1.0);
    let theta = arg.acos() / 3.0;
    Ok((0..3)
        .map(|k| s * m * (theta - 2.0 * PI * k as f64 / 3.0).cos() - shift)
        .collect())
}

fn quartic(p: &Poly) -> Result<Vec<f64>> {
    let d = p.derivative();
    let lead = d.0[3];
    let crit = cubic(d.0[2] / lead, d.0[1] / lead, d.0[0] / lead)?;
    let mut crit: Vec<f64> = crit.into_iter().map(|r| newton_polish(&d, r)).collect();
    crit.sort_by(f64::total_cmp);

    let bound = 1.0 + p.0.iter().take(4).fold(0.0f64, |m, c| m.max(c.abs()));
    let mut edges = vec![-bound];
    edges.extend(crit.iter().map(|c| c.clamp(-bound, bound)));
    edges.push(bound);

    let mut roots = Vec::with_capacity(4);
    for w in edges.windows(2) {
        roots.push(monotone_root(p, w[0], w[1])?);
    }
    Ok(roots)
}

/// The single root of `p` on `[lo, hi]`, where `p` is monotone.
fn monotone_root(p: &Poly, lo: f64, hi: f64) -> Result<f64> {
    let (flo, fhi) = (p.eval(lo), p.eval(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        // Root sits on a critical point (multiple root) or is not real.
        let (x, fx) = if flo.abs() <= fhi.abs() { (lo, flo) } else { (hi, fhi) };
        if fx.abs() <= 1e-10 * p.eval_abs(x) {
            return Ok(x);
        }
        return Err(Error::NonRealSpectrum {
            re: x,
            im: (fx.abs() / p.eval_abs(x).max(f64::MIN_POSITIVE)).sqrt() * x.abs().max(1.0),
        });
    }
    let (mut a, mut b) = (lo, hi);
    let sa = flo.signum();
    for _ in 0..2000 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = p.eval(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == sa {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// A few guarded Newton steps; keeps the input unless `|p|` decreases.
fn newton_polish(p: &Poly, mut x: f64) -> f64 {
    let d = p.derivative();
    let mut fx = p.eval(x).abs();
    for _ in 0..4 {
        let dx = d.eval(x);
        if dx == 0.0 || fx == 0.0 {
            break;
        }
        let cand = x - p.eval(x) / dx;
        let fc = p.eval(cand).abs();
        if fc.is_nan() || fc >= fx {
            break;
        }
        x = cand;
        fx = fc;
    }
    x
}
