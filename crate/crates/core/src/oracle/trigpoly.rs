use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::table::fmt17;

/// Coefficients below this fraction of the largest one are dropped.
pub const PRUNE_REL: f64 = 1e-15;

/// Finitely supported map from integer frequencies to complex coefficients,
/// read as the function `x ↦ Σ c_n e^{inx}`.
///
/// Zero coefficients are never stored. Every constructor and arithmetic
/// operation prunes entries below `1e-15·max|c|`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrigPoly {
    coeffs: BTreeMap<i64, Complex64>,
}

impl TrigPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Complex64)>>(terms: I) -> Self {
        let mut coeffs: BTreeMap<i64, Complex64> = BTreeMap::new();
        for (n, c) in terms {
            *coeffs.entry(n).or_default() += c;
        }
        Self::pruned(coeffs)
    }

    fn pruned(mut coeffs: BTreeMap<i64, Complex64>) -> Self {
        let max = coeffs.values().fold(0.0f64, |m, c| m.max(c.norm()));
        let cut = PRUNE_REL * max;
        coeffs.retain(|_, c| *c != Complex64::new(0.0, 0.0) && c.norm() > cut);
        Self { coeffs }
    }

    pub fn monomial(n: i64, c: Complex64) -> Self {
        Self::from_terms([(n, c)])
    }

    pub fn constant(c: f64) -> Self {
        Self::monomial(0, Complex64::new(c, 0.0))
    }

    /// `cos(nx)`.
    pub fn cos(n: i64) -> Self {
        let h = Complex64::new(0.5, 0.0);
        Self::from_terms([(n, h), (-n, h)])
    }

    /// `sin(nx)`.
    pub fn sin(n: i64) -> Self {
        let h = Complex64::new(0.0, 0.5);
        Self::from_terms([(n, -h), (-n, h)])
    }

    /// Real polynomial `Σ c_k cos(kx) + s_k sin(kx)`, `k = 1..=len`.
    pub fn real_from_cos_sin(cos: &[f64], sin: &[f64]) -> Self {
        assert_eq!(cos.len(), sin.len());
        let terms = cos.iter().zip(sin).enumerate().flat_map(|(k, (&c, &s))| {
            let n = k as i64 + 1;
            let a = Complex64::new(0.5 * c, -0.5 * s);
            [(n, a), (-n, a.conj())]
        });
        Self::from_terms(terms)
    }

    pub fn coeff(&self, n: i64) -> Complex64 {
        self.coeffs.get(&n).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&n, &c)| (n, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn support(&self) -> Vec<i64> {
        self.coeffs.keys().copied().collect()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.values().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// `Σ |c_n|²`, the squared L² norm under the normalised measure.
    pub fn l2_sq(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum()
    }

    /// Largest coefficientwise difference.
    pub fn max_abs_diff(&self, other: &TrigPoly) -> f64 {
        let keys: std::collections::BTreeSet<i64> =
            self.coeffs.keys().chain(other.coeffs.keys()).copied().collect();
        keys.into_iter()
            .map(|n| (self.coeff(n) - other.coeff(n)).norm())
            .fold(0.0, f64::max)
    }

    /// `c_{−n} = conj(c_n)` for all `n`, to `tol·max|c|`.
    pub fn is_real_within(&self, tol: f64) -> bool {
        let scale = self.max_abs_coeff();
        self.coeffs
            .iter()
            .all(|(&n, &c)| (self.coeff(-n) - c.conj()).norm() <= tol * scale)
    }

    pub fn is_real(&self) -> bool {
        self.is_real_within(1e-12)
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(&n, &c)| c * Complex64::from_polar(1.0, n as f64 * x))
            .sum()
    }

    pub fn scale(&self, s: Complex64) -> TrigPoly {
        Self::from_terms(self.iter().map(|(n, c)| (n, c * s)))
    }

    pub fn scale_re(&self, s: f64) -> TrigPoly {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn add(&self, other: &TrigPoly) -> TrigPoly {
        Self::from_terms(self.iter().chain(other.iter()))
    }

    pub fn sub(&self, other: &TrigPoly) -> TrigPoly {
        Self::from_terms(self.iter().chain(other.iter().map(|(n, c)| (n, -c))))
    }

    /// Pointwise product, i.e. convolution of coefficients.
    pub fn mul(&self, other: &TrigPoly) -> TrigPoly {
        Self::from_terms(
            self.iter()
                .flat_map(|(n, a)| other.iter().map(move |(m, b)| (n + m, a * b))),
        )
    }

    /// Multiplies coefficient `n` by `g(n)`.
    pub fn map_diag(&self, mut g: impl FnMut(i64) -> Complex64) -> TrigPoly {
        Self::from_terms(self.iter().map(|(n, c)| (n, c * g(n))))
    }

    /// `d/dx`: coefficient `n` times `i·n`.
    pub fn derivative(&self) -> TrigPoly {
        self.map_diag(|n| Complex64::new(0.0, n as f64))
    }

    /// Uniform grid `x_j = 2πj/size`, `j < size`.
    pub fn grid(size: usize) -> Vec<f64> {
        (0..size)
            .map(|j| j as f64 * std::f64::consts::TAU / size as f64)
            .collect()
    }

    /// Writes `x,re,im` rows (with header) for the field on a uniform grid.
    pub fn write_field_csv<W: Write>(&self, mut w: W, grid_size: usize) -> io::Result<()> {
        w.write_all(b"x,re,im\n")?;
        for x in Self::grid(grid_size) {
            let v = self.eval(x);
            writeln!(w, "{},{},{}", fmt17(x), fmt17(v.re), fmt17(v.im))?;
        }
        Ok(())
    }
}

/// Literal syntax: `(n, re, im)` triples separated by commas or whitespace,
/// e.g. `(1,0.5,0) (-1,0.5,0)`.
impl FromStr for TrigPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut terms = Vec::new();
        let mut rest = s.trim();
        rest = rest.strip_prefix('[').unwrap_or(rest);
        rest = rest.strip_suffix(']').unwrap_or(rest);
        loop {
            rest = rest.trim_start_matches(|c: char| c == ',' || c == ';' || c.is_whitespace());
            if rest.is_empty() {
                break;
            }
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected '(' at {rest:?}")))?;
            let close = body
                .find(')')
                .ok_or_else(|| Error::Parse("unterminated triple".into()))?;
            let parts: Vec<&str> = body[..close].split(',').map(str::trim).collect();
            if parts.len() != 3 {
                return Err(Error::Parse(format!("expected (n, re, im), got ({})", &body[..close])));
            }
            let n: i64 = parts[0]
                .parse()
                .map_err(|_| Error::Parse(format!("bad frequency {:?}", parts[0])))?;
            let re: f64 = parts[1]
                .parse()
                .map_err(|_| Error::Parse(format!("bad real part {:?}", parts[1])))?;
            let im: f64 = parts[2]
                .parse()
                .map_err(|_| Error::Parse(format!("bad imaginary part {:?}", parts[2])))?;
            terms.push((n, Complex64::new(re, im)));
            rest = &body[close + 1..];
        }
        Ok(TrigPoly::from_terms(terms))
    }
}

impl fmt::Display for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .iter()
            .map(|(n, c)| format!("({},{},{})", n, fmt17(c.re), fmt17(c.im)))
            .collect();
        write!(f, "{}", parts.join(","))
    }
}
