//! Regularized total integrals over the real line: the solver grid on
//! `[-L, L]` plus term-by-term integration of the large-`|x|` series beyond.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::asym::thirds::{
    damped_inverse_series, h1_series_from_u, h1_series_two_term, u_series, x_series, x_thirds_power,
    ThirdsSeries,
};
use crate::asym::thirds_pow;
use crate::branch::Branch;
use crate::error::{Pi2Error, Result};
use crate::solver::SolutionGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quantity {
    #[serde(rename = "u")]
    U,
    H1,
    #[serde(rename = "u2")]
    U2,
    #[serde(rename = "xu")]
    Xu,
}

impl Quantity {
    pub const ALL: [Quantity; 4] = [Quantity::U, Quantity::H1, Quantity::U2, Quantity::Xu];

    /// Default number of `e_k` terms in the tail series.
    pub fn default_tail_order(self) -> usize {
        match self {
            Quantity::H1 => 0,
            _ => 1,
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantity::U => "u",
            Quantity::H1 => "H1",
            Quantity::U2 => "u2",
            Quantity::Xu => "xu",
        })
    }
}

impl std::str::FromStr for Quantity {
    type Err = Pi2Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "u" => Ok(Quantity::U),
            "H1" | "h1" => Ok(Quantity::H1),
            "u2" => Ok(Quantity::U2),
            "xu" => Ok(Quantity::Xu),
            other => Err(Pi2Error::Config(format!("unknown quantity `{other}` (u, H1, u2, xu)"))),
        }
    }
}

/// One closed-form counterterm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Counterterm {
    /// `c x^(p/3)` with the real cube root.
    Power { coeff: f64, thirds: i32 },
    Constant(f64),
    /// `c x / (x^2 + 1)`.
    Damped(f64),
}

impl Counterterm {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Counterterm::Power { coeff, thirds } => coeff * thirds_pow(x, thirds),
            Counterterm::Constant(c) => c,
            Counterterm::Damped(c) => c * x / (x * x + 1.0),
        }
    }

    /// Exact integral over `[a, b]`.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        match *self {
            Counterterm::Power { coeff, thirds } => {
                let k = thirds + 3;
                coeff * 3.0 / k as f64 * (thirds_pow(b, k) - thirds_pow(a, k))
            }
            Counterterm::Constant(c) => c * (b - a),
            Counterterm::Damped(c) => 0.5 * c * ((b * b + 1.0).ln() - (a * a + 1.0).ln()),
        }
    }

    /// Large-`|x|` series on one side.
    pub fn series(&self, side: Branch, err: i32) -> ThirdsSeries {
        match *self {
            Counterterm::Power { coeff, thirds } => x_thirds_power(side, thirds).scale(coeff),
            Counterterm::Constant(c) => ThirdsSeries::monomial(c, 0),
            Counterterm::Damped(c) => damped_inverse_series(side, err).scale(36.0 * c),
        }
        .truncate(err)
    }
}

/// Counterterms added to the quantity before integration.
pub fn counterterms(quantity: Quantity, t: f64) -> Vec<Counterterm> {
    let c = 6f64.cbrt();
    use Counterterm::*;
    let terms = match quantity {
        Quantity::U => vec![Power { coeff: c, thirds: 1 }, Power { coeff: 2.0 / c * t, thirds: -1 }],
        Quantity::H1 => vec![
            Power { coeff: 0.75 * c, thirds: 4 },
            Power { coeff: 3.0 / c * t, thirds: 2 },
            Constant(t * t),
            Power { coeff: c / 9.0 * t.powi(3), thirds: -2 },
            Damped(1.0 / 36.0),
        ],
        Quantity::U2 => vec![
            Power { coeff: -c * c, thirds: 2 },
            Constant(-4.0 * t),
            Power { coeff: -4.0 / (c * c) * t * t, thirds: -2 },
        ],
        Quantity::Xu => {
            let mut v = literal_xu_counterterms(t);
            v.push(Power { coeff: -2.0 * c / 27.0 * t.powi(3), thirds: -2 });
            v
        }
    };
    terms.into_iter().filter(|ct| !matches!(ct, Power { coeff, .. } | Constant(coeff) | Damped(coeff) if *coeff == 0.0)).collect()
}

/// `x u` counterterms without the `t^3 x^(-2/3)` term; the resulting
/// integral converges only at `t = 0`.
pub fn literal_xu_counterterms(t: f64) -> Vec<Counterterm> {
    let c = 6f64.cbrt();
    vec![
        Counterterm::Power { coeff: c, thirds: 4 },
        Counterterm::Power { coeff: 2.0 / c * t, thirds: 2 },
        Counterterm::Damped(-1.0 / 36.0),
    ]
}

/// Integral of all counterterms over `[-L, L]`.
pub fn counterterm_closed_forms(quantity: Quantity, t: f64, half_width: f64) -> f64 {
    counterterms(quantity, t).iter().map(|c| c.integral(-half_width, half_width)).sum()
}

/// Series of the quantity itself on one side, remainder included.
pub fn quantity_series(quantity: Quantity, side: Branch, t: f64, k: usize) -> Result<ThirdsSeries> {
    match quantity {
        Quantity::U => u_series(side, t, k),
        Quantity::U2 => {
            let u = u_series(side, t, k)?;
            Ok(u.mul(&u))
        }
        Quantity::Xu => Ok(x_series(side).mul(&u_series(side, t, k)?)),
        Quantity::H1 if k == 0 => Ok(h1_series_two_term(side, t)),
        Quantity::H1 => h1_series_from_u(side, t, k),
    }
}

fn regularized_series(terms: &[Counterterm], quantity: Quantity, side: Branch, t: f64, k: usize) -> Result<ThirdsSeries> {
    let q = quantity_series(quantity, side, t, k)?;
    let mut s = q.clone();
    for c in terms {
        s = s.add(&c.series(side, q.err()));
    }
    let scale = q.terms().map(|(_, c)| c.abs()).fold(1.0, f64::max);
    Ok(s.prune_cancelled(1e-11 * scale))
}

fn tail_with(terms: &[Counterterm], quantity: Quantity, t: f64, half_width: f64, k: usize) -> Result<f64> {
    let mut sum = 0.0;
    for side in [Branch::Plus, Branch::Minus] {
        sum += regularized_series(terms, quantity, side, t, k)?.tail_integral(half_width)?;
    }
    Ok(sum)
}

/// Integral of the regularized quantity over `|x| > L`, from its series
/// with `k` expansion terms.
pub fn tail_correction(quantity: Quantity, t: f64, half_width: f64, k: usize) -> Result<f64> {
    tail_with(&counterterms(quantity, t), quantity, t, half_width, k)
}

/// [`tail_correction`] with the literal `x u` counterterms.
pub fn literal_xu_tail_correction(t: f64, half_width: f64, k: usize) -> Result<f64> {
    tail_with(&literal_xu_counterterms(t), Quantity::Xu, t, half_width, k)
}

/// Composite Simpson rule on uniformly spaced samples; with an odd number
/// of intervals the last three use the 3/8 rule.
pub fn simpson(f: &[f64], h: f64) -> f64 {
    let m = f.len().saturating_sub(1);
    match m {
        0 => 0.0,
        1 => 0.5 * h * (f[0] + f[1]),
        _ => {
            let (even, tail) = if m % 2 == 0 { (m, 0.0) } else { (m - 3, 3.0 * h / 8.0 * (f[m - 3] + 3.0 * f[m - 2] + 3.0 * f[m - 1] + f[m])) };
            let mut s = 0.0;
            for i in (0..even).step_by(2) {
                s += f[i] + 4.0 * f[i + 1] + f[i + 2];
            }
            h / 3.0 * s + tail
        }
    }
}

/// Itemized regularized integral.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralReport {
    pub quantity: Quantity,
    pub t: f64,
    #[serde(rename = "L")]
    pub half_width: f64,
    pub tail_order: usize,
    /// Integral of the regularized integrand over `[-L, L]`.
    pub core_value: f64,
    /// Integral of the counterterms alone over `[-L, L]`.
    pub counterterm_value: f64,
    pub tail_correction: f64,
    pub total: f64,
    pub error_estimate: f64,
}

fn quantity_column(quantity: Quantity, sol: &SolutionGrid) -> Vec<f64> {
    (0..sol.len())
        .map(|i| match quantity {
            Quantity::U => sol.u[i],
            Quantity::H1 => sol.h1[i],
            Quantity::U2 => sol.u[i] * sol.u[i],
            Quantity::Xu => sol.x[i] * sol.u[i],
        })
        .collect()
}

/// Half-width of the central window where the counterterms are integrated
/// in closed form; kept grid-aligned.
const CENTRAL_WINDOW: f64 = 1.0;

/// Integral of `q + counterterms` over the nodes `lo..=hi` (symmetric about
/// the middle node). Inside the central window `q` is integrated alone and
/// the counterterms exactly.
fn core_integral(q: &[f64], x: &[f64], terms: &[Counterterm], lo: usize, hi: usize, stride: usize) -> f64 {
    let mid = x.len() / 2;
    let h = (x[1] - x[0]) * stride as f64;
    let mut ic = ((CENTRAL_WINDOW / h).round() as usize).max(1) * stride;
    ic = ic.min(mid - lo);
    let reg = |i: usize| q[i] + terms.iter().map(|c| c.eval(x[i])).sum::<f64>();
    let side = |a: usize, b: usize| -> f64 {
        let v: Vec<f64> = (a..=b).step_by(stride).map(reg).collect();
        simpson(&v, h)
    };
    let center: Vec<f64> = (mid - ic..=mid + ic).step_by(stride).map(|i| q[i]).collect();
    let xc = x[mid + ic];
    let closed: f64 = terms.iter().map(|c| c.integral(-xc, xc)).sum();
    side(lo, mid - ic) + simpson(&center, h) + closed + side(mid + ic, hi)
}

/// Regularized total integral of `quantity` with tail depth `k`.
pub fn total_integral(quantity: Quantity, t: f64, sol: &SolutionGrid, k: usize) -> Result<IntegralReport> {
    if (sol.t - t).abs() > 1e-12 {
        return Err(Pi2Error::GridMismatch(format!("solution computed at t={}, integral requested at t={t}", sol.t)));
    }
    let n = sol.len();
    if n % 2 == 0 || n < 9 || (sol.x[n / 2]).abs() > 1e-12 * sol.half_width() {
        return Err(Pi2Error::GridMismatch("grid must be symmetric with an odd node count".into()));
    }
    let l = sol.half_width();
    let terms = counterterms(quantity, t);
    let q = quantity_column(quantity, sol);
    let core = core_integral(&q, &sol.x, &terms, 0, n - 1, 1);
    let tail = tail_correction(quantity, t, l, k)?;
    let total = core + tail;

    // quadrature: Simpson on every other node, when the node count allows
    let quad = if (n - 1) % 4 == 0 {
        (core - core_integral(&q, &sol.x, &terms, 0, n - 1, 2)).abs() / 15.0
    } else {
        0.0
    };
    let tail_next = tail_correction(quantity, t, l, k + 1).map(|v| (v - tail).abs()).unwrap_or(0.0);
    // window fit: total on a shorter interval [-L', L'] from the same grid
    let m = n / 2;
    let shrink = (m / 4).max(1);
    let l2 = sol.x[n - 1 - shrink];
    let total2 = core_integral(&q, &sol.x, &terms, shrink, n - 1 - shrink, 1) + tail_correction(quantity, t, l2, k)?;
    let rate = match quantity {
        Quantity::H1 => -1.0 / 3.0,
        _ => (1 - 7 * (k as i32 + 1)) as f64 / 3.0 + 1.0,
    };
    let fit = (total - total2).abs() / (l2.powf(rate) - l.powf(rate)).abs() * l.powf(rate);
    Ok(IntegralReport {
        quantity,
        t,
        half_width: l,
        tail_order: k,
        core_value: core,
        counterterm_value: counterterm_closed_forms(quantity, t, l),
        tail_correction: tail,
        total,
        error_estimate: quad + tail_next + fit,
    })
}
