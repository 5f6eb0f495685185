use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::algebra::{Localized, MatrixLaurentSeries, Rational, RationalFunction, Scalar};
use crate::branch::Branch;
use crate::error::{Pi2Error, Result};

use super::qseries::LMatrix;
use super::{airy_constants, g_coeffs, pole_order, GCoefficients, QSeriesBuilder};

type Matrix = MatrixLaurentSeries<RationalFunction>;

pub(crate) fn ser_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Orders through which the interior part of each `R_k`, `k = 1..=levels`,
/// must be known so that the principal parts of all `R_k` come out exact
/// (and `J_levels` is known through `w^last`).
///
/// `D_levels = last`, `D_j = max(-1, max_{k > j} D_k + n_{k-j})`.
pub fn truncation_schedule(levels: usize, last: i32) -> Vec<i32> {
    let mut d = vec![-1; levels];
    d[levels - 1] = last.max(-1);
    for j in (1..levels).rev() {
        let mut best = -1;
        for k in j + 1..=levels {
            best = best.max(d[k - 1] + pole_order(k - j));
        }
        d[j - 1] = best;
    }
    d
}

/// Result of the `R_k` recursion for one branch.
#[derive(Clone)]
pub struct ExpansionTable {
    branch: Branch,
    k_max: usize,
    gc: GCoefficients,
    schedule: Vec<i32>,
    q_orders: Vec<i32>,
    q: Vec<LMatrix>,
    r_principal: Vec<LMatrix>,
    r_interior: Vec<LMatrix>,
    e: Vec<RationalFunction>,
}

impl std::fmt::Debug for ExpansionTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ExpansionTable")
            .field("branch", &self.branch)
            .field("k_max", &self.k_max)
            .field("schedule", &self.schedule)
            .field("e", &self.e)
            .finish_non_exhaustive()
    }
}

/// Runs the recursion to depth `2K`, giving `e_1..e_K`.
///
/// With `J_k = Q_k + sum_{j<k} R_j^in Q_{k-j}`, where `R_j^in` is the
/// interior (non-negative power) series of `R_j`, the exterior series is
/// the principal part of `J_k` and the interior series is minus its analytic
/// part.
pub fn r_recursion(k_max: usize, branch: Branch) -> Result<ExpansionTable> {
    build_table(k_max, branch, -1)
}

fn build_table(k_max: usize, branch: Branch, last: i32) -> Result<ExpansionTable> {
    if k_max == 0 {
        return Err(Pi2Error::Config("expansion depth K must be at least 1".into()));
    }
    let levels = 2 * k_max;
    let schedule = truncation_schedule(levels, last);
    let q_orders: Vec<i32> = (1..=levels).map(|m| schedule[m - 1..].iter().copied().max().unwrap()).collect();
    let needed = (1..=levels).map(|m| q_orders[m - 1] + pole_order(m)).max().unwrap();
    let gc = g_coeffs(branch);
    let builder = QSeriesBuilder::new(gc.clone(), levels, needed)?;
    let q: Vec<LMatrix> = (1..=levels)
        .into_par_iter()
        .map(|m| builder.q_local(m, q_orders[m - 1]))
        .collect::<Result<_>>()?;

    let mut r_principal: Vec<LMatrix> = Vec::with_capacity(levels);
    let mut r_interior: Vec<LMatrix> = Vec::with_capacity(levels);
    for k in 1..=levels {
        let d = schedule[k - 1];
        let products: Vec<LMatrix> = (1..k)
            .into_par_iter()
            .map(|j| r_interior[j - 1].mul(&q[k - j - 1]).truncate(d))
            .collect();
        let jk = products.iter().fold(q[k - 1].truncate(d), |acc, p| acc.add(p));
        let even = k % 2 == 0;
        if (even && !jk.is_diagonal()) || (!even && !jk.is_anti_diagonal()) {
            return Err(Pi2Error::Parity { k, expected: if even { "diagonal" } else { "anti-diagonal" } });
        }
        if jk.valuation().is_some_and(|v| v < -pole_order(k)) {
            return Err(Pi2Error::Config(format!("R_{k} has a pole of order above {}", pole_order(k))));
        }
        r_principal.push(jk.principal_part());
        r_interior.push(jk.analytic_part().neg());
    }

    let r11 = |k: usize| r_principal[k - 1].entry(1, 1).coeff(-1);
    let r12 = |k: usize| r_principal[k - 1].entry(1, 2).coeff(-1);
    let two = Localized::constant(branch.sign_i64() as i8, Rational::from_integer(2.into()));
    let mut e = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let mut ek = r11(2 * k)?.times(&two);
        for i in 1..=k {
            ek = ek.minus(&r12(2 * i - 1)?.times(&r12(2 * (k - i) + 1)?));
        }
        e.push(ek.to_rational_function());
    }
    Ok(ExpansionTable { branch, k_max, gc, schedule, q_orders, q, r_principal, r_interior, e })
}

/// `e_1..e_K` as exact rational functions of `z`.
pub fn e_coeffs(k_max: usize, branch: Branch) -> Result<Vec<RationalFunction>> {
    Ok(shared_table(branch, k_max)?.e[..k_max].to_vec())
}

type Cache = Mutex<HashMap<Branch, Arc<ExpansionTable>>>;

/// Process-wide table with at least `k_max` levels, built on first use.
pub fn shared_table(branch: Branch, k_max: usize) -> Result<Arc<ExpansionTable>> {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().expect("table cache poisoned").get(&branch) {
        if t.k_max >= k_max {
            return Ok(Arc::clone(t));
        }
    }
    let table = Arc::new(r_recursion(k_max, branch)?);
    let mut guard = cache.lock().expect("table cache poisoned");
    let entry = guard.entry(branch).or_insert_with(|| Arc::clone(&table));
    if entry.k_max < k_max {
        *entry = Arc::clone(&table);
    }
    Ok(Arc::clone(entry))
}

/// How the upper summation limit of the coefficient recurrence is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RecurrenceReading {
    /// Inner sum over `i <= n_{k-j} + m`.
    PoleOrderOfQ,
    /// Inner sum over `i <= n_j + m`.
    PoleOrderOfR,
}

/// One coefficient where the coefficient-level recurrence disagrees with the
/// table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecurrenceMismatch {
    pub k: usize,
    pub m: i32,
    /// The recurrence reproduces the table value up to an overall sign.
    pub sign_only: bool,
}

impl ExpansionTable {
    /// Same as [`r_recursion`] but with every `J_k` known through `w^last`,
    /// for coefficient-level cross checks.
    pub fn with_interior_depth(k_max: usize, branch: Branch, last: i32) -> Result<Self> {
        build_table(k_max, branch, last)
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// Number of computed `R_k` levels (`2K`).
    pub fn levels(&self) -> usize {
        2 * self.k_max
    }

    pub fn g_coefficients(&self) -> &GCoefficients {
        &self.gc
    }

    /// Order through which the interior series of each `R_k` is known.
    pub fn truncation_orders(&self) -> &[i32] {
        &self.schedule
    }

    pub fn q(&self, k: usize) -> Matrix {
        self.q[k - 1].map(Localized::to_rational_function)
    }

    /// Exterior (principal part) series of `R_k`.
    pub fn r_principal(&self, k: usize) -> Matrix {
        self.r_principal[k - 1].map(Localized::to_rational_function)
    }

    /// Interior (Taylor) series of `R_k`.
    pub fn r_interior(&self, k: usize) -> Matrix {
        self.r_interior[k - 1].map(Localized::to_rational_function)
    }

    /// `R_k^(-1)`, row-major.
    pub fn r_minus_one(&self, k: usize) -> Result<[[RationalFunction; 2]; 2]> {
        self.r_coeff(k, -1)
    }

    /// `R_k^(m)` for any `m >= -n_k` within the known range.
    pub fn r_coeff(&self, k: usize, m: i32) -> Result<[[RationalFunction; 2]; 2]> {
        Ok(map_mat(&self.r_coeff_local(k, m)?, Localized::to_rational_function))
    }

    fn r_coeff_local(&self, k: usize, m: i32) -> Result<Mat> {
        if m < 0 {
            self.r_principal[k - 1].coeff(m)
        } else {
            self.r_interior[k - 1].coeff(m)
        }
    }

    pub fn e(&self, k: usize) -> Result<&RationalFunction> {
        self.e.get(k.wrapping_sub(1)).ok_or(Pi2Error::DepthExceeded { requested: k, available: self.k_max })
    }

    pub fn e_all(&self) -> &[RationalFunction] {
        &self.e
    }

    /// Evaluates the coefficient-level recurrence
    /// `R_k^(m) = Q_k^(m) + sum_j sum_{i=0}^{b_j + m} R_j^(i) Q_{k-j}^(m-i)`
    /// for `2 <= k <= k_hi`, `-n_k <= m <= m_hi`, and lists every coefficient
    /// where it differs from the table.
    pub fn recurrence_mismatches(
        &self,
        reading: RecurrenceReading,
        k_hi: usize,
        m_hi: i32,
    ) -> Result<Vec<RecurrenceMismatch>> {
        let mut out = Vec::new();
        for k in 2..=k_hi.min(self.levels()) {
            for m in -pole_order(k)..=m_hi {
                let mut acc = self.q[k - 1].coeff(m)?;
                for j in 1..k {
                    let bound = match reading {
                        RecurrenceReading::PoleOrderOfQ => pole_order(k - j),
                        RecurrenceReading::PoleOrderOfR => pole_order(j),
                    } + m;
                    for i in 0..=bound {
                        if m - i < -pole_order(k - j) {
                            continue;
                        }
                        let r = self.r_interior[j - 1].coeff(i)?;
                        let qq = self.q[k - j - 1].coeff(m - i)?;
                        acc = add_mat(&acc, &mul_mat(&r, &qq));
                    }
                }
                let table = self.r_coeff_local(k, m)?;
                if acc != table {
                    let sign_only = acc == neg_mat(&table);
                    out.push(RecurrenceMismatch { k, m, sign_only });
                }
            }
        }
        Ok(out)
    }

    /// Exact dump: `e_k` and every principal coefficient `R_k^(m)`, each
    /// rational function as integer coefficient lists (decimal strings,
    /// lowest degree first).
    pub fn to_json(&self) -> Value {
        let e: Vec<Value> = self
            .e
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let mut v = rf_json(f);
                v["k"] = json!(i + 1);
                v
            })
            .collect();
        let r: Vec<Value> = self
            .r_principal
            .iter()
            .enumerate()
            .map(|(i, mat)| {
                let k = i + 1;
                let coeffs: Vec<Value> = (-pole_order(k)..0)
                    .map(|m| {
                        let c = map_mat(&mat.coeff(m).expect("principal parts are exact"), Localized::to_rational_function);
                        json!({
                            "m": m,
                            "entries": [[rf_json(&c[0][0]), rf_json(&c[0][1])], [rf_json(&c[1][0]), rf_json(&c[1][1])]],
                        })
                    })
                    .collect();
                json!({ "k": k, "principal": coeffs })
            })
            .collect();
        let airy: Vec<Value> = (1..=self.levels())
            .map(|k| serde_json::to_value(airy_constants(k)).expect("serializable"))
            .collect();
        json!({
            "branch": self.branch,
            "k_max": self.k_max,
            "variable": "z",
            "truncation_orders": { "r_interior": self.schedule, "q": self.q_orders },
            "airy_constants": airy,
            "e": e,
            "r": r,
        })
    }
}

fn rf_json(f: &RationalFunction) -> Value {
    let (n, d) = f.to_integer_lists();
    json!({
        "numerator": n.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "denominator": d.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
    })
}

type Mat = [[Localized; 2]; 2];

fn map_mat<D>(a: &Mat, f: impl Fn(&Localized) -> D) -> [[D; 2]; 2] {
    [[f(&a[0][0]), f(&a[0][1])], [f(&a[1][0]), f(&a[1][1])]]
}

fn add_mat(a: &Mat, b: &Mat) -> Mat {
    let f = |i: usize, j: usize| a[i][j].plus(&b[i][j]);
    [[f(0, 0), f(0, 1)], [f(1, 0), f(1, 1)]]
}

fn neg_mat(a: &Mat) -> Mat {
    map_mat(a, Localized::negated)
}

fn mul_mat(a: &Mat, b: &Mat) -> Mat {
    let f = |i: usize, j: usize| a[i][0].times(&b[0][j]).plus(&a[i][1].times(&b[1][j]));
    [[f(0, 0), f(0, 1)], [f(1, 0), f(1, 1)]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, Poly};

    fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
        RationalFunction::new(Poly::from_i64s(num), Poly::from_i64s(den)).unwrap()
    }

    #[test]
    fn schedule_ends_at_minus_one() {
        let d = truncation_schedule(4, -1);
        assert_eq!(d[3], -1);
        // R_3 feeds R_4 through Q_1 (pole order 2)
        assert_eq!(d[2], 1);
        assert_eq!(d[1], 3);
        assert_eq!(d[0], 5);
    }

    #[test]
    fn e1_closed_form() {
        let t = r_recursion(1, Branch::Plus).unwrap();
        // 72 z^3 (5 z^3 + 24) / (z^3 - 24)^4
        let num = &Poly::from_i64s(&[0, 0, 0, 72]) * &Poly::from_i64s(&[24, 0, 0, 5]);
        let den = Poly::from_i64s(&[-24, 0, 0, 1]).pow(4);
        assert_eq!(t.e(1).unwrap(), &RationalFunction::new(num, den).unwrap());
    }

    #[test]
    fn e1_values() {
        let t = r_recursion(1, Branch::Plus).unwrap();
        let e1 = t.e(1).unwrap();
        assert_eq!(e1.eval_exact(&q(-2, 1)).unwrap(), q(9, 1024));
        let m = Poly::from_i64s(&[48, 0, 0, 1]);
        assert_eq!(e1.reduce_mod(&m).unwrap(), Poly::constant(q(1, 36)));
    }

    #[test]
    fn r1_minus_one_matches_closed_form() {
        let t = r_recursion(1, Branch::Plus).unwrap();
        let r = t.r_minus_one(1).unwrap();
        // -2 c2 t_hat_1 / (3 c3^2) = -(1/30)(5/48)(2/3) z (36z)^2/(z^3-24)^2
        let expected12 = rf(&[0, 0, 0, -30], &[576, 0, 0, -48, 0, 0, 1]).scale(&q(1, 10));
        assert_eq!(r[0][1], expected12);
        assert!(r[0][0].is_zero() && r[1][1].is_zero());
    }

    #[test]
    fn depth_error() {
        let t = r_recursion(1, Branch::Minus).unwrap();
        assert!(matches!(t.e(2), Err(Pi2Error::DepthExceeded { .. })));
    }
}
