//! Exact sector distributions of the named state families, their tensor
//! product rule, the few-party comparison tables and two large-parameter
//! reference curves.

use std::cmp::Ordering;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{domain, Error, Result};

/// Exact sector lengths `(S_0, …, S_N)` of a pure state with local dimension `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorPolynomial {
    local_dim: u64,
    coeffs: Vec<BigInt>,
}

impl SectorPolynomial {
    pub fn new(local_dim: u64, coeffs: Vec<BigInt>) -> Self {
        SectorPolynomial { local_dim, coeffs }
    }

    /// The zero-party polynomial `1`, neutral for [`poly_tensor`].
    pub fn trivial(local_dim: u64) -> Self {
        SectorPolynomial {
            local_dim,
            coeffs: vec![BigInt::one()],
        }
    }

    pub fn local_dim(&self) -> u64 {
        self.local_dim
    }

    pub fn n_parties(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn get(&self, k: usize) -> &BigInt {
        &self.coeffs[k]
    }

    pub fn n_sector(&self) -> &BigInt {
        &self.coeffs[self.n_parties()]
    }

    pub fn total(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::INFINITY)).collect()
    }
}

fn big(x: u64) -> BigInt {
    BigInt::from(x)
}

fn pow(base: &BigInt, exp: usize) -> BigInt {
    num_traits::pow(base.clone(), exp)
}

/// Binomial coefficients `C(n, 0..=n)` by Pascal's rule.
pub fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(BigInt::one());
        for w in row.windows(2) {
            next.push(&w[0] + &w[1]);
        }
        next.push(BigInt::one());
        row = next;
    }
    row
}

fn check_nd(n: usize, d: u64, min_n: usize) -> Result<()> {
    if n < min_n || d < 2 {
        return domain(format!("need n >= {min_n} and d >= 2, got n = {n}, d = {d}"));
    }
    Ok(())
}

/// GHZ sector lengths:
/// `S_k = C(N,k) [(d-1)^k + (-1)^k (d-1)] / d + δ_{kN} (d-1) d^{N-1}`.
pub fn ghz_sectors_exact(n: usize, d: u64) -> Result<SectorPolynomial> {
    check_nd(n, d, 2)?;
    let dm1 = big(d - 1);
    let bd = big(d);
    let binom = binomial_row(n);
    let mut coeffs = Vec::with_capacity(n + 1);
    for (k, c) in binom.iter().enumerate() {
        let sign = if k % 2 == 0 { dm1.clone() } else { -dm1.clone() };
        let numer = c * (pow(&dm1, k) + sign);
        if !(&numer % &bd).is_zero() {
            return Err(Error::Consistency(format!("GHZ sector {k} not divisible by d = {d}")));
        }
        coeffs.push(numer / &bd);
    }
    coeffs[n] += &dm1 * pow(&bd, n - 1);
    Ok(SectorPolynomial::new(d, coeffs))
}

/// GHZ N-sector alone: `(d-1) d^{N-1} + [(d-1)^N + (-1)^N (d-1)] / d`.
pub fn ghz_nsector_exact(n: usize, d: u64) -> Result<BigInt> {
    check_nd(n, d, 2)?;
    let dm1 = big(d - 1);
    let bd = big(d);
    let sign = if n % 2 == 0 { dm1.clone() } else { -dm1.clone() };
    let numer = pow(&dm1, n) + sign;
    if !(&numer % &bd).is_zero() {
        return Err(Error::Consistency(format!("GHZ N-sector not divisible by d = {d}")));
    }
    Ok(&dm1 * pow(&bd, n - 1) + numer / bd)
}

/// Product state `|j⟩^{⊗N}`: `S_k = C(N,k) (d-1)^k`.
pub fn product_sectors_exact(n: usize, d: u64) -> Result<SectorPolynomial> {
    check_nd(n, d, 1)?;
    let dm1 = big(d - 1);
    let coeffs = binomial_row(n)
        .into_iter()
        .enumerate()
        .map(|(k, c)| c * pow(&dm1, k))
        .collect();
    Ok(SectorPolynomial::new(d, coeffs))
}

/// Sector distribution of a tensor product: the convolution
/// `S_k(a⊗b) = Σ_{i+j=k} S_i(a) S_j(b)`.
pub fn poly_tensor(a: &SectorPolynomial, b: &SectorPolynomial) -> Result<SectorPolynomial> {
    if a.local_dim != b.local_dim {
        return domain(format!(
            "cannot combine local dimensions {} and {}",
            a.local_dim, b.local_dim
        ));
    }
    let mut coeffs = vec![BigInt::zero(); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        for (j, y) in b.coeffs.iter().enumerate() {
            coeffs[i + j] += x * y;
        }
    }
    Ok(SectorPolynomial::new(a.local_dim, coeffs))
}

/// Full distribution of the Bell family: Bell pairs for even `n`, a
/// three-party GHZ plus Bell pairs for odd `n`.
pub fn bell_family_sectors_exact(n: usize, d: u64) -> Result<SectorPolynomial> {
    check_nd(n, d, 2)?;
    let bell = ghz_sectors_exact(2, d)?;
    let (mut acc, mut placed) = if n % 2 == 0 {
        (bell.clone(), 2)
    } else {
        (ghz_sectors_exact(3, d)?, 3)
    };
    while placed < n {
        acc = poly_tensor(&acc, &bell)?;
        placed += 2;
    }
    Ok(acc)
}

/// N-sector of the Bell family: `(d²-1)^{N/2}` for even `N`,
/// `(d-1)²(d+2)(d²-1)^{(N-3)/2}` for odd `N`.
pub fn bell_family_nsector_exact(n: usize, d: u64) -> Result<BigInt> {
    check_nd(n, d, 2)?;
    let pair = big(d * d - 1);
    Ok(if n % 2 == 0 {
        pow(&pair, n / 2)
    } else {
        pow(&big(d - 1), 2) * big(d + 2) * pow(&pair, (n - 3) / 2)
    })
}

/// Natural log of `d^N (1 - 1/d) + d^{N-1} e^{-N/d}`.
pub fn ln_ghz_nsector_approx(n: f64, d: f64) -> f64 {
    let ln_d = d.ln();
    let first = n * ln_d + (1.0 - 1.0 / d).ln();
    let second = (n - 1.0) * ln_d - n / d;
    let hi = first.max(second);
    hi + ((first - hi).exp() + (second - hi).exp()).ln()
}

/// Large-N approximation of the GHZ N-sector, evaluated in log space.
pub fn ghz_nsector_approx(n: usize, d: usize) -> f64 {
    ln_ghz_nsector_approx(n as f64, d as f64).exp()
}

/// Natural log of `d^N (1 - 1/d²)^N`.
pub fn ln_ame_nsector_approx(n: f64, d: f64) -> f64 {
    n * d.ln() + n * (1.0 - 1.0 / (d * d)).ln()
}

/// Reference curve `d^N (1 - 1/d²)^N` for absolutely maximally entangled states.
pub fn ame_nsector_approx(n: usize, d: usize) -> f64 {
    ln_ame_nsector_approx(n as f64, d as f64).exp()
}

/// Exact integer as a JSON number when it fits in an f64 mantissa, otherwise
/// as a decimal string.
pub fn exact_json(x: &BigInt) -> Value {
    let limit = BigInt::from(1u64 << 53);
    if x.abs() <= limit {
        json!(x.to_i64().expect("bounded by 2^53"))
    } else {
        Value::String(x.to_string())
    }
}

fn cmp_symbol(o: Ordering) -> &'static str {
    match o {
        Ordering::Greater => ">",
        Ordering::Less => "<",
        Ordering::Equal => "=",
    }
}

/// Maximum N-sector for N = 2, 3, 4: the printed formula next to the value
/// of the maximizing state's exact distribution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxSectorRow {
    pub d: u64,
    /// `d² - 1`, `(d-1)²(d+2)`, `(d²-1)²`
    pub formula: [BigInt; 3],
    /// N-sectors of Bell, GHZ³ and Bell⊗Bell
    pub state: [BigInt; 3],
}

impl MaxSectorRow {
    pub fn matches(&self) -> bool {
        self.formula == self.state
    }
}

pub fn table1(ds: impl IntoIterator<Item = u64>) -> Result<Vec<MaxSectorRow>> {
    ds.into_iter()
        .map(|d| {
            let sq = big(d * d - 1);
            let formula = [sq.clone(), pow(&big(d - 1), 2) * big(d + 2), &sq * &sq];
            let bell = ghz_sectors_exact(2, d)?;
            let state = [
                bell.n_sector().clone(),
                ghz_sectors_exact(3, d)?.n_sector().clone(),
                poly_tensor(&bell, &bell)?.n_sector().clone(),
            ];
            Ok(MaxSectorRow { d, formula, state })
        })
        .collect()
}

/// One row of a GHZ versus Bell-family comparison at fixed N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonRow {
    pub d: u64,
    pub ghz: BigInt,
    pub bell: BigInt,
    /// The table's factored column formulas, evaluated independently.
    pub ghz_formula: BigInt,
    pub bell_formula: BigInt,
}

impl ComparisonRow {
    pub fn ordering(&self) -> Ordering {
        self.ghz.cmp(&self.bell)
    }

    pub fn symbol(&self) -> &'static str {
        cmp_symbol(self.ordering())
    }

    pub fn formulas_agree(&self) -> bool {
        self.ghz == self.ghz_formula && self.bell == self.bell_formula
    }
}

/// N = 5: GHZ `(d-1)²(d³+2d²-2d+4)` against `(d-1)³(d+1)(d+2)`.
pub fn table2(ds: impl IntoIterator<Item = u64>) -> Result<Vec<ComparisonRow>> {
    ds.into_iter()
        .map(|d| {
            let bd = big(d);
            let dm1 = big(d - 1);
            let ghz_formula = pow(&dm1, 2) * (pow(&bd, 3) + big(2) * pow(&bd, 2) - big(2) * &bd + big(4));
            let bell_formula = pow(&dm1, 3) * big(d + 1) * big(d + 2);
            Ok(ComparisonRow {
                d,
                ghz: ghz_nsector_exact(5, d)?,
                bell: bell_family_nsector_exact(5, d)?,
                ghz_formula,
                bell_formula,
            })
        })
        .collect()
}

/// N = 6: GHZ `(d-1)/d [d⁶ + (d-1)⁵ + 1]` against `(d²-1)³`.
pub fn table3(ds: impl IntoIterator<Item = u64>) -> Result<Vec<ComparisonRow>> {
    ds.into_iter()
        .map(|d| {
            let bd = big(d);
            let dm1 = big(d - 1);
            let numer = &dm1 * (pow(&bd, 6) + pow(&dm1, 5) + BigInt::one());
            if !(&numer % &bd).is_zero() {
                return Err(Error::Consistency(format!("N = 6 GHZ formula not divisible by d = {d}")));
            }
            Ok(ComparisonRow {
                d,
                ghz: ghz_nsector_exact(6, d)?,
                bell: bell_family_nsector_exact(6, d)?,
                ghz_formula: numer / bd,
                bell_formula: pow(&big(d * d - 1), 3),
            })
        })
        .collect()
}

pub fn render_table1(rows: &[MaxSectorRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:>4}  {:>12}  {:>16}  {:>14}", "d", "N=2 d^2-1", "N=3 (d-1)^2(d+2)", "N=4 (d^2-1)^2");
    for r in rows {
        let _ = writeln!(
            out,
            "{:>4}  {:>12}  {:>16}  {:>14}",
            r.d, r.formula[0], r.formula[1], r.formula[2]
        );
    }
    out
}

pub fn table1_json(rows: &[MaxSectorRow]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| {
                json!({
                    "d": r.d,
                    "S2": exact_json(&r.formula[0]),
                    "S3": exact_json(&r.formula[1]),
                    "S4": exact_json(&r.formula[2]),
                    "maximizers": ["bell", "ghz3", "bell^2"],
                    "matches_states": r.matches(),
                })
            })
            .collect(),
    )
}

pub fn render_comparison(n: usize, rows: &[ComparisonRow]) -> String {
    let bell_name = if n % 2 == 0 { "Bell^(N/2)" } else { "GHZ3 x Bell" };
    let mut out = String::new();
    let _ = writeln!(out, "S_{n}");
    let _ = writeln!(out, "{:>4}  {:>12}     {:>12}", "d", format!("GHZ^{n}"), bell_name);
    for r in rows {
        let _ = writeln!(out, "{:>4}  {:>12}  {}  {:>12}", r.d, r.ghz, r.symbol(), r.bell);
    }
    out
}

pub fn comparison_json(n: usize, rows: &[ComparisonRow]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| {
                json!({
                    "n": n,
                    "d": r.d,
                    "ghz": exact_json(&r.ghz),
                    "cmp": r.symbol(),
                    "bell": exact_json(&r.bell),
                    "formulas_agree": r.formulas_agree(),
                })
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn ghz_examples() {
        assert_eq!(ghz_sectors_exact(6, 2).unwrap().n_sector(), &BigInt::from(33));
        assert_eq!(ghz_sectors_exact(5, 4).unwrap().n_sector(), &BigInt::from(828));
        let s = ghz_sectors_exact(6, 4).unwrap();
        assert_eq!(s.n_sector(), &BigInt::from(3255));
        // (d-1)/d [d^6 + (d-1)^5 + 1] at d = 4
        assert_eq!(3 * (4096 + 243 + 1) / 4, 3255);
        assert_eq!(ghz_sectors_exact(2, 2).unwrap().coeffs(), ints(&[1, 0, 3]).as_slice());
        assert_eq!(ghz_sectors_exact(3, 3).unwrap().coeffs(), ints(&[1, 0, 6, 20]).as_slice());
        assert!(ghz_sectors_exact(1, 3).is_err());
    }

    #[test]
    fn ghz_totals_and_qubit_structure() {
        for n in 2..=30 {
            for d in 2..=12u64 {
                let s = ghz_sectors_exact(n, d).unwrap();
                assert_eq!(s.total(), pow(&big(d), n));
                assert_eq!(s.get(0), &BigInt::one());
                assert_eq!(s.n_sector(), &ghz_nsector_exact(n, d).unwrap());
            }
            let q = ghz_sectors_exact(n, 2).unwrap();
            if n % 2 == 1 {
                for k in (1..n).step_by(2) {
                    assert!(q.get(k).is_zero());
                }
                assert_eq!(q.n_sector(), &pow(&big(2), n - 1));
            } else {
                assert_eq!(q.n_sector(), &(pow(&big(2), n - 1) + 1));
            }
        }
    }

    #[test]
    fn product_examples() {
        assert_eq!(product_sectors_exact(3, 2).unwrap().coeffs(), ints(&[1, 3, 3, 1]).as_slice());
        assert_eq!(product_sectors_exact(2, 3).unwrap().coeffs(), ints(&[1, 4, 4]).as_slice());
        for n in 1..10 {
            for d in 2..7u64 {
                let p = product_sectors_exact(n, d).unwrap();
                assert_eq!(p.n_sector(), &pow(&big(d - 1), n));
                assert_eq!(p.total(), pow(&big(d), n));
            }
        }
    }

    #[test]
    fn tensor_examples() {
        let bell = ghz_sectors_exact(2, 3).unwrap();
        let b3 = poly_tensor(&poly_tensor(&bell, &bell).unwrap(), &bell).unwrap();
        assert_eq!(b3.n_sector(), &BigInt::from(512));
        let g3b = poly_tensor(&ghz_sectors_exact(3, 3).unwrap(), &bell).unwrap();
        assert_eq!(g3b.n_sector(), &BigInt::from(160));
        let trivial = SectorPolynomial::trivial(3);
        assert_eq!(poly_tensor(&g3b, &trivial).unwrap(), g3b);
        assert!(poly_tensor(&bell, &ghz_sectors_exact(2, 2).unwrap()).is_err());
    }

    #[test]
    fn bell_family_examples() {
        assert_eq!(bell_family_nsector_exact(6, 3).unwrap(), BigInt::from(512));
        assert_eq!(bell_family_nsector_exact(5, 6).unwrap(), BigInt::from(7000));
        assert_eq!(bell_family_nsector_exact(5, 7).unwrap(), BigInt::from(15552));
        for n in 2..=14 {
            for d in 2..=9u64 {
                let full = bell_family_sectors_exact(n, d).unwrap();
                assert_eq!(full.n_sector(), &bell_family_nsector_exact(n, d).unwrap());
                assert_eq!(full.total(), pow(&big(d), n));
            }
        }
    }

    #[test]
    fn ghz_approximation() {
        // exact S_N(40, 20) against the approximation, in f64 via the exact ratio
        let exact = ghz_nsector_exact(40, 20).unwrap().to_f64().unwrap();
        let approx = ghz_nsector_approx(40, 20);
        assert!(((approx - exact) / exact).abs() <= 1e-3);

        // d → ∞ at fixed N
        let mut last = f64::INFINITY;
        for d in [10u64, 100, 1000, 10000] {
            let ex = ghz_nsector_exact(4, d).unwrap().to_f64().unwrap();
            let rel = ((ghz_nsector_approx(4, d as usize) - ex) / ex).abs();
            assert!(rel < last);
            last = rel;
        }
        assert!(last < 1e-3);

        // far outside the validity regime at (6, 2)
        let ex = 33.0;
        assert!(((ghz_nsector_approx(6, 2) - ex) / ex).abs() > 1e-3);
    }

    #[test]
    fn ame_curve() {
        assert!((ame_nsector_approx(4, 2) - 81.0 / 16.0).abs() < 1e-12);
        for n in [3usize, 10, 40] {
            let vals: Vec<f64> = (2..30).map(|d| ame_nsector_approx(n, d)).collect();
            assert!(vals.windows(2).all(|w| w[1] > w[0]));
        }
        // N well above d: the AME curve stays below the GHZ curve
        for d in 2..=10usize {
            for n in (4 * d)..(4 * d + 40) {
                assert!(ln_ame_nsector_approx(n as f64, d as f64) < ln_ghz_nsector_approx(n as f64, d as f64));
            }
        }
    }

    #[test]
    fn exact_json_switches_to_strings() {
        assert_eq!(exact_json(&BigInt::from(7000)), json!(7000));
        let big_val = pow(&big(10), 20);
        assert_eq!(exact_json(&big_val), json!("100000000000000000000"));
        assert_eq!(exact_json(&BigInt::from(-(1i64 << 53))), json!(-(1i64 << 53)));
    }
}
