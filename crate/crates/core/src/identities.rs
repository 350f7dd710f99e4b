//! Numerical verification of the linear relations between sector lengths of
//! pure states, and of the single-party bound used for qubits with even N.
//!
//! Equalities are checked with a tolerance of `1e-9` times the natural
//! magnitude of the relation (a power of `d` stated per check).

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::qstate::{reduce, PartySubset, PureState};
use crate::sector_engine::{
    purity_table, r_matrix, sectors_from_table, spin_flip_vector, trace_r_from_table, PurityTable,
    SectorDistribution,
};
use crate::subset::Bipartition;

const REL_TOL: f64 = 1e-9;

/// Largest `d^{2(N-1)}` for which trace-R relations build explicit R matrices.
pub const EXPLICIT_R_LIMIT: f64 = 1e5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationKind {
    /// `|left - right| <= tolerance`
    Equality,
    /// equality, and additionally `left >= -tolerance`
    EqualityNonNegative,
    /// `left <= right + tolerance`
    AtMost,
}

/// Outcome of one relation check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationReport {
    pub relation: String,
    pub kind: RelationKind,
    pub left: f64,
    pub right: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// For bounds: whether the bound is attained within tolerance.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub saturated: Option<bool>,
}

impl RelationReport {
    pub fn equality(relation: impl Into<String>, left: f64, right: f64, tolerance: f64) -> Self {
        let residual = left - right;
        RelationReport {
            relation: relation.into(),
            kind: RelationKind::Equality,
            left,
            right,
            residual,
            tolerance,
            pass: residual.abs() <= tolerance,
            saturated: None,
        }
    }

    pub fn equality_non_negative(relation: impl Into<String>, left: f64, right: f64, tolerance: f64) -> Self {
        let mut r = Self::equality(relation, left, right, tolerance);
        r.kind = RelationKind::EqualityNonNegative;
        r.pass = r.pass && left >= -tolerance;
        r
    }

    pub fn at_most(relation: impl Into<String>, left: f64, bound: f64, tolerance: f64) -> Self {
        let residual = left - bound;
        RelationReport {
            relation: relation.into(),
            kind: RelationKind::AtMost,
            left,
            right: bound,
            residual,
            tolerance,
            pass: residual <= tolerance,
            saturated: Some(residual.abs() <= tolerance),
        }
    }
}

fn powi(d: usize, e: usize) -> f64 {
    (d as f64).powi(e as i32)
}

fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `d^N S_N = Σ_k (-1)^k (d²-1)^{N-k} S_k`, tolerance `1e-9 d^N`.
pub fn check_pq_relation(s: &SectorDistribution) -> RelationReport {
    let n = s.n_parties();
    let d = s.local_dim();
    let dd = (d * d - 1) as f64;
    let left = powi(d, n) * s.n_sector();
    let right: f64 = (0..=n)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * dd.powi((n - k) as i32) * s.get(k)
        })
        .sum();
    RelationReport::equality("pq", left, right, REL_TOL * powi(d, n))
}

/// k-purity relation
/// `d^{N-2k} Σ_{m≤k} C(N-m, k-m) S_m = Σ_{n≤N-k} C(N-n, k) S_n`,
/// tolerance `1e-9 C(N,k) d^N`.
pub fn check_k_purity(s: &SectorDistribution, k: usize) -> Result<RelationReport> {
    let n = s.n_parties();
    let d = s.local_dim();
    if n == 0 || k > (n - 1) / 2 {
        return domain(format!("k-purity needs 0 <= k <= floor((N-1)/2), got k = {k}, N = {n}"));
    }
    let left = powi(d, n - 2 * k) * (0..=k).map(|m| binom(n - m, k - m) * s.get(m)).sum::<f64>();
    let right: f64 = (0..=n - k).map(|i| binom(n - i, k) * s.get(i)).sum();
    Ok(RelationReport::equality(
        format!("k_purity[k={k}]"),
        left,
        right,
        REL_TOL * binom(n, k) * powi(d, n),
    ))
}

/// `Σ_k (-1)^k (N-k) (d-1)^{N-1-k} S_k`, the sector side of the trace-R
/// relation. The `(d-1)` powers are all 1 for qubits.
fn trr_sector_side(s: &SectorDistribution) -> f64 {
    let n = s.n_parties();
    let dm1 = s.local_dim() as f64 - 1.0;
    (0..n)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * (n - k) as f64 * dm1.powi((n - 1 - k) as i32) * s.get(k)
        })
        .sum()
}

/// `Σ_j Tr R_[j]` from explicit R matrices when the operators are small
/// enough, otherwise from the purity table.
fn sum_trace_r(state: &PureState, table: &PurityTable) -> Result<(f64, bool)> {
    let n = state.n_parties();
    if powi(state.local_dim(), 2 * (n - 1)) <= EXPLICIT_R_LIMIT {
        let mut total = 0.0;
        for j in 0..n {
            let tr = r_matrix(state, j)?.trace();
            if tr.im.abs() > 1e-10 {
                return Err(Error::Consistency(format!("Tr R_[{j}] has imaginary part {}", tr.im)));
            }
            total += tr.re;
        }
        Ok((total, true))
    } else {
        Ok(((0..n).map(|j| trace_r_from_table(table, j)).sum(), false))
    }
}

fn sectors_and_table(state: &PureState) -> Result<(SectorDistribution, PurityTable)> {
    let table = purity_table(state)?;
    Ok((sectors_from_table(&table)?, table))
}

/// `d^{N-1} Σ_j Tr R_[j] = Σ_k (-1)^k (N-k) (d-1)^{N-1-k} S_k` with the
/// left side non-negative; tolerance `1e-9 d^{N-1}`.
pub fn check_trr_relation(state: &PureState) -> Result<RelationReport> {
    let n = state.n_parties();
    let d = state.local_dim();
    if n < 2 {
        return domain("trace-R relation needs N >= 2");
    }
    let (s, table) = sectors_and_table(state)?;
    let (sum_r, explicit) = sum_trace_r(state, &table)?;
    let name = if explicit { "trace_r" } else { "trace_r (purity table)" };
    Ok(RelationReport::equality_non_negative(
        name,
        powi(d, n - 1) * sum_r,
        trr_sector_side(&s),
        REL_TOL * powi(d, n - 1),
    ))
}

/// Half the sum of the 1-purity and trace-R relations for even `N >= 4`:
/// `(d^{N-2}/2) [N + S_1 + d Σ_j Tr R_[j]] = Σ_k (N-k) [1 + (-1)^k (d-1)^{N-1-k}]/2 S_k`.
/// For qubits the right side keeps only the even sectors,
/// `N + (N-2) S_2 + … + 2 S_{N-2}`. Tolerance `1e-9 d^{N-2}`.
pub fn check_even_sector_relation(state: &PureState) -> Result<RelationReport> {
    let n = state.n_parties();
    let d = state.local_dim();
    if n % 2 == 1 || n < 4 {
        return domain(format!("even-sector relation needs even N >= 4, got N = {n}"));
    }
    let (s, table) = sectors_and_table(state)?;
    let (sum_r, _) = sum_trace_r(state, &table)?;
    let dm1 = d as f64 - 1.0;
    let left = powi(d, n - 2) / 2.0 * (n as f64 + s.get(1) + d as f64 * sum_r);
    let right: f64 = (0..n)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            (n - k) as f64 * (1.0 + sign * dm1.powi((n - 1 - k) as i32)) / 2.0 * s.get(k)
        })
        .sum();
    Ok(RelationReport::equality("even_sectors", left, right, REL_TOL * powi(d, n - 2)))
}

/// Odd-N qubits: even and odd sector sums both equal `2^{N-1}`; tolerance
/// `1e-9 2^N`. The report compares `S_even` with `S_odd`.
pub fn check_odd_qubit_balance(s: &SectorDistribution) -> Result<RelationReport> {
    let n = s.n_parties();
    if s.local_dim() != 2 || n % 2 == 0 {
        return domain(format!(
            "even/odd balance needs qubits with odd N, got d = {}, N = {n}",
            s.local_dim()
        ));
    }
    let even: f64 = s.lengths().iter().step_by(2).sum();
    let odd: f64 = s.lengths().iter().skip(1).step_by(2).sum();
    let tol = REL_TOL * powi(2, n);
    let mut report = RelationReport::equality("even_odd_balance", even, odd, tol);
    report.pass = report.pass && (even - powi(2, n - 1)).abs() <= tol;
    Ok(report)
}

/// `H = Tr[Π Y^{⊗N} Π* Y^{⊗N}] = |⟨ψ| Y^{⊗N} |ψ*⟩|²` for qubit states.
pub fn h_invariant(state: &PureState) -> Result<f64> {
    if state.local_dim() != 2 {
        return domain("H invariant is defined for qubits");
    }
    let flipped = spin_flip_vector(state.n_parties(), state.amplitudes());
    let overlap: Complex64 = state.amplitudes().iter().zip(&flipped).map(|(a, b)| a.conj() * b).sum();
    Ok(overlap.norm_sqr())
}

/// `H = 0` for odd-N qubit states, tolerance `1e-10`.
pub fn check_h_invariant(state: &PureState) -> Result<RelationReport> {
    let n = state.n_parties();
    if state.local_dim() != 2 || n % 2 == 0 {
        return domain("H = 0 holds for qubits with odd N");
    }
    Ok(RelationReport::equality("h_invariant", h_invariant(state)?, 0.0, 1e-10))
}

/// Party-count specific identities for `2 <= N <= 6`. Where the leading
/// coefficient vanishes (N = 5, d = 3; N = 6, d = 2) the remaining identity
/// is still checked. Tolerance `1e-9` times the largest of `d^N` and the
/// magnitudes of the individual terms.
pub fn check_small_n_identity(s: &SectorDistribution) -> Result<RelationReport> {
    let n = s.n_parties();
    let d = s.local_dim() as f64;
    let sk = |k: usize| s.get(k);
    let dm1 = d - 1.0;
    let dd = d * d - 1.0;
    let (left, terms): (f64, Vec<f64>) = match n {
        2 => (d * d, vec![1.0, sk(1), sk(2)]),
        3 => (sk(3), vec![dm1 * dm1 * (d + 2.0), -dm1 * sk(1)]),
        4 => (sk(4), vec![dd * dd, -0.5 * dd * sk(1), -0.5 * sk(3)]),
        5 => (
            (d - 3.0) * sk(5),
            vec![
                dm1.powi(3) * (d + 2.0) * (d * d - 2.0 * d - 4.0),
                -dm1 * dm1 * (d * d - d - 3.0) * sk(1),
                dm1 * sk(3),
            ],
        ),
        6 => (
            2.0 * (d * d - 4.0) * sk(6),
            vec![
                2.0 * (d - 2.0) * dd.powi(3) * (d + 2.0),
                -dd * dd * (d * d - 3.0) * sk(1),
                dd * sk(3),
                -(d * d - 3.0) * sk(5),
            ],
        ),
        _ => return domain(format!("party-count identities exist for 2 <= N <= 6, got N = {n}")),
    };
    let right: f64 = terms.iter().sum();
    let scale = terms
        .iter()
        .map(|t| t.abs())
        .fold(left.abs().max(d.powi(n as i32)), f64::max);
    Ok(RelationReport::equality(format!("small_n[N={n}]"), left, right, REL_TOL * scale))
}

/// Schmidt data of an even-N qubit state across one party.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SchmidtDelta {
    pub party: usize,
    /// Largest Schmidt coefficient (squared), `λ₁ ∈ [1/2, 1]`.
    pub lambda: f64,
    /// `|⟨X_0| Y^{⊗(N-1)} |X_1*⟩|`, set to 0 for a degenerate spectrum.
    pub delta: f64,
    /// `2λ₁² + 2(1-λ₁)² - 1 + 4λ₁(1-λ₁)Δ²`
    pub value: f64,
    /// `λ₁ = 1`: the party is in a pure product with the rest.
    pub degenerate: bool,
}

const DEGENERATE_TOL: f64 = 1e-12;

/// Schmidt decomposition across `party` (zero-based) for an even-N qubit
/// state. Fails with a consistency error if `Δ > 1 + 1e-10` or
/// `value > 1 + 1e-9`.
pub fn schmidt_delta_check(state: &PureState, party: usize) -> Result<SchmidtDelta> {
    let n = state.n_parties();
    if state.local_dim() != 2 || n % 2 == 1 {
        return domain(format!(
            "Schmidt check needs qubits with even N, got d = {}, N = {n}",
            state.local_dim()
        ));
    }
    if party >= n {
        return domain(format!("party {party} out of range for {n} parties"));
    }
    let single = PartySubset::single(party);
    let rho = reduce(state, single)?;
    let eig = rho.matrix().clone().symmetric_eigen();
    let (hi, lo) = if eig.eigenvalues[0] >= eig.eigenvalues[1] { (0, 1) } else { (1, 0) };
    let lambda = eig.eigenvalues[hi].clamp(0.0, 1.0);
    let lambda_lo = eig.eigenvalues[lo].max(0.0);

    let (delta, degenerate) = if lambda_lo < DEGENERATE_TOL {
        (0.0, true)
    } else {
        // |X_i⟩ = (u_i† M) / √λ_i with M the 2 x 2^{N-1} reshaping
        let bp = Bipartition::new(n, 2, single);
        let mut x = [vec![Complex64::new(0.0, 0.0); bp.dim_out], vec![Complex64::new(0.0, 0.0); bp.dim_out]];
        for (i, a) in state.amplitudes().iter().enumerate() {
            for (slot, col) in [hi, lo].into_iter().enumerate() {
                x[slot][bp.outer[i]] += eig.eigenvectors[(bp.inner[i], col)].conj() * a;
            }
        }
        for (slot, lam) in [(0, lambda), (1, lambda_lo)] {
            let s = lam.sqrt();
            x[slot].iter_mut().for_each(|z| *z /= s);
        }
        let flipped = spin_flip_vector(n - 1, &x[1]);
        let overlap: Complex64 = x[0].iter().zip(&flipped).map(|(a, b)| a.conj() * b).sum();
        (overlap.norm(), false)
    };

    let value = 2.0 * lambda * lambda + 2.0 * (1.0 - lambda).powi(2) - 1.0
        + 4.0 * lambda * (1.0 - lambda) * delta * delta;
    if delta > 1.0 + 1e-10 {
        return Err(Error::Consistency(format!("Δ = {delta} exceeds 1")));
    }
    if value > 1.0 + 1e-9 {
        return Err(Error::Consistency(format!("single-party bound value {value} exceeds 1")));
    }
    Ok(SchmidtDelta {
        party,
        lambda,
        delta,
        value,
        degenerate,
    })
}

/// `S_1 + 2 Σ_j Tr R_[j] <= N` for even-N qubit states, tolerance `1e-9`;
/// `saturated` flags equality.
pub fn check_symmetrized_max(state: &PureState) -> Result<RelationReport> {
    let n = state.n_parties();
    if state.local_dim() != 2 || n % 2 == 1 {
        return domain(format!(
            "symmetrized bound needs qubits with even N, got d = {}, N = {n}",
            state.local_dim()
        ));
    }
    let (s, table) = sectors_and_table(state)?;
    let sum_r: f64 = (0..n).map(|j| trace_r_from_table(&table, j)).sum();
    Ok(RelationReport::at_most("symmetrized_max", s.get(1) + 2.0 * sum_r, n as f64, REL_TOL))
}

/// Relation families selectable for [`verify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Pq,
    KPurity,
    TrR,
    Even,
    Balance,
    SmallN,
    Schmidt,
}

impl Relation {
    pub const ALL: [Relation; 7] = [
        Relation::Pq,
        Relation::KPurity,
        Relation::TrR,
        Relation::Even,
        Relation::Balance,
        Relation::SmallN,
        Relation::Schmidt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Relation::Pq => "pq",
            Relation::KPurity => "kpurity",
            Relation::TrR => "trr",
            Relation::Even => "even",
            Relation::Balance => "balance",
            Relation::SmallN => "smalln",
            Relation::Schmidt => "schmidt",
        }
    }

    /// Whether the relation is defined for `n` parties of dimension `d`.
    pub fn applies(self, n: usize, d: usize) -> bool {
        match self {
            Relation::Pq => true,
            Relation::KPurity => n >= 1,
            Relation::TrR => n >= 2,
            Relation::Even => n % 2 == 0 && n >= 4,
            Relation::Balance => d == 2 && n % 2 == 1,
            Relation::SmallN => (2..=6).contains(&n),
            Relation::Schmidt => d == 2 && n % 2 == 0,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Relation::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown relation '{s}'")))
    }
}

/// Runs the selected relation families. Requesting a family that does not
/// apply to the state is a domain error; use [`verify_all`] to run every
/// applicable one.
pub fn verify(state: &PureState, relations: &[Relation]) -> Result<Vec<RelationReport>> {
    let n = state.n_parties();
    let d = state.local_dim();
    if let Some(r) = relations.iter().find(|r| !r.applies(n, d)) {
        return domain(format!("relation '{r}' does not apply to N = {n}, d = {d}"));
    }
    let table = purity_table(state)?;
    let s = sectors_from_table(&table)?;
    let mut out = Vec::new();
    for &rel in relations {
        match rel {
            Relation::Pq => out.push(check_pq_relation(&s)),
            Relation::KPurity => {
                for k in 0..=(n - 1) / 2 {
                    out.push(check_k_purity(&s, k)?);
                }
            }
            Relation::TrR => out.push(check_trr_relation(state)?),
            Relation::Even => out.push(check_even_sector_relation(state)?),
            Relation::Balance => {
                out.push(check_odd_qubit_balance(&s)?);
                out.push(check_h_invariant(state)?);
            }
            Relation::SmallN => out.push(check_small_n_identity(&s)?),
            Relation::Schmidt => {
                for party in 0..n {
                    let sd = schmidt_delta_check(state, party)?;
                    // same quantity through the sector route: S_1 of the party plus 2 Tr R
                    let via_sectors = 2.0 * table.get(PartySubset::single(party)) - 1.0
                        + 2.0 * trace_r_from_table(&table, party);
                    out.push(RelationReport::equality(
                        format!("schmidt_value[party={}]", party + 1),
                        sd.value,
                        via_sectors,
                        REL_TOL,
                    ));
                    out.push(RelationReport::at_most(
                        format!("schmidt_bound[party={}]", party + 1),
                        sd.value,
                        1.0,
                        REL_TOL,
                    ));
                }
                out.push(check_symmetrized_max(state)?);
            }
        }
    }
    Ok(out)
}

/// Every relation family applicable to the state.
pub fn verify_all(state: &PureState) -> Result<Vec<RelationReport>> {
    let rels: Vec<Relation> = Relation::ALL
        .into_iter()
        .filter(|r| r.applies(state.n_parties(), state.local_dim()))
        .collect();
    verify(state, &rels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_forms::ghz_sectors_exact;
    use crate::qstate::{make_ghz, make_product, random_state};
    use crate::sector_engine::sectors_from_purities;

    fn dist(n: usize, d: usize, v: &[f64]) -> SectorDistribution {
        SectorDistribution::from_lengths(n, d, v.to_vec())
    }

    fn exact_ghz(n: usize, d: usize) -> SectorDistribution {
        dist(n, d, &ghz_sectors_exact(n, d as u64).unwrap().to_f64())
    }

    #[test]
    fn pq_examples() {
        let r = check_pq_relation(&dist(2, 2, &[1.0, 0.0, 3.0]));
        assert_eq!((r.left, r.right), (12.0, 12.0));
        assert!(r.pass);
        let r = check_pq_relation(&dist(3, 2, &[1.0, 0.0, 3.0, 4.0]));
        assert_eq!((r.left, r.right), (32.0, 32.0));
        let bad = check_pq_relation(&dist(3, 2, &[1.0, 0.0, 3.0, 5.0]));
        assert!(!bad.pass);
    }

    #[test]
    fn k_purity_examples() {
        let ghz3 = dist(3, 2, &[1.0, 0.0, 3.0, 4.0]);
        let r = check_k_purity(&ghz3, 0).unwrap();
        assert_eq!((r.left, r.right), (8.0, 8.0));
        let r = check_k_purity(&ghz3, 1).unwrap();
        assert_eq!((r.left, r.right), (6.0, 6.0));
        assert!(check_k_purity(&ghz3, 2).is_err());
        let r = check_k_purity(&exact_ghz(5, 3), 2).unwrap();
        assert!(r.pass);
        assert_eq!(r.left, r.right);
    }

    #[test]
    fn trr_examples() {
        let r = check_trr_relation(&make_ghz(4, 2).unwrap()).unwrap();
        assert!((r.left - 16.0).abs() < 1e-12 && (r.right - 16.0).abs() < 1e-12);
        assert!(r.pass);
        for (n, d) in [(3, 2), (4, 3), (2, 4), (5, 3)] {
            let r = check_trr_relation(&make_product(n, d, 1).unwrap()).unwrap();
            assert!(r.left.abs() < 1e-12 && r.right.abs() < 1e-9, "{r:?}");
        }
        // qubit product states: Σ_k (-1)^k (N-k) C(N,k) = 0 with no (d-1) weights
        for n in 2..10usize {
            let plain: f64 = (0..n)
                .map(|k| if k % 2 == 0 { 1.0 } else { -1.0 } * (n - k) as f64 * binom(n, k))
                .sum();
            assert_eq!(plain, 0.0);
        }
    }

    #[test]
    fn even_sector_examples() {
        let r = check_even_sector_relation(&make_ghz(4, 2).unwrap()).unwrap();
        assert!((r.left - 16.0).abs() < 1e-12 && (r.right - 16.0).abs() < 1e-12);
        let r = check_even_sector_relation(&make_ghz(6, 2).unwrap()).unwrap();
        assert!(r.pass);
        // exact values: S = ghz(6,2), Tr R_[j] = 1/2 for all j
        let s = exact_ghz(6, 2);
        let left = 16.0 / 2.0 * (6.0 + s.get(1) + 2.0 * 6.0 * 0.5);
        assert!((r.left - left).abs() < 1e-10);
        assert!(check_even_sector_relation(&make_ghz(5, 2).unwrap()).is_err());
    }

    #[test]
    fn balance_examples() {
        let r = check_odd_qubit_balance(&dist(3, 2, &[1.0, 0.0, 3.0, 4.0])).unwrap();
        assert_eq!((r.left, r.right), (4.0, 4.0));
        let r = check_odd_qubit_balance(&exact_ghz(5, 2)).unwrap();
        assert_eq!((r.left, r.right), (16.0, 16.0));
        assert!(check_odd_qubit_balance(&exact_ghz(4, 2)).is_err());
        assert!(check_odd_qubit_balance(&exact_ghz(3, 3)).is_err());
        for seed in 0..20 {
            let st = random_state(5, 2, seed).unwrap();
            assert!(check_h_invariant(&st).unwrap().pass);
        }
        // H does not vanish for even N in general
        assert!((h_invariant(&make_ghz(4, 2).unwrap()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn small_n_examples() {
        let r = check_small_n_identity(&exact_ghz(5, 3)).unwrap();
        assert_eq!((r.left, r.right), (0.0, 0.0));
        assert!(r.pass);
        let r = check_small_n_identity(&exact_ghz(4, 2)).unwrap();
        assert_eq!((r.left, r.right), (9.0, 9.0));
        for n in 2..=6 {
            for d in 2..=7 {
                assert!(check_small_n_identity(&exact_ghz(n, d)).unwrap().pass, "GHZ n={n} d={d}");
            }
        }
        for seed in 0..10 {
            let s = sectors_from_purities(&random_state(3, 3, seed).unwrap()).unwrap();
            assert!(check_small_n_identity(&s).unwrap().pass);
        }
        assert!(check_small_n_identity(&exact_ghz(7, 2)).is_err());
    }

    #[test]
    fn schmidt_examples() {
        let g = make_ghz(4, 2).unwrap();
        let sd = schmidt_delta_check(&g, 0).unwrap();
        assert!((sd.lambda - 0.5).abs() < 1e-12);
        assert!((sd.delta - 1.0).abs() < 1e-12);
        assert!((sd.value - 1.0).abs() < 1e-12);
        assert!(!sd.degenerate);

        let p = make_product(4, 2, 0).unwrap();
        let sd = schmidt_delta_check(&p, 2).unwrap();
        assert!(sd.degenerate);
        assert_eq!(sd.delta, 0.0);
        assert!((sd.lambda - 1.0).abs() < 1e-12 && (sd.value - 1.0).abs() < 1e-12);

        assert!(schmidt_delta_check(&make_ghz(3, 2).unwrap(), 0).is_err());
        assert!(schmidt_delta_check(&make_ghz(4, 3).unwrap(), 0).is_err());
    }

    #[test]
    fn symmetrized_max_examples() {
        for n in [4, 6] {
            let r = check_symmetrized_max(&make_ghz(n, 2).unwrap()).unwrap();
            assert!((r.left - n as f64).abs() < 1e-9);
            assert_eq!(r.saturated, Some(true));
        }
        let r = check_symmetrized_max(&random_state(4, 2, 1).unwrap()).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn verify_all_on_random_states() {
        for (n, d) in [(3, 2), (4, 2), (5, 2), (4, 3), (6, 2), (2, 5), (3, 4)] {
            let st = random_state(n, d, 5).unwrap();
            let reports = verify_all(&st).unwrap();
            assert!(!reports.is_empty());
            for r in &reports {
                assert!(r.pass, "{r:?}");
            }
        }
    }

    #[test]
    fn verify_rejects_inapplicable_relation() {
        let st = random_state(3, 3, 1).unwrap();
        assert!(matches!(verify(&st, &[Relation::Schmidt]), Err(Error::Domain(_))));
        assert!("bogus".parse::<Relation>().is_err());
        assert_eq!("trr".parse::<Relation>().unwrap(), Relation::TrR);
    }
}
