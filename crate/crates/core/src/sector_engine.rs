//! Sector lengths from the table of all reduced-state purities, plus the
//! operator-level superoperators (N-sector projector, its companion map,
//! the universal state inversion and the R matrices).
//!
//! For a pure state every sector length follows from the `2^N` purities
//! `Tr(ρ_B²)`: the full-support sector of a reduction `ρ_A` has length
//! `d^{|A|} Σ_{B⊆A} (-1/d)^{|A|-|B|} Tr(ρ_B²)`, and `S_k` sums that over all
//! `|A| = k`. The operator routines materialize `d^N x d^N` matrices and are
//! meant for small systems only.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::bloch_oracle::ORACLE_LIMIT;
use crate::error::{domain, Error, Result};
use crate::operator::Operator;
use crate::qstate::{purity, reduce, PartySubset, PureState};
use crate::subset::popcounts;

/// Largest party count for which a purity table is built.
pub const MAX_TABLE_PARTIES: usize = 24;

/// Absolute floor below zero at which a sector length is clamped instead of
/// reported as a consistency error; scaled by `max(1, d^N)`.
pub const NEGATIVE_SECTOR_TOL: f64 = 1e-9;

/// Sector lengths `(S_0, …, S_N)`. Always the squared Hilbert-Schmidt
/// length of each sector, never its square root.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SectorDistribution {
    n_parties: usize,
    local_dim: usize,
    lengths: Vec<f64>,
}

impl SectorDistribution {
    /// Wraps raw lengths without any validation.
    pub fn from_lengths(n: usize, d: usize, lengths: Vec<f64>) -> Self {
        debug_assert_eq!(lengths.len(), n + 1);
        SectorDistribution {
            n_parties: n,
            local_dim: d,
            lengths,
        }
    }

    /// Clamps round-off negatives to zero; larger negatives are an error.
    pub fn checked(n: usize, d: usize, mut lengths: Vec<f64>) -> Result<Self> {
        let tol = NEGATIVE_SECTOR_TOL * (d as f64).powi(n as i32).max(1.0);
        for (k, s) in lengths.iter_mut().enumerate() {
            if !s.is_finite() {
                return Err(Error::Consistency(format!("sector S_{k} is not finite")));
            }
            if *s < 0.0 {
                if *s < -tol {
                    return Err(Error::Consistency(format!("sector S_{k} = {s} is negative")));
                }
                *s = 0.0;
            }
        }
        Ok(Self::from_lengths(n, d, lengths))
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn get(&self, k: usize) -> f64 {
        self.lengths[k]
    }

    pub fn n_sector(&self) -> f64 {
        self.lengths[self.n_parties]
    }

    pub fn sum(&self) -> f64 {
        self.lengths.iter().sum()
    }

    /// `d^N`, the total length of a pure state's Bloch vector.
    pub fn pure_total(&self) -> f64 {
        (self.local_dim as f64).powi(self.n_parties as i32)
    }
}

/// `Tr(ρ_B²)` for every subset mask `B` of the parties.
#[derive(Clone, Debug, PartialEq)]
pub struct PurityTable {
    n_parties: usize,
    local_dim: usize,
    values: Vec<f64>,
}

impl PurityTable {
    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, subset: PartySubset) -> f64 {
        self.values[subset.mask() as usize]
    }
}

/// All `2^N` purities. Each complementary pair is evaluated once, on the
/// smaller side of the bipartition.
pub fn purity_table(state: &PureState) -> Result<PurityTable> {
    let n = state.n_parties();
    if n > MAX_TABLE_PARTIES {
        return Err(Error::Size {
            what: "purity table",
            required: 2f64.powi(n as i32),
            limit: 2f64.powi(MAX_TABLE_PARTIES as i32),
        });
    }
    let size = 1usize << n;
    let full = size - 1;
    // masks without the last party; their complements contain it
    let half: Vec<f64> = (0..size / 2)
        .into_par_iter()
        .map(|m| {
            let s = PartySubset(m as u32);
            let c = s.complement(n);
            if s.len() <= c.len() {
                purity(state, s)
            } else {
                purity(state, c)
            }
        })
        .collect();
    let mut values = vec![0.0; size];
    for (m, &p) in half.iter().enumerate() {
        values[m] = p;
        values[full ^ m] = p;
    }
    Ok(PurityTable {
        n_parties: n,
        local_dim: state.local_dim(),
        values,
    })
}

/// Full-support sector length of every reduction, before the `d^{|A|}`
/// factor: `f[A] = Σ_{B⊆A} (-1/d)^{|A|-|B|} P[B]`, computed with one pass
/// per party over the table.
fn full_support_parts(table: &PurityTable) -> Vec<f64> {
    let n = table.n_parties;
    let inv_d = 1.0 / table.local_dim as f64;
    let mut f = table.values.clone();
    for bit in 0..n {
        let b = 1usize << bit;
        for m in 0..f.len() {
            if m & b != 0 {
                f[m] -= f[m ^ b] * inv_d;
            }
        }
    }
    f
}

/// Sector distribution from a purity table.
pub fn sectors_from_table(table: &PurityTable) -> Result<SectorDistribution> {
    let n = table.n_parties;
    let d = table.local_dim as f64;
    let pc = popcounts(n);
    let f = full_support_parts(table);
    let mut lengths = vec![0.0; n + 1];
    for (m, v) in f.iter().enumerate() {
        lengths[pc[m] as usize] += v;
    }
    for (k, s) in lengths.iter_mut().enumerate() {
        *s *= d.powi(k as i32);
    }
    SectorDistribution::checked(n, table.local_dim, lengths)
}

/// Sector distribution of a pure state via its purity table.
pub fn sectors_from_purities(state: &PureState) -> Result<SectorDistribution> {
    sectors_from_table(&purity_table(state)?)
}

/// `S_N = d^N Σ_B (-1/d)^{N-|B|} Tr(ρ_B²)`.
pub fn n_sector_from_table(table: &PurityTable) -> f64 {
    let n = table.n_parties;
    let d = table.local_dim as f64;
    let pc = popcounts(n);
    let weights: Vec<f64> = (0..=n).map(|missing| (-1.0 / d).powi(missing as i32)).collect();
    let sum: f64 = table
        .values
        .iter()
        .enumerate()
        .map(|(m, p)| weights[n - pc[m] as usize] * p)
        .sum();
    d.powi(n as i32) * sum
}

/// N-sector length of a pure state via the projector identity.
pub fn n_sector_via_projector(state: &PureState) -> Result<f64> {
    let s = n_sector_from_table(&purity_table(state)?);
    let d_n = (state.local_dim() as f64).powi(state.n_parties() as i32);
    if s < -NEGATIVE_SECTOR_TOL * d_n {
        return Err(Error::Consistency(format!("negative N-sector {s}")));
    }
    Ok(s.max(0.0))
}

/// `Tr R_[j]` from the purity table: `Σ_{B ⊆ rest} (-1)^{|B|} Tr(ρ_B²)`,
/// where `rest` excludes party `j`.
pub fn trace_r_from_table(table: &PurityTable, party: usize) -> f64 {
    let rest = PartySubset::single(party).complement(table.n_parties);
    rest.subsets()
        .map(|b| if b.len() % 2 == 0 { table.get(b) } else { -table.get(b) })
        .sum()
}

/// Per-site coefficients of a generalized universal state inversion
/// `Π_j [α_j Tr_j(·) ⊗ 1_j − β_j id]`.
#[derive(Clone, Debug, PartialEq)]
pub struct InversionMap {
    alphas: Vec<f64>,
    betas: Vec<f64>,
}

impl InversionMap {
    pub fn new(alphas: Vec<f64>, betas: Vec<f64>) -> Result<Self> {
        if alphas.len() != betas.len() {
            return domain("need one (alpha, beta) pair per site");
        }
        if alphas.iter().chain(&betas).any(|x| !x.is_finite()) {
            return domain("inversion coefficients must be finite");
        }
        Ok(InversionMap { alphas, betas })
    }

    pub fn uniform(n: usize, alpha: f64, beta: f64) -> Self {
        InversionMap {
            alphas: vec![alpha; n],
            betas: vec![beta; n],
        }
    }

    /// Projector onto the full-support sector: `Π_j [id − (1/d) Tr_j ⊗ 1_j]`.
    pub fn projector(n: usize, d: usize) -> Self {
        Self::uniform(n, -1.0 / d as f64, -1.0)
    }

    /// `Π_j [Tr_j ⊗ 1_j − (1/d) id]`.
    pub fn q_map(n: usize, d: usize) -> Self {
        Self::uniform(n, 1.0, 1.0 / d as f64)
    }

    /// Standard universal state inversion `Π_j [Tr_j ⊗ 1_j − id]`.
    pub fn universal(n: usize) -> Self {
        Self::uniform(n, 1.0, 1.0)
    }

    pub fn n_sites(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }
}

fn guard_operator_scale(n: usize, d: usize) -> Result<()> {
    let required = (d as f64).powi(2 * n as i32);
    if required > ORACLE_LIMIT {
        return Err(Error::Size {
            what: "dense operator",
            required,
            limit: ORACLE_LIMIT,
        });
    }
    Ok(())
}

/// Applies the map by expanding the product over sites:
/// `Σ_A (Π_{j∈A} α_j)(Π_{j∉A} −β_j) (Tr_A op) ⊗ 1_A`.
pub fn apply_inversion(map: &InversionMap, op: &Operator) -> Result<Operator> {
    let n = op.n_sites();
    if map.n_sites() != n {
        return domain(format!("map has {} sites, operator has {n}", map.n_sites()));
    }
    let mut acc = op.scaled(0.0);
    for mask in 0..1u32 << n {
        let traced = PartySubset(mask);
        let coef: f64 = (0..n)
            .map(|j| if traced.contains(j) { map.alphas[j] } else { -map.betas[j] })
            .product();
        if coef == 0.0 {
            continue;
        }
        acc = acc.add(&op.trace_out_reembed(traced).scaled(coef));
    }
    Ok(acc)
}

/// Applies the per-site factors one after another.
pub fn apply_inversion_sequential(map: &InversionMap, op: &Operator) -> Result<Operator> {
    let n = op.n_sites();
    if map.n_sites() != n {
        return domain(format!("map has {} sites, operator has {n}", map.n_sites()));
    }
    let mut cur = op.clone();
    for j in 0..n {
        let traced = cur.trace_out_reembed(PartySubset::single(j)).scaled(map.alphas[j]);
        cur = traced.add(&cur.scaled(-map.betas[j]));
    }
    Ok(cur)
}

/// `|ψ⟩⟨ψ|` as an operator on all parties.
pub fn state_operator(state: &PureState) -> Result<Operator> {
    guard_operator_scale(state.n_parties(), state.local_dim())?;
    reduce(state, state.all_parties())
}

/// The k-sector operator `𝒮_k`, the part of `|ψ⟩⟨ψ|` acting non-trivially
/// on exactly `k` parties.
pub fn sector_component(state: &PureState, k: usize) -> Result<Operator> {
    let n = state.n_parties();
    let d = state.local_dim();
    if k > n {
        return domain(format!("sector index {k} exceeds {n}"));
    }
    let rho = state_operator(state)?;
    let inv_d = 1.0 / d as f64;
    let mut acc = rho.scaled(0.0);
    for mask in 0..1u32 << n {
        let support = PartySubset(mask);
        if support.len() != k {
            continue;
        }
        // inside the support keep the traceless part, outside the trace part
        let (alphas, betas): (Vec<f64>, Vec<f64>) = (0..n)
            .map(|j| if support.contains(j) { (-inv_d, -1.0) } else { (inv_d, 0.0) })
            .unzip();
        let map = InversionMap { alphas, betas };
        acc = acc.add(&apply_inversion(&map, &rho)?);
    }
    Ok(acc)
}

/// `S_k = d^N Tr(𝒮_k† 𝒮_k)` from the explicit sector operator.
pub fn sector_length_from_component(component: &Operator) -> f64 {
    let d_n = (component.local_dim() as f64).powi(component.n_sites() as i32);
    d_n * component.hs_inner(component).re
}

/// `R_[j] = ρ_[j] 𝓘₋(ρ_[j])` with `ρ_[j]` the state after tracing out party
/// `j` (zero-based).
pub fn r_matrix(state: &PureState, traced_party: usize) -> Result<Operator> {
    let n = state.n_parties();
    if n < 2 {
        return domain("R matrix needs at least two parties");
    }
    if traced_party >= n {
        return domain(format!("party {traced_party} out of range for {n} parties"));
    }
    guard_operator_scale(n - 1, state.local_dim())?;
    let rest = PartySubset::single(traced_party).complement(n);
    let rho = reduce(state, rest)?;
    let inverted = apply_inversion(&InversionMap::universal(n - 1), &rho)?;
    Ok(rho.mul(&inverted))
}

/// `‖M‖_𝒫 = √Tr[M† 𝒫(M)]`.
pub fn seminorm_p(op: &Operator) -> Result<f64> {
    let projected = apply_inversion(&InversionMap::projector(op.n_sites(), op.local_dim()), op)?;
    Ok(op.hs_inner(&projected).re.max(0.0).sqrt())
}

/// `Y^{⊗N} |ψ*⟩` for qubit states.
pub fn spin_flipped(state: &PureState) -> Result<Vec<Complex64>> {
    if state.local_dim() != 2 {
        return domain("spin flip is defined for qubits only");
    }
    Ok(spin_flip_vector(state.n_parties(), state.amplitudes()))
}

/// `Y^{⊗n} v*` for an `n`-qubit amplitude vector.
pub fn spin_flip_vector(n: usize, amps: &[Complex64]) -> Vec<Complex64> {
    let dim = amps.len();
    debug_assert_eq!(dim, 1 << n);
    let full = dim - 1;
    let mut out = vec![Complex64::new(0.0, 0.0); dim];
    for (x, a) in amps.iter().enumerate() {
        // Y|0> = i|1>, Y|1> = -i|0>
        let ones = x.count_ones();
        let zeros = n as u32 - ones;
        let phase = Complex64::i().powu(zeros) * (-Complex64::i()).powu(ones);
        out[x ^ full] = phase * a.conj();
    }
    out
}
