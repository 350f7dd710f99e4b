//! Brute-force Bloch expansion in a generalized Gell-Mann product basis.
//!
//! Every coefficient `r_{j1..jN} = ⟨ψ| g_{j1} ⊗ ... ⊗ g_{jN} |ψ⟩` is computed
//! and sector lengths are read off by counting non-identity slots. This is
//! exponential in `2N` and serves as ground truth for the purity engine.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::qstate::PureState;
use crate::sector_engine::SectorDistribution;

/// Largest `d^{2N}` the oracle will enumerate.
pub const ORACLE_LIMIT: f64 = 1e8;

/// Coefficients with magnitude below this are not stored.
pub const DROP_THRESHOLD: f64 = 1e-12;

/// Largest tolerated imaginary part of a coefficient.
pub const IMAG_TOL: f64 = 1e-10;

/// Local operator basis: `matrices[0]` is the identity, `matrices[1..]` are
/// `d² - 1` traceless Hermitian matrices with `Tr(g_j† g_k) = d δ_jk`.
#[derive(Clone, Debug)]
pub struct LocalBasis {
    local_dim: usize,
    matrices: Vec<DMatrix<Complex64>>,
}

impl LocalBasis {
    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn matrices(&self) -> &[DMatrix<Complex64>] {
        &self.matrices
    }

    pub fn get(&self, j: usize) -> &DMatrix<Complex64> {
        &self.matrices[j]
    }

    /// `U g_j U†` for every element; again a valid basis with the same
    /// normalization.
    pub fn conjugated(&self, unitary: &DMatrix<Complex64>) -> LocalBasis {
        let ud = unitary.adjoint();
        LocalBasis {
            local_dim: self.local_dim,
            matrices: self.matrices.iter().map(|g| unitary * g * &ud).collect(),
        }
    }
}

/// Generalized Gell-Mann basis scaled so that `Tr(g_j²) = d`.
///
/// Order after the identity: for each pair `j < k` the symmetric then the
/// antisymmetric element, followed by the `d - 1` diagonal elements. For
/// `d = 2` this yields X, Y, Z.
pub fn gell_mann_basis(d: usize) -> Result<LocalBasis> {
    if d < 2 {
        return domain(format!("local dimension must be at least 2, got {d}"));
    }
    let zero = Complex64::new(0.0, 0.0);
    let scale = (d as f64 / 2.0).sqrt();
    let mut matrices = vec![DMatrix::<Complex64>::identity(d, d)];
    for j in 0..d {
        for k in j + 1..d {
            let mut sym = DMatrix::from_element(d, d, zero);
            sym[(j, k)] = Complex64::new(scale, 0.0);
            sym[(k, j)] = Complex64::new(scale, 0.0);
            matrices.push(sym);
            let mut anti = DMatrix::from_element(d, d, zero);
            anti[(j, k)] = Complex64::new(0.0, -scale);
            anti[(k, j)] = Complex64::new(0.0, scale);
            matrices.push(anti);
        }
    }
    for l in 1..d {
        let lf = l as f64;
        let c = scale * (2.0 / (lf * (lf + 1.0))).sqrt();
        let mut diag = DMatrix::from_element(d, d, zero);
        for m in 0..l {
            diag[(m, m)] = Complex64::new(c, 0.0);
        }
        diag[(l, l)] = Complex64::new(-lf * c, 0.0);
        matrices.push(diag);
    }
    Ok(LocalBasis {
        local_dim: d,
        matrices,
    })
}

/// Sparse real Bloch coefficients keyed by the index tuple `(j_1, …, j_N)`.
#[derive(Clone, Debug)]
pub struct BlochCoefficients {
    n_parties: usize,
    local_dim: usize,
    entries: BTreeMap<Vec<usize>, f64>,
}

#[derive(Serialize)]
struct DumpLine<'a> {
    idx: &'a [usize],
    r: f64,
}

impl BlochCoefficients {
    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn entries(&self) -> &BTreeMap<Vec<usize>, f64> {
        &self.entries
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.entries.get(idx).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.entries.values().map(|r| r * r).sum()
    }

    /// One JSON object per line, `{"idx":[…],"r":…}`, in lexicographic
    /// index order.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for (idx, &r) in &self.entries {
            let line = serde_json::to_string(&DumpLine { idx, r }).expect("finite coefficients serialize");
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}

/// Expands `state` in the Gell-Mann product basis.
pub fn bloch_expand(state: &PureState) -> Result<BlochCoefficients> {
    let basis = gell_mann_basis(state.local_dim())?;
    let bases = vec![basis; state.n_parties()];
    bloch_expand_in(state, &bases)
}

/// Expands `state` using a separate local basis for each party.
pub fn bloch_expand_in(state: &PureState, bases: &[LocalBasis]) -> Result<BlochCoefficients> {
    let n = state.n_parties();
    let d = state.local_dim();
    if bases.len() != n || bases.iter().any(|b| b.local_dim != d) {
        return domain("need one local basis of matching dimension per party");
    }
    let required = (d as f64).powi(2 * n as i32);
    if required > ORACLE_LIMIT {
        return Err(Error::Size {
            what: "Bloch expansion",
            required,
            limit: ORACLE_LIMIT,
        });
    }
    let q = d * d;
    let dim = state.dim();
    let total = dim * dim;

    // ρ[a, b] stored with the site pairs (a_p, b_p) interleaved, site 0 most
    // significant, so each site can be transformed independently.
    let mut spread_a = vec![0usize; dim];
    let mut spread_b = vec![0usize; dim];
    for x in 0..dim {
        let (mut rem, mut weight) = (x, 1usize);
        for _ in 0..n {
            let digit = rem % d;
            rem /= d;
            spread_a[x] += digit * d * weight;
            spread_b[x] += digit * weight;
            weight *= q;
        }
    }
    let amps = state.amplitudes();
    let mut t = vec![Complex64::new(0.0, 0.0); total];
    for a in 0..dim {
        for b in 0..dim {
            t[spread_a[a] + spread_b[b]] = amps[a] * amps[b].conj();
        }
    }

    let mut buf = vec![Complex64::new(0.0, 0.0); q];
    for (p, basis) in bases.iter().enumerate() {
        // transform[j][a*d + b] = g_j[b, a], so that Σ_ab transform · ρ_ab = Tr(g_j ρ)
        let transform: Vec<Vec<Complex64>> = basis
            .matrices
            .iter()
            .map(|g| (0..q).map(|ab| g[(ab % d, ab / d)]).collect())
            .collect();
        let stride = q.pow((n - 1 - p) as u32);
        for base in 0..total {
            if (base / stride) % q != 0 {
                continue;
            }
            for (k, slot) in buf.iter_mut().enumerate() {
                *slot = t[base + k * stride];
            }
            for (j, row) in transform.iter().enumerate() {
                t[base + j * stride] = row.iter().zip(&buf).map(|(x, y)| x * y).sum();
            }
        }
    }

    let mut entries = BTreeMap::new();
    for (pos, r) in t.iter().enumerate() {
        if r.im.abs() > IMAG_TOL {
            return Err(Error::Consistency(format!(
                "Bloch coefficient at position {pos} has imaginary part {}",
                r.im
            )));
        }
        if r.re.abs() >= DROP_THRESHOLD {
            let mut idx = vec![0usize; n];
            let mut rem = pos;
            for slot in idx.iter_mut().rev() {
                *slot = rem % q;
                rem /= q;
            }
            entries.insert(idx, r.re);
        }
    }
    Ok(BlochCoefficients {
        n_parties: n,
        local_dim: d,
        entries,
    })
}

/// `S_k` = sum of squared coefficients whose index tuple has exactly `k`
/// non-identity entries.
pub fn sectors_from_bloch(coeffs: &BlochCoefficients) -> SectorDistribution {
    let mut lengths = vec![0.0; coeffs.n_parties + 1];
    for (idx, r) in &coeffs.entries {
        let k = idx.iter().filter(|&&j| j != 0).count();
        lengths[k] += r * r;
    }
    SectorDistribution::from_lengths(coeffs.n_parties, coeffs.local_dim, lengths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{make_ghz, make_product, random_state, random_unitary};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn qubit_basis_is_pauli() {
        let b = gell_mann_basis(2).unwrap();
        let x = DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        let y = DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]);
        let z = DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]);
        assert!((b.get(1) - x).norm() < 1e-15);
        assert!((b.get(2) - y).norm() < 1e-15);
        assert!((b.get(3) - z).norm() < 1e-15);
    }

    #[test]
    fn basis_normalization_and_orthogonality() {
        for d in 2..=6 {
            let b = gell_mann_basis(d).unwrap();
            assert_eq!(b.matrices().len(), d * d);
            for j in 1..d * d {
                let g = b.get(j);
                assert!(g.trace().norm() < 1e-12, "d={d} j={j} not traceless");
                assert!((g - g.adjoint()).norm() < 1e-15);
                for k in 1..d * d {
                    let ip = (g.adjoint() * b.get(k)).trace();
                    let expect = if j == k { d as f64 } else { 0.0 };
                    assert!((ip - c(expect, 0.0)).norm() < 1e-12, "d={d} ({j},{k}) -> {ip}");
                }
            }
        }
    }

    #[test]
    fn qutrit_basis_is_scaled_gell_mann() {
        // λ1 (symmetric on levels 0,1) times √(3/2)
        let b = gell_mann_basis(3).unwrap();
        let s = (1.5f64).sqrt();
        assert!((b.get(1)[(0, 1)].re - s).abs() < 1e-15);
        // λ8 = diag(1, 1, -2)/√3 times √(3/2)
        let l8 = b.get(8);
        assert!((l8[(0, 0)].re - s / 3f64.sqrt()).abs() < 1e-15);
        assert!((l8[(2, 2)].re + 2.0 * s / 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn bell_state_coefficients() {
        let coeffs = bloch_expand(&make_ghz(2, 2).unwrap()).unwrap();
        let got: Vec<(Vec<usize>, f64)> = coeffs.entries().iter().map(|(k, v)| (k.clone(), *v)).collect();
        let expect = vec![
            (vec![0, 0], 1.0),
            (vec![1, 1], 1.0),
            (vec![2, 2], -1.0),
            (vec![3, 3], 1.0),
        ];
        assert_eq!(got.len(), expect.len());
        for ((ki, vi), (ke, ve)) in got.iter().zip(&expect) {
            assert_eq!(ki, ke);
            assert!((vi - ve).abs() < 1e-14);
        }
    }

    #[test]
    fn ghz_qubit_expansion_structure() {
        for n in 3..=5 {
            let coeffs = bloch_expand(&make_ghz(n, 2).unwrap()).unwrap();
            for (idx, &r) in coeffs.entries() {
                let zs = idx.iter().filter(|&&j| j == 3).count();
                let ids = idx.iter().filter(|&&j| j == 0).count();
                let ys = idx.iter().filter(|&&j| j == 2).count();
                let xs = idx.iter().filter(|&&j| j == 1).count();
                if zs + ids == n {
                    // diagonal part: even number of Z
                    assert_eq!(zs % 2, 0);
                    assert!((r - 1.0).abs() < 1e-12);
                } else {
                    // off-diagonal part: only X and Y, even number of Y
                    assert_eq!(xs + ys, n, "unexpected entry {idx:?}");
                    assert_eq!(ys % 2, 0);
                    let sign = if (ys / 2) % 2 == 0 { 1.0 } else { -1.0 };
                    assert!((r - sign).abs() < 1e-12);
                }
            }
            // 2^{n-1} diagonal terms plus 2^{n-1} off-diagonal terms
            assert_eq!(coeffs.len(), 1 << n);
        }
    }

    #[test]
    fn sector_examples() {
        let s = sectors_from_bloch(&bloch_expand(&make_ghz(2, 2).unwrap()).unwrap());
        assert_vec_close(s.lengths(), &[1.0, 0.0, 3.0], 1e-12);
        let s = sectors_from_bloch(&bloch_expand(&make_ghz(3, 2).unwrap()).unwrap());
        assert_vec_close(s.lengths(), &[1.0, 0.0, 3.0, 4.0], 1e-12);
        let s = sectors_from_bloch(&bloch_expand(&make_product(3, 2, 0).unwrap()).unwrap());
        assert_vec_close(s.lengths(), &[1.0, 3.0, 3.0, 1.0], 1e-12);
    }

    #[test]
    fn completeness_and_identity_coefficient() {
        for (n, d, seed) in [(3, 2, 1), (2, 3, 2), (3, 3, 3), (2, 4, 4)] {
            let st = random_state(n, d, seed).unwrap();
            let coeffs = bloch_expand(&st).unwrap();
            assert!((coeffs.get(&vec![0; n]) - 1.0).abs() < 1e-12);
            let dn = (d as f64).powi(n as i32);
            assert!((coeffs.sum_of_squares() - dn).abs() <= 1e-9 * dn);
        }
    }

    #[test]
    fn sectors_do_not_depend_on_the_local_basis() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for (n, d) in [(3, 2), (2, 3), (3, 3)] {
            let st = random_state(n, d, 100 + n as u64).unwrap();
            let plain = sectors_from_bloch(&bloch_expand(&st).unwrap());
            let gm = gell_mann_basis(d).unwrap();
            let bases: Vec<LocalBasis> = (0..n).map(|_| gm.conjugated(&random_unitary(d, &mut rng))).collect();
            let rotated = sectors_from_bloch(&bloch_expand_in(&st, &bases).unwrap());
            assert_vec_close(plain.lengths(), rotated.lengths(), 1e-9);
        }
    }

    #[test]
    fn size_guard() {
        let st = make_ghz(14, 4).unwrap();
        assert!(matches!(bloch_expand(&st), Err(Error::Size { .. })));
    }

    #[test]
    fn json_lines_are_sorted() {
        let dump = bloch_expand(&make_ghz(2, 2).unwrap()).unwrap().to_json_lines();
        let parsed: Vec<(Vec<usize>, f64)> = dump
            .lines()
            .map(|l| {
                let v: serde_json::Value = serde_json::from_str(l).unwrap();
                let idx = v["idx"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap() as usize).collect();
                (idx, v["r"].as_f64().unwrap())
            })
            .collect();
        let idx: Vec<Vec<usize>> = parsed.iter().map(|(i, _)| i.clone()).collect();
        assert_eq!(idx, vec![vec![0, 0], vec![1, 1], vec![2, 2], vec![3, 3]]);
        for ((_, r), e) in parsed.iter().zip([1.0, 1.0, -1.0, 1.0]) {
            assert!((r - e).abs() < 1e-14);
        }
        assert!(dump.starts_with(r#"{"idx":[0,0],"r":"#));
    }

    fn assert_vec_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }
}
