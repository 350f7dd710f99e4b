//! Pure states of N qudits: named families, tensor products, Haar sampling,
//! partial traces and bipartition purities.
//!
//! Amplitudes are indexed by base-d digit strings with party 1 as the most
//! significant digit. Internally parties are zero-based, so party `p` is the
//! digit of weight `d^(N-1-p)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{domain, Error, Result};
use crate::operator::{DensityOperator, Operator};
pub use crate::subset::PartySubset;
use crate::subset::Bipartition;

/// Norm tolerance for states accepted by [`PureState::new`].
pub const NORM_TOL: f64 = 1e-12;

/// Largest deviation of the input norm from 1 tolerated when loading user
/// amplitudes, which are then renormalized.
pub const LOAD_NORM_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    n_parties: usize,
    local_dim: usize,
    amplitudes: Vec<Complex64>,
}

fn check_shape(n: usize, d: usize) -> Result<usize> {
    if n == 0 {
        return domain("a state needs at least one party");
    }
    if d < 2 {
        return domain(format!("local dimension must be at least 2, got {d}"));
    }
    if n > 31 {
        return domain(format!("at most 31 parties are supported, got {n}"));
    }
    let dim = (d as f64).powi(n as i32);
    if dim > 1e9 {
        return Err(Error::Size {
            what: "state vector",
            required: dim,
            limit: 1e9,
        });
    }
    Ok(d.pow(n as u32))
}

impl PureState {
    /// Wraps an amplitude vector; it must have length `d^n` and unit norm.
    pub fn new(n: usize, d: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = check_shape(n, d)?;
        if amplitudes.len() != dim {
            return domain(format!(
                "expected {dim} amplitudes for n = {n}, d = {d}, got {}",
                amplitudes.len()
            ));
        }
        let norm = norm(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOL {
            return domain(format!("state norm {norm} differs from 1"));
        }
        Ok(PureState {
            n_parties: n,
            local_dim: d,
            amplitudes,
        })
    }

    /// Like [`PureState::new`] but rescales the vector to unit norm, provided
    /// it is already within `tol` of 1.
    pub fn normalized(n: usize, d: usize, mut amplitudes: Vec<Complex64>, tol: f64) -> Result<Self> {
        let dim = check_shape(n, d)?;
        if amplitudes.len() != dim {
            return Err(Error::Input(format!(
                "expected {dim} amplitudes for n = {n}, d = {d}, got {}",
                amplitudes.len()
            )));
        }
        let nrm = norm(&amplitudes);
        if !nrm.is_finite() || (nrm - 1.0).abs() > tol {
            return Err(Error::Input(format!("amplitude norm {nrm} deviates from 1 by more than {tol}")));
        }
        amplitudes.iter_mut().for_each(|a| *a /= nrm);
        Ok(PureState {
            n_parties: n,
            local_dim: d,
            amplitudes,
        })
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amplitudes)
    }

    pub fn all_parties(&self) -> PartySubset {
        PartySubset::full(self.n_parties)
    }

    /// Complex-conjugated amplitudes.
    pub fn conj(&self) -> PureState {
        PureState {
            amplitudes: self.amplitudes.iter().map(|a| a.conj()).collect(),
            ..self.clone()
        }
    }

    /// Applies a local `d x d` unitary to one party.
    pub fn apply_local(&self, party: usize, unitary: &DMatrix<Complex64>) -> Result<PureState> {
        let d = self.local_dim;
        if party >= self.n_parties {
            return domain(format!("party {party} out of range"));
        }
        if unitary.nrows() != d || unitary.ncols() != d {
            return domain("local operator has the wrong dimension");
        }
        let stride = d.pow((self.n_parties - 1 - party) as u32);
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for base in 0..self.dim() {
            if (base / stride) % d != 0 {
                continue;
            }
            for row in 0..d {
                let mut acc = Complex64::new(0.0, 0.0);
                for col in 0..d {
                    acc += unitary[(row, col)] * self.amplitudes[base + col * stride];
                }
                out[base + row * stride] = acc;
            }
        }
        Ok(PureState {
            amplitudes: out,
            ..self.clone()
        })
    }
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

fn repeated_digit_index(n: usize, d: usize, j: usize) -> usize {
    (0..n).fold(0, |acc, _| acc * d + j)
}

/// `(1/√d) Σ_j |j⟩^{⊗n}`.
pub fn make_ghz(n: usize, d: usize) -> Result<PureState> {
    if n < 2 || d < 2 {
        return domain(format!("GHZ state needs n >= 2 and d >= 2, got n = {n}, d = {d}"));
    }
    let dim = check_shape(n, d)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    let a = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    for j in 0..d {
        amps[repeated_digit_index(n, d, j)] = a;
    }
    Ok(PureState {
        n_parties: n,
        local_dim: d,
        amplitudes: amps,
    })
}

/// `|j⟩^{⊗n}`.
pub fn make_product(n: usize, d: usize, j: usize) -> Result<PureState> {
    let dim = check_shape(n, d)?;
    if j >= d {
        return domain(format!("basis label {j} out of range for d = {d}"));
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    amps[repeated_digit_index(n, d, j)] = Complex64::new(1.0, 0.0);
    Ok(PureState {
        n_parties: n,
        local_dim: d,
        amplitudes: amps,
    })
}

/// Kronecker product; the parties of `a` come first.
pub fn tensor(a: &PureState, b: &PureState) -> Result<PureState> {
    if a.local_dim != b.local_dim {
        return domain(format!(
            "cannot tensor states of local dimension {} and {}",
            a.local_dim, b.local_dim
        ));
    }
    let n = a.n_parties + b.n_parties;
    check_shape(n, a.local_dim)?;
    let mut amps = Vec::with_capacity(a.dim() * b.dim());
    for x in &a.amplitudes {
        amps.extend(b.amplitudes.iter().map(|y| x * y));
    }
    Ok(PureState {
        n_parties: n,
        local_dim: a.local_dim,
        amplitudes: amps,
    })
}

/// Bell pairs for even `n`; a three-party GHZ followed by Bell pairs for odd
/// `n`. For `n` of 2 or 3 this is the GHZ state itself.
pub fn make_bell_product(n: usize, d: usize) -> Result<PureState> {
    if n < 2 {
        return domain(format!("Bell product needs n >= 2, got {n}"));
    }
    let bell = make_ghz(2, d)?;
    let (mut state, mut placed) = if n % 2 == 0 {
        (bell.clone(), 2)
    } else {
        (make_ghz(3, d)?, 3)
    };
    while placed < n {
        state = tensor(&state, &bell)?;
        placed += 2;
    }
    Ok(state)
}

/// Haar-random pure state, deterministic in `seed`.
pub fn random_state(n: usize, d: usize, seed: u64) -> Result<PureState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_state_with(n, d, &mut rng)
}

/// Haar-random pure state drawn from a caller-supplied generator: i.i.d.
/// standard complex Gaussians normalized to unit length.
pub fn random_state_with<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<PureState> {
    let dim = check_shape(n, d)?;
    let amps: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let nrm = norm(&amps);
    Ok(PureState {
        n_parties: n,
        local_dim: d,
        amplitudes: amps.into_iter().map(|a| a / nrm).collect(),
    })
}

/// Haar-random `d x d` unitary: QR of a complex Ginibre matrix with the
/// phases of R's diagonal absorbed into Q.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<Complex64> {
    let g = DMatrix::<Complex64>::from_fn(d, d, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..d {
        let diag = r[(j, j)];
        let phase = if diag.norm() > 0.0 { diag / diag.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Amplitudes reshaped as a `dim(keep) x dim(rest)` matrix.
fn bipartition_matrix(state: &PureState, keep: PartySubset) -> DMatrix<Complex64> {
    let bp = Bipartition::new(state.n_parties, state.local_dim, keep);
    let mut m = DMatrix::<Complex64>::zeros(bp.dim_in, bp.dim_out);
    for (i, a) in state.amplitudes.iter().enumerate() {
        m[(bp.inner[i], bp.outer[i])] = *a;
    }
    m
}

/// Reduced density operator on `keep`, tracing out the complement.
pub fn reduce(state: &PureState, keep: PartySubset) -> Result<DensityOperator> {
    if keep.is_empty() {
        return domain("cannot reduce onto the empty set of parties; its purity is 1 by convention");
    }
    if !keep.is_within(state.n_parties) {
        return domain(format!("subset {keep} is not within {} parties", state.n_parties));
    }
    let m = bipartition_matrix(state, keep);
    let rho = &m * m.adjoint();
    Operator::new(keep.parties().collect(), state.local_dim, rho)
}

/// `Tr(ρ_B²)` for the reduction onto `subset`, via the Gram matrix of the
/// smaller side of the bipartition. The empty set has purity 1.
pub fn purity(state: &PureState, subset: PartySubset) -> f64 {
    let n = state.n_parties;
    if subset.is_empty() || subset.len() == n {
        return state.norm().powi(4);
    }
    let m = bipartition_matrix(state, subset);
    let gram = if m.nrows() <= m.ncols() {
        &m * m.adjoint()
    } else {
        m.adjoint() * &m
    };
    gram.iter().map(|z| z.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx_eq(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn nonzero_indices(s: &PureState) -> Vec<usize> {
        s.amplitudes()
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > 0.0)
            .map(|(i, _)| i)
            .collect()
    }

    #[test]
    fn ghz_examples() {
        let bell = make_ghz(2, 2).unwrap();
        assert_eq!(nonzero_indices(&bell), vec![0, 3]);
        let g = make_ghz(3, 2).unwrap();
        assert_eq!(g.dim(), 8);
        assert_eq!(nonzero_indices(&g), vec![0, 7]);
        assert!(approx_eq(g.amplitudes()[7].re, 1.0 / 2f64.sqrt(), 1e-15));
        let g = make_ghz(3, 3).unwrap();
        assert_eq!(nonzero_indices(&g), vec![0, 13, 26]);
        assert!(approx_eq(g.amplitudes()[13].re, 1.0 / 3f64.sqrt(), 1e-15));
    }

    #[test]
    fn ghz_rejects_bad_shape() {
        assert!(matches!(make_ghz(1, 2), Err(Error::Domain(_))));
        assert!(matches!(make_ghz(3, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn product_examples() {
        assert_eq!(nonzero_indices(&make_product(2, 2, 0).unwrap()), vec![0]);
        assert_eq!(nonzero_indices(&make_product(3, 3, 2).unwrap()), vec![26]);
        assert!(make_product(2, 3, 3).is_err());
    }

    #[test]
    fn tensor_of_bell_pairs() {
        let b = make_ghz(2, 2).unwrap();
        let bb = tensor(&b, &b).unwrap();
        assert_eq!(bb.n_parties(), 4);
        assert_eq!(nonzero_indices(&bb), vec![0, 3, 12, 15]);
        for i in [0, 3, 12, 15] {
            assert!(approx_eq(bb.amplitudes()[i].re, 0.5, 1e-15));
        }
        let q = make_ghz(2, 3).unwrap();
        assert!(tensor(&b, &q).is_err());
    }

    #[test]
    fn bell_product_layout() {
        let s = make_bell_product(5, 3).unwrap();
        let expect = tensor(&make_ghz(3, 3).unwrap(), &make_ghz(2, 3).unwrap()).unwrap();
        assert_eq!(s, expect);
        assert_eq!(make_bell_product(3, 4).unwrap(), make_ghz(3, 4).unwrap());
        assert_eq!(make_bell_product(2, 4).unwrap(), make_ghz(2, 4).unwrap());
        assert_eq!(make_bell_product(6, 2).unwrap().n_parties(), 6);
    }

    #[test]
    fn random_state_is_normalized_and_seeded() {
        let a = random_state(4, 3, 11).unwrap();
        let b = random_state(4, 3, 11).unwrap();
        let c = random_state(4, 3, 12).unwrap();
        assert!(approx_eq(a.norm(), 1.0, 1e-13));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn reduce_examples() {
        let g = make_ghz(3, 2).unwrap();
        let r = reduce(&g, PartySubset::single(0)).unwrap();
        let m = r.matrix();
        assert!(approx_eq(m[(0, 0)].re, 0.5, 1e-15));
        assert!(approx_eq(m[(1, 1)].re, 0.5, 1e-15));
        assert!(m[(0, 1)].norm() < 1e-15);

        let p = make_product(2, 2, 0).unwrap();
        let r = reduce(&p, PartySubset::single(1)).unwrap();
        assert_eq!(r.parties(), &[1]);
        assert!(approx_eq(r.matrix()[(0, 0)].re, 1.0, 1e-15));
        assert!(r.matrix()[(1, 1)].norm() < 1e-15);

        assert!(matches!(reduce(&p, PartySubset::EMPTY), Err(Error::Domain(_))));
    }

    #[test]
    fn ghz_reductions_are_rank_d_with_purity_one_over_d() {
        for (n, d) in [(3, 3), (4, 2), (4, 3)] {
            let g = make_ghz(n, d).unwrap();
            for mask in 1..(1u32 << n) - 1 {
                let s = PartySubset(mask);
                let rho = reduce(&g, s).unwrap();
                let eig = rho.matrix().clone().symmetric_eigen();
                let rank = eig.eigenvalues.iter().filter(|&&x| x > 1e-12).count();
                assert_eq!(rank, d);
                assert!(approx_eq(purity(&g, s), 1.0 / d as f64, 1e-14));
            }
        }
    }

    #[test]
    fn purity_examples() {
        let g = make_ghz(4, 2).unwrap();
        assert!(approx_eq(purity(&g, PartySubset::from_parties(&[0, 1])), 0.5, 1e-15));
        let r = random_state(4, 2, 3).unwrap();
        assert!(approx_eq(purity(&r, PartySubset::full(4)), 1.0, 1e-12));
        assert!(approx_eq(purity(&r, PartySubset::EMPTY), 1.0, 1e-12));
    }

    #[test]
    fn local_unitary_preserves_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = random_unitary(3, &mut rng);
        let prod = u.adjoint() * &u;
        assert!((prod - DMatrix::<Complex64>::identity(3, 3)).norm() < 1e-12);
        let s = random_state(3, 3, 9).unwrap();
        let t = s.apply_local(1, &u).unwrap();
        assert!(approx_eq(t.norm(), 1.0, 1e-12));
        // the untouched parties keep their reduced state
        let keep = PartySubset::from_parties(&[0, 2]);
        let a = reduce(&s, keep).unwrap();
        let b = reduce(&t, keep).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn normalized_loader_checks_norm() {
        let amps = vec![Complex64::new(1.0 + 1e-8, 0.0), Complex64::new(0.0, 0.0)];
        let s = PureState::normalized(1, 2, amps, LOAD_NORM_TOL).unwrap();
        assert_eq!(s.norm(), 1.0);
        let amps = vec![Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.0)];
        assert!(matches!(PureState::normalized(1, 2, amps, LOAD_NORM_TOL), Err(Error::Input(_))));
    }
}
