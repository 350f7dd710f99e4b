//! GHZ versus Bell-family comparison over the (d, N) plane, the asymptotic
//! boundary between the two regimes, and a randomized search for states
//! with large N-sector.

use std::fmt;
use std::io::Write;

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::closed_forms::{bell_family_nsector_exact, ghz_nsector_exact};
use crate::error::{domain, Error, Result};
use crate::qstate::{random_state_with, PureState};
use crate::sector_engine::{n_sector_from_table, purity_table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Dominance {
    Ghz,
    Bell,
    Tie,
    /// N = 2, 3: both families are the same state.
    Undecided,
}

impl fmt::Display for Dominance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dominance::Ghz => "GHZ",
            Dominance::Bell => "BELL",
            Dominance::Tie => "TIE",
            Dominance::Undecided => "UNDECIDED",
        })
    }
}

/// One cell of the (d, N) comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRecord {
    pub d: u64,
    pub n: usize,
    pub s_ghz: BigInt,
    pub s_bell: BigInt,
    pub diff: BigInt,
    pub dominance: Dominance,
}

impl SweepRecord {
    pub fn new(n: usize, d: u64) -> Result<Self> {
        let s_ghz = ghz_nsector_exact(n, d)?;
        let s_bell = bell_family_nsector_exact(n, d)?;
        let diff = &s_ghz - &s_bell;
        let dominance = if n <= 3 {
            Dominance::Undecided
        } else {
            match diff.sign() {
                Sign::Plus => Dominance::Ghz,
                Sign::Minus => Dominance::Bell,
                Sign::NoSign => Dominance::Tie,
            }
        };
        Ok(SweepRecord {
            d,
            n,
            s_ghz,
            s_bell,
            diff,
            dominance,
        })
    }

    /// `sign(diff) · log10(1 + |diff|)`.
    pub fn log_mag(&self) -> f64 {
        let mag = self.diff.abs().to_f64().unwrap_or(f64::MAX);
        let v = mag.ln_1p() / std::f64::consts::LN_10;
        match self.diff.sign() {
            Sign::Minus => -v,
            _ => v,
        }
    }
}

/// Every cell `2 <= d <= d_max`, `2 <= n <= n_max`, ordered by `n` then `d`.
pub fn sweep(d_max: u64, n_max: usize) -> Result<Vec<SweepRecord>> {
    if d_max < 2 || n_max < 2 {
        return domain(format!("sweep needs d_max, n_max >= 2, got {d_max}, {n_max}"));
    }
    let cells: Vec<(usize, u64)> = (2..=n_max).flat_map(|n| (2..=d_max).map(move |d| (n, d))).collect();
    cells.into_par_iter().map(|(n, d)| SweepRecord::new(n, d)).collect()
}

pub const CSV_HEADER: [&str; 7] = ["d", "n", "s_ghz", "s_bell", "diff", "dominance", "log_mag"];

/// Writes the sweep as CSV with header `d,n,s_ghz,s_bell,diff,dominance,log_mag`.
pub fn write_sweep_csv<W: Write>(records: &[SweepRecord], out: W) -> Result<()> {
    let io = |e: csv::Error| Error::Input(format!("writing CSV failed: {e}"));
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in records {
        w.write_record([
            r.d.to_string(),
            r.n.to_string(),
            r.s_ghz.to_string(),
            r.s_bell.to_string(),
            r.diff.to_string(),
            r.dominance.to_string(),
            format!("{:.6}", r.log_mag()),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Input(format!("writing CSV failed: {e}")))?;
    Ok(())
}

/// Even `n` along which the dominance changes between GHZ and BELL more than
/// once as `d` grows (ties are skipped).
pub fn monotonicity_violations(records: &[SweepRecord]) -> Vec<usize> {
    let mut ns: Vec<usize> = records.iter().map(|r| r.n).filter(|n| n % 2 == 0 && *n >= 4).collect();
    ns.dedup();
    ns.into_iter()
        .filter(|&n| {
            let mut row: Vec<&SweepRecord> = records.iter().filter(|r| r.n == n).collect();
            row.sort_by_key(|r| r.d);
            let signs: Vec<Dominance> = row
                .iter()
                .map(|r| r.dominance)
                .filter(|s| matches!(s, Dominance::Ghz | Dominance::Bell))
                .collect();
            signs.windows(2).filter(|w| w[0] != w[1]).count() > 1
        })
        .collect()
}

/// Root of `e^{-γ} = 1 - γ/2` in (1, 2) and the slope `1/γ` of the line
/// `d ≈ N/γ` separating GHZ and Bell-family dominance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundaryResult {
    pub gamma: f64,
    pub slope: f64,
    pub residual: f64,
}

fn boundary_fn(g: f64) -> f64 {
    (-g).exp() - (1.0 - g / 2.0)
}

/// Bisection on `[1, 2]`, which excludes the trivial root `γ = 0`.
pub fn boundary() -> BoundaryResult {
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    let f_lo = boundary_fn(lo);
    debug_assert!(f_lo < 0.0 && boundary_fn(hi) > 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let f = boundary_fn(mid);
        if f == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if (f < 0.0) == (f_lo < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 {
            break;
        }
    }
    let gamma = 0.5 * (lo + hi);
    BoundaryResult {
        gamma,
        slope: 1.0 / gamma,
        residual: boundary_fn(gamma).abs(),
    }
}

/// Parameters of [`search_max_nsector`].
#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub n: usize,
    pub d: usize,
    /// Haar samples drawn before hill climbing.
    pub samples: usize,
    pub hillclimb_steps: usize,
    pub seed: u64,
    /// Extra starting candidate evaluated alongside the samples.
    pub initial: Option<PureState>,
    /// Gaussian perturbation width of the first step; it decays
    /// geometrically to `final_step` at the last step.
    pub initial_step: f64,
    pub final_step: f64,
}

impl SearchConfig {
    pub fn new(n: usize, d: usize, samples: usize, hillclimb_steps: usize, seed: u64) -> Self {
        SearchConfig {
            n,
            d,
            samples,
            hillclimb_steps,
            seed,
            initial: None,
            initial_step: 0.2,
            final_step: 0.002,
        }
    }

    pub fn with_initial(mut self, state: PureState) -> Self {
        self.initial = Some(state);
        self
    }
}

/// Where the best state came from.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Origin {
    /// The Haar sample drawn on ChaCha stream `index + 1` of `seed`.
    HaarSample { seed: u64, index: usize },
    Initial,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub n: usize,
    pub d: usize,
    pub best_state: PureState,
    pub best_n_sector: f64,
    pub origin: Origin,
    /// N-sector of the best starting point before hill climbing.
    pub start_n_sector: f64,
    pub samples_evaluated: usize,
    pub hillclimb_steps: usize,
    pub accepted_steps: usize,
    pub reference_ghz: BigInt,
    pub reference_bell: BigInt,
}

impl SearchResult {
    /// Larger of the two family values.
    pub fn reference(&self) -> &BigInt {
        if self.reference_ghz >= self.reference_bell {
            &self.reference_ghz
        } else {
            &self.reference_bell
        }
    }
}

fn n_sector(state: &PureState) -> Result<f64> {
    Ok(n_sector_from_table(&purity_table(state)?))
}

fn sample_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn perturb(state: &PureState, sigma: f64, rng: &mut ChaCha8Rng) -> Result<PureState> {
    let amps: Vec<_> = state
        .amplitudes()
        .iter()
        .map(|a| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            a + num_complex::Complex64::new(re, im) * sigma
        })
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    PureState::new(state.n_parties(), state.local_dim(), amps.into_iter().map(|a| a / norm).collect())
}

/// Haar sampling followed by hill climbing from the best sample. Samples are
/// evaluated in parallel but each one has its own ChaCha stream, so the
/// result depends only on the configuration.
pub fn search_max_nsector(cfg: &SearchConfig) -> Result<SearchResult> {
    let (n, d) = (cfg.n, cfg.d);
    if cfg.samples == 0 && cfg.initial.is_none() {
        return domain("search needs at least one sample or an initial state");
    }
    if let Some(init) = &cfg.initial {
        if init.n_parties() != n || init.local_dim() != d {
            return domain("initial state does not match n and d");
        }
    }
    let reference_ghz = ghz_nsector_exact(n, d as u64)?;
    let reference_bell = bell_family_nsector_exact(n, d as u64)?;

    let scores: Vec<f64> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(cfg.seed, i as u64 + 1);
            n_sector(&random_state_with(n, d, &mut rng)?)
        })
        .collect::<Result<_>>()?;

    let mut best: Option<(f64, Origin)> = None;
    if let Some(init) = &cfg.initial {
        best = Some((n_sector(init)?, Origin::Initial));
    }
    for (i, &s) in scores.iter().enumerate() {
        if best.as_ref().is_none_or(|(b, _)| s > *b) {
            best = Some((
                s,
                Origin::HaarSample {
                    seed: cfg.seed,
                    index: i,
                },
            ));
        }
    }
    let (start_value, origin) = best.expect("at least one candidate");
    let mut current = match &origin {
        Origin::Initial => cfg.initial.clone().expect("initial state present"),
        Origin::HaarSample { index, .. } => {
            random_state_with(n, d, &mut sample_rng(cfg.seed, *index as u64 + 1))?
        }
    };
    let mut current_value = start_value;

    let mut rng = sample_rng(cfg.seed, 0);
    let steps = cfg.hillclimb_steps;
    let decay = if steps > 1 {
        (cfg.final_step / cfg.initial_step).powf(1.0 / (steps - 1) as f64)
    } else {
        1.0
    };
    let mut sigma = cfg.initial_step;
    let mut accepted = 0;
    for _ in 0..steps {
        let candidate = perturb(&current, sigma, &mut rng)?;
        let value = n_sector(&candidate)?;
        if value > current_value {
            current = candidate;
            current_value = value;
            accepted += 1;
        }
        sigma *= decay;
    }

    let bound = (d as f64).powi(n as i32);
    if current_value > bound * (1.0 + 1e-12) {
        return Err(Error::Consistency(format!("N-sector {current_value} exceeds d^N = {bound}")));
    }
    Ok(SearchResult {
        n,
        d,
        best_state: current,
        best_n_sector: current_value,
        origin,
        start_n_sector: start_value,
        samples_evaluated: cfg.samples,
        hillclimb_steps: steps,
        accepted_steps: accepted,
        reference_ghz,
        reference_bell,
    })
}
