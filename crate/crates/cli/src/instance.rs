use std::path::Path;

use efl_core::hybrid::{default_equi_tol, is_prime, HybridInstance, MassPreferences};
use efl_core::preferences::{HalfspaceSystem, Region};
use efl_core::{
    extremal_preferences, utility_preferences, ExtremalInstance, Measure, PreferenceOracle, SearchParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::CliError;

pub const SCHEMA: &str = "efl/1";

#[derive(Debug, Deserialize)]
pub struct InstanceFile {
    pub schema: String,
    #[serde(flatten)]
    pub body: Body,
    #[serde(default)]
    pub params: ParamsFile,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsFile {
    pub grid: Option<u64>,
    pub dedup_tol: Option<f64>,
    pub refine: Option<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Body {
    Halfspace {
        r: usize,
        /// `regions[player][tile]`
        regions: Vec<Vec<Region>>,
        #[serde(default)]
        hungry: bool,
    },
    Utility {
        r: usize,
        #[serde(default)]
        players: Vec<Measure>,
        /// Draw valuations from `--seed` instead of listing them.
        random: Option<RandomPlayers>,
        indifference: Option<f64>,
    },
    Extremal {
        r: usize,
        eps: Option<Vec<f64>>,
    },
    Hybrid {
        p: usize,
        mu: Measure,
        oracle: HybridOracle,
        equi_tol: Option<f64>,
        indifference: Option<f64>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomPlayers {
    pub players: usize,
    #[serde(default = "default_pieces")]
    pub pieces: usize,
}

fn default_pieces() -> usize {
    4
}

#[derive(Debug, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
#[allow(clippy::enum_variant_names)]
pub enum HybridOracle {
    /// Everyone wants the box of largest `mu`-mass.
    MaxMass,
    /// Player `i` wants the most of `[a_i, b_i]`.
    IntervalMass { intervals: Vec<(f64, f64)> },
    /// Player `i` wants the most of their own measure.
    MeasureMass { measures: Vec<Measure> },
}

pub fn read(path: &Path) -> Result<InstanceFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
    let inst: InstanceFile = serde_json::from_str(&text)?;
    if inst.schema != SCHEMA {
        return Err(CliError::Invalid(format!(
            "unsupported schema {:?}, expected {SCHEMA:?}",
            inst.schema
        )));
    }
    Ok(inst)
}

/// Flag values override the instance's `params`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub grid: Option<u64>,
    pub tol: Option<f64>,
    pub refine: Option<u32>,
}

/// Grid used when neither the flags nor the instance give one.
pub fn default_grid(r: usize) -> u64 {
    match r {
        2 => 40,
        3 => 60,
        4 => 24,
        5 => 15,
        _ => 2 * r as u64,
    }
}

/// Refinement levels used by `solve` when neither the flags nor the instance give any.
/// A refinement level costs about `5^(r-1)` fine points per seed, so large `r` skips it.
pub fn default_refine(r: usize) -> u32 {
    match r {
        0..=3 => 6,
        4 => 4,
        _ => 0,
    }
}
/// Certified cuts are isolated points, so certification refines much deeper.
pub const CERTIFY_REFINE: u32 = 16;

pub fn resolve_params(file: &ParamsFile, flags: Overrides, default_q: u64, default_refine: u32) -> SearchParams {
    let grid = flags.grid.or(file.grid).unwrap_or(default_q);
    let mut params = SearchParams::with_grid(grid);
    if let Some(tol) = flags.tol.or(file.dedup_tol) {
        params = params.dedup_tol(tol);
    }
    params.refine(flags.refine.or(file.refine).unwrap_or(default_refine))
}

fn random_measure(rng: &mut ChaCha8Rng, pieces: usize) -> Result<Measure, CliError> {
    let mut inner: Vec<f64> = (1..pieces).map(|_| rng.gen_range(0.05..0.95)).collect();
    inner.sort_by(|a, b| a.total_cmp(b));
    let mut breakpoints = vec![0.0];
    breakpoints.extend(inner);
    breakpoints.push(1.0);
    breakpoints.dedup();
    let densities = (1..breakpoints.len()).map(|_| rng.gen_range(0.2..5.0)).collect();
    Ok(Measure::new(breakpoints, densities)?)
}

/// A tile-preference instance: arity and oracle.
pub struct Tiles {
    pub r: usize,
    pub oracle: Box<dyn PreferenceOracle>,
}

impl Body {
    pub fn tiles(&self, seed: u64) -> Result<Tiles, CliError> {
        match self {
            Body::Halfspace { r, regions, hungry } => {
                let sys = HalfspaceSystem::new(*r, regions.clone(), *hungry)?;
                Ok(Tiles {
                    r: *r,
                    oracle: Box::new(sys),
                })
            }
            Body::Utility {
                r,
                players,
                random,
                indifference,
            } => {
                let vals = match (random, players.is_empty()) {
                    (Some(spec), true) => {
                        if spec.pieces == 0 {
                            return Err(CliError::Invalid("random.pieces must be positive".into()));
                        }
                        let mut rng = ChaCha8Rng::seed_from_u64(seed);
                        (0..spec.players)
                            .map(|_| random_measure(&mut rng, spec.pieces))
                            .collect::<Result<Vec<_>, _>>()?
                    }
                    (None, false) => players.clone(),
                    _ => {
                        return Err(CliError::Invalid(
                            "utility instance needs exactly one of `players` and `random`".into(),
                        ))
                    }
                };
                let oracle = match indifference {
                    Some(d) => efl_core::UtilityPreferences::new(*r, vals, *d)?,
                    None => utility_preferences(*r, vals)?,
                };
                Ok(Tiles {
                    r: *r,
                    oracle: Box::new(oracle),
                })
            }
            Body::Extremal { r, eps } => {
                let inst = match eps {
                    Some(eps) => ExtremalInstance::new(*r, eps.clone())?,
                    None => ExtremalInstance::with_default_eps(*r)?,
                };
                Ok(Tiles {
                    r: *r,
                    oracle: Box::new(extremal_preferences(&inst)),
                })
            }
            Body::Hybrid { .. } => Err(CliError::Invalid(
                "hybrid instances describe box preferences; use the `hybrid` command".into(),
            )),
        }
    }

    /// Builds the box instance, `q` picking the default equipartition tolerance.
    pub fn hybrid(&self, q: u64) -> Result<HybridInstance<MassPreferences>, CliError> {
        let Body::Hybrid {
            p,
            mu,
            oracle,
            equi_tol,
            indifference,
        } = self
        else {
            return Err(CliError::Invalid("the `hybrid` command needs a hybrid instance".into()));
        };
        if !is_prime(*p as u64) {
            return Err(efl_core::EflError::NotPrime(*p as u64).into());
        }
        let delta = indifference.unwrap_or(efl_core::preferences::DEFAULT_INDIFFERENCE);
        let prefs = match oracle {
            HybridOracle::MaxMass => MassPreferences::shared(*p, mu.clone(), delta)?,
            HybridOracle::IntervalMass { intervals } => MassPreferences::intervals(intervals, delta)?,
            HybridOracle::MeasureMass { measures } => MassPreferences::new(measures.clone(), delta)?,
        };
        let tol = equi_tol.unwrap_or_else(|| default_equi_tol(*p, q));
        Ok(HybridInstance::new(*p, prefs, mu.clone(), tol)?)
    }

    pub fn hybrid_p(&self) -> Option<usize> {
        match self {
            Body::Hybrid { p, .. } => Some(*p),
            _ => None,
        }
    }
}
