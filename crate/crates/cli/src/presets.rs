//! Named experiments: ready-made sweeps over the standard test systems.
//!
//! Critical couplings used to place the sweeps:
//!
//! | preset | system | onset `eps_t` | end `eps_c` |
//! |---|---|---|---|
//! | `fig4-rossler-type1-eyelet` | rossler-bi, omega 1.015 / 0.985 | 0.0276 | 0.0286 |
//! | `fig6-lorenz` | lorenz, gamma 1.5 / -1.5 | 6.7 | 12 |
//! | `fig7-uni-eyelet` | rossler-uni, omega 0.93 / 0.95 | 0.0345 | 0.042 |
//! | `fig8-ring` | rossler-uni, omega 1.0 / 0.95 | 0.1097 | 0.124 |

use phaselock::experiments::SystemKind;
use serde::Serialize;

use crate::config::{ExperimentConfig, SweepAxis, SweepRange};
use crate::error::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct Preset {
    pub name: &'static str,
    pub figure: &'static str,
    pub system: &'static str,
    pub description: &'static str,
    /// Critical coupling values bracketed by the sweep.
    pub critical: &'static [(&'static str, f64)],
    #[serde(skip)]
    build: fn() -> ExperimentConfig,
}

impl Preset {
    pub fn config(&self) -> ExperimentConfig {
        (self.build)()
    }
}

fn range(variable: &str, start: f64, stop: f64, step: f64) -> SweepAxis {
    SweepAxis { variable: variable.into(), range: SweepRange::Range { start, stop, step } }
}

fn values(variable: &str, v: &[f64]) -> SweepAxis {
    SweepAxis { variable: variable.into(), range: SweepRange::Values(v.to_vec()) }
}

fn with(system: SystemKind, params: &[(&str, f64)], sweeps: Vec<SweepAxis>) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(system);
    c.params = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    c.sweeps = sweeps;
    c
}

fn fig3() -> ExperimentConfig {
    let mut c = with(SystemKind::Tent, &[], vec![range("a", 0.125, 0.35, 0.025), range("k", 1.05, 1.45, 0.05)]);
    c.integrator = [("iterations", 350_000.0), ("discard", 50_000.0), ("lyapunov_iterations", 1.0e6)]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
    c
}

fn fig4() -> ExperimentConfig {
    with(SystemKind::RosslerBi, &[("omega1", 1.015), ("omega2", 0.985)], vec![range("eps", 0.02, 0.0286, 0.0002)])
}

fn fig5() -> ExperimentConfig {
    let mut c = with(SystemKind::Tent, &[], vec![values("a", &[0.3, 0.7]), range("eps", 0.0, 0.25, 0.01)]);
    c.integrator =
        [("iterations", 350_000.0), ("discard", 50_000.0)].into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    c
}

fn fig6() -> ExperimentConfig {
    with(SystemKind::Lorenz, &[("gamma1", 1.5), ("gamma2", -1.5)], vec![range("eps", 6.0, 12.0, 0.5)])
}

fn fig7() -> ExperimentConfig {
    with(SystemKind::RosslerUni, &[("omega1", 0.93), ("omega2", 0.95)], vec![range("eps", 0.031, 0.042, 0.0005)])
}

fn fig8() -> ExperimentConfig {
    with(SystemKind::RosslerUni, &[("omega1", 1.0), ("omega2", 0.95)], vec![range("eps", 0.105, 0.124, 0.001)])
}

fn fig9() -> ExperimentConfig {
    with(SystemKind::Hh, &[("g_syn1", 0.1)], vec![values("noise_std", &[0.0, 2.12]), range("g_syn2", 0.05, 0.5, 0.05)])
}

pub static PRESETS: [Preset; 7] = [
    Preset {
        name: "fig3",
        figure: "3",
        system: "tent",
        description: "Coupled skew tent maps on the (a, k) grid with k = exp(transversal exponent): \
                      closed-form and numerical exponents next to the rates",
        critical: &[],
        build: fig3,
    },
    Preset {
        name: "fig4-rossler-type1-eyelet",
        figure: "4",
        system: "rossler-bi",
        description: "Bidirectionally coupled Rossler oscillators through the type-I and eyelet windows",
        critical: &[("eps_t", 0.0276), ("eps_c", 0.0286)],
        build: fig4,
    },
    Preset {
        name: "fig5",
        figure: "5",
        system: "tent",
        description: "Rates against coupling for tent maps with a = 0.3 and a = 0.7 \
                      (350000 iterations, 50000 discarded)",
        critical: &[],
        build: fig5,
    },
    Preset {
        name: "fig6-lorenz",
        figure: "6",
        system: "lorenz",
        description: "Detuned Lorenz oscillators across the type-I window",
        critical: &[("eps_t", 6.7), ("eps_c", 12.0)],
        build: fig6,
    },
    Preset {
        name: "fig7-uni-eyelet",
        figure: "7",
        system: "rossler-uni",
        description: "Unidirectionally driven Rossler oscillators, eyelet window",
        critical: &[("eps_t", 0.0345), ("eps_c", 0.042)],
        build: fig7,
    },
    Preset {
        name: "fig8-ring",
        figure: "8",
        system: "rossler-uni",
        description: "Unidirectionally driven Rossler oscillators with larger detuning, ring window",
        critical: &[("eps_t", 0.1097), ("eps_c", 0.124)],
        build: fig8,
    },
    Preset {
        name: "fig9-hh",
        figure: "9",
        system: "hh",
        description: "Inhibitory Hodgkin-Huxley pair, g_syn2 sweep at g_syn1 = 0.1, noiseless and noisy",
        critical: &[],
        build: fig9,
    },
];

pub fn find(name: &str) -> Result<&'static Preset, CliError> {
    PRESETS.iter().find(|p| p.name == name).ok_or_else(|| CliError::UnknownPreset(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seven_unique_presets() {
        let mut names: Vec<_> = PRESETS.iter().map(|p| p.name).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), 7);
        assert!(find("fig2").is_err());
    }

    #[test]
    fn presets_round_trip_through_text() {
        for p in &PRESETS {
            let c = p.config();
            assert_eq!(c.system.name(), p.system);
            let again: ExperimentConfig = c.to_string().parse().unwrap_or_else(|e| panic!("{}: {e}", p.name));
            assert_eq!(again, c, "{}", p.name);
        }
    }

    #[test]
    fn sweeps_bracket_critical_values() {
        for p in &PRESETS {
            let c = p.config();
            let eps: Vec<f64> = c.sweeps.iter().find(|a| a.variable == "eps").map(|a| a.values()).unwrap_or_default();
            for (name, v) in p.critical {
                let (lo, hi) = (eps.first().unwrap(), eps.last().unwrap());
                assert!(*lo < *v && *v <= *hi + 1e-12, "{} {name}={v} outside [{lo}, {hi}]", p.name);
            }
        }
    }

    #[test]
    fn figure_grids() {
        let g = find("fig3").unwrap().config();
        assert_eq!(g.sweeps[0].values().len(), 10);
        assert_eq!(g.sweeps[1].values().len(), 9);
        let f5 = find("fig5").unwrap().config();
        assert_eq!(f5.integrator["iterations"], 350_000.0);
        assert_eq!(f5.integrator["discard"], 50_000.0);
    }
}
