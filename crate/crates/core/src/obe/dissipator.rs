use num_complex::Complex64;

use super::{Level, LevelScheme, Operator, TransitModel};
use crate::Result;

/// Population transfer from one level to another at a fixed rate (rad/s).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PopulationFlow {
    pub from: Level,
    pub to: Level,
    pub rate: f64,
}

/// Trace-preserving relaxation: coherences decay, populations flow.
///
/// `coherence_decay[i][j]` damps `σij` for `i ≠ j` and equals the mean of
/// the total widths of the two levels. Each population flow removes
/// population from its source at the same rate it adds it to its target, so
/// the total is conserved.
#[derive(Clone, Debug, PartialEq)]
pub struct Dissipator {
    pub coherence_decay: [[f64; 4]; 4],
    pub population_flow: Vec<PopulationFlow>,
}

/// Builds the relaxation terms for a level scheme.
///
/// Natural decay of level `i` feeds level `j` at `Γi·b[i][j]`; transit
/// relaxation is added according to the scheme's [`TransitModel`]. The
/// width of each level is its total departure rate (plus the transit rate
/// for ground states under pure dephasing), and `γij = (Γi + Γj) / 2`.
pub fn build_dissipator(scheme: &LevelScheme) -> Result<Dissipator> {
    scheme.validate()?;

    let mut flows = Vec::new();
    for from in Level::ALL {
        let gamma = scheme.natural_decay[from.index()];
        if gamma == 0.0 {
            continue;
        }
        for to in Level::ALL {
            let b = scheme.branching[from.index()][to.index()];
            if b > 0.0 {
                flows.push(PopulationFlow {
                    from,
                    to,
                    rate: gamma * b,
                });
            }
        }
    }

    let transit = scheme.transit_rate;
    let mut dephasing = [0.0; 4];
    if transit > 0.0 {
        match scheme.transit {
            TransitModel::Repump => flows.push(PopulationFlow {
                from: Level::Three,
                to: Level::One,
                rate: transit,
            }),
            TransitModel::Exchange => {
                flows.push(PopulationFlow {
                    from: Level::One,
                    to: Level::Three,
                    rate: transit,
                });
                flows.push(PopulationFlow {
                    from: Level::Three,
                    to: Level::One,
                    rate: transit,
                });
            }
            TransitModel::Dephasing => {
                dephasing[Level::One.index()] = transit;
                dephasing[Level::Three.index()] = transit;
            }
        }
    }

    let mut width = dephasing;
    for f in &flows {
        width[f.from.index()] += f.rate;
    }
    let mut coherence_decay = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                coherence_decay[i][j] = 0.5 * (width[i] + width[j]);
            }
        }
    }

    Ok(Dissipator {
        coherence_decay,
        population_flow: flows,
    })
}

impl Dissipator {
    /// A dissipator with no relaxation at all.
    pub fn none() -> Self {
        Dissipator {
            coherence_decay: [[0.0; 4]; 4],
            population_flow: Vec::new(),
        }
    }

    /// Total rate at which population leaves `level`.
    pub fn departure_rate(&self, level: Level) -> f64 {
        self.population_flow
            .iter()
            .filter(|f| f.from == level)
            .map(|f| f.rate)
            .sum()
    }

    /// Largest relaxation rate of any kind.
    pub fn max_rate(&self) -> f64 {
        let coherence = self.coherence_decay.iter().flatten().copied();
        let departure = Level::ALL.into_iter().map(|l| self.departure_rate(l));
        coherence.chain(departure).fold(0.0, f64::max)
    }

    /// Smallest non-zero relaxation rate, if any.
    pub fn min_nonzero_rate(&self) -> Option<f64> {
        let coherence = self.coherence_decay.iter().flatten().copied();
        let flows = self.population_flow.iter().map(|f| f.rate);
        coherence.chain(flows).filter(|r| *r > 0.0).min_by(f64::total_cmp)
    }

    /// `D(σ)`: coherences damped, populations moved along every flow.
    pub fn apply(&self, sigma: &Operator) -> Operator {
        let mut out = Operator::zeros();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    out[(i, j)] = -self.coherence_decay[i][j] * sigma[(i, j)];
                }
            }
        }
        for f in &self.population_flow {
            let moved = sigma[(f.from.index(), f.from.index())].re * f.rate;
            out[(f.from.index(), f.from.index())] -= Complex64::from(moved);
            out[(f.to.index(), f.to.index())] += Complex64::from(moved);
        }
        out
    }
}
