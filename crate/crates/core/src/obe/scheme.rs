use crate::units::{khz, mhz};
use crate::{Error, Result};

/// How the transit-time relaxation of the ground states is modelled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TransitModel {
    /// Population leaves `|3⟩` for `|1⟩` at the transit rate. Fresh atoms are
    /// effectively delivered into the probe ground state.
    #[default]
    Repump,
    /// Population is exchanged `|1⟩↔|3⟩` at the transit rate in both
    /// directions, relaxing towards equal ground populations.
    Exchange,
    /// No population transfer; the transit rate only widens the ground
    /// levels, entering every coherence involving `|1⟩` or `|3⟩`.
    Dephasing,
}

/// Decay rates and branching ratios of the four levels.
///
/// `branching[i][j]` is the fraction of the natural decay of level `i + 1`
/// that lands in level `j + 1`. Every row of a decaying level sums to one.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelScheme {
    /// Natural decay rate Γ of each level, rad/s.
    pub natural_decay: [f64; 4],
    pub branching: [[f64; 4]; 4],
    /// Transit-time relaxation rate, rad/s.
    pub transit_rate: f64,
    pub transit: TransitModel,
}

impl LevelScheme {
    /// ⁸⁷Rb D2 defaults: Γ2 = Γ4 = 2π×6 MHz, ground states stable, `|2⟩`
    /// decays equally to both ground states, `|4⟩` only to `|3⟩`, transit
    /// relaxation 2π×100 kHz.
    pub fn rubidium_d2() -> Self {
        let gamma = mhz(6.0);
        let mut branching = [[0.0; 4]; 4];
        branching[1][0] = 0.5;
        branching[1][2] = 0.5;
        branching[3][2] = 1.0;
        LevelScheme {
            natural_decay: [0.0, gamma, 0.0, gamma],
            branching,
            transit_rate: khz(100.0),
            transit: TransitModel::Repump,
        }
    }

    /// Checks rates are non-negative and decaying rows sum to one.
    pub fn validate(&self) -> Result<()> {
        for (i, (&gamma, row)) in self.natural_decay.iter().zip(&self.branching).enumerate() {
            if !(gamma >= 0.0 && gamma.is_finite()) {
                return Err(Error::invalid("natural_decay", format!("level {} rate {gamma}", i + 1)));
            }
            if row.iter().any(|b| !(*b >= 0.0 && b.is_finite())) {
                return Err(Error::invalid(
                    "branching",
                    format!("row {} has a negative entry", i + 1),
                ));
            }
            if row[i] != 0.0 {
                return Err(Error::invalid("branching", format!("level {} decays to itself", i + 1)));
            }
            if gamma > 0.0 {
                let sum: f64 = row.iter().sum();
                if (sum - 1.0).abs() > 1e-12 {
                    return Err(Error::Branching { level: i + 1, sum });
                }
            }
        }
        if !(self.transit_rate >= 0.0 && self.transit_rate.is_finite()) {
            return Err(Error::invalid("transit_rate", format!("{}", self.transit_rate)));
        }
        Ok(())
    }
}

impl Default for LevelScheme {
    fn default() -> Self {
        Self::rubidium_d2()
    }
}
