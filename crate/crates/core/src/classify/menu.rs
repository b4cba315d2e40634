use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Point;
use crate::profiles::BlowupCase;
use crate::specfun;

/// Matching tolerance relative to the largest entry magnitude.
pub const MATCH_TOL: f64 = 0.02;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MenuEntry {
    pub label: &'static str,
    pub value: f64,
}

/// Possible densities `M(0+)` at a point of a given case.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityMenu {
    pub case: BlowupCase,
    pub entries: Vec<MenuEntry>,
    pub tolerance: f64,
}

impl DensityMenu {
    fn build(case: BlowupCase, entries: Vec<MenuEntry>) -> Result<Self> {
        let scale = entries.iter().fold(0.0f64, |m, e| m.max(e.value.abs()));
        let tolerance = MATCH_TOL * scale;
        let menu = DensityMenu {
            case,
            entries,
            tolerance,
        };
        if !(menu.min_gap() > 2.0 * tolerance) {
            return Err(Error::InvalidArgument(format!(
                "{case} menu entries closer than twice the tolerance {tolerance}"
            )));
        }
        Ok(menu)
    }

    /// Smallest distance between two entries.
    pub fn min_gap(&self) -> f64 {
        let mut gap = f64::INFINITY;
        for (k, a) in self.entries.iter().enumerate() {
            for b in &self.entries[k + 1..] {
                gap = gap.min((a.value - b.value).abs());
            }
        }
        gap
    }

    /// Nearest entry, if it lies within the tolerance.
    pub fn matching(&self, m0: f64) -> Option<&MenuEntry> {
        let nearest = self
            .entries
            .iter()
            .min_by(|a, b| (a.value - m0).abs().total_cmp(&(b.value - m0).abs()))?;
        ((nearest.value - m0).abs() <= self.tolerance).then_some(nearest)
    }

    pub fn get(&self, label: &str) -> Option<f64> {
        self.entries.iter().find(|e| e.label == label).map(|e| e.value)
    }
}

/// Density of the bubble profile, `r^-4 ∫ x1 x2` over its sector
/// `theta_star < theta < pi`, which is `-sin^2(theta_star)/8 = -(1 - z0^2)/8`.
pub fn garabedian_density() -> Result<f64> {
    let z0 = specfun::find_z0(1e-12)?.z0;
    Ok(-(1.0 - z0 * z0) / 8.0)
}

pub fn density_menu(case: BlowupCase, x0: Point) -> Result<DensityMenu> {
    if BlowupCase::of(x0) != case {
        return Err(Error::CaseMismatch {
            requested: case.to_string(),
            x1: x0.x1,
            x2: x0.x2,
        });
    }
    let e = |label, value| MenuEntry { label, value };
    let entries = match case {
        BlowupCase::Interior => {
            let ab = x0.x1 * x0.x2;
            vec![
                e("half-plane", ab * std::f64::consts::FRAC_PI_2),
                e("two-sided", ab * std::f64::consts::PI),
                e("zero", 0.0),
            ]
        }
        BlowupCase::Horizontal => vec![
            e("stokes", x0.x1 * 3f64.sqrt() / 3.0),
            e("horizontal-positive", x0.x1 * 2.0 / 3.0),
            e("horizontal-negative", -x0.x1 * 2.0 / 3.0),
            e("zero", 0.0),
        ],
        BlowupCase::Axis => vec![e("axis-full", x0.x2 * 2.0 / 3.0), e("zero", 0.0)],
        BlowupCase::Origin => vec![
            e("garabedian", garabedian_density()?),
            e("horizontal-positive", 0.125),
            e("horizontal-negative", -0.125),
            e("zero", 0.0),
        ],
    };
    DensityMenu::build(case, entries)
}
