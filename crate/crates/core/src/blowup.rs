//! Blow-ups at the level of Néron-Severi lattices.
//!
//! A blow-up adjoins a class `e` with `e.e = -1` orthogonal to everything
//! before it. A curve through the point with multiplicity `m` is replaced by
//! its strict transform `C - m e`, and `K` becomes `K + e`.

use serde::{Deserialize, Serialize};

use crate::config::CurveConfiguration;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Seed {
    /// The projective plane with the given lines.
    Plane {
        #[serde(default)]
        lines: Vec<String>,
    },
    /// `P(O + L)` over a genus `g` curve with the section of square `-n` and
    /// the given fibers.
    Ruled {
        n: u64,
        g: u64,
        #[serde(default = "default_section")]
        section: String,
        #[serde(default)]
        fibers: Vec<String>,
    },
}

fn default_section() -> String {
    "C".into()
}

fn one() -> u64 {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Incidence {
    pub curve: String,
    #[serde(default = "one")]
    pub mult: u64,
}

/// One blown-up point: the curves through it and the name of the new
/// exceptional curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub name: String,
    #[serde(default)]
    pub through: Vec<Incidence>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupScript {
    pub name: String,
    pub seed: Seed,
    pub steps: Vec<Step>,
    /// Curves to export, in order; all curves in creation order if absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub track: Option<Vec<String>>,
}

impl BlowupScript {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::input("script", e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("script serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrackedCurve {
    pub name: String,
    /// Coordinates in the ambient basis.
    pub class: Vec<i64>,
    pub genus: u64,
    pub exceptional: bool,
}

/// Ambient lattice, canonical class and tracked curves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurfaceState {
    pub gram: Vec<Vec<i64>>,
    pub basis_names: Vec<String>,
    pub canonical: Vec<i64>,
    pub curves: Vec<TrackedCurve>,
}

impl SurfaceState {
    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn product(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut s = 0;
        for (i, row) in self.gram.iter().enumerate() {
            for (j, g) in row.iter().enumerate() {
                s += x[i] * g * y[j];
            }
        }
        s
    }

    pub fn k_square(&self) -> i64 {
        self.product(&self.canonical, &self.canonical)
    }

    pub fn curve(&self, name: &str) -> Option<&TrackedCurve> {
        self.curves.iter().find(|c| c.name == name)
    }

    fn add_curve(&mut self, name: &str, class: Vec<i64>, genus: u64) -> Result<()> {
        if self.curve(name).is_some() {
            return Err(Error::input("name", format!("curve `{name}` already exists")));
        }
        let exceptional = self.product(&class, &class) < 0;
        self.curves.push(TrackedCurve {
            name: name.into(),
            class,
            genus,
            exceptional,
        });
        Ok(())
    }

    /// Blows up one point lying on the cited curves and names the new
    /// exceptional curve.
    pub fn blow_up(&mut self, name: &str, through: &[Incidence]) -> Result<()> {
        let mut idx = Vec::with_capacity(through.len());
        for inc in through {
            if inc.mult == 0 {
                return Err(Error::input("mult", format!("multiplicity of `{}` must be >= 1", inc.curve)));
            }
            let i = self
                .curves
                .iter()
                .position(|c| c.name == inc.curve)
                .ok_or_else(|| Error::input("through", format!("unknown curve `{}`", inc.curve)))?;
            if idx.contains(&i) {
                return Err(Error::input("through", format!("curve `{}` cited twice", inc.curve)));
            }
            idx.push(i);
        }
        if self.curve(name).is_some() {
            return Err(Error::input("name", format!("curve `{name}` already exists")));
        }
        for a in 0..idx.len() {
            for b in (a + 1)..idx.len() {
                let (ca, cb) = (&self.curves[idx[a]], &self.curves[idx[b]]);
                let meet = self.product(&ca.class, &cb.class);
                let need = (through[a].mult * through[b].mult) as i64;
                if need > meet {
                    return Err(Error::GeometricInconsistency {
                        step: name.into(),
                        reason: format!(
                            "`{}` and `{}` meet in {meet} but need {need} at the point",
                            ca.name, cb.name
                        ),
                    });
                }
            }
        }
        for (k, &i) in idx.iter().enumerate() {
            let m = through[k].mult;
            let drop = m * (m - 1) / 2;
            if drop > self.curves[i].genus {
                return Err(Error::GeometricInconsistency {
                    step: name.into(),
                    reason: format!(
                        "`{}` of genus {} cannot have multiplicity {m}",
                        self.curves[i].name, self.curves[i].genus
                    ),
                });
            }
        }

        let n = self.rank();
        for row in self.gram.iter_mut() {
            row.push(0);
        }
        let mut last = vec![0; n + 1];
        last[n] = -1;
        self.gram.push(last);
        self.basis_names.push(format!("e_{name}"));
        self.canonical.push(1);
        for c in self.curves.iter_mut() {
            c.class.push(0);
        }
        for (k, &i) in idx.iter().enumerate() {
            let m = through[k].mult;
            let c = &mut self.curves[i];
            c.class[n] = -(m as i64);
            c.genus -= m * (m - 1) / 2;
        }
        for c in self.curves.iter_mut() {
            let sq = {
                let mut s = 0;
                for (a, row) in self.gram.iter().enumerate() {
                    for (b, g) in row.iter().enumerate() {
                        s += c.class[a] * g * c.class[b];
                    }
                }
                s
            };
            c.exceptional = sq < 0;
        }
        let mut e = vec![0; n + 1];
        e[n] = 1;
        self.add_curve(name, e, 0)
    }

    /// The tracked curves (or the named subset) as a configuration.
    pub fn export(&self, name: &str, track: Option<&[String]>) -> Result<CurveConfiguration> {
        let chosen: Vec<&TrackedCurve> = match track {
            Some(names) => names
                .iter()
                .map(|n| {
                    self.curve(n)
                        .ok_or_else(|| Error::input("track", format!("unknown curve `{n}`")))
                })
                .collect::<Result<_>>()?,
            None => self.curves.iter().collect(),
        };
        let gram: Vec<Vec<i64>> = chosen
            .iter()
            .map(|a| chosen.iter().map(|b| self.product(&a.class, &b.class)).collect())
            .collect();
        CurveConfiguration::new(
            name,
            chosen.iter().map(|c| (c.name.clone(), c.genus)).collect(),
            gram,
            Some(self.rank()),
        )
    }
}

pub fn seed_config(seed: &Seed) -> Result<SurfaceState> {
    match seed {
        Seed::Plane { lines } => {
            let mut s = SurfaceState {
                gram: vec![vec![1]],
                basis_names: vec!["h".into()],
                canonical: vec![-3],
                curves: Vec::new(),
            };
            for l in lines {
                s.add_curve(l, vec![1], 0)?;
            }
            Ok(s)
        }
        Seed::Ruled { n, g, section, fibers } => {
            if *n == 0 {
                return Err(Error::input("seed.n", "the section needs negative square, n >= 1"));
            }
            let (n, g) = (*n as i64, *g as i64);
            let mut s = SurfaceState {
                gram: vec![vec![-n, 1], vec![1, 0]],
                basis_names: vec!["C".into(), "f".into()],
                canonical: vec![-2, 2 * g - 2 - n],
                curves: Vec::new(),
            };
            s.add_curve(section, vec![1, 0], g as u64)?;
            for f in fibers {
                s.add_curve(f, vec![0, 1], 0)?;
            }
            Ok(s)
        }
    }
}

/// A script run: the exported configuration plus the bookkeeping data for
/// cross-checks.
#[derive(Debug, Clone, Serialize)]
pub struct BlowupResult {
    pub state: SurfaceState,
    #[serde(skip)]
    pub config: CurveConfiguration,
    pub k_square: i64,
    /// `K.C` for every exported curve, from the bookkeeping.
    pub canonical_products: Vec<i64>,
}

pub fn run_script(script: &BlowupScript) -> Result<BlowupResult> {
    let mut state = seed_config(&script.seed)?;
    for (i, step) in script.steps.iter().enumerate() {
        state.blow_up(&step.name, &step.through).map_err(|e| match e {
            Error::GeometricInconsistency { reason, .. } => Error::GeometricInconsistency {
                step: format!("{i} ({})", step.name),
                reason,
            },
            Error::InputInvalid { path, reason } => Error::InputInvalid {
                path: format!("steps[{i}].{path}"),
                reason,
            },
            other => other,
        })?;
    }
    let config = state.export(&script.name, script.track.as_deref())?;
    let names = config.names();
    let canonical_products = names
        .iter()
        .map(|n| state.product(&state.canonical, &state.curve(n).unwrap().class))
        .collect();
    Ok(BlowupResult {
        k_square: state.k_square(),
        canonical_products,
        config,
        state,
    })
}
