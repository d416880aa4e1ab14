//! Built-in configurations, blow-up scripts and the Mordell-Weil table.

use serde::Serialize;

use crate::blowup::{BlowupScript, Incidence, Seed, Step};
use crate::config::CurveConfiguration;
use crate::error::{Error, Result};
use crate::roots::MW_TABLE;

/// Section `C_g` of square `-n`, the fiber strict transform `E0` and the
/// exceptional curve `F0` of one blow-up on the fiber.
pub fn ruled_base(n: u64, g: u64) -> CurveConfiguration {
    let n = n as i64;
    CurveConfiguration::new(
        "ruled-base",
        vec![("C_g".into(), g), ("E0".into(), 0), ("F0".into(), 0)],
        vec![vec![-n, 1, 0], vec![1, -1, 1], vec![0, 1, -1]],
        None,
    )
    .expect("valid example")
}

fn graph(name: &str, size: usize, whites: &[usize], edges: &[(usize, usize)]) -> CurveConfiguration {
    let mut gram = vec![vec![0i64; size]; size];
    for (i, row) in gram.iter_mut().enumerate() {
        row[i] = if whites.contains(&(i + 1)) { -1 } else { -2 };
    }
    for &(a, b) in edges {
        gram[a - 1][b - 1] = 1;
        gram[b - 1][a - 1] = 1;
    }
    CurveConfiguration::new(
        name,
        (1..=size).map(|i| (format!("E{i}"), 0)).collect(),
        gram,
        None,
    )
    .expect("valid graph")
}

/// `E1..E9` form an extended `E8` with branch vertex `E4`; `E10` is the
/// single section, meeting the end `E9` of the long arm.
pub fn he8() -> CurveConfiguration {
    graph(
        "HE8t",
        10,
        &[10],
        &[(10, 9), (9, 8), (8, 7), (7, 6), (6, 5), (5, 4), (4, 3), (3, 2), (4, 1)],
    )
}

/// Extended `D8` on the black curves with sections `E9` and `E11`.
pub fn hd8() -> CurveConfiguration {
    graph(
        "HD8t",
        11,
        &[9, 11],
        &[
            (11, 10),
            (10, 7),
            (7, 1),
            (7, 5),
            (5, 3),
            (3, 2),
            (2, 6),
            (6, 4),
            (6, 8),
            (8, 9),
        ],
    )
}

/// Cycle order of the black curves in the extended `A8`.
pub const HA8_CYCLE: [usize; 9] = [1, 4, 7, 2, 5, 8, 3, 6, 9];

fn ha8_with(name: &str, attachments: [(usize, usize); 3]) -> CurveConfiguration {
    let mut edges: Vec<(usize, usize)> = (0..9)
        .map(|i| (HA8_CYCLE[i], HA8_CYCLE[(i + 1) % 9]))
        .collect();
    edges.extend(attachments);
    graph(name, 12, &[10, 11, 12], &edges)
}

/// Extended `A8` with sections `E10, E11, E12` on `E7, E8, E9`, pairwise at
/// cycle distance 3.
pub fn ha8() -> CurveConfiguration {
    ha8_with("HA8t", [(10, 7), (11, 8), (12, 9)])
}

/// The literal reading of the drawn figure: sections on `E7, E5, E1`. Its
/// Gram matrix has two positive directions, so it is kept only for contrast.
pub fn ha8_figure() -> CurveConfiguration {
    ha8_with("HA8t-figure", [(10, 7), (11, 5), (12, 1)])
}

fn step(name: &str, through: &[&str]) -> Step {
    Step {
        name: name.into(),
        through: through
            .iter()
            .map(|c| Incidence {
                curve: (*c).into(),
                mult: 1,
            })
            .collect(),
    }
}

/// Example surface `X_k`: `F0` on the fiber, then `F1` at `E0 ∩ F0` and each
/// later `F_j` at `F_{j-1} ∩ F_{j-2}`.
pub fn tower_script(n: u64, g: u64, k: usize) -> BlowupScript {
    let mut steps = vec![step("F0", &["E0"])];
    for j in 1..=k {
        let name = format!("F{j}");
        let prev = format!("F{}", j - 1);
        let prev2 = if j == 1 { "E0".to_string() } else { format!("F{}", j - 2) };
        steps.push(step(&name, &[&prev2, &prev]));
    }
    BlowupScript {
        name: format!("tower-n{n}-g{g}-k{k}"),
        seed: Seed::Ruled {
            n,
            g,
            section: "C_g".into(),
            fibers: vec!["E0".into()],
        },
        steps,
        track: None,
    }
}

fn plane_script(name: &str, lines: &[&str], steps: &[(&str, &[&str])]) -> BlowupScript {
    BlowupScript {
        name: name.into(),
        seed: Seed::Plane {
            lines: lines.iter().map(|l| (*l).into()).collect(),
        },
        steps: steps.iter().map(|(n, t)| step(n, t)).collect(),
        track: None,
    }
}

/// Nine blow-ups along the line `E1`.
pub fn he8_script() -> BlowupScript {
    plane_script(
        "HE8t",
        &["E1"],
        &[
            ("E2", &["E1"]),
            ("E3", &["E1", "E2"]),
            ("E4", &["E1", "E3"]),
            ("E5", &["E4"]),
            ("E6", &["E5"]),
            ("E7", &["E6"]),
            ("E8", &["E7"]),
            ("E9", &["E8"]),
            ("E10", &["E9"]),
        ],
    )
}

/// Nine blow-ups on the two lines `E1, E2`.
pub fn hd8_script() -> BlowupScript {
    plane_script(
        "HD8t",
        &["E1", "E2"],
        &[
            ("E3", &["E1", "E2"]),
            ("E4", &["E2"]),
            ("E5", &["E1", "E3"]),
            ("E6", &["E2", "E4"]),
            ("E7", &["E1", "E5"]),
            ("E8", &["E6"]),
            ("E9", &["E8"]),
            ("E10", &["E7"]),
            ("E11", &["E10"]),
        ],
    )
}

/// Nine blow-ups on the triangle of lines `E1, E2, E3`.
pub fn ha8_script() -> BlowupScript {
    plane_script(
        "HA8t",
        &["E1", "E2", "E3"],
        &[
            ("E4", &["E1", "E2"]),
            ("E5", &["E2", "E3"]),
            ("E6", &["E3", "E1"]),
            ("E7", &["E4", "E2"]),
            ("E8", &["E5", "E3"]),
            ("E9", &["E6", "E1"]),
            ("E10", &["E7"]),
            ("E11", &["E8"]),
            ("E12", &["E9"]),
        ],
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct MwTableRow {
    pub fibers: String,
    /// Orders of the cyclic summands as printed; empty for the trivial group.
    pub group: Vec<u64>,
}

pub fn mw_table() -> Vec<MwTableRow> {
    MW_TABLE
        .iter()
        .map(|(f, g)| MwTableRow {
            fibers: (*f).into(),
            group: g.to_vec(),
        })
        .collect()
}

#[derive(Debug, Clone)]
pub enum FixturePayload {
    Config(CurveConfiguration),
    Script(BlowupScript),
    Table(Vec<MwTableRow>),
}

#[derive(Debug, Clone)]
pub struct FixtureEntry {
    pub id: String,
    pub payload: FixturePayload,
    pub note: &'static str,
}

/// Parameters for the parametrised fixtures.
#[derive(Debug, Clone, Copy)]
pub struct FixtureParams {
    pub n: u64,
    pub g: u64,
    pub k: usize,
}

impl Default for FixtureParams {
    fn default() -> Self {
        Self { n: 3, g: 1, k: 2 }
    }
}

pub const FIXTURE_IDS: [(&str, &str); 10] = [
    ("ruled-base", "section, fiber and one blow-up on the fiber (params n, g)"),
    ("tower", "blow-up script for the surfaces X_k (params n, g, k)"),
    ("HE8t", "extended E8 with one section"),
    ("HD8t", "extended D8 with two sections"),
    ("HA8t", "extended A8 with three sections at cycle distance 3"),
    ("HA8t-figure", "extended A8 with sections on E7, E5, E1 as drawn (not hyperbolic)"),
    ("HE8t-script", "plane blow-up script producing HE8t"),
    ("HD8t-script", "plane blow-up script producing HD8t"),
    ("HA8t-script", "plane blow-up script producing HA8t"),
    ("mw-table", "reducible fiber types with their Mordell-Weil groups"),
];

pub fn fixture(id: &str, params: FixtureParams) -> Result<FixtureEntry> {
    let note = FIXTURE_IDS
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, n)| *n)
        .ok_or_else(|| Error::UnknownFixture(id.to_string()))?;
    let payload = match id {
        "ruled-base" => FixturePayload::Config(ruled_base(params.n.max(1), params.g)),
        "tower" => FixturePayload::Script(tower_script(params.n.max(1), params.g, params.k)),
        "HE8t" => FixturePayload::Config(he8()),
        "HD8t" => FixturePayload::Config(hd8()),
        "HA8t" => FixturePayload::Config(ha8()),
        "HA8t-figure" => FixturePayload::Config(ha8_figure()),
        "HE8t-script" => FixturePayload::Script(he8_script()),
        "HD8t-script" => FixturePayload::Script(hd8_script()),
        "HA8t-script" => FixturePayload::Script(ha8_script()),
        _ => FixturePayload::Table(mw_table()),
    };
    Ok(FixtureEntry {
        id: id.to_string(),
        payload,
        note,
    })
}
