//! CSV and JSON renderings of trajectories, phase diagrams and EP lists.
//!
//! Floats are written in Rust's shortest round-trip form, so identical
//! results give byte-identical files.

use serde::Serialize;

use crate::braid::BraidWord;
use crate::spectrum::{BandTrajectory, SamplePath};
use crate::topology::{ExceptionalPoint, PhaseDiagram};
use crate::Error;

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String, Error> {
    let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::InvalidArgument(e.to_string()))
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidArgument(e.to_string())
}

/// One row per grid point. Momentum paths start with `k`; circle paths
/// with `theta,re_z,im_z`. Then `re_eN,im_eN` for each band.
pub fn trajectory_csv(t: &BandTrajectory) -> Result<String, Error> {
    let mut w = writer();
    let mut header: Vec<String> = match t.path {
        SamplePath::Momentum => vec!["k".into()],
        SamplePath::Circle { .. } => vec!["theta".into(), "re_z".into(), "im_z".into()],
    };
    for n in 1..=t.band_count() {
        header.push(format!("re_e{n}"));
        header.push(format!("im_e{n}"));
    }
    w.write_record(&header).map_err(csv_err)?;
    for (j, &x) in t.grid.iter().enumerate() {
        let mut row = vec![x.to_string()];
        if let SamplePath::Circle { .. } = t.path {
            let z = t.path.point(x);
            row.push(z.re.to_string());
            row.push(z.im.to_string());
        }
        for band in &t.bands {
            row.push(band[j].re.to_string());
            row.push(band[j].im.to_string());
        }
        w.write_record(&row).map_err(csv_err)?;
    }
    finish(w)
}

#[derive(Serialize)]
struct TrajectoryDoc<'a> {
    #[serde(flatten)]
    trajectory: &'a BandTrajectory,
    #[serde(skip_serializing_if = "Option::is_none")]
    word: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eps: Option<&'a [ExceptionalPoint]>,
}

/// The trajectory, plus optionally its braid word and a list of EPs.
pub fn trajectory_json(
    t: &BandTrajectory,
    word: Option<&BraidWord>,
    eps: Option<&[ExceptionalPoint]>,
) -> Result<String, Error> {
    to_json(&TrajectoryDoc {
        trajectory: t,
        word: word.map(BraidWord::to_string),
        eps,
    })
}

/// `<axis1>,<axis2>,word,nu,degenerate_flag`, one row per cell in
/// row-major order. Unclassified cells read `DEGENERATE` with empty `nu`.
pub fn phase_diagram_csv(pd: &PhaseDiagram) -> Result<String, Error> {
    let mut w = writer();
    w.write_record([
        pd.axis1.name.as_str(),
        pd.axis2.name.as_str(),
        "word",
        "nu",
        "degenerate_flag",
    ])
    .map_err(csv_err)?;
    for c in &pd.cells {
        let word = c.word.clone().unwrap_or_else(|| "DEGENERATE".into());
        let nu = c.exponent_sum.map(|n| n.to_string()).unwrap_or_default();
        let flag = if c.degenerate { "1" } else { "0" };
        w.write_record([c.x.to_string(), c.y.to_string(), word, nu, flag.to_string()])
            .map_err(csv_err)?;
    }
    finish(w)
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String, Error> {
    serde_json::to_string_pretty(value).map_err(|e| Error::InvalidArgument(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{DimerParams, ModelSpec};
    use crate::spectrum::{riemann_loop, track_bands};

    fn dimer() -> ModelSpec {
        ModelSpec::Dimer(DimerParams {
            alpha: 1.0,
            beta: 1.5,
            delta: 0.3,
            gamma: 1.0,
            m: 1,
        })
    }

    #[test]
    fn trajectory_csv_layout() {
        let t = track_bands(&dimer(), 0.0, 64).unwrap();
        let text = trajectory_csv(&t).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("k,re_e1,im_e1,re_e2,im_e2"));
        assert_eq!(text.lines().count(), t.grid.len() + 1);
        let first: Vec<f64> = lines.next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(first[0], 0.0);
        assert_eq!(first[1], t.bands[0][0].re);

        let loop_ = riemann_loop(&dimer(), 0.5, 64).unwrap();
        let text = trajectory_csv(&loop_).unwrap();
        assert!(text.starts_with("theta,re_z,im_z,re_e1"));
    }

    #[test]
    fn floats_round_trip() {
        let t = track_bands(&dimer(), 0.1, 64).unwrap();
        let text = trajectory_csv(&t).unwrap();
        let row: Vec<f64> = text.lines().nth(5).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(row[0], t.grid[4]);
        assert_eq!(row[4], t.bands[1][4].im);
    }

    #[test]
    fn trajectory_json_parses() {
        let t = track_bands(&dimer(), 0.0, 64).unwrap();
        let text = trajectory_json(&t, None, None).unwrap();
        let back: BandTrajectory = serde_json::from_str(&text).unwrap();
        assert_eq!(back, t);
    }
}
