//! Curve and star CSV files.
//!
//! Curves: header `s,re_0,im_0,…,re_{n-1},im_{n-1}`, one row per sample.
//! Star pairs: `s,n1x,n1y,n1z,n2x,n2y,n2z`. Single stars: rows `x,y,z`.

use holonomy::majorana::Star;
use holonomy::npc::{CurveLift, Grid};
use holonomy::sphere::StarPairSample;
use holonomy::{StateVector, Tolerances};
use num_complex::Complex64;

use crate::format::num;
use crate::CliError;

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("curve csv: {e}"))
}

pub fn read_curve(text: &str, tol: &Tolerances) -> Result<CurveLift, CliError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = rdr.headers().map_err(usage)?.clone();
    let cols = header.len();
    if cols < 3 || cols % 2 == 0 || &header[0] != "s" {
        return Err(usage("header must be s,re_0,im_0,…"));
    }
    for k in 0..(cols - 1) / 2 {
        if header[1 + 2 * k] != format!("re_{k}") || header[2 + 2 * k] != format!("im_{k}") {
            return Err(usage(format!("unexpected columns {} and {}", &header[1 + 2 * k], &header[2 + 2 * k])));
        }
    }
    let mut points = Vec::new();
    let mut states = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(usage)?;
        let vals = rec
            .iter()
            .map(|f| f.parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| usage(format!("row {}: {e}", row + 1)))?;
        points.push(vals[0]);
        let amps = vals[1..].chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
        states.push(StateVector::new(amps).map_err(|e| usage(format!("row {}: {e}", row + 1)))?);
    }
    let grid = Grid::from_points(&points).map_err(usage)?;
    CurveLift::with_tolerances(grid, states, tol).map_err(usage)
}

pub fn write_curve(lift: &CurveLift) -> String {
    let n = lift.dim();
    let mut header = vec!["s".to_string()];
    for k in 0..n {
        header.push(format!("re_{k}"));
        header.push(format!("im_{k}"));
    }
    let mut out = header.join(",");
    out.push('\n');
    for (i, psi) in lift.states().iter().enumerate() {
        let mut row = vec![num(lift.grid().point(i))];
        for a in psi.amplitudes() {
            row.push(num(a.re));
            row.push(num(a.im));
        }
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn star_fields(s: &Star) -> impl Iterator<Item = String> {
    s.coords().into_iter().map(num)
}

pub fn write_star_pairs(samples: &[StarPairSample]) -> String {
    let mut out = String::from("s,n1x,n1y,n1z,n2x,n2y,n2z\n");
    for p in samples {
        let row: Vec<String> = std::iter::once(num(p.s))
            .chain(star_fields(&p.stars[0]))
            .chain(star_fields(&p.stars[1]))
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn write_stars(stars: &[Star]) -> String {
    stars
        .iter()
        .map(|s| star_fields(s).collect::<Vec<_>>().join(",") + "\n")
        .collect()
}
