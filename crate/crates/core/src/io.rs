//! File formats: coefficient JSON, phase-field JSON + CSV, signal CSV,
//! ball-cover JSON and norm-report CSV.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::BallCover;
use crate::grid::{AxisGrid, PhaseGrid, ProductGrid, Signal};
use crate::hermite::{CoeffTable, MultiIndex};
use crate::stft::{Convention, PhaseField};

/// Which side of the transform a coefficient table lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Hermite,
    Fock,
}

#[derive(Serialize, Deserialize)]
struct CoeffEntry {
    alpha: Vec<u32>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct CoeffFile {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    space: Option<Space>,
    dim: usize,
    max_degree: u32,
    coeffs: Vec<CoeffEntry>,
}

/// `{"dim", "max_degree", "coeffs": [{"alpha", "re", "im"}]}` in graded-lex
/// order; Fock tables add `"space": "fock"`.
pub fn coeffs_to_json(table: &CoeffTable, space: Space) -> Result<String> {
    let file = CoeffFile {
        space: (space == Space::Fock).then_some(Space::Fock),
        dim: table.dim(),
        max_degree: table.max_degree(),
        coeffs: table
            .iter()
            .map(|(a, v)| CoeffEntry { alpha: a.entries().to_vec(), re: v.re, im: v.im })
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&file)?)
}

/// Inverse of [`coeffs_to_json`]; a missing `"space"` reads as Hermite.
pub fn coeffs_from_json(text: &str) -> Result<(CoeffTable, Space)> {
    let file: CoeffFile = serde_json::from_str(text)?;
    if !(1..=2).contains(&file.dim) {
        return Err(Error::Parse(format!("dimension {} not supported", file.dim)));
    }
    let mut table = CoeffTable::new(file.dim, file.max_degree);
    for e in file.coeffs {
        table.insert(MultiIndex::new(e.alpha), Complex64::new(e.re, e.im))?;
    }
    Ok((table, file.space.unwrap_or(Space::Hermite)))
}

#[derive(Serialize, Deserialize)]
struct AxisDescriptor {
    half_width: f64,
    n: usize,
}

#[derive(Serialize, Deserialize)]
struct PhaseDescriptor {
    dim: usize,
    x_axes: Vec<AxisDescriptor>,
    xi_axes: Vec<AxisDescriptor>,
    convention: Convention,
    /// File name of the value CSV, relative to the descriptor.
    values: String,
}

fn axis_desc(a: &AxisGrid) -> AxisDescriptor {
    AxisDescriptor { half_width: a.half_width(), n: a.len() }
}

fn axes_from(desc: &[AxisDescriptor]) -> Result<Vec<AxisGrid>> {
    desc.iter().map(|a| AxisGrid::new(a.half_width, a.n)).collect()
}

fn fmt_f(v: f64) -> String {
    // Shortest round-trip representation.
    format!("{v:?}")
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(format!("CSV: {e}"))
}

/// Renders a header and rows of cells as CSV text.
fn render_csv(header: &[String], rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    // Writing into memory cannot fail.
    w.write_record(header).expect("in-memory CSV write");
    for row in rows {
        w.write_record(&row).expect("in-memory CSV write");
    }
    String::from_utf8(w.into_inner().expect("in-memory CSV flush")).expect("CSV output is UTF-8")
}

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes())
}

fn complex_cells(v: &Complex64) -> [String; 2] {
    [fmt_f(v.re), fmt_f(v.im)]
}

/// Row-major CSV with header `x, xi, re, im` (`x1, x2, xi1, xi2, re, im` at
/// d = 2).
pub fn phase_field_csv(f: &PhaseField) -> String {
    let pg = f.grid();
    let d = pg.dim();
    let mut header: Vec<String> = if d == 1 {
        vec!["x".into(), "xi".into()]
    } else {
        (1..=d).map(|k| format!("x{k}")).chain((1..=d).map(|k| format!("xi{k}"))).collect()
    };
    header.extend(["re".into(), "im".into()]);
    render_csv(
        &header,
        f.values().iter().enumerate().map(|(k, v)| {
            let (x, xi) = pg.node(k);
            x.iter().chain(&xi).map(|&t| fmt_f(t)).chain(complex_cells(v)).collect()
        }),
    )
}

/// Writes `<base>.json` (grid descriptor) and `<base>.csv` (values).
/// Returns both paths.
pub fn write_phase_field(f: &PhaseField, base: &Path) -> Result<(PathBuf, PathBuf)> {
    let json_path = base.with_extension("json");
    let csv_path = base.with_extension("csv");
    let pg = f.grid();
    let desc = PhaseDescriptor {
        dim: pg.dim(),
        x_axes: pg.x_axes().iter().map(axis_desc).collect(),
        xi_axes: pg.xi_axes().iter().map(axis_desc).collect(),
        convention: f.convention(),
        values: csv_path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
    };
    fs::write(&json_path, serde_json::to_string_pretty(&desc)?)?;
    fs::write(&csv_path, phase_field_csv(f))?;
    Ok((json_path, csv_path))
}

/// Reads a field written by [`write_phase_field`] from its descriptor path.
pub fn read_phase_field(json_path: &Path) -> Result<PhaseField> {
    let desc: PhaseDescriptor = serde_json::from_str(&fs::read_to_string(json_path)?)?;
    let pg = PhaseGrid::new(axes_from(&desc.x_axes)?, axes_from(&desc.xi_axes)?)?;
    let csv_path = json_path.parent().unwrap_or(Path::new(".")).join(&desc.values);
    let (_, rows) = read_rows(&fs::read_to_string(&csv_path)?, Some(2 * pg.dim() + 2))?;
    if rows.len() != pg.len() {
        return Err(Error::Parse(format!("{} rows for {} grid nodes", rows.len(), pg.len())));
    }
    let n = 2 * pg.dim();
    let values = rows.iter().map(|r| Complex64::new(r[n], r[n + 1])).collect();
    PhaseField::new(pg, values, desc.convention)
}

/// Header width and numeric rows of a CSV; every row must have `width`
/// columns when given, else as many as the header.
fn read_rows(text: &str, width: Option<usize>) -> Result<(usize, Vec<Vec<f64>>)> {
    let mut rdr = reader(text);
    let header_len = rdr.headers().map_err(csv_err)?.len();
    if header_len == 0 {
        return Err(Error::Parse("empty CSV".into()));
    }
    let width = width.unwrap_or(header_len);
    let rows = rdr
        .records()
        .enumerate()
        .map(|(i, rec)| {
            let rec = rec.map_err(csv_err)?;
            if rec.len() != width {
                return Err(Error::Parse(format!("row {}: expected {width} columns, found {}", i + 1, rec.len())));
            }
            rec.iter()
                .map(|c| parse_f64(c).map_err(|_| Error::Parse(format!("row {}: bad number {c:?}", i + 1))))
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok((header_len, rows))
}

fn parse_f64(s: &str) -> std::result::Result<f64, std::num::ParseFloatError> {
    match s {
        "inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        _ => s.parse(),
    }
}

/// Signal CSV with header `x, re, im` (`x1, x2, re, im` at d = 2).
pub fn signal_csv(f: &Signal) -> String {
    let g = f.grid();
    let mut header: Vec<String> = if g.rank() == 1 { vec!["x".into()] } else { (1..=g.rank()).map(|k| format!("x{k}")).collect() };
    header.extend(["re".into(), "im".into()]);
    render_csv(
        &header,
        f.values().iter().enumerate().map(|(k, v)| g.point(k).iter().map(|&t| fmt_f(t)).chain(complex_cells(v)).collect()),
    )
}

pub fn write_signal_csv(f: &Signal, path: &Path) -> Result<()> {
    fs::write(path, signal_csv(f))?;
    Ok(())
}

/// Parses a signal CSV. The coordinate columns must form a full symmetric
/// grid with an odd number of equally spaced nodes per axis, listed
/// row-major.
pub fn parse_signal_csv(text: &str) -> Result<Signal> {
    let (width, rows) = read_rows(text, None)?;
    if !(3..=4).contains(&width) {
        return Err(Error::Parse(format!("signal CSV needs 3 or 4 columns, found {width}")));
    }
    if rows.is_empty() {
        return Err(Error::Parse("signal CSV has no rows".into()));
    }
    let rank = width - 2;
    let axes: Vec<AxisGrid> = (0..rank)
        .map(|a| {
            let mut coords: Vec<f64> = rows.iter().map(|r| r[a]).collect();
            coords.sort_by(f64::total_cmp);
            coords.dedup_by(|x, y| (*x - *y).abs() <= 1e-9 * x.abs().max(1.0));
            let n = coords.len();
            let (lo, hi) = (coords[0], coords[n - 1]);
            if (lo + hi).abs() > 1e-9 * hi.abs().max(1.0) {
                return Err(Error::Parse(format!("axis {a} is not symmetric about 0: [{lo}, {hi}]")));
            }
            let ax = AxisGrid::new(hi, n).map_err(|e| Error::Parse(format!("axis {a}: {e}")))?;
            if coords.iter().enumerate().any(|(i, &c)| (c - ax.node(i)).abs() > 1e-6 * ax.spacing()) {
                return Err(Error::Parse(format!("axis {a} is not equally spaced")));
            }
            Ok(ax)
        })
        .collect::<Result<_>>()?;
    let grid = ProductGrid::new(axes)?;
    if rows.len() != grid.len() {
        return Err(Error::Parse(format!("{} rows for a {}-node grid", rows.len(), grid.len())));
    }
    for (k, r) in rows.iter().enumerate() {
        let p = grid.point(k);
        if p.iter().zip(r).any(|(a, b)| (a - b).abs() > 1e-6 * grid.axes()[0].spacing()) {
            return Err(Error::Parse(format!("row {} is out of row-major order", k + 1)));
        }
    }
    let values = rows.iter().map(|r| Complex64::new(r[rank], r[rank + 1])).collect();
    Signal::new(grid, values)
}

pub fn read_signal_csv(path: &Path) -> Result<Signal> {
    parse_signal_csv(&fs::read_to_string(path)?)
}

/// Complex points from a CSV with columns `re, im`.
pub fn parse_points_csv(text: &str) -> Result<Vec<Complex64>> {
    let (_, rows) = read_rows(text, Some(2))?;
    Ok(rows.iter().map(|r| Complex64::new(r[0], r[1])).collect())
}

pub fn write_ball_cover(cover: &BallCover, path: &Path) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(cover)?)?;
    Ok(())
}

pub fn read_ball_cover(path: &Path) -> Result<BallCover> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

/// One line of a norm report.
#[derive(Clone, Debug, PartialEq)]
pub struct NormRow {
    pub name: String,
    pub p: f64,
    pub q: f64,
    pub weight: String,
    pub value: f64,
}

pub const NORM_HEADER: [&str; 5] = ["name", "p", "q", "weight", "value"];

fn fmt_exp(v: f64) -> String {
    if v.is_infinite() {
        "inf".into()
    } else {
        fmt_f(v)
    }
}

impl NormRow {
    fn cells(&self) -> [String; 5] {
        [self.name.clone(), fmt_exp(self.p), fmt_exp(self.q), self.weight.clone(), fmt_f(self.value)]
    }
}

/// Appends a row, writing the header first if the file is new or empty.
pub fn append_norm_row(path: &Path, row: &NormRow) -> Result<()> {
    let fresh = fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let file = fs::OpenOptions::new().create(true).append(true).open(path)?;
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(file);
    if fresh {
        w.write_record(NORM_HEADER).map_err(csv_err)?;
    }
    w.write_record(row.cells()).map_err(csv_err)?;
    w.flush()?;
    Ok(())
}

pub fn read_norm_rows(path: &Path) -> Result<Vec<NormRow>> {
    let text = fs::read_to_string(path)?;
    reader(&text)
        .records()
        .map(|rec| {
            let rec = rec.map_err(csv_err)?;
            if rec.len() != 5 {
                return Err(Error::Parse(format!("norm row {rec:?} needs 5 columns")));
            }
            let num = |s: &str| parse_f64(s).map_err(|_| Error::Parse(format!("bad number {s:?}")));
            Ok(NormRow { name: rec[0].into(), p: num(&rec[1])?, q: num(&rec[2])?, weight: rec[3].into(), value: num(&rec[4])? })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::build_ball_cover;
    use crate::hermite::{hermite_synthesize, HermiteExpansion};
    use rand::SeedableRng;

    #[test]
    fn coeff_json_round_trip_and_order() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let t = CoeffTable::random(&mut rng, 2, 3);
        let text = coeffs_to_json(&t, Space::Hermite).unwrap();
        assert!(!text.contains("space"));
        let (back, space) = coeffs_from_json(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(space, Space::Hermite);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let alphas: Vec<Vec<u64>> = v["coeffs"]
            .as_array()
            .unwrap()
            .iter()
            .map(|e| e["alpha"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect())
            .collect();
        assert_eq!(&alphas[..4], &[vec![0, 0], vec![0, 1], vec![1, 0], vec![0, 2]]);

        let fock = coeffs_to_json(&t, Space::Fock).unwrap();
        assert!(fock.contains("\"space\": \"fock\""));
        assert_eq!(coeffs_from_json(&fock).unwrap().1, Space::Fock);
        assert!(coeffs_from_json("{\"dim\": 1, \"max_degree\": 2, \"coeffs\": [{\"alpha\": [3], \"re\": 1, \"im\": 0}]}").is_err());
    }

    #[test]
    fn phase_field_round_trip() {
        let dir = std::env::temp_dir().join(format!("bfock-io-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let pg = PhaseGrid::square(1, 2.0, 5).unwrap();
        let f = PhaseField::from_fn(pg, |x, xi| Complex64::new(x[0] + 0.1, xi[0] / 3.0));
        let (j, c) = write_phase_field(&f, &dir.join("field")).unwrap();
        let back = read_phase_field(&j).unwrap();
        assert_eq!(back, f);
        let csv = fs::read_to_string(c).unwrap();
        assert!(csv.starts_with("x,xi,re,im\n-2.0,-2.0,"));
        fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn signal_csv_round_trip() {
        let g = ProductGrid::new(vec![AxisGrid::new(6.0, 61).unwrap()]).unwrap();
        let f = hermite_synthesize(&HermiteExpansion::basis(vec![3]), &g).unwrap();
        let back = parse_signal_csv(&signal_csv(&f)).unwrap();
        assert_eq!(back, f);
        let ax = AxisGrid::new(2.0, 5).unwrap();
        let g2 = ProductGrid::new(vec![ax, ax]).unwrap();
        let f2 = Signal::from_fn(g2, |x| Complex64::new(x[0], x[1])).unwrap();
        assert_eq!(parse_signal_csv(&signal_csv(&f2)).unwrap(), f2);
    }

    #[test]
    fn signal_csv_rejects_bad_grids() {
        assert!(parse_signal_csv("x,re,im\n-1,0,0\n0,0,0\n2,0,0\n").is_err());
        assert!(parse_signal_csv("x,re,im\n0,0,0\n1,0,0\n").is_err());
        assert!(parse_signal_csv("x,re,im\n-1,0\n").is_err());
        assert!(parse_signal_csv("").is_err());
        assert!(parse_signal_csv("x,re,im\n").is_err());
        assert!(parse_signal_csv("x,re,im\n-1,0,0\n0,a,0\n1,0,0\n").is_err());
    }

    #[test]
    fn cover_and_norm_files() {
        let dir = std::env::temp_dir().join(format!("bfock-io2-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let cover = build_ball_cover(5.0, 1).unwrap();
        write_ball_cover(&cover, &dir.join("cover.json")).unwrap();
        assert_eq!(read_ball_cover(&dir.join("cover.json")).unwrap(), cover);

        let path = dir.join("norms.csv");
        let row = NormRow { name: "mod".into(), p: 2.0, q: f64::INFINITY, weight: "sigma_2".into(), value: 1.5 };
        append_norm_row(&path, &row).unwrap();
        append_norm_row(&path, &row).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().next().unwrap(), NORM_HEADER.join(","));
        assert_eq!(text.lines().nth(1).unwrap(), "mod,2.0,inf,sigma_2,1.5");
        assert_eq!(read_norm_rows(&path).unwrap(), vec![row.clone(), row]);
        fs::remove_dir_all(dir).unwrap();
    }
}
