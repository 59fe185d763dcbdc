//! JSON documents for measures, Krein functions and equilibrium results, and
//! CSV output with fifteen significant digits.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{Context, Result};
use herglotz_core::herglotz::KreinFn;
use herglotz_core::measures::Piece;
use herglotz_core::potential::EquilibriumResult;
use herglotz_core::{Interval, Measure};
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceDoc {
    pub lo: f64,
    pub hi: f64,
    pub nodes: Vec<f64>,
    /// Density samples, or the smooth factor `√((t-lo)(hi-t))·density` when
    /// `edge_singular`.
    pub values: Vec<f64>,
    pub edge_singular: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureDoc {
    pub atoms: Vec<[f64; 2]>,
    pub pieces: Vec<PieceDoc>,
}

impl From<&Measure> for MeasureDoc {
    fn from(m: &Measure) -> Self {
        Self {
            atoms: m.atoms().iter().map(|&(x, w)| [x, w]).collect(),
            pieces: m
                .pieces()
                .iter()
                .map(|p| PieceDoc {
                    lo: p.interval().lo,
                    hi: p.interval().hi,
                    nodes: p.nodes().to_vec(),
                    values: p.values().to_vec(),
                    edge_singular: p.edge_singular(),
                })
                .collect(),
        }
    }
}

impl TryFrom<&MeasureDoc> for Measure {
    type Error = herglotz_core::Error;

    fn try_from(d: &MeasureDoc) -> Result<Self, Self::Error> {
        let pieces = d
            .pieces
            .iter()
            .map(|p| Piece::from_samples(Interval::new(p.lo, p.hi)?, &p.nodes, &p.values, p.edge_singular))
            .collect::<Result<Vec<_>, _>>()?;
        Measure::new(d.atoms.iter().map(|a| (a[0], a[1])).collect(), pieces)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KreinDoc {
    pub breaks: Vec<f64>,
    pub values: Vec<f64>,
}

impl From<&KreinFn> for KreinDoc {
    fn from(xi: &KreinFn) -> Self {
        Self { breaks: xi.breaks().to_vec(), values: xi.values().to_vec() }
    }
}

impl TryFrom<&KreinDoc> for KreinFn {
    type Error = herglotz_core::Error;

    fn try_from(d: &KreinDoc) -> Result<Self, Self::Error> {
        KreinFn::new(d.breaks.clone(), d.values.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumDoc {
    pub capacity: f64,
    pub robin: f64,
    pub residual: f64,
    pub nodes_per_interval: usize,
    pub measure: MeasureDoc,
}

impl From<&EquilibriumResult> for EquilibriumDoc {
    fn from(r: &EquilibriumResult) -> Self {
        Self {
            capacity: r.capacity(),
            robin: r.robin,
            residual: r.residual,
            nodes_per_interval: r.nodes_per_interval,
            measure: MeasureDoc::from(&r.omega),
        }
    }
}

/// Complex number as `[re, im]`.
pub fn cx(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// Decimal with fifteen significant digits; scientific outside `[1e-5, 1e15)`.
pub fn sig15(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { "0".into() } else { v.to_string() };
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        format!("{:.*}", (14 - exp) as usize, v)
    } else {
        format!("{v:.14e}")
    }
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p).with_context(|| format!("cannot write {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

/// Writes a numeric table with a header row to `path`, or stdout when `None`.
pub fn write_csv<I>(path: Option<&Path>, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<f64>>,
{
    let mut w = csv::Writer::from_writer(sink(path)?);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|v| sig15(*v)))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    let mut w = sink(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("malformed JSON in {}", path.display()))
}

/// Reads a measure document, also accepting the output of `equilibrium`.
pub fn read_measure(path: &Path) -> Result<MeasureDoc> {
    let mut v: serde_json::Value = read_json(path)?;
    if let Some(inner) = v.get_mut("measure") {
        v = inner.take();
    }
    serde_json::from_value(v).with_context(|| format!("malformed measure in {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_digits() {
        assert_eq!(sig15(0.5), "0.500000000000000");
        assert_eq!(sig15(-2.0), "-2.00000000000000");
        assert_eq!(sig15(1.0 / 3.0), "0.333333333333333");
        assert_eq!(sig15(1234.5), "1234.50000000000");
        assert_eq!(sig15(1e-7), "1.00000000000000e-7");
        assert_eq!(sig15(0.0), "0");
    }

    #[test]
    fn measure_round_trip() {
        let m = Measure::new(vec![(0.5, 0.25)], Measure::arcsine(-2.0, 2.0).unwrap().pieces().to_vec()).unwrap();
        let doc = MeasureDoc::from(&m);
        let text = serde_json::to_string(&doc).unwrap();
        let back = Measure::try_from(&serde_json::from_str::<MeasureDoc>(&text).unwrap()).unwrap();
        assert_eq!(back.atoms(), m.atoms());
        assert!((back.total_mass() - 1.25).abs() < 1e-14);
        assert!((back.density(0.3) - m.density(0.3)).abs() < 1e-14);
    }

    #[test]
    fn krein_round_trip() {
        let xi = KreinFn::new(vec![-1.0, 1.0], vec![0.0, 0.5, 1.0]).unwrap();
        let doc = KreinDoc::from(&xi);
        assert_eq!(serde_json::to_string(&doc).unwrap(), r#"{"breaks":[-1.0,1.0],"values":[0.0,0.5,1.0]}"#);
        assert_eq!(KreinFn::try_from(&doc).unwrap(), xi);
    }
}
