//! File formats: sample and potential CSVs, and fixed-precision floats for
//! JSON output.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::Serializer;
use serde_json::value::RawValue;

use crate::error::{Error, Result};
use crate::numeric::Potential;
use crate::sfit::SSampleSet;

/// A float with 17 significant digits, e.g. `1.5000000000000000e0`.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".into()
    }
}

/// `serialize_with` helper writing [`fmt17`] as a JSON number.
pub fn f17<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    let raw = RawValue::from_string(fmt17(*x)).map_err(serde::ser::Error::custom)?;
    serde::Serialize::serialize(&raw, s)
}

/// Columns `sqrt_lambda,re_S,im_S`. The noise level is estimated from the
/// deviation of `|S|` from one.
pub fn read_samples_csv<R: Read>(r: R) -> Result<SSampleSet> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    let headers = rdr.headers()?.clone();
    let want = ["sqrt_lambda", "re_S", "im_S"];
    if headers.len() < 3 || headers.iter().zip(want).any(|(h, w)| h != w) {
        return Err(Error::InvalidSamples(format!("expected header {}", want.join(","))));
    }
    let mut points = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let num = |i: usize| -> Result<f64> {
            rec.get(i)
                .and_then(|x| x.parse().ok())
                .ok_or_else(|| Error::InvalidSamples(format!("bad number in row {:?}", rec.position().map(|p| p.line()))))
        };
        points.push((num(0)?, Complex64::new(num(1)?, num(2)?)));
    }
    SSampleSet::with_estimated_noise(points)
}

pub fn write_samples_csv<W: Write>(w: W, set: &SSampleSet) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["sqrt_lambda", "re_S", "im_S"])?;
    for (k, s) in set.points() {
        wtr.write_record([fmt17(*k), fmt17(s.re), fmt17(s.im)])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Columns `x,q`, uniformly spaced from `x = 0` to `x = l`.
pub fn read_potential_csv<R: Read>(r: R) -> Result<Potential<f64>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    let mut xs = Vec::new();
    let mut qs = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let num = |i: usize| -> Result<f64> {
            rec.get(i)
                .and_then(|x| x.parse().ok())
                .ok_or_else(|| Error::InvalidPotential("bad number".into()))
        };
        xs.push(num(0)?);
        qs.push(num(1)?);
    }
    if xs.len() < 2 {
        return Err(Error::InvalidPotential("need at least two rows".into()));
    }
    let l = *xs.last().expect("non-empty");
    let h = l / (xs.len() - 1) as f64;
    let uniform = xs.iter().enumerate().all(|(i, &x)| (x - i as f64 * h).abs() <= 1e-9 * l.abs().max(1.0));
    if xs[0] != 0.0 || !uniform {
        return Err(Error::InvalidPotential("x must be uniformly spaced from 0".into()));
    }
    Potential::new(qs, l)
}

pub fn write_potential_csv<W: Write>(w: W, q: &Potential<f64>) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["x", "q"])?;
    let h = q.l() / q.intervals() as f64;
    for (i, v) in q.samples().iter().enumerate() {
        wtr.write_record([fmt17(i as f64 * h), fmt17(*v)])?;
    }
    wtr.flush()?;
    Ok(())
}
