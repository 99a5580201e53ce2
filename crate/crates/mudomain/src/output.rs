//! Plot-ready CSV files. Numbers carry 12 significant digits.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use mudomain_core::domain::BoundaryCurve;
use mudomain_core::montecarlo::ExitSample;
use mudomain_core::spectral::FourierCoefficients;

/// Fixed 12-significant-digit scientific notation.
pub fn num(x: f64) -> String {
    format!("{x:.11e}")
}

fn create(path: &Path) -> io::Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

/// `n,a_n` for n = 1..N.
pub fn write_coefficients(path: &Path, c: &FourierCoefficients) -> io::Result<()> {
    let mut w = create(path)?;
    writeln!(w, "n,a_n")?;
    for (i, a) in c.as_slice().iter().enumerate() {
        writeln!(w, "{},{}", i + 1, num(*a))?;
    }
    w.flush()
}

/// `theta,x,y,method,flag`, flag 1 marking the ends of excised blow-ups.
pub fn write_boundary(path: &Path, curve: &BoundaryCurve) -> io::Result<()> {
    let mut w = create(path)?;
    writeln!(w, "theta,x,y,method,flag")?;
    for p in curve.points() {
        writeln!(w, "{},{},{},{},{}", num(p.theta), num(p.x), num(p.y), p.method.label(), u8::from(p.unbounded))?;
    }
    w.flush()
}

/// `path,x,y,steps,censored`.
pub fn write_exits(path: &Path, samples: &[ExitSample]) -> io::Result<()> {
    let mut w = create(path)?;
    writeln!(w, "path,x,y,steps,censored")?;
    for s in samples {
        writeln!(
            w,
            "{},{},{},{},{}",
            s.path_index,
            num(s.exit_point.re),
            num(s.exit_point.im),
            s.steps_taken,
            u8::from(s.censored)
        )?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(num(1.0 / 3.0), "3.33333333333e-1");
        assert_eq!(num(-0.742453745421544), "-7.42453745422e-1");
        assert_eq!(num(0.0), "0.00000000000e0");
    }
}
