use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sieve::{stream_squarefree, DEFAULT_SEGMENT};

/// A grid value `t = num/den` with the decimal text it was parsed from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridPoint {
    pub num: u64,
    pub den: u64,
    pub text: String,
}

impl GridPoint {
    /// Parses a nonnegative decimal such as `0.651` exactly.
    pub fn parse(s: &str) -> Result<Self> {
        let (num, den) = parse_decimal(s)?;
        Ok(Self {
            num,
            den,
            text: s.trim().to_string(),
        })
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn parse_decimal(s: &str) -> Result<(u64, u64)> {
    let s = s.trim();
    let bad = || Error::InvalidArgument(format!("not a nonnegative decimal: {s:?}"));
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if int.is_empty() && frac.is_empty()
        || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
        || frac.len() > 18
    {
        return Err(bad());
    }
    let den = 10u64.pow(frac.len() as u32);
    let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
    let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
    let num = int.checked_mul(den).and_then(|x| x.checked_add(frac)).ok_or_else(bad)?;
    Ok((num, den))
}

/// Expands `start:end:step` (decimals) into the exact points
/// `start + k·step ≤ end`, printed with as many decimals as the widest of
/// the three inputs.
pub fn parse_grid(spec: &str) -> Result<Vec<GridPoint>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [a, b, step] = parts[..] else {
        return Err(Error::InvalidArgument(format!("grid must be start:end:step, got {spec:?}")));
    };
    let decimals = [a, b, step]
        .iter()
        .map(|s| s.trim().split_once('.').map_or(0, |(_, f)| f.len()))
        .max()
        .unwrap_or(0);
    let den = 10u64.pow(decimals as u32);
    let scale = |s: &str| -> Result<u64> {
        let (num, d) = parse_decimal(s)?;
        Ok(num * (den / d))
    };
    let (a, b, step) = (scale(a)?, scale(b)?, scale(step)?);
    if step == 0 || a > b || b > den {
        return Err(Error::InvalidArgument(format!(
            "grid needs 0 <= start <= end <= 1 and step > 0, got {spec:?}"
        )));
    }
    let points = (b - a) / step + 1;
    if points > 10_000_000 {
        return Err(Error::ResourceLimit(format!("grid has {points} points")));
    }
    Ok((0..points)
        .map(|k| {
            let num = a + k * step;
            let text = if decimals == 0 {
                num.to_string()
            } else {
                format!("{}.{:0width$}", num / den, num % den, width = decimals)
            };
            GridPoint { num, den, text }
        })
        .collect())
}

/// One row of the empirical distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdfPoint {
    pub t: GridPoint,
    pub count: u64,
    pub total: u64,
}

impl CdfPoint {
    pub fn probability(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.count as f64 / self.total as f64
        }
    }
}

/// For each grid point `t`, the number of odd squarefree `ℓ ≤ n` with
/// `f(ℓ) ≤ t`, by the exact comparison `ℓ·den ≤ num·∏(p+1)`.
///
/// The grid must be ascending.
pub fn empirical_f_cdf(n: u64, grid: &[GridPoint]) -> Result<Vec<CdfPoint>> {
    if n < 1 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    let ascending = grid
        .windows(2)
        .all(|w| u128::from(w[0].num) * u128::from(w[1].den) <= u128::from(w[1].num) * u128::from(w[0].den));
    if !ascending {
        return Err(Error::InvalidArgument("grid must be ascending".into()));
    }
    // bucket[i]: ℓ whose smallest grid point with f ≤ t is grid[i]
    let mut bucket = vec![0u64; grid.len() + 1];
    let mut total = 0u64;
    for ell in stream_squarefree(1, n, DEFAULT_SEGMENT).filter(|f| !f.is_even()) {
        total += 1;
        let lhs = u128::from(ell.value());
        let rhs: u128 = ell.primes().iter().map(|&p| u128::from(p) + 1).product();
        let at = grid.partition_point(|t| lhs * u128::from(t.den) > u128::from(t.num) * rhs);
        bucket[at] += 1;
    }
    let mut running = 0;
    Ok(grid
        .iter()
        .zip(&bucket)
        .map(|(t, b)| {
            running += b;
            CdfPoint {
                t: t.clone(),
                count: running,
                total,
            }
        })
        .collect())
}

/// CSV with header `t,probability`.
pub fn write_cdf_csv<W: Write>(mut w: W, points: &[CdfPoint]) -> Result<()> {
    writeln!(w, "t,probability")?;
    for p in points {
        writeln!(w, "{},{}", p.t.text, p.probability())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g = parse_grid("0:1:0.25").unwrap();
        let texts: Vec<&str> = g.iter().map(|p| p.text.as_str()).collect();
        assert_eq!(texts, ["0.00", "0.25", "0.50", "0.75", "1.00"]);
        assert_eq!(parse_grid("0:1:0.001").unwrap().len(), 1001);
        let g = parse_grid("0.1:0.3:0.1").unwrap();
        assert_eq!((g[2].num, g[2].den), (3, 10));
        assert!(parse_grid("0:2:0.5").is_err());
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("a:1:0.1").is_err());
        assert!(GridPoint::parse("-0.5").is_err());
        assert_eq!(GridPoint::parse(".5").unwrap().to_f64(), 0.5);
    }

    #[test]
    fn small_distribution() {
        let grid = vec![GridPoint::parse("0.625").unwrap(), GridPoint::parse("0.65").unwrap(), GridPoint::parse("1").unwrap()];
        let cdf = empirical_f_cdf(15, &grid).unwrap();
        // f(15) = 5/8 exactly: included at the boundary
        assert_eq!(cdf[0].count, 1);
        assert_eq!((cdf[1].count, cdf[1].total), (1, 7));
        assert_eq!(cdf[2].probability(), 1.0);
        let desc = vec![GridPoint::parse("0.7").unwrap(), GridPoint::parse("0.6").unwrap()];
        assert!(empirical_f_cdf(15, &desc).is_err());
    }

    #[test]
    fn monotone_and_csv() {
        let grid = parse_grid("0:1:0.01").unwrap();
        let cdf = empirical_f_cdf(100_000, &grid).unwrap();
        assert!(cdf.windows(2).all(|w| w[0].count <= w[1].count));
        assert_eq!(cdf[0].count, 0);
        assert_eq!(cdf.last().unwrap().probability(), 1.0);
        for p in &cdf {
            let t = p.t.to_f64();
            if t <= 0.66 {
                assert!(p.probability() <= t / 2.0, "t={t}");
            }
        }
        let mut out = Vec::new();
        write_cdf_csv(&mut out, &cdf[..2]).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "t,probability\n0.00,0\n0.01,0\n");
    }
}
