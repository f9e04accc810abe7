use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// ε(iξ) sampled on the imaginary axis, interpolated with a monotone
/// piecewise-cubic Hermite scheme (Fritsch–Carlson slopes).
///
/// Outside the sampled range the end values are held constant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TablePoints", into = "TablePoints")]
pub struct ImagAxisTable {
    xi: Vec<f64>,
    value: Vec<f64>,
    slope: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct TablePoints {
    points: Vec<[f64; 2]>,
}

impl TryFrom<TablePoints> for ImagAxisTable {
    type Error = Error;
    fn try_from(t: TablePoints) -> Result<Self> {
        ImagAxisTable::new(t.points.iter().map(|p| (p[0], p[1])).collect())
    }
}

impl From<ImagAxisTable> for TablePoints {
    fn from(t: ImagAxisTable) -> Self {
        TablePoints { points: t.points().map(|(x, y)| [x, y]).collect() }
    }
}

impl ImagAxisTable {
    /// Builds a table from `(ξ, ε(iξ))` pairs. Abscissae must be finite,
    /// non-negative and strictly increasing; values must be finite. Physical
    /// admissibility of the values is checked by
    /// [`validate_passivity`](super::validate_passivity).
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::validation("tabulated model needs at least two points"));
        }
        for (i, &(x, y)) in points.iter().enumerate() {
            if !x.is_finite() || x < 0.0 || !y.is_finite() {
                return Err(Error::validation(format!("table row {i}: non-finite or negative entry")));
            }
            if i > 0 && x <= points[i - 1].0 {
                return Err(Error::validation(format!("table row {i}: xi not strictly increasing")));
            }
        }
        let xi: Vec<f64> = points.iter().map(|p| p.0).collect();
        let value: Vec<f64> = points.iter().map(|p| p.1).collect();
        let slope = pchip_slopes(&xi, &value);
        Ok(Self { xi, value, slope })
    }

    /// Parses a two-column whitespace- or comma-separated text table.
    /// Lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut points = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
            if cols.len() != 2 {
                return Err(Error::validation(format!("table line {}: expected two columns", ln + 1)));
            }
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|_| Error::validation(format!("table line {}: bad number `{s}`", ln + 1)))
            };
            points.push((parse(cols[0])?, parse(cols[1])?));
        }
        Self::new(points)
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xi.iter().copied().zip(self.value.iter().copied())
    }

    pub fn first_value(&self) -> f64 {
        self.value[0]
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xi.len();
        if x <= self.xi[0] {
            return self.value[0];
        }
        if x >= self.xi[n - 1] {
            return self.value[n - 1];
        }
        let i = self.xi.partition_point(|&v| v <= x) - 1;
        let h = self.xi[i + 1] - self.xi[i];
        let t = (x - self.xi[i]) / h;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.value[i] + h10 * h * self.slope[i] + h01 * self.value[i + 1] + h11 * h * self.slope[i + 1]
    }
}

fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    if n == 2 {
        return vec![delta[0]; 2];
    }
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        if delta[i - 1] * delta[i] > 0.0 {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d.signum() != d0.signum() {
        0.0
    } else if d0.signum() != d1.signum() && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reproduces_nodes() {
        let t = ImagAxisTable::new(vec![(0.0, 5.0), (1.0, 3.0), (2.0, 2.5), (4.0, 1.0)]).unwrap();
        for (x, y) in t.points() {
            assert!((t.eval(x) - y).abs() < 1e-14);
        }
        assert_eq!(t.eval(10.0), 1.0);
    }

    #[test]
    fn rejects_unsorted() {
        assert!(ImagAxisTable::new(vec![(1.0, 2.0), (1.0, 1.5)]).is_err());
        assert!(ImagAxisTable::new(vec![(1.0, 2.0)]).is_err());
    }

    #[test]
    fn parses_text() {
        let t = ImagAxisTable::parse("# xi eps\n0 4\n1e14, 3\n2e14 2\n").unwrap();
        assert_eq!(t.points().count(), 3);
        assert!(ImagAxisTable::parse("0 1 2\n").is_err());
    }

    proptest! {
        #[test]
        fn monotone_data_gives_monotone_interpolant(
            steps in prop::collection::vec((0.1f64..3.0, 0.0f64..2.0), 3..12),
            probes in prop::collection::vec(0.0f64..1.0, 20),
        ) {
            let mut x = 0.0;
            let mut y = 1.0 + steps.iter().map(|s| s.1).sum::<f64>();
            let mut pts = Vec::new();
            for (dx, dy) in &steps {
                pts.push((x, y));
                x += dx;
                y -= dy;
            }
            let t = ImagAxisTable::new(pts).unwrap();
            let mut zs: Vec<f64> = probes.iter().map(|p| p * x).collect();
            zs.sort_by(f64::total_cmp);
            for w in zs.windows(2) {
                prop_assert!(t.eval(w[1]) <= t.eval(w[0]) + 1e-12);
            }
        }
    }
}
