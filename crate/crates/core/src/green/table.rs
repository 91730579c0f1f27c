use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::LatticeVector;
use crate::error::{invalid, Result};
use crate::scalar::{to_f64, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GreenMethod {
    BesselIntegral,
    FftGrid,
}

/// Tabulated `R_r(x)` for `|x| ≤ radius`, stored on octahedral representatives.
#[derive(Debug, Clone, PartialEq)]
pub struct GreenTable<T> {
    pub estar: T,
    pub radius: u32,
    pub method: GreenMethod,
    /// Grid size per axis (FFT tables only).
    pub grid_size: Option<usize>,
    /// Relative tolerance (Bessel) or periodization bound (FFT).
    pub tolerance: f64,
    values: BTreeMap<[u32; 3], T>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Header {
    estar: f64,
    method: GreenMethod,
    tolerance: f64,
    radius: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    grid_size: Option<usize>,
    /// Rows list only representatives `0 ≤ x1 ≤ x2 ≤ x3`.
    symmetry_reduced: bool,
}

impl<T: Scalar> GreenTable<T> {
    pub fn from_canonical(
        estar: T,
        radius: u32,
        method: GreenMethod,
        grid_size: Option<usize>,
        tolerance: f64,
        values: BTreeMap<[u32; 3], T>,
    ) -> Self {
        GreenTable {
            estar,
            radius,
            method,
            grid_size,
            tolerance,
            values,
        }
    }

    /// `R_r(x)`, or `None` outside the tabulated ball.
    pub fn get(&self, x: LatticeVector) -> Option<T> {
        self.values.get(&x.canonical()).copied()
    }

    /// `R_r(x)`; panics outside the ball.
    pub fn value(&self, x: LatticeVector) -> T {
        self.get(x)
            .unwrap_or_else(|| panic!("{x:?} outside green table of radius {}", self.radius))
    }

    pub fn canonical_entries(&self) -> impl Iterator<Item = ([u32; 3], T)> + '_ {
        self.values.iter().map(|(k, v)| (*k, *v))
    }

    pub fn len_canonical(&self) -> usize {
        self.values.len()
    }

    /// Smallest `K` with `R_r(x) ≤ K/(|x|+1)` over the table.
    pub fn fitted_k(&self) -> T {
        self.values
            .iter()
            .map(|(k, v)| {
                let n = LatticeVector([k[0] as i64, k[1] as i64, k[2] as i64]).norm();
                *v * T::from(n + 1.0).unwrap()
            })
            .fold(T::zero(), |a, b| a.max(b))
    }

    /// CSV with a leading `# {json header}` line and columns `x1,x2,x3,value`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let header = Header {
            estar: to_f64(self.estar),
            method: self.method,
            tolerance: self.tolerance,
            radius: self.radius,
            grid_size: self.grid_size,
            symmetry_reduced: true,
        };
        writeln!(w, "# {}", serde_json::to_string(&header)?)?;
        writeln!(w, "x1,x2,x3,value")?;
        for (k, v) in &self.values {
            writeln!(w, "{},{},{},{:.17e}", k[0], k[1], k[2], to_f64(*v))?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let first = lines.next().ok_or_else(|| invalid("empty green table"))??;
        let json = first
            .strip_prefix("# ")
            .ok_or_else(|| invalid("missing json header line"))?;
        let header: Header = serde_json::from_str(json)?;
        let cols = lines.next().ok_or_else(|| invalid("missing column line"))??;
        if cols.trim() != "x1,x2,x3,value" {
            return Err(invalid(format!("unexpected columns {cols:?}")));
        }
        let mut values = BTreeMap::new();
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 4 {
                return Err(invalid(format!("bad row {line:?}")));
            }
            let parse_i =
                |s: &str| -> Result<i64> { s.trim().parse().map_err(|_| invalid(format!("bad coordinate {s:?}"))) };
            let x = LatticeVector([parse_i(f[0])?, parse_i(f[1])?, parse_i(f[2])?]);
            let v: f64 = f[3]
                .trim()
                .parse()
                .map_err(|_| invalid(format!("bad value {:?}", f[3])))?;
            values.insert(x.canonical(), T::from(v).unwrap());
        }
        Ok(GreenTable {
            estar: T::from(header.estar).unwrap(),
            radius: header.radius,
            method: header.method,
            grid_size: header.grid_size,
            tolerance: header.tolerance,
            values,
        })
    }
}
