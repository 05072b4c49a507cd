//! The four runnable scenarios plus the formatting helpers they share.

pub mod imag_wv;
pub mod real_wv;
pub mod sweep;
pub mod validate;

use std::path::Path;

use wva_core::measurement::{IntensityProfile, OAMScanResult};

use crate::error::Result;
use crate::output::{Csv, CsvField};

/// Filename-safe token for an angle in degrees: `7.5 -> "7p5"`,
/// `-12 -> "m12"`.
pub fn angle_token(deg: f64) -> String {
    format!("{deg}").replace('.', "p").replace('-', "m")
}

/// Writes an angular intensity profile as `phi_rad,intensity` rows.
pub fn write_profile(path: &Path, profile: &IntensityProfile) -> Result<()> {
    let mut csv = Csv::new(&["phi_rad", "intensity"]);
    let grid = profile.grid();
    for (k, &value) in profile.values().iter().enumerate() {
        csv.row(&[CsvField::Float(grid.phi(k)), CsvField::Float(value)]);
    }
    csv.write(path)
}

/// Writes an OAM scan as one row per mode index with the per-window counts
/// spread across trailing columns.
pub fn write_scan(path: &Path, scan: &OAMScanResult) -> Result<()> {
    let windows = scan.rows.first().map_or(0, |row| row.counts.len());
    let window_names: Vec<String> = (0..windows).map(|w| format!("window_{w}")).collect();
    let mut header: Vec<&str> = vec!["ell", "mean", "std"];
    header.extend(window_names.iter().map(String::as_str));

    let mut csv = Csv::new(&header);
    for row in &scan.rows {
        let mut fields: Vec<CsvField<'_>> = vec![
            CsvField::Int(row.ell as i64),
            CsvField::Float(row.mean),
            CsvField::Float(row.std),
        ];
        fields.extend(row.counts.iter().map(|&c| CsvField::Uint(c)));
        csv.row(&fields);
    }
    csv.write(path)
}
