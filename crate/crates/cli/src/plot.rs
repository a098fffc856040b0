//! gnuplot scripts for the CSV outputs. Disturbed curves are solid, the
//! undisturbed reference is dashed.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub struct Curve {
    pub file: PathBuf,
    pub x: usize,
    pub y: usize,
    pub title: &'static str,
    pub dashed: bool,
}

impl Curve {
    pub fn solid(file: &Path, x: usize, y: usize, title: &'static str) -> Self {
        Self {
            file: file.to_path_buf(),
            x,
            y,
            title,
            dashed: false,
        }
    }

    pub fn dashed(file: &Path, x: usize, y: usize, title: &'static str) -> Self {
        Self {
            dashed: true,
            ..Self::solid(file, x, y, title)
        }
    }
}

fn quote(path: &Path) -> String {
    format!("'{}'", path.display().to_string().replace('\'', "''"))
}

/// Script path for a CSV: same stem, `.gp` extension.
pub fn script_path(csv: &Path) -> PathBuf {
    csv.with_extension("gp")
}

pub fn script(csv: &Path, xlabel: &str, ylabel: &str, curves: &[Curve]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "set terminal svg size 800,600 enhanced");
    let _ = writeln!(s, "set output {}", quote(&csv.with_extension("svg")));
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set key top right");
    let _ = writeln!(s, "set xlabel '{xlabel}'");
    let _ = writeln!(s, "set ylabel '{ylabel}'");
    let items: Vec<String> = curves
        .iter()
        .map(|c| {
            format!(
                "{} every ::1 using {}:{} with lines lw 2 lc rgb '{}' dt {} title '{}'",
                quote(&c.file),
                c.x,
                c.y,
                if c.dashed { "#cc0000" } else { "#000000" },
                if c.dashed { 2 } else { 1 },
                c.title
            )
        })
        .collect();
    let _ = writeln!(s, "plot {}", items.join(", \\\n     "));
    s
}
