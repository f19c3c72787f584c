//! Tables and their CSV/SVG renderings.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// A named numeric table. The first column is the abscissa.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Plot on a log10 axis (non-positive values are clamped).
    pub log_plot: bool,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Self { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new(), log_plot: false }
    }

    pub fn log_scale(mut self) -> Self {
        self.log_plot = true;
        self
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    /// Row whose first entry equals `x`.
    pub fn row_at(&self, x: f64) -> Option<&[f64]> {
        self.rows.iter().find(|r| r[0] == x).map(|r| r.as_slice())
    }

    fn render(&self, cell: impl Fn(usize, f64) -> String) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().enumerate().map(|(j, &v)| cell(j, v)).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    /// Four decimals; integral abscissae print as integers.
    pub fn to_csv(&self) -> String {
        let int_x = self.rows.iter().all(|r| r[0].fract() == 0.0 && r[0].abs() < 1e15);
        self.render(|j, v| if j == 0 && int_x { format!("{}", v as i64) } else { format!("{v:.4}") })
    }

    /// Seventeen significant digits.
    pub fn to_full_csv(&self) -> String {
        self.render(|_, v| format!("{v:.16e}"))
    }

    /// Line plot of every column against the first.
    pub fn to_svg(&self) -> String {
        const W: f64 = 640.0;
        const H: f64 = 400.0;
        const PAD: f64 = 50.0;
        const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
        let ty = |v: f64| if self.log_plot { v.abs().max(1e-16).log10() } else { v };
        let finite = |v: &f64| v.is_finite();
        let xs: Vec<f64> = self.rows.iter().map(|r| r[0]).collect();
        let ys: Vec<f64> = self.rows.iter().flat_map(|r| r[1..].iter().map(|&v| ty(v))).filter(finite).collect();
        let (x0, x1) = bounds(&xs);
        let (y0, y1) = bounds(&ys);
        let px = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
        let py = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);
        let mut s = String::new();
        let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
        let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<path d="M{PAD} {PAD} L{PAD} {b} L{r} {b}" fill="none" stroke="black"/>"#,
            b = H - PAD,
            r = W - PAD
        );
        let yl = if self.log_plot { "log10 " } else { "" };
        let _ = writeln!(s, r#"<text x="{PAD}" y="{}" font-size="12">{}: {:.4} .. {:.4}</text>"#, H - 15.0, self.columns[0], x0, x1);
        let _ = writeln!(s, r#"<text x="{PAD}" y="30" font-size="12">{yl}{:.4} .. {:.4}</text>"#, y0, y1);
        for (j, name) in self.columns.iter().enumerate().skip(1) {
            let color = COLORS[(j - 1) % COLORS.len()];
            let pts: Vec<String> = self
                .rows
                .iter()
                .filter(|r| ty(r[j]).is_finite())
                .map(|r| format!("{:.2},{:.2}", px(r[0]), py(ty(r[j]))))
                .collect();
            let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#, pts.join(" "));
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" font-size="12" fill="{color}">{name}</text>"#,
                W - PAD - 150.0,
                PAD + 15.0 * j as f64
            );
        }
        s.push_str("</svg>\n");
        s
    }

    /// Writes `<name>.csv`, `<name>.full.csv` and `<name>.svg` into `dir`.
    pub fn write(&self, dir: &Path) -> std::io::Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let files = [
            (format!("{}.csv", self.name), self.to_csv()),
            (format!("{}.full.csv", self.name), self.to_full_csv()),
            (format!("{}.svg", self.name), self.to_svg()),
        ];
        let mut out = Vec::new();
        for (f, text) in files {
            let p = dir.join(f);
            std::fs::write(&p, text)?;
            out.push(p);
        }
        Ok(out)
    }
}

fn bounds(v: &[f64]) -> (f64, f64) {
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

/// Everything an experiment emits.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Artifact {
    pub tables: Vec<Table>,
    /// Scalar outcomes, in emission order.
    pub summary: Vec<(String, f64)>,
    /// Warnings and status lines.
    pub notes: Vec<String>,
    /// Whether the run reached its stopping criterion.
    pub completed: bool,
}

impl Artifact {
    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn value(&self, key: &str) -> Option<f64> {
        self.summary.iter().find(|(k, _)| k == key).map(|&(_, v)| v)
    }

    /// Writes every table plus `<base>.summary.txt`.
    pub fn write(&self, dir: &Path, base: &str) -> std::io::Result<Vec<PathBuf>> {
        let mut out = Vec::new();
        for t in &self.tables {
            out.extend(t.write(dir)?);
        }
        let mut s = String::new();
        let _ = writeln!(s, "completed = {}", self.completed);
        for (k, v) in &self.summary {
            let _ = writeln!(s, "{k} = {v:.16e}");
        }
        for n in &self.notes {
            let _ = writeln!(s, "# {n}");
        }
        let p = dir.join(format!("{base}.summary.txt"));
        std::fs::create_dir_all(dir)?;
        std::fs::write(&p, s)?;
        out.push(p);
        Ok(out)
    }
}
