//! Plain-text rendering of numbers, matrices and aligned tables.

use opschmidt::biunimodular::LineFunction;
use opschmidt::weyl::GridFunction;
use opschmidt::{ComplexMatrix, C64};

pub fn num(x: f64) -> String {
    format!("{x:.12}")
}

pub fn sci(x: f64) -> String {
    format!("{x:.3e}")
}

pub fn complex(z: C64) -> String {
    format!("{:+.9}{:+.9}i", z.re, z.im)
}

pub fn list(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|&x| num(x)).collect();
    format!("[{}]", parts.join(", "))
}

fn rows(values: &[C64], width: usize) -> String {
    values.chunks(width.max(1)).map(|r| r.iter().map(|&z| complex(z)).collect::<Vec<_>>().join("  ") + "\n").collect()
}

pub fn matrix(m: &ComplexMatrix) -> String {
    rows(m.data(), m.cols())
}

pub fn grid(g: &GridFunction) -> String {
    format!("N = {}\n{}", g.n(), rows(g.values(), g.n()))
}

pub fn line(f: &LineFunction) -> String {
    format!("N = {}\n{}", f.n(), rows(f.values(), f.n()))
}

/// Column-aligned table.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: vec![] }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    pub fn render(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for r in &self.rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let fmt = |cells: &[String]| {
            let padded: Vec<String> =
                cells.iter().zip(&widths).map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = fmt(&self.header);
        for r in &self.rows {
            out.push_str(&fmt(r));
        }
        out
    }
}
