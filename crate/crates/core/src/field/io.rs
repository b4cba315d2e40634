//! The `AXIFIELD 1` text format.
//!
//! ```text
//! AXIFIELD 1
//! nx ny x1min x1max x2min x2max
//! u(0,0) u(1,0) ... u(nx-1,0)
//! ...
//! ```
//!
//! One line per row of constant `x2`, `x1` fastest. Values are written with
//! 17 significant digits, which round-trips every `f64` exactly.

use std::io::{BufRead, Write};

use super::{GridField, Rect};
use crate::error::{Error, Result};

pub const MAGIC: &str = "AXIFIELD 1";

pub fn write_axifield<W: Write>(mut out: W, grid: &GridField) -> Result<()> {
    let r = grid.rect();
    writeln!(out, "{MAGIC}")?;
    writeln!(
        out,
        "{} {} {:e} {:e} {:e} {:e}",
        grid.nx(),
        grid.ny(),
        r.x1_min,
        r.x1_max,
        r.x2_min,
        r.x2_max
    )?;
    let mut line = String::new();
    for row in grid.values().chunks(grid.nx()) {
        line.clear();
        for (k, v) in row.iter().enumerate() {
            if k > 0 {
                line.push(' ');
            }
            line.push_str(&format!("{v:.16e}"));
        }
        writeln!(out, "{line}")?;
    }
    out.flush()?;
    Ok(())
}

fn format_err(line: usize, message: impl Into<String>) -> Error {
    Error::Format {
        line,
        message: message.into(),
    }
}

pub fn read_axifield<R: BufRead>(input: R) -> Result<GridField> {
    let mut lines = input.lines().enumerate();
    let next_content = |lines: &mut std::iter::Enumerate<std::io::Lines<R>>| -> Result<Option<(usize, String)>> {
        for (n, l) in lines.by_ref() {
            let l = l?;
            if !l.trim().is_empty() {
                return Ok(Some((n + 1, l)));
            }
        }
        Ok(None)
    };
    let (n, magic) = next_content(&mut lines)?.ok_or_else(|| format_err(1, "empty input"))?;
    if magic.trim() != MAGIC {
        return Err(format_err(n, format!("expected '{MAGIC}', found '{}'", magic.trim())));
    }
    let (n, header) =
        next_content(&mut lines)?.ok_or_else(|| format_err(n + 1, "missing dimension line"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 6 {
        return Err(format_err(n, "expected 'nx ny x1min x1max x2min x2max'"));
    }
    let nx: usize = fields[0]
        .parse()
        .map_err(|_| format_err(n, format!("bad nx '{}'", fields[0])))?;
    let ny: usize = fields[1]
        .parse()
        .map_err(|_| format_err(n, format!("bad ny '{}'", fields[1])))?;
    let mut ext = [0.0; 4];
    for (slot, s) in ext.iter_mut().zip(&fields[2..]) {
        *slot = s
            .parse()
            .map_err(|_| format_err(n, format!("bad extent '{s}'")))?;
    }
    let total = nx
        .checked_mul(ny)
        .ok_or_else(|| format_err(n, "grid too large"))?;
    let mut values = Vec::with_capacity(total);
    let mut last = n;
    while let Some((n, l)) = next_content(&mut lines)? {
        last = n;
        for tok in l.split_whitespace() {
            let v: f64 = tok
                .parse()
                .map_err(|_| format_err(n, format!("bad value '{tok}'")))?;
            values.push(v);
        }
        if values.len() > total {
            return Err(format_err(n, format!("more than {total} values")));
        }
    }
    if values.len() != total {
        return Err(format_err(
            last,
            format!("expected {total} values, found {}", values.len()),
        ));
    }
    let rect = Rect::new(ext[0], ext[1], ext[2], ext[3]);
    GridField::new(nx, ny, rect, values).map_err(|e| match e {
        Error::InvalidArgument(m) => format_err(2, m),
        other => other,
    })
}

impl GridField {
    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        read_axifield(std::io::BufReader::new(f))
    }

    pub fn save(&self, path: impl AsRef<std::path::Path>) -> Result<()> {
        let f = std::fs::File::create(path)?;
        write_axifield(std::io::BufWriter::new(f), self)
    }
}
