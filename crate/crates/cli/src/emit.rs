//! Deterministic JSON/CSV/SVG emission.
//!
//! Identical (config, seed) pairs must produce byte-identical output, so JSON
//! is written by hand with insertion-ordered keys and floats pinned to 15
//! significant digits, instead of going through a serializer with
//! shortest-roundtrip float formatting.

use std::fmt::Write as _;

#[derive(Clone, Debug)]
pub enum J {
    Null,
    Bool(bool),
    Int(i64),
    UInt(u64),
    Float(f64),
    Str(String),
    Arr(Vec<J>),
    Obj(Vec<(String, J)>),
}

impl J {
    pub fn obj() -> J {
        J::Obj(vec![])
    }

    pub fn push(&mut self, key: &str, val: J) -> &mut J {
        if let J::Obj(fields) = self {
            fields.push((key.to_string(), val));
        } else {
            panic!("push on non-object");
        }
        self
    }

    pub fn s(v: impl Into<String>) -> J {
        J::Str(v.into())
    }
}

/// 15 significant digits, fixed scientific form.
pub fn fmt_float(x: f64) -> String {
    if x == 0.0 {
        return "0.0".into();
    }
    if !x.is_finite() {
        // JSON has no inf/nan; encode as strings upstream if ever needed
        return "null".into();
    }
    format!("{:.14e}", x)
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out
}

pub fn to_json(v: &J, out: &mut String, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        J::Null => out.push_str("null"),
        J::Bool(b) => {
            let _ = write!(out, "{b}");
        }
        J::Int(i) => {
            let _ = write!(out, "{i}");
        }
        J::UInt(u) => {
            let _ = write!(out, "{u}");
        }
        J::Float(f) => out.push_str(&fmt_float(*f)),
        J::Str(s) => {
            let _ = write!(out, "\"{}\"", escape(s));
        }
        J::Arr(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = write!(out, "\n{pad}  ");
                to_json(item, out, indent + 1);
            }
            let _ = write!(out, "\n{pad}]");
        }
        J::Obj(fields) => {
            if fields.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push('{');
            for (i, (k, val)) in fields.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = write!(out, "\n{pad}  \"{}\": ", escape(k));
                to_json(val, out, indent + 1);
            }
            let _ = write!(out, "\n{pad}}}");
        }
    }
}

pub fn render_json(v: &J) -> String {
    let mut out = String::new();
    to_json(v, &mut out, 0);
    out.push('\n');
    out
}

/// RFC 4180 field quoting.
pub fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') || s.contains('\r') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn csv_row(fields: &[String]) -> String {
    fields
        .iter()
        .map(|f| csv_field(f))
        .collect::<Vec<_>>()
        .join(",")
}

/// SVG heatmap of a row-major grid: one rect per cell with a linear two-color
/// ramp between the grid minimum and maximum, annotated with both values.
pub fn svg_heatmap(grid: &[f64], nrows: usize, ncols: usize, title: &str) -> String {
    let cell = 36usize;
    let margin = 48usize;
    let width = ncols * cell + 2 * margin;
    let height = nrows * cell + 2 * margin + 24;
    let lo = grid.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = grid.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let span = if (hi - lo).abs() < 1e-300 { 1.0 } else { hi - lo };
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    );
    let _ = writeln!(
        out,
        "<text x=\"{margin}\" y=\"24\" font-family=\"monospace\" font-size=\"14\">{}</text>",
        escape(title)
    );
    for r in 0..nrows {
        for c in 0..ncols {
            let v = grid[r * ncols + c];
            let t = (v - lo) / span;
            // ramp: deep blue (low) to warm red (high)
            let red = (255.0 * t) as u8;
            let green = (64.0 + 64.0 * (1.0 - (2.0 * t - 1.0).abs())) as u8;
            let blue = (255.0 * (1.0 - t)) as u8;
            let x = margin + c * cell;
            let y = margin + r * cell;
            let _ = writeln!(
                out,
                "<rect x=\"{x}\" y=\"{y}\" width=\"{cell}\" height=\"{cell}\" fill=\"rgb({red},{green},{blue})\"><title>({r},{c}) = {}</title></rect>",
                fmt_float(v)
            );
        }
    }
    let _ = writeln!(
        out,
        "<text x=\"{margin}\" y=\"{}\" font-family=\"monospace\" font-size=\"12\">min = {}  max = {}</text>",
        height - 12,
        fmt_float(lo),
        fmt_float(hi)
    );
    out.push_str("</svg>\n");
    out
}
