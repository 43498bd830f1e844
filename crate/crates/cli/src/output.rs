use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

/// Shortest-form rendering with 12 significant digits, like C's `%.12g`.
pub fn g12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    // exponent after rounding to 12 digits
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

pub fn open(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// `#` metadata lines that start every emitted file.
pub struct Header {
    lines: Vec<String>,
}

impl Header {
    pub fn new(command: &str) -> Self {
        Self { lines: vec![format!("qal {}", env!("CARGO_PKG_VERSION")), format!("command: {command}")] }
    }

    pub fn field(mut self, key: &str, value: impl std::fmt::Display) -> Self {
        self.lines.push(format!("{key}: {value}"));
        self
    }

    pub fn write(&self, out: &mut dyn Write) -> io::Result<()> {
        for l in &self.lines {
            writeln!(out, "# {l}")?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.lines.iter().map(|l| serde_json::Value::String(l.clone())).collect())
    }
}

pub fn row(out: &mut dyn Write, cells: &[String]) -> io::Result<()> {
    writeln!(out, "{}", cells.join(","))
}
