use std::fmt::Write as _;
use std::path::Path;

use privacy_funnel::{Channel, Error, Joint, Partition};

/// C-style `%.{digits}g`.
pub fn fmt_g(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Twelve significant digits, the CSV precision.
pub fn g12(v: f64) -> String {
    fmt_g(v, 12)
}

/// Channel file: partition listing plus the row-stochastic matrix.
pub fn format_channel(channel: &Channel<f64>, joint: &Joint<f64>) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "# channel {} inputs -> {} outputs",
        channel.inputs(),
        channel.outputs()
    )
    .unwrap();
    for (x, label) in joint.col_labels().iter().enumerate() {
        writeln!(out, "# x{x} {label}").unwrap();
    }
    writeln!(out, "dims {} {}", channel.inputs(), channel.outputs()).unwrap();
    if let Some(p) = channel.as_partition() {
        writeln!(out, "blocks {}", p.num_blocks()).unwrap();
        for block in p.blocks() {
            let members: Vec<String> = block.iter().map(usize::to_string).collect();
            writeln!(out, "{}", members.join(" ")).unwrap();
        }
    }
    writeln!(out, "matrix").unwrap();
    for x in 0..channel.inputs() {
        let row: Vec<String> = channel.row(x).iter().map(|&v| format!("{v}")).collect();
        writeln!(out, "{}", row.join(" ")).unwrap();
    }
    out
}

pub fn read_channel(path: &Path) -> Result<Channel<f64>, Error> {
    let text = std::fs::read_to_string(path)?;
    let fail = |line: usize, reason: String| Error::Format {
        path: path.to_path_buf(),
        line,
        reason,
    };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (n, dims) = lines
        .next()
        .ok_or_else(|| fail(0, "empty channel file".into()))?;
    let parts: Vec<&str> = dims.split_whitespace().collect();
    let (inputs, outputs) = match parts.as_slice() {
        ["dims", a, b] => match (a.parse::<usize>(), b.parse::<usize>()) {
            (Ok(a), Ok(b)) => (a, b),
            _ => return Err(fail(n, format!("bad dimensions {dims:?}"))),
        },
        _ => return Err(fail(n, "expected `dims <inputs> <outputs>`".into())),
    };
    // The block listing is informational; the matrix is authoritative.
    let mut lines = lines.skip_while(|(_, l)| *l != "matrix");
    if lines.next().is_none() {
        return Err(fail(n, "missing `matrix` section".into()));
    }
    let mut rows = Vec::with_capacity(inputs);
    for (n, line) in lines.by_ref().take(inputs) {
        let row = line
            .split_whitespace()
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| fail(n, format!("bad entry {v:?}")))
            })
            .collect::<Result<Vec<f64>, _>>()?;
        if row.len() != outputs {
            return Err(fail(
                n,
                format!("expected {outputs} entries, found {}", row.len()),
            ));
        }
        rows.push(row);
    }
    if rows.len() != inputs {
        return Err(fail(
            0,
            format!("expected {inputs} matrix rows, found {}", rows.len()),
        ));
    }
    if let Some((n, _)) = lines.next() {
        return Err(fail(n, "trailing content after matrix".into()));
    }
    Channel::new(rows)
}

pub fn partition_cell(p: &Partition) -> String {
    p.to_string()
}
