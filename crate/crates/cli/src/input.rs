//! Sample and regression input files.

use std::io::Read;

use crate::CliError;

fn read_all(path: &str) -> Result<String, CliError> {
    let mut text = String::new();
    if path == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::Data(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| CliError::Data(format!("{path}: {e}")))?;
    }
    Ok(text)
}

fn number(field: &str, what: &str) -> Result<f64, CliError> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| CliError::Data(format!("{what}: not a number: {field:?}")))
}

/// One value per line, or the named column of a CSV file with a header.
pub fn read_sample(path: &str, column: Option<&str>) -> Result<Vec<f64>, CliError> {
    let text = read_all(path)?;
    match column {
        None => text
            .lines()
            .enumerate()
            .map(|(i, l)| (i, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .map(|(i, l)| number(l, &format!("{path} line {}", i + 1)))
            .collect(),
        Some(name) => {
            let mut rdr = csv::ReaderBuilder::new()
                .trim(csv::Trim::All)
                .from_reader(text.as_bytes());
            let headers = rdr
                .headers()
                .map_err(|e| CliError::Data(format!("{path}: {e}")))?
                .clone();
            let idx = headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| CliError::Data(format!("{path}: no column {name:?}")))?;
            let mut out = Vec::new();
            for (i, rec) in rdr.records().enumerate() {
                let rec = rec.map_err(|e| CliError::Data(format!("{path}: {e}")))?;
                let field = rec
                    .get(idx)
                    .ok_or_else(|| CliError::Data(format!("{path} row {}: short record", i + 2)))?;
                out.push(number(field, &format!("{path} row {}", i + 2))?);
            }
            Ok(out)
        }
    }
}

/// Two-column `z,y` CSV. A header row is optional; when present the columns
/// named `z` and `y` are used, otherwise the first two.
pub fn read_pairs(path: &str) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let text = read_all(path)?;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let (mut zi, mut yi) = (0, 1);
    let (mut z, mut y) = (Vec::new(), Vec::new());
    let mut line = 0;
    for rec in rdr.records() {
        line += 1;
        let rec = rec.map_err(|e| CliError::Data(format!("{path}: {e}")))?;
        if line == 1 && rec.get(0).is_some_and(|f| f.parse::<f64>().is_err()) {
            let pos = |name: &str| rec.iter().position(|h| h == name);
            if let (Some(a), Some(b)) = (pos("z"), pos("y")) {
                (zi, yi) = (a, b);
            }
            continue;
        }
        let get = |i: usize| {
            rec.get(i)
                .ok_or_else(|| CliError::Data(format!("{path} row {line}: expected two columns")))
        };
        z.push(number(get(zi)?, &format!("{path} row {line}"))?);
        y.push(number(get(yi)?, &format!("{path} row {line}"))?);
    }
    Ok((z, y))
}
