//! Append-only CSV ledgers for experiment results.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use crate::error::{invalid, Result};

fn escape(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Appends `rows` to the CSV at `path`, writing `header` first if the file is new or empty.
pub fn append_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    if let Some(r) = rows.iter().find(|r| r.len() != header.len()) {
        return Err(invalid(format!(
            "row has {} fields, header has {}",
            r.len(),
            header.len()
        )));
    }
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    if f.metadata()?.len() == 0 {
        writeln!(f, "{}", header.join(","))?;
    }
    for r in rows {
        let line: Vec<String> = r.iter().map(|s| escape(s)).collect();
        writeln!(f, "{}", line.join(","))?;
    }
    Ok(())
}

/// Header of the graph-value ledger.
pub const GRAPH_VALUE_HEADER: [&str; 7] = ["graph_id", "n", "method", "value", "stderr", "samples", "seed"];

pub fn graph_value_row(est: &crate::values::GraphValueEstimate, n: usize, seed: u64) -> Vec<String> {
    vec![
        est.graph_id.clone(),
        n.to_string(),
        est.method.name().to_string(),
        format!("{:e}", est.value),
        format!("{:e}", est.stderr),
        est.samples.to_string(),
        seed.to_string(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_written_once() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("l.csv");
        append_csv(&p, &["a", "b"], &[vec!["1".into(), "x,y".into()]]).unwrap();
        append_csv(&p, &["a", "b"], &[vec!["2".into(), "z".into()]]).unwrap();
        let s = std::fs::read_to_string(&p).unwrap();
        assert_eq!(s, "a,b\n1,\"x,y\"\n2,z\n");
        assert!(append_csv(&p, &["a"], &[vec![]]).is_err());
    }
}
