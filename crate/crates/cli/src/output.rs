use std::io::Write;
use std::path::Path;

use serde::Serialize;
use tempfile::NamedTempFile;
use xihd_core::independence::screening_threshold;
use xihd_core::{SimResult, TestKind, TestReport, XiMatrix};

use crate::CliError;

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Io(format!("cannot serialize report: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Writes to stdout, or atomically replaces `path` via a sibling temp file.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    let Some(path) = path else {
        let mut out = std::io::stdout().lock();
        return out
            .write_all(text.as_bytes())
            .and_then(|_| out.flush())
            .map_err(io);
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir)
        .map_err(|e| CliError::Io(format!("cannot write to {}: {e}", dir.display())))?;
    tmp.write_all(text.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path)
        .map_err(|e| CliError::Io(format!("cannot write {}: {}", path.display(), e.error)))?;
    Ok(())
}

fn pair_name(label: &Option<String>, idx: usize) -> String {
    label.clone().unwrap_or_else(|| format!("#{idx}"))
}

pub fn reports_table(reports: &[TestReport]) -> String {
    let mut s = String::new();
    let Some(first) = reports.first() else {
        return s;
    };
    s.push_str(&format!(
        "n = {}, p = {}, alpha = {}",
        first.n, first.p, first.alpha
    ));
    if let Some(seed) = first.seed {
        s.push_str(&format!(", ties broken with seed {seed}"));
    }
    s.push('\n');
    s.push_str(&format!(
        "{:<6} {:>14} {:>12} {:>10} {:>7}\n",
        "test", "statistic", "p-value", "critical", "reject"
    ));
    for r in reports {
        s.push_str(&format!(
            "{:<6} {:>14.6} {:>12.4e} {:>10.6} {:>7}\n",
            r.kind.symbol(),
            r.statistic,
            r.p_value,
            r.threshold,
            if r.reject { "yes" } else { "no" }
        ));
    }
    if let Some(enhanced) = reports.iter().find(|r| r.kind == TestKind::Enhanced) {
        if let Ok(cut) = screening_threshold(enhanced.n, enhanced.p) {
            s.push_str(&format!("screening threshold |xi| > {cut:.6}\n"));
        }
        s.push_str(&format!(
            "J_0 = {:.6}, {} screened pair(s)\n",
            enhanced.j0,
            enhanced.screened_pairs.len()
        ));
        for pair in &enhanced.screened_pairs {
            s.push_str(&format!(
                "  {} -> {}  xi = {:.6}\n",
                pair_name(&pair.k_label, pair.k),
                pair_name(&pair.l_label, pair.l),
                pair.xi
            ));
        }
    }
    s
}

/// One row per result, columns in the order J_ξ, M_ξ, J_E, P(Ŝ≠∅).
pub fn simulation_table(results: &[SimResult]) -> String {
    let mut s = format!(
        "{:<18} {:>5} {:>5} {:>6} {:>7} {:>7} {:>7} {:>7}\n",
        "model", "n", "p", "reps", "J_ξ", "M_ξ", "J_E", "P(Ŝ≠∅)"
    );
    for r in results {
        let cell = |k: TestKind| {
            r.frequency(k)
                .map_or("-".to_string(), |f| format!("{f:.3}"))
        };
        s.push_str(&format!(
            "{:<18} {:>5} {:>5} {:>6} {:>7} {:>7} {:>7} {:>7.3}\n",
            r.model.to_string(),
            r.n,
            r.p,
            r.reps,
            cell(TestKind::Quadratic),
            cell(TestKind::Extreme),
            cell(TestKind::Enhanced),
            r.freq_nonempty_screen
        ));
    }
    s
}

/// Labeled `p × p` CSV with blank diagonal cells.
pub fn xi_csv(xi: &XiMatrix, labels: &[String]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Io(e.to_string());
    let mut header = vec![String::new()];
    header.extend(labels.iter().cloned());
    w.write_record(&header).map_err(err)?;
    for (k, label) in labels.iter().enumerate() {
        let mut row = vec![label.clone()];
        // shortest round-trip formatting
        row.extend(
            xi.row(k)
                .into_iter()
                .map(|v| v.map_or(String::new(), |x| x.to_string())),
        );
        w.write_record(&row).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}
