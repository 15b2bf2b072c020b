use std::collections::BTreeMap;
use std::io::{Read, Write};

use super::experiment::{ExperimentResult, GridRow};
use super::wilcoxon::ALPHA;
use crate::error::{Error, Result};

/// Per-fold accuracies: `mode,n_prev,fold,accuracy`.
pub fn write_grid_csv(result: &ExperimentResult, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["mode", "n_prev", "fold", "accuracy"])?;
    for row in &result.rows {
        for (f, acc) in row.fold_accuracies.iter().enumerate() {
            w.write_record([
                row.mode.clone(),
                row.n_prev.to_string(),
                f.to_string(),
                format!("{acc:.6}"),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Mean and pooled accuracy per cell: `mode,n_prev,mean,pooled`.
pub fn write_summary_csv(result: &ExperimentResult, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["mode", "n_prev", "mean", "pooled"])?;
    for row in &result.rows {
        w.write_record([
            row.mode.clone(),
            row.n_prev.to_string(),
            format!("{:.6}", row.mean),
            format!("{:.6}", row.pooled),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_label_accuracy_csv(result: &ExperimentResult, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["source", "accuracy"])?;
    for (name, acc) in &result.label_accuracy {
        w.write_record([name.clone(), format!("{acc:.6}")])?;
    }
    w.flush()?;
    Ok(())
}

/// Mean accuracies as a markdown table, one line per mode and one column per
/// context size.
pub fn write_markdown(result: &ExperimentResult, mut out: impl Write) -> Result<()> {
    let mut modes: Vec<&str> = Vec::new();
    let mut cells: BTreeMap<(&str, usize), &GridRow> = BTreeMap::new();
    let mut max_n = 0;
    for row in &result.rows {
        if !modes.contains(&row.mode.as_str()) {
            modes.push(&row.mode);
        }
        max_n = max_n.max(row.n_prev);
        cells.insert((&row.mode, row.n_prev), row);
    }
    write!(out, "| context |")?;
    for n in 0..=max_n {
        write!(out, " n={n} |")?;
    }
    writeln!(out)?;
    write!(out, "|---|")?;
    for _ in 0..=max_n {
        write!(out, "---:|")?;
    }
    writeln!(out)?;
    for mode in modes {
        write!(out, "| {mode} |")?;
        for n in 0..=max_n {
            match cells.get(&(mode, n)) {
                Some(row) => {
                    let mark = if row.vs_previous.is_some_and(|w| w.significant()) {
                        "*"
                    } else {
                        ""
                    };
                    write!(out, " {:.2}{mark} |", 100.0 * row.mean)?;
                }
                None => write!(out, " |")?,
            }
        }
        writeln!(out)?;
    }
    if !result.label_accuracy.is_empty() {
        writeln!(out)?;
        writeln!(out, "| label source | accuracy |")?;
        writeln!(out, "|---|---:|")?;
        for (name, acc) in &result.label_accuracy {
            writeln!(out, "| {name} | {:.2} |", 100.0 * acc)?;
        }
    }
    writeln!(out)?;
    writeln!(
        out,
        "Mean fold accuracy in percent. `*`: differs from the cell to its left \
         (Wilcoxon signed-rank test over folds, p < {ALPHA})."
    )?;
    Ok(())
}

/// Per-fold accuracies read back from a grid CSV, keyed by `(mode, n_prev)`
/// and ordered by fold.
pub fn read_grid_csv(input: impl Read) -> Result<BTreeMap<(String, usize), Vec<f64>>> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["mode", "n_prev", "fold", "accuracy"] {
        return Err(Error::InvalidInput(format!(
            "expected grid columns mode,n_prev,fold,accuracy, found {}",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut cells: BTreeMap<(String, usize), Vec<(usize, f64)>> = BTreeMap::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let field = |j: usize| rec.get(j).unwrap_or("");
        let bad = |what: &str| {
            Error::parse(
                "grid",
                line,
                format!("bad {what} `{}`", rec.iter().collect::<Vec<_>>().join(",")),
            )
        };
        let n: usize = field(1).parse().map_err(|_| bad("n_prev"))?;
        let fold: usize = field(2).parse().map_err(|_| bad("fold"))?;
        let acc: f64 = field(3).parse().map_err(|_| bad("accuracy"))?;
        cells
            .entry((field(0).to_string(), n))
            .or_default()
            .push((fold, acc));
    }
    Ok(cells
        .into_iter()
        .map(|(k, mut v)| {
            v.sort_by_key(|&(f, _)| f);
            (k, v.into_iter().map(|(_, a)| a).collect())
        })
        .collect())
}
