use serde::Serialize;

use ruin_core::kernel::SimulationEstimate;
use ruin_core::rational::{format as exact, to_decimal, Q};

use crate::Format;

#[derive(Debug, Clone, Copy, Default)]
pub struct Columns {
    pub closed_form: bool,
    pub duality: bool,
    pub oracle: bool,
    pub simulation: bool,
}

#[derive(Debug, Clone)]
pub struct Row {
    pub state: String,
    pub closed_form: Option<Q>,
    pub duality: Option<Result<Q, String>>,
    pub oracle: Option<Q>,
    pub simulation: Option<Result<SimulationEstimate, String>>,
}

impl Row {
    pub fn new(state: impl Into<String>) -> Row {
        Row {
            state: state.into(),
            closed_form: None,
            duality: None,
            oracle: None,
            simulation: None,
        }
    }

    /// Every exact value present is the same fraction and no exact method failed.
    pub fn agrees(&self) -> bool {
        let mut exact = Vec::new();
        exact.extend(self.closed_form.as_ref());
        match &self.duality {
            Some(Ok(v)) => exact.push(v),
            Some(Err(_)) => return false,
            None => {}
        }
        exact.extend(self.oracle.as_ref());
        exact.windows(2).all(|w| w[0] == w[1])
    }

    /// First exact value available, for reference comparisons.
    pub fn exact_value(&self) -> Option<&Q> {
        self.closed_form
            .as_ref()
            .or(self.oracle.as_ref())
            .or(self.duality.as_ref().and_then(|d| d.as_ref().ok()))
    }
}

#[derive(Serialize)]
struct Record<'a> {
    state: &'a str,
    closed_form: Option<String>,
    duality: Option<String>,
    oracle: Option<String>,
    simulation_estimate: Option<f64>,
    simulation_stderr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn exact_cell(v: &Q, digits: usize) -> String {
    let frac = exact(v);
    let dec = to_decimal(v, digits);
    if frac == dec {
        frac
    } else {
        format!("{frac} = {dec}")
    }
}

pub fn render(
    format: Format,
    digits: usize,
    columns: Columns,
    rows: &[Row],
    notes: &[String],
    status: &str,
) -> String {
    match format {
        Format::Records => render_records(columns, rows),
        Format::Table => render_table(digits, columns, rows, notes, status),
    }
}

fn render_records(columns: Columns, rows: &[Row]) -> String {
    let mut out = String::new();
    for row in rows {
        let mut error = None;
        let duality = match &row.duality {
            Some(Ok(v)) if columns.duality => Some(exact(v)),
            Some(Err(e)) if columns.duality => {
                error = Some(format!("duality: {e}"));
                None
            }
            _ => None,
        };
        let (estimate, stderr) = match &row.simulation {
            Some(Ok(s)) if columns.simulation => (Some(s.estimate), Some(s.std_error)),
            Some(Err(e)) if columns.simulation => {
                error = Some(format!("simulation: {e}"));
                (None, None)
            }
            _ => (None, None),
        };
        let record = Record {
            state: &row.state,
            closed_form: row.closed_form.as_ref().filter(|_| columns.closed_form).map(exact),
            duality,
            oracle: row.oracle.as_ref().filter(|_| columns.oracle).map(exact),
            simulation_estimate: estimate,
            simulation_stderr: stderr,
            error,
        };
        out.push_str(&serde_json::to_string(&record).expect("record serializes"));
        out.push('\n');
    }
    out
}

fn render_table(
    digits: usize,
    columns: Columns,
    rows: &[Row],
    notes: &[String],
    status: &str,
) -> String {
    let mut header = vec!["state".to_string()];
    let wanted = [
        (columns.closed_form, "closed_form"),
        (columns.duality, "duality"),
        (columns.oracle, "oracle"),
        (columns.simulation, "simulation"),
    ];
    header.extend(wanted.iter().filter(|(on, _)| *on).map(|(_, n)| n.to_string()));

    let mut table = vec![header];
    for row in rows {
        let mut cells = vec![row.state.clone()];
        if columns.closed_form {
            cells.push(row.closed_form.as_ref().map_or("-".into(), |v| exact_cell(v, digits)));
        }
        if columns.duality {
            cells.push(match &row.duality {
                Some(Ok(v)) => exact_cell(v, digits),
                Some(Err(_)) => "error".into(),
                None => "-".into(),
            });
        }
        if columns.oracle {
            cells.push(row.oracle.as_ref().map_or("-".into(), |v| exact_cell(v, digits)));
        }
        if columns.simulation {
            cells.push(match &row.simulation {
                Some(Ok(s)) => format!(
                    "{:.*} ± {:.*}",
                    digits, s.estimate, digits, s.std_error
                ),
                Some(Err(_)) => "error".into(),
                None => "-".into(),
            });
        }
        table.push(cells);
    }

    let widths: Vec<usize> = (0..table[0].len())
        .map(|c| table.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in &table {
        let line: Vec<String> = r
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:<w$}"))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    for (i, note) in notes.iter().enumerate() {
        if i == 0 {
            out.push('\n');
        }
        out.push_str(&format!("[{}] {note}\n", i + 1));
    }
    if !status.is_empty() {
        out.push_str(&format!("\nstatus: {status}\n"));
    }
    out
}
