use ruin_core::doc::{parse_document, ChainDoc, Document, KernelDoc, PosetDoc};
use ruin_core::gambler::{build_chain, closed_form_vector, GamblerSpec};
use ruin_core::kernel::{
    absorption_oracle, remove_coffin, simulate, AbsorbingChain, Kernel, SimulationOptions,
};
use ruin_core::poset::{product_order, tuple_label, Poset};
use ruin_core::rational::{format as exact, to_decimal, Q};
use ruin_core::siegmund::{antidual, dual, mobius_monotonicity, ruin_via_duality, verify_duality};
use ruin_core::Error;

use crate::report::{self, Columns, Row};
use crate::{Command, Failure, Format, RunConfig};

type Outcome = Result<(String, Result<(), Failure>), Failure>;

fn input(e: Error) -> Failure {
    Failure::Input(e.to_string())
}

/// A chain together with the order used by the duality pipeline.
struct Model {
    spec: Option<GamblerSpec>,
    chain: AbsorbingChain,
    poset: Option<Poset>,
    doc: Option<ChainDoc>,
}

fn load_model(doc: Document) -> Result<Model, Failure> {
    match doc {
        Document::Spec(d) => {
            let spec = d.spec().map_err(input)?;
            let chain = build_chain(&spec).map_err(input)?;
            let poset = product_order(spec.capitals()).map_err(input)?;
            Ok(Model {
                spec: Some(spec),
                chain,
                poset: Some(poset),
                doc: None,
            })
        }
        Document::Chain(d) => {
            let chain = d.chain().map_err(input)?;
            let poset = match d.poset {
                Some(_) => Some(d.poset().map_err(input)?),
                None => None,
            };
            Ok(Model {
                spec: None,
                chain,
                poset,
                doc: Some(d),
            })
        }
        Document::Kernel(_) => Err(Failure::Input(
            "expected a gambler spec or an absorbing chain (with `win` and `coffin`), got a bare kernel"
                .into(),
        )),
    }
}

impl Model {
    fn require_poset(&self) -> Result<&Poset, Failure> {
        self.poset
            .as_ref()
            .ok_or_else(|| Failure::Input("poset: missing (needed for the duality pipeline)".into()))
    }

    /// Report states: every live state, or the requested subset in request order.
    fn select(&self, requested: &[String]) -> Result<Vec<String>, Failure> {
        let live = self.chain.live_states();
        if requested.is_empty() {
            return Ok(live.to_vec());
        }
        requested
            .iter()
            .map(|raw| {
                let label = if self.spec.is_some() { normalize_tuple(raw) } else { None }
                    .unwrap_or_else(|| raw.trim().to_owned());
                if live.contains(&label) {
                    Ok(label)
                } else {
                    Err(Failure::Usage(format!("--state {raw}: not a live state of the input")))
                }
            })
            .collect()
    }
}

/// `"2,1"`, `"(2, 1)"` or `"3"` as a lattice label.
fn normalize_tuple(raw: &str) -> Option<String> {
    let inner = raw.trim().trim_start_matches('(').trim_end_matches(')');
    let coords: Option<Vec<usize>> = inner.split(',').map(|c| c.trim().parse().ok()).collect();
    coords.map(|c| tuple_label(&c))
}

pub fn execute(config: &RunConfig, text: &str) -> Outcome {
    let doc = parse_document(text).map_err(input)?;
    match config.command {
        Command::Ruin => ruin(config, doc),
        Command::Compare => compare(config, doc),
        Command::Simulate => simulate_cmd(config, doc),
        Command::Verify => verify(config, doc),
        Command::Antidual => antidual_cmd(doc),
        Command::Dual => dual_cmd(doc),
    }
}

fn options(config: &RunConfig) -> SimulationOptions {
    SimulationOptions {
        trials: config.trials,
        seed: config.seed,
        max_steps: config.max_steps,
        ..SimulationOptions::default()
    }
}

/// Fills the requested columns. A failing duality pipeline is recorded per row.
fn tabulate(
    config: &RunConfig,
    model: &Model,
    columns: Columns,
) -> Result<(Vec<Row>, Vec<String>), Failure> {
    let states = model.select(&config.states)?;
    let mut notes = Vec::new();
    let closed = model.spec.as_ref().filter(|_| columns.closed_form).map(closed_form_vector);
    let oracle = if columns.oracle {
        Some(absorption_oracle(&model.chain).map_err(input)?)
    } else {
        None
    };
    let duality = if columns.duality {
        let poset = model.require_poset()?;
        let result = ruin_via_duality(&model.chain, poset);
        match &result {
            Err(e @ (Error::StateMismatch(_) | Error::NoUniqueMaximum(_))) => {
                return Err(Failure::Input(e.to_string()))
            }
            Err(e) => notes.push(format!("duality pipeline failed: {e}")),
            Ok(_) => {}
        }
        Some(result.map_err(|e| e.to_string()))
    } else {
        None
    };
    let opts = options(config);

    let mut rows = Vec::with_capacity(states.len());
    for state in &states {
        let mut row = Row::new(state.clone());
        row.closed_form = closed.as_ref().and_then(|v| v.get(state).cloned());
        row.oracle = oracle.as_ref().and_then(|v| v.get(state).cloned());
        row.duality = duality.as_ref().map(|d| match d {
            Ok(v) => v
                .get(state)
                .cloned()
                .ok_or_else(|| format!("no value for {state}")),
            Err(e) => Err(e.clone()),
        });
        if columns.simulation {
            let est = simulate(&model.chain, state, &opts);
            if let Ok(s) = &est {
                if s.censored > 0 {
                    notes.push(format!(
                        "{state}: {} of {} trials hit the step budget and were dropped",
                        s.censored, config.trials
                    ));
                }
            }
            if let Err(e) = &est {
                notes.push(format!("{state}: simulation failed: {e}"));
            }
            row.simulation = Some(est.map_err(|e| e.to_string()));
        }
        rows.push(row);
    }
    Ok((rows, notes))
}

fn agreement_verdict(rows: &[Row]) -> (String, Result<(), Failure>) {
    let bad: Vec<&str> = rows.iter().filter(|r| !r.agrees()).map(|r| r.state.as_str()).collect();
    if bad.is_empty() {
        ("exact methods agree".into(), Ok(()))
    } else {
        let msg = format!("exact methods disagree or failed at {}", bad.join(", "));
        (msg.clone(), Err(Failure::Inconsistent(msg)))
    }
}

fn finish(config: &RunConfig, columns: Columns, rows: &[Row], notes: &[String], check: bool) -> (String, Result<(), Failure>) {
    let (status, verdict) = if check {
        agreement_verdict(rows)
    } else {
        (String::new(), Ok(()))
    };
    if config.format == Format::Records {
        for n in notes {
            eprintln!("note: {n}");
        }
    }
    let body = report::render(config.format, config.decimal_digits, columns, rows, notes, &status);
    (body, verdict)
}

fn ruin(config: &RunConfig, doc: Document) -> Outcome {
    if !matches!(doc, Document::Spec(_)) {
        return Err(Failure::Input(
            "`ruin` needs a gambler spec; use `compare` for a chain".into(),
        ));
    }
    let model = load_model(doc)?;
    let columns = Columns {
        closed_form: true,
        duality: config.with_duality,
        oracle: config.with_oracle,
        simulation: config.with_simulation,
    };
    let (rows, notes) = tabulate(config, &model, columns)?;
    let check = config.with_duality || config.with_oracle;
    Ok(finish(config, columns, &rows, &notes, check))
}

fn compare(config: &RunConfig, doc: Document) -> Outcome {
    let model = load_model(doc)?;
    let columns = Columns {
        closed_form: model.spec.is_some(),
        duality: true,
        oracle: true,
        simulation: config.with_simulation,
    };
    let (rows, mut notes) = tabulate(config, &model, columns)?;
    if let Some(doc) = &model.doc {
        let refs = doc.references().map_err(input)?;
        for (state, quoted) in refs {
            match rows.iter().find(|r| r.state == state).and_then(Row::exact_value) {
                Some(v) if *v != quoted => notes.push(format!(
                    "reference value for {state} is {} ({}); computed {} ({})",
                    exact(&quoted),
                    to_decimal(&quoted, config.decimal_digits),
                    exact(v),
                    to_decimal(v, config.decimal_digits),
                )),
                Some(_) => notes.push(format!("reference value for {state} matches")),
                None => {}
            }
        }
    }
    Ok(finish(config, columns, &rows, &notes, true))
}

fn simulate_cmd(config: &RunConfig, doc: Document) -> Outcome {
    let model = load_model(doc)?;
    let columns = Columns {
        simulation: true,
        ..Columns::default()
    };
    let (rows, notes) = tabulate(config, &model, columns)?;
    let failed: Vec<&str> = rows
        .iter()
        .filter(|r| matches!(r.simulation, Some(Err(_))))
        .map(|r| r.state.as_str())
        .collect();
    let body = report::render(config.format, config.decimal_digits, columns, &rows, &notes, "");
    if config.format == Format::Records {
        for n in &notes {
            eprintln!("note: {n}");
        }
    }
    let verdict = if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Inconsistent(format!(
            "no completed trials from {}",
            failed.join(", ")
        )))
    };
    Ok((body, verdict))
}

fn cell(v: &Q, digits: usize) -> String {
    format!("{} ({})", exact(v), to_decimal(v, digits))
}

fn verify(config: &RunConfig, doc: Document) -> Outcome {
    let model = load_model(doc)?;
    let poset = model.require_poset()?;
    let supplied = match &model.doc {
        Some(d) => d.antidual_kernel().map_err(input)?,
        None => None,
    };
    let px = match supplied {
        Some(k) => k,
        None => antidual(&remove_coffin(&model.chain), poset).map_err(input)?,
    };
    let report = verify_duality(&px, &model.chain, poset, config.max_power).map_err(input)?;
    let monotone = mobius_monotonicity(&px, poset).map_err(input)?;
    let top = poset.elements()[poset.unique_max().map_err(input)?].clone();
    let digits = config.decimal_digits;

    let body = match config.format {
        Format::Records => {
            let violation = report.first_violation.as_ref().map(|v| {
                serde_json::json!({
                    "power": v.power,
                    "e_i": v.row,
                    "e_j": v.col,
                    "lhs": exact(&v.lhs),
                    "rhs": exact(&v.rhs),
                })
            });
            let value = serde_json::json!({
                "elements": poset.len(),
                "maximum": top,
                "antidual_class": px.class().name(),
                "max_power": report.max_power_checked,
                "holds": report.holds,
                "first_violation": violation,
                "mobius_monotone": monotone.monotone,
            });
            format!("{value}\n")
        }
        Format::Table => {
            let mut out = String::new();
            out.push_str(&format!("poset: {} elements, maximum {top}\n", poset.len()));
            out.push_str(&format!("antidual: {}\n", px.class().name()));
            out.push_str(&format!("powers checked: 0..={}\n", report.max_power_checked));
            match &report.first_violation {
                None => out.push_str("duality: holds\n"),
                Some(v) => {
                    out.push_str(&format!(
                        "duality: violated at n = {}, e_i = {}, e_j = {}\n",
                        v.power, v.row, v.col
                    ));
                    out.push_str(&format!(
                        "  P_X^n(e_i, down(e_j)) = {}\n  P_Z'^n(e_j, up(e_i)) = {}\n",
                        cell(&v.lhs, digits),
                        cell(&v.rhs, digits)
                    ));
                }
            }
            match &monotone.witness {
                None => out.push_str("mobius monotone: yes\n"),
                Some((r, c, v)) => out.push_str(&format!(
                    "mobius monotone: no, dual entry ({r}, {c}) = {}\n",
                    cell(v, digits)
                )),
            }
            out
        }
    };
    let verdict = match &report.first_violation {
        None => Ok(()),
        Some(v) => Err(Failure::Inconsistent(format!(
            "duality violated at n = {} for ({}, {})",
            v.power, v.row, v.col
        ))),
    };
    Ok((body, verdict))
}

fn pretty<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("document serializes");
    s.push('\n');
    s
}

fn antidual_cmd(doc: Document) -> Outcome {
    let model = load_model(doc)?;
    let poset = model.require_poset()?;
    let px: Kernel = antidual(&remove_coffin(&model.chain), poset).map_err(input)?;
    eprintln!(
        "note: antidual is {} ({} negative entries)",
        px.class().name(),
        px.negative_entries().len()
    );
    let mut out = KernelDoc::from_kernel(&px);
    out.poset = Some(PosetDoc::from_poset(poset));
    Ok((pretty(&out), Ok(())))
}

fn dual_cmd(doc: Document) -> Outcome {
    let kdoc = match doc {
        Document::Kernel(k) => k,
        _ => return Err(Failure::Input("`dual` needs a kernel document with a poset".into())),
    };
    let px = kdoc.kernel().map_err(input)?;
    let poset = kdoc.poset().map_err(input)?;
    let chain = dual(&px, &poset).map_err(|e| match e {
        Error::NotMobiusMonotone { row, col, value } => Failure::Input(format!(
            "kernel is not Möbius monotone: dual entry ({row}, {col}) = {}",
            exact(&value)
        )),
        e => input(e),
    })?;
    let mut out = ChainDoc::from_chain(&chain);
    out.poset = Some(PosetDoc::from_poset(&poset));
    Ok((pretty(&out), Ok(())))
}
