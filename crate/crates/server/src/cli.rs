use std::io::Write;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use classnet_core::study::synthetic_classroom;
use classnet_core::survey::AnswerRecord;

use crate::service::{AnalyzeOutcome, ExportFormat, Service, ServiceError};

#[derive(Debug, Parser)]
#[command(name = "classnet", version, about = "Classroom friendship and alcohol-use network studies")]
pub struct Cli {
    /// Directory holding study bundles.
    #[arg(long, env = "CLASSNET_DATA_DIR", default_value = "classnet-data", global = true)]
    pub data_dir: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Create and list studies.
    #[command(subcommand)]
    Study(StudyCommand),
    /// Manage the participant roster.
    #[command(subcommand)]
    Roster(RosterCommand),
    /// Load questionnaire answers.
    #[command(subcommand)]
    Responses(ResponsesCommand),
    /// Run the analysis pipeline and print a per-graph summary.
    Analyze { study: String },
    /// Write one analysis graph as Pajek NET or CSV edge list.
    Export {
        study: String,
        graph: String,
        #[arg(long, value_enum, default_value = "pajek")]
        format: Format,
        /// Output file; standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the two report paragraphs for one student.
    Report { study: String, pseudonym: String },
    /// Serve the HTTP API and, optionally, the browser explorer.
    Serve(ServeArgs),
}

#[derive(Debug, Subcommand)]
pub enum StudyCommand {
    New {
        #[arg(long)]
        title: String,
        /// Seed for pseudonym assignment; random when absent.
        #[arg(long)]
        seed: Option<u64>,
    },
    List,
    /// Create a study filled with a synthetic classroom.
    Demo {
        #[arg(long, default_value_t = 38)]
        students: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "Synthetic classroom")]
        title: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum RosterCommand {
    /// Import `pseudonym,full_name,age,gender,class` rows.
    Import {
        study: String,
        csv: PathBuf,
        /// Do not keep real names in an identity file.
        #[arg(long)]
        no_identity: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum ResponsesCommand {
    /// Import a JSON array of answer records.
    Import { study: String, json: PathBuf },
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: std::net::IpAddr,
    /// Directory of static files served next to the API.
    #[arg(long)]
    pub assets: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Pajek,
    Csv,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Service(#[from] ServiceError),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn fmt_opt(x: Option<f64>, places: usize) -> String {
    x.map_or_else(|| "-".to_owned(), |v| format!("{v:.places$}"))
}

pub fn print_summary(out: &mut dyn Write, study: &str, o: &AnalyzeOutcome) -> std::io::Result<()> {
    let s = &o.summary;
    writeln!(
        out,
        "analyzed {study} (version {}): {} respondents, {} answers, {} facts, {} derived",
        o.version, s.respondents, s.answers, s.facts, s.derived
    )?;
    writeln!(out, "{:<14} {:>5} {:>5} {:>8} {:>8}", "graph", "nodes", "ties", "density", "diameter")?;
    for g in &s.graphs {
        writeln!(
            out,
            "{:<14} {:>5} {:>5} {:>8} {:>8}",
            g.name,
            g.nodes,
            g.ties,
            fmt_opt(g.density, 4),
            fmt_opt(g.diameter, 0)
        )?;
    }
    Ok(())
}

/// Runs every command except `serve`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let svc = Service::open(&cli.data_dir)?;
    let today = chrono::Local::now().date_naive();
    match &cli.command {
        Command::Study(StudyCommand::New { title, seed }) => {
            let info = svc.create(title, *seed, today)?;
            writeln!(out, "{}", info.id)?;
        }
        Command::Study(StudyCommand::List) => {
            for s in svc.list()? {
                writeln!(
                    out,
                    "{}\t{}\t{}\t{} students\t{} answers",
                    s.id,
                    s.status.as_str(),
                    s.title,
                    s.roster_size,
                    s.answers
                )?;
            }
        }
        Command::Study(StudyCommand::Demo { students, seed, title }) => {
            let c = synthetic_classroom(*students, *seed).map_err(|e| CliError::Input(e.to_string()))?;
            let info = svc.create(title, Some(*seed), today)?;
            let mut csv = String::from("pseudonym,full_name,age,gender,class\n");
            for e in &c.roster.entries {
                let age = e.age.map(|a| a.to_string()).unwrap_or_default();
                csv.push_str(&format!("{},,{},{},{}\n", e.pseudonym, age, e.gender.as_str(), e.class));
            }
            svc.import_roster(&info.id, &csv, false)?;
            svc.add_responses(&info.id, &c.answers)?;
            writeln!(out, "{}", info.id)?;
        }
        Command::Roster(RosterCommand::Import { study, csv, no_identity }) => {
            let entries = svc.import_roster(study, &read(csv)?, !no_identity)?;
            for e in entries {
                writeln!(out, "{}\t{}", e.id, e.pseudonym)?;
            }
        }
        Command::Responses(ResponsesCommand::Import { study, json }) => {
            let answers: Vec<AnswerRecord> = serde_json::from_str(&read(json)?)
                .map_err(|e| CliError::Input(format!("{}: {e}", json.display())))?;
            let report = svc.add_responses(study, &answers)?;
            writeln!(
                out,
                "stored {} answers; {} respondents and {} items still missing",
                answers.len(),
                report.missing_respondents.len(),
                report.missing_items.len()
            )?;
        }
        Command::Analyze { study } => {
            let outcome = svc.analyze(study)?;
            print_summary(out, study, &outcome)?;
        }
        Command::Export {
            study,
            graph,
            format,
            output,
        } => {
            let format = match format {
                Format::Pajek => ExportFormat::Pajek,
                Format::Csv => ExportFormat::Csv,
            };
            let text = svc.export(study, graph, format)?;
            match output {
                Some(path) => std::fs::write(path, text)?,
                None => out.write_all(text.as_bytes())?,
            }
        }
        Command::Report { study, pseudonym } => {
            let ind = svc.individual_by_pseudonym(study, pseudonym)?;
            writeln!(out, "{}\n\n{}", ind.report.friendship_paragraph, ind.report.consumption_paragraph)?;
        }
        Command::Serve(_) => return Err(CliError::Input("use `serve` through the binary".into())),
    }
    Ok(())
}

pub async fn serve(data_dir: PathBuf, args: &ServeArgs) -> Result<(), CliError> {
    let svc = Arc::new(Service::open(data_dir)?);
    let app = crate::api::router(svc, args.assets.clone());
    let addr = SocketAddr::new(args.host, args.port);
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, app).await?;
    Ok(())
}
