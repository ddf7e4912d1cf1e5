use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::Parser;
use railgrid_designer::journal::{replay, Journal};
use railgrid_designer::{router, AppState, DEFAULT_CLOSURE_BOUND};

#[derive(Parser, Debug)]
#[command(name = "railgrid-designer", version, about = "HTTP service for interactive circuit design")]
struct Args {
    #[arg(long, default_value = "127.0.0.1:8080")]
    bind: SocketAddr,
    /// JSON-lines journal; existing sessions are restored from it.
    #[arg(long)]
    journal: Option<PathBuf>,
    /// Largest `max` accepted by the closure search.
    #[arg(long, default_value_t = DEFAULT_CLOSURE_BOUND)]
    closure_bound: usize,
}

#[tokio::main]
async fn main() -> ExitCode {
    let args = Args::parse();
    let mut state = AppState::new(args.closure_bound, None);
    if let Some(path) = &args.journal {
        let restored = match replay(path) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("railgrid-designer: {e}");
                return ExitCode::FAILURE;
            }
        };
        let journal = match Journal::open(path) {
            Ok(j) => j,
            Err(e) => {
                eprintln!("railgrid-designer: {}: {e}", path.display());
                return ExitCode::FAILURE;
            }
        };
        eprintln!("restored {} sessions", restored.len());
        state = AppState::new(args.closure_bound, Some(journal)).with_sessions(restored);
    }
    let listener = match tokio::net::TcpListener::bind(args.bind).await {
        Ok(l) => l,
        Err(e) => {
            eprintln!("railgrid-designer: cannot bind {}: {e}", args.bind);
            return ExitCode::FAILURE;
        }
    };
    eprintln!("listening on {}", args.bind);
    if let Err(e) = axum::serve(listener, router(Arc::new(state))).await {
        eprintln!("railgrid-designer: {e}");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
