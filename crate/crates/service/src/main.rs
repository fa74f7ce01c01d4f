use std::net::SocketAddr;
use std::path::PathBuf;

use clap::Parser;

use shuttlemap_core::config::FileConfig;
use shuttlemap_service::{serve, AppState};

/// Qubit-mapping service for multi-trap trapped-ion machines.
#[derive(Parser)]
#[command(version, about)]
struct Args {
    /// Address to listen on.
    #[arg(long, default_value = "127.0.0.1:7200")]
    bind: SocketAddr,

    /// TOML config file with default topology/fidelity/policy sections.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[tokio::main]
async fn main() -> anyhow::Result<()> {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env()
                .unwrap_or_else(|_| "info".into()),
        )
        .init();

    let args = Args::parse();
    let defaults = match &args.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    serve(AppState::new(defaults), args.bind).await
}
